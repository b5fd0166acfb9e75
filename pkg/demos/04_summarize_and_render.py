#!/usr/bin/env python3
"""One clip end to end, in memory: weights, threshold, summary, outputs.

A six-sentence transcript gets bonus words from synthetic audio/visual
emphasis. Sentence weights, the adaptive threshold, the selected summary,
the re-based subtitles, and the cutter script are all printed.
"""

from cuefuse import (CueEvent, CueKind, Modality, SummaryConfig, TimeInterval,
                     VideoMeta, bonus_words, render_cutlist, render_srt, summarize,
                     textual_cue_events)
from cuefuse.ingest import load_transcript
import pathlib

transcript = load_transcript(pathlib.Path(__file__).parent.parent
                             / "tests" / "fixtures" / "algo1.transcript.json")
meta = VideoMeta(fps=24.0, duration=28.0)

keywords, text_cues = textual_cue_events(transcript)
cues = text_cues + [
    CueEvent(Modality.AUDIO, CueKind.PITCH, TimeInterval(11.3, 11.35), 2.0),
    CueEvent(Modality.VISUAL, CueKind.HEAD_MOVE, TimeInterval(23.9, 23.95), 1.3),
]
bonus = bonus_words(transcript, cues, keywords)
print("Bonus words:", ", ".join(b.token for b in bonus))

summary = summarize(transcript, bonus, SummaryConfig(), meta)
print("\nSentence weights and threshold:")
for s, w in zip(transcript.sentences, summary.weights):
    mark = "<==" if any(sel.index == s.index for sel in summary.selected) else ""
    print(f"  [{s.index}] w={w:.1f}  {s.text[:52]:52s} {mark}")
print(f"  theta = {summary.theta:.4f}")

print("\nSummary text:")
print(" ", summary.text)

print("\nSubtitles (summary timeline):")
print(render_srt(summary))

cutlist, script = render_cutlist(summary, meta, "interview.mp4")
print("Cut list:")
for cut in cutlist.cuts:
    print(f"  [{cut.interval.start:5.1f}, {cut.interval.end:5.1f}] "
          f"frames {cut.frame_range[0]}-{cut.frame_range[1]}")
print("\nCutter script:")
print(script)
