#!/usr/bin/env python3
"""From transcript words to bonus words.

Builds a tiny time-aligned transcript, extracts keywords three ways
(TF-IDF, sentiment intensity, entities), then aligns audio and visual cue
events onto the word timeline. Words backed by more than one modality come
out as weighted bonus words.
"""

from cuefuse import (CueEvent, CueKind, FusionConfig, Modality, TimedSentence,
                     TimedWord, TimeInterval, Transcript, align_words_to_cues,
                     select_bonus_words, textual_cue_events)


def sentence(text, start, index, dur=0.5):
    words, t = [], start
    for w in text.split():
        words.append(TimedWord(text=w, interval=TimeInterval(t, t + dur)))
        t += dur
    return TimedSentence(words=tuple(words), interval=TimeInterval(start, t),
                         index=index)


transcript = Transcript(video_id="demo", sentences=(
    sentence("I moved to Oulu for a wonderful new job", 0.0, 0),
    sentence("The winters are long but the people are great", 5.0, 1),
    sentence("My team builds tools for video research", 10.5, 2),
))

keywords, text_cues = textual_cue_events(transcript)
print("Keywords (token -> sources, score):")
for token in keywords.tokens():
    entry = keywords.entries[token]
    sources = "+".join(sorted(k.value for k in entry.sources))
    print(f"  {token:10s} {sources:16s} {entry.score:.3f}")

# an emphatic pitch rise over "wonderful" and a head move over "great"
wonderful = transcript.sentences[0].words[5].interval
great = transcript.sentences[1].words[8].interval
cues = text_cues + [
    CueEvent(Modality.AUDIO, CueKind.PITCH,
             TimeInterval(wonderful.start + 0.1, wonderful.end - 0.1), 2.1),
    CueEvent(Modality.VISUAL, CueKind.HEAD_MOVE,
             TimeInterval(great.start + 0.1, great.end - 0.1), 1.8),
]

alignment = align_words_to_cues(transcript, cues, tolerance=0.25)
bonus = select_bonus_words(transcript, alignment, keywords,
                           config=FusionConfig())

print("\nBonus words (multimodal coincidence):")
for b in bonus:
    mods = "+".join(sorted(m.value for m in b.modalities))
    times = ", ".join(f"[{w.interval.start:.1f}, {w.interval.end:.1f}]"
                      for w in b.occurrences)
    print(f"  {b.token:10s} {mods:22s} weight {b.weight:.1f}  at {times}")
