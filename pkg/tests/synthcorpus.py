"""Synthetic clip generator for end-to-end tests.

Each clip is a short interview-style recording built so that its reference
summary is, by construction, exactly the sentences containing multimodally
emphasized words: those words get a pitch/loudness burst in the audio, a
nose-position jump in the pose stream, and an emotion flip, all at the same
instant. Every token in a clip is unique, so no bonus-word mass can leak
across sentences.
"""

import json
import random
from pathlib import Path

import numpy as np

from cuefuse.audio_cues import AudioBuffer
from cuefuse.ingest import dump_wav

SAMPLE_RATE = 16_000
WORD_DUR = 0.35
WORD_GAP = 0.30
SENTENCE_GAP = 0.40
LEAD_IN = 0.50

BASE_FREQ = 120.0
BASE_AMP = 0.15
EMPH_FREQ = 240.0
EMPH_AMP = 0.75

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"


def _pseudo_word(rng: random.Random, syllables: int = 3) -> str:
    return "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS)
                   for _ in range(syllables))


def make_clip(out_dir: Path, video_id: str, seed: int, n_sentences: int = 6,
              words_per_sentence: int = 4, n_emphasized: int = 2,
              fps: float = 24.0) -> dict:
    """Write one clip's artifact files; returns its manifest record."""
    rng = random.Random(seed)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    used = set()

    def fresh_word():
        while True:
            w = _pseudo_word(rng)
            if w not in used:
                used.add(w)
                return w

    emphasized = sorted(rng.sample(range(n_sentences), n_emphasized))
    target_positions = (1, 3)  # two emphasized words per emphasized sentence

    sentences = []
    emph_spans = []  # (start, end) of emphasized words
    t = LEAD_IN
    for idx in range(n_sentences):
        words = []
        for pos in range(words_per_sentence):
            start = t + pos * (WORD_DUR + WORD_GAP)
            entry = {"w": fresh_word(), "start": round(start, 6),
                     "end": round(start + WORD_DUR, 6)}
            if idx in emphasized and pos in target_positions:
                emph_spans.append((entry["start"], entry["end"]))
            words.append(entry)
        sentences.append({"index": idx, "start": words[0]["start"],
                          "end": words[-1]["end"], "words": words})
        t = words[-1]["end"] + SENTENCE_GAP

    duration = round(t - SENTENCE_GAP + 0.6, 2)

    transcript_path = out_dir / f"{video_id}.transcript.json"
    with open(transcript_path, "w", encoding="utf-8") as fh:
        json.dump({"schema": "cuefuse-transcript/1", "video_id": video_id,
                   "sentences": sentences}, fh, indent=1)
        fh.write("\n")

    # audio: base tone everywhere, louder higher tone across emphasized words
    n = int(duration * SAMPLE_RATE)
    tt = np.arange(n) / SAMPLE_RATE
    freq = np.full(n, BASE_FREQ)
    amp = np.full(n, BASE_AMP)
    for start, end in emph_spans:
        sel = (tt >= start) & (tt < end)
        freq[sel] = EMPH_FREQ
        amp[sel] = EMPH_AMP
    phase = 2 * np.pi * np.cumsum(freq) / SAMPLE_RATE
    dump_wav(AudioBuffer(amp * np.sin(phase), SAMPLE_RATE),
             out_dir / f"{video_id}.wav")

    # visual streams at 1 fps: static nose except a jump at each emphasis
    n_frames = int(duration) + 1
    jump_seconds = sorted({min(int((a + b) / 2), n_frames - 1) for a, b in emph_spans})
    pose_frames = []
    emo_frames = []
    for k in range(n_frames):
        x = 0.65 if k in jump_seconds else 0.5
        pose_frames.append({"i": k, "t": float(k), "nose": {"x": x, "y": 0.5},
                            "conf": 0.95})
        label = "happy" if k in jump_seconds else "neutral"
        emo_frames.append({"i": k, "t": float(k), "label": label, "conf": 0.9})
    with open(out_dir / f"{video_id}.pose.json", "w", encoding="utf-8") as fh:
        json.dump({"schema": "cuefuse-pose/1", "fps_sampled": 1.0,
                   "frames": pose_frames}, fh, indent=1)
        fh.write("\n")
    with open(out_dir / f"{video_id}.emotion.json", "w", encoding="utf-8") as fh:
        json.dump({"schema": "cuefuse-emotion/1", "frames": emo_frames}, fh, indent=1)
        fh.write("\n")

    # reference summary: exactly the emphasized sentences
    entries = [[sentences[i]["start"], sentences[i]["end"],
                " ".join(w["w"] for w in sentences[i]["words"])]
               for i in emphasized]
    with open(out_dir / f"{video_id}.pgt.json", "w", encoding="utf-8") as fh:
        json.dump({"schema": "cuefuse-pgt/1", "entries": entries}, fh, indent=1)
        fh.write("\n")

    return {
        "video_id": video_id,
        "fps": fps,
        "duration": duration,
        "transcript": f"{video_id}.transcript.json",
        "audio": f"{video_id}.wav",
        "pose": f"{video_id}.pose.json",
        "emotion": f"{video_id}.emotion.json",
        "pgt": f"{video_id}.pgt.json",
        "_emphasized": emphasized,  # test-side ground truth, ignored by the loader
    }


def make_corpus(root: Path, n_clips: int = 20, seed: int = 2024) -> Path:
    """Generate a corpus and its manifest; returns the manifest path."""
    root = Path(root)
    records = []
    for k in range(n_clips):
        records.append(make_clip(root, f"clip{k:03d}", seed=seed + k))
    manifest = root / "manifest.json"
    with open(manifest, "w", encoding="utf-8") as fh:
        json.dump(records, fh, indent=1)
        fh.write("\n")
    return manifest
