"""Sentence weighting, adaptive-threshold selection, and diversity filtering.

The multimodal summarizer weights sentences by bonus-word frequency, keeps
those at or above theta = mean + lambda*std (population std-dev, lambda
defaults to 0.3), then runs a greedy diversity pass. The published literal
diversity condition (max TF-IDF cosine * delta < 0.5 with delta = 0.2) can
never reject anything since cosine <= 1; it is implemented verbatim, with a
strict variant (reject when similarity >= 0.5) available as the plausible
intent. A classical term-frequency/position/cue-phrase summarizer serves as
the baseline.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import SchemaError
from .text_cues import default_stopwords, tokenize
from .timeline import (Segment, TimedSentence, TimedWord, TimeInterval, Transcript,
                       VideoMeta, merge_adjacent, to_frame_range)

SUMMARY_SCHEMA = "cuefuse-summary/1"


class DiversityMode(Enum):
    LITERAL = "literal"
    STRICT = "strict"


class WeightsMode(Enum):
    UNIFORM = "uniform"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class SummaryConfig:
    threshold_factor: float = 0.3    # lambda in theta = mean + lambda*std
    diversity_factor: float = 0.2    # delta in the literal diversity check
    diversity_mode: DiversityMode = DiversityMode.LITERAL
    strict_sim_threshold: float = 0.5
    weights_mode: WeightsMode = WeightsMode.UNIFORM

    def __post_init__(self):
        if self.threshold_factor < 0 or self.diversity_factor < 0:
            raise ValueError("threshold and diversity factors must be >= 0")
        if not 0 < self.strict_sim_threshold <= 1:
            raise ValueError("strict_sim_threshold must be in (0, 1]")


@dataclass(frozen=True)
class SentenceWeights:
    weights: tuple[float, ...]
    theta: float
    degenerate: bool = False  # every weight zero: threshold passes everything


@dataclass(frozen=True)
class Summary:
    video_id: str
    selected: tuple[TimedSentence, ...]   # transcript order preserved
    text: str
    segments: tuple[Segment, ...]         # one per selected sentence, unmerged
    weights: tuple[float, ...]            # per transcript sentence
    theta: float
    method: str = "multimodal"


def sentence_weights(transcript: Transcript, bonus: list,
                     config: SummaryConfig = SummaryConfig()) -> SentenceWeights:
    """Per-sentence bonus-word mass and the adaptive threshold theta.

    Weight of a sentence is the number of bonus-word occurrences among its
    tokens (scaled by each bonus word's modality weight in WEIGHTED mode).
    """
    if not transcript.sentences:
        raise ValueError("transcript has no sentences")
    weighted = config.weights_mode is WeightsMode.WEIGHTED
    weights = []
    for sentence in transcript.sentences:
        counts = Counter(sentence.tokens)
        w = 0.0
        for b in bonus:
            w += counts.get(b.token, 0) * (b.weight if weighted else 1.0)
        weights.append(w)
    arr = np.asarray(weights)
    theta = float(arr.mean() + config.threshold_factor * arr.std())
    return SentenceWeights(weights=tuple(weights), theta=theta,
                           degenerate=bool(np.all(arr == 0.0)))


def select_candidates(transcript: Transcript, weights: SentenceWeights) -> list[TimedSentence]:
    """Sentences whose weight reaches theta, in transcript order."""
    return [s for s, w in zip(transcript.sentences, weights.weights)
            if w >= weights.theta]


def _tfidf_vectors(token_lists: list[list[str]], stopwords: frozenset) -> list[dict]:
    """Sparse TF-IDF vectors over the candidates' own vocabulary."""
    n = len(token_lists)
    df = Counter()
    for tokens in token_lists:
        df.update({t for t in tokens if t not in stopwords})
    vectors = []
    for tokens in token_lists:
        counts = Counter(t for t in tokens if t not in stopwords)
        vectors.append({t: c * (math.log((1 + n) / (1 + df[t])) + 1.0)
                        for t, c in counts.items()})
    return vectors


def _cosine(a: dict, b: dict) -> float:
    dot = sum(v * b.get(t, 0.0) for t, v in a.items())
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def diversity_filter(candidates: list[TimedSentence],
                     config: SummaryConfig = SummaryConfig(),
                     stopwords: frozenset | None = None) -> list[TimedSentence]:
    """Greedy in-order scan keeping sentences that pass the diversity check.

    LITERAL keeps s when max_sim * diversity_factor < 0.5 (vacuously true
    for the default factor); STRICT keeps s when max_sim <
    strict_sim_threshold. The first candidate is always kept.
    """
    if not candidates:
        return []
    if stopwords is None:
        stopwords = default_stopwords()
    vectors = _tfidf_vectors([list(s.tokens) for s in candidates], stopwords)
    kept: list[int] = [0]
    for i in range(1, len(candidates)):
        max_sim = max(_cosine(vectors[i], vectors[j]) for j in kept)
        if config.diversity_mode is DiversityMode.LITERAL:
            keep = max_sim * config.diversity_factor < 0.5
        else:
            keep = max_sim < config.strict_sim_threshold
        if keep:
            kept.append(i)
    return [candidates[i] for i in kept]


def _sentence_segment(sentence: TimedSentence, meta: VideoMeta) -> Segment:
    return Segment(interval=sentence.interval,
                   frame_range=to_frame_range(sentence.interval, meta),
                   sentence_indices=(sentence.index,),
                   text=sentence.text)


def summarize(transcript: Transcript, bonus: list, config: SummaryConfig,
              meta: VideoMeta) -> Summary:
    """Weighting, thresholding and diversity filtering end to end.

    With no bonus words every weight is zero, theta is zero, and the whole
    transcript passes; callers should surface that degenerate condition.
    """
    weights = sentence_weights(transcript, bonus, config)
    candidates = select_candidates(transcript, weights)
    selected = diversity_filter(candidates, config)
    return Summary(
        video_id=transcript.video_id,
        selected=tuple(selected),
        text=" ".join(s.text for s in selected),
        segments=tuple(_sentence_segment(s, meta) for s in selected),
        weights=weights.weights,
        theta=weights.theta,
        method="multimodal",
    )


def compile_segments(summary: Summary, meta: VideoMeta,
                     gap_tolerance: float = 0.25) -> list[Segment]:
    """Per-sentence segments merged into a clean chronological cut-list."""
    segments = sorted(summary.segments, key=lambda s: s.interval.start)
    return merge_adjacent(segments, gap_tolerance)


# --- Edmundson baseline ---

@dataclass(frozen=True)
class EdmundsonCues:
    bonus: frozenset = field(default_factory=frozenset)   # phrases, lowercase
    stigma: frozenset = field(default_factory=frozenset)


def default_edmundson_cues() -> EdmundsonCues:
    bonus, stigma = set(), set()
    text = resources.files("cuefuse.data").joinpath("edmundson_cues.tsv") \
        .read_text(encoding="utf-8")
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        phrase, polarity = line.split("\t")
        (bonus if polarity == "bonus" else stigma).add(phrase)
    return EdmundsonCues(bonus=frozenset(bonus), stigma=frozenset(stigma))


def _phrase_count(tokens: list[str], phrase: str) -> int:
    needle = tokenize(phrase)
    if not needle or len(needle) > len(tokens):
        return 0
    return sum(1 for i in range(len(tokens) - len(needle) + 1)
               if tokens[i:i + len(needle)] == needle)


def edmundson_summarize(transcript: Transcript, cue_words: EdmundsonCues | None,
                        target_ratio: float, meta: VideoMeta,
                        stopwords: frozenset | None = None,
                        key_terms: int = 5) -> Summary:
    """Classical extractive baseline: term frequency + position + cue phrases.

    Each feature is normalized to its maximum over the transcript and the
    three are summed with equal weight. Position scores 1 at both ends and
    decays linearly toward the middle. The top ceil(target_ratio * n)
    sentences are returned in transcript order; ties favor earlier ones.
    """
    if not 0 < target_ratio <= 1:
        raise ValueError("target_ratio must be in (0, 1]")
    if cue_words is None:
        cue_words = default_edmundson_cues()
    if stopwords is None:
        stopwords = default_stopwords()

    sentences = transcript.sentences
    n = len(sentences)
    token_lists = [list(s.tokens) for s in sentences]

    tf = Counter()
    for tokens in token_lists:
        tf.update(t for t in tokens if t not in stopwords)
    top_terms = {t for t, _ in sorted(tf.items(), key=lambda kv: (-kv[1], kv[0]))[:key_terms]}

    key_raw = [sum(c for t, c in Counter(tokens).items() if t in top_terms)
               for tokens in token_lists]
    key_max = max(key_raw) if key_raw else 0
    key_score = [k / key_max if key_max else 0.0 for k in key_raw]

    if n == 1:
        pos_score = [1.0]
    else:
        mid = (n - 1) / 2
        pos_score = [1.0 - min(i, n - 1 - i) / mid for i in range(n)]

    cue_raw = [sum(_phrase_count(tokens, p) for p in cue_words.bonus)
               - sum(_phrase_count(tokens, p) for p in cue_words.stigma)
               for tokens in token_lists]
    cue_max = max((abs(c) for c in cue_raw), default=0)
    cue_score = [c / cue_max if cue_max else 0.0 for c in cue_raw]

    scores = [k + p + c for k, p, c in zip(key_score, pos_score, cue_score)]
    take = math.ceil(target_ratio * n)
    order = sorted(range(n), key=lambda i: (-scores[i], i))[:take]
    chosen = sorted(order)

    selected = [sentences[i] for i in chosen]
    return Summary(
        video_id=transcript.video_id,
        selected=tuple(selected),
        text=" ".join(s.text for s in selected),
        segments=tuple(_sentence_segment(s, meta) for s in selected),
        weights=tuple(scores),
        theta=min((scores[i] for i in chosen), default=0.0),
        method="edmundson",
    )


# --- summary JSON round-trip ---

def dump_summary(summary: Summary, path) -> None:
    doc = {
        "schema": SUMMARY_SCHEMA,
        "video_id": summary.video_id,
        "method": summary.method,
        "sentences": [{"index": s.index, "start": s.interval.start,
                       "end": s.interval.end, "text": s.text,
                       "words": [{"w": w.text, "start": w.interval.start,
                                  "end": w.interval.end} for w in s.words]}
                      for s in summary.selected],
        "segments": [{"start": seg.interval.start, "end": seg.interval.end,
                      "first_frame": seg.frame_range[0], "last_frame": seg.frame_range[1],
                      "sentence_indices": list(seg.sentence_indices), "text": seg.text}
                     for seg in summary.segments],
        "weights": list(summary.weights),
        "theta": summary.theta,
    }
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=1)
        fh.write("\n")


def load_summary(path) -> Summary:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: unreadable JSON ({exc})") from exc
    tag = doc.get("schema")
    if tag is not None and tag != SUMMARY_SCHEMA:
        raise SchemaError(f"{path}: schema '{tag}', expected '{SUMMARY_SCHEMA}'")
    for key in ("video_id", "sentences", "segments", "weights", "theta"):
        if key not in doc:
            raise SchemaError(f"{path}: missing field '{key}'")
    selected = tuple(
        TimedSentence(
            words=tuple(TimedWord(text=w["w"],
                                  interval=TimeInterval(w["start"], w["end"]))
                        for w in s["words"]),
            interval=TimeInterval(s["start"], s["end"]),
            index=int(s["index"]))
        for s in doc["sentences"])
    segments = tuple(
        Segment(interval=TimeInterval(g["start"], g["end"]),
                frame_range=(int(g["first_frame"]), int(g["last_frame"])),
                sentence_indices=tuple(g["sentence_indices"]),
                text=g["text"])
        for g in doc["segments"])
    return Summary(video_id=doc["video_id"], selected=selected,
                   text=" ".join(s.text for s in selected),
                   segments=segments, weights=tuple(doc["weights"]),
                   theta=float(doc["theta"]), method=doc.get("method", "multimodal"))
