"""Time-aligned domain types and interval arithmetic.

All timestamps are double-precision seconds from the start of the source
video; frame numbers are always derived from seconds, never stored as the
primary representation. Every type here is immutable after construction and
safe to share across workers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from .errors import IntervalOutOfVideo, InvalidInterval

# Zero-length intervals are legal: instantaneous cues (single-frame events)
# are represented as [t, t].


class Modality(Enum):
    AUDIO = "audio"
    VISUAL = "visual"
    TEXTUAL = "textual"


class CueKind(Enum):
    PITCH = "pitch"
    LOUDNESS = "loudness"
    TONALITY = "tonality"
    HEAD_MOVE = "head_move"
    EMOTION_SHIFT = "emotion_shift"
    TFIDF = "tfidf"
    SENTIMENT = "sentiment"
    ENTITY = "entity"


KIND_MODALITY = {
    CueKind.PITCH: Modality.AUDIO,
    CueKind.LOUDNESS: Modality.AUDIO,
    CueKind.TONALITY: Modality.AUDIO,
    CueKind.HEAD_MOVE: Modality.VISUAL,
    CueKind.EMOTION_SHIFT: Modality.VISUAL,
    CueKind.TFIDF: Modality.TEXTUAL,
    CueKind.SENTIMENT: Modality.TEXTUAL,
    CueKind.ENTITY: Modality.TEXTUAL,
}

# Word normalization used everywhere tokens are matched: lowercase, keep
# interior apostrophes ("i'm"), strip everything else.
WORD_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*", re.UNICODE)


def normalize_token(text: str) -> str:
    """Lowercased matching form of a single word ('' if no word chars)."""
    m = WORD_RE.search(text.replace("’", "'").lower())
    return m.group(0) if m else ""


@dataclass(frozen=True)
class TimeInterval:
    start: float  # seconds, >= 0
    end: float    # seconds, >= start

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise InvalidInterval(f"non-finite interval [{self.start}, {self.end}]")
        if self.start < 0 or self.end < self.start:
            raise InvalidInterval(f"bad interval [{self.start}, {self.end}]")

    @property
    def length(self) -> float:
        return self.end - self.start

    def expanded(self, margin: float) -> "TimeInterval":
        """Interval grown by `margin` on both sides, clamped at zero."""
        return TimeInterval(max(0.0, self.start - margin), self.end + margin)

    def contains(self, t: float) -> bool:
        return self.start <= t <= self.end


@dataclass(frozen=True)
class TimedWord:
    text: str  # original surface form
    interval: TimeInterval

    def __post_init__(self):
        if not self.text.strip():
            raise InvalidInterval("empty word text")

    @cached_property
    def norm(self) -> str:
        """Lowercased, punctuation-stripped form used for matching."""
        return normalize_token(self.text)


@dataclass(frozen=True)
class TimedSentence:
    words: tuple[TimedWord, ...]
    interval: TimeInterval
    index: int  # ordinal position in the transcript

    def __post_init__(self):
        if not self.words:
            raise InvalidInterval("sentence needs at least one word")
        starts = [w.interval.start for w in self.words]
        if any(b < a for a, b in zip(starts, starts[1:])):
            raise InvalidInterval(f"sentence {self.index}: word starts decrease")
        if (abs(self.interval.start - self.words[0].interval.start) > 1e-6
                or abs(self.interval.end - self.words[-1].interval.end) > 1e-6):
            raise InvalidInterval(f"sentence {self.index}: interval must span its words")

    @cached_property
    def text(self) -> str:
        return " ".join(w.text for w in self.words)

    @cached_property
    def tokens(self) -> tuple[str, ...]:
        """Normalized word tokens (empty normalizations dropped)."""
        return tuple(w.norm for w in self.words if w.norm)


@dataclass(frozen=True)
class Transcript:
    sentences: tuple[TimedSentence, ...]
    video_id: str

    @property
    def interval(self) -> TimeInterval:
        return TimeInterval(self.sentences[0].interval.start,
                            self.sentences[-1].interval.end)

    @cached_property
    def tokens(self) -> tuple[str, ...]:
        out: list[str] = []
        for s in self.sentences:
            out.extend(s.tokens)
        return tuple(out)

    @property
    def text(self) -> str:
        return " ".join(s.text for s in self.sentences)


@dataclass(frozen=True)
class CueEvent:
    modality: Modality
    kind: CueKind
    time: TimeInterval
    strength: float  # dimensionless, >= 0

    def __post_init__(self):
        if KIND_MODALITY[self.kind] is not self.modality:
            raise InvalidInterval(
                f"cue kind {self.kind.value} inconsistent with modality {self.modality.value}")
        if self.strength < 0:
            raise InvalidInterval("cue strength must be >= 0")


@dataclass(frozen=True)
class Segment:
    interval: TimeInterval
    frame_range: tuple[int, int]  # [first_frame, last_frame], inclusive
    sentence_indices: tuple[int, ...]
    text: str

    def __post_init__(self):
        if self.frame_range[0] > self.frame_range[1]:
            raise InvalidInterval(f"bad frame range {self.frame_range}")


@dataclass(frozen=True)
class VideoMeta:
    fps: float        # source video frame rate
    duration: float   # seconds
    frame_count: int = field(default=0)

    def __post_init__(self):
        if self.fps <= 0 or self.duration < 0:
            raise InvalidInterval("fps must be positive and duration non-negative")
        if self.frame_count == 0:
            object.__setattr__(self, "frame_count", int(round(self.fps * self.duration)))
        if abs(self.frame_count - round(self.fps * self.duration)) > 1:
            raise InvalidInterval(
                f"frame_count {self.frame_count} inconsistent with fps*duration "
                f"{self.fps * self.duration:.2f}")


def overlap(a: TimeInterval, b: TimeInterval) -> float:
    """Length of the intersection of two intervals, in seconds (>= 0)."""
    return max(0.0, min(a.end, b.end) - max(a.start, b.start))


def to_frame_range(interval: TimeInterval, meta: VideoMeta) -> tuple[int, int]:
    """Map a time interval onto inclusive source frame numbers.

    first = floor(start*fps), last = min(ceil(end*fps), frame_count-1).
    Raises IntervalOutOfVideo when the interval starts at/after the last
    frame boundary or ends past the video (+0.5 s slack for alignment
    jitter at clip tails).
    """
    if interval.start * meta.fps >= meta.frame_count:
        raise IntervalOutOfVideo(
            f"interval starts at {interval.start:.3f}s, beyond {meta.frame_count} frames")
    if interval.end > meta.duration + 0.5:
        raise IntervalOutOfVideo(
            f"interval ends at {interval.end:.3f}s, video lasts {meta.duration:.3f}s")
    first = int(math.floor(interval.start * meta.fps))
    last = min(int(math.ceil(interval.end * meta.fps)), meta.frame_count - 1)
    first = min(first, meta.frame_count - 1)
    return first, max(first, last)


def merge_adjacent(segments: list[Segment], gap_tolerance: float = 0.25) -> list[Segment]:
    """Merge segments whose gap is <= gap_tolerance seconds.

    Input must be sorted by start time. Sentence indices and texts of merged
    segments are concatenated in order; the result is sorted and
    non-overlapping. Default tolerance sits below typical inter-word pauses
    so one-frame gaps never survive into a cut-list.
    """
    if not segments:
        return []
    merged = [segments[0]]
    for seg in segments[1:]:
        prev = merged[-1]
        if seg.interval.start - prev.interval.end <= gap_tolerance:
            merged[-1] = Segment(
                interval=TimeInterval(prev.interval.start,
                                      max(prev.interval.end, seg.interval.end)),
                frame_range=(prev.frame_range[0],
                             max(prev.frame_range[1], seg.frame_range[1])),
                sentence_indices=prev.sentence_indices + seg.sentence_indices,
                text=(prev.text + " " + seg.text).strip(),
            )
        else:
            merged.append(seg)
    return merged
