"""Head-movement and emotion-transition cue detection.

Pose frames (normalized nose coordinates) become a displacement series; a
trailing moving-average-plus-k-sigma threshold flags movement bursts.
Emotion frames emit a cue wherever consecutive frames carry distinct labels
with sufficient confidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooFewFrames
from .timeline import CueEvent, CueKind, Modality, TimeInterval


@dataclass(frozen=True)
class DisplacementSeries:
    """Euclidean nose displacement per consecutive pose-frame pair.

    frame_times holds the time of the later frame of each pair; first_time
    is the time of the very first pose frame, kept so cue intervals can
    span back to the frame the motion started from.
    """

    values: np.ndarray
    frame_times: np.ndarray
    first_time: float


@dataclass(frozen=True)
class VisualConfig:
    window: int = 9          # trailing frames for the moving statistics
    k: float = 1.5           # sigma multiplier
    min_conf: float = 0.5    # emotion transition confidence gate
    fixed_lambda: float | None = None  # bypass the dynamic threshold when set


def nose_displacement(poses: list) -> DisplacementSeries:
    """Frame-to-frame Euclidean displacement of the nose landmark."""
    if len(poses) < 2:
        raise TooFewFrames("need at least 2 pose frames")
    xy = np.array([[p.nose_x, p.nose_y] for p in poses])
    d = np.sqrt(((xy[1:] - xy[:-1]) ** 2).sum(axis=1))
    times = np.array([p.time for p in poses])
    return DisplacementSeries(values=d, frame_times=times[1:], first_time=float(times[0]))


def dynamic_threshold(series: DisplacementSeries, window: int = 9, k: float = 1.5) -> np.ndarray:
    """Per-index movement threshold: trailing mean + k * std.

    Each index uses the last `window` values up to and including itself;
    short prefixes fall back to whatever history exists (at least 2 points).
    Index 0 has no history and gets +inf, so it can never trigger.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    if k <= 0:
        raise ValueError("k must be positive")
    v = np.asarray(series.values, dtype=np.float64)
    out = np.full(len(v), np.inf)
    for i in range(1, len(v)):
        tail = v[max(0, i - window + 1): i + 1]
        out[i] = tail.mean() + k * tail.std()
    return out


def fixed_threshold(series: DisplacementSeries, lam: float) -> np.ndarray:
    """Constant displacement threshold, the fixed-lambda alternative."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return np.full(len(series.values), lam)


def detect_head_cues(series: DisplacementSeries, thresholds: np.ndarray) -> list[CueEvent]:
    """Flag displacements exceeding their threshold as head-movement cues.

    Each flagged index yields one event spanning the pose-frame pair that
    produced the displacement, with strength = value / threshold.
    """
    if len(series.values) != len(thresholds):
        raise ValueError("series and thresholds must have equal length")
    events = []
    for i, (value, thr) in enumerate(zip(series.values, thresholds)):
        if value > thr:
            t_prev = series.first_time if i == 0 else float(series.frame_times[i - 1])
            events.append(CueEvent(
                modality=Modality.VISUAL,
                kind=CueKind.HEAD_MOVE,
                time=TimeInterval(t_prev, float(series.frame_times[i])),
                strength=float(value / thr),
            ))
    return events


def detect_emotion_transitions(emotions: list, min_conf: float = 0.5) -> list[CueEvent]:
    """Cue for each label change between consecutive confident frames."""
    events = []
    for prev, cur in zip(emotions, emotions[1:]):
        if prev.label == cur.label:
            continue
        if prev.confidence < min_conf or cur.confidence < min_conf:
            continue
        events.append(CueEvent(
            modality=Modality.VISUAL,
            kind=CueKind.EMOTION_SHIFT,
            time=TimeInterval(prev.time, cur.time),
            strength=float((prev.confidence + cur.confidence) / 2),
        ))
    return events


def visual_cue_events(poses: list, emotions: list,
                      config: VisualConfig = VisualConfig()) -> list[CueEvent]:
    """Full visual path: displacement thresholding plus emotion shifts."""
    cues: list[CueEvent] = []
    if len(poses) >= 2:
        series = nose_displacement(poses)
        if config.fixed_lambda is not None:
            thresholds = fixed_threshold(series, config.fixed_lambda)
        else:
            thresholds = dynamic_threshold(series, config.window, config.k)
        cues.extend(detect_head_cues(series, thresholds))
    if len(emotions) >= 2:
        cues.extend(detect_emotion_transitions(emotions, config.min_conf))
    cues.sort(key=lambda e: (e.time.start, e.time.end, e.kind.value))
    return cues
