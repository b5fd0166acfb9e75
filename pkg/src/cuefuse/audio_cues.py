"""Prosodic feature extraction and audio emphasis detection.

Short-time analysis of mono speech: RMS loudness, fundamental frequency via
normalized autocorrelation, and the Hammarberg spectral-balance index. Each
series is z-scored across the clip and frames exceeding a threshold become
audio cue events.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AllUndefined, AudioTooShort, TooFewValues
from .timeline import CueEvent, CueKind, Modality, TimeInterval

AUDIO_KINDS = (CueKind.LOUDNESS, CueKind.PITCH, CueKind.TONALITY)


@dataclass(frozen=True)
class AudioBuffer:
    """Mono PCM samples scaled to [-1, 1]."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        if self.samples.ndim != 1:
            raise ValueError("AudioBuffer is mono: samples must be 1-D")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class Frames:
    """Short-time analysis frames (rows) with their center times."""

    data: np.ndarray        # (n_frames, frame_len), tail frames zero-padded
    frame_times: np.ndarray  # window centers, seconds
    hop: float               # seconds
    sample_rate: int


@dataclass(frozen=True)
class FeatureSeries:
    """One value per analysis frame; NaN marks undefined (e.g. unvoiced F0)."""

    kind: CueKind
    values: np.ndarray
    frame_times: np.ndarray
    hop: float


@dataclass(frozen=True)
class ZScoreSeries:
    """Standardized feature series; mu/sigma taken over defined frames only."""

    kind: CueKind
    z: np.ndarray
    frame_times: np.ndarray
    hop: float
    mu: float
    sigma: float
    degenerate_flat: bool = False  # sigma ~ 0, all z forced to 0


@dataclass(frozen=True)
class AudioConfig:
    win: float = 0.025
    hop: float = 0.010
    f_min: float = 60.0
    f_max: float = 400.0
    voicing_threshold: float = 0.45
    silence_floor: float = 1e-4   # RMS below this is treated as unvoiced
    z_threshold: float = 1.5
    # optional per-kind overrides of z_threshold, keyed by CueKind
    kind_thresholds: dict = field(default_factory=dict)

    def threshold_for(self, kind: CueKind) -> float:
        return float(self.kind_thresholds.get(kind, self.z_threshold))


def frame_signal(audio: AudioBuffer, win: float = 0.025, hop: float = 0.010) -> Frames:
    """Slice a signal into overlapping frames.

    Frames start every hop seconds; the trailing partial frames are
    zero-padded so the frame count is ceil(n_samples / hop_samples).
    Frame times are window centers.
    """
    if not win >= hop > 0:
        raise ValueError("need win >= hop > 0")
    sr = audio.sample_rate
    win_n = int(round(win * sr))
    hop_n = int(round(hop * sr))
    if win_n < 2:
        raise ValueError("window shorter than 2 samples")
    n = len(audio.samples)
    n_frames = math.ceil(n / hop_n)
    if n_frames < 1:
        raise AudioTooShort(f"{n} samples yield no analysis frame")
    data = np.zeros((n_frames, win_n))
    for k in range(n_frames):
        chunk = audio.samples[k * hop_n: k * hop_n + win_n]
        data[k, : len(chunk)] = chunk
    times = (np.arange(n_frames) * hop_n + win_n / 2) / sr
    return Frames(data=data, frame_times=times, hop=hop_n / sr, sample_rate=sr)


def rms_energy(frames: Frames) -> FeatureSeries:
    """Per-frame root mean square amplitude."""
    if frames.data.shape[0] == 0:
        raise AudioTooShort("no frames")
    values = np.sqrt(np.mean(frames.data ** 2, axis=1))
    return FeatureSeries(CueKind.LOUDNESS, values, frames.frame_times, frames.hop)


def _nccf(frames: np.ndarray, max_lag: int) -> np.ndarray:
    """Normalized cross-correlation for lags 0..max_lag, batched over frames.

    r[tau] = sum(x[t] x[t+tau]) / sqrt(E(x[:n-tau]) E(x[tau:])), so a pure
    tone scores ~1 at its period regardless of frame tapering or amplitude.
    """
    f, n = frames.shape
    nfft = 1 << (2 * n - 1).bit_length()
    spec = np.fft.rfft(frames, nfft, axis=1)
    acf = np.fft.irfft(spec * np.conj(spec), nfft, axis=1)[:, : max_lag + 1]
    csum = np.concatenate([np.zeros((f, 1)), np.cumsum(frames ** 2, axis=1)], axis=1)
    total = csum[:, -1:]
    lags = np.arange(max_lag + 1)
    e_head = csum[:, n - lags]          # energy of x[0 : n-tau]
    e_tail = total - csum[:, lags]      # energy of x[tau : n]
    return acf / np.sqrt(e_head * e_tail + 1e-12)


def estimate_pitch(frames: Frames, f_min: float = 60.0, f_max: float = 400.0,
                   voicing_threshold: float = 0.45,
                   silence_floor: float = 1e-4) -> FeatureSeries:
    """F0 per frame from the normalized autocorrelation peak.

    Candidate lags cover [sr/f_max, sr/f_min]. Among local maxima within 10%
    of the strongest one, the shortest lag wins (suppresses octave-down
    picks on periodic signals); the winning lag is refined by parabolic
    interpolation. Frames whose best correlation is below the voicing
    threshold, or whose RMS is below the silence floor, are NaN (unvoiced).
    """
    sr = frames.sample_rate
    n = frames.data.shape[1]
    lag_min = max(2, int(math.floor(sr / f_max)))
    lag_max = min(int(math.ceil(sr / f_min)), n - 2)
    if lag_max <= lag_min:
        raise ValueError("frame too short for the requested pitch range")

    r = _nccf(frames.data, lag_max + 1)
    rms = np.sqrt(np.mean(frames.data ** 2, axis=1))

    values = np.full(frames.data.shape[0], np.nan)
    for i in range(frames.data.shape[0]):
        if rms[i] < silence_floor:
            continue
        seg = r[i]
        window = seg[lag_min: lag_max + 1]
        best = float(np.max(window))
        if best < voicing_threshold:
            continue
        # local maxima over the search range, using one lag of margin each side
        tau_candidates = [
            t for t in range(lag_min, lag_max + 1)
            if seg[t] >= seg[t - 1] and seg[t] >= seg[t + 1]
            and seg[t] >= 0.9 * best
        ]
        if not tau_candidates:
            tau_candidates = [lag_min + int(np.argmax(window))]
        tau = tau_candidates[0]
        denom = seg[tau - 1] - 2 * seg[tau] + seg[tau + 1]
        if abs(denom) > 1e-12:
            delta = 0.5 * (seg[tau - 1] - seg[tau + 1]) / denom
            delta = float(np.clip(delta, -0.5, 0.5))
        else:
            delta = 0.0
        values[i] = sr / (tau + delta)
    return FeatureSeries(CueKind.PITCH, values, frames.frame_times, frames.hop)


def interpolate_contour(series: FeatureSeries) -> FeatureSeries:
    """Fill NaN gaps linearly; leading/trailing gaps take the nearest value."""
    values = np.asarray(series.values, dtype=np.float64)
    defined = ~np.isnan(values)
    if not defined.any():
        raise AllUndefined(f"{series.kind.value} series has no defined values")
    idx = np.arange(len(values), dtype=np.float64)
    filled = np.interp(idx, idx[defined], values[defined])
    return FeatureSeries(series.kind, filled, series.frame_times, series.hop)


def hammarberg_index(frames: Frames) -> FeatureSeries:
    """Spectral balance per frame: 20*log10(peak|0-2kHz| / peak|2-5kHz|).

    Magnitudes come from a Hann-windowed DFT of each frame; both band peaks
    are floored at 1e-10 so silent frames stay finite.
    """
    sr = frames.sample_rate
    if sr < 10_000:
        raise ValueError("sample rate must be >= 10 kHz for the 2-5 kHz band")
    n = frames.data.shape[1]
    window = np.hanning(n)
    mags = np.abs(np.fft.rfft(frames.data * window, axis=1))
    freqs = np.fft.rfftfreq(n, 1.0 / sr)
    low = freqs <= 2000.0
    high = (freqs > 2000.0) & (freqs <= 5000.0)
    low_peak = np.maximum(mags[:, low].max(axis=1), 1e-10)
    high_peak = np.maximum(mags[:, high].max(axis=1), 1e-10)
    values = 20.0 * np.log10(low_peak / high_peak)
    return FeatureSeries(CueKind.TONALITY, values, frames.frame_times, frames.hop)


def zscore(series: FeatureSeries) -> ZScoreSeries:
    """Standardize a series over its defined frames (population std-dev).

    A flat series (sigma < 1e-12) yields all-zero z with the degenerate
    flag set instead of dividing by ~0.
    """
    values = np.asarray(series.values, dtype=np.float64)
    defined = ~np.isnan(values)
    if defined.sum() < 2:
        raise TooFewValues("z-score needs at least 2 defined values")
    mu = float(values[defined].mean())
    sigma = float(values[defined].std())  # population form
    z = np.full_like(values, np.nan)
    if sigma < 1e-12:
        z[defined] = 0.0
        return ZScoreSeries(series.kind, z, series.frame_times, series.hop,
                            mu, sigma, degenerate_flat=True)
    z[defined] = (values[defined] - mu) / sigma
    return ZScoreSeries(series.kind, z, series.frame_times, series.hop, mu, sigma)


def detect_audio_cues(z_series: list[ZScoreSeries] | ZScoreSeries,
                      z_threshold: float | dict = 1.5) -> list[CueEvent]:
    """Emit one cue event per maximal run of frames with z above threshold.

    The event interval spans the run's frame centers (a single-frame run is
    a zero-length event); strength is the run's maximum z. `z_threshold`
    may be a single float or a {CueKind: float} mapping.
    """
    if isinstance(z_series, ZScoreSeries):
        z_series = [z_series]
    events: list[CueEvent] = []
    for series in z_series:
        thr = (z_threshold.get(series.kind, 1.5) if isinstance(z_threshold, dict)
               else float(z_threshold))
        if thr <= 0:
            raise ValueError("z_threshold must be positive")
        hot = np.where(np.nan_to_num(series.z, nan=-np.inf) > thr)[0]
        for i0, i1 in _runs(hot):
            seg = series.z[i0: i1 + 1]
            events.append(CueEvent(
                modality=Modality.AUDIO,
                kind=series.kind,
                time=TimeInterval(float(series.frame_times[i0]),
                                  float(series.frame_times[i1])),
                strength=float(np.nanmax(seg)),
            ))
    events.sort(key=lambda e: (e.time.start, e.time.end, e.kind.value))
    return events


def _runs(indices: np.ndarray):
    """Yield (first, last) for each maximal run of consecutive indices."""
    if len(indices) == 0:
        return
    start = prev = int(indices[0])
    for i in indices[1:]:
        i = int(i)
        if i == prev + 1:
            prev = i
            continue
        yield start, prev
        start = prev = i
    yield start, prev


@dataclass(frozen=True)
class AudioCueResult:
    features: dict          # CueKind -> FeatureSeries (pitch pre-interpolation)
    interpolated_pitch: FeatureSeries
    zscores: dict           # CueKind -> ZScoreSeries
    cues: list


def extract_feature_series(audio: AudioBuffer, config: AudioConfig = AudioConfig()) -> dict:
    """Raw loudness/pitch/tonality series for a clip."""
    frames = frame_signal(audio, config.win, config.hop)
    return {
        CueKind.LOUDNESS: rms_energy(frames),
        CueKind.PITCH: estimate_pitch(frames, config.f_min, config.f_max,
                                      config.voicing_threshold, config.silence_floor),
        CueKind.TONALITY: hammarberg_index(frames),
    }


def audio_cue_events(audio: AudioBuffer, config: AudioConfig = AudioConfig()) -> AudioCueResult:
    """Full audio path: features, z-scores, and threshold-crossing cues.

    Only the pitch contour is gap-interpolated before z-scoring; loudness
    and tonality have no undefined frames.
    """
    features = extract_feature_series(audio, config)
    pitch_filled = interpolate_contour(features[CueKind.PITCH])
    zscores = {
        CueKind.LOUDNESS: zscore(features[CueKind.LOUDNESS]),
        CueKind.PITCH: zscore(pitch_filled),
        CueKind.TONALITY: zscore(features[CueKind.TONALITY]),
    }
    thresholds = {k: config.threshold_for(k) for k in AUDIO_KINDS}
    cues = detect_audio_cues(list(zscores.values()), thresholds)
    return AudioCueResult(features=features, interpolated_pitch=pitch_filled,
                          zscores=zscores, cues=cues)
