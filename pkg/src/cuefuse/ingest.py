"""Loaders for every external artifact the pipeline consumes.

Upstream tools (ASR + forced alignment, pose/emotion extractors, optional
acoustic front-ends, embedding models, reference summaries) are replaced by
files with small JSON schemas, plus plain 16 kHz PCM WAV for audio. Each
loader validates fully before returning: a schema violation raises a typed
error, never a partial object. Matching dump_* writers make every format
round-trip exactly.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .audio_cues import AudioBuffer, FeatureSeries
from .errors import (CorruptHeader, DimensionMismatch, EmptyTranscript, InvalidInterval,
                     NaNEntry, NonMonotoneFrames, SchemaError, TimingError,
                     UnorderedEntries, UnsupportedFormat)
from .timeline import (CueKind, TimedSentence, TimedWord, TimeInterval, Transcript,
                       VideoMeta)

TRANSCRIPT_SCHEMA = "cuefuse-transcript/1"
POSE_SCHEMA = "cuefuse-pose/1"
EMOTION_SCHEMA = "cuefuse-emotion/1"
EMBEDDINGS_SCHEMA = "cuefuse-embeddings/1"
PGT_SCHEMA = "cuefuse-pgt/1"
AUDIO_FEATURES_SCHEMA = "cuefuse-audiofeatures/1"

EMOTION_LABELS = ("happy", "sad", "angry", "fear", "surprise", "disgust", "neutral")

NATIVE_SAMPLE_RATE = 16_000


@dataclass(frozen=True)
class PoseFrame:
    frame_index: int
    time: float
    nose_x: float  # normalized [0, 1]
    nose_y: float
    confidence: float

    @property
    def low_confidence(self) -> bool:
        return self.confidence < 0.5


@dataclass(frozen=True)
class EmotionFrame:
    frame_index: int
    time: float
    label: str  # one of EMOTION_LABELS
    confidence: float

    @property
    def low_confidence(self) -> bool:
        return self.confidence < 0.5


@dataclass(frozen=True)
class TokenEmbeddings:
    tokens: tuple[str, ...]
    vectors: np.ndarray  # (n_tokens, dim)
    dim: int


@dataclass(frozen=True)
class PgtSummary:
    """Reference summary: ordered (interval, sentence) pairs."""

    entries: tuple[tuple[TimeInterval, str], ...]

    @property
    def text(self) -> str:
        return " ".join(sentence for _, sentence in self.entries)

    @property
    def intervals(self) -> list[TimeInterval]:
        return [iv for iv, _ in self.entries]


def _read_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: unreadable JSON ({exc})") from exc


def _write_json(obj, path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=1)
        fh.write("\n")


def _check_schema(doc: dict, expected: str, path) -> None:
    tag = doc.get("schema")
    if tag is not None and tag != expected:
        raise SchemaError(f"{path}: schema '{tag}', expected '{expected}'")


def _require(doc: dict, key: str, path):
    if key not in doc:
        raise SchemaError(f"{path}: missing field '{key}'")
    return doc[key]


# --- transcript ---

def load_transcript(path) -> Transcript:
    """Parse an aligned-transcript JSON file into a Transcript.

    Word timing must be internally consistent: word end >= start, starts
    non-decreasing within a sentence, sentence bounds equal to the first
    and last word, and sentences ordered without overlap.
    """
    doc = _read_json(path)
    _check_schema(doc, TRANSCRIPT_SCHEMA, path)
    video_id = _require(doc, "video_id", path)
    raw_sentences = _require(doc, "sentences", path)
    if not raw_sentences:
        raise EmptyTranscript(f"{path}: no sentences")

    sentences = []
    for pos, s in enumerate(raw_sentences):
        for key in ("index", "start", "end", "words"):
            if key not in s:
                raise SchemaError(f"{path}: sentence {pos} missing '{key}'")
        if s["index"] != pos:
            raise SchemaError(f"{path}: sentence indices must be 0..n-1 consecutive")
        if not s["words"]:
            raise SchemaError(f"{path}: sentence {pos} has no words")
        words = []
        for w in s["words"]:
            for key in ("w", "start", "end"):
                if key not in w:
                    raise SchemaError(f"{path}: word in sentence {pos} missing '{key}'")
            try:
                iv = TimeInterval(float(w["start"]), float(w["end"]))
            except InvalidInterval as exc:
                raise TimingError(f"{path}: word '{w['w']}' in sentence {pos}: {exc}") from exc
            if words and iv.start < words[-1].interval.start:
                raise TimingError(f"{path}: word starts decrease in sentence {pos}")
            words.append(TimedWord(text=str(w["w"]), interval=iv))
        first, last = words[0].interval.start, words[-1].interval.end
        if abs(s["start"] - first) > 1e-6 or abs(s["end"] - last) > 1e-6:
            raise TimingError(
                f"{path}: sentence {pos} bounds [{s['start']}, {s['end']}] "
                f"disagree with its words [{first}, {last}]")
        sentences.append(TimedSentence(words=tuple(words),
                                       interval=TimeInterval(first, last),
                                       index=pos))
    for a, b in zip(sentences, sentences[1:]):
        if b.interval.start < a.interval.end - 1e-9:
            raise TimingError(f"{path}: sentences {a.index} and {b.index} overlap")
    return Transcript(sentences=tuple(sentences), video_id=str(video_id))


def dump_transcript(transcript: Transcript, path) -> None:
    doc = {
        "schema": TRANSCRIPT_SCHEMA,
        "video_id": transcript.video_id,
        "sentences": [
            {
                "index": s.index,
                "start": s.interval.start,
                "end": s.interval.end,
                "words": [{"w": w.text, "start": w.interval.start, "end": w.interval.end}
                          for w in s.words],
            }
            for s in transcript.sentences
        ],
    }
    _write_json(doc, path)


# --- pose / emotion streams ---

def load_pose(path) -> list:
    """Parse a pose stream; low-confidence frames are kept, not dropped
    (dropping would shift the indexing the displacement series relies on).
    """
    doc = _read_json(path)
    _check_schema(doc, POSE_SCHEMA, path)
    poses = []
    for f in _require(doc, "frames", path):
        for key in ("i", "t", "nose", "conf"):
            if key not in f:
                raise SchemaError(f"{path}: pose frame missing '{key}'")
        x, y = f["nose"].get("x"), f["nose"].get("y")
        if x is None or y is None:
            raise SchemaError(f"{path}: nose must carry x and y")
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise SchemaError(f"{path}: nose ({x}, {y}) outside [0,1]")
        if not 0.0 <= f["conf"] <= 1.0:
            raise SchemaError(f"{path}: confidence {f['conf']} outside [0,1]")
        poses.append(PoseFrame(frame_index=int(f["i"]), time=float(f["t"]),
                               nose_x=float(x), nose_y=float(y),
                               confidence=float(f["conf"])))
    _check_times(poses, path)
    return poses


def load_emotion(path) -> list:
    """Parse an emotion stream; labels outside the seven-class set reject."""
    doc = _read_json(path)
    _check_schema(doc, EMOTION_SCHEMA, path)
    emotions = []
    for f in _require(doc, "frames", path):
        for key in ("i", "t", "label", "conf"):
            if key not in f:
                raise SchemaError(f"{path}: emotion frame missing '{key}'")
        if f["label"] not in EMOTION_LABELS:
            raise SchemaError(f"{path}: unknown emotion label '{f['label']}'")
        if not 0.0 <= f["conf"] <= 1.0:
            raise SchemaError(f"{path}: confidence {f['conf']} outside [0,1]")
        emotions.append(EmotionFrame(frame_index=int(f["i"]), time=float(f["t"]),
                                     label=str(f["label"]), confidence=float(f["conf"])))
    _check_times(emotions, path)
    return emotions


def load_visual_streams(pose_path, emotion_path, meta: VideoMeta):
    """Load both visual frame streams and check them against the video."""
    poses = load_pose(pose_path)
    emotions = load_emotion(emotion_path)
    for stream, origin in ((poses, pose_path), (emotions, emotion_path)):
        if stream and stream[-1].time > meta.duration + 0.5:
            raise SchemaError(f"{origin}: frame at {stream[-1].time:.2f}s is past "
                              f"the {meta.duration:.2f}s video")
    return poses, emotions


def _check_times(frames, path) -> None:
    for a, b in zip(frames, frames[1:]):
        if b.time <= a.time:
            raise NonMonotoneFrames(f"{path}: frame times must strictly increase")


def dump_pose(poses: list, path, fps_sampled: float = 1.0) -> None:
    _write_json({
        "schema": POSE_SCHEMA,
        "fps_sampled": fps_sampled,
        "frames": [{"i": p.frame_index, "t": p.time,
                    "nose": {"x": p.nose_x, "y": p.nose_y}, "conf": p.confidence}
                   for p in poses],
    }, path)


def dump_emotion(emotions: list, path) -> None:
    _write_json({
        "schema": EMOTION_SCHEMA,
        "frames": [{"i": e.frame_index, "t": e.time, "label": e.label, "conf": e.confidence}
                   for e in emotions],
    }, path)


# --- audio ---

def load_wav(path) -> AudioBuffer:
    """Parse a RIFF/WAVE file: PCM 16-bit, mono, 16 kHz only.

    Samples are scaled to [-1, 1] by dividing by 32768.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 12 or blob[:4] != b"RIFF" or blob[8:12] != b"WAVE":
        raise CorruptHeader(f"{path}: not a RIFF/WAVE file")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(blob):
        chunk_id = blob[pos:pos + 4]
        (chunk_size,) = struct.unpack("<I", blob[pos + 4:pos + 8])
        body = blob[pos + 8:pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise CorruptHeader(f"{path}: fmt chunk truncated")
            fmt = struct.unpack("<HHIIHH", body[:16])
        elif chunk_id == b"data":
            if len(body) < chunk_size:
                raise CorruptHeader(f"{path}: data chunk truncated")
            data = body
        pos += 8 + chunk_size + (chunk_size & 1)  # chunks are word-aligned

    if fmt is None or data is None:
        raise CorruptHeader(f"{path}: missing fmt or data chunk")
    audio_format, channels, rate, _, _, bits = fmt
    if audio_format != 1:
        raise UnsupportedFormat(f"{path}: compressed/non-PCM format {audio_format}")
    if channels != 1:
        raise UnsupportedFormat(f"{path}: {channels} channels, mono required")
    if bits != 16:
        raise UnsupportedFormat(f"{path}: {bits}-bit samples, 16-bit required")
    if rate != NATIVE_SAMPLE_RATE:
        raise UnsupportedFormat(f"{path}: {rate} Hz, {NATIVE_SAMPLE_RATE} Hz required")

    samples = np.frombuffer(data, dtype="<i2").astype(np.float64) / 32768.0
    return AudioBuffer(samples=samples, sample_rate=rate)


def dump_wav(audio: AudioBuffer, path) -> None:
    """Write mono 16-bit PCM, inverse of load_wav's scaling."""
    ints = np.clip(np.rint(audio.samples * 32768.0), -32768, 32767).astype("<i2")
    data = ints.tobytes()
    header = (b"RIFF" + struct.pack("<I", 36 + len(data)) + b"WAVE"
              + b"fmt " + struct.pack("<IHHIIHH", 16, 1, 1, audio.sample_rate,
                                      audio.sample_rate * 2, 2, 16)
              + b"data" + struct.pack("<I", len(data)))
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(header + data)


# --- token embeddings ---

def load_embeddings(path) -> TokenEmbeddings:
    doc = _read_json(path)
    _check_schema(doc, EMBEDDINGS_SCHEMA, path)
    dim = int(_require(doc, "dim", path))
    items = _require(doc, "items", path)
    tokens = []
    rows = []
    for item in items:
        for key in ("token", "vec"):
            if key not in item:
                raise SchemaError(f"{path}: embedding item missing '{key}'")
        vec = item["vec"]
        if len(vec) != dim:
            raise DimensionMismatch(
                f"{path}: '{item['token']}' has dim {len(vec)}, declared {dim}")
        if any(v is None or math.isnan(v) for v in vec):
            raise NaNEntry(f"{path}: '{item['token']}' contains NaN")
        tokens.append(str(item["token"]))
        rows.append(vec)
    vectors = np.array(rows, dtype=np.float64).reshape(len(rows), dim)
    return TokenEmbeddings(tokens=tuple(tokens), vectors=vectors, dim=dim)


def dump_embeddings(emb: TokenEmbeddings, path) -> None:
    _write_json({
        "schema": EMBEDDINGS_SCHEMA,
        "dim": emb.dim,
        "items": [{"token": t, "vec": list(map(float, v))}
                  for t, v in zip(emb.tokens, emb.vectors)],
    }, path)


# --- reference summaries ---

def load_pgt(path) -> PgtSummary:
    doc = _read_json(path)
    _check_schema(doc, PGT_SCHEMA, path)
    raw = _require(doc, "entries", path)
    entries = []
    for entry in raw:
        if len(entry) != 3:
            raise SchemaError(f"{path}: entry must be [start, end, sentence]")
        start, end, sentence = entry
        if not str(sentence).strip():
            raise SchemaError(f"{path}: empty sentence in entry")
        try:
            iv = TimeInterval(float(start), float(end))
        except InvalidInterval as exc:
            raise SchemaError(f"{path}: {exc}") from exc
        entries.append((iv, str(sentence)))
    for (a, _), (b, _) in zip(entries, entries[1:]):
        if b.start < a.start:
            raise UnorderedEntries(f"{path}: entries not in temporal order")
    return PgtSummary(entries=tuple(entries))


def dump_pgt(pgt: PgtSummary, path) -> None:
    _write_json({
        "schema": PGT_SCHEMA,
        "entries": [[iv.start, iv.end, sentence] for iv, sentence in pgt.entries],
    }, path)


# --- precomputed acoustic features ---

def load_audio_features(path) -> dict:
    """Load per-frame pitch/loudness/tonality computed by an external tool.

    Alternative to WAV ingestion for exact parity with a user's acoustic
    front-end. Pitch may be null (unvoiced). Returns {CueKind: FeatureSeries}.
    """
    doc = _read_json(path)
    _check_schema(doc, AUDIO_FEATURES_SCHEMA, path)
    hop = float(_require(doc, "hop", path))
    frames = _require(doc, "frames", path)
    if not frames:
        raise SchemaError(f"{path}: no feature frames")
    times = []
    cols = {"pitch": [], "loudness": [], "tonality": []}
    for f in frames:
        for key in ("t", "pitch", "loudness", "tonality"):
            if key not in f:
                raise SchemaError(f"{path}: feature frame missing '{key}'")
        times.append(float(f["t"]))
        cols["pitch"].append(np.nan if f["pitch"] is None else float(f["pitch"]))
        cols["loudness"].append(float(f["loudness"]))
        cols["tonality"].append(float(f["tonality"]))
    t = np.array(times)
    if len(t) > 1:
        if np.any(np.diff(t) <= 0):
            raise NonMonotoneFrames(f"{path}: frame times must strictly increase")
        if np.max(np.abs(np.diff(t) - hop)) > 1e-6:
            raise SchemaError(f"{path}: frame times must step by hop={hop}")
    return {
        CueKind.PITCH: FeatureSeries(CueKind.PITCH, np.array(cols["pitch"]), t, hop),
        CueKind.LOUDNESS: FeatureSeries(CueKind.LOUDNESS, np.array(cols["loudness"]), t, hop),
        CueKind.TONALITY: FeatureSeries(CueKind.TONALITY, np.array(cols["tonality"]), t, hop),
    }


def dump_audio_features(series_by_kind: dict, path) -> None:
    pitch = series_by_kind[CueKind.PITCH]
    loud = series_by_kind[CueKind.LOUDNESS]
    tone = series_by_kind[CueKind.TONALITY]
    _write_json({
        "schema": AUDIO_FEATURES_SCHEMA,
        "hop": pitch.hop,
        "frames": [
            {
                "t": float(t),
                "pitch": None if math.isnan(p) else float(p),
                "loudness": float(l),
                "tonality": float(h),
            }
            for t, p, l, h in zip(pitch.frame_times, pitch.values,
                                  loud.values, tone.values)
        ],
    }, path)
