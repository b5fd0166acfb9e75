"""Batch orchestration: manifest in, per-video artifacts and reports out.

Videos are independent 15-second clips, so parallelism is per video only;
results are gathered and written in manifest order, which keeps every
artifact byte-identical across worker counts. A failing video is isolated,
logged, and reported without aborting the batch.
"""

from __future__ import annotations

import json
import logging
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import ingest, render
from .audio_cues import (AUDIO_KINDS, AudioConfig, audio_cue_events, detect_audio_cues,
                         interpolate_contour, zscore)
from .errors import CueFuseError, ManifestError, TooFewVersions
from .fusion import FusionConfig, bonus_words
from .metrics import MetricsReport, evaluate_pair, jaccard
from .summarizer import (Summary, SummaryConfig, default_edmundson_cues,
                         dump_summary, edmundson_summarize, load_summary, summarize)
from .text_cues import (KeywordSet, default_gazetteer, default_lexicon,
                        default_stopwords, load_entities, load_lexicon, tokenize,
                        textual_cue_events)
from .timeline import CueKind, VideoMeta
from .visual_cues import (VisualConfig, dynamic_threshold, fixed_threshold,
                          nose_displacement, visual_cue_events)

log = logging.getLogger("cuefuse.pipeline")

ALL_MODALITIES = frozenset({"text", "audio", "visual"})


@dataclass(frozen=True)
class PipelineConfig:
    manifest: str
    out_dir: str
    modalities: frozenset = ALL_MODALITIES
    summary: SummaryConfig = field(default_factory=SummaryConfig)
    audio: AudioConfig = field(default_factory=AudioConfig)
    visual: VisualConfig = field(default_factory=VisualConfig)
    fusion: FusionConfig = field(default_factory=FusionConfig)
    baseline_ratio: float = 0.3
    workers: int = 1
    top_k: int = 5
    intensity_threshold: float = 0.4
    lexicon_path: str | None = None
    gap_tolerance: float = 0.25
    iou_threshold: float = 0.5
    sample_fps: float = 1.0
    dump_cues: bool = False
    summaries_dir: str | None = None

    def __post_init__(self):
        if not self.modalities or not self.modalities <= ALL_MODALITIES:
            raise ValueError(f"modality mask must be a non-empty subset of {set(ALL_MODALITIES)}")
        if self.workers < 1:
            raise ValueError("worker count must be >= 1")


@dataclass
class VideoResult:
    video_id: str
    summary: Summary | None = None
    report: MetricsReport | None = None
    degenerate_weights: bool = False
    error: str | None = None
    # debug payloads for dump-cues
    audio_debug: dict | None = None
    visual_debug: dict | None = None
    bonus_debug: list | None = None


@dataclass
class BatchResult:
    results: list
    report_rows: list
    failed: list

    @property
    def ok(self) -> bool:
        return not self.failed


def load_manifest(path) -> list[dict]:
    """Read the batch manifest: a JSON array of per-video artifact records."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(f"{path}: {exc}") from exc
    if not isinstance(doc, list):
        raise ManifestError(f"{path}: manifest must be a JSON array")
    base = Path(path).parent
    records = []
    for i, rec in enumerate(doc):
        if "video_id" not in rec or "transcript" not in rec:
            raise ManifestError(f"{path}: record {i} needs video_id and transcript")
        if "fps" not in rec or "duration" not in rec:
            raise ManifestError(f"{path}: record {i} needs fps and duration")
        rec = dict(rec)
        for key in ("transcript", "audio", "audio_features", "pose", "emotion",
                    "entities", "pgt", "candidate_embeddings", "reference_embeddings",
                    "summary"):
            if rec.get(key):
                rec[key] = str((base / rec[key]).resolve())
        if rec.get("pgt_versions"):
            rec["pgt_versions"] = [str((base / p).resolve()) for p in rec["pgt_versions"]]
        records.append(rec)
    return records


def _meta_for(record: dict) -> VideoMeta:
    return VideoMeta(fps=float(record["fps"]), duration=float(record["duration"]),
                     frame_count=int(record.get("frame_count", 0)))


def _collect_cues(record: dict, config: PipelineConfig, transcript, resources: dict):
    """Cue events for the enabled modalities, plus debug payloads."""
    cues = []
    keywords = None
    audio_debug = visual_debug = None

    if "text" in config.modalities:
        annotations = (load_entities(record["entities"])
                       if record.get("entities") else None)
        keywords, text_cues = textual_cue_events(
            transcript,
            lexicon=resources["lexicon"],
            annotations=annotations,
            gazetteer=resources["gazetteer"],
            top_k=config.top_k,
            intensity_threshold=config.intensity_threshold,
            stopwords=resources["stopwords"],
        )
        cues.extend(text_cues)

    if "audio" in config.modalities:
        if record.get("audio_features"):
            # precomputed acoustic frames bypass the DSP path entirely
            features = ingest.load_audio_features(record["audio_features"])
            pitch = interpolate_contour(features[CueKind.PITCH])
            zscores = {
                CueKind.LOUDNESS: zscore(features[CueKind.LOUDNESS]),
                CueKind.PITCH: zscore(pitch),
                CueKind.TONALITY: zscore(features[CueKind.TONALITY]),
            }
            thresholds = {k: config.audio.threshold_for(k) for k in AUDIO_KINDS}
            cues.extend(detect_audio_cues(list(zscores.values()), thresholds))
            audio_debug = {"features": features, "zscores": zscores}
        elif record.get("audio"):
            buffer = ingest.load_wav(record["audio"])
            result = audio_cue_events(buffer, config.audio)
            cues.extend(result.cues)
            audio_debug = {"features": result.features, "zscores": result.zscores}

    if "visual" in config.modalities and (record.get("pose") or record.get("emotion")):
        poses = ingest.load_pose(record["pose"]) if record.get("pose") else []
        emotions = ingest.load_emotion(record["emotion"]) if record.get("emotion") else []
        meta = _meta_for(record)
        for stream in (poses, emotions):
            if stream and stream[-1].time > meta.duration + 0.5:
                raise ManifestError(f"{record['video_id']}: visual frames outlast video")
        cues.extend(visual_cue_events(poses, emotions, config.visual))
        if len(poses) >= 2:
            series = nose_displacement(poses)
            thresholds = (fixed_threshold(series, config.visual.fixed_lambda)
                          if config.visual.fixed_lambda is not None
                          else dynamic_threshold(series, config.visual.window,
                                                 config.visual.k))
            visual_debug = {"series": series, "thresholds": thresholds}

    cues.sort(key=lambda e: (e.time.start, e.time.end, e.kind.value, -e.strength))
    return cues, keywords, audio_debug, visual_debug


def process_video(record: dict, config: PipelineConfig, resources: dict,
                  method: str = "multimodal") -> VideoResult:
    """One clip through ingestion, cue detection, fusion and summarization."""
    video_id = record["video_id"]
    result = VideoResult(video_id=video_id)
    transcript = ingest.load_transcript(record["transcript"])
    meta = _meta_for(record)

    if method == "edmundson":
        summary = edmundson_summarize(transcript, resources["edmundson_cues"],
                                      config.baseline_ratio, meta,
                                      stopwords=resources["stopwords"])
        bonus = []
        keywords = None
        audio_debug = visual_debug = None
    else:
        cues, keywords, audio_debug, visual_debug = _collect_cues(
            record, config, transcript, resources)
        if keywords is None:
            keywords = KeywordSet(entries={})
        bonus = bonus_words(transcript, cues, keywords,
                            stopwords=resources["stopwords"], config=config.fusion)
        summary = summarize(transcript, bonus, config.summary, meta)
        result.degenerate_weights = all(w == 0 for w in summary.weights)
        if result.degenerate_weights:
            log.warning("%s: no bonus-word mass; threshold passes every sentence",
                        video_id)

    result.summary = summary
    result.audio_debug = audio_debug
    result.visual_debug = visual_debug
    result.bonus_debug = [b.to_dict() for b in bonus]

    if record.get("pgt"):
        reference = ingest.load_pgt(record["pgt"])
        cand_emb = (ingest.load_embeddings(record["candidate_embeddings"])
                    if record.get("candidate_embeddings") else None)
        ref_emb = (ingest.load_embeddings(record["reference_embeddings"])
                   if record.get("reference_embeddings") else None)
        result.report = evaluate_pair(summary, reference, transcript,
                                      candidate_emb=cand_emb, reference_emb=ref_emb,
                                      meta=meta, iou_threshold=config.iou_threshold,
                                      sample_fps=config.sample_fps)
    return result


def _run_batch(config: PipelineConfig, method: str) -> BatchResult:
    records = load_manifest(config.manifest)
    resources = {
        "stopwords": default_stopwords(),
        "lexicon": (load_lexicon(config.lexicon_path) if config.lexicon_path
                    else default_lexicon()),
        "gazetteer": default_gazetteer(),
        "edmundson_cues": default_edmundson_cues(),
    }

    def safe(record):
        try:
            return process_video(record, config, resources, method)
        except (CueFuseError, OSError, ValueError) as exc:
            log.error("%s failed: %s", record["video_id"], exc)
            res = VideoResult(video_id=record["video_id"])
            res.error = f"{type(exc).__name__}: {exc}"
            return res
        except Exception as exc:  # pragma: no cover - defensive isolation
            log.error("%s crashed: %s", record["video_id"], traceback.format_exc())
            res = VideoResult(video_id=record["video_id"])
            res.error = f"{type(exc).__name__}: {exc}"
            return res

    if config.workers == 1:
        results = [safe(rec) for rec in records]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(safe, records))

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    reports = []
    failed = []
    for record, result in zip(records, results):
        if result.error is not None:
            failed.append({"video_id": result.video_id, "error": result.error})
            continue
        meta = _meta_for(record)
        summary = result.summary
        dump_summary(summary, out / f"{result.video_id}.summary.json")
        cutlist, script = render.render_cutlist(
            summary, meta, record.get("source", f"{result.video_id}.mp4"),
            config.gap_tolerance)
        render.dump_cutlist(cutlist, out / f"{result.video_id}.cuts.json")
        (out / f"{result.video_id}.cut.sh").write_text(script, encoding="utf-8")
        (out / f"{result.video_id}.srt").write_text(render.render_srt(summary),
                                                    encoding="utf-8")
        if config.dump_cues:
            _write_debug_dumps(out, result)
        if result.report is not None:
            reports.append(result.report)
            rows.append(result.report.row())

    if reports:
        (out / "report.json").write_text(render.render_report(reports, "json"),
                                         encoding="utf-8")
        (out / "report.csv").write_text(render.render_report(reports, "csv"),
                                        encoding="utf-8")
    if failed:
        with open(out / "failures.json", "w", encoding="utf-8") as fh:
            json.dump(failed, fh, indent=1)
            fh.write("\n")
    return BatchResult(results=results, report_rows=rows, failed=failed)


def run_pipeline(config: PipelineConfig) -> BatchResult:
    """Multimodal summarization over every manifest entry."""
    return _run_batch(config, "multimodal")


def run_baseline(config: PipelineConfig) -> BatchResult:
    """Edmundson baseline over every manifest entry."""
    return _run_batch(config, "edmundson")


def run_evaluate(config: PipelineConfig) -> BatchResult:
    """Score precomputed summary JSON files against their references."""
    records = load_manifest(config.manifest)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports, rows, failed, results = [], [], [], []
    for record in records:
        try:
            path = record.get("summary")
            if not path and config.summaries_dir:
                path = str(Path(config.summaries_dir) / f"{record['video_id']}.summary.json")
            if not path:
                raise ManifestError(f"{record['video_id']}: no summary path")
            if not record.get("pgt"):
                raise ManifestError(f"{record['video_id']}: no pgt reference")
            summary = load_summary(path)
            transcript = ingest.load_transcript(record["transcript"])
            reference = ingest.load_pgt(record["pgt"])
            cand_emb = (ingest.load_embeddings(record["candidate_embeddings"])
                        if record.get("candidate_embeddings") else None)
            ref_emb = (ingest.load_embeddings(record["reference_embeddings"])
                       if record.get("reference_embeddings") else None)
            report = evaluate_pair(summary, reference, transcript,
                                   candidate_emb=cand_emb, reference_emb=ref_emb,
                                   meta=_meta_for(record),
                                   iou_threshold=config.iou_threshold,
                                   sample_fps=config.sample_fps)
            reports.append(report)
            rows.append(report.row())
            res = VideoResult(video_id=record["video_id"], summary=summary)
            res.report = report
            results.append(res)
        except (CueFuseError, OSError, ValueError) as exc:
            log.error("%s failed: %s", record["video_id"], exc)
            failed.append({"video_id": record["video_id"],
                           "error": f"{type(exc).__name__}: {exc}"})
    if reports:
        (out / "report.json").write_text(render.render_report(reports, "json"),
                                         encoding="utf-8")
        (out / "report.csv").write_text(render.render_report(reports, "csv"),
                                        encoding="utf-8")
    if failed:
        with open(out / "failures.json", "w", encoding="utf-8") as fh:
            json.dump(failed, fh, indent=1)
            fh.write("\n")
    return BatchResult(results=results, report_rows=rows, failed=failed)


def run_consistency(config: PipelineConfig) -> dict:
    """Mean pairwise token-set Jaccard across reference versions per video."""
    records = load_manifest(config.manifest)
    per_video = {}
    for record in records:
        versions = record.get("pgt_versions") or []
        if len(versions) < 2:
            raise TooFewVersions(
                f"{record['video_id']}: need >= 2 pgt versions, got {len(versions)}")
        token_sets = [set(tokenize(ingest.load_pgt(p).text)) for p in versions]
        sims = [jaccard(a, b)
                for i, a in enumerate(token_sets)
                for b in token_sets[i + 1:]]
        per_video[record["video_id"]] = sum(sims) / len(sims)
    corpus = sum(per_video.values()) / len(per_video) if per_video else None
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = {"per_video": per_video, "corpus_mean": corpus}
    with open(out / "consistency.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    return doc


def _write_debug_dumps(out: Path, result: VideoResult) -> None:
    vid = result.video_id
    if result.audio_debug:
        for kind, series in result.audio_debug["features"].items():
            z = result.audio_debug["zscores"][kind]
            lines = ["frame_time,raw,z"]
            for t, raw, zv in zip(series.frame_times, series.values, z.z):
                lines.append(f"{t:.4f},{raw:.6f},{zv:.6f}")
            (out / f"{vid}.audio_{kind.value}.csv").write_text(
                "\n".join(lines) + "\n", encoding="utf-8")
    if result.visual_debug:
        series = result.visual_debug["series"]
        thresholds = result.visual_debug["thresholds"]
        lines = ["frame_time,displacement,threshold,flagged"]
        for t, v, thr in zip(series.frame_times, series.values, thresholds):
            lines.append(f"{t:.4f},{v:.6f},{thr:.6f},{int(v > thr)}")
        (out / f"{vid}.visual.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    if result.bonus_debug is not None:
        with open(out / f"{vid}.bonus.json", "w", encoding="utf-8") as fh:
            json.dump(result.bonus_debug, fh, indent=1, ensure_ascii=False)
            fh.write("\n")
