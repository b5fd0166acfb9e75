"""Command-line batch driver.

Verbs: summarize (multimodal pipeline), baseline (Edmundson), evaluate
(score precomputed summaries), consistency (reference-version agreement),
dump-cues (summarize plus per-series debug CSV/JSON dumps). Flags mirror
the pipeline configuration; a --config JSON file overrides defaults and
explicit flags override the file. CUEFUSE_WORKERS sets the default worker
count.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .audio_cues import AudioConfig
from .errors import CueFuseError
from .fusion import FusionConfig
from .pipeline import (ALL_MODALITIES, PipelineConfig, run_baseline, run_consistency,
                       run_evaluate, run_pipeline)
from .summarizer import DiversityMode, SummaryConfig, WeightsMode
from .timeline import CueKind
from .visual_cues import VisualConfig

log = logging.getLogger("cuefuse")

_KIND_FLAGS = {"pitch": CueKind.PITCH, "loudness": CueKind.LOUDNESS,
               "tonality": CueKind.TONALITY}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("manifest", help="JSON array of per-video artifact records")
    parser.add_argument("--out", dest="out_dir", help="output directory (default: ./out)")
    parser.add_argument("--config", help="JSON file of option overrides")
    parser.add_argument("--workers", type=int, help="parallel videos (default: "
                        "CUEFUSE_WORKERS or 1)")
    parser.add_argument("--modalities", help="comma list from {text,audio,visual}")
    parser.add_argument("-v", "--verbose", action="store_true")


def _add_summarize_opts(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threshold-factor", type=float,
                        help="lambda in theta = mean + lambda*std (default 0.3)")
    parser.add_argument("--diversity-factor", type=float,
                        help="delta in the literal diversity check (default 0.2)")
    parser.add_argument("--diversity-mode", choices=["literal", "strict"])
    parser.add_argument("--strict-sim", type=float,
                        help="similarity cutoff for strict mode (default 0.5)")
    parser.add_argument("--weights-mode", choices=["uniform", "weighted"])
    parser.add_argument("--z-threshold", type=float,
                        help="audio emphasis threshold in sigma units (default 1.5)")
    for kind in _KIND_FLAGS:
        parser.add_argument(f"--z-threshold-{kind}", type=float,
                            help=f"override z threshold for {kind} only")
    parser.add_argument("--visual-window", type=int,
                        help="trailing frames for the movement threshold (default 9)")
    parser.add_argument("--visual-k", type=float,
                        help="sigma multiplier for the movement threshold (default 1.5)")
    parser.add_argument("--fixed-lambda", type=float,
                        help="use a constant movement threshold instead of the dynamic one")
    parser.add_argument("--min-conf", type=float,
                        help="emotion transition confidence gate (default 0.5)")
    parser.add_argument("--tolerance", type=float,
                        help="word/cue coincidence slack in seconds (default 0.25)")
    parser.add_argument("--no-promote-multi", action="store_true",
                        help="disable promotion of non-keywords hit by audio AND visual")
    parser.add_argument("--no-promote-strong", action="store_true",
                        help="disable promotion of non-keywords with one strong hit")
    parser.add_argument("--strong-strength", type=float,
                        help="strength needed for single-modality promotion (default 2.5)")
    parser.add_argument("--top-k", type=int, help="TF-IDF keywords kept (default 5)")
    parser.add_argument("--intensity-threshold", type=float,
                        help="sentence sentiment intensity gate (default 0.4)")
    parser.add_argument("--lexicon", dest="lexicon_path",
                        help="sentiment lexicon TSV replacing the built-in one")
    parser.add_argument("--gap-tolerance", type=float,
                        help="segment merge gap in seconds (default 0.25)")
    parser.add_argument("--iou-threshold", type=float,
                        help="segment match IoU cutoff (default 0.5)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuefuse",
        description="Multimodal cue fusion for extractive video summarization.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("summarize", help="run the multimodal pipeline")
    _add_common(p)
    _add_summarize_opts(p)

    p = sub.add_parser("baseline", help="run the Edmundson baseline")
    _add_common(p)
    p.add_argument("--ratio", dest="baseline_ratio", type=float,
                   help="fraction of sentences to keep (default 0.3)")
    p.add_argument("--gap-tolerance", type=float)
    p.add_argument("--iou-threshold", type=float)

    p = sub.add_parser("evaluate", help="score precomputed summaries against references")
    _add_common(p)
    p.add_argument("--summaries", dest="summaries_dir",
                   help="directory of <video_id>.summary.json files")
    p.add_argument("--iou-threshold", type=float)

    p = sub.add_parser("consistency", help="pairwise Jaccard across reference versions")
    _add_common(p)

    p = sub.add_parser("dump-cues", help="summarize and write per-series debug dumps")
    _add_common(p)
    _add_summarize_opts(p)
    return parser


def _merge_options(args: argparse.Namespace) -> dict:
    """defaults < --config file < explicit flags."""
    options: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            options.update(json.load(fh))
    for key, value in vars(args).items():
        if key in ("verb", "config", "verbose") or value is None or value is False:
            continue
        options[key] = value
    return options


def _config_from(options: dict) -> PipelineConfig:
    modalities = options.get("modalities", "text,audio,visual")
    if isinstance(modalities, str):
        modalities = frozenset(m.strip() for m in modalities.split(",") if m.strip())
    else:
        modalities = frozenset(modalities)
    unknown = modalities - ALL_MODALITIES
    if unknown:
        raise ValueError(f"unknown modalities: {sorted(unknown)}")

    kind_thresholds = {}
    for name, kind in _KIND_FLAGS.items():
        value = options.get(f"z_threshold_{name}")
        if value is not None:
            kind_thresholds[kind] = float(value)

    summary = SummaryConfig(
        threshold_factor=options.get("threshold_factor", 0.3),
        diversity_factor=options.get("diversity_factor", 0.2),
        diversity_mode=DiversityMode(options.get("diversity_mode", "literal")),
        strict_sim_threshold=options.get("strict_sim", 0.5),
        weights_mode=WeightsMode(options.get("weights_mode", "uniform")),
    )
    audio = AudioConfig(
        z_threshold=options.get("z_threshold", 1.5),
        kind_thresholds=kind_thresholds,
    )
    visual = VisualConfig(
        window=options.get("visual_window", 9),
        k=options.get("visual_k", 1.5),
        min_conf=options.get("min_conf", 0.5),
        fixed_lambda=options.get("fixed_lambda"),
    )
    fusion = FusionConfig(
        tolerance=options.get("tolerance", 0.25),
        promote_multi_nontextual=not options.get("no_promote_multi", False),
        promote_strong_single=not options.get("no_promote_strong", False),
        strong_strength=options.get("strong_strength", 2.5),
    )
    workers = options.get("workers")
    if workers is None:
        workers = int(os.environ.get("CUEFUSE_WORKERS", "1"))
    return PipelineConfig(
        manifest=options["manifest"],
        out_dir=options.get("out_dir", "out"),
        modalities=modalities,
        summary=summary,
        audio=audio,
        visual=visual,
        fusion=fusion,
        baseline_ratio=options.get("baseline_ratio", 0.3),
        workers=int(workers),
        top_k=options.get("top_k", 5),
        intensity_threshold=options.get("intensity_threshold", 0.4),
        lexicon_path=options.get("lexicon_path"),
        gap_tolerance=options.get("gap_tolerance", 0.25),
        iou_threshold=options.get("iou_threshold", 0.5),
        sample_fps=options.get("sample_fps", 1.0),
        dump_cues=bool(options.get("dump_cues", False)),
        summaries_dir=options.get("summaries_dir"),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        options = _merge_options(args)
        if args.verb == "dump-cues":
            options["dump_cues"] = True
        config = _config_from(options)
        if args.verb in ("summarize", "dump-cues"):
            batch = run_pipeline(config)
        elif args.verb == "baseline":
            batch = run_baseline(config)
        elif args.verb == "evaluate":
            batch = run_evaluate(config)
        elif args.verb == "consistency":
            doc = run_consistency(config)
            log.info("corpus mean Jaccard: %s", doc["corpus_mean"])
            return 0
        else:  # pragma: no cover
            raise ValueError(args.verb)
    except (CueFuseError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return 2
    for failure in batch.failed:
        log.error("video %s failed: %s", failure["video_id"], failure["error"])
    return 1 if batch.failed else 0


if __name__ == "__main__":
    sys.exit(main())
