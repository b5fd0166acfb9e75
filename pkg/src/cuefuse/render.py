"""Human- and tool-consumable outputs.

Subtitles (SRT, re-based to the summary timeline), cut-lists plus a POSIX
shell script for an external cutter, and evaluation reports in JSON or CSV.
The package never runs the cutter itself; it only emits instructions.
"""

from __future__ import annotations

import json
import re
import shlex
from dataclasses import dataclass
from pathlib import Path

from .errors import SchemaError
from .metrics import CONVENTIONS, MetricsReport, REPORT_COLUMNS, aggregate_rows
from .summarizer import Summary, compile_segments
from .timeline import Segment, TimeInterval, VideoMeta

CUTS_SCHEMA = "cuefuse-cuts/1"


@dataclass(frozen=True)
class CutList:
    video_id: str
    source_path: str
    fps: float
    cuts: tuple[Segment, ...]   # ordered, non-overlapping


def format_srt_time(seconds: float) -> str:
    """HH:MM:SS,mmm with millisecond rounding."""
    ms = int(round(seconds * 1000))
    h, rem = divmod(ms, 3_600_000)
    m, rem = divmod(rem, 60_000)
    s, ms = divmod(rem, 1000)
    return f"{h:02d}:{m:02d}:{s:02d},{ms:03d}"


def parse_srt_time(text: str) -> float:
    h, m, rest = text.split(":")
    s, ms = rest.split(",")
    return int(h) * 3600 + int(m) * 60 + int(s) + int(ms) / 1000


def render_srt(summary: Summary) -> str:
    """Subtitle blocks for the compiled summary video.

    Segment times are re-based so the first block starts at zero and each
    later block starts where the previous cut ends, matching the timeline
    of the concatenated summary.
    """
    lines = []
    clock = 0.0
    for number, seg in enumerate(summary.segments, 1):
        dur = seg.interval.length
        lines.append(str(number))
        lines.append(f"{format_srt_time(clock)} --> {format_srt_time(clock + dur)}")
        lines.append(seg.text)
        lines.append("")
        clock += dur
    return "\n".join(lines) + "\n" if lines else "\n"


_SRT_ARROW = re.compile(r"\s*-->\s*")


def parse_srt(text: str) -> list[tuple[TimeInterval, str]]:
    """Inverse of render_srt: [(interval, text)] per block."""
    entries = []
    for block in re.split(r"\n\s*\n", text.strip()):
        if not block.strip():
            continue
        rows = block.splitlines()
        if len(rows) < 2:
            raise SchemaError(f"malformed SRT block: {block!r}")
        times = _SRT_ARROW.split(rows[1])
        if len(times) != 2:
            raise SchemaError(f"malformed SRT timing row: {rows[1]!r}")
        start, end = (parse_srt_time(t.strip()) for t in times)
        entries.append((TimeInterval(start, end), "\n".join(rows[2:])))
    return entries


def render_cutlist(summary: Summary, meta: VideoMeta, source_path: str,
                   gap_tolerance: float = 0.25):
    """Merged cut-list plus a shell script driving an external cutter.

    Returns (CutList, script_text). The script stream-copies each cut,
    concatenates them, and muxes the sidecar `<video_id>.srt` subtitles;
    every path is shell-quoted.
    """
    cuts = tuple(compile_segments(summary, meta, gap_tolerance))
    cutlist = CutList(video_id=summary.video_id, source_path=str(source_path),
                      fps=meta.fps, cuts=cuts)

    vid = summary.video_id
    lines = ["#!/bin/sh", "set -e", ""]
    if not cuts:
        lines += [f"echo 'no segments selected for {vid}; nothing to cut' >&2",
                  "exit 0", ""]
        return cutlist, "\n".join(lines)

    src = shlex.quote(str(source_path))
    part_files = []
    for i, seg in enumerate(cuts):
        part = f"{vid}_part{i:03d}.mp4"
        part_files.append(part)
        lines.append(
            f"ffmpeg -y -ss {seg.interval.start:.3f} -to {seg.interval.end:.3f} "
            f"-i {src} -c copy {shlex.quote(part)}")
    concat = f"{vid}_concat.txt"
    lines.append("")
    for part in part_files:
        lines.append(f"echo \"file {shlex.quote(part)}\" >> {shlex.quote(concat)}")
    lines.append(
        f"ffmpeg -y -f concat -safe 0 -i {shlex.quote(concat)} -c copy "
        f"{shlex.quote(vid + '_joined.mp4')}")
    lines.append(
        f"ffmpeg -y -i {shlex.quote(vid + '_joined.mp4')} -i {shlex.quote(vid + '.srt')} "
        f"-c copy -c:s mov_text {shlex.quote(vid + '_summary.mp4')}")
    lines.append("")
    return cutlist, "\n".join(lines)


def dump_cutlist(cutlist: CutList, path) -> None:
    doc = {
        "schema": CUTS_SCHEMA,
        "video_id": cutlist.video_id,
        "source_path": cutlist.source_path,
        "fps": cutlist.fps,
        "cuts": [{"start": c.interval.start, "end": c.interval.end,
                  "first_frame": c.frame_range[0], "last_frame": c.frame_range[1],
                  "sentence_indices": list(c.sentence_indices), "text": c.text}
                 for c in cutlist.cuts],
    }
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=1)
        fh.write("\n")


def load_cutlist(path) -> CutList:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("schema") not in (None, CUTS_SCHEMA):
        raise SchemaError(f"{path}: schema '{doc.get('schema')}', expected '{CUTS_SCHEMA}'")
    cuts = tuple(Segment(interval=TimeInterval(c["start"], c["end"]),
                         frame_range=(int(c["first_frame"]), int(c["last_frame"])),
                         sentence_indices=tuple(c.get("sentence_indices", ())),
                         text=c.get("text", ""))
                 for c in doc["cuts"])
    return CutList(video_id=doc["video_id"], source_path=doc["source_path"],
                   fps=float(doc["fps"]), cuts=cuts)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def render_report(reports: list[MetricsReport], fmt: str = "json") -> str:
    """Per-video rows plus a corpus-mean row plus the convention metadata.

    Values are printed at 4 decimal places. CSV carries the metadata as
    leading '#' comment lines and a fixed column order; JSON nests it.
    """
    rows = [r.row() for r in reports]
    mean_row = aggregate_rows(rows) if rows else None
    if fmt == "json":
        doc = {
            "metadata": dict(CONVENTIONS),
            "videos": [{k: (round(v, 4) if isinstance(v, float) else v)
                        for k, v in row.items()} for row in rows],
            "corpus_mean": ({k: (round(v, 4) if isinstance(v, float) else v)
                             for k, v in mean_row.items()} if mean_row else None),
        }
        return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"
    if fmt == "csv":
        header = ["video_id"] + REPORT_COLUMNS[:11]  # fixed order through spearman_rho
        lines = [f"# {key}: {value}" for key, value in CONVENTIONS.items()]
        lines.append(",".join(header))
        for row in rows + ([mean_row] if mean_row else []):
            lines.append(",".join(_fmt(row.get(col)) for col in header))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format '{fmt}'")
