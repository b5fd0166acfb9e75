"""Text and temporal evaluation metrics for candidate/reference summary pairs.

Everything is implemented directly (n-gram overlap, LCS, clipped BLEU,
greedy-matched embedding similarity, IoU segment matching, rank
correlations with tie handling) so each value can be pinned against an
independent oracle. Conventions that the literature leaves open (smoothing,
matching, rank construction) are fixed here and echoed in report metadata.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .ingest import PgtSummary, TokenEmbeddings
from .summarizer import Summary
from .text_cues import tokenize
from .timeline import Segment, TimeInterval, Transcript, VideoMeta, overlap
from .errors import (ConstantInput, DimensionMismatch, EmptyInput, EmptySource,
                     LengthMismatch, TooShort)

# conventions echoed in every report
CONVENTIONS = {
    "bleu_smoothing": "add-one on zero counts for n >= 2",
    "segment_matching": "greedy one-to-one by descending IoU, match iff IoU > threshold",
    "rank_sequences": "IoU-matched reference ordinals in candidate order; unmatched excluded",
    "kendall_variant": "tau-b",
    "spearman_ties": "mean ranks",
    "std_dev": "population",
    "frame_sampling_fps": 1,
    "corpus_aggregation": "unweighted mean of per-video metrics",
}


@dataclass(frozen=True)
class TextMetrics:
    rouge1: float
    rouge2: float
    rougeL: float
    bleu: float
    bertscore_f1: float | None   # None when embeddings were not supplied
    length_ratio: float


@dataclass(frozen=True)
class TemporalMetrics:
    f1: float          # IoU-matched segment F1; harmonic mean of the pair below
    precision: float
    recall: float
    frame_precision: float   # 1 fps rasterized overlap
    frame_recall: float
    frame_f1: float
    kendall_tau: float | None   # None with fewer than 2 matched segments
    spearman_rho: float | None


@dataclass(frozen=True)
class MetricsReport:
    video_id: str
    method: str
    text: TextMetrics
    temporal: TemporalMetrics

    def row(self) -> dict:
        """Flat per-video row in the report column order."""
        return {
            "video_id": self.video_id,
            "method": self.method,
            "rouge1": self.text.rouge1,
            "rouge2": self.text.rouge2,
            "rougeL": self.text.rougeL,
            "bleu": self.text.bleu,
            "bertscore": self.text.bertscore_f1,
            "length_ratio": self.text.length_ratio,
            "f1": self.temporal.f1,
            "precision": self.temporal.precision,
            "recall": self.temporal.recall,
            "kendall_tau": self.temporal.kendall_tau,
            "spearman_rho": self.temporal.spearman_rho,
            "frame_precision": self.temporal.frame_precision,
            "frame_recall": self.temporal.frame_recall,
            "frame_f1": self.temporal.frame_f1,
        }


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if (p + r) != 0 else 0.0


def _ngrams(tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: list[str], reference: list[str], n: int):
    """Clipped n-gram overlap. Returns (precision, recall, f1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = _ngrams(candidate, n)
    ref = _ngrams(reference, n)
    total_c, total_r = sum(cand.values()), sum(ref.values())
    if total_c == 0 or total_r == 0:
        return 0.0, 0.0, 0.0
    hit = sum(min(c, ref[g]) for g, c in cand.items())
    p, r = hit / total_c, hit / total_r
    return p, r, _f1(p, r)


def _lcs_len(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: list[str], reference: list[str]):
    """Longest-common-subsequence overlap. Returns (precision, recall, f1)."""
    if not candidate or not reference:
        return 0.0, 0.0, 0.0
    lcs = _lcs_len(candidate, reference)
    p, r = lcs / len(candidate), lcs / len(reference)
    return p, r, _f1(p, r)


def bleu(candidate: list[str], reference: list[str], max_n: int = 4) -> float:
    """Geometric mean of clipped n-gram precisions with a brevity penalty.

    Zero counts are add-one smoothed for n >= 2 only; zero unigram overlap
    (or an empty candidate) yields 0 outright.
    """
    if not candidate:
        return 0.0
    precisions = []
    for n in range(1, max_n + 1):
        cand = _ngrams(candidate, n)
        ref = _ngrams(reference, n)
        total = sum(cand.values())
        hit = sum(min(c, ref[g]) for g, c in cand.items())
        if n == 1:
            if hit == 0:
                return 0.0
            precisions.append(hit / total)
        elif hit == 0:
            precisions.append((hit + 1) / (total + 1))
        else:
            precisions.append(hit / total)
    bp = 1.0
    if len(candidate) < len(reference):
        bp = math.exp(1 - len(reference) / len(candidate))
    return bp * math.exp(sum(math.log(p) for p in precisions) / max_n)


def bertscore(candidate_emb: TokenEmbeddings, reference_emb: TokenEmbeddings):
    """Greedy-matched cosine similarity over token embeddings (no idf).

    P = mean over candidate tokens of the best cosine against the
    reference; R symmetric; returns (precision, recall, f1).
    """
    if candidate_emb.dim != reference_emb.dim:
        raise DimensionMismatch(
            f"candidate dim {candidate_emb.dim} != reference dim {reference_emb.dim}")
    if len(candidate_emb.tokens) == 0 or len(reference_emb.tokens) == 0:
        raise EmptyInput("both sides need at least one token")
    c = np.asarray(candidate_emb.vectors, dtype=np.float64)
    r = np.asarray(reference_emb.vectors, dtype=np.float64)
    cn = np.linalg.norm(c, axis=1, keepdims=True)
    rn = np.linalg.norm(r, axis=1, keepdims=True)
    c = np.divide(c, cn, out=np.zeros_like(c), where=cn != 0)
    r = np.divide(r, rn, out=np.zeros_like(r), where=rn != 0)
    sims = c @ r.T
    p = float(sims.max(axis=1).mean())
    rec = float(sims.max(axis=0).mean())
    return p, rec, _f1(p, rec)


def length_ratio(candidate: list[str], source: list[str]) -> float:
    """Summary-to-source token count ratio."""
    if not source:
        raise EmptySource("source transcript has no tokens")
    return len(candidate) / len(source)


def jaccard(tokens_a, tokens_b) -> float:
    """Token-set Jaccard similarity; two empty sets count as identical."""
    a, b = set(tokens_a), set(tokens_b)
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def _as_interval(seg) -> TimeInterval:
    return seg.interval if isinstance(seg, Segment) else seg


def _iou(a: TimeInterval, b: TimeInterval) -> float:
    inter = overlap(a, b)
    union = a.length + b.length - inter
    if union <= 0:  # two identical zero-length intervals
        return 1.0 if (a.start == b.start and a.end == b.end) else 0.0
    return inter / union


def match_segments(candidate, reference):
    """Greedy one-to-one matching by descending IoU.

    Returns [(cand_idx, ref_idx, iou)] for all greedily paired segments
    with iou > 0, in matching order.
    """
    cand = [_as_interval(s) for s in candidate]
    ref = [_as_interval(s) for s in reference]
    pairs = [(ci, ri, _iou(c, r)) for ci, c in enumerate(cand)
             for ri, r in enumerate(ref)]
    pairs = [p for p in pairs if p[2] > 0]
    pairs.sort(key=lambda p: (-p[2], p[0], p[1]))
    used_c: set = set()
    used_r: set = set()
    matches = []
    for ci, ri, iou in pairs:
        if ci in used_c or ri in used_r:
            continue
        used_c.add(ci)
        used_r.add(ri)
        matches.append((ci, ri, iou))
    return matches


def temporal_f1(candidate, reference, iou_threshold: float = 0.5):
    """Segment selection accuracy under IoU matching.

    A greedy one-to-one match with IoU above the threshold is a true
    positive. Returns (precision, recall, f1); either side empty scores 0.
    """
    tp = sum(1 for _, _, iou in match_segments(candidate, reference)
             if iou > iou_threshold)
    p = tp / len(candidate) if candidate else 0.0
    r = tp / len(reference) if reference else 0.0
    return p, r, _f1(p, r)


def _rasterize(segments, n_frames: int, fps: float) -> set:
    covered: set = set()
    for seg in segments:
        iv = _as_interval(seg)
        first = int(math.floor(iv.start * fps))
        last = int(math.floor(iv.end * fps))
        for k in range(max(0, first), min(last, n_frames - 1) + 1):
            covered.add(k)
    return covered


def frame_prf(candidate, reference, meta: VideoMeta, sample_fps: float = 1.0):
    """Frame-level precision/recall/F1 on a coarse sampling grid.

    Both segment sets are rasterized onto a sample_fps grid over
    [0, duration); a grid cell counts as covered when a segment intersects
    it. Empty rasterizations score 0 by convention.
    """
    if sample_fps <= 0:
        raise ValueError("sample_fps must be positive")
    n_frames = max(1, int(math.ceil(meta.duration * sample_fps - 1e-9)))
    c = _rasterize(candidate, n_frames, sample_fps)
    r = _rasterize(reference, n_frames, sample_fps)
    inter = len(c & r)
    p = inter / len(c) if c else 0.0
    rec = inter / len(r) if r else 0.0
    return p, rec, _f1(p, rec)


def kendall_tau(rank_a, rank_b) -> float:
    """Kendall tau-b: pair counting with tie correction."""
    a, b = list(rank_a), list(rank_b)
    if len(a) != len(b):
        raise LengthMismatch(f"lengths {len(a)} and {len(b)} differ")
    n = len(a)
    if n < 2:
        raise TooShort("need at least 2 elements")
    concordant = discordant = ties_a = ties_b = 0
    for i in range(n):
        for j in range(i + 1, n):
            da = (a[i] > a[j]) - (a[i] < a[j])
            db = (b[i] > b[j]) - (b[i] < b[j])
            if da == 0 and db == 0:
                continue
            if da == 0:
                ties_a += 1
            elif db == 0:
                ties_b += 1
            elif da == db:
                concordant += 1
            else:
                discordant += 1
    denom = math.sqrt((concordant + discordant + ties_a)
                      * (concordant + discordant + ties_b))
    if denom == 0:
        raise ConstantInput("all pairs tied")
    return (concordant - discordant) / denom


def _mean_ranks(values) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def spearman_rho(values_a, values_b) -> float:
    """Pearson correlation of mean-ranked values."""
    a, b = list(values_a), list(values_b)
    if len(a) != len(b):
        raise LengthMismatch(f"lengths {len(a)} and {len(b)} differ")
    if len(a) < 2:
        raise TooShort("need at least 2 elements")
    ra = np.asarray(_mean_ranks(a))
    rb = np.asarray(_mean_ranks(b))
    sa, sb = ra.std(), rb.std()
    if sa == 0 or sb == 0:
        raise ConstantInput("constant input has no rank ordering")
    return float(((ra - ra.mean()) * (rb - rb.mean())).mean() / (sa * sb))


def evaluate_pair(candidate: Summary, reference: PgtSummary, transcript: Transcript,
                  candidate_emb: TokenEmbeddings | None = None,
                  reference_emb: TokenEmbeddings | None = None,
                  meta: VideoMeta | None = None,
                  iou_threshold: float = 0.5,
                  sample_fps: float = 1.0) -> MetricsReport:
    """All text and temporal metrics for one candidate/reference pair.

    BERTScore is reported as None unless both token-embedding sides are
    supplied. Rank correlations map each IoU-matched candidate segment to
    its partner's reference ordinal (None when fewer than two segments
    match). Without video metadata the frame grid spans everything either
    summary touches.
    """
    cand_tokens = tokenize(candidate.text)
    ref_tokens = tokenize(reference.text)

    _, _, r1 = rouge_n(cand_tokens, ref_tokens, 1)
    _, _, r2 = rouge_n(cand_tokens, ref_tokens, 2)
    _, _, rl = rouge_l(cand_tokens, ref_tokens)
    bleu_score = bleu(cand_tokens, ref_tokens)
    bert = None
    if candidate_emb is not None and reference_emb is not None:
        _, _, bert = bertscore(candidate_emb, reference_emb)
    lr = length_ratio(cand_tokens, list(transcript.tokens))

    cand_segments = list(candidate.segments)
    ref_segments = reference.intervals
    p, r, f1 = temporal_f1(cand_segments, ref_segments, iou_threshold)

    if meta is None:
        horizon = max([transcript.interval.end]
                      + [s.interval.end for s in cand_segments]
                      + [iv.end for iv in ref_segments], default=1.0)
        meta = VideoMeta(fps=24.0, duration=max(horizon, 1.0))
    fp, fr, ff1 = frame_prf(cand_segments, ref_segments, meta, sample_fps)

    matches = [(ci, ri) for ci, ri, iou in
               match_segments(cand_segments, ref_segments) if iou > iou_threshold]
    matches.sort(key=lambda m: m[0])
    tau = rho = None
    if len(matches) >= 2:
        cand_order = [ci for ci, _ in matches]
        ref_order = [ri for _, ri in matches]
        try:
            tau = kendall_tau(cand_order, ref_order)
            rho = spearman_rho(cand_order, ref_order)
        except ConstantInput:
            tau = rho = None

    return MetricsReport(
        video_id=transcript.video_id,
        method=candidate.method,
        text=TextMetrics(rouge1=r1, rouge2=r2, rougeL=rl, bleu=bleu_score,
                         bertscore_f1=bert, length_ratio=lr),
        temporal=TemporalMetrics(f1=f1, precision=p, recall=r,
                                 frame_precision=fp, frame_recall=fr, frame_f1=ff1,
                                 kendall_tau=tau, spearman_rho=rho),
    )


REPORT_COLUMNS = ["rouge1", "rouge2", "rougeL", "bleu", "bertscore", "length_ratio",
                  "f1", "precision", "recall", "kendall_tau", "spearman_rho",
                  "frame_precision", "frame_recall", "frame_f1"]


def aggregate_rows(rows: list[dict]) -> dict:
    """Unweighted column means over per-video rows, folded in given order.

    None entries (absent BERTScore, undefined rank correlations) are
    skipped per column; an all-None column stays None.
    """
    mean_row: dict = {"video_id": "corpus_mean", "method": ""}
    methods = sorted({row["method"] for row in rows})
    if len(methods) == 1:
        mean_row["method"] = methods[0]
    for col in REPORT_COLUMNS:
        total, count = 0.0, 0
        for row in rows:
            v = row.get(col)
            if v is None:
                continue
            total += v
            count += 1
        mean_row[col] = (total / count) if count else None
    return mean_row
