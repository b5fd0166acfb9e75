"""Acceptance gate: each criterion prints one PASS/FAIL line.

Run as `pytest tests/test_acceptance.py -v -s` to see the lines. Criteria
cover metric-oracle equivalence, DSP accuracy, the hand-derived selection
fixture, the diversity-check arithmetic, temporal metrics, the directional
corpus comparison against the baseline, batch determinism, runtime budgets,
and artifact round-trips.
"""

import itertools
import json
import math
import random
import time

import numpy as np
import pytest

from cuefuse import (AudioBuffer, CueEvent, CueKind, Modality, SummaryConfig,
                     TimeInterval, VideoMeta, bleu, bonus_words, estimate_pitch,
                     frame_prf, frame_signal, hammarberg_index, kendall_tau,
                     load_transcript, parse_srt, rms_energy, rouge_l, rouge_n,
                     summarize, temporal_f1, zscore)
from cuefuse.audio_cues import FeatureSeries
from cuefuse.cli import main
from cuefuse.ingest import (dump_audio_features, dump_embeddings, dump_pgt,
                            load_audio_features, load_embeddings, load_pgt)
from cuefuse.pipeline import (PipelineConfig, load_manifest, process_video,
                              run_baseline, run_pipeline)
from cuefuse.render import load_cutlist
from cuefuse.summarizer import DiversityMode, diversity_filter, load_summary
from cuefuse.text_cues import textual_cue_events
from conftest import FIXTURES, make_transcript
from synthcorpus import make_clip, make_corpus


def verdict(number: int, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {number}: {detail}"


# --- criterion 1: metric-oracle equivalence ---

def oracle_tau(a, b):
    c = d = ta = tb = 0
    for (x1, y1), (x2, y2) in itertools.combinations(zip(a, b), 2):
        dx, dy = (x1 > x2) - (x1 < x2), (y1 > y2) - (y1 < y2)
        if dx == 0 and dy == 0:
            continue
        if dx == 0:
            ta += 1
        elif dy == 0:
            tb += 1
        elif dx == dy:
            c += 1
        else:
            d += 1
    return (c - d) / math.sqrt((c + d + ta) * (c + d + tb))


def oracle_lcs(a, b):
    if len(a) > len(b):
        a, b = b, a
    best = 0
    for mask in range(1 << len(a)):
        sub = [a[i] for i in range(len(a)) if mask >> i & 1]
        if len(sub) <= best:
            continue
        it = iter(b)
        if all(tok in it for tok in sub):
            best = len(sub)
    return best


def oracle_bleu(cand, ref, max_n=4):
    """Independent reference computation, written against the same stated
    conventions: clipped precisions, add-one smoothing for n >= 2 zero
    counts, brevity penalty for short candidates."""
    if len(cand) == 0:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        c_counts, r_counts = {}, {}
        for i in range(len(cand) - n + 1):
            g = tuple(cand[i:i + n])
            c_counts[g] = c_counts.get(g, 0) + 1
        for i in range(len(ref) - n + 1):
            g = tuple(ref[i:i + n])
            r_counts[g] = r_counts.get(g, 0) + 1
        total = max(len(cand) - n + 1, 0)
        clipped = 0
        for g, k in c_counts.items():
            clipped += min(k, r_counts.get(g, 0))
        if n == 1:
            if clipped == 0:
                return 0.0
            p = clipped / total
        elif clipped == 0:
            p = (clipped + 1) / (total + 1)
        else:
            p = clipped / total
        log_sum += math.log(p)
    bp = math.exp(1 - len(ref) / len(cand)) if len(cand) < len(ref) else 1.0
    return bp * math.exp(log_sum / max_n)


def test_criterion_1_metric_oracles():
    t0 = time.perf_counter()
    # kendall tau on every permutation up to n = 6, exact
    tau_cases = 0
    for n in range(2, 7):
        base = list(range(n))
        for perm in itertools.permutations(base):
            assert kendall_tau(base, list(perm)) == oracle_tau(base, list(perm))
            tau_cases += 1
    # rouge-L against brute-force subsequence enumeration, exact
    rng = random.Random(101)
    vocab = list("abcdef")
    lcs_cases = 0
    while lcs_cases < 200:
        a = rng.choices(vocab, k=rng.randint(1, 12))
        b = rng.choices(vocab, k=rng.randint(1, 12))
        p, r, _ = rouge_l(a, b)
        lcs = oracle_lcs(a, b)
        assert p == lcs / len(a) and r == lcs / len(b)
        lcs_cases += 1
    # rouge-n hand-counted fixtures, exact
    assert rouge_n("the cat".split(), "the cat sat".split(), 1) == (1.0, 2 / 3, 0.8)
    assert rouge_n("a b c".split(), "a b c".split(), 2) == (1.0, 1.0, 1.0)
    assert rouge_n("x y".split(), "p q".split(), 1) == (0.0, 0.0, 0.0)
    p, r, f1 = rouge_n("a a a".split(), "a a".split(), 2)
    assert (p, r) == (0.5, 1.0)
    # bleu against the independently scripted reference, 20 fixtures, 1e-9
    bleu_cases = 0
    for _ in range(20):
        cand = rng.choices(vocab, k=rng.randint(1, 14))
        ref = rng.choices(vocab, k=rng.randint(1, 14))
        assert abs(bleu(cand, ref) - oracle_bleu(cand, ref)) < 1e-9
        bleu_cases += 1
    elapsed = time.perf_counter() - t0
    verdict(1, elapsed < 10.0,
            f"tau exact on {tau_cases} permutations, rouge-L exact on {lcs_cases} "
            f"pairs, bleu within 1e-9 on {bleu_cases} fixtures ({elapsed:.2f}s < 10s)")


# --- criterion 2: DSP correctness ---

def test_criterion_2_dsp():
    t0 = time.perf_counter()
    sr = 16000
    t = np.arange(sr) / sr
    worst = 0.0
    for freq in (80.0, 120.0, 200.0, 300.0, 350.0):
        buf = AudioBuffer(0.6 * np.sin(2 * np.pi * freq * t), sr)
        values = estimate_pitch(frame_signal(buf)).values[2:-4]
        assert np.all(~np.isnan(values))
        worst = max(worst, float(np.max(np.abs(values - freq) / freq)))
    assert worst <= 0.02

    sine = AudioBuffer(np.sin(2 * np.pi * 200.0 * t), sr)
    rms10 = rms_energy(frame_signal(sine)).values[10]
    assert abs(rms10 - 1 / math.sqrt(2)) <= 1e-3

    low = hammarberg_index(frame_signal(AudioBuffer(np.sin(2 * np.pi * 1000 * t), sr)))
    high = hammarberg_index(frame_signal(AudioBuffer(np.sin(2 * np.pi * 3000 * t), sr)))
    assert low.values[10] > 40.0 and high.values[10] < -40.0

    rng = np.random.default_rng(5)
    raw = rng.uniform(10, 50, 300)
    series = FeatureSeries(CueKind.LOUDNESS, raw, np.arange(300) * 0.01, 0.01)
    zs = zscore(series)
    round_trip = float(np.max(np.abs(zs.z * zs.sigma + zs.mu - raw)))
    assert round_trip < 1e-9

    elapsed = time.perf_counter() - t0
    verdict(2, elapsed < 5.0,
            f"pitch err {worst * 100:.3f}% <= 2%, rms 1/sqrt2 +- 1e-3, hammarberg "
            f"{low.values[10]:+.0f}/{high.values[10]:+.0f} dB, zscore round-trip "
            f"{round_trip:.1e} ({elapsed:.2f}s < 5s)")


# --- criterion 3: Algorithm 1 fixture ---

def test_criterion_3_selection_fixture():
    transcript = load_transcript(FIXTURES / "algo1.transcript.json")
    meta = VideoMeta(fps=24.0, duration=28.0)
    keywords, text_cues = textual_cue_events(transcript)
    synthetic = [
        # short pitch burst inside the first "comics" of sentence 2
        CueEvent(Modality.AUDIO, CueKind.PITCH, TimeInterval(11.3, 11.35), 2.0),
        # head movement inside the first "pictures" of sentence 5
        CueEvent(Modality.VISUAL, CueKind.HEAD_MOVE, TimeInterval(23.9, 23.95), 1.3),
    ]
    bonus = bonus_words(transcript, text_cues + synthetic, keywords)
    assert sorted(b.token for b in bonus) == ["comics", "pictures"]

    config = SummaryConfig()  # uniform weights, literal diversity
    summary = summarize(transcript, bonus, config, meta)
    selected = [s.index for s in summary.selected]
    theta_expected = 1.0 + 0.3 * math.sqrt(2.0)
    ok = (selected == [2, 5]
          and summary.weights == (0.0, 0.0, 3.0, 0.0, 0.0, 3.0)
          and abs(summary.theta - theta_expected) < 1e-9)
    verdict(3, ok, f"selected {selected} == [2, 5], theta {summary.theta:.10f} "
                   f"within 1e-9 of {theta_expected:.10f}")


# --- criterion 4: diversity arithmetic ---

def test_criterion_4_diversity_vacuity():
    rng = random.Random(77)
    vocab = ["ember", "stone", "river", "cloud", "and", "the", "meadow", "light"]
    checked = 0
    for _ in range(100):
        texts = [" ".join(rng.choices(vocab, k=rng.randint(2, 7)))
                 for _ in range(rng.randint(1, 8))]
        transcript = make_transcript(texts)
        candidates = list(transcript.sentences)
        kept = diversity_filter(candidates, SummaryConfig(diversity_factor=0.2))
        assert kept == candidates
        checked += 1
    dup = make_transcript(["the very same words", "the very same words"])
    strict = diversity_filter(list(dup.sentences),
                              SummaryConfig(diversity_mode=DiversityMode.STRICT))
    assert len(strict) == 1
    verdict(4, True, f"literal filter vacuous on {checked} random transcripts; "
                     f"strict rejects an exact duplicate")


# --- criterion 5: temporal metrics ---

def test_criterion_5_temporal():
    p, r, f1 = temporal_f1([TimeInterval(0, 10)], [TimeInterval(5, 15)])
    assert f1 == 0.0  # IoU 0.333 < 0.5
    p2, r2, f2 = temporal_f1([TimeInterval(0, 10)], [TimeInterval(1, 10)])
    assert (p2, r2, f2) == (1.0, 1.0, 1.0)  # IoU 0.9
    meta = VideoMeta(fps=24.0, duration=30.0)
    segs = [TimeInterval(2.2, 7.8), TimeInterval(11.0, 14.5)]
    assert frame_prf(segs, segs, meta) == (1.0, 1.0, 1.0)
    verdict(5, True, "IoU 0.333 rejected, IoU 0.9 matched, frame self-comparison (1,1,1)")


# --- criteria 6-9 share one synthetic corpus ---

@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("acceptance_corpus")
    manifest = make_corpus(root, n_clips=20, seed=4242)
    return manifest


def test_criterion_6_direction(corpus, tmp_path):
    mm = run_pipeline(PipelineConfig(manifest=str(corpus),
                                     out_dir=str(tmp_path / "mm")))
    ed = run_baseline(PipelineConfig(manifest=str(corpus),
                                     out_dir=str(tmp_path / "ed")))
    assert mm.ok and ed.ok and len(mm.report_rows) == 20
    f1_mm = sum(r["f1"] for r in mm.report_rows) / len(mm.report_rows)
    f1_ed = sum(r["f1"] for r in ed.report_rows) / len(ed.report_rows)
    verdict(6, f1_mm > f1_ed,
            f"multimodal mean temporal F1 {f1_mm:.4f} > edmundson {f1_ed:.4f}")


def test_criterion_7_determinism(corpus, tmp_path):
    out1, out8 = tmp_path / "w1", tmp_path / "w8"
    assert main(["summarize", str(corpus), "--out", str(out1), "--workers", "1"]) == 0
    assert main(["summarize", str(corpus), "--out", str(out8), "--workers", "8"]) == 0
    names1 = sorted(p.name for p in out1.iterdir())
    names8 = sorted(p.name for p in out8.iterdir())
    assert names1 == names8
    diff = [n for n in names1 if (out1 / n).read_bytes() != (out8 / n).read_bytes()]
    verdict(7, not diff, f"{len(names1)} artifacts byte-identical across "
                         f"worker counts 1 and 8")


def test_criterion_8_performance(corpus, tmp_path):
    # one ~15 s clip end to end
    single_root = tmp_path / "single"
    record = make_clip(single_root, "single", seed=9, n_sentences=5)
    manifest = single_root / "manifest.json"
    manifest.write_text(json.dumps([record]))
    records = load_manifest(manifest)
    from cuefuse.summarizer import default_edmundson_cues
    from cuefuse.text_cues import default_gazetteer, default_lexicon, default_stopwords
    resources = {"stopwords": default_stopwords(), "lexicon": default_lexicon(),
                 "gazetteer": default_gazetteer(),
                 "edmundson_cues": default_edmundson_cues()}
    config = PipelineConfig(manifest=str(manifest), out_dir=str(tmp_path / "o1"))
    t0 = time.perf_counter()
    result = process_video(records[0], config, resources)
    single_elapsed = time.perf_counter() - t0
    assert result.error is None and result.report is not None

    t0 = time.perf_counter()
    batch = run_pipeline(PipelineConfig(manifest=str(corpus),
                                        out_dir=str(tmp_path / "o20")))
    corpus_elapsed = time.perf_counter() - t0
    assert batch.ok
    ok = single_elapsed < 1.0 and corpus_elapsed < 10.0
    verdict(8, ok, f"single clip {single_elapsed:.2f}s < 1s, "
                   f"20-clip corpus {corpus_elapsed:.2f}s < 10s")


def test_criterion_9_round_trips(corpus, tmp_path):
    out = tmp_path / "out"
    batch = run_pipeline(PipelineConfig(manifest=str(corpus), out_dir=str(out)))
    assert batch.ok
    checked = 0
    worst_srt = 0.0
    for result in batch.results[:5]:
        summary = result.summary
        # SRT re-parse within 1 ms
        parsed = parse_srt((out / f"{summary.video_id}.srt").read_text())
        clock = 0.0
        for (iv, text), seg in zip(parsed, summary.segments):
            worst_srt = max(worst_srt, abs(iv.start - clock),
                            abs(iv.length - seg.interval.length))
            clock += seg.interval.length
        assert worst_srt <= 0.001
        # JSON artifacts reload to equal in-memory values
        assert load_summary(out / f"{summary.video_id}.summary.json") == summary
        cuts = load_cutlist(out / f"{summary.video_id}.cuts.json")
        assert load_cutlist(out / f"{summary.video_id}.cuts.json") == cuts
        checked += 1
    # loader round-trips for the remaining artifact formats
    records = load_manifest(corpus)
    pgt = load_pgt(records[0]["pgt"])
    dump_pgt(pgt, tmp_path / "p.json")
    assert load_pgt(tmp_path / "p.json") == pgt
    rng = np.random.default_rng(3)
    from cuefuse.ingest import TokenEmbeddings
    emb = TokenEmbeddings(tokens=("a", "b"), vectors=rng.normal(size=(2, 4)), dim=4)
    dump_embeddings(emb, tmp_path / "e.json")
    emb2 = load_embeddings(tmp_path / "e.json")
    assert emb2.tokens == emb.tokens and np.array_equal(emb2.vectors, emb.vectors)
    series = {
        CueKind.PITCH: FeatureSeries(CueKind.PITCH, np.array([100.0, np.nan, 120.0]),
                                     np.arange(3) * 0.01, 0.01),
        CueKind.LOUDNESS: FeatureSeries(CueKind.LOUDNESS, np.array([0.1, 0.4, 0.2]),
                                        np.arange(3) * 0.01, 0.01),
        CueKind.TONALITY: FeatureSeries(CueKind.TONALITY, np.array([3.0, 2.0, 1.0]),
                                        np.arange(3) * 0.01, 0.01),
    }
    dump_audio_features(series, tmp_path / "f.json")
    loaded = load_audio_features(tmp_path / "f.json")
    for kind in series:
        np.testing.assert_array_equal(loaded[kind].values, series[kind].values)
    verdict(9, True, f"SRT worst drift {worst_srt * 1000:.3f} ms <= 1 ms on "
                     f"{checked} clips; summary/cuts/pgt/embeddings/features reload equal")
