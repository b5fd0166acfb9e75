import json
from pathlib import Path

import pytest

from cuefuse.cli import main
from cuefuse.errors import TooFewVersions
from cuefuse.pipeline import (PipelineConfig, load_manifest, run_baseline,
                              run_consistency, run_evaluate, run_pipeline)
from synthcorpus import make_clip


@pytest.fixture(scope="module")
def corpus3(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus3")
    records = [make_clip(root, f"clip{k:03d}", seed=300 + k) for k in range(3)]
    manifest = root / "manifest.json"
    manifest.write_text(json.dumps(records, indent=1))
    return manifest, records


class TestPipeline:
    def test_three_videos_full_outputs(self, corpus3, tmp_path):
        manifest, records = corpus3
        out = tmp_path / "out"
        batch = run_pipeline(PipelineConfig(manifest=str(manifest), out_dir=str(out)))
        assert batch.ok
        for rec in records:
            vid = rec["video_id"]
            for suffix in (".summary.json", ".srt", ".cuts.json", ".cut.sh"):
                assert (out / f"{vid}{suffix}").exists()
        assert (out / "report.json").exists()
        assert (out / "report.csv").exists()
        assert len(batch.report_rows) == 3

    def test_missing_file_isolated(self, corpus3, tmp_path):
        manifest, _ = corpus3
        broken = [dict(r) for r in load_manifest(manifest)]  # absolute paths
        broken[1]["audio"] = "does_not_exist.wav"
        bad_manifest = tmp_path / "manifest.json"
        bad_manifest.write_text(json.dumps(broken, indent=1))
        out = tmp_path / "out"
        batch = run_pipeline(PipelineConfig(manifest=str(bad_manifest), out_dir=str(out)))
        assert len(batch.failed) == 1
        assert batch.failed[0]["video_id"] == broken[1]["video_id"]
        assert (out / f"{broken[0]['video_id']}.summary.json").exists()
        assert (out / f"{broken[2]['video_id']}.summary.json").exists()
        assert (out / "failures.json").exists()

    def test_text_only_mask_skips_other_loaders(self, corpus3, tmp_path):
        manifest, _ = corpus3
        broken = [dict(r) for r in load_manifest(manifest)]
        for rec in broken:
            rec["audio"] = "missing.wav"
            rec["pose"] = "missing.json"
            rec["emotion"] = "missing.json"
        masked_manifest = tmp_path / "manifest.json"
        masked_manifest.write_text(json.dumps(broken, indent=1))
        out = tmp_path / "out"
        batch = run_pipeline(PipelineConfig(manifest=str(masked_manifest),
                                            out_dir=str(out),
                                            modalities=frozenset({"text"})))
        assert batch.ok  # audio/visual files never touched

    def test_deterministic_across_workers(self, corpus3, tmp_path):
        manifest, _ = corpus3
        out1, out8 = tmp_path / "w1", tmp_path / "w8"
        run_pipeline(PipelineConfig(manifest=str(manifest), out_dir=str(out1), workers=1))
        run_pipeline(PipelineConfig(manifest=str(manifest), out_dir=str(out8), workers=8))
        files1 = sorted(p.name for p in out1.iterdir())
        assert files1 == sorted(p.name for p in out8.iterdir())
        for name in files1:
            assert (out1 / name).read_bytes() == (out8 / name).read_bytes(), name


class TestBaseline:
    def test_ratio_one_returns_transcripts(self, corpus3, tmp_path):
        manifest, _ = corpus3
        out = tmp_path / "out"
        batch = run_baseline(PipelineConfig(manifest=str(manifest), out_dir=str(out),
                                            baseline_ratio=1.0))
        assert batch.ok
        for rec in load_manifest(manifest):
            doc = json.loads((out / f"{rec['video_id']}.summary.json").read_text())
            transcript = json.loads(Path(rec["transcript"]).read_text())
            assert len(doc["sentences"]) == len(transcript["sentences"])
            assert doc["method"] == "edmundson"

    def test_report_rows_tagged(self, corpus3, tmp_path):
        manifest, _ = corpus3
        batch = run_baseline(PipelineConfig(manifest=str(manifest),
                                            out_dir=str(tmp_path / "out")))
        assert all(row["method"] == "edmundson" for row in batch.report_rows)


class TestEvaluate:
    def test_scores_precomputed_summaries(self, corpus3, tmp_path):
        manifest, _ = corpus3
        out = tmp_path / "summaries"
        run_pipeline(PipelineConfig(manifest=str(manifest), out_dir=str(out)))
        out2 = tmp_path / "eval"
        batch = run_evaluate(PipelineConfig(manifest=str(manifest), out_dir=str(out2),
                                            summaries_dir=str(out)))
        assert not batch.failed
        assert len(batch.report_rows) == 3
        assert (out2 / "report.csv").exists()


class TestConsistency:
    def write_pgt(self, path, sentences):
        entries = [[float(i), float(i) + 0.9, s] for i, s in enumerate(sentences)]
        path.write_text(json.dumps({"entries": entries}))

    def manifest_with_versions(self, tmp_path, version_sets):
        records = []
        for i, versions in enumerate(version_sets):
            paths = []
            for j, sentences in enumerate(versions):
                p = tmp_path / f"v{i}_{j}.pgt.json"
                self.write_pgt(p, sentences)
                paths.append(p.name)
            t = tmp_path / f"v{i}.transcript.json"
            t.write_text(json.dumps({"video_id": f"v{i}", "sentences": [
                {"index": 0, "start": 0.0, "end": 1.0,
                 "words": [{"w": "hello", "start": 0.0, "end": 1.0}]}]}))
            records.append({"video_id": f"v{i}", "fps": 24.0, "duration": 20.0,
                            "transcript": t.name, "pgt_versions": paths})
        manifest = tmp_path / "manifest.json"
        manifest.write_text(json.dumps(records))
        return manifest

    def test_identical_versions(self, tmp_path):
        manifest = self.manifest_with_versions(tmp_path, [[["same text"], ["same text"]]])
        doc = run_consistency(PipelineConfig(manifest=str(manifest),
                                             out_dir=str(tmp_path / "out")))
        assert doc["per_video"]["v0"] == 1.0

    def test_disjoint_versions(self, tmp_path):
        manifest = self.manifest_with_versions(tmp_path, [[["aaa bbb"], ["ccc ddd"]]])
        doc = run_consistency(PipelineConfig(manifest=str(manifest),
                                             out_dir=str(tmp_path / "out")))
        assert doc["per_video"]["v0"] == 0.0

    def test_hand_value_half(self, tmp_path):
        manifest = self.manifest_with_versions(tmp_path, [[["aa bb cc"], ["bb cc dd"]]])
        doc = run_consistency(PipelineConfig(manifest=str(manifest),
                                             out_dir=str(tmp_path / "out")))
        assert doc["per_video"]["v0"] == 0.5

    def test_too_few_versions(self, tmp_path):
        manifest = self.manifest_with_versions(tmp_path, [[["only one"]]])
        with pytest.raises(TooFewVersions):
            run_consistency(PipelineConfig(manifest=str(manifest),
                                           out_dir=str(tmp_path / "out")))


class TestCli:
    def test_summarize_verb(self, corpus3, tmp_path):
        manifest, records = corpus3
        out = tmp_path / "out"
        code = main(["summarize", str(manifest), "--out", str(out)])
        assert code == 0
        assert (out / f"{records[0]['video_id']}.summary.json").exists()

    def test_baseline_verb(self, corpus3, tmp_path):
        manifest, _ = corpus3
        code = main(["baseline", str(manifest), "--out", str(tmp_path / "out"),
                     "--ratio", "0.5"])
        assert code == 0

    def test_dump_cues_writes_debug_files(self, corpus3, tmp_path):
        manifest, records = corpus3
        out = tmp_path / "out"
        code = main(["dump-cues", str(manifest), "--out", str(out)])
        assert code == 0
        vid = records[0]["video_id"]
        assert (out / f"{vid}.audio_pitch.csv").exists()
        assert (out / f"{vid}.audio_loudness.csv").exists()
        assert (out / f"{vid}.visual.csv").exists()
        assert (out / f"{vid}.bonus.json").exists()
        header = (out / f"{vid}.audio_pitch.csv").read_text().splitlines()[0]
        assert header == "frame_time,raw,z"
        header = (out / f"{vid}.visual.csv").read_text().splitlines()[0]
        assert header == "frame_time,displacement,threshold,flagged"

    def test_config_file_overridden_by_flags(self, corpus3, tmp_path):
        manifest, _ = corpus3
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"baseline_ratio": 1.0}))
        out = tmp_path / "out"
        code = main(["baseline", str(manifest), "--out", str(out),
                     "--config", str(cfg_path), "--ratio", "0.5"])
        assert code == 0
        doc = json.loads(next(out.glob("*.summary.json")).read_text())
        # 6 sentences at ratio 0.5 -> 3 kept (flag wins over config file)
        assert len(doc["sentences"]) == 3

    def test_workers_env_var(self, corpus3, tmp_path, monkeypatch):
        manifest, _ = corpus3
        monkeypatch.setenv("CUEFUSE_WORKERS", "4")
        code = main(["summarize", str(manifest), "--out", str(tmp_path / "out")])
        assert code == 0

    def test_bad_manifest_exit_code(self, tmp_path):
        missing = tmp_path / "nope.json"
        assert main(["summarize", str(missing), "--out", str(tmp_path / "out")]) == 2

    def test_failed_video_nonzero_exit(self, corpus3, tmp_path):
        manifest, _ = corpus3
        broken = [dict(load_manifest(manifest)[0])]
        broken[0]["transcript"] = "missing.json"
        bad = tmp_path / "manifest.json"
        bad.write_text(json.dumps(broken))
        assert main(["summarize", str(bad), "--out", str(tmp_path / "out")]) == 1

    def test_evaluate_verb(self, corpus3, tmp_path):
        manifest, _ = corpus3
        summaries = tmp_path / "summaries"
        main(["summarize", str(manifest), "--out", str(summaries)])
        code = main(["evaluate", str(manifest), "--out", str(tmp_path / "eval"),
                     "--summaries", str(summaries)])
        assert code == 0
        assert (tmp_path / "eval" / "report.json").exists()

    def test_consistency_verb(self, tmp_path):
        helper = TestConsistency()
        manifest = helper.manifest_with_versions(
            tmp_path, [[["aa bb cc"], ["bb cc dd"]]])
        code = main(["consistency", str(manifest), "--out", str(tmp_path / "out")])
        assert code == 0
        doc = json.loads((tmp_path / "out" / "consistency.json").read_text())
        assert doc["corpus_mean"] == 0.5
