import json

import pytest

from semmut.cli import main
from semmut.corpus import read_jsonl


def run(argv):
    return main(argv)


class TestTransformCommand:
    def test_valid_corpus_exit_zero(self, toy_corpus_path, tmp_path):
        out = tmp_path / "variants.jsonl"
        skips = tmp_path / "skips.jsonl"
        code = run(
            ["transform", "--in", toy_corpus_path, "--out", str(out),
             "--skip-report", str(skips)]
        )
        assert code == 0
        rows = read_jsonl(str(out))
        assert any(r["transform_id"] == "orig" for r in rows)
        skipped = read_jsonl(str(skips))
        assert len(skipped) == 1 and skipped[0]["idx"] == 3

    def test_missing_input_exit_one(self, tmp_path):
        code = run(["transform", "--in", str(tmp_path / "nope.jsonl"), "--out",
                    str(tmp_path / "o.jsonl")])
        assert code == 1

    def test_all_unparseable_exit_two(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        with open(path, "w") as fh:
            fh.write(json.dumps({"idx": 1, "func": "int broken("}) + "\n")
            fh.write(json.dumps({"idx": 2, "func": "}{"}) + "\n")
        out = tmp_path / "v.jsonl"
        skips = tmp_path / "s.jsonl"
        code = run(["transform", "--in", str(path), "--out", str(out),
                    "--skip-report", str(skips)])
        assert code == 2
        assert len(read_jsonl(str(skips))) == 2

    def test_operator_catalog(self, capsys):
        assert run(["transform", "--list"]) == 0
        catalog = json.loads(capsys.readouterr().out)
        assert len(catalog) == 16
        assert set(catalog[0]) == {"id", "category", "description", "attribution"}

    def test_config_file_and_flag_override(self, toy_corpus_path, tmp_path):
        cfg = tmp_path / "semmut.cfg"
        cfg.write_text('max_sites_per_op = 1\nseed = 7\ncompiler_cmd = "cc -O0"\n')
        out1 = tmp_path / "v1.jsonl"
        assert run(["transform", "--config", str(cfg), "--in", toy_corpus_path,
                    "--out", str(out1)]) == 0
        # flag overrides the file value
        out2 = tmp_path / "v2.jsonl"
        assert run(["transform", "--config", str(cfg), "--in", toy_corpus_path,
                    "--out", str(out2), "--max-sites-per-op", "4"]) == 0
        assert len(read_jsonl(str(out1))) <= len(read_jsonl(str(out2)))

    def test_bad_config_exit_one(self, toy_corpus_path, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("tie_rule = coinflip\n")
        assert run(["transform", "--config", str(cfg), "--in", toy_corpus_path,
                    "--out", str(tmp_path / "v.jsonl")]) == 1


class TestStubPredict:
    @pytest.fixture
    def variants_path(self, toy_corpus_path, tmp_path):
        out = tmp_path / "variants.jsonl"
        assert run(["transform", "--in", toy_corpus_path, "--out", str(out)]) == 0
        return str(out)

    def test_deterministic(self, variants_path, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for out in (a, b):
            assert run(["stub-predict", "--in", variants_path, "--out", str(out),
                        "--model-id", "mA", "--seed", "42"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_model_id_changes_predictions(self, variants_path, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run(["stub-predict", "--in", variants_path, "--out", str(a),
             "--model-id", "mA"])
        run(["stub-predict", "--in", variants_path, "--out", str(b),
             "--model-id", "mB"])
        pa = [r["p1"] for r in read_jsonl(str(a))]
        pb = [r["p1"] for r in read_jsonl(str(b))]
        assert pa != pb

    def test_orig_lines_predicted_and_schema_valid(self, variants_path, tmp_path):
        out = tmp_path / "p.jsonl"
        run(["stub-predict", "--in", variants_path, "--out", str(out),
             "--model-id", "mA"])
        rows = read_jsonl(str(out))
        assert any(r["transform_id"] == "orig" for r in rows)
        for r in rows:
            assert set(r) == {"parent_idx", "variant_id", "transform_id",
                              "model_id", "label", "p1"}
            assert r["label"] in (0, 1) and 0.0 <= r["p1"] <= 1.0
            assert r["label"] == (1 if r["p1"] > 0.5 else 0)


class TestEnsembleCommand:
    @pytest.fixture
    def pipeline(self, toy_corpus_path, tmp_path):
        variants = tmp_path / "variants.jsonl"
        run(["transform", "--in", toy_corpus_path, "--out", str(variants)])
        pa = tmp_path / "pa.jsonl"
        pb = tmp_path / "pb.jsonl"
        run(["stub-predict", "--in", str(variants), "--out", str(pa), "--model-id", "mA"])
        run(["stub-predict", "--in", str(variants), "--out", str(pb), "--model-id", "mB"])
        return str(pa), str(pb)

    def test_eval_matches_hand_computation(self, pipeline, toy_corpus_path, capsys):
        pa, pb = pipeline
        code = run(["ensemble", "--preds", pa, "--truth", toy_corpus_path,
                    "--scope", "data", "--model-id", "mA",
                    "--strategy", "majority-ties0"])
        assert code == 0
        printed = capsys.readouterr().out
        # independent recomputation from the raw files
        rows = read_jsonl(pa)
        truth = {r["idx"]: r["target"] for r in read_jsonl(toy_corpus_path)
                 if r.get("target") is not None}
        correct = total = 0
        parents = sorted({r["parent_idx"] for r in rows if r["parent_idx"] in truth})
        for parent in parents:
            labels = [r["label"] for r in rows if r["parent_idx"] == parent]
            vote = 1 if labels.count(1) > labels.count(0) else 0
            correct += int(vote == truth[parent])
            total += 1
        assert f"{correct / total:.4f}" in printed

    def test_fit_then_eval_weighted(self, pipeline, toy_corpus_path, tmp_path, capsys):
        pa, pb = pipeline
        weights = tmp_path / "w.json"
        assert run(["ensemble", "--preds", pa, pb, "--truth", toy_corpus_path,
                    "--fit-out", str(weights), "--encoding", "labels"]) == 0
        saved = json.loads(weights.read_text())
        assert set(saved) == {"model_ids", "transform_ids", "weights"}
        assert len(saved["weights"]) == len(saved["model_ids"]) + len(saved["transform_ids"])
        assert run(["ensemble", "--preds", pa, pb, "--truth", toy_corpus_path,
                    "--strategy", "weighted-labels", "--weights", str(weights),
                    "--json", str(tmp_path / "r.json")]) == 0
        result = json.loads((tmp_path / "r.json").read_text())
        assert 0.0 <= result["accuracy"] <= 1.0

    def test_unknown_strategy_exit_one(self, pipeline, toy_corpus_path):
        pa, _ = pipeline
        assert run(["ensemble", "--preds", pa, "--truth", toy_corpus_path,
                    "--strategy", "coin-flip"]) == 1

    def test_transitions_output(self, pipeline, toy_corpus_path, tmp_path):
        pa, _ = pipeline
        out = tmp_path / "trans.json"
        assert run(["ensemble", "--preds", pa, "--truth", toy_corpus_path,
                    "--transitions-out", str(out), "--model-id", "mA"]) == 0
        payload = json.loads(out.read_text())
        assert "all" in payload
        total = payload["all"]["total"]
        assert total == sum(payload["all"][k] for k in ("0->0", "0->1", "1->0", "1->1"))


class TestReportCommand:
    def test_full_report(self, toy_corpus_path, tmp_path):
        variants = tmp_path / "variants.jsonl"
        run(["transform", "--in", toy_corpus_path, "--out", str(variants)])
        preds = []
        for mid in ("mA", "mB"):
            p = tmp_path / f"{mid}.jsonl"
            run(["stub-predict", "--in", str(variants), "--out", str(p),
                 "--model-id", mid])
            preds.append(str(p))
        md = tmp_path / "report.md"
        js = tmp_path / "report.json"
        code = run(["report", "--preds", *preds, "--truth", toy_corpus_path,
                    "--val-preds", *preds, "--val-truth", toy_corpus_path,
                    "--out", str(md), "--json", str(js)])
        assert code == 0
        text = md.read_text()
        assert "| Original |" in text
        assert "Weighted - Labels" in text
        assert "Model ensemble" in text and "Data and model" in text
        payload = json.loads(js.read_text())
        assert set(payload["data_ensemble"]) == {"mA", "mB"}
        for strategy, acc in payload["model_ensemble"].items():
            assert 0.0 <= acc <= 1.0


class TestVerifyCommand:
    def test_static_gate_via_cli(self, tmp_path, capsys):
        out = tmp_path / "verdicts.jsonl"
        code = run(["verify", "--static-only", "--ops", "T10,T15", "--out", str(out)])
        assert code == 0
        printed = capsys.readouterr().out
        assert "broken verdicts: 0" in printed
        for row in read_jsonl(str(out)):
            assert set(row) == {"variant_id", "status", "reasons"}

    def test_review_export(self, toy_corpus_path, tmp_path):
        variants = tmp_path / "variants.jsonl"
        run(["transform", "--in", toy_corpus_path, "--out", str(variants)])
        review = tmp_path / "review.md"
        code = run(["verify", "--review-variants", str(variants),
                    "--review-in", toy_corpus_path, "--review-out", str(review),
                    "--review-n", "2"])
        assert code == 0
        assert "Variant review sheet" in review.read_text()
