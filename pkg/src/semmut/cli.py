"""semmut command line: transform, verify, stats, stub-predict, ensemble,
report.

Every subcommand is deterministic given its inputs, config, and seed. Exit
codes: 0 success, 1 usage or I/O failure, 2 empty-result degradation (e.g.
every record in a corpus failed to parse) or a failed verification gate.
Machine-readable JSON accompanies every human-readable report.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import logging
import os
import sys

from . import corpus as corpus_mod
from . import ensemble as ens
from .config import Config, ConfigError, load_config
from .corpus import read_jsonl, write_jsonl
from .ensemble import (
    SCOPE_DATA,
    SCOPE_DATA_AND_MODEL,
    SCOPE_MODEL,
    STRATEGIES,
    STRATEGY_AVERAGE,
    STRATEGY_MAJORITY_TIES0,
    STRATEGY_MAJORITY_TIES1,
    STRATEGY_WEIGHTED_LABELS,
    STRATEGY_WEIGHTED_PROBABILITY,
    EnsembleWeights,
    FitConfig,
    PredictionSet,
    evaluate,
    fit_weights,
    original_accuracy,
    transitions_by_operator,
)
from .microcorpus import load_micro_corpus
from .transforms import REGISTRY, get_operator, list_operators
from .verify import (
    BROKEN,
    PRESERVED,
    UNKNOWN,
    compiler_available,
    export_review_markdown,
    run_gate,
    run_static_gate,
    sample_for_review,
)

logger = logging.getLogger("semmut")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGRADED = 2

STRATEGY_LABELS = {
    STRATEGY_MAJORITY_TIES0: "Majority - Ties 0",
    STRATEGY_MAJORITY_TIES1: "Majority - Ties 1",
    STRATEGY_AVERAGE: "Average",
    STRATEGY_WEIGHTED_LABELS: "Weighted - Labels",
    STRATEGY_WEIGHTED_PROBABILITY: "Weighted - Probability",
}


def _build_config(args: argparse.Namespace) -> Config:
    cfg = load_config(args.config) if getattr(args, "config", None) else Config()
    for key in ("max_sites_per_op", "seed", "tie_rule", "encoding"):
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "compiler", None):
        cfg.compiler_cmd = args.compiler
    return cfg.validate()


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------


def cmd_transform(args: argparse.Namespace) -> int:
    if args.list:
        catalog = [
            {
                "id": op.id,
                "category": op.category,
                "description": op.description,
                "attribution": op.attribution,
            }
            for op in list_operators()
        ]
        text = json.dumps(catalog, indent=2)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return EXIT_OK
    if not args.input or not args.out:
        print("transform requires --in and --out (or --list)", file=sys.stderr)
        return EXIT_USAGE
    cfg = _build_config(args)
    try:
        records, malformed = corpus_mod.load_jsonl(args.input)
    except FileNotFoundError:
        print(f"input not found: {args.input}", file=sys.stderr)
        return EXIT_USAGE
    except (corpus_mod.EmptyDataset, UnicodeDecodeError) as exc:
        print(f"cannot load {args.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows, skips = corpus_mod.transform_corpus(records, cfg.max_sites_per_op)
    write_jsonl(args.out, rows)
    if args.skip_report:
        write_jsonl(args.skip_report, [s.to_json() for s in skips])
    n_variants = sum(1 for r in rows if r["transform_id"] != "orig")
    print(
        f"{len(records)} records ({len(malformed)} malformed lines), "
        f"{len(skips)} skipped, {n_variants} variants -> {args.out}"
    )
    if len(skips) == len(records):
        return EXIT_DEGRADED
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _gate_to_rows(results: dict) -> list[dict]:
    rows = []
    for op_id in sorted(results):
        for name, verdict in results[op_id]:
            rows.append(verdict.to_json(f"{name}#{op_id}"))
    return rows


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    cases = load_micro_corpus()
    operators = [get_operator(o) for o in args.ops.split(",")] if args.ops else None

    if args.review_variants:
        return _cmd_review(args, cfg)

    use_differential = not args.static_only and compiler_available(cfg.compiler_cmd)
    if use_differential:
        results = run_gate(cases, operators, cfg.compiler_cmd, timeout=args.timeout)
        mode = "differential"
    else:
        results = run_static_gate(cases, operators)
        mode = "static"
    broken = 0
    for op_id in sorted(results):
        counts = {PRESERVED: 0, UNKNOWN: 0, BROKEN: 0}
        for _, verdict in results[op_id]:
            counts[verdict.status] += 1
        broken += counts[BROKEN]
        print(
            f"{op_id}: preserved={counts[PRESERVED]} "
            f"unknown={counts[UNKNOWN]} broken={counts[BROKEN]}"
        )
        for name, verdict in results[op_id]:
            if verdict.status == BROKEN:
                print(f"  BROKEN {name}: {verdict.reasons}")
    if args.out:
        write_jsonl(args.out, _gate_to_rows(results))
    print(f"gate mode: {mode}; broken verdicts: {broken}")
    return EXIT_OK if broken == 0 else EXIT_DEGRADED


def _cmd_review(args: argparse.Namespace, cfg: Config) -> int:
    if not args.review_in or not args.review_out:
        print("--review-variants requires --review-in and --review-out", file=sys.stderr)
        return EXIT_USAGE
    from .transforms import Variant

    variant_rows = read_jsonl(args.review_variants)
    originals: dict[str, str] = {}
    for row in read_jsonl(args.review_in):
        originals[str(row["idx"])] = row["func"]
    variants = [
        Variant(
            parent_id=str(r["parent_idx"]),
            op_id=r["transform_id"],
            site=r["site"],
            variant_id=r["variant_id"],
            text=r["func"],
        )
        for r in variant_rows
        if r["transform_id"] != "orig"
    ]
    samples = sample_for_review(variants, originals, n=args.review_n, seed=cfg.seed)
    with open(args.review_out, "w", encoding="utf-8") as fh:
        fh.write(export_review_markdown(samples))
    print(f"{sum(len(s.pairs) for s in samples)} pairs -> {args.review_out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# stats
# ---------------------------------------------------------------------------


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        rows = read_jsonl(args.variants)
    except FileNotFoundError:
        print(f"variants file not found: {args.variants}", file=sys.stderr)
        return EXIT_USAGE
    st = corpus_mod.stats(rows)
    payload = st.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    print(f"parseable functions: {st.parseable_functions}")
    print(
        f"ops/function: mean {st.mean_ops_per_function} "
        f"min {st.min_ops_per_function} max {st.max_ops_per_function}"
    )
    for op_id, count in st.per_operator_functions.items():
        rate = st.per_operator_rate[op_id]
        print(f"  {op_id}: {count} functions ({rate:.1%})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# stub-predict
# ---------------------------------------------------------------------------


def stub_probability(model_id: str, text: str, seed: int) -> float:
    """Deterministic pseudo-probability from a stable hash of (model, seed,
    raw text). Textually different but semantically equal variants hash
    differently on purpose: the stub mimics a non-robust classifier."""
    digest = hashlib.sha256(
        f"{model_id}\x00{seed}\x00".encode("utf-8") + text.encode("utf-8")
    ).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def cmd_stub_predict(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    try:
        rows = read_jsonl(args.input)
    except FileNotFoundError:
        print(f"variants file not found: {args.input}", file=sys.stderr)
        return EXIT_USAGE
    out = []
    for row in rows:
        p1 = stub_probability(args.model_id, row["func"], cfg.seed)
        out.append(
            {
                "parent_idx": row["parent_idx"],
                "variant_id": row["variant_id"],
                "transform_id": row["transform_id"],
                "model_id": args.model_id,
                "label": 1 if p1 > 0.5 else 0,
                "p1": p1,
            }
        )
    write_jsonl(args.out, out)
    print(f"{len(out)} predictions -> {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# ensemble / report
# ---------------------------------------------------------------------------


def _load_truth(path: str) -> dict[int, int]:
    truth: dict[int, int] = {}
    for row in read_jsonl(path):
        if row.get("target") is not None:
            truth[int(row["idx"])] = int(row["target"])
    return truth


def _load_predictions(paths: list[str]) -> PredictionSet:
    pset = PredictionSet()
    for path in paths:
        for row in read_jsonl(path):
            pset.add(ens.Prediction.from_json(row))
    return pset


def cmd_ensemble(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    try:
        pset = _load_predictions(args.preds)
        truth = _load_truth(args.truth)
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ValueError) as exc:
        print(f"schema violation: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not truth:
        print(f"no ground-truth labels in {args.truth}", file=sys.stderr)
        return EXIT_DEGRADED

    try:
        if args.transitions_out:
            if not args.model_id:
                print("--transitions-out requires --model-id", file=sys.stderr)
                return EXIT_USAGE
            origs, variants = [], []
            for parent in pset.parents():
                o = pset.orig(parent, args.model_id)
                if o is not None:
                    origs.append(o)
                variants.extend(pset.variants(parent, args.model_id))
            matrices = transitions_by_operator(origs, variants)
            payload = {tid: tm.to_json() for tid, tm in matrices.items()}
            payload["all"] = ens.transitions(origs, variants).to_json()
            with open(args.transitions_out, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2)
                fh.write("\n")
            print(f"transition matrices -> {args.transitions_out}")
            return EXIT_OK

        if args.fit_out:
            result = fit_weights(
                pset,
                truth,
                encoding=cfg.encoding,
                scope=args.scope,
                model_id=args.model_id,
                config=FitConfig(seed=cfg.seed),
            )
            result.weights.save(args.fit_out)
            print(
                f"fitted weights (restart {result.restart}, "
                f"val accuracy {result.accuracy:.4f}) -> {args.fit_out}"
            )
            return EXIT_OK

        weights = EnsembleWeights.load(args.weights) if args.weights else None
        accuracy = evaluate(
            pset, truth, args.strategy, args.scope, model_id=args.model_id, weights=weights
        )
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ens.MissingPredictions, ens.EmptyInput, ens.DimensionMismatch,
            ens.NoValidationData, ValueError) as exc:
        print(f"ensemble error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    label = STRATEGY_LABELS.get(args.strategy, args.strategy)
    print(f"{label} [{args.scope}]: accuracy {accuracy:.4f}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "strategy": args.strategy,
                    "scope": args.scope,
                    "model_id": args.model_id,
                    "accuracy": accuracy,
                },
                fh,
                indent=2,
            )
            fh.write("\n")
    return EXIT_OK


def build_report(
    test: PredictionSet,
    truth: dict[int, int],
    val: PredictionSet | None,
    val_truth: dict[int, int] | None,
    seed: int = 42,
) -> dict:
    """Accuracy of every strategy in every scope; weighted strategies are
    fitted on the validation split when one is provided."""
    models = sorted(test.model_ids)
    report: dict = {
        "models": models,
        "original": {},
        "data_ensemble": {m: {} for m in models},
        "model_ensemble": {},
        "data_and_model": {},
    }
    for m in models:
        report["original"][m] = original_accuracy(test, truth, m)

    weighted = (STRATEGY_WEIGHTED_LABELS, STRATEGY_WEIGHTED_PROBABILITY)
    can_fit = val is not None and val_truth is not None

    def _weights_for(scope: str, strategy: str, model_id: str | None) -> EnsembleWeights:
        encoding = ens.LABELS if strategy == STRATEGY_WEIGHTED_LABELS else ens.PROBABILITY
        result = fit_weights(
            val,
            val_truth,
            encoding=encoding,
            scope=scope,
            model_id=model_id,
            config=FitConfig(seed=seed),
            transform_ids=sorted(set(val.transform_ids) | set(test.transform_ids)),
        )
        return result.weights

    for strategy in STRATEGIES:
        if strategy in weighted and not can_fit:
            continue
        for m in models:
            w = _weights_for(SCOPE_DATA, strategy, m) if strategy in weighted else None
            report["data_ensemble"][m][strategy] = evaluate(
                test, truth, strategy, SCOPE_DATA, model_id=m, weights=w
            )
        if len(models) > 1:
            w = _weights_for(SCOPE_MODEL, strategy, None) if strategy in weighted else None
            report["model_ensemble"][strategy] = evaluate(
                test, truth, strategy, SCOPE_MODEL, weights=w
            )
            w = (
                _weights_for(SCOPE_DATA_AND_MODEL, strategy, None)
                if strategy in weighted
                else None
            )
            report["data_and_model"][strategy] = evaluate(
                test, truth, strategy, SCOPE_DATA_AND_MODEL, weights=w
            )
    return report


def report_markdown(report: dict) -> str:
    models = report["models"]
    head = "| Scope | Strategy | " + " | ".join(models) + " | Combined |"
    sep = "|" + "---|" * (len(models) + 3)
    lines = ["# Ensemble strategy accuracy", "", head, sep]

    def fmt(value) -> str:
        return f"{value:.4f}" if value is not None else ""

    orig_cells = " | ".join(fmt(report["original"][m]) for m in models)
    lines.append(f"| Original | - | {orig_cells} |  |")
    for strategy in STRATEGIES:
        if strategy not in report["data_ensemble"][models[0]]:
            continue
        cells = " | ".join(fmt(report["data_ensemble"][m][strategy]) for m in models)
        lines.append(f"| Data ensemble | {STRATEGY_LABELS[strategy]} | {cells} |  |")
    for scope_key, scope_label in (
        ("model_ensemble", "Model ensemble"),
        ("data_and_model", "Data and model"),
    ):
        for strategy in STRATEGIES:
            if strategy not in report[scope_key]:
                continue
            blank = " | ".join("" for _ in models)
            lines.append(
                f"| {scope_label} | {STRATEGY_LABELS[strategy]} | {blank} | "
                f"{fmt(report[scope_key][strategy])} |"
            )
    lines.append("")
    return "\n".join(lines)


def cmd_report(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    try:
        test = _load_predictions(args.preds)
        truth = _load_truth(args.truth)
        val = _load_predictions(args.val_preds) if args.val_preds else None
        val_truth = _load_truth(args.val_truth) if args.val_truth else None
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ValueError) as exc:
        print(f"schema violation: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not truth:
        print(f"no ground-truth labels in {args.truth}", file=sys.stderr)
        return EXIT_DEGRADED
    try:
        report = build_report(test, truth, val, val_truth, seed=cfg.seed)
    except (ens.MissingPredictions, ens.EmptyInput, ens.NoValidationData) as exc:
        print(f"report error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    markdown = report_markdown(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(markdown)
    else:
        print(markdown)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semmut",
        description="Semantic-preserving mutation of C functions with "
        "verification and prediction ensembles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="mutate a corpus (or dump the operator catalog)")
    _add_common(p)
    p.add_argument("--in", dest="input", help="input corpus JSONL")
    p.add_argument("--out", help="output variants JSONL (or catalog path with --list)")
    p.add_argument("--skip-report", help="skip report JSONL path")
    p.add_argument("--max-sites-per-op", dest="max_sites_per_op", type=int, default=None)
    p.add_argument("--list", action="store_true", help="dump the operator catalog as JSON")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="run the preservation gate on the micro-corpus")
    _add_common(p)
    p.add_argument("--ops", help="comma-separated operator ids (default: all)")
    p.add_argument("--static-only", action="store_true", help="skip compile/run checks")
    p.add_argument("--compiler", help="compiler command (SEMMUT_CC overrides)")
    p.add_argument("--timeout", type=float, default=10.0)
    p.add_argument("--out", help="verdicts JSONL path")
    p.add_argument("--review-variants", help="variants JSONL to sample for manual review")
    p.add_argument("--review-in", help="original corpus JSONL for review pairs")
    p.add_argument("--review-out", help="review Markdown path")
    p.add_argument("--review-n", type=int, default=20)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="applicability statistics of a variants file")
    _add_common(p)
    p.add_argument("--variants", required=True)
    p.add_argument("--out", help="stats JSON path")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("stub-predict", help="deterministic hash-based pseudo-classifier")
    _add_common(p)
    p.add_argument("--in", dest="input", required=True, help="variants JSONL")
    p.add_argument("--out", required=True, help="predictions JSONL")
    p.add_argument("--model-id", required=True)
    p.set_defaults(func=cmd_stub_predict)

    p = sub.add_parser("ensemble", help="fit weights / evaluate one strategy / transitions")
    _add_common(p)
    p.add_argument("--preds", nargs="+", required=True, help="prediction JSONL files")
    p.add_argument("--truth", required=True, help="corpus JSONL with target labels")
    p.add_argument("--scope", choices=[SCOPE_DATA, SCOPE_MODEL, SCOPE_DATA_AND_MODEL],
                   default=SCOPE_DATA_AND_MODEL)
    p.add_argument("--strategy", choices=list(STRATEGIES), default=STRATEGY_AVERAGE)
    p.add_argument("--model-id", help="model for data scope / transitions")
    p.add_argument("--weights", help="weights JSON for weighted strategies")
    p.add_argument("--fit-out", help="fit weights on these predictions and write them here")
    p.add_argument("--transitions-out", help="write per-operator transition matrices JSON")
    p.add_argument("--encoding", choices=["labels", "probability"], default=None)
    p.add_argument("--json", help="machine-readable result path")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("report", help="full strategy-by-scope accuracy table")
    _add_common(p)
    p.add_argument("--preds", nargs="+", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--val-preds", nargs="+", help="validation predictions for weight fitting")
    p.add_argument("--val-truth", help="validation corpus JSONL with targets")
    p.add_argument("--out", help="Markdown report path")
    p.add_argument("--json", help="JSON report path")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("SEMMUT_LOG", "WARNING"))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
