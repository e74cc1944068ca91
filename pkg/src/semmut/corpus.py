"""Devign-style JSONL corpus pipeline: ingest labeled functions, run the
transformation engine over every record, and compute applicability stats.

Input records are one JSON object per line with at least ``idx`` and
``func``; ``target`` carries the 0/1 ground-truth label where present and
unknown fields are preserved opaquely. Unparseable functions are skipped
with a logged reason, never guessed at.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from .codemodel import ParseFailure, SourceFunction, parse_function
from .transforms import REGISTRY, Variant, apply, find_sites

logger = logging.getLogger(__name__)


@dataclass
class DatasetRecord:
    idx: int
    func: str
    target: int | None = None
    extra: dict = field(default_factory=dict)

    def to_source_function(self) -> SourceFunction:
        return SourceFunction(id=str(self.idx), text=self.func, label=self.target)


@dataclass
class MalformedLine:
    line_no: int
    reason: str


class EmptyDataset(ValueError):
    """No valid record could be loaded from the input file."""


def load_jsonl(path: str) -> tuple[list[DatasetRecord], list[MalformedLine]]:
    """One record per line; malformed lines are reported with their line
    numbers and skipped. Raises EmptyDataset when nothing valid remains."""
    records: list[DatasetRecord] = []
    malformed: list[MalformedLine] = []
    seen: set[int] = set()
    # Binary read so one line with invalid UTF-8 stays a per-record error
    # instead of aborting the whole load.
    with open(path, "rb") as fh:
        for line_no, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                malformed.append(MalformedLine(line_no, f"invalid UTF-8: {exc}"))
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                malformed.append(MalformedLine(line_no, f"invalid JSON: {exc}"))
                continue
            if not isinstance(obj, dict):
                malformed.append(MalformedLine(line_no, "line is not a JSON object"))
                continue
            if "idx" not in obj or "func" not in obj:
                malformed.append(MalformedLine(line_no, "missing idx or func"))
                continue
            try:
                idx = int(obj["idx"])
            except (TypeError, ValueError):
                malformed.append(MalformedLine(line_no, "idx is not an integer"))
                continue
            func = obj["func"]
            if not isinstance(func, str) or not func.strip():
                malformed.append(MalformedLine(line_no, "func is not a non-empty string"))
                continue
            if idx in seen:
                malformed.append(MalformedLine(line_no, f"duplicate idx {idx}"))
                continue
            target = obj.get("target")
            if target is not None:
                try:
                    target = int(target)
                except (TypeError, ValueError):
                    malformed.append(MalformedLine(line_no, "target is not an integer"))
                    continue
                if target not in (0, 1):
                    malformed.append(MalformedLine(line_no, f"target {target} not in {{0,1}}"))
                    continue
            extra = {k: v for k, v in obj.items() if k not in ("idx", "func", "target")}
            seen.add(idx)
            records.append(DatasetRecord(idx=idx, func=func, target=target, extra=extra))
    for m in malformed:
        logger.warning("%s line %d skipped: %s", path, m.line_no, m.reason)
    if not records:
        raise EmptyDataset(f"no valid records in {path}")
    return records, malformed


@dataclass
class SkipEntry:
    idx: int
    reason: str

    def to_json(self) -> dict:
        return {"idx": self.idx, "reason": self.reason}


def variant_line(parent_idx: int, transform_id: str, site: int, func: str) -> dict:
    return {
        "variant_id": f"{parent_idx}#{transform_id}#{site}",
        "parent_idx": parent_idx,
        "transform_id": transform_id,
        "site": site,
        "func": func,
    }


def transform_record(
    record: DatasetRecord, max_sites_per_op: int = 4
) -> tuple[list[dict], SkipEntry | None]:
    """Variant lines for one record: the pass-through "orig" line first,
    then one line per produced variant in (operator, site) order."""
    try:
        unit = parse_function(record.func)
    except ParseFailure as exc:
        return [], SkipEntry(record.idx, str(exc))
    lines = [variant_line(record.idx, "orig", 0, record.func)]
    parent = str(record.idx)
    for op in REGISTRY:
        for site in find_sites(op, unit)[:max_sites_per_op]:
            try:
                variant = apply(op, unit, site, parent_id=parent)
            except Exception as exc:  # RewriteFailure and kin: drop, log
                logger.warning("idx %d: %s", record.idx, exc)
                continue
            lines.append(variant_line(record.idx, op.id, site.ordinal, variant.text))
    return lines, None


def transform_corpus(
    records: list[DatasetRecord], max_sites_per_op: int = 4
) -> tuple[list[dict], list[SkipEntry]]:
    """The whole corpus in deterministic (idx, operator, site) order."""
    out: list[dict] = []
    skips: list[SkipEntry] = []
    for record in sorted(records, key=lambda r: r.idx):
        lines, skip = transform_record(record, max_sites_per_op)
        out.extend(lines)
        if skip is not None:
            skips.append(skip)
            logger.info("idx %d skipped: %s", skip.idx, skip.reason)
    return out, skips


def write_jsonl(path: str, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")


def read_jsonl(path: str) -> list[dict]:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return rows


@dataclass
class ApplicabilityStats:
    """Applicability statistics over one transformed corpus."""

    parseable_functions: int
    per_operator_functions: dict[str, int]  # distinct parents with >=1 variant
    per_operator_rate: dict[str, float]
    histogram: dict[int, int]  # distinct-operator count -> function count
    mean_ops_per_function: float
    min_ops_per_function: int
    max_ops_per_function: int

    def to_json(self) -> dict:
        return {
            "parseable_functions": self.parseable_functions,
            "per_operator_functions": self.per_operator_functions,
            "per_operator_rate": self.per_operator_rate,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "mean_ops_per_function": self.mean_ops_per_function,
            "min_ops_per_function": self.min_ops_per_function,
            "max_ops_per_function": self.max_ops_per_function,
        }


def stats(variant_rows: list[dict]) -> ApplicabilityStats:
    """Per-operator applicability counts/rates and the per-function
    distinct-operator histogram. The "orig" pass-through lines define the
    parseable-function universe, so histogram counts sum to it."""
    parents: set[int] = set()
    ops_by_parent: dict[int, set[str]] = {}
    per_op_parents: dict[str, set[int]] = {op.id: set() for op in REGISTRY}
    for row in variant_rows:
        idx = row["parent_idx"]
        tid = row["transform_id"]
        if tid == "orig":
            parents.add(idx)
            ops_by_parent.setdefault(idx, set())
            continue
        ops_by_parent.setdefault(idx, set()).add(tid)
        per_op_parents.setdefault(tid, set()).add(idx)
    n = len(parents)
    histogram: dict[int, int] = {}
    for idx in parents:
        k = len(ops_by_parent.get(idx, ()))
        histogram[k] = histogram.get(k, 0) + 1
    counts = [len(ops_by_parent.get(idx, ())) for idx in parents]
    mean = round(sum(counts) / n, 1) if n else 0.0
    return ApplicabilityStats(
        parseable_functions=n,
        per_operator_functions={k: len(v) for k, v in sorted(per_op_parents.items())},
        per_operator_rate={
            k: (len(v) / n if n else 0.0) for k, v in sorted(per_op_parents.items())
        },
        histogram=histogram,
        mean_ops_per_function=mean,
        min_ops_per_function=min(counts) if counts else 0,
        max_ops_per_function=max(counts) if counts else 0,
    )
