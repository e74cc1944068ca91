"""Mechanical semantic-preservation checks for transform variants.

Three layers, from cheap to thorough:

* static checks — scope regressions (a variant must not turn a resolved
  identifier use into an unresolved one), diff containment for single-site
  rewrites, and token-stream identity for formatting rewrites;
* compile checks — syntax-only compilation with generated forward
  declarations for called externals (advisory: Unknown without a toolchain);
* differential checks — compile and run original vs. every variant of a
  bundled micro-corpus case under a fixed driver and require byte-identical
  stdout.

Review sampling exports side-by-side (original, variant) pairs to Markdown
so a human can audit up to N variants per operator.
"""

from __future__ import annotations

import os
import random
import shutil
import subprocess
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .codemodel import ParseFailure, SyntaxUnit, code_token_texts, parse_function, resolve_scopes
from .transforms import (
    REGISTRY,
    RewriteFailure,
    Site,
    TransformOperator,
    Variant,
    apply,
    find_sites,
)

DEFAULT_COMPILER = "cc -std=c11 -O0"
COMPILER_ENV = "SEMMUT_CC"

PRESERVED = "Preserved"
BROKEN = "Broken"
UNKNOWN = "Unknown"


@dataclass
class Verdict:
    status: str
    reasons: list[tuple[str, str]] = field(default_factory=list)

    @classmethod
    def preserved(cls) -> "Verdict":
        return cls(PRESERVED)

    @classmethod
    def broken(cls, check: str, message: str) -> "Verdict":
        return cls(BROKEN, [(check, message)])

    @classmethod
    def unknown(cls, check: str, message: str) -> "Verdict":
        return cls(UNKNOWN, [(check, message)])

    def merge(self, other: "Verdict") -> "Verdict":
        order = {BROKEN: 2, UNKNOWN: 1, PRESERVED: 0}
        status = self.status if order[self.status] >= order[other.status] else other.status
        return Verdict(status, self.reasons + other.reasons)

    def to_json(self, variant_id: str) -> dict:
        return {
            "variant_id": variant_id,
            "status": self.status,
            "reasons": [f"{check}: {msg}" for check, msg in self.reasons],
        }


class ToolchainError(RuntimeError):
    """The external compiler misbehaved in a way that is not a plain
    compile failure (e.g. it could not be executed at all mid-run)."""


# ---------------------------------------------------------------------------
# Static checks
# ---------------------------------------------------------------------------


def _unresolved_use_names(unit: SyntaxUnit) -> set[str]:
    sm = resolve_scopes(unit)
    return {unit.tokens[ti].text for ti, d in sm.resolution.items() if d is None}


def _resolved_use_names(unit: SyntaxUnit) -> set[str]:
    sm = resolve_scopes(unit)
    return {unit.tokens[ti].text for ti, d in sm.resolution.items() if d is not None}


def _diff_region(original: bytes, variant: bytes) -> tuple[int, int]:
    """Differing region of ``original`` as (start, end) byte offsets, found
    by stripping the common prefix and suffix."""
    p = 0
    limit = min(len(original), len(variant))
    while p < limit and original[p] == variant[p]:
        p += 1
    s = 0
    while s < limit - p and original[len(original) - 1 - s] == variant[len(variant) - 1 - s]:
        s += 1
    return p, len(original) - s


def check_static(
    original: SyntaxUnit,
    variant: SyntaxUnit,
    operator: TransformOperator | None = None,
    edit_region: tuple[int, int] | None = None,
) -> Verdict:
    """Static preservation checks between a function and one variant.

    Always checks for scope regressions. When the operator is known, also
    checks diff containment (non-formatting) or token-stream identity
    (formatting).
    """
    reasons: list[tuple[str, str]] = []

    newly_unresolved = _unresolved_use_names(variant) - _unresolved_use_names(original)
    regressions = sorted(newly_unresolved & _resolved_use_names(original))
    for name in regressions:
        reasons.append(("scope", f"unresolved identifier {name}"))

    if operator is not None and operator.category == "Formatting":
        if code_token_texts(variant.text) != code_token_texts(original.text):
            reasons.append(("tokens", "token streams differ for a formatting operator"))
    elif operator is not None and edit_region is not None:
        lo, hi = edit_region
        p, q = _diff_region(original.src, variant.src)
        if p < q and not (lo <= p and q <= hi):
            reasons.append(
                ("locality", f"diff region [{p},{q}) escapes declared edit span [{lo},{hi})")
            )

    if reasons:
        return Verdict(BROKEN, reasons)
    return Verdict.preserved()


# ---------------------------------------------------------------------------
# Compile checks
# ---------------------------------------------------------------------------


def resolve_compiler(compiler_cmd: str | None = None) -> str:
    # The environment variable wins over configured values by contract.
    return os.environ.get(COMPILER_ENV) or compiler_cmd or DEFAULT_COMPILER


def compiler_available(compiler_cmd: str | None = None) -> bool:
    cmd = resolve_compiler(compiler_cmd).split()
    return bool(cmd) and shutil.which(cmd[0]) is not None


def _forward_declarations(text: str) -> str:
    """`extern int name();` lines for every unresolved identifier that is
    used as a call. Unresolved plain identifiers are deliberately left
    undeclared: an undefined-variable regression must fail the compile."""
    try:
        unit = parse_function(text)
    except ParseFailure:
        return ""
    sm = resolve_scopes(unit)
    called: set[str] = set()
    for ti, decl in sm.resolution.items():
        if decl is not None:
            continue
        nxt = ti + 1
        while nxt < len(unit.tokens) and unit.tokens[nxt].kind == "comment":
            nxt += 1
        if nxt < len(unit.tokens) and unit.tokens[nxt].is_punct("("):
            called.add(unit.tokens[ti].text)
    return "".join(f"extern int {name}();\n" for name in sorted(called))


def check_compile(
    variant_text: str,
    compiler_cmd: str | None = None,
    timeout: float = 30.0,
) -> Verdict:
    """Syntax-only compile of a single function, wrapped with generated
    forward declarations for called externals. Unknown without a toolchain."""
    cmd = resolve_compiler(compiler_cmd)
    if not compiler_available(cmd):
        return Verdict.unknown("compile", f"compiler not available: {cmd.split()[0]}")
    source = _forward_declarations(variant_text) + variant_text + "\n"
    with tempfile.TemporaryDirectory(prefix="semmut-cc-") as tmp:
        path = os.path.join(tmp, "fn.c")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(source)
        argv = cmd.split() + ["-fsyntax-only", path]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except FileNotFoundError:
            return Verdict.unknown("compile", f"compiler not available: {argv[0]}")
        except subprocess.TimeoutExpired as exc:
            raise ToolchainError(f"compiler timed out: {argv}") from exc
    if proc.returncode == 0:
        return Verdict.preserved()
    diag = (proc.stderr or proc.stdout).strip().splitlines()
    head = diag[0] if diag else f"exit code {proc.returncode}"
    return Verdict.broken("compile", head)


# ---------------------------------------------------------------------------
# Differential checks
# ---------------------------------------------------------------------------


@dataclass
class DifferentialCase:
    """A self-contained function plus a deterministic main() driver that
    exercises it over a fixed input grid and prints decimal results."""

    name: str
    function_source: str
    driver_source: str
    fingerprint: str | None = None


def _function_name(text: str) -> str:
    unit = parse_function(text)
    return unit.tokens[unit.function.meta["name_ti"]].text


def assemble_program(function_text: str, driver_source: str) -> str:
    """Full C program: the driver calls the function under test through the
    FUT macro so renamed-function variants stay linkable."""
    name = _function_name(function_text)
    return f"#define FUT {name}\n{function_text}\n{driver_source}"


def _compile_and_run(
    program: str, workdir: str, tag: str, compiler: str, timeout: float
) -> tuple[str | None, bytes, str]:
    """Returns (failure_kind, stdout, detail); failure_kind None on success."""
    src = os.path.join(workdir, f"{tag}.c")
    binary = os.path.join(workdir, f"{tag}.bin")
    with open(src, "w", encoding="utf-8") as fh:
        fh.write(program)
    try:
        cc = subprocess.run(
            compiler.split() + ["-o", binary, src],
            capture_output=True,
            text=True,
            timeout=timeout,
        )
    except subprocess.TimeoutExpired:
        return "compile", b"", "compiler timeout"
    if cc.returncode != 0:
        head = (cc.stderr or cc.stdout).strip().splitlines()
        return "compile", b"", head[0] if head else f"cc exit {cc.returncode}"
    try:
        run = subprocess.run([binary], capture_output=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        return "timeout", b"", f"run exceeded {timeout}s"
    if run.returncode != 0:
        return "run", run.stdout, f"exit code {run.returncode}"
    return None, run.stdout, ""


def check_differential(
    case: DifferentialCase,
    op: TransformOperator,
    compiler_cmd: str | None = None,
    timeout: float = 10.0,
) -> Verdict:
    """Apply ``op`` at every applicable site of ``case`` and require each
    variant's compiled run to reproduce the original stdout byte for byte."""
    compiler = resolve_compiler(compiler_cmd)
    if not compiler_available(compiler):
        return Verdict.unknown("differential", f"compiler not available: {compiler.split()[0]}")
    try:
        unit = parse_function(case.function_source)
    except ParseFailure as exc:
        return Verdict.broken("differential", f"case does not parse: {exc}")
    sites = find_sites(op, unit)
    if not sites:
        return Verdict.unknown("differential", f"{op.id} not applicable to {case.name}")

    with tempfile.TemporaryDirectory(prefix=f"semmut-diff-{case.name}-") as tmp:
        fail, baseline, detail = _compile_and_run(
            assemble_program(case.function_source, case.driver_source),
            tmp,
            "orig",
            compiler,
            timeout,
        )
        if fail:
            return Verdict.broken("differential", f"original {fail}: {detail}")
        if case.fingerprint is not None and baseline.decode() != case.fingerprint:
            return Verdict.broken("differential", "original output does not match fingerprint")

        verdict = Verdict.preserved()
        for site in sites:
            try:
                variant = apply(op, unit, site, parent_id=case.name)
            except RewriteFailure as exc:
                verdict.reasons.append(("rewrite", str(exc)))
                continue
            fail, out, detail = _compile_and_run(
                assemble_program(variant.text, case.driver_source),
                tmp,
                f"site{site.ordinal}",
                compiler,
                timeout,
            )
            if fail == "timeout":
                return Verdict.broken("timeout", f"{variant.variant_id}: {detail}")
            if fail:
                return Verdict.broken("differential", f"{variant.variant_id} {fail}: {detail}")
            if out != baseline:
                return Verdict.broken(
                    "differential", f"{variant.variant_id}: output mismatch"
                )
        return verdict


def run_gate(
    cases: list[DifferentialCase],
    operators: list[TransformOperator] | None = None,
    compiler_cmd: str | None = None,
    timeout: float = 10.0,
    max_workers: int | None = None,
) -> dict[str, list[tuple[str, Verdict]]]:
    """Differential gate over the micro-corpus: every operator against every
    case, parallel per (case, operator) pair. Returns verdicts grouped by
    operator id."""
    operators = operators if operators is not None else REGISTRY
    jobs = [(op, case) for op in operators for case in cases]
    results: dict[str, list[tuple[str, Verdict]]] = {op.id: [] for op in operators}
    workers = max_workers or min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        verdicts = pool.map(
            lambda job: check_differential(job[1], job[0], compiler_cmd, timeout), jobs
        )
        for (op, case), verdict in zip(jobs, verdicts):
            results[op.id].append((case.name, verdict))
    return results


def run_static_gate(
    cases: list[DifferentialCase],
    operators: list[TransformOperator] | None = None,
) -> dict[str, list[tuple[str, Verdict]]]:
    """Toolchain-free subset of the gate: every variant must pass the static
    scope/locality/token checks against its original."""
    operators = operators if operators is not None else REGISTRY
    results: dict[str, list[tuple[str, Verdict]]] = {op.id: [] for op in operators}
    for case in cases:
        unit = parse_function(case.function_source)
        for op in operators:
            for site in find_sites(op, unit):
                try:
                    variant = apply(op, unit, site, parent_id=case.name)
                except RewriteFailure as exc:
                    results[op.id].append(
                        (case.name, Verdict.unknown("rewrite", str(exc)))
                    )
                    continue
                vunit = parse_function(variant.text)
                verdict = check_static(unit, vunit, op, variant.edit_span)
                results[op.id].append((f"{case.name}#{site.ordinal}", verdict))
    return results


# ---------------------------------------------------------------------------
# Review sampling
# ---------------------------------------------------------------------------


@dataclass
class ReviewSample:
    op_id: str
    pairs: list[tuple[str, Variant]]  # (original text, variant)
    verdict: str = ""  # reviewer slot, filled by a human


def sample_for_review(
    variants: list[Variant],
    originals: dict[str, str],
    n: int = 20,
    seed: int = 42,
) -> list[ReviewSample]:
    """Per operator, min(n, available) (original, variant) pairs drawn with a
    seeded RNG; same seed, same sample."""
    by_op: dict[str, list[Variant]] = {}
    for v in variants:
        by_op.setdefault(v.op_id, []).append(v)
    rng = random.Random(seed)
    samples = []
    for op_id in sorted(by_op):
        pool = by_op[op_id]
        chosen = pool if len(pool) <= n else rng.sample(pool, n)
        pairs = [(originals[v.parent_id], v) for v in chosen]
        samples.append(ReviewSample(op_id, pairs))
    return samples


def export_review_markdown(samples: list[ReviewSample]) -> str:
    lines = ["# Variant review sheet", ""]
    for sample in samples:
        lines.append(f"## {sample.op_id} ({len(sample.pairs)} pairs)")
        lines.append("")
        for original, variant in sample.pairs:
            lines.append(f"### {variant.variant_id}")
            lines.append("")
            lines.append("Original:")
            lines.append("```c")
            lines.append(original.rstrip("\n"))
            lines.append("```")
            lines.append("Variant:")
            lines.append("```c")
            lines.append(variant.text.rstrip("\n"))
            lines.append("```")
            lines.append("Verdict: [ ] preserved  [ ] broken  — notes:")
            lines.append("")
    return "\n".join(lines)
