"""Bundled micro-corpus: small self-contained C functions with fixed-input
drivers, used as the executable oracle for the semantic-preservation gate.

Each ``.c`` data file holds one function, a marker line, and a main() driver
that calls the function through the FUT macro over at least eight fixed
inputs, printing decimal results to stdout.
"""

from __future__ import annotations

from importlib import resources

from .verify import DifferentialCase

MARKER = "/* ---driver--- */"


def _split_case(name: str, content: str) -> DifferentialCase:
    marker_line = MARKER + "\n"
    if marker_line not in content:
        raise ValueError(f"micro-corpus case {name!r} lacks a driver marker")
    function_source, driver_source = content.split(marker_line, 1)
    return DifferentialCase(name=name, function_source=function_source, driver_source=driver_source)


def load_micro_corpus() -> list[DifferentialCase]:
    """All bundled cases, sorted by name for a stable order."""
    cases = []
    root = resources.files("semmut") / "microcorpus_data"
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".c"):
            continue
        cases.append(_split_case(entry.name[:-2], entry.read_text(encoding="utf-8")))
    return cases
