import pytest

from semmut import transforms
from semmut.codemodel import parse_function
from semmut.transforms import Variant, apply, find_sites, get_operator
from semmut.verify import (
    BROKEN,
    PRESERVED,
    UNKNOWN,
    DifferentialCase,
    Verdict,
    check_compile,
    check_differential,
    check_static,
    compiler_available,
    export_review_markdown,
    run_static_gate,
    sample_for_review,
)

LOOP_DECL_BEFORE = (
    "int f(void){unsigned i; for(i=0;i<10;i++) foo(); "
    "for(i=0;i<10;i++) bar(); return 0;}"
)
LOOP_DECL_AFTER = (
    "int f(void){for(unsigned i=0;i<10;i++) foo(); "
    "for(i=0;i<10;i++) bar(); return 0;}"
)

needs_cc = pytest.mark.skipif(not compiler_available(), reason="no C toolchain")


def alpha_indexed_tokens(text: str) -> list[str]:
    """Independent alpha-equivalence oracle: identifiers replaced by their
    first-occurrence serial number, everything else verbatim."""
    from semmut.codemodel import KEYWORDS, tokenize

    serial: dict[str, int] = {}
    out = []
    for tok in tokenize(text.encode()):
        if tok.kind == "comment":
            continue
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            serial.setdefault(tok.text, len(serial))
            out.append(f"id{serial[tok.text]}")
        else:
            out.append(tok.text)
    return out


class TestCheckStatic:
    def test_identity_preserved(self, micro_corpus):
        for case in micro_corpus:
            unit = parse_function(case.function_source)
            assert check_static(unit, unit).status == PRESERVED

    def test_loop_decl_regression_is_broken(self):
        verdict = check_static(
            parse_function(LOOP_DECL_BEFORE), parse_function(LOOP_DECL_AFTER)
        )
        assert verdict.status == BROKEN
        assert any("unresolved identifier i" in msg for _, msg in verdict.reasons)

    def test_formatting_variant_preserved(self):
        op = get_operator("T16")
        unit = parse_function("int f(int a){ if (a > 1) { a -= 1; } return a; }")
        variant = apply(op, unit, find_sites(op, unit)[0])
        verdict = check_static(unit, parse_function(variant.text), op, variant.edit_span)
        assert verdict.status == PRESERVED

    def test_formatting_token_change_is_broken(self):
        op = get_operator("T16")
        a = parse_function("int f(void){return 0;}")
        b = parse_function("int f(void){return 1;}")
        verdict = check_static(a, b, op, (0, len(a.text)))
        assert verdict.status == BROKEN
        assert verdict.reasons[0][0] == "tokens"

    def test_rename_is_alpha_equivalent_and_preserved(self):
        op = get_operator("T01")
        unit = parse_function(
            "int f(int n){int acc = 0; while (n > 0) { acc += n; n -= 1; } return acc;}"
        )
        variant = apply(op, unit, find_sites(op, unit)[0])
        # independent oracle first: consistent renaming = same indexed stream
        assert alpha_indexed_tokens(unit.text) == alpha_indexed_tokens(variant.text)
        verdict = check_static(unit, parse_function(variant.text), op, variant.edit_span)
        assert verdict.status == PRESERVED

    def test_out_of_span_diff_is_broken(self):
        op = get_operator("T10")
        a = parse_function("void f(int i,int j){i++; j = 3;}")
        b = parse_function("void f(int i,int j){i += 1; j = 4;}")
        # claim the edit only covered the increment statement
        lo = a.text.index("i++")
        verdict = check_static(a, b, op, (lo, lo + len("i++;")))
        assert verdict.status == BROKEN
        assert verdict.reasons[0][0] == "locality"


class TestCheckCompile:
    @needs_cc
    def test_trivial_function_compiles(self):
        assert check_compile("int f(void){return 0;}").status == PRESERVED

    @needs_cc
    def test_unresolved_calls_get_forward_declarations(self):
        assert check_compile(LOOP_DECL_BEFORE).status == PRESERVED

    @needs_cc
    def test_loop_decl_regression_fails_compile(self):
        verdict = check_compile(LOOP_DECL_AFTER)
        assert verdict.status == BROKEN
        assert "compile" == verdict.reasons[0][0]

    def test_missing_compiler_is_unknown(self, monkeypatch):
        monkeypatch.delenv("SEMMUT_CC", raising=False)
        verdict = check_compile("int f(void){return 0;}", "no-such-cc-binary -c")
        assert verdict.status == UNKNOWN

    def test_env_compiler_overrides_argument(self, monkeypatch):
        monkeypatch.setenv("SEMMUT_CC", "no-such-cc-binary")
        verdict = check_compile("int f(void){return 0;}", "cc -std=c11 -O0")
        assert verdict.status == UNKNOWN


class TestCheckDifferential:
    @needs_cc
    def test_for_to_while_preserved_on_sum_case(self, micro_corpus):
        case = next(c for c in micro_corpus if c.name == "sum_for")
        verdict = check_differential(case, get_operator("T04"))
        assert verdict.status == PRESERVED

    @needs_cc
    def test_inapplicable_operator_is_unknown(self, micro_corpus):
        case = next(c for c in micro_corpus if c.name == "only_return")
        verdict = check_differential(case, get_operator("T06"))
        assert verdict.status == UNKNOWN

    @needs_cc
    def test_sabotaged_operator_is_broken(self, monkeypatch, micro_corpus):
        case = next(c for c in micro_corpus if c.name == "sum_for")

        def sabotage(unit, site):
            node = site.payload["node"]
            # drop the whole loop: body never executes
            from semmut.codemodel import TextEdit

            return [TextEdit(node.start, node.end, "while(0){}")]

        monkeypatch.setitem(transforms._REWRITERS, "T04_for_to_while", sabotage)
        verdict = check_differential(case, get_operator("T04"))
        assert verdict.status == BROKEN
        assert any("mismatch" in msg for _, msg in verdict.reasons)

    @needs_cc
    def test_nonterminating_variant_times_out_broken(self, monkeypatch, micro_corpus):
        case = next(c for c in micro_corpus if c.name == "sum_for")

        def sabotage(unit, site):
            node = site.payload["node"]
            from semmut.codemodel import TextEdit

            return [TextEdit(node.start, node.end, "while(1){}")]

        monkeypatch.setitem(transforms._REWRITERS, "T04_for_to_while", sabotage)
        verdict = check_differential(case, get_operator("T04"), timeout=1.5)
        assert verdict.status == BROKEN
        assert verdict.reasons[0][0] == "timeout"

    def test_missing_compiler_is_unknown(self, monkeypatch, micro_corpus):
        monkeypatch.delenv("SEMMUT_CC", raising=False)
        verdict = check_differential(
            micro_corpus[0], get_operator("T04"), compiler_cmd="no-such-cc-binary"
        )
        assert verdict.status == UNKNOWN


class TestStaticGate:
    def test_all_variants_pass_static_checks(self, micro_corpus):
        results = run_static_gate(micro_corpus)
        broken = [
            (op_id, name, v.reasons)
            for op_id, rows in results.items()
            for name, v in rows
            if v.status == BROKEN
        ]
        assert broken == []


class TestReviewSampling:
    def _variants(self, n):
        return [
            Variant("p", "T04_for_to_while", i, f"p#T04_for_to_while#{i}", f"text{i}")
            for i in range(n)
        ]

    def test_caps_at_n(self):
        samples = sample_for_review(self._variants(100), {"p": "orig"}, n=20, seed=1)
        assert len(samples) == 1 and len(samples[0].pairs) == 20

    def test_small_pool_returned_whole(self):
        samples = sample_for_review(self._variants(3), {"p": "orig"}, n=20, seed=1)
        assert len(samples[0].pairs) == 3

    def test_same_seed_same_sample(self):
        a = sample_for_review(self._variants(50), {"p": "orig"}, n=5, seed=7)
        b = sample_for_review(self._variants(50), {"p": "orig"}, n=5, seed=7)
        assert [v.variant_id for _, v in a[0].pairs] == [
            v.variant_id for _, v in b[0].pairs
        ]

    def test_markdown_export(self):
        samples = sample_for_review(self._variants(2), {"p": "int f(void){return 0;}"})
        md = export_review_markdown(samples)
        assert "## T04_for_to_while" in md and "```c" in md and "Verdict:" in md


class TestVerdict:
    def test_merge_prefers_worst(self):
        assert Verdict.preserved().merge(Verdict.broken("x", "y")).status == BROKEN
        assert Verdict.unknown("a", "b").merge(Verdict.preserved()).status == UNKNOWN

    def test_to_json_schema(self):
        row = Verdict.broken("scope", "unresolved identifier i").to_json("v1")
        assert set(row) == {"variant_id", "status", "reasons"}
        assert row["reasons"] == ["scope: unresolved identifier i"]
