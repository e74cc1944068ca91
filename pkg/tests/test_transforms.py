import pytest

from semmut.codemodel import code_token_texts, parse_function
from semmut.transforms import (
    ALWAYS_APPLICABLE,
    CATEGORIES,
    REGISTRY,
    RewriteFailure,
    apply,
    apply_all,
    find_sites,
    get_operator,
    list_operators,
)

OPS = {op.short: op for op in REGISTRY}


def sites(short, text):
    return find_sites(OPS[short], parse_function(text))


def rewrite(short, text, site_index=0):
    unit = parse_function(text)
    found = find_sites(OPS[short], unit)
    return apply(OPS[short], unit, found[site_index]).text


class TestRegistry:
    def test_sixteen_operators(self):
        assert len(list_operators()) == 16

    def test_ids_unique_and_ordered(self):
        ids = [op.id for op in list_operators()]
        assert len(set(ids)) == 16
        assert ids == sorted(ids)

    def test_categories_are_known(self):
        for op in list_operators():
            assert op.category in CATEGORIES
            assert op.description
            assert op.attribution

    def test_api_and_function_categories_unrepresented(self):
        used = {op.category for op in list_operators()}
        assert "API" not in used and "Function" not in used
        assert used == {
            "Trivial",
            "DataAndDeclaration",
            "ControlFlow",
            "DeadBogusCode",
            "Formatting",
        }

    def test_get_operator_by_short_and_full_id(self):
        assert get_operator("T04").id == "T04_for_to_while"
        assert get_operator("T04_for_to_while").short == "T04"
        with pytest.raises(KeyError):
            get_operator("T99")


class TestRenames:
    def test_t01_renames_declaration_and_uses(self):
        out = rewrite("T01", "int f(void){int count = 0; count += 2; return count;}")
        assert out == "int f(void){int v0 = 0; v0 += 2; return v0;}"

    def test_t01_respects_shadowing(self):
        out = rewrite(
            "T01", "int f(void){int x = 1; { int x = 2; x += 1; } return x;}", 0
        )
        assert out == "int f(void){int v0 = 1; { int x = 2; x += 1; } return v0;}"

    def test_t01_fresh_name_avoids_collisions(self):
        out = rewrite("T01", "int f(int v0){int x = v0; return x;}")
        assert "v1" in out and "int v1 = v0" in out

    def test_t01_blocked_by_inline_asm(self):
        assert sites("T01", 'int f(void){int x=1; __asm__("nop"); return x;}') == []

    def test_t01_blocked_by_preproc(self):
        text = "int f(void){int x=1;\n#ifdef A\n    x=2;\n#endif\n    return x;}"
        assert sites("T01", text) == []

    def test_t02_renames_parameter(self):
        out = rewrite("T02", "int f(int alpha, int beta){return alpha - beta;}", 1)
        assert out == "int f(int alpha, int p0){return alpha - p0;}"

    def test_t03_renames_recursive_calls(self):
        out = rewrite("T03", "int fib(int n){if(n<2){return n;}return fib(n-1)+fib(n-2);}")
        assert out == "int fn0(int n){if(n<2){return n;}return fn0(n-1)+fn0(n-2);}"

    def test_t01_skips_member_with_same_name(self):
        out = rewrite("T01", "int f(struct s *q){int x = 0; x += q->x; return x;}")
        assert out == "int f(struct s *q){int v0 = 0; v0 += q->x; return v0;}"


class TestForToWhile:
    def test_canonical_form(self):
        out = rewrite("T04", "void f(int i,int n,int s){for(i=0;i<n;i++){s+=i;}}")
        assert out == "void f(int i,int n,int s){i=0; while(i<n){s+=i; i++;}}"

    def test_two_loops_two_sites(self):
        text = "void f(int i){for(i=0;i<3;i++){;} for(i=0;i<5;i++){;}}"
        assert len(sites("T04", text)) == 2

    def test_unbraced_body(self):
        out = rewrite("T04", "int f(int i,int t){for(i=0;i<3;i++) t += i; return t;}")
        assert "while(i<3){t += i; i++;}" in out

    def test_empty_init_and_cond(self):
        out = rewrite("T04", "int f(int i){for(;;i++){if(i>3){break;}} return i;}")
        assert "while(1){" in out and not out.startswith("{")

    def test_continue_rejected(self):
        text = "void f(int i){for(i=0;i<9;i++){if(i%2){continue;} g(i);}}"
        assert sites("T04", text) == []

    def test_header_declaration_rejected(self):
        assert sites("T04", "void f(void){for(int i=0;i<9;i++){g(i);}}") == []

    def test_unbraced_parent_gets_block_wrap(self):
        text = "void f(int c,int i){if(c) for(i=0;i<3;i++){g(i);}}"
        out = rewrite("T04", text)
        assert "if(c) {i=0; while(i<3){g(i); i++;}}" in out


class TestOtherControlFlow:
    def test_t05_while_to_for(self):
        out = rewrite("T05", "int f(int i){while (i < 9) { i++; } return i;}")
        assert out == "int f(int i){for(;i < 9;) { i++; } return i;}"

    def test_t05_ignores_do_while(self):
        assert sites("T05", "int f(int i){do { i++; } while (i < 3); return i;}") == []

    def test_t06_breaks_dropped_and_default_last(self):
        text = (
            "int f(int x){int r=0;switch(x){case 1: r=10; break; "
            "default: r=1; break; case 2: r=20; break;}return r;}"
        )
        out = rewrite("T06", text)
        assert (
            "if ((x) == (1)) { r=10; } else if ((x) == (2)) { r=20; } "
            "else { r=1; }" in out
        )

    def test_t06_multilabel_group(self):
        text = "int f(int x){switch(x){case 1: case 2: return 5; default: return 0;}}"
        out = rewrite("T06", text)
        assert "if ((x) == (1) || (x) == (2)) { return 5; } else { return 0; }" in out

    def test_t06_fallthrough_rejected(self):
        text = "int f(int x){int r=0;switch(x){case 1: r=1; case 2: r=2; break;}return r;}"
        assert sites("T06", text) == []

    def test_t06_stray_break_rejected(self):
        text = (
            "int f(int x){int r=0;switch(x){case 1: if(x>2){break;} r=1; break;}"
            "return r;}"
        )
        assert sites("T06", text) == []

    def test_t06_nested_loop_break_allowed(self):
        text = (
            "int f(int x){int r=0;switch(x){case 1: while(r<3){r++; if(r==2){break;}} "
            "break; default: r=9; break;}return r;}"
        )
        assert len(sites("T06", text)) == 1

    def test_t06_impure_subject_rejected(self):
        assert sites("T06", "int f(int x){switch(x++){case 1: return 1; default: return 0;}}") == []
        assert sites("T06", "int f(int x){switch(g(x)){case 1: return 1; default: return 0;}}") == []

    def test_t06_duff_rejected(self):
        text = (
            "int f(int x){int r=0;switch(x){case 0: do { r++; case 1: r++; } "
            "while (r < 4); break;}return r;}"
        )
        assert sites("T06", text) == []

    def test_t07_split(self):
        out = rewrite("T07", "void f(int a,int b){if (a > 0 && b > 0) { g(); }}")
        assert out == "void f(int a,int b){if (a > 0) { if (b > 0) { g(); } }}"

    def test_t07_three_conjuncts_split_at_first(self):
        out = rewrite("T07", "void f(int a,int b,int c){if (a && b && c) g();}")
        assert out == "void f(int a,int b,int c){if (a) { if (b && c) g(); }}"

    def test_t07_rejects_else(self):
        assert sites("T07", "void f(int a,int b){if (a && b) g(); else h();}") == []

    def test_t07_rejects_top_level_or(self):
        assert sites("T07", "void f(int a,int b,int c){if (a && b || c) g();}") == []
        assert len(sites("T07", "void f(int a,int b,int c){if (a && (b || c)) g();}")) == 1

    def test_t08_golden(self):
        out = rewrite("T08", "void f(int c,int A,int B){if(c){A;}else{B;}}")
        assert out == "void f(int c,int A,int B){if(!(c)){B;}else{A;}}"

    def test_t08_braces_added_to_bare_branches(self):
        out = rewrite("T08", "int f(int c){int r;if(c)r=1;else r=2;return r;}")
        assert "if(!(c)){r=2;}else{r=1;}" in out

    def test_t08_else_if_chain_wrapped(self):
        out = rewrite("T08", "int f(int c){if(c>0){return 1;}else if(c<0){return -1;}else{return 0;}}", 0)
        assert out.startswith("int f(int c){if(!(c>0)){if(c<0){return -1;}else{return 0;}}else{return 1;}}")

    def test_t09_golden(self):
        out = rewrite("T09", "int f(int c,int x,int y){int o;o = c ? x : y;return o;}")
        assert "if (c) { o = x; } else { o = y; }" in out

    def test_t09_compound_assign(self):
        out = rewrite("T09", "int f(int c,int m){m += c > 0 ? 1 : 2;return m;}")
        assert "if (c > 0) { m += 1; } else { m += 2; }" in out

    def test_t09_nested_ternary_right(self):
        out = rewrite("T09", "int f(int a,int b){int o;o = a ? 1 : b ? 2 : 3;return o;}")
        assert "if (a) { o = 1; } else { o = b ? 2 : 3; }" in out

    def test_t09_parenthesized_ternary_not_top_level(self):
        assert sites("T09", "int f(int a){int o;o = 1 + (a ? 2 : 3);return o;}") == []


class TestTrivialAndDecl:
    def test_t10_postfix_golden(self):
        assert rewrite("T10", "void f(int i){i++;}") == "void f(int i){i += 1;}"

    def test_t10_prefix_decrement(self):
        assert rewrite("T10", "void f(int i){--i;}") == "void f(int i){i -= 1;}"

    def test_t10_member_lvalue(self):
        out = rewrite("T10", "void f(struct s *p){p->n++;}")
        assert out == "void f(struct s *p){p->n += 1;}"

    def test_t10_deref_postfix_rejected(self):
        assert sites("T10", "void f(int *p){*p++;}") == []

    def test_t10_expression_increment_not_a_site(self):
        assert sites("T10", "void f(int i,int j){j = i++;}") == []

    def test_t11_split(self):
        out = rewrite("T11", "void f(void){int a, b = 2, *c;}")
        assert out == "void f(void){int a; int b = 2; int *c;}"

    def test_t11_single_declarator_not_a_site(self):
        assert sites("T11", "void f(void){int a;}") == []

    def test_t11_anonymous_struct_rejected(self):
        assert sites("T11", "void f(void){struct {int x;} a, b;}") == []

    def test_t12_split(self):
        out = rewrite("T12", "void f(void){int x = 5;}")
        assert out == "void f(void){int x; x = 5;}"

    def test_t12_pointer_declarator(self):
        out = rewrite("T12", "void f(int q){int *p = &q;}")
        assert out == "void f(int q){int *p; p = &q;}"

    def test_t12_rejects_static_const_array_brace(self):
        assert sites("T12", "void f(void){static int x = 5;}") == []
        assert sites("T12", "void f(void){const int x = 5;}") == []
        assert sites("T12", "void f(void){int x[2] = {1,2};}") == []
        assert sites("T12", 'void f(void){char s[4] = "ab";}') == []


class TestDeadCodeAndFormatting:
    def test_t13_inserts_fresh_unused_variable(self):
        out = rewrite("T13", "int f(void){return 0;}")
        assert out == "int f(void){\n    int smut_T13_0 = 0;return 0;}"

    def test_t13_collision_bumps_counter(self):
        out = rewrite("T13", "int f(int smut_T13_0){return smut_T13_0;}")
        assert "int smut_T13_1 = 0;" in out

    def test_t14_inserts_if_zero_block(self):
        out = rewrite("T14", "int f(void){return 0;}")
        assert "if (0) { int smut_T14_0 = 0; }" in out

    def test_t15_inserts_comment_only(self):
        src = "int f(void){return 0;}"
        out = rewrite("T15", src)
        assert "/* no-op marker */" in out
        assert code_token_texts(out) == code_token_texts(src)

    def test_t16_token_stream_identical(self, micro_corpus):
        for case in micro_corpus:
            unit = parse_function(case.function_source)
            variant = apply(OPS["T16"], unit, find_sites(OPS["T16"], unit)[0])
            assert code_token_texts(variant.text) == code_token_texts(
                case.function_source
            ), case.name

    def test_t16_exactly_one_site(self, micro_corpus):
        for case in micro_corpus:
            unit = parse_function(case.function_source)
            assert len(find_sites(OPS["T16"], unit)) == 1


class TestEngineInvariants:
    def test_variants_reparse_and_differ(self, micro_corpus):
        for case in micro_corpus:
            unit = parse_function(case.function_source)
            for variant in apply_all(unit, case.name):
                assert variant.text != case.function_source
                parse_function(variant.text)  # must not raise

    def test_diff_confined_to_declared_edit_span(self, micro_corpus):
        for case in micro_corpus:
            unit = parse_function(case.function_source)
            for variant in apply_all(unit, case.name):
                op = get_operator(variant.op_id)
                if op.category == "Formatting":
                    continue
                orig = case.function_source.encode()
                new = variant.text.encode()
                p = 0
                while p < min(len(orig), len(new)) and orig[p] == new[p]:
                    p += 1
                s = 0
                while (
                    s < min(len(orig), len(new)) - p
                    and orig[len(orig) - 1 - s] == new[len(new) - 1 - s]
                ):
                    s += 1
                lo, hi = variant.edit_span
                if p < len(orig) - s:  # non-degenerate diff region
                    assert lo <= p and len(orig) - s <= hi, variant.variant_id

    def test_always_applicable_set(self, micro_corpus):
        for case in micro_corpus:
            unit = parse_function(case.function_source)
            for op_id in ALWAYS_APPLICABLE:
                assert len(find_sites(get_operator(op_id), unit)) >= 1, (
                    case.name,
                    op_id,
                )

    def test_max_sites_cap(self):
        text = "void f(int i){" + " ".join(f"for(i=0;i<{k};i++){{;}}" for k in range(1, 6)) + "}"
        unit = parse_function(text)
        assert len(find_sites(OPS["T04"], unit)) == 5
        variants = [v for v in apply_all(unit) if v.op_id == "T04_for_to_while"]
        assert len(variants) == 4
        assert [v.site for v in variants] == [0, 1, 2, 3]

    def test_apply_all_deterministic(self, micro_corpus):
        for case in micro_corpus[:8]:
            a = apply_all(parse_function(case.function_source), case.name)
            b = apply_all(parse_function(case.function_source), case.name)
            assert [(v.variant_id, v.text) for v in a] == [
                (v.variant_id, v.text) for v in b
            ]

    def test_asm_function_gets_only_nonrename_ops(self):
        text = 'int f(void){ __asm__(""); return 0; }'
        unit = parse_function(text)
        variants = apply_all(unit)
        ops_seen = {v.op_id.split("_")[0] for v in variants}
        assert ops_seen == {"T13", "T14", "T15", "T16"}

    def test_wrong_site_operator_pairing_rejected(self):
        unit = parse_function("int f(void){return 0;}")
        site = find_sites(OPS["T13"], unit)[0]
        with pytest.raises(ValueError):
            apply(OPS["T14"], unit, site)

    def test_no_op_rejected(self):
        # reformatting already-canonical text is a no-op and must be refused
        canonical = rewrite("T16", "int f(void){return 0;}")
        unit = parse_function(canonical)
        with pytest.raises(RewriteFailure):
            apply(OPS["T16"], unit, find_sites(OPS["T16"], unit)[0])
