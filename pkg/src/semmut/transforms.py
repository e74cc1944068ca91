"""Registry of 16 semantic-preserving mutation operators for C functions.

Every operator discovers its applicability sites deterministically in
document order and rewrites exactly one site per variant. Rewrites are
conservative by construction: an operator offers no site rather than risk a
semantics change (renames refuse functions with inline assembly or
preprocessor directives, loop conversion refuses `continue` and declaration
headers, switch conversion refuses fallthrough and impure subjects). Every
produced variant is immediately re-parsed; a failed re-parse discards the
variant instead of shipping broken text.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .codemodel import (
    KEYWORDS,
    Node,
    ParseFailure,
    ScopeMap,
    SyntaxUnit,
    TextEdit,
    contains_inline_assembly,
    declaration_parts,
    declarator_name_index,
    looks_like_declaration,
    parse_function,
    render,
    resolve_scopes,
)

logger = logging.getLogger(__name__)

CATEGORIES = (
    "Trivial",
    "DataAndDeclaration",
    "API",
    "ControlFlow",
    "Function",
    "DeadBogusCode",
    "Formatting",
)

_ASSIGN_OPS = frozenset(
    {"=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", "&=", "^=", "|="}
)


@dataclass(frozen=True)
class TransformOperator:
    """One registered mutation operator."""

    id: str
    category: str
    description: str
    attribution: str

    @property
    def short(self) -> str:
        return self.id.split("_", 1)[0]

    @property
    def is_renaming(self) -> bool:
        return self.short in ("T01", "T02", "T03")


@dataclass(frozen=True)
class Site:
    """One place where an operator can fire once."""

    op_id: str
    ordinal: int
    start: int
    end: int
    payload: dict = field(compare=False, repr=False, default_factory=dict)


@dataclass(frozen=True)
class Variant:
    parent_id: str
    op_id: str
    site: int
    variant_id: str
    text: str
    # Hull of the applied edits, in the parent's byte coordinates. Provenance
    # for locality checks; not part of the wire format.
    edit_span: tuple[int, int] | None = None


class RewriteFailure(Exception):
    """A rewrite produced no-op or unparseable text; the variant is dropped."""


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _parent_map(unit: SyntaxUnit) -> dict[int, Node]:
    parents: dict[int, Node] = {}
    for node in unit.root.walk():
        for child in node.children:
            parents[id(child)] = node
    return parents


def _byte_slice(unit: SyntaxUnit, a: int, b: int) -> str:
    return unit.src[a:b].decode("utf-8")


def _inner_text(unit: SyntaxUnit, node: Node) -> str:
    """Text strictly between a bracketed node's opening and closing tokens."""
    toks = unit.tokens
    return _byte_slice(unit, toks[node.t0].end, toks[node.t1 - 1].start)


def _code_range(unit: SyntaxUnit, t0: int, t1: int) -> list[int]:
    return [ti for ti in range(t0, t1) if unit.tokens[ti].kind != "comment"]


def _range_has_token(unit: SyntaxUnit, t0: int, t1: int, *texts: str) -> bool:
    return any(
        unit.tokens[ti].text in texts
        for ti in range(t0, t1)
        if unit.tokens[ti].kind in ("punct", "ident")
    )


def _top_level_punct(unit: SyntaxUnit, tis: list[int], *values: str) -> list[int]:
    """Token indices of bracket-depth-0 punctuators among ``tis``."""
    hits = []
    depth = 0
    for ti in tis:
        t = unit.tokens[ti]
        if t.is_punct("(", "[", "{"):
            depth += 1
        elif t.is_punct(")", "]", "}"):
            depth -= 1
        elif depth == 0 and t.is_punct(*values):
            hits.append(ti)
    return hits

def _has_preproc(unit: SyntaxUnit) -> bool:
    return any(n.kind == "preproc_directive" for n in unit.root.walk())


def _all_ident_texts(unit: SyntaxUnit) -> set[str]:
    return {t.text for t in unit.tokens if t.kind == "ident"}


def _fresh_name(unit: SyntaxUnit, prefix: str) -> str:
    taken = _all_ident_texts(unit)
    k = 0
    while f"{prefix}{k}" in taken:
        k += 1
    return f"{prefix}{k}"


def _statement_is(node: Node, *kinds: str) -> bool:
    return node.kind in kinds


def _contains_stray_break(node: Node) -> bool:
    """True if ``node`` contains a break not bound to a nested loop/switch."""
    if node.kind == "break_statement":
        return True
    if node.kind in ("for_statement", "while_statement", "do_statement", "switch_statement"):
        return False
    return any(_contains_stray_break(c) for c in node.children)


def _brace(unit: SyntaxUnit, node: Node) -> str:
    text = _byte_slice(unit, node.start, node.end)
    if node.kind == "compound_statement":
        return text
    return "{" + text + "}"


# ---------------------------------------------------------------------------
# Site finders and rewriters, one pair per operator
# ---------------------------------------------------------------------------


def _rename_sites(unit: SyntaxUnit, decl_kind: str, op_id: str) -> list[Site]:
    if contains_inline_assembly(unit) or _has_preproc(unit):
        return []
    sm = resolve_scopes(unit)
    decls = [d for d in sm.declarations if d.kind == decl_kind]
    decls.sort(key=lambda d: d.ti)
    sites = []
    for ordinal, d in enumerate(decls):
        tok = unit.tokens[d.ti]
        sites.append(
            Site(op_id, ordinal, tok.start, tok.end, {"decl": d, "scopemap": sm})
        )
    return sites


def _rename_edits(unit: SyntaxUnit, site: Site, prefix: str) -> list[TextEdit]:
    d = site.payload["decl"]
    sm: ScopeMap = site.payload["scopemap"]
    new_name = _fresh_name(unit, prefix)
    targets = [d.ti] + sm.uses[d]
    return [
        TextEdit(unit.tokens[ti].start, unit.tokens[ti].end, new_name)
        for ti in sorted(set(targets))
    ]


def _t01_sites(unit):
    return _rename_sites(unit, "local", "T01_rename_variable")


def _t01_edits(unit, site):
    return _rename_edits(unit, site, "v")


def _t02_sites(unit):
    return _rename_sites(unit, "parameter", "T02_rename_parameter")


def _t02_edits(unit, site):
    return _rename_edits(unit, site, "p")


def _t03_sites(unit):
    return _rename_sites(unit, "function", "T03_rename_function")


def _t03_edits(unit, site):
    return _rename_edits(unit, site, "fn")


def _t04_sites(unit: SyntaxUnit) -> list[Site]:
    parents = _parent_map(unit)
    sites = []
    for node in unit.root.walk():
        if node.kind != "for_statement":
            continue
        init_t0, init_t1 = node.meta["init"]
        body: Node = node.meta["body"]
        if _range_has_token(unit, body.t0, body.t1, "continue"):
            continue
        init_code = _code_range(unit, init_t0, init_t1)
        if init_code and looks_like_declaration(unit, init_t0, init_t1):
            continue
        parent = parents.get(id(node))
        in_block = parent is not None and parent.kind == "compound_statement"
        sites.append(
            Site(
                "T04_for_to_while",
                len(sites),
                node.start,
                node.end,
                {"node": node, "in_block": in_block},
            )
        )
    return sites


def _t04_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    node: Node = site.payload["node"]
    toks = unit.tokens
    init_t0, init_t1 = node.meta["init"]
    cond_t0, cond_t1 = node.meta["cond"]
    incr_t0, incr_t1 = node.meta["incr"]
    body: Node = node.meta["body"]

    def span_text(t0, t1):
        code = _code_range(unit, t0, t1)
        if not code:
            return ""
        return _byte_slice(unit, toks[code[0]].start, toks[code[-1]].end).strip()

    init = span_text(init_t0, init_t1)
    cond = span_text(cond_t0, cond_t1) or "1"
    incr = span_text(incr_t0, incr_t1)

    if body.kind == "compound_statement":
        inner = _inner_text(unit, body)
    else:
        inner = _byte_slice(unit, body.start, body.end)
    if incr:
        inner = f"{inner} {incr};"
    new = f"while({cond})" + "{" + inner + "}"
    if init:
        new = f"{init}; {new}"
        if not site.payload["in_block"]:
            new = "{" + new + "}"
    return [TextEdit(node.start, node.end, new)]


def _t05_sites(unit: SyntaxUnit) -> list[Site]:
    sites = []
    for node in unit.root.walk():
        if node.kind != "while_statement":
            continue
        sites.append(
            Site("T05_while_to_for", len(sites), node.start, node.end, {"node": node})
        )
    return sites


def _t05_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    node: Node = site.payload["node"]
    cond: Node = node.meta["cond"]
    cond_text = _inner_text(unit, cond).strip()
    return [TextEdit(node.start, cond.end, f"for(;{cond_text};)")]


def _subject_is_pure(unit: SyntaxUnit, cond: Node) -> bool:
    for ti in _code_range(unit, cond.t0 + 1, cond.t1 - 1):
        t = unit.tokens[ti]
        if t.is_punct("(", "++", "--", ",", "?"):
            return False
        if t.kind == "punct" and t.text in _ASSIGN_OPS:
            return False
    return True


def _switch_groups(unit: SyntaxUnit, body: Node):
    """Partition a switch body into (labels, statements) groups, or None if
    the shape is not safely convertible."""
    # Any case/default label that is not a direct child of the switch body
    # (Duff-style nesting) disqualifies the switch. Nested switches own
    # their labels and are skipped.
    def deep_labels(n: Node) -> bool:
        for c in n.children:
            if c.kind == "switch_statement":
                continue
            if c.kind in ("case_label", "default_label"):
                return True
            if deep_labels(c):
                return True
        return False

    groups: list[tuple[list[Node], list[Node]]] = []
    labels: list[Node] = []
    stmts: list[Node] = []
    for child in body.children:
        if child.kind in ("case_label", "default_label"):
            if stmts:
                groups.append((labels, stmts))
                labels, stmts = [], []
            labels.append(child)
        else:
            if deep_labels(child):
                return None
            if not labels and not groups:
                return None  # statements before the first label
            if not labels:
                # statement after a closed group but without a new label:
                # impossible by construction (labels only close on stmts)
                stmts.append(child)
                continue
            stmts.append(child)
    if labels or stmts:
        groups.append((labels, stmts))

    if not groups:
        return None
    defaults = sum(1 for labels, _ in groups for l in labels if l.kind == "default_label")
    if defaults > 1:
        return None
    for gi, (labels, stmts) in enumerate(groups):
        if not labels or not stmts:
            return None
        last = stmts[-1]
        terminated = last.kind in ("break_statement", "return_statement")
        if not terminated and gi != len(groups) - 1:
            return None  # fallthrough
        check = stmts[:-1] if last.kind == "break_statement" else stmts
        if any(_contains_stray_break(s) for s in check):
            return None
    return groups


def _t06_sites(unit: SyntaxUnit) -> list[Site]:
    sites = []
    for node in unit.root.walk():
        if node.kind != "switch_statement":
            continue
        body: Node = node.meta["body"]
        if body.kind != "compound_statement":
            continue
        if not _subject_is_pure(unit, node.meta["cond"]):
            continue
        groups = _switch_groups(unit, body)
        if groups is None:
            continue
        sites.append(
            Site(
                "T06_switch_to_if",
                len(sites),
                node.start,
                node.end,
                {"node": node, "groups": groups},
            )
        )
    return sites


def _t06_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    node: Node = site.payload["node"]
    groups = site.payload["groups"]
    subject = _inner_text(unit, node.meta["cond"]).strip()

    def group_body(stmts: list[Node]) -> str:
        body_stmts = stmts[:-1] if stmts[-1].kind == "break_statement" else stmts
        if not body_stmts:
            return ""
        return _byte_slice(unit, body_stmts[0].start, body_stmts[-1].end).strip()

    def group_cond(labels: list[Node]) -> str:
        parts = []
        for lab in labels:
            if lab.kind == "default_label":
                continue
            e0, e1 = lab.meta["expr"]
            expr = unit.token_text(e0, e1).strip()
            parts.append(f"({subject}) == ({expr})")
        return " || ".join(parts)

    case_groups = [
        g for g in groups if not any(l.kind == "default_label" for l in g[0])
    ]
    default_group = next(
        (g for g in groups if any(l.kind == "default_label" for l in g[0])), None
    )

    pieces = []
    for labels, stmts in case_groups:
        kw = "if" if not pieces else "else if"
        pieces.append(f"{kw} ({group_cond(labels)}) {{ {group_body(stmts)} }}")
    if default_group is not None:
        if pieces:
            pieces.append(f"else {{ {group_body(default_group[1])} }}")
        else:
            pieces.append("{ " + group_body(default_group[1]) + " }")
    return [TextEdit(node.start, node.end, " ".join(pieces))]


def _t07_sites(unit: SyntaxUnit) -> list[Site]:
    sites = []
    for node in unit.root.walk():
        if node.kind != "if_statement" or node.meta.get("els") is not None:
            continue
        cond: Node = node.meta["cond"]
        inner = _code_range(unit, cond.t0 + 1, cond.t1 - 1)
        ands = _top_level_punct(unit, inner, "&&")
        if not ands:
            continue
        blockers = _top_level_punct(unit, inner, "||", "?", ",")
        if blockers:
            continue
        if any(
            unit.tokens[ti].kind == "punct" and unit.tokens[ti].text in _ASSIGN_OPS
            for ti in _top_level_punct(unit, inner, *_ASSIGN_OPS)
        ):
            continue
        sites.append(
            Site(
                "T07_split_if_condition",
                len(sites),
                node.start,
                node.end,
                {"node": node, "amp": ands[0]},
            )
        )
    return sites


def _t07_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    node: Node = site.payload["node"]
    amp: int = site.payload["amp"]
    cond: Node = node.meta["cond"]
    toks = unit.tokens
    a = _byte_slice(unit, toks[cond.t0].end, toks[amp].start).strip()
    b = _byte_slice(unit, toks[amp].end, toks[cond.t1 - 1].start).strip()
    then: Node = node.meta["then"]
    then_text = _byte_slice(unit, then.start, then.end)
    new = f"if ({a}) {{ if ({b}) {then_text} }}"
    return [TextEdit(node.start, node.end, new)]


def _t08_sites(unit: SyntaxUnit) -> list[Site]:
    sites = []
    for node in unit.root.walk():
        if node.kind != "if_statement" or node.meta.get("els") is None:
            continue
        sites.append(
            Site("T08_swap_if_else", len(sites), node.start, node.end, {"node": node})
        )
    return sites


def _t08_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    node: Node = site.payload["node"]
    cond_text = _inner_text(unit, node.meta["cond"]).strip()
    then: Node = node.meta["then"]
    els: Node = node.meta["els"]
    new = f"if(!({cond_text}))" + _brace(unit, els) + "else" + _brace(unit, then)
    return [TextEdit(node.start, node.end, new)]


_LVALUE_FORBIDDEN = frozenset({"(", ")", "++", "--", ",", "?", ":"}) | _ASSIGN_OPS


def _is_simple_lvalue(unit: SyntaxUnit, tis: list[int]) -> bool:
    if not tis:
        return False
    first = unit.tokens[tis[0]]
    if not (first.kind == "ident" and first.text not in KEYWORDS):
        return False
    for ti in tis:
        t = unit.tokens[ti]
        if t.kind == "punct" and t.text in _LVALUE_FORBIDDEN:
            return False
        if t.kind in ("str", "char"):
            return False
    return True


def _t09_sites(unit: SyntaxUnit) -> list[Site]:
    sites = []
    for node in unit.root.walk():
        if node.kind != "expression_statement":
            continue
        code = _code_range(unit, node.t0, node.t1 - 1)  # drop ';'
        if len(code) < 6:
            continue
        head = unit.tokens[code[0]]
        op = unit.tokens[code[1]]
        if head.kind != "ident" or head.text in KEYWORDS:
            continue
        if not (op.kind == "punct" and op.text in _ASSIGN_OPS):
            continue
        rhs = code[2:]
        if _top_level_punct(unit, rhs, ","):
            continue
        marks = _top_level_punct(unit, rhs, "?")
        if not marks:
            continue
        q = marks[0]
        # matching ':' for the first top-level '?'
        pending = 0
        colon = None
        depth = 0
        started = False
        for ti in rhs:
            t = unit.tokens[ti]
            if ti == q:
                started = True
                continue
            if not started:
                continue
            if t.is_punct("(", "[", "{"):
                depth += 1
            elif t.is_punct(")", "]", "}"):
                depth -= 1
            elif depth == 0 and t.is_punct("?"):
                pending += 1
            elif depth == 0 and t.is_punct(":"):
                if pending:
                    pending -= 1
                else:
                    colon = ti
                    break
        if colon is None:
            continue
        if rhs[0] == q or colon == rhs[-1]:
            continue  # empty condition or empty else-arm
        sites.append(
            Site(
                "T09_ternary_to_if",
                len(sites),
                node.start,
                node.end,
                {"node": node, "lv": code[0], "op": code[1], "q": q, "colon": colon},
            )
        )
    return sites


def _t09_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    node: Node = site.payload["node"]
    toks = unit.tokens
    lv = toks[site.payload["lv"]].text
    op = toks[site.payload["op"]].text
    q, colon = site.payload["q"], site.payload["colon"]
    cond = _byte_slice(unit, toks[site.payload["op"]].end, toks[q].start).strip()
    a = _byte_slice(unit, toks[q].end, toks[colon].start).strip()
    b = _byte_slice(unit, toks[colon].end, toks[node.t1 - 1].start).strip()
    new = f"if ({cond}) {{ {lv} {op} {a}; }} else {{ {lv} {op} {b}; }}"
    return [TextEdit(node.start, node.end, new)]


def _t10_sites(unit: SyntaxUnit) -> list[Site]:
    sites = []
    for node in unit.root.walk():
        if node.kind != "expression_statement":
            continue
        code = _code_range(unit, node.t0, node.t1 - 1)  # drop ';'
        if len(code) < 2:
            continue
        first, last = unit.tokens[code[0]], unit.tokens[code[-1]]
        if last.is_punct("++", "--") and _is_simple_lvalue(unit, code[:-1]):
            lv_tis = code[:-1]
            op_tok = last
        elif first.is_punct("++", "--") and _is_simple_lvalue(unit, code[1:]):
            lv_tis = code[1:]
            op_tok = first
        else:
            continue
        sites.append(
            Site(
                "T10_incdec_to_compound",
                len(sites),
                node.start,
                node.end,
                {"node": node, "lv": lv_tis, "op": op_tok.text},
            )
        )
    return sites


def _t10_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    node: Node = site.payload["node"]
    toks = unit.tokens
    lv_tis = site.payload["lv"]
    lv = _byte_slice(unit, toks[lv_tis[0]].start, toks[lv_tis[-1]].end)
    op = "+=" if site.payload["op"] == "++" else "-="
    return [TextEdit(node.start, node.end, f"{lv} {op} 1;")]


def _decl_sites(unit: SyntaxUnit, op_id: str, want_multi: bool) -> list[Site]:
    sites = []
    for node in unit.root.walk():
        if node.kind != "declaration":
            continue
        parts = declaration_parts(unit, node)
        if parts is None:
            continue
        spec_range, declarators = parts
        if want_multi:
            if len(declarators) < 2:
                continue
        else:
            if len(declarators) != 1:
                continue
            a, b = declarators[0]
            eqs = _top_level_punct(unit, _code_range(unit, a, b), "=")
            if len(eqs) != 1:
                continue
            spec_words = {
                unit.tokens[ti].text
                for ti in range(*spec_range)
                if unit.tokens[ti].kind == "ident"
            }
            if spec_words & {"static", "const", "extern", "typedef"}:
                continue
            eq = eqs[0]
            if _range_has_token(unit, a, eq, "["):
                continue
            if _range_has_token(unit, eq, b, "{"):
                continue
            if declarator_name_index(unit, a, eq) is None:
                continue
        sites.append(
            Site(op_id, len(sites), node.start, node.end, {"node": node, "parts": parts})
        )
    return sites


def _t11_sites(unit):
    return _decl_sites(unit, "T11_split_multi_declaration", want_multi=True)


def _t11_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    node: Node = site.payload["node"]
    spec_range, declarators = site.payload["parts"]
    spec = unit.token_text(*spec_range).strip()
    toks = unit.tokens
    pieces = []
    for a, b in declarators:
        text = _byte_slice(unit, toks[a].start, toks[b - 1].end).strip()
        pieces.append(f"{spec} {text};")
    return [TextEdit(node.start, node.end, " ".join(pieces))]


def _t12_sites(unit):
    return _decl_sites(unit, "T12_split_declaration_init", want_multi=False)


def _t12_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    node: Node = site.payload["node"]
    spec_range, declarators = site.payload["parts"]
    a, b = declarators[0]
    toks = unit.tokens
    eq = _top_level_punct(unit, _code_range(unit, a, b), "=")[0]
    name_ti = declarator_name_index(unit, a, eq)
    spec = unit.token_text(*spec_range).strip()
    declr = _byte_slice(unit, toks[a].start, toks[eq].start).strip()
    init = _byte_slice(unit, toks[eq].end, toks[b - 1].end).strip()
    name = toks[name_ti].text
    return [TextEdit(node.start, node.end, f"{spec} {declr}; {name} = {init};")]


def _body_start_site(unit: SyntaxUnit, op_id: str) -> list[Site]:
    body: Node = unit.function.meta["body"]
    brace_end = unit.tokens[body.t0].end
    return [Site(op_id, 0, brace_end, brace_end, {"at": brace_end})]


def _t13_sites(unit):
    return _body_start_site(unit, "T13_add_unused_variable")


def _t13_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    name = _fresh_name(unit, "smut_T13_")
    at = site.payload["at"]
    return [TextEdit(at, at, f"\n    int {name} = 0;")]


def _t14_sites(unit):
    return _body_start_site(unit, "T14_insert_unexecuted_code")


def _t14_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    name = _fresh_name(unit, "smut_T14_")
    at = site.payload["at"]
    return [TextEdit(at, at, f"\n    if (0) {{ int {name} = 0; }}")]


def _t15_sites(unit):
    return _body_start_site(unit, "T15_add_comment")


def _t15_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    at = site.payload["at"]
    return [TextEdit(at, at, "\n    /* no-op marker */")]


def _t16_sites(unit: SyntaxUnit) -> list[Site]:
    func = unit.function
    return [Site("T16_reformat_whitespace", 0, func.start, func.end, {"node": func})]


_NO_SPACE_BEFORE = frozenset({";", ",", ")", "]"})
_NO_SPACE_AFTER = frozenset({"(", "["})


def reformat_tokens(unit: SyntaxUnit, t0: int, t1: int) -> str:
    """Canonical whitespace renormalization of tokens[t0:t1]. The emitted
    text re-tokenizes to the identical token sequence; only spacing,
    indentation and line structure change."""
    lines: list[str] = []
    buf: list[str] = []
    indent = 0
    paren_depth = 0

    def flush(next_indent: int | None = None) -> None:
        nonlocal indent
        if buf:
            lines.append("    " * indent + "".join(buf))
            buf.clear()
        if next_indent is not None:
            indent = next_indent

    prev_text: str | None = None
    for ti in range(t0, t1):
        tok = unit.tokens[ti]
        text = tok.text
        if tok.kind == "preproc":
            flush()
            lines.append(text)
            prev_text = None
            continue
        if tok.kind == "comment":
            if buf:
                buf.append(" ")
            buf.append(text)
            if text.startswith("//"):
                flush()
                prev_text = None
            else:
                prev_text = text
            continue
        if text == "}" and paren_depth == 0:
            flush(max(indent - 1, 0))
            buf.append("}")
            flush()
            prev_text = None
            continue
        if buf and prev_text is not None:
            if text not in _NO_SPACE_BEFORE and prev_text not in _NO_SPACE_AFTER:
                buf.append(" ")
        buf.append(text)
        prev_text = text
        if tok.is_punct("("):
            paren_depth += 1
        elif tok.is_punct(")"):
            paren_depth = max(paren_depth - 1, 0)
        if paren_depth == 0 and text in (";", "{"):
            flush(indent + 1 if text == "{" else None)
            prev_text = None
    flush()
    return "\n".join(lines)


def _t16_edits(unit: SyntaxUnit, site: Site) -> list[TextEdit]:
    func: Node = site.payload["node"]
    new = reformat_tokens(unit, func.t0, func.t1)
    return [TextEdit(func.start, func.end, new)]


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

_OPERATOR_TABLE = [
    (
        "T01_rename_variable",
        "Trivial",
        "Rename one local variable (and all its uses) to a fresh v<k>; skipped "
        "when the function contains inline assembly or preprocessor directives.",
        "RoPGen",
        _t01_sites,
        _t01_edits,
    ),
    (
        "T02_rename_parameter",
        "Trivial",
        "Rename one parameter (and all its uses) to a fresh p<k>; same guards "
        "as variable renaming.",
        "RoPGen",
        _t02_sites,
        _t02_edits,
    ),
    (
        "T03_rename_function",
        "Trivial",
        "Rename the function itself, including recursive self-calls, to a "
        "fresh fn<k>.",
        "CodeImitator",
        _t03_sites,
        _t03_edits,
    ),
    (
        "T04_for_to_while",
        "ControlFlow",
        "Convert a classic for loop to init; while(cond){body incr;}. Loops "
        "containing `continue` or declaring their induction variable in the "
        "header are skipped.",
        "RoPGen",
        _t04_sites,
        _t04_edits,
    ),
    (
        "T05_while_to_for",
        "ControlFlow",
        "Convert while(cond) into for(;cond;), body untouched.",
        "RoPGen",
        _t05_sites,
        _t05_edits,
    ),
    (
        "T06_switch_to_if",
        "ControlFlow",
        "Convert a switch whose cases all end in break/return into an "
        "if/else-if chain; fallthrough, nested labels, and subjects with side "
        "effects are skipped.",
        "RoPGen",
        _t06_sites,
        _t06_edits,
    ),
    (
        "T07_split_if_condition",
        "ControlFlow",
        "Split if (a && b) S without else into if (a) { if (b) S }.",
        "CodeImitator",
        _t07_sites,
        _t07_edits,
    ),
    (
        "T08_swap_if_else",
        "ControlFlow",
        "Swap if/else branches under the negated, parenthesized condition.",
        "NatGen",
        _t08_sites,
        _t08_edits,
    ),
    (
        "T09_ternary_to_if",
        "ControlFlow",
        "Rewrite x = c ? a : b; as an if/else with one assignment per branch.",
        "NatGen",
        _t09_sites,
        _t09_edits,
    ),
    (
        "T10_incdec_to_compound",
        "Trivial",
        "Rewrite statement-level x++/x--/++x/--x as x += 1 / x -= 1.",
        "RoPGen",
        _t10_sites,
        _t10_edits,
    ),
    (
        "T11_split_multi_declaration",
        "Trivial",
        "Split int a, b = 2, *c; into one declaration per declarator.",
        "RoPGen",
        _t11_sites,
        _t11_edits,
    ),
    (
        "T12_split_declaration_init",
        "DataAndDeclaration",
        "Split T x = e; into T x; x = e; (static/const/extern, arrays and "
        "brace initializers are skipped).",
        "RoPGen",
        _t12_sites,
        _t12_edits,
    ),
    (
        "T13_add_unused_variable",
        "DeadBogusCode",
        "Insert a fresh unused variable declaration at body start.",
        "LimitsOfML4Vuln",
        _t13_sites,
        _t13_edits,
    ),
    (
        "T14_insert_unexecuted_code",
        "DeadBogusCode",
        "Insert if (0) { ... } with a self-contained statement at body start.",
        "LimitsOfML4Vuln",
        _t14_sites,
        _t14_edits,
    ),
    (
        "T15_add_comment",
        "Formatting",
        "Insert a block comment at body start.",
        "LimitsOfML4Vuln",
        _t15_sites,
        _t15_edits,
    ),
    (
        "T16_reformat_whitespace",
        "Formatting",
        "Renormalize all whitespace/indentation; the token stream is "
        "unchanged.",
        "CodeImitator",
        _t16_sites,
        _t16_edits,
    ),
]

REGISTRY: list[TransformOperator] = [
    TransformOperator(op_id, category, description, attribution)
    for op_id, category, description, attribution, _, _ in _OPERATOR_TABLE
]

_FINDERS = {row[0]: row[4] for row in _OPERATOR_TABLE}
_REWRITERS = {row[0]: row[5] for row in _OPERATOR_TABLE}

ALWAYS_APPLICABLE = (
    "T13_add_unused_variable",
    "T14_insert_unexecuted_code",
    "T15_add_comment",
    "T16_reformat_whitespace",
)


def list_operators() -> list[TransformOperator]:
    """The fixed operator registry, in documented order T01..T16."""
    return list(REGISTRY)


def get_operator(op_id: str) -> TransformOperator:
    for op in REGISTRY:
        if op.id == op_id or op.short == op_id:
            return op
    raise KeyError(f"unknown operator: {op_id}")


def find_sites(op: TransformOperator, unit: SyntaxUnit) -> list[Site]:
    """Deterministic, document-ordered applicability sites; empty means the
    operator does not apply to this function."""
    return _FINDERS[op.id](unit)


def apply(op: TransformOperator, unit: SyntaxUnit, site: Site, parent_id: str = "fn") -> Variant:
    """Apply ``op`` at ``site``; the result must re-parse and differ from the
    input, otherwise RewriteFailure is raised and the variant is discarded."""
    if site.op_id != op.id:
        raise ValueError(f"site {site.op_id!r} does not belong to operator {op.id!r}")
    edits = _REWRITERS[op.id](unit, site)
    text = render(unit, edits)
    if text == unit.text:
        raise RewriteFailure(f"{op.id} produced a no-op at site {site.ordinal}")
    try:
        parse_function(text)
    except ParseFailure as exc:
        raise RewriteFailure(
            f"{op.id} site {site.ordinal} produced unparseable text: {exc}"
        ) from exc
    return Variant(
        parent_id=parent_id,
        op_id=op.id,
        site=site.ordinal,
        variant_id=f"{parent_id}#{op.id}#{site.ordinal}",
        text=text,
        edit_span=(min(e.start for e in edits), max(e.end for e in edits)),
    )


def apply_all(
    unit: SyntaxUnit,
    parent_id: str = "fn",
    max_sites_per_op: int = 4,
    failures: list[str] | None = None,
) -> list[Variant]:
    """All variants of a function: per operator, up to ``max_sites_per_op``
    sites in document order. Per-variant rewrite failures are collected (or
    logged), never fatal."""
    variants = []
    for op in REGISTRY:
        for site in find_sites(op, unit)[:max_sites_per_op]:
            try:
                variants.append(apply(op, unit, site, parent_id=parent_id))
            except RewriteFailure as exc:
                logger.warning("dropped variant: %s", exc)
                if failures is not None:
                    failures.append(str(exc))
    return variants
