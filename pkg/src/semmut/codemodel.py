"""Lossless syntax model for single C functions.

Parses one external function definition into a statement-level tree whose
nodes carry byte spans into the original source, so that edits are pure
byte splices and a zero-edit render reproduces the input exactly. The
grammar is deliberately error tolerant: unknown constructs degrade to
opaque token runs, and anything that breaks statement structure becomes
an error node (which marks the function unparseable by default).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------

KEYWORDS = frozenset(
    """
    auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Alignas _Alignof _Atomic _Bool _Complex _Generic _Noreturn _Static_assert
    _Thread_local
    """.split()
)

TYPE_KEYWORDS = frozenset(
    "void char short int long float double signed unsigned _Bool _Complex".split()
)

QUALIFIER_KEYWORDS = frozenset(
    """
    const volatile restrict static extern register auto inline typedef
    _Atomic _Noreturn signed unsigned __restrict __restrict__ __inline
    __inline__ __extension__ __volatile__ __const __signed__ __unsigned__
    """.split()
)

ASM_KEYWORDS = frozenset({"asm", "__asm", "__asm__"})

# Multi-character punctuators, longest first so the scanner can greedy-match.
_PUNCTS = sorted(
    [
        "<<=", ">>=", "...",
        "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
        "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=", "##",
        "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=",
        "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}", "#",
    ],
    key=len,
    reverse=True,
)

def _byteset(chars: bytes) -> frozenset[bytes]:
    return frozenset(chars[i : i + 1] for i in range(len(chars)))


_IDENT_START = _byteset(b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | _byteset(b"0123456789")
_DIGITS = _byteset(b"0123456789")
_WS = _byteset(b" \t\r\n\f\v")


@dataclass(frozen=True)
class SourceFunction:
    """One corpus function: opaque unique id, the full text of exactly one
    C function definition, and an optional 0/1 ground-truth label
    (1 = vulnerable)."""

    id: str
    text: str
    label: int | None = None

    def parse(self) -> "SyntaxUnit":
        return parse_function(self.text)


@dataclass(frozen=True)
class Token:
    """One lexical token; ``start``/``end`` are byte offsets into the source."""

    kind: str  # ident | num | str | char | punct | comment | preproc | error
    start: int
    end: int
    text: str

    def is_ident(self, *names: str) -> bool:
        return self.kind == "ident" and (not names or self.text in names)

    def is_punct(self, *values: str) -> bool:
        return self.kind == "punct" and (not values or self.text in values)


def tokenize(src: bytes) -> list[Token]:
    """Scan UTF-8 C source into tokens. Never raises; malformed lexemes
    (e.g. an unterminated string) become a single ``error`` token."""
    toks: list[Token] = []
    i, n = 0, len(src)
    at_line_start = True

    def emit(kind: str, start: int, end: int) -> None:
        toks.append(Token(kind, start, end, src[start:end].decode("utf-8", "replace")))

    while i < n:
        c = src[i : i + 1]
        if c in _WS:
            at_line_start = at_line_start or c in (b"\n", b"\r")
            i += 1
            continue
        if c == b"\\" and src[i + 1 : i + 2] in (b"\n", b"\r"):
            i += 2  # line splice
            continue
        start = i
        if c == b"/" and src[i + 1 : i + 2] == b"/":
            while i < n and src[i : i + 1] != b"\n":
                i += 1
            emit("comment", start, i)
            continue
        if c == b"/" and src[i + 1 : i + 2] == b"*":
            j = src.find(b"*/", i + 2)
            if j < 0:
                emit("error", start, n)
                i = n
            else:
                i = j + 2
                emit("comment", start, i)
            at_line_start = False
            continue
        if c == b"#" and at_line_start:
            # Whole logical directive line, honoring backslash continuations.
            while i < n:
                if src[i : i + 1] == b"\n":
                    k = i - 1
                    while k >= start and src[k : k + 1] == b"\r":
                        k -= 1
                    if k >= start and src[k : k + 1] == b"\\":
                        i += 1
                        continue
                    break
                i += 1
            emit("preproc", start, i)
            at_line_start = True
            continue
        at_line_start = False
        if c in (b'"', b"'") or (
            c in (b"L", b"u", b"U") and src[i + 1 : i + 2] in (b'"', b"'")
        ) or (c == b"u" and src[i + 1 : i + 3] == b'8"'):
            # Optional encoding prefix, then the quoted literal.
            while src[i : i + 1] not in (b'"', b"'"):
                i += 1
            quote = src[i : i + 1]
            i += 1
            closed = False
            while i < n:
                b = src[i : i + 1]
                if b == b"\\":
                    i += 2
                    continue
                if b == quote:
                    i += 1
                    closed = True
                    break
                if b == b"\n":
                    break
                i += 1
            if not closed:
                emit("error", start, i)
            else:
                emit("str" if quote == b'"' else "char", start, i)
            continue
        if c in _DIGITS or (c == b"." and src[i + 1 : i + 2] in _DIGITS):
            i += 1
            while i < n:
                b = src[i : i + 1]
                if b in _IDENT_CONT or b == b".":
                    i += 1
                elif b in (b"+", b"-") and src[i - 1 : i] in (b"e", b"E", b"p", b"P"):
                    i += 1
                else:
                    break
            emit("num", start, i)
            continue
        if c in _IDENT_START:
            i += 1
            while i < n and src[i : i + 1] in _IDENT_CONT:
                i += 1
            emit("ident", start, i)
            continue
        for p in _PUNCTS:
            pb = p.encode()
            if src.startswith(pb, i):
                i += len(pb)
                emit("punct", start, i)
                break
        else:
            emit("error", start, i + 1)
            i += 1
    return toks


# ---------------------------------------------------------------------------
# Tree
# ---------------------------------------------------------------------------


@dataclass
class Node:
    """Syntax node covering tokens[t0:t1]; ``start``/``end`` are byte offsets."""

    kind: str
    start: int
    end: int
    t0: int
    t1: int
    children: list["Node"] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


class ParseFailure(Exception):
    """Input is not a single parseable C function. Carries the byte offset
    of the first construct the parser could not accept."""

    def __init__(self, position: int, message: str = "parse error"):
        super().__init__(f"{message} at byte {position}")
        self.position = position
        self.message = message


@dataclass
class SyntaxUnit:
    """Parsed function: source bytes, token list, and the node tree."""

    src: bytes
    tokens: list[Token]
    root: Node
    function: Node

    @property
    def text(self) -> str:
        return self.src.decode("utf-8")

    def token_text(self, t0: int, t1: int) -> str:
        """Source slice from the start of tokens[t0] to the end of tokens[t1-1]."""
        if t0 >= t1:
            return ""
        return self.src[self.tokens[t0].start : self.tokens[t1 - 1].end].decode("utf-8")

    def nodes(self, *kinds: str) -> list[Node]:
        return [n for n in self.root.walk() if not kinds or n.kind in kinds]


# Statement kinds that own a brace/paren structure the parser understands.
_LOOP_KINDS = {"for_statement", "while_statement", "do_statement"}


class _Parser:
    """Recursive-descent statement parser over the code token stream."""

    def __init__(self, src: bytes, tokens: list[Token]):
        self.src = src
        # Comments are preserved in SyntaxUnit.tokens but skipped for parsing.
        self.toks = tokens
        self.code = [i for i, t in enumerate(tokens) if t.kind != "comment"]
        self.pos = 0  # index into self.code
        self.errors: list[Node] = []

    # -- cursor helpers над self.code ------------------------------------
    def _tok(self, k: int = 0) -> Token | None:
        j = self.pos + k
        if j < len(self.code):
            return self.toks[self.code[j]]
        return None

    def _ti(self, k: int = 0) -> int:
        """Token-table index for the code token at cursor+k."""
        return self.code[self.pos + k]

    def _at_end(self) -> bool:
        return self.pos >= len(self.code)

    def _fail(self, message: str) -> ParseFailure:
        pos = len(self.src) if self._at_end() else self._tok().start
        return ParseFailure(pos, message)

    def _expect_punct(self, value: str) -> int:
        t = self._tok()
        if t is None or not t.is_punct(value):
            raise self._fail(f"expected '{value}'")
        i = self._ti()
        self.pos += 1
        return i

    def _skip_group(self, open_: str, close: str) -> int:
        """Consume a balanced bracket group, returning the token index of the
        closer. The cursor must sit on the opener."""
        depth = 0
        while not self._at_end():
            t = self._tok()
            if t.is_punct(open_):
                depth += 1
            elif t.is_punct(close):
                depth -= 1
                if depth == 0:
                    i = self._ti()
                    self.pos += 1
                    return i
            self.pos += 1
        raise self._fail(f"unmatched '{open_}'")

    def _make(self, kind: str, t0: int, t1: int, children=None, **meta) -> Node:
        toks = self.toks
        node = Node(kind, toks[t0].start, toks[t1 - 1].end, t0, t1, children or [], meta)
        if kind == "error":
            self.errors.append(node)
        return node

    # -- entry -----------------------------------------------------------
    def parse(self) -> tuple[Node, Node]:
        if not self.code:
            raise ParseFailure(len(self.src), "no tokens")
        func = self._function_definition()
        if not self._at_end():
            raise self._fail("trailing tokens after function definition")
        root = self._make("translation_unit", func.t0, func.t1, [func])
        root.start, root.end = 0, len(self.src)
        return root, func

    def _function_definition(self) -> Node:
        t0 = self._ti()
        # Declaration specifiers and declarator up to the parameter list.
        name_code_pos = None
        while not self._at_end():
            t = self._tok()
            if t.is_punct("("):
                break
            if t.is_punct("{") or t.is_punct(";"):
                raise self._fail("expected function declarator")
            if t.kind == "ident" and t.text not in KEYWORDS:
                name_code_pos = self.pos
            self.pos += 1
        if self._at_end() or name_code_pos is None:
            raise self._fail("expected function name before '('")
        name_ti = self.code[name_code_pos]
        params_t0 = self._ti()
        params_t1 = self._skip_group("(", ")") + 1
        params = self._make("parameter_list", params_t0, params_t1)
        # Trailer: K&R parameter declarations, attributes, asm labels ... up
        # to the body brace. Kept opaque.
        trailer_t0 = self.pos
        while not self._at_end() and not self._tok().is_punct("{"):
            t = self._tok()
            if t.is_punct("("):
                self._skip_group("(", ")")
            elif t.is_punct(";") or t.kind in ("ident", "num", "punct", "str", "char"):
                self.pos += 1
            else:
                raise self._fail("unexpected token before function body")
        if self._at_end():
            raise self._fail("expected function body")
        kr_decls = None
        if self.pos > trailer_t0:
            kr_decls = self._make(
                "declarator_trailer", self.code[trailer_t0], self.code[self.pos - 1] + 1
            )
        body = self._compound_statement()
        children = [params, body] if kr_decls is None else [params, kr_decls, body]
        node = self._make("function_definition", t0, body.t1, children)
        node.meta["name_ti"] = name_ti
        node.meta["params"] = params
        node.meta["body"] = body
        return node

    # -- statements --------------------------------------------------------
    def _compound_statement(self) -> Node:
        t0 = self._expect_punct("{")
        children: list[Node] = []
        while True:
            t = self._tok()
            if t is None:
                raise ParseFailure(len(self.src), "unterminated block")
            if t.is_punct("}"):
                t1 = self._ti() + 1
                self.pos += 1
                return self._make("compound_statement", t0, t1, children)
            children.append(self._statement())

    def _statement(self) -> Node:
        t = self._tok()
        assert t is not None
        if t.kind == "preproc":
            ti = self._ti()
            self.pos += 1
            return self._make("preproc_directive", ti, ti + 1)
        if t.kind == "error":
            ti = self._ti()
            self.pos += 1
            return self._make("error", ti, ti + 1)
        if t.is_punct("{"):
            return self._compound_statement()
        if t.is_punct(";"):
            ti = self._ti()
            self.pos += 1
            return self._make("empty_statement", ti, ti + 1)
        if t.is_ident("if"):
            return self._if_statement()
        if t.is_ident("for"):
            return self._for_statement()
        if t.is_ident("while"):
            return self._while_statement()
        if t.is_ident("do"):
            return self._do_statement()
        if t.is_ident("switch"):
            return self._switch_statement()
        if t.is_ident("case"):
            return self._case_label()
        if t.is_ident("default"):
            t0 = self._ti()
            self.pos += 1
            t1 = self._expect_punct(":") + 1
            return self._make("default_label", t0, t1)
        if t.is_ident("return", "goto"):
            kind = f"{t.text}_statement"
            t0 = self._ti()
            self.pos += 1
            t1 = self._scan_to_semi() + 1
            return self._make(kind, t0, t1)
        if t.is_ident("break", "continue"):
            kind = f"{t.text}_statement"
            t0 = self._ti()
            self.pos += 1
            t1 = self._expect_punct(";") + 1
            return self._make(kind, t0, t1)
        if t.kind == "ident" and t.text in ASM_KEYWORDS:
            return self._asm_statement()
        nxt = self._tok(1)
        if t.kind == "ident" and t.text not in KEYWORDS and nxt is not None and nxt.is_punct(":"):
            t0 = self._ti()
            colon = self._ti(1)
            self.pos += 2
            return self._make("label", t0, colon + 1)
        return self._simple_statement()

    def _paren_condition(self) -> Node:
        t0 = self._tok()
        if t0 is None or not t0.is_punct("("):
            raise self._fail("expected '('")
        start = self._ti()
        end = self._skip_group("(", ")")
        return self._make("condition", start, end + 1)

    def _if_statement(self) -> Node:
        t0 = self._ti()
        self.pos += 1
        cond = self._paren_condition()
        then = self._statement()
        els = None
        t = self._tok()
        if t is not None and t.is_ident("else"):
            self.pos += 1
            els = self._statement()
        t1 = (els or then).t1
        children = [cond, then] + ([els] if els else [])
        node = self._make("if_statement", t0, t1, children)
        node.meta.update(cond=cond, then=then, els=els)
        return node

    def _for_statement(self) -> Node:
        t0 = self._ti()
        self.pos += 1
        t = self._tok()
        if t is None or not t.is_punct("("):
            raise self._fail("expected '(' after for")
        header_open = self._ti()
        header_close = self._skip_group("(", ")")
        init_t, cond_t, incr_t = self._split_for_header(header_open + 1, header_close)
        body = self._statement()
        node = self._make("for_statement", t0, body.t1, [body])
        node.meta.update(
            header=(header_open, header_close),
            init=init_t,
            cond=cond_t,
            incr=incr_t,
            body=body,
        )
        return node

    def _split_for_header(self, t0: int, t1: int) -> tuple:
        """Split the token range of a for-header (exclusive of parens) at its
        two top-level semicolons into (init, cond, incr) token ranges."""
        semis = []
        depth = 0
        for ti in range(t0, t1):
            tok = self.toks[ti]
            if tok.kind == "comment":
                continue
            if tok.is_punct("(", "[", "{"):
                depth += 1
            elif tok.is_punct(")", "]", "}"):
                depth -= 1
            elif tok.is_punct(";") and depth == 0:
                semis.append(ti)
        if len(semis) != 2:
            raise ParseFailure(self.toks[t0].start, "malformed for header")
        return (t0, semis[0]), (semis[0] + 1, semis[1]), (semis[1] + 1, t1)

    def _while_statement(self) -> Node:
        t0 = self._ti()
        self.pos += 1
        cond = self._paren_condition()
        body = self._statement()
        node = self._make("while_statement", t0, body.t1, [cond, body])
        node.meta.update(cond=cond, body=body)
        return node

    def _do_statement(self) -> Node:
        t0 = self._ti()
        self.pos += 1
        body = self._statement()
        t = self._tok()
        if t is None or not t.is_ident("while"):
            raise self._fail("expected 'while' after do-body")
        self.pos += 1
        cond = self._paren_condition()
        t1 = self._expect_punct(";") + 1
        node = self._make("do_statement", t0, t1, [body, cond])
        node.meta.update(cond=cond, body=body)
        return node

    def _switch_statement(self) -> Node:
        t0 = self._ti()
        self.pos += 1
        cond = self._paren_condition()
        body = self._statement()
        node = self._make("switch_statement", t0, body.t1, [cond, body])
        node.meta.update(cond=cond, body=body)
        return node

    def _case_label(self) -> Node:
        t0 = self._ti()
        self.pos += 1
        # Constant expression up to the matching ':' (ternaries re-balance it).
        pending_ternary = 0
        depth = 0
        expr_t0 = self._ti() if not self._at_end() else t0 + 1
        while not self._at_end():
            t = self._tok()
            if t.is_punct("(", "[", "{"):
                depth += 1
            elif t.is_punct(")", "]", "}"):
                depth -= 1
            elif t.is_punct("?"):
                pending_ternary += 1
            elif t.is_punct(":") and depth == 0:
                if pending_ternary:
                    pending_ternary -= 1
                else:
                    t1 = self._ti() + 1
                    self.pos += 1
                    node = self._make("case_label", t0, t1)
                    node.meta["expr"] = (expr_t0, t1 - 1)
                    return node
            self.pos += 1
        raise self._fail("unterminated case label")

    def _asm_statement(self) -> Node:
        t0 = self._ti()
        self.pos += 1
        t = self._tok()
        while t is not None and t.kind == "ident" and (
            t.text in ("volatile", "__volatile__", "goto", "inline") or t.text in QUALIFIER_KEYWORDS
        ):
            self.pos += 1
            t = self._tok()
        if t is not None and t.is_punct("("):
            close = self._skip_group("(", ")")
            t1 = close + 1
            t = self._tok()
            if t is not None and t.is_punct(";"):
                t1 = self._ti() + 1
                self.pos += 1
            return self._make("asm_statement", t0, t1)
        if t is not None and t.is_punct("{"):
            close = self._skip_group("{", "}")
            return self._make("asm_statement", t0, close + 1)
        raise self._fail("malformed asm statement")

    def _scan_to_semi(self) -> int:
        """Consume tokens (balancing brackets) up to and including the next
        top-level ';'. Returns the semicolon's token index."""
        depth = 0
        while not self._at_end():
            t = self._tok()
            if t.is_punct("(", "[", "{"):
                depth += 1
            elif t.is_punct(")", "]", "}"):
                if depth == 0:
                    raise self._fail("expected ';'")
                depth -= 1
            elif t.is_punct(";") and depth == 0:
                i = self._ti()
                self.pos += 1
                return i
            elif t.kind == "error":
                raise self._fail("bad token in statement")
            self.pos += 1
        raise self._fail("expected ';'")

    def _simple_statement(self) -> Node:
        """Declaration or expression statement: a token run ending in ';'."""
        t0 = self._ti()
        semi = self._scan_to_semi()
        kind = "declaration" if self._looks_like_declaration(t0, semi) else "expression_statement"
        return self._make(kind, t0, semi + 1)

    def _looks_like_declaration(self, t0: int, t1: int) -> bool:
        code = [self.toks[ti] for ti in range(t0, t1) if self.toks[ti].kind != "comment"]
        if not code:
            return False
        head = code[0]
        if head.kind != "ident":
            return False
        if head.text in TYPE_KEYWORDS or head.text in ("struct", "union", "enum", "typedef"):
            return True
        if head.text in QUALIFIER_KEYWORDS:
            return True
        if head.text in KEYWORDS:
            return False
        # Typedef-name heuristics: `T x ...`, `T *x ...` at statement start.
        rest = code[1:]
        if rest and rest[0].kind == "ident" and rest[0].text not in KEYWORDS:
            return True
        k = 0
        while k < len(rest) and rest[k].is_punct("*"):
            k += 1
        if k > 0 and k < len(rest) and rest[k].kind == "ident" and rest[k].text not in KEYWORDS:
            after = rest[k + 1] if k + 1 < len(rest) else None
            if after is None or after.is_punct(";", "=", ",", "[", ")"):
                return True
        return False


def looks_like_declaration(unit: "SyntaxUnit", t0: int, t1: int) -> bool:
    """Heuristic declaration-vs-expression classification of tokens[t0:t1]."""
    return _Parser(unit.src, unit.tokens)._looks_like_declaration(t0, t1)


def parse_function(text: str) -> SyntaxUnit:
    """Parse one C function definition.

    Raises ParseFailure if the text is not a single well-formed external
    function definition, if lexing produced error tokens, or if any error
    node was synthesized during parsing.
    """
    if isinstance(text, bytes):  # defensive: loaders should pass str
        text = text.decode("utf-8")
    src = text.encode("utf-8")
    tokens = tokenize(src)
    for tok in tokens:
        if tok.kind == "error":
            raise ParseFailure(tok.start, "lexical error")
    parser = _Parser(src, tokens)
    root, func = parser.parse()
    if parser.errors:
        raise ParseFailure(parser.errors[0].start, "unparseable construct")
    return SyntaxUnit(src, tokens, root, func)


def contains_inline_assembly(unit: SyntaxUnit) -> bool:
    """True iff the parse tree contains an asm statement node."""
    return any(n.kind == "asm_statement" for n in unit.root.walk())


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TextEdit:
    """Replace the byte range [start, end) of the original source."""

    start: int
    end: int
    replacement: str


class OverlapError(ValueError):
    """Two edits in one render call overlap."""


def render(unit: SyntaxUnit, edits: list[TextEdit]) -> str:
    """Apply non-overlapping edits to the unit's source and return the new
    text. With no edits this reproduces the input byte for byte."""
    if not edits:
        return unit.text
    ordered = sorted(edits, key=lambda e: (e.start, e.end))
    out: list[bytes] = []
    cursor = 0
    prev_end = -1
    for e in ordered:
        if e.start < 0 or e.end > len(unit.src) or e.start > e.end:
            raise ValueError(f"edit span out of range: {(e.start, e.end)}")
        if e.start < prev_end:
            raise OverlapError(f"edit at {e.start} overlaps previous edit ending at {prev_end}")
        out.append(unit.src[cursor : e.start])
        out.append(e.replacement.encode("utf-8"))
        cursor = e.end
        prev_end = e.end
    out.append(unit.src[cursor:])
    return b"".join(out).decode("utf-8")


# ---------------------------------------------------------------------------
# Scope resolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Declaration:
    name: str
    ti: int  # token index of the declared identifier
    kind: str  # parameter | local | function


@dataclass
class ScopeMap:
    """Classification of every identifier occurrence in a function.

    ``resolution`` maps use-site token indices to their Declaration (or None
    for externals/globals, which is a classification and not an error).
    ``uses`` maps each declaration to its resolved use sites in document
    order. Remaining identifier tokens are classified in ``roles`` as
    declaration names, members, labels, or type-ish tokens.
    """

    declarations: list[Declaration]
    resolution: dict[int, Declaration | None]
    uses: dict[Declaration, list[int]]
    roles: dict[int, str]

    def declaration_of(self, ti: int) -> Declaration | None:
        return self.resolution.get(ti)

    def unresolved_names(self, unit: SyntaxUnit) -> set[str]:
        return {
            unit.tokens[ti].text for ti, d in self.resolution.items() if d is None
        }


_NON_NAME_AFTER = frozenset({"ident", "num", "str", "char"})


def declarator_name_index(unit: SyntaxUnit, t0: int, t1: int) -> int | None:
    """Token index of the declared identifier within a declarator token run.

    Handles pointers, qualifiers, parenthesized declarators (function
    pointers) and array/function suffixes. Returns None when no plausible
    name exists (e.g. abstract declarators)."""
    toks = unit.tokens
    i = t0
    while i < t1:
        t = toks[i]
        if t.kind == "comment":
            i += 1
            continue
        if t.is_punct("*") or (t.kind == "ident" and t.text in QUALIFIER_KEYWORDS):
            i += 1
            continue
        if t.is_punct("("):
            # parenthesized declarator: recurse into the group
            depth = 0
            j = i
            while j < t1:
                if toks[j].is_punct("("):
                    depth += 1
                elif toks[j].is_punct(")"):
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            return declarator_name_index(unit, i + 1, j)
        if t.kind == "ident" and t.text not in KEYWORDS:
            # Maybe still a type name (`GString *s`): if what follows starts a
            # new declarator core, keep scanning.
            j = i + 1
            while j < t1 and toks[j].kind == "comment":
                j += 1
            if j < t1 and (toks[j].is_punct("*") or (toks[j].kind == "ident" and toks[j].text not in KEYWORDS)):
                i = j
                continue
            return i
        if t.kind == "ident" and t.text in ("struct", "union", "enum"):
            i += 2  # keyword + tag
            continue
        if t.kind == "ident":
            i += 1
            continue
        return None
    return None


def split_top_level(unit: SyntaxUnit, t0: int, t1: int, sep: str) -> list[tuple[int, int]]:
    """Split tokens[t0:t1] at bracket-depth-0 occurrences of the punct ``sep``."""
    parts = []
    depth = 0
    seg = t0
    for ti in range(t0, t1):
        t = unit.tokens[ti]
        if t.kind == "comment":
            continue
        if t.is_punct("(", "[", "{"):
            depth += 1
        elif t.is_punct(")", "]", "}"):
            depth -= 1
        elif depth == 0 and t.is_punct(sep):
            parts.append((seg, ti))
            seg = ti + 1
    parts.append((seg, t1))
    return parts


def declaration_parts(unit: SyntaxUnit, decl: Node) -> tuple[tuple[int, int], list[tuple[int, int]]] | None:
    """Split a declaration node into (specifier range, declarator ranges).

    Returns None when the shape is too exotic to split safely (e.g. an
    inline struct definition)."""
    toks = unit.tokens
    t0, t1 = decl.t0, decl.t1 - 1  # drop ';'
    i = t0
    saw_type = False
    while i < t1:
        t = toks[i]
        if t.kind == "comment":
            i += 1
            continue
        if t.kind == "ident" and (t.text in TYPE_KEYWORDS or t.text in QUALIFIER_KEYWORDS):
            saw_type = saw_type or t.text in TYPE_KEYWORDS
            i += 1
            continue
        if t.kind == "ident" and t.text in ("struct", "union", "enum"):
            j = i + 1
            while j < t1 and toks[j].kind == "comment":
                j += 1
            if j < t1 and toks[j].kind == "ident":
                i = j + 1
                saw_type = True
                continue
            return None  # anonymous aggregate definition
        if t.is_punct("{"):
            return None  # aggregate body in specifiers
        if t.kind == "ident" and t.text not in KEYWORDS and not saw_type:
            # Candidate typedef-name: treat as specifier only if a declarator
            # core follows.
            j = i + 1
            while j < t1 and toks[j].kind == "comment":
                j += 1
            if j < t1 and (toks[j].is_punct("*") or toks[j].kind == "ident"):
                saw_type = True
                i += 1
                continue
            break
        break
    if i <= t0 or i >= t1:
        return None
    declarators = split_top_level(unit, i, t1, ",")
    declarators = [(a, b) for a, b in declarators if b > a]
    if not declarators:
        return None
    return (t0, i), declarators


def resolve_scopes(unit: SyntaxUnit) -> ScopeMap:
    """Map every identifier occurrence to a declaration, a role, or
    "unresolved". Pure function of the unit's text."""
    toks = unit.tokens
    declarations: list[Declaration] = []
    resolution: dict[int, Declaration | None] = {}
    uses: dict[Declaration, list[int]] = {}
    roles: dict[int, str] = {}

    func = unit.function
    scopes: list[dict[str, Declaration]] = [{}]

    def declare(name_ti: int, kind: str) -> None:
        name = toks[name_ti].text
        d = Declaration(name, name_ti, kind)
        declarations.append(d)
        uses[d] = []
        scopes[-1][name] = d
        roles[name_ti] = "decl"

    def lookup(name: str) -> Declaration | None:
        for scope in reversed(scopes):
            if name in scope:
                return scope[name]
        return None

    # Function name participates so recursive self-calls resolve.
    declare(func.meta["name_ti"], "function")

    params: Node = func.meta["params"]
    for a, b in split_top_level(unit, params.t0 + 1, params.t1 - 1, ","):
        if b <= a:
            continue
        seg = [ti for ti in range(a, b) if toks[ti].kind != "comment"]
        if len(seg) == 1 and toks[seg[0]].kind == "ident" and toks[seg[0]].text not in KEYWORDS:
            declare(seg[0], "parameter")  # K&R or identifier-only parameter
            continue
        if any(toks[ti].is_ident("void") for ti in seg) and len(seg) == 1:
            continue
        ni = declarator_name_index(unit, a, b)
        if ni is not None:
            declare(ni, "parameter")

    def classify_range(t0: int, t1: int) -> None:
        """Classify identifier uses in tokens[t0:t1] (no declarations here)."""
        ti = t0
        while ti < t1:
            t = toks[ti]
            if t.kind != "ident" or t.text in KEYWORDS or ti in roles:
                ti += 1
                continue
            prev = _prev_code(ti)
            if prev is not None and toks[prev].is_punct(".", "->"):
                roles[ti] = "member"
                ti += 1
                continue
            if prev is not None and toks[prev].is_ident("goto"):
                roles[ti] = "label"
                ti += 1
                continue
            if t.text in ASM_KEYWORDS:
                roles[ti] = "asm"
                ti += 1
                continue
            d = lookup(t.text)
            resolution[ti] = d
            roles[ti] = "use"
            if d is not None:
                uses[d].append(ti)
            ti += 1

    def _prev_code(ti: int) -> int | None:
        j = ti - 1
        while j >= 0 and toks[j].kind == "comment":
            j -= 1
        return j if j >= 0 else None

    def walk_statement(node: Node) -> None:
        if node.kind == "compound_statement":
            scopes.append({})
            for child in node.children:
                walk_statement(child)
            scopes.pop()
            return
        if node.kind == "declaration":
            # C scoping: initializer of declarator N sees declarators 1..N.
            parts = declaration_parts(unit, node)
            if parts is None:
                # Exotic shape: register the first plausible name, classify
                # the rest of the statement as ordinary uses.
                ni = declarator_name_index(unit, node.t0, node.t1 - 1)
                if ni is not None:
                    declare(ni, "local")
                classify_range(node.t0, node.t1)
                return
            _, declarators = parts
            for a, b in declarators:
                eq = next((ti for ti in range(a, b) if toks[ti].is_punct("=")), None)
                ni = declarator_name_index(unit, a, eq if eq is not None else b)
                classify_range(a, ni if ni is not None else (eq if eq is not None else b))
                if ni is not None:
                    declare(ni, "local")
                    classify_range(ni + 1, eq if eq is not None else b)
                if eq is not None:
                    classify_range(eq + 1, b)
            return
        if node.kind == "for_statement":
            scopes.append({})
            init_t0, init_t1 = node.meta["init"]
            init_node = _for_init_declaration(unit, init_t0, init_t1)
            if init_node is not None:
                walk_statement(init_node)
            else:
                classify_range(init_t0, init_t1)
            classify_range(*node.meta["cond"])
            classify_range(*node.meta["incr"])
            walk_statement(node.meta["body"])
            scopes.pop()
            return
        if node.kind in ("if_statement", "while_statement", "do_statement", "switch_statement"):
            cond = node.meta.get("cond")
            if cond is not None:
                classify_range(cond.t0 + 1, cond.t1 - 1)
            for child in node.children:
                if child.kind == "condition":
                    continue
                walk_statement(child)
            return
        if node.kind == "label":
            roles[node.t0] = "label"
            return
        if node.kind in ("case_label",):
            expr = node.meta.get("expr")
            if expr:
                classify_range(*expr)
            return
        if node.kind in ("asm_statement", "preproc_directive", "default_label",
                         "break_statement", "continue_statement", "empty_statement", "error"):
            return
        if node.kind in ("return_statement", "goto_statement", "expression_statement"):
            classify_range(node.t0, node.t1)
            return
        for child in node.children:
            walk_statement(child)

    def _for_init_declaration(u: SyntaxUnit, t0: int, t1: int):
        if t1 <= t0:
            return None
        probe = _Parser(u.src, u.tokens)
        if not probe._looks_like_declaration(t0, t1):
            return None
        node = Node("declaration", toks[t0].start, toks[t1 - 1].end, t0, t1 + 1)
        return node

    scopes.append({})  # function scope: parameters + body locals share it
    # Parameters were declared into the outer scope above; re-home them here.
    # (Simpler: declare params after pushing; they were already declared, so
    # copy the bindings down.)
    for d in declarations:
        scopes[-1][d.name] = d

    body: Node = func.meta["body"]
    for child in body.children:
        walk_statement(child)

    # Identifiers never touched by the walk (specifier type names, struct
    # tags, parameter-list internals, asm operands) are type-ish tokens.
    for ti, tok in enumerate(toks):
        if tok.kind == "ident" and tok.text not in KEYWORDS and ti not in roles:
            roles[ti] = "type"

    return ScopeMap(declarations, resolution, uses, roles)


# ---------------------------------------------------------------------------
# Token-stream helpers shared by verify/transform layers
# ---------------------------------------------------------------------------


def code_token_texts(text: str) -> list[str]:
    """Token texts of ``text`` excluding comments; whitespace-insensitive
    fingerprint used by formatting checks."""
    return [t.text for t in tokenize(text.encode("utf-8")) if t.kind != "comment"]


_WS_RE = re.compile(r"\s+")


def squeeze(text: str) -> str:
    """Collapse runs of whitespace to single spaces and trim."""
    return _WS_RE.sub(" ", text).strip()
