"""Reader and writer for the line-oriented ``.cgp`` input format.

See ``docs/format.md`` for the grammar. Every block is validated as soon as
it is read; errors carry the line and column of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import (
    Algebra,
    Bimodule,
    LeftModule,
    ModuleHom,
    tensor_over,
    validate_algebra,
    validate_bimodule,
    validate_module,
)
from .cleft import PairModule, ThetaData, ThetaExtension, build_T, validate_theta
from .criteria import MoritaContext, Quad, build_morita_context, quad_zero_laws
from .exactla import Field, Matrix


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class SemanticError(ValueError):
    def __init__(self, message: str, block: str, line: int | None = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"block {block!r}{where}: {message}")
        self.block = block
        self.line = line
        self.message = message


@dataclass
class Expectation:
    command: str
    target: str
    value: str
    line: int


@dataclass
class Document:
    field: Field
    algebras: dict[str, Algebra] = dc_field(default_factory=dict)
    modules: dict[str, LeftModule] = dc_field(default_factory=dict)
    bimodules: dict[str, Bimodule] = dc_field(default_factory=dict)
    thetas: dict[str, ThetaData] = dc_field(default_factory=dict)
    extensions: dict[str, ThetaExtension] = dc_field(default_factory=dict)
    pairs: dict[str, PairModule] = dc_field(default_factory=dict)
    contexts: dict[str, MoritaContext] = dc_field(default_factory=dict)
    quads: dict[str, Quad] = dc_field(default_factory=dict)
    expectations: list[Expectation] = dc_field(default_factory=list)
    blocks: list[tuple[str, str, int]] = dc_field(default_factory=list)

    def extension_for(self, name: str) -> ThetaExtension:
        if name in self.extensions:
            return self.extensions[name]
        if name in self.contexts:
            return self.contexts[name].ext
        raise KeyError(name)


# -- tokens ----------------------------------------------------------------------------

@dataclass
class _Line:
    number: int
    text: str
    tokens: list[tuple[str, int]]   # (token, column)


_TOKEN = re.compile(r"[;=]|[^\s;=]+")


def _tokenize(text: str) -> list[_Line]:
    out = []
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        if toks:
            out.append(_Line(n, raw, toks))
    return out


def _scalar(fld: Field, tok: str, line: int, col: int):
    try:
        if "/" in tok:
            val = Fraction(tok)
        else:
            val = int(tok)
    except ValueError:
        raise ParseError(f"expected a number, got {tok!r}", line, col) from None
    if isinstance(val, Fraction) and not fld.is_rational:
        if val.denominator % fld.characteristic == 0:
            raise ParseError(f"denominator of {tok} vanishes mod {fld.characteristic}", line, col)
        val = val.numerator * pow(val.denominator, -1, fld.characteristic)
    return fld.element(val)


def _matrix(fld: Field, toks: list[tuple[str, int]], rows: int, cols: int, line: int) -> Matrix:
    """``r ; r ; ...`` rows or ``zero``; checked against the expected shape."""
    if len(toks) == 1 and toks[0][0] == "zero":
        return Matrix.zeros(fld, rows, cols)
    if not toks:
        if rows * cols == 0:
            return Matrix.zeros(fld, rows, cols)
        raise ParseError("missing matrix", line)
    data: list[list] = [[]]
    for tok, col in toks:
        if tok == ";":
            data.append([])
        else:
            data[-1].append(_scalar(fld, tok, line, col))
    if len(data) != rows:
        raise ParseError(f"expected {rows} rows, got {len(data)}", line, toks[0][1])
    for r in data:
        if len(r) != cols:
            raise ParseError(f"expected {cols} entries per row, got {len(r)}", line, toks[0][1])
    return Matrix.from_rows(fld, data, ncols=cols)


def _vector(fld: Field, toks, n: int, line: int) -> list:
    vals = [_scalar(fld, t, line, c) for t, c in toks]
    if len(vals) != n:
        raise ParseError(f"expected {n} coordinates, got {len(vals)}", line, toks[0][1] if toks else 1)
    return vals


def _int(tok: tuple[str, int], line: int) -> int:
    try:
        v = int(tok[0])
    except ValueError:
        raise ParseError(f"expected an integer, got {tok[0]!r}", line, tok[1]) from None
    if v < 0:
        raise ParseError("expected a nonnegative integer", line, tok[1])
    return v


def _expect(toks, idx: int, word: str, line: int) -> None:
    if idx >= len(toks) or toks[idx][0] != word:
        col = toks[idx][1] if idx < len(toks) else (toks[-1][1] + len(toks[-1][0]) if toks else 1)
        got = toks[idx][0] if idx < len(toks) else "end of line"
        raise ParseError(f"expected {word!r}, got {got!r}", line, col)


def _after_eq(toks, idx: int, line: int):
    _expect(toks, idx, "=", line)
    return toks[idx + 1:]


# -- parser ------------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, field_override: Field | None):
        self.lines = _tokenize(text)
        self.pos = 0
        self.field_override = field_override
        self.doc = Document(field_override or Field(7))
        self.field_seen = False

    def _ref(self, table: dict, kind: str, tok, line: int):
        if tok[0] not in table:
            raise ParseError(f"unknown {kind} {tok[0]!r}", line, tok[1])
        return table[tok[0]]

    def _fresh(self, tok, line: int) -> str:
        name = tok[0]
        d = self.doc
        for table in (d.algebras, d.modules, d.bimodules, d.thetas, d.extensions, d.pairs, d.contexts, d.quads):
            if name in table:
                raise ParseError(f"name {name!r} already defined", line, tok[1])
        return name

    def _body(self, header: _Line) -> list[_Line]:
        body = []
        while True:
            if self.pos >= len(self.lines):
                raise ParseError("block is not closed by 'end'", header.number, 1)
            ln = self.lines[self.pos]
            self.pos += 1
            if ln.tokens[0][0] == "end":
                if len(ln.tokens) > 1:
                    raise ParseError("unexpected tokens after 'end'", ln.number, ln.tokens[1][1])
                return body
            body.append(ln)

    def parse(self) -> Document:
        while self.pos < len(self.lines):
            ln = self.lines[self.pos]
            self.pos += 1
            kw = ln.tokens[0][0]
            handler = getattr(self, f"_kw_{kw}", None)
            if handler is None:
                raise ParseError(f"unknown keyword {kw!r}", ln.number, ln.tokens[0][1])
            handler(ln)
        return self.doc

    @property
    def fld(self) -> Field:
        return self.doc.field

    def _kw_field(self, ln: _Line) -> None:
        t = ln.tokens
        if len(t) != 2:
            raise ParseError("usage: field <prime> | field rational", ln.number, t[0][1])
        if self.field_seen or len(self.doc.blocks):
            raise ParseError("field must be declared once, before any block", ln.number, t[0][1])
        self.field_seen = True
        if self.field_override is not None:
            return
        if t[1][0] == "rational":
            self.doc.field = Field(None)
        else:
            try:
                self.doc.field = Field(_int(t[1], ln.number))
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(str(exc), ln.number, t[1][1]) from None

    def _kw_algebra(self, ln: _Line) -> None:
        t = ln.tokens
        if len(t) != 4:
            raise ParseError("usage: algebra <name> dim <n>", ln.number, t[0][1])
        name = self._fresh(t[1], ln.number)
        _expect(t, 2, "dim", ln.number)
        n = _int(t[3], ln.number)
        body = self._body(ln)
        fld = self.fld
        c = np.zeros((n, n, n), dtype=object)
        c[...] = 0
        unit = None
        radical = None
        for b in body:
            bt = b.tokens
            key = bt[0][0]
            if key == "unit":
                unit = _vector(fld, bt[1:], n, b.number)
            elif key == "prod":
                if len(bt) < 4:
                    raise ParseError("usage: prod <i> <j> = <coords>", b.number, bt[0][1])
                i, j = _int(bt[1], b.number), _int(bt[2], b.number)
                if i >= n or j >= n:
                    raise ParseError("basis index out of range", b.number, bt[1][1])
                c[i, j, :] = _vector(fld, _after_eq(bt, 3, b.number), n, b.number)
            elif key == "radical":
                vecs = _split_rows(bt[1:])
                cols = [_vector(fld, v, n, b.number) for v in vecs if v]
                radical = (Matrix.from_rows(fld, cols, ncols=n).T if cols else Matrix.zeros(fld, n, 0))
            else:
                raise ParseError(f"unknown algebra entry {key!r}", b.number, bt[0][1])
        if unit is None:
            raise SemanticError("missing unit", name, ln.number)
        alg = Algebra(fld, c, unit, name=name, radical=radical)
        rep = validate_algebra(alg)
        if not rep.ok:
            raise SemanticError("; ".join(rep.failures), name, ln.number)
        self.doc.algebras[name] = alg
        self.doc.blocks.append(("algebra", name, ln.number))

    def _actions(self, alg: Algebra, body: list[_Line], dim: int, key: str) -> list[Matrix]:
        acts: dict[int, Matrix] = {}
        for b in body:
            bt = b.tokens
            if bt[0][0] != key:
                continue
            i = _int(bt[1], b.number) if len(bt) > 1 else None
            if i is None or i >= alg.dim:
                raise ParseError("basis index missing or out of range", b.number, bt[0][1])
            acts[i] = _matrix(self.fld, _after_eq(bt, 2, b.number), dim, dim, b.number)
        out = []
        for i in range(alg.dim):
            if i in acts:
                out.append(acts[i])
            else:
                out.append(_implicit_action(alg, i, dim, self.fld))
        return out

    def _kw_module(self, ln: _Line) -> None:
        t = ln.tokens
        if len(t) != 6:
            raise ParseError("usage: module <name> over <algebra> dim <d>", ln.number, t[0][1])
        name = self._fresh(t[1], ln.number)
        _expect(t, 2, "over", ln.number)
        alg = self._algebra_or_ext(t[3], ln.number)
        _expect(t, 4, "dim", ln.number)
        d = _int(t[5], ln.number)
        body = self._body(ln)
        for b in body:
            if b.tokens[0][0] != "act":
                raise ParseError(f"unknown module entry {b.tokens[0][0]!r}", b.number, b.tokens[0][1])
        x = LeftModule(alg, self._actions(alg, body, d, "act"), name=name)
        rep = validate_module(x)
        if not rep.ok:
            raise SemanticError("; ".join(rep.failures), name, ln.number)
        self.doc.modules[name] = x
        self.doc.blocks.append(("module", name, ln.number))

    def _algebra_or_ext(self, tok, line: int) -> Algebra:
        d = self.doc
        if tok[0] in d.algebras:
            return d.algebras[tok[0]]
        if tok[0] in d.extensions:
            return d.extensions[tok[0]].t
        if tok[0] in d.contexts:
            return d.contexts[tok[0]].ext.t
        raise ParseError(f"unknown algebra {tok[0]!r}", line, tok[1])

    def _kw_bimodule(self, ln: _Line) -> None:
        t = ln.tokens
        if len(t) != 8:
            raise ParseError("usage: bimodule <name> left <A> right <B> dim <d>", ln.number, t[0][1])
        name = self._fresh(t[1], ln.number)
        _expect(t, 2, "left", ln.number)
        a = self._ref(self.doc.algebras, "algebra", t[3], ln.number)
        _expect(t, 4, "right", ln.number)
        b = self._ref(self.doc.algebras, "algebra", t[5], ln.number)
        _expect(t, 6, "dim", ln.number)
        d = _int(t[7], ln.number)
        body = self._body(ln)
        for bl in body:
            if bl.tokens[0][0] not in ("left", "right"):
                raise ParseError(f"unknown bimodule entry {bl.tokens[0][0]!r}", bl.number, bl.tokens[0][1])
        left = self._actions(a, body, d, "left")
        right = self._actions(b, body, d, "right")
        m = Bimodule(a, b, left, right, name=name)
        rep = validate_bimodule(m)
        if not rep.ok:
            raise SemanticError("; ".join(rep.failures), name, ln.number)
        self.doc.bimodules[name] = m
        self.doc.blocks.append(("bimodule", name, ln.number))

    def _kw_theta(self, ln: _Line) -> None:
        t = ln.tokens
        if len(t) < 5:
            raise ParseError("usage: theta <name> on <bimodule> = <matrix>", ln.number, t[0][1])
        name = self._fresh(t[1], ln.number)
        _expect(t, 2, "on", ln.number)
        m = self._ref(self.doc.bimodules, "bimodule", t[3], ln.number)
        if m.left_alg is not m.right_alg:
            raise SemanticError("theta needs an (R, R)-bimodule", name, ln.number)
        mat = _matrix(self.fld, _after_eq(t, 4, ln.number), m.dim, m.dim * m.dim, ln.number)
        try:
            data = ThetaData.from_k_level(m.left_alg, m, mat, name=name)
        except ValueError as exc:
            raise SemanticError(str(exc), name, ln.number) from None
        rep = validate_theta(data)
        if not rep.ok:
            raise SemanticError("; ".join(rep.failures), name, ln.number)
        self.doc.thetas[name] = data
        self.doc.blocks.append(("theta", name, ln.number))

    def _kw_extension(self, ln: _Line) -> None:
        t = ln.tokens
        if len(t) not in (6, 8):
            raise ParseError("usage: extension <name> base <R> bimodule <M> [theta <th>]", ln.number, t[0][1])
        name = self._fresh(t[1], ln.number)
        _expect(t, 2, "base", ln.number)
        r = self._ref(self.doc.algebras, "algebra", t[3], ln.number)
        _expect(t, 4, "bimodule", ln.number)
        m = self._ref(self.doc.bimodules, "bimodule", t[5], ln.number)
        if m.left_alg is not r or m.right_alg is not r:
            raise SemanticError("bimodule is not over the base on both sides", name, ln.number)
        if len(t) == 8:
            _expect(t, 6, "theta", ln.number)
            data = self._ref(self.doc.thetas, "theta", t[7], ln.number)
            if data.m is not m:
                raise SemanticError("theta is defined on a different bimodule", name, ln.number)
        else:
            data = ThetaData.zero(r, m)
        try:
            ext = build_T(data, name=name)
        except ValueError as exc:
            raise SemanticError(str(exc), name, ln.number) from None
        self.doc.extensions[name] = ext
        self.doc.blocks.append(("extension", name, ln.number))

    def _kw_pair(self, ln: _Line) -> None:
        t = ln.tokens
        if len(t) != 6:
            raise ParseError("usage: pair <name> over <extension> base <module>", ln.number, t[0][1])
        name = self._fresh(t[1], ln.number)
        _expect(t, 2, "over", ln.number)
        try:
            ext = self.doc.extension_for(t[3][0])
        except KeyError:
            raise ParseError(f"unknown extension {t[3][0]!r}", ln.number, t[3][1]) from None
        _expect(t, 4, "base", ln.number)
        x = self._ref(self.doc.modules, "module", t[5], ln.number)
        if x.alg is not ext.base:
            raise SemanticError("base module is not over the extension's base ring", name, ln.number)
        body = self._body(ln)
        tp = tensor_over(ext.m, x)
        alpha_k = Matrix.zeros(self.fld, x.dim, ext.m.dim * x.dim)
        for b in body:
            bt = b.tokens
            if bt[0][0] != "alpha":
                raise ParseError(f"unknown pair entry {bt[0][0]!r}", b.number, bt[0][1])
            alpha_k = _matrix(self.fld, _after_eq(bt, 1, b.number), x.dim, ext.m.dim * x.dim, b.number)
        alpha = _descend(alpha_k, tp, name, ln.number)
        p = PairModule(ext, x, alpha, name=name)
        rep = p.validate()
        if not rep.ok:
            raise SemanticError("; ".join(rep.failures), name, ln.number)
        self.doc.pairs[name] = p
        self.doc.blocks.append(("pair", name, ln.number))

    def _kw_context(self, ln: _Line) -> None:
        t = ln.tokens
        if len(t) not in (8, 10):
            raise ParseError("usage: context <name> A <a> B <b> M <m> [N <n>]", ln.number, t[0][1])
        name = self._fresh(t[1], ln.number)
        _expect(t, 2, "A", ln.number)
        a = self._ref(self.doc.algebras, "algebra", t[3], ln.number)
        _expect(t, 4, "B", ln.number)
        b = self._ref(self.doc.algebras, "algebra", t[5], ln.number)
        _expect(t, 6, "M", ln.number)
        m = self._ref(self.doc.bimodules, "bimodule", t[7], ln.number)
        n = None
        if len(t) == 10:
            _expect(t, 8, "N", ln.number)
            n = self._ref(self.doc.bimodules, "bimodule", t[9], ln.number)
        try:
            ctx = build_morita_context(a, b, m, n, name=name)
        except ValueError as exc:
            raise SemanticError(str(exc), name, ln.number) from None
        self.doc.contexts[name] = ctx
        self.doc.blocks.append(("context", name, ln.number))

    def _kw_quad(self, ln: _Line) -> None:
        t = ln.tokens
        if len(t) != 8:
            raise ParseError("usage: quad <name> over <context> X <x> Y <y>", ln.number, t[0][1])
        name = self._fresh(t[1], ln.number)
        _expect(t, 2, "over", ln.number)
        ctx = self._ref(self.doc.contexts, "context", t[3], ln.number)
        _expect(t, 4, "X", ln.number)
        x = self._ref(self.doc.modules, "module", t[5], ln.number)
        _expect(t, 6, "Y", ln.number)
        y = self._ref(self.doc.modules, "module", t[7], ln.number)
        if x.alg is not ctx.a or y.alg is not ctx.b:
            raise SemanticError("X must be over A and Y over B", name, ln.number)
        body = self._body(ln)
        fld = self.fld
        ty = tensor_over(ctx.m, y)
        g_k = Matrix.zeros(fld, x.dim, ctx.m.dim * y.dim)
        dn = ctx.n.dim if ctx.n is not None else 0
        f_k = Matrix.zeros(fld, y.dim, dn * x.dim)
        for b in body:
            bt = b.tokens
            if bt[0][0] == "g":
                g_k = _matrix(fld, _after_eq(bt, 1, b.number), x.dim, ctx.m.dim * y.dim, b.number)
            elif bt[0][0] == "f":
                if ctx.n is None:
                    raise ParseError("f given for a context without N", b.number, bt[0][1])
                f_k = _matrix(fld, _after_eq(bt, 1, b.number), y.dim, dn * x.dim, b.number)
            else:
                raise ParseError(f"unknown quad entry {bt[0][0]!r}", b.number, bt[0][1])
        g = _descend(g_k, ty, name, ln.number)
        f = _descend(f_k, tensor_over(ctx.n, x), name, ln.number) if ctx.n is not None else Matrix.zeros(fld, y.dim, 0)
        q = Quad(ctx, x, y, f, g, name=name)
        if not ModuleHom(ty.module, x, g).is_equivariant():
            raise SemanticError("g is not A-linear", name, ln.number)
        if ctx.n is not None and not ModuleHom(tensor_over(ctx.n, x).module, y, f).is_equivariant():
            raise SemanticError("f is not B-linear", name, ln.number)
        laws = quad_zero_laws(q)
        if not all(laws.values()):
            raise SemanticError(f"zero-composition law fails: {laws}", name, ln.number)
        self.doc.quads[name] = q
        self.doc.blocks.append(("quad", name, ln.number))

    def _kw_expect(self, ln: _Line) -> None:
        t = ln.tokens
        if len(t) < 4:
            raise ParseError("usage: expect <command> <target> <value>", ln.number, t[0][1])
        self.doc.expectations.append(Expectation(t[1][0], t[2][0], " ".join(x[0] for x in t[3:]), ln.number))


def _split_rows(toks):
    rows = [[]]
    for tok in toks:
        if tok[0] == ";":
            rows.append([])
        else:
            rows[-1].append(tok)
    return rows


def _implicit_action(alg: Algebra, i: int, dim: int, fld: Field) -> Matrix:
    """Action matrices left out of a block default to zero, except that a basis
    element equal to the unit acts as the identity."""
    if alg.basis_element(i) == alg.one():
        return Matrix.identity(fld, dim)
    return Matrix.zeros(fld, dim, dim)


def _descend(k_level: Matrix, tp, name: str, line: int) -> Matrix:
    """Restrict a map on ``M (x)_k X`` to ``M (x)_R X``; it must be balanced."""
    if tp.relations.cols and not (k_level @ tp.relations).is_zero():
        raise SemanticError("map is not balanced over the base ring", name, line)
    if tp.dim == 0:
        return Matrix.zeros(k_level.field, k_level.rows, 0)
    return k_level @ tp.section


def parse(text: str, field_override: Field | None = None) -> Document:
    return _Parser(text, field_override).parse()


def load(path: str | Path, field_override: Field | None = None) -> Document:
    return parse(Path(path).read_text(), field_override)


# -- writer -------------------------------------------------------------------------------

def _fmt(v) -> str:
    return str(v)


def _fmt_matrix(m: Matrix) -> str:
    if m.rows * m.cols == 0 or m.is_zero():
        return "zero"
    return " ; ".join(" ".join(_fmt(v) for v in row) for row in m.tolist())


def format_algebra(alg: Algebra, name: str | None = None) -> str:
    name = name or alg.name or "A"
    lines = [f"algebra {name} dim {alg.dim}", "  unit " + " ".join(_fmt(v) for v in _tolist(alg.unit))]
    for i in range(alg.dim):
        for j in range(alg.dim):
            v = _tolist(alg.mult[i, j, :])
            if any(x != 0 for x in v):
                lines.append(f"  prod {i} {j} = " + " ".join(_fmt(x) for x in v))
    lines.append("end")
    return "\n".join(lines) + "\n"


def format_module(x: LeftModule, name: str | None = None, over: str | None = None) -> str:
    name = name or x.name or "X"
    over = over or x.alg.name or "A"
    lines = [f"module {name} over {over} dim {x.dim}"]
    for i, m in enumerate(x.action):
        if not m.is_zero():
            lines.append(f"  act {i} = {_fmt_matrix(m)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def format_field(fld: Field) -> str:
    return "field rational\n" if fld.is_rational else f"field {fld.characteristic}\n"


def _tolist(arr) -> list:
    out = []
    for v in np.asarray(arr).reshape(-1):
        if isinstance(v, Fraction):
            out.append(str(v) if v.denominator != 1 else str(v.numerator))
        else:
            out.append(int(v))
    return out


__all__ = ["ParseError", "SemanticError", "Expectation", "Document", "parse", "load", "format_algebra",
           "format_module", "format_field"]
