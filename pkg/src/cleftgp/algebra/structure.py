"""Jacobson radical, primitive idempotents and projective covers."""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np
import sympy

from ..exactla import Field, Matrix, hstack, image_basis, in_span, kernel_basis, quotient_map, rank, solve
from .core import Algebra, LeftModule, ModuleHom, direct_sum, submodule, zero_module

log = logging.getLogger(__name__)


class RadicalUnavailable(ValueError):
    pass


def _trace(m: Matrix):
    t = sum(m.a[i, i] for i in range(m.rows))
    return t % m.field.p if m.field.p is not None else t


def radical(alg: Algebra) -> Matrix:
    """Basis (columns, algebra coordinates) of the Jacobson radical.

    Uses the kernel of the trace form ``(x, y) -> tr(L_x L_y)``, which is
    only valid in characteristic 0 or above ``dim``. A radical supplied at
    construction time is validated and used instead.
    """
    cached = alg.__dict__.get("_radical_basis")
    if cached is not None:
        return cached
    if alg._radical_override is not None:
        basis = image_basis(alg._radical_override)
        _check_radical(alg, basis)
    else:
        p = alg.field.characteristic
        if p != 0 and p <= alg.dim:
            raise RadicalUnavailable(
                f"trace-form radical needs characteristic 0 or > {alg.dim} (got {p}); "
                "use a larger prime or supply the radical basis explicitly")
        n = alg.dim
        gram = Matrix.zeros(alg.field, n, n).a.copy()
        for i in range(n):
            for j in range(i, n):
                t = _trace(alg.left_regular[i] @ alg.left_regular[j])
                gram[i, j] = gram[j, i] = t
        basis = kernel_basis(Matrix(alg.field, gram))
        _check_radical(alg, basis)
    alg.__dict__["_radical_basis"] = basis
    return basis


def _check_radical(alg: Algebra, basis: Matrix) -> None:
    if basis.cols == 0:
        return
    for i in range(alg.dim):
        for side in (alg.left_regular[i], alg.right_regular[i]):
            if not in_span(basis, side @ basis):
                raise RadicalUnavailable("radical basis does not span a two-sided ideal")
    power = basis
    for _ in range(alg.dim + 1):
        if power.cols == 0 or power.is_zero():
            break
        prods = [alg.left_mult(basis[:, k:k + 1]) @ power for k in range(basis.cols)]
        power = image_basis(hstack(prods))
    else:
        raise RadicalUnavailable("radical basis is not nilpotent")
    if power.cols and not power.is_zero():
        raise RadicalUnavailable("radical basis is not nilpotent")


def radical_of_module(x: LeftModule) -> Matrix:
    """Basis of rad(A) x inside x."""
    rad = radical(x.alg)
    if rad.cols == 0 or x.dim == 0:
        return Matrix.zeros(x.field, x.dim, 0)
    return image_basis(hstack([x.act(rad[:, k:k + 1]) for k in range(rad.cols)]))


def top(x: LeftModule) -> tuple[LeftModule, ModuleHom]:
    from .core import quotient_module
    return quotient_module(x, radical_of_module(x))


# -- idempotents ---------------------------------------------------------------

def _minimal_polynomial(alg: Algebra, s: Matrix, e: Matrix) -> list:
    """Coefficients (low degree first, monic) of the minimal polynomial of ``s`` in the corner with unit ``e``."""
    powers = [e]
    while True:
        nxt = alg.multiply(s, powers[-1])
        basis = hstack(powers)
        coords = solve(basis, nxt)
        if coords is not None:
            return [-c for c in coords.a.reshape(-1)] + [1]
        powers.append(nxt)


def _eval_poly(alg: Algebra, coeffs, s: Matrix, e: Matrix) -> Matrix:
    acc = Matrix.zeros(alg.field, alg.dim, 1)
    power = e
    for c in coeffs:
        acc = acc + power.scale(c)
        power = alg.multiply(s, power)
    return acc


def _sympy_poly(coeffs, fld: Field):
    x = sympy.Symbol("x")
    expr = sum(sympy.Integer(int(c)) * x ** k for k, c in enumerate(coeffs)) if fld.p is not None else \
        sum(sympy.Rational(c.numerator, c.denominator) * x ** k for k, c in enumerate(coeffs))
    if fld.p is not None:
        return sympy.Poly(expr, x, modulus=fld.p), x
    return sympy.Poly(expr, x, domain="QQ"), x


def _poly_coeffs(poly, fld: Field) -> list:
    out = []
    for c in reversed(poly.all_coeffs()):
        r = sympy.Rational(c)
        out.append(fld.element(Fraction(int(r.p), int(r.q))))
    return out


def _split_idempotent(alg: Algebra, e: Matrix, rng: np.random.Generator, tries: int = 64) -> list[Matrix]:
    """Primitive orthogonal idempotents summing to ``e`` in a semisimple algebra."""
    fld = alg.field
    corner_map = alg.left_mult(e) @ alg.right_mult(e)
    corner = image_basis(corner_map)
    if corner.cols <= 1:
        return [e]
    for _ in range(tries):
        r = Matrix(fld, fld.random_array(rng, (corner.cols, 1)), normalized=True)
        s = corner @ r
        mp = _minimal_polynomial(alg, s, e)
        poly, x = _sympy_poly(mp, fld)
        _, factors = poly.factor_list()
        if len(factors) >= 2:
            f1 = factors[0][0] ** factors[0][1]
            g = sympy.Poly(1, x, modulus=fld.p) if fld.p is not None else sympy.Poly(1, x, domain="QQ")
            for fac, mult in factors[1:]:
                g = g * fac ** mult
            _, t, _ = f1.gcdex(g)
            # t*g is 1 modulo f1 and 0 modulo g
            idem = _eval_poly(alg, _poly_coeffs((t * g).rem(poly), fld), s, e)
            rest = e - idem
            return _split_idempotent(alg, idem, rng, tries) + _split_idempotent(alg, rest, rng, tries)
        deg = len(mp) - 1
        if deg == corner.cols:
            return [e]
    raise RuntimeError("could not split idempotent; algebra may not be semisimple over this field")


def _lift_idempotent(alg: Algebra, x: Matrix) -> Matrix:
    for _ in range(64):
        x2 = alg.multiply(x, x)
        if x2 == x:
            return x
        x3 = alg.multiply(x2, x)
        x = x2.scale(3) - x3.scale(2)
    raise RuntimeError("idempotent lifting did not converge")


class Idempotents:
    """Complete set of primitive orthogonal idempotents, grouped by isoclass of simple."""

    def __init__(self, alg: Algebra, elements: list[Matrix]):
        self.alg = alg
        self.elements = elements
        rad = radical(alg)
        self.classes: list[list[int]] = []
        for i, e in enumerate(elements):
            for cls in self.classes:
                f = elements[cls[0]]
                # same simple top iff f A e is not inside the radical
                corner = alg.left_mult(f) @ alg.right_mult(e)
                if not _inside(image_basis(corner), rad):
                    cls.append(i)
                    break
            else:
                self.classes.append([i])

    @property
    def representatives(self) -> list[int]:
        return [cls[0] for cls in self.classes]

    def __len__(self) -> int:
        return len(self.elements)


def _inside(span: Matrix, sub: Matrix) -> bool:
    if span.cols == 0:
        return True
    if sub.cols == 0:
        return span.is_zero()
    return rank(hstack([sub, span])) == rank(sub)


def primitive_idempotents(alg: Algebra, seed: int = 0) -> Idempotents:
    cached = alg.__dict__.get("_idempotents")
    if cached is not None:
        return cached
    source = alg.__dict__.get("_derived_from")
    if source is not None:
        # primitive orthogonal idempotents of A are also those of A^op; sharing them
        # lets A e_i and its ring dual e_i A carry the same index
        idem = Idempotents(alg, list(primitive_idempotents(source, seed).elements))
        alg.__dict__["_idempotents"] = idem
        return idem
    fld = alg.field
    rad = radical(alg)
    proj, section = quotient_map(rad if rad.cols else Matrix.zeros(fld, alg.dim, 0))
    s_dim = proj.rows
    # structure constants of A / rad A in the quotient coordinates
    mult = np.empty((s_dim, s_dim, s_dim), dtype=object)
    for i in range(s_dim):
        li = alg.left_mult(section[:, i:i + 1])
        prod = proj @ li @ section
        for j in range(s_dim):
            mult[i, j, :] = prod.a[:, j]
    semisimple = Algebra(fld, mult, (proj @ alg.one()).a.reshape(-1), name="A/J")
    rng = np.random.default_rng(seed)
    bar = _split_idempotent(semisimple, semisimple.one(), rng)
    lifted: list[Matrix] = []
    acc = Matrix.zeros(fld, alg.dim, 1)
    one = alg.one()
    for k, eb in enumerate(bar):
        if k == len(bar) - 1:
            lifted.append(one - acc)
            break
        comp = one - acc
        x = alg.multiply(alg.multiply(comp, section @ eb), comp)
        e = _lift_idempotent(alg, x)
        lifted.append(e)
        acc = acc + e
    idem = Idempotents(alg, lifted)
    alg.__dict__["_idempotents"] = idem
    return idem


# -- projective modules -------------------------------------------------------

class ProjectiveModule(LeftModule):
    """``A e_{i_1} (+) ... (+) A e_{i_r}`` for primitive idempotents ``e_i``.

    ``summands`` lists the idempotent indices; the generator of summand ``j``
    is the idempotent itself.
    """

    def __init__(self, alg: Algebra, summands: tuple[int, ...]):
        self.summands = tuple(summands)
        self.blocks = [indecomposable_projective(alg, i) for i in self.summands]
        if self.blocks:
            ds = direct_sum([b.module for b in self.blocks])
            super().__init__(alg, ds.module.action)
        else:
            super().__init__(alg, zero_module(alg).action)
        self.offsets = []
        off = 0
        for b in self.blocks:
            self.offsets.append(off)
            off += b.module.dim

    def __repr__(self) -> str:
        return f"ProjectiveModule(summands={list(self.summands)}, dim={self.dim})"

    def generator(self, j: int) -> Matrix:
        """Coordinates (in this module) of the j-th generator."""
        vec = Matrix.zeros(self.field, self.dim, 1).a.copy()
        g = self.blocks[j].generator
        vec[self.offsets[j]:self.offsets[j] + g.rows, 0] = g.a[:, 0]
        return Matrix(self.field, vec, normalized=True)

    def component(self, v: Matrix, j: int) -> Matrix:
        """Component of ``v`` in summand ``j``, as an element of the algebra."""
        b = self.blocks[j]
        return b.basis @ v[self.offsets[j]:self.offsets[j] + b.module.dim, :]


class _Indecomposable:
    def __init__(self, module: LeftModule, basis: Matrix, generator: Matrix):
        self.module = module
        self.basis = basis          # columns: algebra coordinates of a basis of A e
        self.generator = generator  # coordinates of e in that basis


def indecomposable_projective(alg: Algebra, i: int) -> _Indecomposable:
    cache = alg.__dict__.setdefault("_indec_proj", {})
    if i in cache:
        return cache[i]
    e = primitive_idempotents(alg).elements[i]
    basis = image_basis(alg.right_mult(e))
    module, _ = submodule(alg.regular_module, basis, name=f"P{i}")
    gen = solve(basis, e)
    out = _Indecomposable(module, basis, gen)
    cache[i] = out
    return out


def projective_cover(x: LeftModule) -> tuple[ProjectiveModule, ModuleHom]:
    """Projective cover ``P -> x`` with generators picked lowest index first."""
    alg = x.alg
    idem = primitive_idempotents(alg)
    fld = x.field
    span = radical_of_module(x)
    chosen: list[tuple[int, Matrix]] = []
    if x.dim:
        for i in idem.representatives:
            proj_i = x.act(idem.elements[i])
            for j in range(x.dim):
                if span.cols == x.dim:
                    break
                v = proj_i[:, j:j + 1]
                if v.is_zero() or (span.cols and in_span(span, v)):
                    continue
                chosen.append((i, v))
                gen = hstack([m @ v for m in x.action])
                span = image_basis(hstack([span, gen]) if span.cols else gen)
    if span.cols != x.dim:
        raise RuntimeError("generator selection did not exhaust the module")
    p = ProjectiveModule(alg, tuple(i for i, _ in chosen))
    cols = []
    for (i, v), blk in zip(chosen, p.blocks):
        for k in range(blk.basis.cols):
            cols.append(x.act(blk.basis[:, k:k + 1]) @ v)
    mat = hstack(cols) if cols else Matrix.zeros(fld, x.dim, 0)
    return p, ModuleHom(p, x, mat)


def simple_modules(alg: Algebra) -> list[LeftModule]:
    """One simple module per isoclass (tops of the indecomposable projectives)."""
    idem = primitive_idempotents(alg)
    return [top(indecomposable_projective(alg, i).module)[0] for i in idem.representatives]


__all__ = [
    "RadicalUnavailable", "radical", "radical_of_module", "top", "primitive_idempotents", "Idempotents",
    "ProjectiveModule", "indecomposable_projective", "projective_cover", "simple_modules",
]
