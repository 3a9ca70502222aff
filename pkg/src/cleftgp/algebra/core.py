"""Finite-dimensional algebras given by structure constants, and their modules."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from ..exactla import (
    Field,
    FieldMismatch,
    Matrix,
    block_diag,
    hstack,
    image_basis,
    inverse,
    kernel_basis,
    kron,
    quotient_map,
    rank,
    solve,
    vstack,
)


class AlgebraMismatch(ValueError):
    pass


@dataclass
class ValidationReport:
    ok: bool
    failures: list[str] = dc_field(default_factory=list)
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


class Algebra:
    """Associative unital algebra with basis ``b_0 .. b_{n-1}``.

    ``mult[i, j, k]`` is the coefficient of ``b_k`` in ``b_i * b_j``.
    """

    def __init__(self, fld: Field, mult, unit, name: str = "", radical: Matrix | None = None):
        arr = fld.normalize(np.asarray(mult))
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"structure constants must have shape (n, n, n), got {arr.shape}")
        arr.flags.writeable = False
        self.field = fld
        self.mult = arr
        self.dim = arr.shape[0]
        u = fld.normalize(np.asarray(list(unit)).reshape(-1))
        if u.shape != (self.dim,):
            raise ValueError("unit vector has the wrong length")
        u.flags.writeable = False
        self.unit = u
        self.name = name
        self._radical_override = radical
        self._opposite: Algebra | None = None

    def __repr__(self) -> str:
        return f"Algebra({self.name or '?'}, dim={self.dim}, {self.field})"

    # -- multiplication ----------------------------------------------------
    @cached_property
    def left_regular(self) -> tuple[Matrix, ...]:
        # L_i[k, j] = c[i, j, k]
        return tuple(Matrix(self.field, self.mult[i].T.copy(), normalized=True) for i in range(self.dim))

    @cached_property
    def right_regular(self) -> tuple[Matrix, ...]:
        # R_j[k, i] = c[i, j, k]
        return tuple(Matrix(self.field, self.mult[:, j, :].T.copy(), normalized=True) for j in range(self.dim))

    def vec(self, x) -> Matrix:
        """Column vector for an element given as coordinates."""
        if isinstance(x, Matrix):
            return x
        return Matrix(self.field, np.asarray(x).reshape(-1, 1))

    def one(self) -> Matrix:
        return Matrix(self.field, self.unit.reshape(-1, 1).copy(), normalized=True)

    def basis_element(self, i: int) -> Matrix:
        return Matrix.unit_column(self.field, self.dim, i)

    def left_mult(self, x: Matrix) -> Matrix:
        """Matrix of ``y -> x*y``."""
        return _combine(self.left_regular, x, self.field, self.dim)

    def right_mult(self, x: Matrix) -> Matrix:
        """Matrix of ``y -> y*x``."""
        return _combine(self.right_regular, x, self.field, self.dim)

    def multiply(self, x: Matrix, y: Matrix) -> Matrix:
        return self.left_mult(x) @ y

    # -- derived structures --------------------------------------------------
    @property
    def opposite(self) -> "Algebra":
        if self._opposite is None:
            op = Algebra(self.field, np.transpose(self.mult, (1, 0, 2)).copy(), self.unit.copy(),
                         name=f"{self.name}^op" if self.name else "", radical=self._radical_override)
            op._opposite = self
            op.__dict__["_derived_from"] = self
            self._opposite = op
        return self._opposite

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices that generate the algebra (together with 1), chosen greedily."""
        chosen: list[int] = []
        span = self.one()
        for i in range(self.dim):
            if solve(span, self.basis_element(i)) is not None:
                continue
            chosen.append(i)
            span = self._subalgebra_span(chosen)
            if span.cols == self.dim:
                break
        return tuple(chosen)

    def _subalgebra_span(self, gens: Sequence[int]) -> Matrix:
        span = image_basis(hstack([self.one()] + [self.basis_element(g) for g in gens]))
        while True:
            prods = [self.left_regular[g] @ span for g in gens]
            new = image_basis(hstack([span] + prods))
            if new.cols == span.cols:
                return span
            span = new

    @cached_property
    def regular_module(self) -> "LeftModule":
        return LeftModule(self, self.left_regular, name=f"{self.name}" if self.name else "A")

    @cached_property
    def regular_bimodule(self) -> "Bimodule":
        return Bimodule(self, self, self.left_regular, self.right_regular, name=self.name)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Algebra):
            return NotImplemented
        return (self.field == other.field and self.dim == other.dim
                and bool(np.all(self.mult == other.mult)) and bool(np.all(self.unit == other.unit)))

    def __hash__(self):
        return id(self)


def _combine(mats: Sequence[Matrix], x: Matrix, fld: Field, n: int) -> Matrix:
    coeffs = x.a.reshape(-1)
    acc = np.zeros((n, n), dtype=fld.dtype) if fld.dtype is not object else Matrix.zeros(fld, n, n).a.copy()
    for c, m in zip(coeffs, mats):
        if c != 0:
            acc = acc + c * m.a
    return Matrix(fld, fld._reduce(acc), normalized=True)


def validate_algebra(alg: Algebra) -> ValidationReport:
    """Check associativity on all basis triples and the two-sided unit law."""
    n = alg.dim
    c = alg.mult
    p = alg.field.p
    # (b_i b_j) b_l  vs  b_i (b_j b_l)
    lhs = np.einsum("ijk,klm->ijlm", c, c)
    rhs = np.einsum("jlk,ikm->ijlm", c, c)
    if p is not None:
        lhs = lhs % p
        rhs = rhs % p
    bad = np.argwhere(lhs != rhs)
    failures = []
    witness = None
    if bad.size:
        i, j, l, _ = (int(v) for v in bad[0])
        failures.append(f"associativity fails for basis triple ({i}, {j}, {l})")
        witness = {"triple": [i, j, l]}
    one = alg.one()
    eye = Matrix.identity(alg.field, n)
    if alg.left_mult(one) != eye:
        failures.append("unit is not a left identity")
    if alg.right_mult(one) != eye:
        failures.append("unit is not a right identity")
    return ValidationReport(not failures, failures, witness)


# -- modules ------------------------------------------------------------------

class LeftModule:
    """A left module: ``action[i]`` is the matrix of ``b_i`` on a ``dim``-space."""

    def __init__(self, alg: Algebra, action: Sequence[Matrix], name: str = ""):
        if len(action) != alg.dim:
            raise ValueError(f"need {alg.dim} action matrices, got {len(action)}")
        action = tuple(action)
        dims = {m.shape for m in action}
        if len(dims) > 1:
            raise ValueError("action matrices have different shapes")
        d = action[0].rows if action else 0
        for m in action:
            if m.field != alg.field:
                raise FieldMismatch("action matrix over a different field")
            if m.shape != (d, d):
                raise ValueError("action matrices must be square")
        self.alg = alg
        self.action = action
        self.dim = d
        self.name = name

    def __repr__(self) -> str:
        return f"LeftModule({self.name or '?'} over {self.alg.name or '?'}, dim={self.dim})"

    @property
    def field(self) -> Field:
        return self.alg.field

    def act(self, x: Matrix) -> Matrix:
        """Matrix of the action of an algebra element (coordinate column)."""
        return _combine(self.action, x, self.field, self.dim) if self.dim else Matrix.zeros(self.field, 0, 0)

    def identity(self) -> "ModuleHom":
        return ModuleHom(self, self, Matrix.identity(self.field, self.dim))

    def zero_to(self, other: "LeftModule") -> "ModuleHom":
        return ModuleHom(self, other, Matrix.zeros(self.field, other.dim, self.dim))

    def conjugate(self, p: Matrix) -> "LeftModule":
        """The isomorphic module with action ``p rho p^-1``."""
        pinv = inverse(p)
        return LeftModule(self.alg, [p @ m @ pinv for m in self.action], name=self.name)

    def same_as(self, other: "LeftModule") -> bool:
        return self.alg is other.alg and self.dim == other.dim and all(
            a == b for a, b in zip(self.action, other.action))


def zero_module(alg: Algebra) -> LeftModule:
    return LeftModule(alg, [Matrix.zeros(alg.field, 0, 0)] * alg.dim, name="0")


def validate_module(x: LeftModule) -> ValidationReport:
    alg = x.alg
    failures = []
    if x.dim and x.act(alg.one()) != Matrix.identity(x.field, x.dim):
        failures.append("unit does not act as the identity")
    for i in range(alg.dim):
        for j in range(alg.dim):
            lhs = x.action[i] @ x.action[j]
            rhs = x.act(Matrix(alg.field, alg.mult[i, j].reshape(-1, 1).copy(), normalized=True))
            if lhs != rhs:
                failures.append(f"rho(b_{i}) rho(b_{j}) != rho(b_{i} b_{j})")
                return ValidationReport(False, failures, {"pair": [i, j]})
    return ValidationReport(not failures, failures)


class ModuleHom:
    """An equivariant linear map ``src -> dst`` (matrix is dim(dst) x dim(src))."""

    def __init__(self, src: LeftModule, dst: LeftModule, matrix: Matrix, check: bool = False):
        if src.alg is not dst.alg:
            raise AlgebraMismatch("source and target are modules over different algebras")
        if matrix.shape != (dst.dim, src.dim):
            raise ValueError(f"matrix shape {matrix.shape} != {(dst.dim, src.dim)}")
        self.src = src
        self.dst = dst
        self.matrix = matrix
        if check and not self.is_equivariant():
            raise ValueError("matrix is not a module homomorphism")

    def __repr__(self) -> str:
        return f"ModuleHom({self.src.dim} -> {self.dst.dim})"

    def is_equivariant(self) -> bool:
        return all(self.matrix @ a == b @ self.matrix for a, b in zip(self.src.action, self.dst.action))

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        if other.dst is not self.src and not other.dst.same_as(self.src):
            raise ValueError("homomorphisms do not compose")
        return ModuleHom(other.src, self.dst, self.matrix @ other.matrix)

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.src, self.dst, self.matrix + other.matrix)

    def __sub__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(self.src, self.dst, self.matrix - other.matrix)

    def __neg__(self) -> "ModuleHom":
        return ModuleHom(self.src, self.dst, -self.matrix)

    @property
    def rank(self) -> int:
        return rank(self.matrix)

    def is_mono(self) -> bool:
        return self.rank == self.src.dim

    def is_epi(self) -> bool:
        return self.rank == self.dst.dim

    def is_iso(self) -> bool:
        return self.src.dim == self.dst.dim and self.is_mono()


def submodule(x: LeftModule, basis: Matrix, name: str = "") -> tuple[LeftModule, ModuleHom]:
    """The submodule spanned by the (independent, invariant) columns of ``basis``."""
    if basis.cols == 0:
        z = zero_module(x.alg)
        return z, ModuleHom(z, x, Matrix.zeros(x.field, x.dim, 0))
    stacked = hstack([m @ basis for m in x.action])
    coords = solve(basis, stacked)
    if coords is None:
        raise ValueError("span is not a submodule")
    k = basis.cols
    action = [coords[:, i * k:(i + 1) * k] for i in range(x.alg.dim)]
    sub = LeftModule(x.alg, action, name=name)
    return sub, ModuleHom(sub, x, basis)


def quotient_module(x: LeftModule, span: Matrix, name: str = "") -> tuple[LeftModule, ModuleHom]:
    """``x / colspan(span)`` with its projection; ``span`` must be invariant."""
    proj, section = quotient_map(span if span.cols else Matrix.zeros(x.field, x.dim, 0))
    action = [proj @ m @ section for m in x.action]
    q = LeftModule(x.alg, action, name=name)
    return q, ModuleHom(x, q, proj)


def kernel(h: ModuleHom) -> tuple[LeftModule, ModuleHom]:
    return submodule(h.src, kernel_basis(h.matrix))


def image(h: ModuleHom) -> tuple[LeftModule, ModuleHom]:
    return submodule(h.dst, image_basis(h.matrix))


def cokernel(h: ModuleHom) -> tuple[LeftModule, ModuleHom]:
    return quotient_module(h.dst, image_basis(h.matrix))


def induced_on_quotients(f: Matrix, proj_src: ModuleHom, proj_dst: ModuleHom, section_src: Matrix | None = None) -> Matrix:
    """Matrix of the map ``src/.. -> dst/..`` induced by ``f``."""
    if section_src is None:
        section_src = solve(proj_src.matrix, Matrix.identity(proj_src.dst.field, proj_src.dst.dim))
    return proj_dst.matrix @ f @ section_src


@dataclass
class DirectSum:
    module: LeftModule
    injections: list[ModuleHom]
    projections: list[ModuleHom]


def direct_sum(summands: Sequence[LeftModule], name: str = "") -> DirectSum:
    if not summands:
        raise ValueError("empty direct sum")
    alg = summands[0].alg
    fld = alg.field
    action = [block_diag([s.action[i] for s in summands], field=fld) for i in range(alg.dim)]
    total = LeftModule(alg, action, name=name)
    inj, proj = [], []
    off = 0
    for s in summands:
        e = Matrix.zeros(fld, total.dim, s.dim).a.copy()
        for k in range(s.dim):
            e[off + k, k] = 1
        emb = Matrix(fld, e, normalized=False)
        inj.append(ModuleHom(s, total, emb))
        proj.append(ModuleHom(total, s, emb.T))
        off += s.dim
    return DirectSum(total, inj, proj)


def free_module(alg: Algebra, rank_: int) -> LeftModule:
    if rank_ == 0:
        return zero_module(alg)
    return direct_sum([alg.regular_module] * rank_).module


def hom_space(x: LeftModule, y: LeftModule) -> list[ModuleHom]:
    """Basis of Hom_A(x, y), solving ``H rho_x(g) = rho_y(g) H`` for algebra generators g."""
    if x.alg is not y.alg:
        raise AlgebraMismatch("hom_space needs modules over the same algebra")
    fld = x.field
    dx, dy = x.dim, y.dim
    if dx == 0 or dy == 0:
        return []
    eye_x = Matrix.identity(fld, dx)
    eye_y = Matrix.identity(fld, dy)
    # row-major vec(H): vec(A H B) = (A kron B^T) vec(H)
    blocks = [kron(y.action[g], eye_x) - kron(eye_y, x.action[g].T) for g in x.alg.generators]
    if not blocks:
        basis = Matrix.identity(fld, dx * dy)
    else:
        basis = _progressive_kernel(blocks, dx * dy, fld)
    return [ModuleHom(x, y, Matrix(fld, basis.a[:, k].reshape(dy, dx).copy(), normalized=True))
            for k in range(basis.cols)]


def _progressive_kernel(blocks: Sequence[Matrix], n: int, fld: Field) -> Matrix:
    basis = Matrix.identity(fld, n)
    for b in blocks:
        if basis.cols == 0:
            break
        k = kernel_basis(b @ basis)
        basis = basis @ k
    return basis


def hom_coordinates(homs: Sequence[ModuleHom], f: Matrix) -> Matrix | None:
    """Coordinates of ``f`` in the basis ``homs`` (None if outside the span)."""
    fld = f.field
    if not homs:
        return Matrix.zeros(fld, 0, 1) if f.is_zero() else None
    cols = hstack([Matrix(fld, h.matrix.a.reshape(-1, 1).copy(), normalized=True) for h in homs])
    return solve(cols, Matrix(fld, f.a.reshape(-1, 1).copy(), normalized=True))


def dual_module(x: LeftModule) -> LeftModule:
    """k-linear dual, a left module over the opposite algebra (action transposed)."""
    return LeftModule(x.alg.opposite, [m.T for m in x.action], name=f"D({x.name})" if x.name else "")


def double_dual_iso(x: LeftModule) -> ModuleHom:
    """The evaluation iso ``x -> D D x`` (identity in dual bases)."""
    dd = dual_module(dual_module(x))
    return ModuleHom(x, dd, Matrix.identity(x.field, x.dim))


def find_isomorphism(x: LeftModule, y: LeftModule, rng: np.random.Generator | None = None, tries: int = 40) -> ModuleHom | None:
    """Search Hom(x, y) for an isomorphism (seeded random combinations)."""
    if x.dim != y.dim:
        return None
    if x.dim == 0:
        return ModuleHom(x, y, Matrix.zeros(x.field, 0, 0))
    homs = hom_space(x, y)
    if not homs:
        return None
    for h in homs:
        if h.is_iso():
            return h
    rng = rng or np.random.default_rng(0)
    fld = x.field
    for _ in range(tries):
        coeffs = fld.random_array(rng, (len(homs),))
        m = Matrix.zeros(fld, y.dim, x.dim)
        for c, h in zip(coeffs, homs):
            if c != 0:
                m = m + h.matrix.scale(c)
        if rank(m) == x.dim:
            return ModuleHom(x, y, m)
    return None


# -- bimodules ----------------------------------------------------------------

class Bimodule:
    """An (A, B)-bimodule; right action ``right_action[j]`` is ``m -> m b_j``."""

    def __init__(self, left_alg: Algebra, right_alg: Algebra, left_action: Sequence[Matrix],
                 right_action: Sequence[Matrix], name: str = ""):
        if left_alg.field != right_alg.field:
            raise FieldMismatch("bimodule over algebras with different fields")
        if len(left_action) != left_alg.dim or len(right_action) != right_alg.dim:
            raise ValueError("wrong number of action matrices")
        shapes = {m.shape for m in list(left_action) + list(right_action)}
        if len(shapes) > 1:
            raise ValueError("action matrices have different shapes")
        self.left_alg = left_alg
        self.right_alg = right_alg
        self.left_action = tuple(left_action)
        self.right_action = tuple(right_action)
        self.dim = (left_action[0].rows if left_action else right_action[0].rows)
        self.name = name

    def __repr__(self) -> str:
        return f"Bimodule({self.name or '?'}, dim={self.dim})"

    @property
    def field(self) -> Field:
        return self.left_alg.field

    def act_left(self, x: Matrix) -> Matrix:
        return _combine(self.left_action, x, self.field, self.dim)

    def act_right(self, x: Matrix) -> Matrix:
        return _combine(self.right_action, x, self.field, self.dim)

    def as_left_module(self) -> LeftModule:
        return LeftModule(self.left_alg, self.left_action, name=self.name)

    def as_right_module(self) -> LeftModule:
        """The right module, as a left module over the opposite of the right algebra."""
        return LeftModule(self.right_alg.opposite, self.right_action, name=self.name)


def zero_bimodule(left_alg: Algebra, right_alg: Algebra) -> Bimodule:
    z = Matrix.zeros(left_alg.field, 0, 0)
    return Bimodule(left_alg, right_alg, [z] * left_alg.dim, [z] * right_alg.dim, name="0")


def validate_bimodule(m: Bimodule) -> ValidationReport:
    fld = m.field
    failures = []
    rep = validate_module(m.as_left_module())
    if not rep:
        failures += [f"left: {f}" for f in rep.failures]
    rep = validate_module(m.as_right_module())
    if not rep:
        failures += [f"right: {f}" for f in rep.failures]
    for i, a in enumerate(m.left_action):
        for j, b in enumerate(m.right_action):
            if a @ b != b @ a:
                failures.append(f"left b_{i} and right b_{j} do not commute")
                return ValidationReport(False, failures, {"pair": [i, j]})
    return ValidationReport(not failures, failures)


def bimodule_hom_ok(src: Bimodule, dst: Bimodule, f: Matrix) -> bool:
    return (all(f @ a == b @ f for a, b in zip(src.left_action, dst.left_action))
            and all(f @ a == b @ f for a, b in zip(src.right_action, dst.right_action)))


# -- constructions ------------------------------------------------------------

def algebra_from_products(fld: Field, dim: int, products: dict[tuple[int, int], Sequence], unit: Sequence,
                          name: str = "") -> Algebra:
    """Build an algebra from a sparse product table ``{(i, j): coords}``."""
    c = np.zeros((dim, dim, dim), dtype=object)
    c[...] = 0
    for (i, j), v in products.items():
        for k, x in enumerate(v):
            c[i, j, k] = x
    return Algebra(fld, c, unit, name=name)


def product_algebra(a: Algebra, b: Algebra, name: str = "") -> Algebra:
    """``a x b`` with basis ``basis(a) ++ basis(b)``."""
    if a.field != b.field:
        raise FieldMismatch("product of algebras over different fields")
    n, m = a.dim, b.dim
    c = np.zeros((n + m, n + m, n + m), dtype=object)
    c[...] = 0
    c[:n, :n, :n] = a.mult
    c[n:, n:, n:] = b.mult
    unit = list(a.unit) + list(b.unit)
    return Algebra(a.field, c, unit, name=name or f"{a.name}x{b.name}")


def module_from_function(alg: Algebra, dim: int, act) -> LeftModule:
    return LeftModule(alg, [act(i) for i in range(alg.dim)])


def restrict_module(x: LeftModule, alg: Algebra, embedding: Matrix) -> LeftModule:
    """Restriction along an algebra map whose matrix is ``embedding`` (target coords x source coords)."""
    return LeftModule(alg, [x.act(embedding[:, i:i + 1]) for i in range(alg.dim)], name=x.name)


def stack_columns(vs: Sequence[Matrix], rows: int, fld: Field) -> Matrix:
    return hstack(list(vs), rows=rows, field=fld) if vs else Matrix.zeros(fld, rows, 0)


def split_rows(m: Matrix, sizes: Sequence[int]) -> list[Matrix]:
    out, off = [], 0
    for s in sizes:
        out.append(m[off:off + s, :])
        off += s
    return out


__all__ = [
    "Algebra", "LeftModule", "ModuleHom", "Bimodule", "DirectSum", "ValidationReport", "AlgebraMismatch",
    "validate_algebra", "validate_module", "validate_bimodule", "bimodule_hom_ok",
    "submodule", "quotient_module", "kernel", "image", "cokernel", "induced_on_quotients",
    "direct_sum", "free_module", "zero_module", "zero_bimodule", "hom_space", "hom_coordinates",
    "dual_module", "double_dual_iso", "find_isomorphism", "algebra_from_products", "product_algebra",
    "module_from_function", "restrict_module", "stack_columns", "split_rows",
]
