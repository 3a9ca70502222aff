"""Theta-extensions ``T = R x_theta M`` and the functor calculus around them.

A T-module is handled as a pair ``(X, alpha)`` with ``X`` an R-module and
``alpha: M (x)_R X -> X``. The functors are

* ``e(X, alpha) = X`` and ``i(Y) = (Y, 0)``,
* ``l(Y) = (Y (+) M(x)Y, [[0, 0], [1, theta(x)1]])`` (left adjoint of ``e``),
* ``q(X, alpha) = Coker alpha`` (left adjoint of ``i``),
* ``F(Y) = M (x)_R Y`` and ``G(X, alpha) = (M (x) X, theta(x)1 - 1(x)alpha)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .algebra import (
    Algebra,
    Bimodule,
    LeftModule,
    ModuleHom,
    ValidationReport,
    assoc,
    cokernel,
    direct_sum,
    find_isomorphism,
    hom_space,
    induced,
    random_module,
    tensor_bimodules,
    tensor_over,
    validate_algebra,
    validate_bimodule,
    zero_bimodule,
)
from .exactla import Matrix, hstack, homology_dim_at, kron, rank, vstack


class PairLawError(ValueError):
    """Raised when ``(X, alpha)`` does not define a T-module."""


# -- theta data and the extension ring -------------------------------------------

class ThetaData:
    """An (R, R)-bimodule ``m`` with a multiplication ``theta: m (x)_R m -> m``.

    ``theta`` is stored on the quotient ``m (x)_R m`` (see ``mm``).
    """

    def __init__(self, base: Algebra, m: Bimodule, theta: Matrix, name: str = ""):
        if m.left_alg is not base or m.right_alg is not base:
            raise ValueError("theta data needs an (R, R)-bimodule over the base algebra")
        self.base = base
        self.m = m
        self.mm = tensor_bimodules(m, m)
        if theta.shape != (m.dim, self.mm.bimodule.dim):
            raise ValueError(f"theta must be {m.dim} x {self.mm.bimodule.dim}, got {theta.shape}")
        self.theta = theta
        self.name = name

    @classmethod
    def from_k_level(cls, base: Algebra, m: Bimodule, theta_k: Matrix, name: str = "") -> "ThetaData":
        """From a map ``m (x)_k m -> m`` (dim m x dim m^2), which must be R-balanced."""
        mm = tensor_bimodules(m, m)
        rel = _bimodule_relations(m)
        if rel.cols and not (theta_k @ rel).is_zero():
            raise ValueError("theta does not factor through the tensor product over the base")
        theta = theta_k @ mm.section if mm.bimodule.dim else Matrix.zeros(base.field, m.dim, 0)
        return cls(base, m, theta, name=name)

    @classmethod
    def zero(cls, base: Algebra, m: Bimodule | None = None, name: str = "") -> "ThetaData":
        m = m if m is not None else zero_bimodule(base, base)
        mm = tensor_bimodules(m, m)
        return cls(base, m, Matrix.zeros(base.field, m.dim, mm.bimodule.dim), name=name)

    @cached_property
    def m_left(self) -> LeftModule:
        return self.m.as_left_module()

    @property
    def is_zero(self) -> bool:
        return self.theta.is_zero()

    def theta_tensor(self, x: LeftModule) -> Matrix:
        """``(theta (x) 1_x) o assoc : M(x)(M(x)x) -> M(x)x``."""
        src = tensor_over(self.mm.bimodule, x)
        dst = tensor_over(self.m, x)
        return induced(src, dst, self.theta, Matrix.identity(x.field, x.dim)) @ assoc(self.m, self.m, x)


def _bimodule_relations(m: Bimodule) -> Matrix:
    from .algebra.tensor import _relations
    return _relations(m, m.left_action, m.field)


def validate_theta(d: ThetaData) -> ValidationReport:
    """Bimodule-homomorphism and associativity laws for theta."""
    failures = []
    witness = None
    rep = validate_bimodule(d.m)
    if not rep.ok:
        return ValidationReport(False, ["bimodule: " + f for f in rep.failures], rep.witness)
    mmb = d.mm.bimodule
    th = d.theta
    for i in range(d.base.dim):
        if not th @ mmb.left_action[i] == d.m.left_action[i] @ th:
            failures.append(f"theta is not left-linear for basis element {i}")
            witness = witness or {"side": "left", "basis": i}
            break
    for i in range(d.base.dim):
        if not th @ mmb.right_action[i] == d.m.right_action[i] @ th:
            failures.append(f"theta is not right-linear for basis element {i}")
            witness = witness or {"side": "right", "basis": i}
            break
    if not failures and mmb.dim:
        ml = d.m_left
        inner = tensor_over(d.m, ml)           # M (x) M as a left module
        outer = tensor_over(d.m, inner.module)  # M (x) (M (x) M)
        eye_m = Matrix.identity(d.m.field, d.m.dim)
        lhs = th @ d.theta_tensor(ml)
        rhs = th @ induced(outer, inner, eye_m, th)
        if not lhs == rhs:
            failures.append("theta is not associative")
            witness = {"difference": (lhs - rhs).tolist()}
    return ValidationReport(not failures, failures, witness)


@dataclass(eq=False)
class ThetaExtension:
    """The ring ``T = R x_theta M`` with basis ``basis(R) ++ basis(M)``."""

    data: ThetaData
    t: Algebra
    r_embed: Matrix
    r_proj: Matrix
    m_embed: Matrix
    m_proj: Matrix
    name: str = ""
    _caches: dict = dc_field(default_factory=dict, repr=False)

    @property
    def base(self) -> Algebra:
        return self.data.base

    @property
    def m(self) -> Bimodule:
        return self.data.m

    @property
    def field(self):
        return self.base.field

    def cache(self, key: str) -> dict:
        return self._caches.setdefault(key, {})


def build_T(d: ThetaData, name: str = "", check: bool = True) -> ThetaExtension:
    """Assemble the structure constants of the theta-extension."""
    if check:
        rep = validate_theta(d)
        if not rep.ok:
            raise ValueError("invalid theta: " + "; ".join(rep.failures))
    r, m = d.base, d.m
    n, dm = r.dim, m.dim
    fld = r.field
    size = n + dm
    c = np.zeros((size, size, size), dtype=object)
    c[...] = 0
    c[:n, :n, :n] = r.mult
    for i in range(n):
        for a in range(dm):
            c[i, n + a, n:] = m.left_action[i].a[:, a]
            c[n + a, i, n:] = m.right_action[i].a[:, a]
    if dm and d.mm.bimodule.dim:
        eye = Matrix.identity(fld, dm)
        for a in range(dm):
            for b in range(dm):
                v = d.theta @ d.mm.proj @ kron(eye[:, a:a + 1], eye[:, b:b + 1])
                c[n + a, n + b, n:] = v.a[:, 0]
    unit = list(r.unit) + [0] * dm
    t = Algebra(fld, c, unit, name=name or (f"{r.name}x{m.name}" if r.name else "T"))
    if check:
        rep = validate_algebra(t)
        if not rep.ok:
            raise ValueError("assembled ring is not associative: " + "; ".join(rep.failures))
    eye = Matrix.identity(fld, size)
    return ThetaExtension(d, t, eye[:, :n], eye[:n, :], eye[:, n:], eye[n:, :], name=t.name)


# -- pairs ---------------------------------------------------------------------------

class PairModule:
    """A T-module given as ``(X, alpha)`` with ``alpha: M (x)_R X -> X``."""

    def __init__(self, ext: ThetaExtension, x: LeftModule, alpha: Matrix, name: str = ""):
        if x.alg is not ext.base:
            raise ValueError("pair carrier must be a module over the base ring")
        self.ext = ext
        self.x = x
        self.tensor = tensor_over(ext.m, x)
        if alpha.shape != (x.dim, self.tensor.dim):
            raise ValueError(f"alpha must be {x.dim} x {self.tensor.dim}, got {alpha.shape}")
        self.alpha = alpha
        self.name = name or x.name

    def __repr__(self) -> str:
        return f"PairModule({self.name or '?'}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.x.dim

    @property
    def alpha_hom(self) -> ModuleHom:
        return ModuleHom(self.tensor.module, self.x, self.alpha)

    def law_defect(self) -> Matrix:
        """``alpha (1 (x) alpha) - alpha (theta (x) 1) assoc``; zero iff the pair law holds."""
        ext = self.ext
        inner = self.tensor
        outer = tensor_over(ext.m, inner.module)
        eye_m = Matrix.identity(self.x.field, ext.m.dim)
        lhs = self.alpha @ induced(outer, inner, eye_m, self.alpha)
        rhs = self.alpha @ ext.data.theta_tensor(self.x)
        return lhs - rhs

    def validate(self) -> ValidationReport:
        failures = []
        if not self.alpha_hom.is_equivariant():
            failures.append("alpha is not R-linear")
        defect = self.law_defect()
        if not defect.is_zero():
            failures.append("pair law fails")
        return ValidationReport(not failures, failures, {"defect": defect.tolist()} if failures else None)

    @cached_property
    def tmodule(self) -> LeftModule:
        return pair_to_tmodule(self)


def pair_to_tmodule(p: PairModule, check: bool = True) -> LeftModule:
    """The T-module with ``(r, m) . x = r x + alpha(m (x) x)``."""
    ext = p.ext
    if check:
        rep = p.validate()
        if not rep.ok:
            raise PairLawError("; ".join(rep.failures))
    fld = p.x.field
    d = p.dim
    action = list(p.x.action)
    eye = Matrix.identity(fld, ext.m.dim)
    eye_x = Matrix.identity(fld, d)
    for a in range(ext.m.dim):
        if d and p.tensor.dim:
            action.append(p.alpha @ p.tensor.proj @ kron(eye[:, a:a + 1], eye_x))
        else:
            action.append(Matrix.zeros(fld, d, d))
    return LeftModule(ext.t, action, name=p.name)


def tmodule_to_pair(ext: ThetaExtension, z: LeftModule, name: str = "") -> PairModule:
    """Inverse of ``pair_to_tmodule``: restrict to R and read alpha off the M-part."""
    if z.alg is not ext.t:
        raise ValueError("module is not over the extension ring")
    n = ext.base.dim
    x = LeftModule(ext.base, z.action[:n], name=name or z.name)
    tp = tensor_over(ext.m, x)
    fld = x.field
    if x.dim == 0 or tp.dim == 0:
        alpha = Matrix.zeros(fld, x.dim, tp.dim)
    else:
        alpha_k = hstack(list(z.action[n:]))
        if tp.relations.cols and not (alpha_k @ tp.relations).is_zero():
            raise PairLawError("M-action is not balanced over the base ring")
        alpha = alpha_k @ tp.section
    p = PairModule(ext, x, alpha, name=name or z.name)
    rep = p.validate()
    if not rep.ok:
        raise PairLawError("input is not a T-module: " + "; ".join(rep.failures))
    p.__dict__["tmodule"] = z
    return p


def is_pair_hom(src: PairModule, dst: PairModule, f: Matrix) -> bool:
    """``f`` is R-linear and ``f alpha = alpha' (1 (x) f)``."""
    if not ModuleHom(src.x, dst.x, f).is_equivariant():
        return False
    eye_m = Matrix.identity(f.field, src.ext.m.dim)
    return f @ src.alpha == dst.alpha @ induced(src.tensor, dst.tensor, eye_m, f)


def random_pair(ext: ThetaExtension, rng: np.random.Generator, max_dim: int, min_dim: int = 1) -> PairModule:
    return tmodule_to_pair(ext, random_module(ext.t, rng, max_dim, min_dim))


# -- functors ---------------------------------------------------------------------------

def functor_e(p: PairModule) -> LeftModule:
    return p.x


def functor_e_hom(f: Matrix) -> Matrix:
    return f


def functor_i(ext: ThetaExtension, y: LeftModule) -> PairModule:
    tp = tensor_over(ext.m, y)
    return PairModule(ext, y, Matrix.zeros(y.field, y.dim, tp.dim))


def functor_F(ext: ThetaExtension, y: LeftModule) -> LeftModule:
    return tensor_over(ext.m, y).module


def functor_F_hom(ext: ThetaExtension, y: LeftModule, y2: LeftModule, f: Matrix) -> Matrix:
    eye_m = Matrix.identity(f.field, ext.m.dim)
    return induced(tensor_over(ext.m, y), tensor_over(ext.m, y2), eye_m, f)


def functor_F_power(ext: ThetaExtension, y: LeftModule, n: int) -> LeftModule:
    for _ in range(n):
        y = functor_F(ext, y)
    return y


@dataclass(eq=False)
class _LData:
    pair: PairModule
    inj_y: Matrix
    inj_f: Matrix
    proj_y: Matrix
    proj_f: Matrix


def _l_data(ext: ThetaExtension, y: LeftModule) -> _LData:
    cache = ext.cache("l")
    hit = cache.get(id(y))
    if hit is not None and hit[0] is y:
        return hit[1]
    fy = functor_F(ext, y)
    ds = direct_sum([y, fy], name=f"l({y.name})" if y.name else "")
    carrier = ds.module
    fld = y.field
    tc = tensor_over(ext.m, carrier)
    eye_m = Matrix.identity(fld, ext.m.dim)
    p1, p2 = ds.projections
    one_p1 = induced(tc, tensor_over(ext.m, y), eye_m, p1.matrix)
    one_p2 = induced(tc, tensor_over(ext.m, fy), eye_m, p2.matrix)
    lower = one_p1 + ext.data.theta_tensor(y) @ one_p2
    alpha = vstack([Matrix.zeros(fld, y.dim, tc.dim), lower])
    pair = PairModule(ext, carrier, alpha, name=carrier.name)
    out = _LData(pair, ds.injections[0].matrix, ds.injections[1].matrix, p1.matrix, p2.matrix)
    cache[id(y)] = (y, out)
    return out


def functor_l(ext: ThetaExtension, y: LeftModule) -> PairModule:
    return _l_data(ext, y).pair


def functor_l_hom(ext: ThetaExtension, y: LeftModule, y2: LeftModule, f: Matrix) -> Matrix:
    from .exactla import block_diag
    return block_diag([f, functor_F_hom(ext, y, y2, f)], field=f.field)


def functor_q(p: PairModule) -> tuple[LeftModule, ModuleHom]:
    """``Coker alpha`` with its projection from ``X``."""
    return cokernel(p.alpha_hom)


def functor_q_hom(p: PairModule, p2: PairModule, f: Matrix) -> Matrix:
    q1, pi1 = functor_q(p)
    q2, pi2 = functor_q(p2)
    from .algebra import induced_on_quotients
    return induced_on_quotients(f, pi1, pi2)


def functor_G(p: PairModule) -> PairModule:
    ext = p.ext
    cache = ext.cache("G")
    hit = cache.get(id(p))
    if hit is not None and hit[0] is p:
        return hit[1]
    fx = functor_F(ext, p.x)
    outer = tensor_over(ext.m, fx)
    eye_m = Matrix.identity(p.x.field, ext.m.dim)
    alpha = ext.data.theta_tensor(p.x) - induced(outer, p.tensor, eye_m, p.alpha)
    g = PairModule(ext, fx, alpha, name=f"G({p.name})" if p.name else "")
    rep = g.validate()
    if not rep.ok:
        raise AssertionError("G produced an invalid pair: " + "; ".join(rep.failures))
    cache[id(p)] = (p, g)
    return g


def functor_G_power(p: PairModule, n: int) -> PairModule:
    for _ in range(n):
        p = functor_G(p)
    return p


def functor_G_hom(p: PairModule, p2: PairModule, f: Matrix) -> Matrix:
    eye_m = Matrix.identity(f.field, p.ext.m.dim)
    return induced(p.tensor, p2.tensor, eye_m, f)


# -- natural transformations -----------------------------------------------------------

def nat_u(p: PairModule) -> ModuleHom:
    """``u: G(p) -> l e(p)`` with components ``(-alpha, 1)``."""
    g = functor_G(p)
    le = functor_l(p.ext, p.x)
    mat = vstack([-p.alpha, Matrix.identity(p.x.field, g.dim)])
    return ModuleHom(g.tmodule, le.tmodule, mat)


def nat_lambda(p: PairModule) -> ModuleHom:
    """``lambda: l e(p) -> p`` with components ``(1, alpha)``."""
    le = functor_l(p.ext, p.x)
    mat = hstack([Matrix.identity(p.x.field, p.dim), p.alpha], rows=p.dim)
    return ModuleHom(le.tmodule, p.tmodule, mat)


def nat_nu(ext: ThetaExtension, y: LeftModule) -> ModuleHom:
    """``nu: F(y) -> e l(y)``, inclusion of the second summand."""
    ld = _l_data(ext, y)
    return ModuleHom(functor_F(ext, y), ld.pair.x, ld.inj_f)


def nat_nu_prime(ext: ThetaExtension, y: LeftModule) -> ModuleHom:
    """``nu': e l(y) -> F(y)``, projection onto the second summand."""
    ld = _l_data(ext, y)
    return ModuleHom(ld.pair.x, functor_F(ext, y), ld.proj_f)


def unit_le(ext: ThetaExtension, y: LeftModule) -> ModuleHom:
    """Unit ``y -> e l(y)`` of the adjunction ``l -| e``."""
    ld = _l_data(ext, y)
    return ModuleHom(y, ld.pair.x, ld.inj_y)


def el_projection(ext: ThetaExtension, y: LeftModule) -> ModuleHom:
    """The retraction ``e l(y) -> y`` completing the split sequence."""
    ld = _l_data(ext, y)
    return ModuleHom(ld.pair.x, y, ld.proj_y)


def eta(ext: ThetaExtension, y: LeftModule) -> ModuleHom:
    """``nu'_y o e(lambda_{l y}) o e l(nu_y) o nu_{F y}: F^2(y) -> F(y)``."""
    fy = functor_F(ext, y)
    nu_fy = nat_nu(ext, fy)
    el_nu = functor_l_hom(ext, fy, functor_l(ext, y).x, nat_nu(ext, y).matrix)
    lam = nat_lambda(functor_l(ext, y)).matrix
    nup = nat_nu_prime(ext, y).matrix
    mat = nup @ lam @ el_nu @ nu_fy.matrix
    return ModuleHom(functor_F(ext, fy), fy, mat)


# -- axiom verification -------------------------------------------------------------------

@dataclass
class AxiomReport:
    """Per-check pass counts and the failures with witnesses."""

    checks: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)

    def record(self, name: str, ok: bool, witness=None) -> None:
        passed, total = self.checks.get(name, (0, 0))
        self.checks[name] = (passed + int(bool(ok)), total + 1)
        if not ok:
            self.failures.append({"check": name, "witness": witness})

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": {k: {"passed": p, "total": t} for k, (p, t) in sorted(self.checks.items())},
                "failures": self.failures}


def _short_exact(f: Matrix, g: Matrix) -> bool:
    """``0 -> a -f-> b -g-> c -> 0`` is exact."""
    if not (g @ f).is_zero():
        return False
    return rank(f) == f.cols and rank(g) == g.rows and homology_dim_at(f, g) == 0


def _check_pair(ext: ThetaExtension, p: PairModule, rep: AxiomReport, max_n: int, max_power: int, tag: str) -> None:
    fld = p.x.field
    eye = Matrix.identity(fld, p.dim)
    # triangle identity e(lambda_p) o unit_{e p} = 1
    lam = nat_lambda(p)
    rep.record("triangle_le_counit", lam.matrix @ unit_le(ext, p.x).matrix == eye, tag)
    # q -| i: counit after q(unit) is the identity on q(p)
    qp, pi = functor_q(p)
    qiq_proj = functor_q(functor_i(ext, qp))[1]
    q_unit = functor_q_hom(p, functor_i(ext, qp), pi.matrix)
    rep.record("triangle_qi", qiq_proj.matrix @ q_unit == Matrix.identity(fld, qp.dim)
               and pi.is_equivariant(), tag)
    # sequence 0 -> G p -> l e p -> p -> 0 and its iterates
    cur = p
    for n in range(1, max_n + 1):
        u, lam_n = nat_u(cur), nat_lambda(cur)
        ok = u.is_equivariant() and lam_n.is_equivariant() and _short_exact(u.matrix, lam_n.matrix)
        rep.record("sequence_u_lambda" if n == 1 else "sequence_iterated", ok, {"sample": tag, "n": n})
        cur = functor_G(cur)
    # F^n e = e G^n
    fx = p.x
    g = p
    for n in range(1, max_power + 1):
        fx = functor_F(ext, fx)
        g = functor_G(g)
        rep.record("F_power_e_equals_e_G_power", fx.same_as(g.x), {"sample": tag, "n": n})


def _check_module(ext: ThetaExtension, y: LeftModule, rep: AxiomReport, tag: str) -> None:
    fld = y.field
    ly = functor_l(ext, y)
    # triangle identity lambda_{l y} o l(unit_y) = 1_{l y}
    l_unit = functor_l_hom(ext, y, ly.x, unit_le(ext, y).matrix)
    rep.record("triangle_le_unit", nat_lambda(ly).matrix @ l_unit == Matrix.identity(fld, ly.dim), tag)
    # e i = Id
    rep.record("ei_identity", functor_e(functor_i(ext, y)).same_as(y), tag)
    # q l ~ Id, certified by an explicit isomorphism
    qly = functor_q(ly)[0]
    iso = find_isomorphism(qly, y)
    rep.record("ql_iso", iso is not None and iso.is_equivariant(), tag)
    # split sequence 0 -> F y -> e l y -> y -> 0
    nu, nup = nat_nu(ext, y), nat_nu_prime(ext, y)
    proj = el_projection(ext, y)
    ok = (nup.matrix @ nu.matrix == Matrix.identity(fld, nu.src.dim) and nu.is_equivariant()
          and nup.is_equivariant() and proj.is_equivariant() and _short_exact(nu.matrix, proj.matrix))
    rep.record("split_sequence", ok, tag)


def check_cleft_axioms(ext: ThetaExtension, pairs: list[PairModule], modules: list[LeftModule],
                       max_n: int = 3, max_power: int = 4, adjunction_pairs: int = 5) -> AxiomReport:
    """Verify the cleft-extension structure on a sample of objects."""
    rep = AxiomReport()
    for k, p in enumerate(pairs):
        _check_pair(ext, p, rep, max_n, max_power, f"pair{k}")
    for k, y in enumerate(modules):
        _check_module(ext, y, rep, f"module{k}")
    for k, (y, p) in enumerate(list(zip(modules, pairs))[:adjunction_pairs]):
        ly = functor_l(ext, y)
        a = len(hom_space(ly.tmodule, p.tmodule)) == len(hom_space(y, p.x))
        rep.record("adjunction_le_dims", a, f"pair{k}")
        iy = functor_i(ext, y)
        b = len(hom_space(p.tmodule, iy.tmodule)) == len(hom_space(functor_q(p)[0], y))
        rep.record("adjunction_qi_dims", b, f"pair{k}")
    return rep


def sample_objects(ext: ThetaExtension, seed: int, count: int, max_dim: int = 3) -> tuple[list[PairModule], list[LeftModule]]:
    """Seeded samples of pairs and base modules."""
    rng = np.random.default_rng(seed)
    pairs = [random_pair(ext, rng, max_dim) for _ in range(count)]
    modules = [random_module(ext.base, rng, max_dim) for _ in range(count)]
    return pairs, modules


__all__ = [
    "PairLawError", "ThetaData", "validate_theta", "ThetaExtension", "build_T", "PairModule", "pair_to_tmodule",
    "tmodule_to_pair", "is_pair_hom", "random_pair", "functor_e", "functor_e_hom", "functor_i", "functor_F",
    "functor_F_hom", "functor_F_power", "functor_l", "functor_l_hom", "functor_q", "functor_q_hom", "functor_G",
    "functor_G_power", "functor_G_hom", "nat_u", "nat_lambda", "nat_nu", "nat_nu_prime", "unit_le", "el_projection",
    "eta", "AxiomReport", "check_cleft_axioms", "sample_objects",
]
