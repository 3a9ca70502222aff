"""Gorenstein-projectivity criteria for theta-extensions and their specialisations.

For a T-module ``p = (X, alpha)`` the checks compare the oracle verdict on ``p``
with two structural tests:

- quotient condition: ``q(p)`` is Gorenstein projective over R and ``q(u_p)``
  is injective;
- sequence condition: ``q(p)`` is Gorenstein projective and
  ``M(x)M(x)X --(1(x)alpha - theta(x)1)--> M(x)X --alpha--> X`` is exact.

A GP module satisfies the quotient condition when the extension is compatible.
The two conditions always agree, and all three tests agree when the natural
map ``eta: F^2 -> F`` vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import (
    EXCEEDS,
    Algebra,
    Bimodule,
    LeftModule,
    ModuleHom,
    ProjectiveModule,
    ResolutionWindow,
    cokernel,
    hom_space,
    injective_dimension_bounded,
    pd_bounded,
    product_algebra,
    tensor_bimodules,
    tensor_differential_matrix,
    tensor_over,
    tensor_projective_dim,
    tor_dims,
    induced,
    validate_bimodule,
    zero_module,
)
from .cleft import (
    PairModule,
    ThetaData,
    ThetaExtension,
    build_T,
    eta,
    functor_F,
    functor_F_hom,
    functor_G,
    functor_i,
    functor_l,
    functor_q,
    functor_q_hom,
    nat_u,
    tmodule_to_pair,
)
from .exactla import Matrix, block_diag, hstack, homology_dim_at, inverse, kron, rank, solve, vstack
from .gp import GPVerdict, ab_test, default_depth, hom_complex_homology

# verdict codes
GP = "gp"
NOT_GP = "not-gp"
INCONCLUSIVE = "inconclusive"
COMPAT_FAILURE = "compatibility-failure"
DEFECT = "defect"
NECESSARY_ONLY = "necessary-only"
UNDETERMINED = "undetermined"


class EquivalenceViolation(AssertionError):
    """The quotient condition and the sequence condition disagreed; they are equivalent for every module."""


# -- the three conditions ----------------------------------------------------------

def quotient_condition(p: PairModule, depth: int | None = None) -> dict:
    """``q(p)`` through the oracle, and injectivity of ``q(u_p)``."""
    ext = p.ext
    qp, _ = functor_q(p)
    q_gp = ab_test(qp, depth if depth is not None else default_depth(ext.base))
    g = functor_G(p)
    le = functor_l(ext, p.x)
    u = nat_u(p)
    qu = functor_q_hom(g, le, u.matrix)
    src_dim = qu.cols
    qu_rank = rank(qu) if qu.rows and qu.cols else 0
    return {"q_gp": q_gp, "q_dim": qp.dim, "qu_mono": qu_rank == src_dim, "qu_rank": qu_rank,
            "qG_dim": src_dim, "qu_matrix": qu}


def sequence_maps(p: PairModule) -> tuple[Matrix, Matrix]:
    """``(1(x)alpha - theta(x)1, alpha)`` on ``M(x)(M(x)X) -> M(x)X -> X``."""
    g = functor_G(p)
    return -g.alpha, p.alpha


def sequence_condition(p: PairModule) -> dict:
    """Exactness of ``M(x)M(x)X -> M(x)X -> X`` at the middle."""
    d1, d2 = sequence_maps(p)
    h = homology_dim_at(d1, d2)
    return {"sequence_exact": h == 0, "homology_dims": [h]}


def eta_vanishing(ext: ThetaExtension) -> dict:
    """Whether eta vanishes, decided on free modules of rank 1 and 2, with a witness if not."""
    return _eta_zero(ext)


def _eta_zero(ext: ThetaExtension) -> dict:
    cache = ext.cache("eta_zero")
    if "result" not in cache:
        # eta is natural and F, F^2 preserve epimorphisms, so vanishing on free
        # modules of rank 1 and 2 decides vanishing everywhere
        from .algebra import free_module
        sample = [free_module(ext.base, 1), free_module(ext.base, 2)]
        zero = True
        witness = None
        for y in sample:
            m = eta(ext, y).matrix
            if not m.is_zero():
                zero, witness = False, {"module_dim": y.dim, "eta": m.tolist()}
                break
        cache["result"] = {"eta_zero": zero, "sample_dims": [y.dim for y in sample], "witness": witness}
    return cache["result"]


@dataclass
class CriteriaReport:
    oracle: GPVerdict
    quotient: dict
    sequence: dict
    eta_zero: bool
    compat_asserted: bool
    criterion: str
    logic_verdict: str
    notes: list = dc_field(default_factory=list)

    @property
    def quotient_holds(self) -> bool:
        return self.quotient["q_gp"].positive and self.quotient["qu_mono"]

    @property
    def agrees_with_oracle(self) -> bool:
        if self.criterion == GP:
            return self.oracle.positive
        if self.criterion == NOT_GP:
            return self.oracle.negative
        return True

    def to_dict(self) -> dict:
        c2 = dict(self.quotient)
        c2["q_gp"] = c2["q_gp"].to_dict()
        c2["qu_matrix"] = c2["qu_matrix"].tolist()
        return {"oracle": self.oracle.to_dict(), "quotient": c2, "sequence": self.sequence, "eta_zero": self.eta_zero,
                "compat_asserted": self.compat_asserted, "criterion": self.criterion,
                "logic_verdict": self.logic_verdict, "quotient_sequence_equivalence": "holds", "notes": self.notes}


def _logic(oracle: GPVerdict, quotient_holds: bool, quotient_certain: bool, eta_zero: bool,
           compat: bool) -> tuple[str, str, list]:
    notes = []
    if compat and eta_zero:
        criterion = GP if quotient_holds else NOT_GP
    elif compat:
        criterion = UNDETERMINED if quotient_holds else NOT_GP
    else:
        criterion = UNDETERMINED
    if oracle.status == "unknown":
        return criterion, INCONCLUSIVE, notes
    if not compat:
        if oracle.positive and not quotient_holds:
            notes.append("oracle says GP while the quotient condition fails; the criterion needs compatibility, "
                         "which does not hold here, so this is not a counterexample")
            return criterion, COMPAT_FAILURE, notes
        return criterion, GP if oracle.positive else NOT_GP, notes
    if criterion == GP:
        if oracle.positive:
            return criterion, GP, notes
        notes.append("criterion claims GP but the oracle found a witness")
        return criterion, DEFECT if quotient_certain else INCONCLUSIVE, notes
    if criterion == NOT_GP:
        if oracle.negative:
            return criterion, NOT_GP, notes
        if oracle.certified:
            notes.append("oracle certifies GP but the quotient condition fails under asserted compatibility")
            return criterion, DEFECT if quotient_certain else INCONCLUSIVE, notes
        return criterion, INCONCLUSIVE, notes
    # eta nonzero: only the necessary direction is available
    if oracle.positive:
        return criterion, GP, notes
    notes.append("necessary conditions hold; sufficiency is not claimed when eta is nonzero")
    return criterion, NECESSARY_ONLY, notes


def classify_pair(p: PairModule, ext: ThetaExtension | None = None, depth: int | None = None,
                  compat_asserted: bool = False) -> CriteriaReport:
    """Evaluate all three conditions and reconcile them with the oracle."""
    ext = ext or p.ext
    if p.ext is not ext:
        raise ValueError("pair belongs to a different extension")
    depth_t = depth if depth is not None else default_depth(ext.t)
    oracle = ab_test(p.tmodule, depth_t)
    quotient = quotient_condition(p, depth)
    sequence = sequence_condition(p)
    if quotient["qu_mono"] != sequence["sequence_exact"]:
        raise EquivalenceViolation(f"q(u) mono = {quotient['qu_mono']} but sequence exact = {sequence['sequence_exact']}")
    ez = _eta_zero(ext)["eta_zero"]
    holds = quotient["q_gp"].positive and quotient["qu_mono"]
    certain = (not quotient["qu_mono"]) or quotient["q_gp"].status in ("GP-certified", "not-GP")
    criterion, verdict, notes = _logic(oracle, holds, certain, ez, compat_asserted)
    return CriteriaReport(oracle, quotient, sequence, ez, compat_asserted, criterion, verdict, notes)


# -- complexes obtained by applying functors to windows ---------------------------------

def _homology_from(dims: dict, ranks: dict, degrees) -> dict:
    return {deg: dims[deg] - ranks.get(deg, 0) - ranks.get(deg - 1, 0) for deg in degrees}


def tensor_complex_homology(w: ResolutionWindow, m: Bimodule) -> dict[int, int]:
    """Homology of ``m (x) w`` at the interior degrees."""
    dims, ranks = {}, {}
    for deg in w.degrees:
        t = w.term(deg)
        dims[deg] = tensor_projective_dim(m, t) if isinstance(t, ProjectiveModule) else tensor_over(m, t).dim
    for deg in list(w.degrees)[:-1]:
        d = w.diff(deg)
        if isinstance(d.src, ProjectiveModule) and isinstance(d.dst, ProjectiveModule):
            ranks[deg] = rank(tensor_differential_matrix(m, d))
        else:
            eye = Matrix.identity(m.field, m.dim)
            ranks[deg] = rank(induced(tensor_over(m, d.src), tensor_over(m, d.dst), eye, d.matrix))
    return _homology_from(dims, ranks, w.interior)


def _mapped_complex_homology(objs: list, maps: list[Matrix], degrees: list[int]) -> dict[int, int]:
    out = {}
    for k in range(1, len(objs) - 1):
        out[degrees[k]] = homology_dim_at(maps[k - 1], maps[k])
    return out


def compat_check_l(window: ResolutionWindow, m: Bimodule) -> dict:
    """``m (x) P`` and ``Hom(P, m (x) R)`` acyclic at the interior of an R-window."""
    tens = tensor_complex_homology(window, m)
    base = window.terms[0].alg if window.terms else m.right_alg
    target = tensor_over(m, base.regular_module).module
    hom = hom_complex_homology(window, target)
    ok = not any(tens.values()) and not any(hom.values())
    return {"ok": ok, "tensor_homology": tens, "hom_homology": hom,
            "scope": "checked against M itself; finite sums and summands behave the same"}


def _tensor_power(m: Bimodule, j: int) -> Bimodule:
    out = m
    for _ in range(j - 1):
        out = tensor_bimodules(m, out).bimodule
    return out


def nilpotency_index(m: Bimodule, bound: int):
    """Smallest ``s <= bound`` with ``m^(x)s = 0``, else None."""
    if m.dim == 0:
        return 1
    power = m
    for s in range(2, bound + 1):
        power = tensor_bimodules(m, power).bimodule
        if power.dim == 0:
            return s
    return None


def compat_check_q(window: ResolutionWindow, ext: ThetaExtension, depth: int) -> dict:
    """The two sufficient routes for ``q`` to preserve Gorenstein projectives, on a T-window."""
    degrees = list(window.degrees)
    pairs = [tmodule_to_pair(ext, t) for t in window.terms]
    # route: q-acyclic window
    qs = [functor_q(p)[0] for p in pairs]
    qmaps = [functor_q_hom(pairs[k], pairs[k + 1], window.differentials[k].matrix) for k in range(len(pairs) - 1)]
    q_hom = _mapped_complex_homology(qs, qmaps, degrees)
    i_reg = functor_i(ext, ext.base.regular_module).tmodule
    hom_i = hom_complex_homology(window, i_reg)
    q_acyclic_route = {"ok": not any(q_hom.values()) and not any(hom_i.values()),
               "q_homology": q_hom, "hom_homology": hom_i}
    # route: nilpotent bimodule
    s = nilpotency_index(ext.m, depth + 1)
    nilpotent_route: dict = {"nilpotency_index": s}
    if s is None:
        nilpotent_route.update(ok=False, reason=f"M tensor powers do not vanish up to {depth + 1}")
        # still record the first functor check for diagnostics
        carriers = [p.x for p in pairs]
        fs = [functor_F(ext, c) for c in carriers]
        fmaps = [functor_F_hom(ext, carriers[k], carriers[k + 1], window.differentials[k].matrix)
                 for k in range(len(carriers) - 1)]
        nilpotent_route["F_homology"] = {1: _mapped_complex_homology(fs, fmaps, degrees)}
    else:
        m_left = ext.m.as_left_module()
        tor = {j: tor_dims(_tensor_power(ext.m, j), m_left, depth)[1:] for j in range(1, s)}
        tor_ok = all(not any(v) for v in tor.values())
        f_hom, l_hom = {}, {}
        for j in range(1, s):
            carriers = [p.x for p in pairs]
            maps = [w.matrix for w in window.differentials]
            for _ in range(j):
                nxt = [functor_F(ext, c) for c in carriers]
                maps = [functor_F_hom(ext, carriers[k], carriers[k + 1], maps[k]) for k in range(len(maps))]
                carriers = nxt
            f_hom[j] = _mapped_complex_homology(carriers, maps, degrees)
            fj_r = ext.base.regular_module
            for _ in range(j):
                fj_r = functor_F(ext, fj_r)
            l_hom[j] = hom_complex_homology(window, functor_l(ext, fj_r).tmodule)
        ok = tor_ok and all(not any(v.values()) for v in f_hom.values()) and all(
            not any(v.values()) for v in l_hom.values())
        nilpotent_route.update(ok=ok, tor=tor, F_homology=f_hom, hom_homology=l_hom)
    route = "q_acyclic" if q_acyclic_route["ok"] else ("nilpotent" if nilpotent_route["ok"] else None)
    return {"ok": route is not None, "route": route, "q_acyclic_route": q_acyclic_route, "nilpotent_route": nilpotent_route}


def perfect_check(m: Bimodule, r: Algebra, depth: int, testset: list[LeftModule]) -> dict:
    """Bounded, testset-relative check of the three perfectness conditions for ``F = m (x) -``."""
    if m.left_alg is not r or m.right_alg is not r:
        raise ValueError("bimodule must be over the given algebra on both sides")
    m_left = m.as_left_module()
    powers = {}
    for j in range(1, depth + 1):
        pw = _tensor_power(m, j)
        powers[j] = pw
        if pw.dim == 0:
            break
    tor_on_m = {j: tor_dims(pw, m_left, depth)[1:] for j, pw in powers.items()}
    ok1 = all(not any(v) for v in tor_on_m.values())
    # Tor bound: some n with Tor_i(M^j, x) = 0 whenever i, j > 0 and i + j >= n + 1
    table = {}
    for idx, x in enumerate(testset):
        for j, pw in powers.items():
            dims = tor_dims(pw, x, depth)
            for i in range(1, depth + 1):
                table[(idx, i, j)] = dims[i]
    n_found = None
    for n in range(0, depth + 1):
        if all(v == 0 for (idx, i, j), v in table.items() if i + j >= n + 1):
            n_found = n
            break
    fr = tensor_over(m, r.regular_module).module
    pd = pd_bounded(fr, depth)
    ok3 = pd != EXCEEDS
    return {"ok": ok1 and n_found is not None and ok3, "tor_M_powers_on_M": tor_on_m, "tor_vanishing": ok1,
            "tor_bound_n": n_found, "tor_bounded": n_found is not None, "pd_F_regular": pd, "finite_pd": ok3,
            "scope": f"bounded by depth {depth}; Tor bound checked on {len(testset)} test modules"}


# -- Morita contexts and triangular algebras ---------------------------------------------

def _lift_bimodule(r: Algebra, na: int, nb: int, m: Bimodule, left_first: bool) -> tuple[list, list]:
    """Actions of ``R = A x B`` on an (A, B)- (left_first) or (B, A)-bimodule."""
    fld = r.field
    z = Matrix.zeros(fld, m.dim, m.dim)
    if left_first:   # (A, B)
        left = list(m.left_action) + [z] * nb
        right = [z] * na + list(m.right_action)
    else:            # (B, A)
        left = [z] * na + list(m.left_action)
        right = list(m.right_action) + [z] * nb
    return left, right


@dataclass(eq=False)
class MoritaContext:
    """``[[A, M], [N, B]]`` with zero pairings, realised as ``(A x B) x (M (+) N)``.

    ``n is None`` gives the triangular algebra ``[[A, M], [0, B]]``.
    """

    a: Algebra
    b: Algebra
    m: Bimodule
    n: Bimodule | None
    r: Algebra
    mn: Bimodule
    ext: ThetaExtension
    name: str = ""

    @property
    def triangular(self) -> bool:
        return self.n is None or self.n.dim == 0


def build_morita_context(a: Algebra, b: Algebra, m: Bimodule, n: Bimodule | None = None,
                         name: str = "") -> MoritaContext:
    if m.left_alg is not a or m.right_alg is not b:
        raise ValueError("M must be an (A, B)-bimodule")
    if n is not None and (n.left_alg is not b or n.right_alg is not a):
        raise ValueError("N must be a (B, A)-bimodule")
    for bim in [m] + ([n] if n is not None else []):
        rep = validate_bimodule(bim)
        if not rep.ok:
            raise ValueError("invalid bimodule: " + "; ".join(rep.failures))
    r = product_algebra(a, b, name=f"{a.name}x{b.name}")
    na, nb = a.dim, b.dim
    lm, rm = _lift_bimodule(r, na, nb, m, True)
    if n is not None:
        ln, rn = _lift_bimodule(r, na, nb, n, False)
        left = [block_diag([x, y], field=r.field) for x, y in zip(lm, ln)]
        right = [block_diag([x, y], field=r.field) for x, y in zip(rm, rn)]
    else:
        left, right = lm, rm
    mn = Bimodule(r, r, left, right, name=f"{m.name}+{n.name}" if n is not None else m.name)
    ext = build_T(ThetaData.zero(r, mn), name=name or "Lambda")
    return MoritaContext(a, b, m, n, r, mn, ext, name=name)


@dataclass(eq=False)
class Quad:
    """A module ``(X, Y, f, g)``: ``f: N(x)_A X -> Y`` and ``g: M(x)_B Y -> X``."""

    ctx: MoritaContext
    x: LeftModule
    y: LeftModule
    f: Matrix
    g: Matrix
    name: str = ""

    def __post_init__(self):
        c = self.ctx
        my = tensor_over(c.m, self.y).dim
        if self.g.shape != (self.x.dim, my):
            raise ValueError(f"g must be {self.x.dim} x {my}")
        nx = tensor_over(c.n, self.x).dim if c.n is not None else 0
        if self.f.shape != (self.y.dim, nx):
            raise ValueError(f"f must be {self.y.dim} x {nx}")


def quad_zero_laws(q: Quad) -> dict:
    """``g (1 (x) f) = 0`` and ``f (1 (x) g) = 0``."""
    c = q.ctx
    out = {"g_after_1f": True, "f_after_1g": True}
    if c.n is None:
        return out
    fld = q.x.field
    nx = tensor_over(c.n, q.x)
    mnx = tensor_over(c.m, nx.module)
    my = tensor_over(c.m, q.y)
    one_f = induced(mnx, my, Matrix.identity(fld, c.m.dim), q.f)
    out["g_after_1f"] = (q.g @ one_f).is_zero() if one_f.rows and one_f.cols else True
    ny_m = tensor_over(c.n, tensor_over(c.m, q.y).module)
    one_g = induced(ny_m, nx, Matrix.identity(fld, c.n.dim), q.g)
    out["f_after_1g"] = (q.f @ one_g).is_zero() if one_g.rows and one_g.cols else True
    return out


def quad_to_pair(q: Quad) -> PairModule:
    """The pair over ``(A x B) x (M (+) N)`` corresponding to ``(X, Y, f, g)``."""
    c = q.ctx
    fld = q.x.field
    r = c.r
    na, nb = c.a.dim, c.b.dim
    dx, dy = q.x.dim, q.y.dim
    zx, zy = Matrix.zeros(fld, dx, dx), Matrix.zeros(fld, dy, dy)
    action = [block_diag([q.x.action[i], zy], field=fld) for i in range(na)]
    action += [block_diag([zx, q.y.action[j]], field=fld) for j in range(nb)]
    carrier = LeftModule(r, action, name=q.name)
    t = tensor_over(c.mn, carrier)
    dm = c.m.dim
    dn = c.n.dim if c.n is not None else 0
    eye = Matrix.identity(fld, dm + dn)
    eye_c = Matrix.identity(fld, dx + dy)
    iota_m, iota_n = eye[:, :dm], eye[:, dm:]
    iota_x, iota_y = eye_c[:, :dx], eye_c[:, dx:]
    my = tensor_over(c.m, q.y)
    cols = []
    if my.dim:
        cols.append(t.proj @ kron(iota_m, iota_y) @ my.section)
    if c.n is not None:
        nx = tensor_over(c.n, q.x)
        if nx.dim:
            cols.append(t.proj @ kron(iota_n, iota_x) @ nx.section)
    else:
        nx = None
    size = my.dim + (nx.dim if nx is not None else 0)
    if size != t.dim:
        raise AssertionError("tensor decomposition over A x B has the wrong dimension")
    if size == 0:
        alpha = Matrix.zeros(fld, dx + dy, 0)
    else:
        j = hstack(cols)
        f = q.f if q.f.cols else Matrix.zeros(fld, dy, 0)
        gf = block_diag([q.g, f], field=fld)
        alpha = gf @ inverse(j)
    return PairModule(c.ext, carrier, alpha, name=q.name)


def _factor_through(one_pi: Matrix, g: Matrix) -> Matrix | None:
    """Solve ``gbar @ one_pi = g``; ``one_pi`` is surjective."""
    if one_pi.rows == 0:
        return Matrix.zeros(g.field, g.rows, 0)
    sol = solve(one_pi.T, g.T)
    return None if sol is None else sol.T


def _morita_side(bim: Bimodule | None, other: Bimodule | None, first: LeftModule, second: LeftModule,
                 to_second: Matrix, back: Matrix) -> dict:
    """One of the two symmetric halves.

    With ``to_second: other (x) first -> second`` and ``back: bim (x) second -> first``,
    evaluates exactness of ``bim(x)other(x)first -> bim(x)second -> first`` and
    injectivity of ``bim (x) Coker(to_second) -> first``.
    """
    fld = first.field
    if bim is None or bim.dim == 0:
        return {"sequence_exact": True, "homology": 0, "induced_mono": True, "vacuous": True}
    b_second = tensor_over(bim, second)
    if other is not None and other.dim:
        of = tensor_over(other, first)
        b_of = tensor_over(bim, of.module)
        one_t = induced(b_of, b_second, Matrix.identity(fld, bim.dim), to_second)
    else:
        one_t = Matrix.zeros(fld, b_second.dim, 0)
    h = homology_dim_at(one_t, back)
    # bim (x) Coker(to_second) -> first must be injective
    if other is not None and other.dim:
        src = ModuleHom(tensor_over(other, first).module, second, to_second)
    else:
        src = zero_module(second.alg).zero_to(second)
    ck, pi = cokernel(src)
    b_ck = tensor_over(bim, ck)
    one_pi = induced(b_second, b_ck, Matrix.identity(fld, bim.dim), pi.matrix)
    gbar = _factor_through(one_pi, back)
    if gbar is None:
        raise AssertionError("map does not factor through the cokernel; zero law violated")
    mono = (rank(gbar) if gbar.rows and gbar.cols else 0) == b_ck.dim
    return {"sequence_exact": h == 0, "homology": h, "induced_mono": mono, "induced_dim": b_ck.dim,
            "image_dim": rank(back) if back.rows and back.cols else 0}


def morita_check(q: Quad, depth: int | None = None) -> dict:
    """Both characterisations for a module over a Morita context ring, plus the oracle."""
    c = q.ctx
    laws = quad_zero_laws(q)
    if not all(laws.values()):
        raise ValueError(f"zero-composition law violated: {laws}")
    depth_a = depth if depth is not None else default_depth(c.a)
    depth_b = depth if depth is not None else default_depth(c.b)
    first = _morita_side(c.m, c.n, q.x, q.y, q.f, q.g)
    second = _morita_side(c.n, c.m, q.y, q.x, q.g, q.f)
    for name, side in (("first", first), ("second", second)):
        if side["sequence_exact"] != side["induced_mono"]:
            raise EquivalenceViolation(f"{name} sequence: exact={side['sequence_exact']} "
                                       f"but induced map mono={side['induced_mono']}")
    nx = ModuleHom(tensor_over(c.n, q.x).module, q.y, q.f) if c.n is not None else None
    my = ModuleHom(tensor_over(c.m, q.y).module, q.x, q.g)
    coker_g = cokernel(my)[0]
    coker_f = cokernel(nx)[0] if nx is not None else q.y
    gp_cg = ab_test(coker_g, depth_a)
    gp_cf = ab_test(coker_f, depth_b)
    criterion_holds = gp_cg.positive and gp_cf.positive and first["sequence_exact"] and second["sequence_exact"]
    pair = quad_to_pair(q)
    oracle = ab_test(pair.tmodule, depth if depth is not None else default_depth(c.ext.t))
    if criterion_holds == oracle.positive:
        verdict = GP if criterion_holds else NOT_GP
        flag = "agree"
    elif oracle.status == "GP-likely" or (not criterion_holds and not (gp_cg.certified or gp_cg.negative)):
        verdict, flag = INCONCLUSIVE, "inconclusive"
    elif oracle.positive and not criterion_holds:
        verdict, flag = COMPAT_FAILURE, "compatibility fails here; not a counterexample"
    else:
        verdict, flag = DEFECT, "criterion claims GP but the oracle found a witness"
    return {"first_sequence": first, "second_sequence": second, "coker_g_gp": gp_cg.to_dict(),
            "coker_f_gp": gp_cf.to_dict(), "criterion": GP if criterion_holds else NOT_GP,
            "oracle": oracle.to_dict(), "verdict": verdict, "flag": flag, "quotient_sequence_equivalence": "holds"}


def triangular_check(q: Quad, depth: int | None = None, cross_check: bool = True) -> dict:
    """``(X, Y, g)`` is GP iff Coker g is GP over A, Y is GP over B and g is injective."""
    c = q.ctx
    if not c.triangular:
        raise ValueError("triangular_check needs a context without N")
    depth_a = depth if depth is not None else default_depth(c.a)
    depth_b = depth if depth is not None else default_depth(c.b)
    gh = ModuleHom(tensor_over(c.m, q.y).module, q.x, q.g)
    coker_g = cokernel(gh)[0]
    v_cg = ab_test(coker_g, depth_a)
    v_y = ab_test(q.y, depth_b)
    g_mono = gh.is_mono() if gh.src.dim else True
    combined = v_cg.positive and v_y.positive and g_mono
    out = {"coker_g_gp": v_cg.to_dict(), "y_gp": v_y.to_dict(), "g_mono": g_mono,
           "criterion": GP if combined else NOT_GP}
    if cross_check:
        oracle = ab_test(quad_to_pair(q).tmodule, depth if depth is not None else default_depth(c.ext.t))
        out["oracle"] = oracle.to_dict()
        out["agree"] = combined == oracle.positive
    return out


def compatibility_by_dimensions(ctx: MoritaContext, bound: int) -> dict:
    """Sufficient condition for compatibility of ``M``: finite ``id_A M`` and ``pd M_B``."""
    id_m = injective_dimension_bounded(ctx.m.as_left_module(), bound)
    pd_m = pd_bounded(ctx.m.as_right_module(), bound)
    return {"id_A_M": id_m, "pd_M_B": pd_m, "compatible": id_m != EXCEEDS and pd_m != EXCEEDS}


def tensorring_necessary(p: PairModule, depth: int | None = None) -> dict:
    """Necessary-direction checks for a nonzero theta; sufficiency is never claimed."""
    ext = p.ext
    depth_r = depth if depth is not None else default_depth(ext.base)
    a = p.alpha_hom
    alpha_mono = a.is_mono() if a.src.dim else True
    coker = cokernel(a)[0]
    v = ab_test(coker, depth_r)
    quotient = quotient_condition(p, depth)
    g = functor_G(p)
    tensor_shape = g.alpha.is_zero() if g.alpha.rows and g.alpha.cols else True
    return {"alpha_mono": alpha_mono, "coker_alpha_gp": v.to_dict(), "qu_mono": quotient["qu_mono"],
            "qG_equals_M_tensor_X": tensor_shape,
            "necessary_conditions_hold": v.positive and quotient["qu_mono"],
            "verdict": NECESSARY_ONLY,
            "label": "necessary-only; the converse is not claimed for nonzero theta"}


def sample_quads(ctx: MoritaContext, rng: np.random.Generator, count: int, max_x: int, max_y: int) -> list[Quad]:
    """Random triangular-context modules ``(X, Y, g)`` with bounded component dimensions."""
    from .algebra import random_module
    if not ctx.triangular:
        raise ValueError("sampling is implemented for triangular contexts")
    out = []
    while len(out) < count:
        x = random_module(ctx.a, rng, max_x, min_dim=0) if rng.random() < 0.9 else random_module(ctx.a, rng, 0)
        y = random_module(ctx.b, rng, max_y, min_dim=0)
        homs = hom_space(tensor_over(ctx.m, y).module, x)
        fld = x.field
        g = Matrix.zeros(fld, x.dim, tensor_over(ctx.m, y).dim)
        mode = rng.random()
        for h in homs:
            if mode < 0.2:
                break
            c = int(rng.integers(0, fld.characteristic if fld.characteristic else 5))
            if mode < 0.5 and rng.random() < 0.5:
                c = 0
            if c:
                g = g + h.matrix.scale(c)
        out.append(Quad(ctx, x, y, Matrix.zeros(fld, y.dim, 0), g))
    return out


__all__ = [
    "eta_vanishing",
    "GP", "NOT_GP", "INCONCLUSIVE", "COMPAT_FAILURE", "DEFECT", "NECESSARY_ONLY", "UNDETERMINED",
    "EquivalenceViolation", "quotient_condition", "sequence_condition", "sequence_maps", "CriteriaReport", "classify_pair",
    "tensor_complex_homology", "compat_check_l", "compat_check_q", "nilpotency_index", "perfect_check",
    "MoritaContext", "build_morita_context", "Quad", "quad_zero_laws", "quad_to_pair", "morita_check",
    "triangular_check", "compatibility_by_dimensions", "tensorring_necessary", "sample_quads",
]
