"""Gorenstein-projectivity oracle: shortcut classes, a bounded Auslander-Bridger
test, and construction and verification of complete-resolution windows."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebra import (
    EXCEEDS,
    Algebra,
    LeftModule,
    ModuleHom,
    ProjectiveModule,
    ResolutionWindow,
    cokernel,
    dual_module,
    ext_dims,
    hom_from_projective_dim,
    hom_precompose_matrix,
    hom_space,
    is_injective,
    is_projective,
    minimal_resolution,
    pd_bounded,
    projective_cover,
    reflexivity,
    ring_dual,
    simple_modules,
)
from .exactla import Matrix, hstack, homology_dim_at, rank, solve, vstack

GP_CERTIFIED = "GP-certified"
GP_LIKELY = "GP-likely"
NOT_GP = "not-GP"
UNKNOWN = "unknown"


class WindowError(ValueError):
    """A complete-resolution window could not be spliced."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class GPVerdict:
    status: str
    depth: int
    evidence: dict = dc_field(default_factory=dict)
    witness: dict | None = None
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.status == GP_CERTIFIED

    @property
    def positive(self) -> bool:
        """Certified or likely."""
        return self.status in (GP_CERTIFIED, GP_LIKELY)

    @property
    def negative(self) -> bool:
        return self.status == NOT_GP

    def label(self) -> str:
        return f"{GP_LIKELY}({self.depth})" if self.status == GP_LIKELY else self.status

    def to_dict(self) -> dict:
        return {"status": self.label(), "depth": self.depth, "reason": self.reason,
                "evidence": self.evidence, "witness": self.witness}


def default_depth(alg: Algebra) -> int:
    return max(6, alg.dim + 2)


def _memo(alg: Algebra, key, compute):
    cache = alg.__dict__.setdefault("_gp_memo", {})
    if key not in cache:
        cache[key] = compute()
    return cache[key]


def is_self_injective(alg: Algebra) -> bool:
    return _memo(alg, "self_injective", lambda: is_injective(alg.regular_module))


def gldim_bounded(alg: Algebra, bound: int):
    """Global dimension if every simple has pd at most ``bound``, else ``EXCEEDS``."""
    def compute():
        worst = 0
        for s in simple_modules(alg):
            pd = pd_bounded(s, bound)
            if pd == EXCEEDS:
                return EXCEEDS
            worst = max(worst, pd)
        return worst
    return _memo(alg, ("gldim", bound), compute)


def regular_injective_dims(alg: Algebra, bound: int) -> tuple:
    """``(id of A as left module, id of A as right module)``, each bounded."""
    def compute():
        left = pd_bounded(dual_module(alg.regular_module), bound)
        right = pd_bounded(dual_module(alg.opposite.regular_module), bound)
        return left, right
    return _memo(alg, ("id_regular", bound), compute)


def gorenstein_bound(alg: Algebra, depth: int):
    """Return a certified bound ``d <= depth`` on both injective dimensions of A, or None."""
    if is_self_injective(alg) and is_self_injective(alg.opposite):
        return 0
    left, right = regular_injective_dims(alg, depth)
    if left == EXCEEDS or right == EXCEEDS:
        return None
    return max(left, right)


def ab_test(x: LeftModule, depth: int | None = None) -> GPVerdict:
    """Bounded Auslander-Bridger test with a certification policy.

    Checks ``Ext^i(x, A) = 0``, ``Ext^i(x*, A) = 0`` over the opposite algebra
    for ``1 <= i <= depth``, and reflexivity. A pass is certified when the
    algebra is Gorenstein with injective dimensions at most ``depth``.
    """
    alg = x.alg
    depth = default_depth(alg) if depth is None else depth
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if x.dim == 0 or is_projective(x, method="cover"):
        return GPVerdict(GP_CERTIFIED, depth, {"projective": True}, reason="projective")
    evidence: dict = {"projective": False}
    ext = ext_dims(x, alg.regular_module, depth)
    evidence["ext_to_regular"] = ext[1:]
    for i in range(1, depth + 1):
        if ext[i]:
            return GPVerdict(NOT_GP, depth, evidence, witness={"check": "ext", "degree": i, "dim": ext[i]},
                             reason=f"Ext^{i}(X, A) is nonzero")
    xd = ring_dual(x).module
    op = alg.opposite
    ext_op = ext_dims(xd, op.regular_module, depth)
    evidence["dual_ext_to_regular"] = ext_op[1:]
    for i in range(1, depth + 1):
        if ext_op[i]:
            return GPVerdict(NOT_GP, depth, evidence, witness={"check": "dual_ext", "degree": i, "dim": ext_op[i]},
                             reason=f"Ext^{i}(X*, A) over the opposite algebra is nonzero")
    refl = reflexivity(x)
    evidence["reflexivity"] = refl
    if not refl["reflexive"]:
        return GPVerdict(NOT_GP, depth, evidence, witness={"check": "reflexive", **refl},
                         reason="evaluation map to the double dual is not an isomorphism")
    bound = gorenstein_bound(alg, depth)
    evidence["gorenstein_bound"] = bound
    if bound is not None and bound <= depth:
        reason = "self-injective algebra" if bound == 0 else f"injective dimension of A is {bound}"
        return GPVerdict(GP_CERTIFIED, depth, evidence, reason=reason)
    return GPVerdict(GP_LIKELY, depth, evidence, reason="all bounded checks pass; no certificate available")


# -- complete resolution windows -------------------------------------------------

def left_approximation(c: LeftModule) -> ModuleHom:
    """Minimal left add(A)-approximation ``c -> P`` read off a projective cover of ``c*``."""
    alg = c.alg
    dual = ring_dual(c)
    if dual.module.dim == 0:
        p = ProjectiveModule(alg, ())
        return ModuleHom(c, p, Matrix.zeros(c.field, 0, c.dim))
    q, cover = projective_cover(dual.module)
    p = ProjectiveModule(alg, q.summands)
    homs = [h.matrix for h in dual.homs]
    rows = []
    for j, blk in enumerate(p.blocks):
        coords = cover.matrix @ q.generator(j)
        psi = Matrix.zeros(c.field, alg.dim, c.dim)
        for k in range(coords.rows):
            cval = coords.entry(k, 0)
            if cval:
                psi = psi + homs[k].scale(cval)
        comp = solve(blk.basis, psi)
        if comp is None:
            raise AssertionError("approximation component left its projective summand")
        rows.append(comp)
    return ModuleHom(c, p, vstack(rows))


def complete_window(x: LeftModule, depth: int) -> ResolutionWindow:
    """``P^-depth -> ... -> P^0 -> P^1 -> ... -> P^depth`` with ``x`` the image of ``d^0``."""
    left = minimal_resolution(x, depth)
    terms = list(left.terms)
    diffs = list(left.differentials)
    # pad a finite left half with zeros
    while len(terms) < depth + 1:
        z = ProjectiveModule(x.alg, ())
        diffs.insert(0, ModuleHom(z, terms[0], Matrix.zeros(x.field, terms[0].dim, 0)))
        terms.insert(0, z)
    cur = x
    to_cur = left.augmentation
    for k in range(1, depth + 1):
        approx = left_approximation(cur)
        if not approx.is_mono():
            raise WindowError("left approximation is not injective", witness={
                "step": k, "kernel_dim": cur.dim - approx.rank, "module_dim": cur.dim})
        diffs.append(ModuleHom(terms[-1], approx.dst, approx.matrix @ to_cur.matrix))
        terms.append(approx.dst)
        cur, to_cur = cokernel(approx)
    return ResolutionWindow(terms, diffs, start=-depth, augmentation=left.augmentation, is_minimal=True, center=0)


def hom_complex_homology(w: ResolutionWindow, y: LeftModule) -> dict[int, int]:
    """Homology of ``Hom(w, y)`` at the interior degrees of ``w``."""
    dims = {}
    ranks = {}
    for deg in w.degrees:
        t = w.term(deg)
        if isinstance(t, ProjectiveModule):
            dims[deg] = hom_from_projective_dim(t, y)
        else:
            dims[deg] = len(hom_space(t, y))
    for deg in list(w.degrees)[:-1]:
        d = w.diff(deg)
        if isinstance(d.src, ProjectiveModule) and isinstance(d.dst, ProjectiveModule):
            ranks[deg] = rank(hom_precompose_matrix(d, y))
        else:
            ranks[deg] = _generic_precompose_rank(d, y)
    return {deg: dims[deg] - ranks.get(deg, 0) - ranks.get(deg - 1, 0) for deg in w.interior}


def _generic_precompose_rank(d: ModuleHom, y: LeftModule) -> int:
    homs = hom_space(d.dst, y)
    if not homs:
        return 0
    cols = [Matrix(y.field, (h.matrix @ d.matrix).a.reshape(-1, 1).copy(), normalized=True) for h in homs]
    return rank(hstack(cols))


def verify_window(w: ResolutionWindow) -> dict:
    """Projective terms, interior exactness, and exactness of ``Hom(w, A)``."""
    if not w.terms:
        return {"ok": True, "projective": [], "homology": {}, "dual_homology": {}}
    alg = w.terms[0].alg
    proj = [isinstance(t, ProjectiveModule) or is_projective(t, method="cover") for t in w.terms]
    hom = {}
    for deg in w.interior:
        hom[deg] = homology_dim_at(w.diff(deg - 1).matrix, w.diff(deg).matrix)
    dual = hom_complex_homology(w, alg.regular_module)
    ok = all(proj) and not any(hom.values()) and not any(dual.values())
    w.certified = [deg for deg in w.interior if hom[deg] == 0 and dual[deg] == 0]
    return {"ok": ok, "projective": proj, "homology": hom, "dual_homology": dual}


__all__ = [
    "GP_CERTIFIED", "GP_LIKELY", "NOT_GP", "UNKNOWN", "GPVerdict", "WindowError", "default_depth",
    "is_self_injective", "gldim_bounded", "regular_injective_dims", "gorenstein_bound", "ab_test",
    "left_approximation", "complete_window", "verify_window", "hom_complex_homology",
]
