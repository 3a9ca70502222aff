"""Minimal projective resolutions, Ext, Tor, projective dimension and duals."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..exactla import Matrix, hstack, image_basis, in_span, rank, solve, vstack
from .core import (
    Bimodule,
    LeftModule,
    ModuleHom,
    dual_module,
    hom_space,
    image,
    kernel,
    zero_module,
)
from .structure import ProjectiveModule, primitive_idempotents, projective_cover, radical_of_module

EXCEEDS = "exceeds"


@dataclass
class ResolutionWindow:
    """A bounded piece of a complex of projectives, in cohomological degrees.

    ``terms[k]`` sits in degree ``start + k`` and ``differentials[k]`` maps
    ``terms[k] -> terms[k + 1]``. A left resolution of ``x`` ending in degree
    0 carries its ``augmentation: terms[-1] -> x``.
    """

    terms: list[LeftModule]
    differentials: list[ModuleHom]
    start: int = 0
    augmentation: ModuleHom | None = None
    is_minimal: bool = False
    certified: list[int] = dc_field(default_factory=list)
    finite_length: bool = False
    center: int | None = None

    def __post_init__(self):
        if self.terms and len(self.differentials) != len(self.terms) - 1:
            raise ValueError("need one differential between each pair of consecutive terms")

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.terms))

    def term(self, degree: int) -> LeftModule:
        return self.terms[degree - self.start]

    def diff(self, degree: int) -> ModuleHom:
        """The differential leaving ``degree``."""
        return self.differentials[degree - self.start]

    @property
    def interior(self) -> list[int]:
        return list(self.degrees)[1:-1]

    def homology(self) -> dict[int, int]:
        """Homology dimension at each interior degree."""
        from ..exactla import homology_dim_at
        return {deg: homology_dim_at(self.diff(deg - 1).matrix, self.diff(deg).matrix) for deg in self.interior}


class _ResolutionState:
    def __init__(self, x: LeftModule):
        p0, aug = projective_cover(x)
        k, inc = kernel(aug)
        self.x = x
        self.projectives: list[ProjectiveModule] = [p0]
        self.diffs: list[ModuleHom] = []          # diffs[k-1]: P_k -> P_{k-1}
        self.augmentation = aug
        self.syzygy = k
        self.inclusion = inc                        # syzygy -> P_last

    def extend_to(self, depth: int) -> None:
        while len(self.projectives) <= depth and self.syzygy.dim > 0:
            p, cover = projective_cover(self.syzygy)
            d = self.inclusion @ cover
            target = self.projectives[-1]
            rad = radical_of_module(target)
            if d.matrix.cols and not d.matrix.is_zero():
                if rad.cols == 0 or not in_span(rad, d.matrix):
                    raise AssertionError("differential of a minimal resolution leaves the radical")
            k, inc = kernel(cover)
            self.projectives.append(p)
            self.diffs.append(ModuleHom(p, target, d.matrix))
            self.syzygy = k
            # the syzygy sits inside the new projective
            self.inclusion = inc

    @property
    def terminated(self) -> bool:
        return self.syzygy.dim == 0


def _state(x: LeftModule) -> _ResolutionState:
    st = x.__dict__.get("_min_res")
    if st is None:
        st = _ResolutionState(x)
        x.__dict__["_min_res"] = st
    return st


def minimal_resolution(x: LeftModule, depth: int) -> ResolutionWindow:
    """Minimal projective resolution ``P_depth -> ... -> P_0 -> x``.

    Stops early when a syzygy vanishes (``finite_length`` is then set and the
    window is shorter). Terms are placed in degrees ``-len+1 .. 0``.
    """
    st = _state(x)
    st.extend_to(depth)
    n = min(depth, len(st.projectives) - 1)
    projs = st.projectives[: n + 1]
    terms = list(reversed(projs))
    diffs = [st.diffs[k - 1] for k in range(n, 0, -1)]
    finite = st.terminated and n == len(st.projectives) - 1
    return ResolutionWindow(terms, diffs, start=-n, augmentation=st.augmentation, is_minimal=True,
                            certified=list(range(-n + 1, 0)), finite_length=finite)


minimal_free_resolution = minimal_resolution


def syzygy(x: LeftModule, k: int) -> LeftModule:
    """The k-th syzygy of ``x`` in its minimal resolution."""
    if k == 0:
        return x
    st = _state(x)
    st.extend_to(k)
    if len(st.projectives) < k:
        return zero_module(x.alg)
    if len(st.projectives) == k:
        return st.syzygy
    return image(st.diffs[k - 1])[0]


def pd_bounded(x: LeftModule, bound: int):
    """Projective dimension if at most ``bound``, else ``EXCEEDS``."""
    if x.dim == 0:
        return 0
    st = _state(x)
    st.extend_to(bound + 1)
    if st.terminated and len(st.projectives) - 1 <= bound:
        return len(st.projectives) - 1
    return EXCEEDS


# -- Hom and tensor on complexes of projectives --------------------------------

def _eY(y: LeftModule, i: int) -> Matrix:
    cache = y.__dict__.setdefault("_idem_images", {})
    if i not in cache:
        e = primitive_idempotents(y.alg).elements[i]
        cache[i] = image_basis(y.act(e)) if y.dim else Matrix.zeros(y.field, 0, 0)
    return cache[i]


def hom_from_projective_dim(p: ProjectiveModule, y: LeftModule) -> int:
    return sum(_eY(y, i).cols for i in p.summands)


def hom_precompose_matrix(d: ModuleHom, y: LeftModule) -> Matrix:
    """Matrix of ``Hom(P', y) -> Hom(P, y), phi -> phi o d`` for ``d: P -> P'``.

    Domain coordinates are ``(+)_l e_l y``; the target is embedded in ``y^r``.
    """
    p, q = d.src, d.dst
    fld = y.field
    cols_per_l = [_eY(y, i) for i in q.summands]
    ncols = sum(c.cols for c in cols_per_l)
    nrows = y.dim * len(p.summands)
    if ncols == 0 or nrows == 0:
        return Matrix.zeros(fld, nrows, ncols)
    rows = []
    for j in range(len(p.summands)):
        img = d.matrix @ p.generator(j)
        row = []
        for l, el in enumerate(cols_per_l):
            c = q.component(img, l)
            row.append(y.act(c) @ el)
        rows.append(hstack(row))
    return vstack(rows)


def _tensor_precompute(m: Bimodule, i: int) -> Matrix:
    cache = m.__dict__.setdefault("_idem_images_right", {})
    if i not in cache:
        e = primitive_idempotents(m.right_alg).elements[i]
        cache[i] = image_basis(m.act_right(e)) if m.dim else Matrix.zeros(m.field, 0, 0)
    return cache[i]


def tensor_projective_dim(m: Bimodule, p: ProjectiveModule) -> int:
    return sum(_tensor_precompute(m, i).cols for i in p.summands)


def tensor_differential_matrix(m: Bimodule, d: ModuleHom) -> Matrix:
    """Matrix of ``1_M (x) d: M (x) P -> M (x) P'`` using ``M (x) A e = M e``."""
    p, q = d.src, d.dst
    fld = m.field
    dom = [_tensor_precompute(m, i) for i in p.summands]
    ncols = sum(c.cols for c in dom)
    nrows = m.dim * len(q.summands)
    if ncols == 0 or nrows == 0:
        return Matrix.zeros(fld, nrows, ncols)
    cols = []
    for j, fj in enumerate(dom):
        img = d.matrix @ p.generator(j)
        blocks = [m.act_right(q.component(img, l)) @ fj for l in range(len(q.summands))]
        cols.append(vstack(blocks))
    return hstack(cols)


def ext_dims(x: LeftModule, y: LeftModule, max_degree: int) -> list[int]:
    """``[dim Ext^0(x, y), ..., dim Ext^max_degree(x, y)]``."""
    if x.alg is not y.alg:
        raise ValueError("ext needs modules over one algebra")
    st = _state(x)
    st.extend_to(max_degree + 1)
    projs = st.projectives
    ranks_in = {}   # rank of d_k^*: Hom(P_{k-1}) -> Hom(P_k)
    for k in range(1, min(max_degree + 1, len(projs) - 1) + 1):
        ranks_in[k] = rank(hom_precompose_matrix(st.diffs[k - 1], y))
    out = []
    for k in range(max_degree + 1):
        if k >= len(projs):
            out.append(0)
            continue
        dim_hom = hom_from_projective_dim(projs[k], y)
        out.append(dim_hom - ranks_in.get(k + 1, 0) - ranks_in.get(k, 0))
    return out


def ext_dim(x: LeftModule, y: LeftModule, i: int) -> int:
    return ext_dims(x, y, i)[i]


def tor_dims(m: Bimodule, x: LeftModule, max_degree: int) -> list[int]:
    """``[dim Tor_0(m, x), ..., dim Tor_max_degree(m, x)]``."""
    if m.right_alg is not x.alg:
        raise ValueError("tor needs right algebra of m equal to the algebra of x")
    st = _state(x)
    st.extend_to(max_degree + 1)
    projs = st.projectives
    ranks = {}   # rank of 1 (x) d_k : M(x)P_k -> M(x)P_{k-1}
    for k in range(1, min(max_degree + 1, len(projs) - 1) + 1):
        ranks[k] = rank(tensor_differential_matrix(m, st.diffs[k - 1]))
    out = []
    for k in range(max_degree + 1):
        if k >= len(projs):
            out.append(0)
            continue
        out.append(tensor_projective_dim(m, projs[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0))
    return out


def tor_dim(m: Bimodule, x: LeftModule, i: int) -> int:
    return tor_dims(m, x, i)[i]


# -- projectivity ------------------------------------------------------------------

def is_projective(x: LeftModule, method: str = "cover") -> bool:
    """Projectivity test.

    ``"cover"`` compares dimensions of x and its projective cover;
    ``"section"`` solves for an equivariant section of the evaluation map
    ``A (x)_k x -> x``.
    """
    if x.dim == 0:
        return True
    if method == "cover":
        p, _ = projective_cover(x)
        return p.dim == x.dim
    if method == "section":
        return _section_exists(x)
    raise ValueError(f"unknown method {method!r}")


def _section_exists(x: LeftModule) -> bool:
    # s = sum c_jk (phi_k in slot j), phi_k a basis of Hom(x, A); need eps o s = id
    fld = x.field
    alg = x.alg
    d = x.dim
    phis = hom_space(x, alg.regular_module)
    if not phis:
        return False
    cols = []
    for j in range(d):
        ej = Matrix.unit_column(fld, d, j)
        for phi in phis:
            t = hstack([x.act(phi.matrix[:, i:i + 1]) @ ej for i in range(d)])
            cols.append(Matrix(fld, t.a.reshape(-1, 1).copy(), normalized=True))
    target = Matrix.identity(fld, d)
    return solve(hstack(cols), Matrix(fld, target.a.reshape(-1, 1).copy(), normalized=True)) is not None


def is_injective(x: LeftModule) -> bool:
    return is_projective(dual_module(x))


def injective_dimension_bounded(x: LeftModule, bound: int):
    return pd_bounded(dual_module(x), bound)


# -- ring duals ----------------------------------------------------------------------

@dataclass
class RingDual:
    """``Hom_A(x, A)`` as a left module over the opposite algebra."""

    module: LeftModule
    homs: list[ModuleHom]   # basis, matched with the module's coordinates


def ring_dual(x: LeftModule) -> RingDual:
    cached = x.__dict__.get("_ring_dual")
    if cached is not None:
        return cached
    alg = x.alg
    fld = x.field
    homs = hom_space(x, alg.regular_module)
    op = alg.opposite
    h = len(homs)
    if h == 0:
        out = RingDual(zero_module(op), [])
    else:
        basis = hstack([Matrix(fld, f.matrix.a.reshape(-1, 1).copy(), normalized=True) for f in homs])
        action = []
        for i in range(alg.dim):
            r = alg.right_regular[i]
            imgs = hstack([Matrix(fld, (r @ f.matrix).a.reshape(-1, 1).copy(), normalized=True) for f in homs])
            coords = solve(basis, imgs)
            if coords is None:
                raise AssertionError("right multiplication left Hom(x, A)")
            action.append(coords)
        out = RingDual(LeftModule(op, action, name=f"{x.name}*" if x.name else ""), homs)
    x.__dict__["_ring_dual"] = out
    return out


def reflexivity(x: LeftModule) -> dict:
    """Whether the evaluation map ``x -> x**`` is an isomorphism.

    The evaluation is injective iff the dual basis separates points, and
    an iso iff additionally ``dim x** == dim x``.
    """
    if x.dim == 0:
        return {"reflexive": True, "eval_rank": 0, "dim": 0, "double_dual_dim": 0}
    d1 = ring_dual(x)
    if not d1.homs:
        return {"reflexive": False, "eval_rank": 0, "dim": x.dim, "double_dual_dim": 0}
    ev = vstack([f.matrix for f in d1.homs])
    ev_rank = rank(ev)
    dd = len(hom_space(d1.module, d1.module.alg.regular_module)) if d1.module.dim else 0
    return {"reflexive": ev_rank == x.dim and dd == x.dim, "eval_rank": ev_rank, "dim": x.dim,
            "double_dual_dim": dd}


__all__ = [
    "EXCEEDS", "ResolutionWindow", "minimal_resolution", "minimal_free_resolution", "syzygy", "pd_bounded",
    "hom_precompose_matrix", "hom_from_projective_dim", "tensor_differential_matrix", "tensor_projective_dim",
    "ext_dims", "ext_dim", "tor_dims", "tor_dim", "is_projective", "is_injective", "injective_dimension_bounded",
    "RingDual", "ring_dual", "reflexivity",
]
