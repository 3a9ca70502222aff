"""Tensor products over an algebra, realised as explicit quotients of k-tensors.

Every tensor product stores a projection from the k-level tensor space (basis
ordered as in ``numpy.kron``: second factor fastest) and a section of it, so
maps between tensor products are ``proj_dst @ kron(f, g) @ section_src``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..exactla import Matrix, hstack, image_basis, kron, quotient_map
from .core import AlgebraMismatch, Bimodule, LeftModule, ModuleHom


@dataclass(frozen=True, eq=False)
class TensorProduct:
    """``m (x)_R x`` with its quotient data."""

    m: Bimodule
    x: LeftModule
    module: LeftModule
    proj: Matrix      # dim(module) x (dim m * dim x)
    section: Matrix   # (dim m * dim x) x dim(module)
    relations: Matrix

    @property
    def dim(self) -> int:
        return self.module.dim

    def elementary(self, a: Matrix, b: Matrix) -> Matrix:
        """Coordinates of ``a (x) b``."""
        return self.proj @ kron(a, b)


@dataclass(frozen=True, eq=False)
class BimoduleTensor:
    """``m (x)_R n`` as a bimodule, with its quotient data."""

    m: Bimodule
    n: Bimodule
    bimodule: Bimodule
    proj: Matrix
    section: Matrix


def _relations(m: Bimodule, right_ops, fld) -> Matrix:
    dm = m.dim
    dx = right_ops[0].rows if right_ops else 0
    alg = m.right_alg
    eye_m = Matrix.identity(fld, dm)
    eye_x = Matrix.identity(fld, dx)
    blocks = [kron(m.right_action[g], eye_x) - kron(eye_m, right_ops[g]) for g in alg.generators]
    if not blocks or dm * dx == 0:
        return Matrix.zeros(fld, dm * dx, 0)
    return image_basis(hstack(blocks))


def tensor_over(m: Bimodule, x: LeftModule) -> TensorProduct:
    """``m (x)_R x`` as a left module over the left algebra of ``m``.

    Cached per pair of objects, so repeated functor applications return the
    very same module and comparisons of iterated tensors are exact.
    """
    if m.right_alg is not x.alg:
        raise AlgebraMismatch("tensor_over needs right algebra of m equal to the algebra of x")
    cache = m.__dict__.setdefault("_tensor_cache", {})
    hit = cache.get(id(x))
    if hit is not None and hit[0] is x:
        return hit[1]
    fld = x.field
    rel = _relations(m, x.action, fld)
    n = m.dim * x.dim
    proj, section = quotient_map(rel if rel.cols else Matrix.zeros(fld, n, 0))
    eye_x = Matrix.identity(fld, x.dim)
    d = proj.rows
    if d:
        action = [proj @ kron(a, eye_x) @ section for a in m.left_action]
    else:
        action = [Matrix.zeros(fld, 0, 0)] * m.left_alg.dim
    name = f"{m.name}(x){x.name}" if m.name and x.name else ""
    out = TensorProduct(m, x, LeftModule(m.left_alg, action, name=name), proj, section, rel)
    cache[id(x)] = (x, out)
    return out


def tensor_bimodules(m: Bimodule, n: Bimodule) -> BimoduleTensor:
    """``m (x)_R n`` with the outer left and right actions."""
    if m.right_alg is not n.left_alg:
        raise AlgebraMismatch("tensor_bimodules needs right algebra of m equal to left algebra of n")
    cache = m.__dict__.setdefault("_bitensor_cache", {})
    hit = cache.get(id(n))
    if hit is not None and hit[0] is n:
        return hit[1]
    fld = m.field
    rel = _relations(m, n.left_action, fld)
    size = m.dim * n.dim
    proj, section = quotient_map(rel if rel.cols else Matrix.zeros(fld, size, 0))
    eye_m = Matrix.identity(fld, m.dim)
    eye_n = Matrix.identity(fld, n.dim)
    d = proj.rows
    zero = Matrix.zeros(fld, 0, 0)
    left = [proj @ kron(a, eye_n) @ section if d else zero for a in m.left_action]
    right = [proj @ kron(eye_m, b) @ section if d else zero for b in n.right_action]
    name = f"{m.name}(x){n.name}" if m.name and n.name else ""
    out = BimoduleTensor(m, n, Bimodule(m.left_alg, n.right_alg, left, right, name=name), proj, section)
    cache[id(n)] = (n, out)
    return out


def induced(src: TensorProduct | BimoduleTensor, dst: TensorProduct | BimoduleTensor, f: Matrix, g: Matrix) -> Matrix:
    """Matrix of ``f (x) g`` between two tensor products."""
    if src.proj.rows == 0 or dst.proj.rows == 0:
        return Matrix.zeros(f.field, dst.proj.rows, src.proj.rows)
    return dst.proj @ kron(f, g) @ src.section


def tensor_hom(m: Bimodule, h: ModuleHom) -> ModuleHom:
    """``1_m (x) h`` as a module homomorphism."""
    s, t = tensor_over(m, h.src), tensor_over(m, h.dst)
    return ModuleHom(s.module, t.module, induced(s, t, Matrix.identity(m.field, m.dim), h.matrix))


def assoc(m: Bimodule, n: Bimodule, x: LeftModule) -> Matrix:
    """The identification ``m (x) (n (x) x) -> (m (x) n) (x) x``."""
    inner = tensor_over(n, x)
    left = tensor_over(m, inner.module)
    mn = tensor_bimodules(m, n)
    right = tensor_over(mn.bimodule, x)
    fld = x.field
    if left.dim == 0 or right.dim == 0:
        return Matrix.zeros(fld, right.dim, left.dim)
    eye_m = Matrix.identity(fld, m.dim)
    eye_x = Matrix.identity(fld, x.dim)
    return right.proj @ kron(mn.proj, eye_x) @ kron(eye_m, inner.section) @ left.section


def regular_unit_iso(x: LeftModule) -> ModuleHom:
    """The natural iso ``R (x)_R x -> x``, ``r (x) v -> r v``."""
    alg = x.alg
    t = tensor_over(alg.regular_bimodule, x)
    fld = x.field
    if t.dim == 0:
        return ModuleHom(t.module, x, Matrix.zeros(fld, x.dim, 0))
    # k-level map: e_i (x) v -> rho(b_i) v
    k_level = hstack([x.action[i] for i in range(alg.dim)])
    return ModuleHom(t.module, x, k_level @ t.section)


__all__ = ["TensorProduct", "BimoduleTensor", "tensor_over", "tensor_bimodules", "induced", "tensor_hom", "assoc",
           "regular_unit_iso"]
