"""Seeded random sampling of small modules."""

from __future__ import annotations

import numpy as np

from ..exactla import Matrix, hstack, image_basis, random_invertible, random_matrix
from .core import Algebra, LeftModule, direct_sum, free_module, quotient_module, submodule, zero_module


def generated_submodule(x: LeftModule, vectors: Matrix) -> Matrix:
    """Basis of the submodule generated by the columns of ``vectors``."""
    if vectors.cols == 0 or x.dim == 0:
        return Matrix.zeros(x.field, x.dim, 0)
    return image_basis(hstack([m @ vectors for m in x.action]))


def _subquotient(alg: Algebra, rng: np.random.Generator) -> LeftModule:
    fld = alg.field
    free = free_module(alg, int(rng.integers(1, 3)))
    gens = random_matrix(fld, rng, free.dim, int(rng.integers(1, 3)))
    u_basis = generated_submodule(free, gens)
    u, inc = submodule(free, u_basis)
    if u.dim == 0 or rng.random() < 0.3:
        return u
    rel = random_matrix(fld, rng, u.dim, int(rng.integers(1, 3)))
    v_basis = generated_submodule(u, rel)
    return quotient_module(u, v_basis)[0]


def random_module(alg: Algebra, rng: np.random.Generator, max_dim: int, min_dim: int = 1,
                  tries: int = 200) -> LeftModule:
    """A random module of dimension in ``[min_dim, max_dim]``.

    Built from subquotients of small free modules, summed and then
    conjugated by a random change of basis.
    """
    if max_dim <= 0:
        return zero_module(alg)
    from .structure import simple_modules
    fld = alg.field
    pieces: list[LeftModule] = []
    total = 0
    for _ in range(tries):
        if total >= min_dim and (rng.random() < 0.5 or total == max_dim):
            break
        cand = _subquotient(alg, rng)
        if cand.dim == 0 or total + cand.dim > max_dim:
            continue
        pieces.append(cand)
        total += cand.dim
    if total < min_dim:
        for s in simple_modules(alg):
            while total + s.dim <= max_dim and total < min_dim:
                pieces.append(s)
                total += s.dim
    if not pieces:
        return zero_module(alg)
    x = pieces[0] if len(pieces) == 1 else direct_sum(pieces).module
    return x.conjugate(random_invertible(fld, rng, x.dim))


__all__ = ["generated_submodule", "random_module"]
