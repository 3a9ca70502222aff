"""Seeded property checks for structural invariants."""

import numpy as np
import pytest

from cleftgp.algebra import (
    cokernel,
    dual_module,
    ext_dim,
    hom_space,
    kernel,
    random_module,
    regular_unit_iso,
    tensor_hom,
    validate_module,
)
from cleftgp.cleft import (
    eta,
    functor_F,
    functor_F_hom,
    functor_G,
    functor_G_hom,
    functor_l,
    functor_q,
    nat_u,
    random_pair,
)
from cleftgp.criteria import quad_to_pair, sample_quads, quotient_condition
from cleftgp.exactla import Matrix
from cleftgp.gp import ab_test

from helpers import ctx_e3, dual_numbers, ext_e2, ext_e5, truncated_cubic, upper_triangular

ALGEBRAS = [dual_numbers, truncated_cubic, upper_triangular]


@pytest.mark.parametrize("make", ALGEBRAS)
def test_constructed_modules_revalidate(make):
    alg = make()
    rng = np.random.default_rng(20)
    for _ in range(10):
        x, y = random_module(alg, rng, 3), random_module(alg, rng, 3)
        for h in hom_space(x, y)[:2]:
            for mod, _ in (kernel(h), cokernel(h)):
                assert validate_module(mod).ok


@pytest.mark.parametrize("make", ALGEBRAS)
def test_regular_tensor_unit(make):
    alg = make()
    rng = np.random.default_rng(21)
    for _ in range(10):
        iso = regular_unit_iso(random_module(alg, rng, 4))
        assert iso.is_iso() and iso.is_equivariant()


@pytest.mark.parametrize("make", ALGEBRAS)
def test_ext_zero_is_hom(make):
    alg = make()
    rng = np.random.default_rng(22)
    for _ in range(10):
        x, y = random_module(alg, rng, 3), random_module(alg, rng, 3)
        assert ext_dim(x, y, 0) == len(hom_space(x, y))


def test_double_dual_natural():
    from cleftgp.algebra import ModuleHom, double_dual_iso
    alg = upper_triangular()
    rng = np.random.default_rng(23)
    for _ in range(10):
        x, y = random_module(alg, rng, 3), random_module(alg, rng, 3)
        ev_x, ev_y = double_dual_iso(x), double_dual_iso(y)
        assert ev_x.is_iso() and ev_x.is_equivariant()
        for h in hom_space(x, y):
            dh = ModuleHom(dual_module(y), dual_module(x), h.matrix.T)
            assert dh.is_equivariant()
            ddh = ModuleHom(ev_x.dst, ev_y.dst, dh.matrix.T)
            assert ddh.is_equivariant()
            assert ddh.matrix @ ev_x.matrix == ev_y.matrix @ h.matrix


def test_tensor_is_functorial():
    alg = dual_numbers()
    m = alg.regular_bimodule
    rng = np.random.default_rng(24)
    for _ in range(10):
        x, y, z = (random_module(alg, rng, 3) for _ in range(3))
        for f in hom_space(x, y)[:2]:
            for g in hom_space(y, z)[:2]:
                assert tensor_hom(m, g @ f).matrix == tensor_hom(m, g).matrix @ tensor_hom(m, f).matrix


def test_eta_natural_on_e5():
    ext = ext_e5()
    rng = np.random.default_rng(25)
    for _ in range(10):
        y, y2 = random_module(ext.base, rng, 2), random_module(ext.base, rng, 2)
        for h in hom_space(y, y2)[:3]:
            fy, fy2 = functor_F(ext, y), functor_F(ext, y2)
            ff = functor_F_hom(ext, y, y2, h.matrix)
            fff = functor_F_hom(ext, fy, fy2, ff)
            assert eta(ext, y2).matrix @ fff == ff @ eta(ext, y).matrix


@pytest.mark.parametrize("make", [ext_e2, ext_e5])
def test_u_natural(make):
    ext = make()
    rng = np.random.default_rng(26)
    for _ in range(8):
        p, p2 = random_pair(ext, rng, 2), random_pair(ext, rng, 2)
        for h in hom_space(p.tmodule, p2.tmodule)[:3]:
            gh = functor_G_hom(p, p2, h.matrix)
            u, u2 = nat_u(p), nat_u(p2)
            le_h = _le_hom(ext, p, p2, h.matrix)
            assert u2.matrix @ gh == le_h @ u.matrix


def _le_hom(ext, p, p2, f):
    from cleftgp.cleft import functor_l_hom
    return functor_l_hom(ext, p.x, p2.x, f)


def test_l_reflects_gp_on_e3():
    c = ctx_e3()
    rng = np.random.default_rng(27)
    for _ in range(15):
        y = random_module(c.r, rng, 3)
        assert ab_test(y).positive == ab_test(functor_l(c.ext, y).tmodule).positive


def test_gp_implies_quotient_condition_on_e3():
    rng = np.random.default_rng(28)
    for q in sample_quads(ctx_e3(), rng, 40, 3, 2):
        p = quad_to_pair(q)
        if ab_test(p.tmodule).certified:
            c2 = quotient_condition(p)
            assert c2["q_gp"].positive and c2["qu_mono"]
