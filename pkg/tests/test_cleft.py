import numpy as np
import pytest

from cleftgp.algebra import (
    Bimodule,
    LeftModule,
    find_isomorphism,
    free_module,
    is_projective,
    random_module,
    tensor_over,
    zero_module,
)
from cleftgp.cleft import (
    PairLawError,
    PairModule,
    ThetaData,
    check_cleft_axioms,
    eta,
    functor_e,
    functor_F,
    functor_G,
    functor_i,
    functor_l,
    functor_q,
    nat_lambda,
    nat_nu,
    nat_nu_prime,
    nat_u,
    pair_to_tmodule,
    random_pair,
    sample_objects,
    tmodule_to_pair,
    validate_theta,
)
from cleftgp.exactla import Matrix, homology_dim_at

from helpers import (
    GF7,
    dual_numbers,
    ext_e1,
    ext_e2,
    ext_e5,
    field_algebra,
    identity_bimodule,
    mat,
    simple_k,
    truncated_cubic,
)


def _same_constants(a, b):
    return a.dim == b.dim and (a.mult == b.mult).all() and (a.unit == b.unit).all()


def test_theta_validation():
    k = field_algebra()
    assert validate_theta(ThetaData.zero(k, identity_bimodule(k, 2))).ok
    assert validate_theta(ext_e5().data).ok


def test_non_associative_theta_rejected():
    k = field_algebra()
    m = identity_bimodule(k, 2)
    # m0 m0 = m1 and m1 m0 = m0: (m0 m0) m0 = m0 but m0 (m0 m0) = m0 m1 = 0
    theta = mat([[0, 0, 1, 0], [1, 0, 0, 0]])
    assert not validate_theta(ThetaData.from_k_level(k, m, theta)).ok


def test_unbalanced_theta_rejected():
    d = dual_numbers()
    m = d.regular_bimodule
    # columns b0b0, b0b1, b1b0, b1b1; x b0 (x) b0 and b0 (x) x b0 must agree
    unbalanced = mat([[0, 0, 1, 0], [0, 0, 0, 0]])
    with pytest.raises(ValueError):
        ThetaData.from_k_level(d, m, unbalanced)


def test_non_equivariant_theta_rejected():
    d = dual_numbers()
    theta = ThetaData.from_k_level(d, d.regular_bimodule, mat([[1, 0, 0, 0], [0, 0, 0, 0]]))
    assert not validate_theta(theta).ok


def test_build_examples():
    assert _same_constants(ext_e1().t, field_algebra())
    assert _same_constants(ext_e2().t, dual_numbers())
    assert _same_constants(ext_e5().t, truncated_cubic())


def test_e5_nilpotent_generator():
    t = ext_e5().t
    x = t.basis_element(1)
    x2 = t.multiply(x, x)
    assert x2 == t.basis_element(2)
    assert t.multiply(x2, x).is_zero()


def test_pair_examples():
    ext = ext_e2()
    k = field_algebra()
    s = PairModule(ext, simple_k(), Matrix.zeros(GF7, 1, 1))
    z = pair_to_tmodule(s)
    assert z.action[1].is_zero()
    reg = PairModule(ext, LeftModule(k, [Matrix.identity(GF7, 2)]), mat([[0, 0], [1, 0]]))
    assert pair_to_tmodule(reg).same_as(ext.t.regular_module)
    back = tmodule_to_pair(ext, ext.t.regular_module)
    assert back.x.dim == 2 and back.alpha.tolist() == [[0, 0], [1, 0]]


def test_pair_law_enforced():
    ext = ext_e2()
    k = field_algebra()
    # alpha = 1 on M (x) k = k: alpha(1 (x) alpha) = 1 but theta = 0
    bad = PairModule(ext, LeftModule(k, [Matrix.identity(GF7, 1)]), mat([[1]]))
    assert not bad.validate().ok
    with pytest.raises(PairLawError):
        pair_to_tmodule(bad)


@pytest.mark.parametrize("make", [ext_e2, ext_e5])
def test_pair_roundtrip(make):
    ext = make()
    rng = np.random.default_rng(0)
    for _ in range(20):
        p = random_pair(ext, rng, 3)
        again = tmodule_to_pair(ext, pair_to_tmodule(p))
        assert again.x.same_as(p.x) and again.alpha == p.alpha


def test_functor_e_and_i():
    ext = ext_e2()
    k = field_algebra()
    assert functor_i(ext, zero_module(k)).dim == 0
    assert functor_i(ext, k.regular_module).alpha.is_zero()
    rng = np.random.default_rng(1)
    for _ in range(10):
        y = random_module(k, rng, 3)
        assert functor_e(functor_i(ext, y)).same_as(y)
    reg = tmodule_to_pair(ext, ext.t.regular_module)
    assert functor_e(reg).dim == 2


@pytest.mark.parametrize("make", [ext_e2, ext_e5])
def test_l_of_regular_is_regular(make):
    ext = make()
    lr = functor_l(ext, ext.base.regular_module)
    assert find_isomorphism(lr.tmodule, ext.t.regular_module) is not None


def test_l_examples():
    ext = ext_e2()
    k = field_algebra()
    assert functor_l(ext, zero_module(k)).dim == 0
    assert functor_l(ext, simple_k()).tmodule.same_as(ext.t.regular_module)


def test_q_examples():
    ext = ext_e2()
    y = simple_k()
    assert functor_q(functor_i(ext, y))[0].same_as(y)
    assert find_isomorphism(functor_q(functor_l(ext, y))[0], y) is not None
    reg = tmodule_to_pair(ext, ext.t.regular_module)
    assert functor_q(reg)[0].dim == 1


def test_F_and_G_examples():
    ext = ext_e2()
    y = LeftModule(field_algebra(), [Matrix.identity(GF7, 2)])
    assert functor_F(ext, y).dim == 2
    iy = functor_i(ext, y)
    assert functor_G(iy).alpha.is_zero()
    reg = tmodule_to_pair(ext, ext.t.regular_module)
    g = functor_G(reg)
    # theta = 0 and M = k: G(X, alpha) = (X, -alpha)
    assert g.alpha == -reg.alpha


def test_u_lambda_examples():
    ext = ext_e2()
    ip = functor_i(ext, simple_k())
    u, lam = nat_u(ip), nat_lambda(ip)
    assert u.matrix.tolist() == [[0], [1]] and lam.matrix.tolist() == [[1, 0]]
    reg = tmodule_to_pair(ext, ext.t.regular_module)
    u, lam = nat_u(reg), nat_lambda(reg)
    assert (lam.matrix @ u.matrix).is_zero()
    assert functor_G(reg).dim + reg.dim == u.dst.dim
    assert homology_dim_at(u.matrix, lam.matrix) == 0


def test_nu_split():
    ext = ext_e5()
    rng = np.random.default_rng(2)
    for _ in range(10):
        y = random_module(ext.base, rng, 3)
        nu, nup = nat_nu(ext, y), nat_nu_prime(ext, y)
        assert nup.matrix @ nu.matrix == Matrix.identity(GF7, functor_F(ext, y).dim)
        assert nu.dst.dim == y.dim + functor_F(ext, y).dim
    z = zero_module(ext.base)
    assert nat_nu(ext, z).matrix.is_zero()


def test_eta_examples():
    ext = ext_e2()
    assert eta(ext, simple_k()).matrix.is_zero()
    e5 = ext_e5()
    w = eta(e5, simple_k())
    assert w.matrix.shape == (2, 4) and not w.matrix.is_zero()
    assert eta(e5, zero_module(e5.base)).matrix.is_zero()


def test_l_and_q_preserve_projectives():
    for ext in (ext_e2(), ext_e5()):
        assert is_projective(functor_l(ext, free_module(ext.base, 2)).tmodule)
        assert is_projective(functor_q(tmodule_to_pair(ext, ext.t.regular_module))[0])


@pytest.mark.parametrize("make", [ext_e1, ext_e2, ext_e5])
def test_axioms_small_sample(make):
    ext = make()
    pairs, modules = sample_objects(ext, 3, 6)
    rep = check_cleft_axioms(ext, pairs, modules)
    assert rep.ok, rep.failures
