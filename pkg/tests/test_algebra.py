import numpy as np
import pytest

from cleftgp.algebra import (
    EXCEEDS,
    Algebra,
    Bimodule,
    LeftModule,
    ModuleHom,
    RadicalUnavailable,
    cokernel,
    direct_sum,
    double_dual_iso,
    dual_module,
    ext_dim,
    ext_dims,
    find_isomorphism,
    free_module,
    hom_space,
    image,
    is_injective,
    is_projective,
    kernel,
    minimal_free_resolution,
    minimal_resolution,
    pd_bounded,
    primitive_idempotents,
    projective_cover,
    radical,
    random_module,
    regular_unit_iso,
    simple_modules,
    syzygy,
    tensor_over,
    tor_dim,
    tor_dims,
    validate_algebra,
    validate_module,
    zero_module,
)
from cleftgp.exactla import Field, Matrix, in_span, rank

from helpers import (
    GF7,
    dual_numbers,
    dual_simple,
    field_algebra,
    identity_bimodule,
    mat,
    t2_simple,
    truncated_cubic,
    upper_triangular,
)


def test_validate_examples():
    assert validate_algebra(field_algebra()).ok
    assert validate_algebra(dual_numbers()).ok
    assert validate_algebra(upper_triangular()).ok


def test_nonassociative_constants_rejected():
    # basis 1, a, b with a*a = b, a*b = 0, b*a = 1: (aa)a = 1 but a(aa) = 0
    c = np.zeros((3, 3, 3), dtype=np.int64)
    for i in range(3):
        c[0, i, i] = c[i, 0, i] = 1
    c[1, 1, 2] = 1
    c[2, 1, 0] = 1
    rep = validate_algebra(Algebra(GF7, c, [1, 0, 0]))
    assert not rep.ok
    assert rep.witness is not None and "associativity" in rep.failures[0]


def test_bad_unit_rejected():
    c = dual_numbers().mult
    assert not validate_algebra(Algebra(GF7, c, [0, 1])).ok


def test_opposite():
    d = dual_numbers()
    assert (d.opposite.mult == d.mult).all()
    t = upper_triangular()
    assert t.opposite.opposite is t
    # e11 * e12 = e12 becomes e12 * e11 = e12 in the opposite
    assert t.opposite.mult[1, 0, 1] == 1 and t.opposite.mult[0, 1, 1] == 0


def test_hom_space_examples():
    k = field_algebra()
    assert len(hom_space(k.regular_module, k.regular_module)) == 1
    assert len(hom_space(t2_simple(0), t2_simple(1))) == 0
    d = dual_numbers()
    x = random_module(d, np.random.default_rng(1), 4)
    assert len(hom_space(d.regular_module, x)) == x.dim


def test_homs_are_equivariant():
    rng = np.random.default_rng(5)
    t = upper_triangular()
    for _ in range(10):
        x, y = random_module(t, rng, 3), random_module(t, rng, 3)
        for h in hom_space(x, y):
            assert h.is_equivariant()


def test_kernel_cokernel_examples():
    d = dual_numbers()
    a = d.regular_module
    assert cokernel(a.identity())[0].dim == 0
    z = a.zero_to(a)
    assert kernel(z)[0].dim == a.dim
    xmul = ModuleHom(a, a, d.right_mult(d.basis_element(1)))
    assert xmul.is_equivariant()
    c, proj = cokernel(xmul)
    assert c.dim == 1 and proj.is_equivariant()
    assert find_isomorphism(c, dual_simple()) is not None
    im, inc = image(xmul)
    assert im.dim == 1 and inc.is_mono()


def test_tensor_examples():
    k = field_algebra()
    x = random_module(dual_numbers(), np.random.default_rng(2), 3)
    iso = regular_unit_iso(x)
    assert iso.is_iso() and iso.is_equivariant()
    assert tensor_over(identity_bimodule(k, 0), LeftModule(k, [Matrix.identity(GF7, 3)])).dim == 0
    assert tensor_over(identity_bimodule(k, 2), LeftModule(k, [Matrix.identity(GF7, 3)])).dim == 6


def test_dual_examples():
    t = upper_triangular()
    assert dual_module(zero_module(t)).dim == 0
    x = random_module(t, np.random.default_rng(4), 4)
    assert dual_module(x).dim == x.dim
    iso = double_dual_iso(x)
    assert iso.is_iso() and iso.is_equivariant()
    # the simple projective dualises to a simple injective over the opposite
    s1d = dual_module(t2_simple(0))
    assert s1d.alg is t.opposite and is_injective(s1d)


def test_radical_examples():
    k = field_algebra()
    kk = Algebra(GF7, np.array([[[1, 0], [0, 0]], [[0, 0], [0, 1]]]), [1, 1])
    assert radical(kk).cols == 0
    d = dual_numbers()
    r = radical(d)
    assert r.cols == 1 and in_span(r, d.basis_element(1))
    t = upper_triangular()
    r = radical(t)
    assert r.cols == 1 and in_span(r, t.basis_element(1))
    assert radical(k).cols == 0


def test_radical_needs_large_characteristic():
    d = dual_numbers(2)
    with pytest.raises(RadicalUnavailable):
        radical(d)


def test_radical_override_is_used():
    d = dual_numbers(2)
    given = Algebra(d.field, d.mult, d.unit, radical=Matrix.column(d.field, [0, 1]))
    assert radical(given).cols == 1


def test_idempotents_and_covers():
    t = upper_triangular()
    idem = primitive_idempotents(t)
    assert len(idem.representatives) == 2
    assert len(simple_modules(t)) == 2
    for s in simple_modules(truncated_cubic()):
        assert s.dim == 1
    x = random_module(t, np.random.default_rng(8), 4)
    p, cover = projective_cover(x)
    assert cover.is_epi() and cover.is_equivariant()


def test_resolution_examples():
    a = dual_numbers().regular_module
    w = minimal_resolution(a, 3)
    assert pd_bounded(a, 3) == 0
    s = dual_simple()
    w = minimal_free_resolution(s, 4)
    assert all(t.dim == 2 for t in w.terms)
    assert syzygy(s, 1).dim == 1 and syzygy(s, 3).dim == 1
    assert pd_bounded(t2_simple(1), 5) == 1
    assert pd_bounded(s, 10) == EXCEEDS


def test_resolution_differentials_land_in_radical():
    t = truncated_cubic()
    rng = np.random.default_rng(11)
    for _ in range(5):
        x = random_module(t, rng, 4)
        w = minimal_resolution(x, 3)
        for d in w.differentials:
            assert d.is_equivariant()
        h = w.homology()
        assert not any(h.values())


def test_ext_examples():
    d = dual_numbers()
    s = dual_simple()
    assert ext_dims(d.regular_module, s, 3)[1:] == [0, 0, 0]
    assert ext_dim(s, s, 1) == 1
    assert ext_dims(s, s, 4) == [1, 1, 1, 1, 1]
    rng = np.random.default_rng(6)
    for _ in range(5):
        x, y = random_module(d, rng, 3), random_module(d, rng, 3)
        assert ext_dim(x, y, 0) == len(hom_space(x, y))


def test_tor_examples():
    d = dual_numbers()
    s = dual_simple()
    reg = d.regular_bimodule
    assert tor_dim(reg, s, 0) == tensor_over(reg, s).dim
    assert tor_dims(reg, d.regular_module, 3)[1:] == [0, 0, 0]
    rad = Bimodule(d, d, [Matrix.identity(GF7, 1), Matrix.zeros(GF7, 1, 1)],
                   [Matrix.identity(GF7, 1), Matrix.zeros(GF7, 1, 1)], name="rad")
    assert tor_dim(rad, s, 1) == 1


def test_projectivity_examples():
    d = dual_numbers()
    assert is_projective(d.regular_module)
    assert is_projective(zero_module(d))
    assert not is_projective(dual_simple())
    assert is_projective(dual_simple(), method="section") is False
    assert is_projective(t2_simple(0)) and not is_projective(t2_simple(1))


def test_projectivity_methods_agree():
    rng = np.random.default_rng(9)
    for alg in (upper_triangular(), dual_numbers()):
        for _ in range(10):
            x = random_module(alg, rng, 3)
            assert is_projective(x, "cover") == is_projective(x, "section")


def test_injectivity_examples():
    assert is_injective(dual_numbers().regular_module)
    assert not is_injective(dual_simple())
    k = field_algebra()
    assert is_injective(LeftModule(k, [Matrix.identity(GF7, 2)]))


def test_projective_iff_ext1_vanishes_on_sample():
    t = upper_triangular()
    rng = np.random.default_rng(10)
    sample = [random_module(t, rng, 3) for _ in range(8)] + simple_modules(t)
    for x in sample:
        vanishes = all(ext_dim(x, y, 1) == 0 for y in sample)
        assert is_projective(x) == vanishes


def test_random_modules_validate():
    rng = np.random.default_rng(12)
    for alg in (upper_triangular(), truncated_cubic(), dual_numbers()):
        for _ in range(10):
            assert validate_module(random_module(alg, rng, 4)).ok


def test_direct_sum_structure():
    d = dual_numbers()
    ds = direct_sum([d.regular_module, dual_simple()])
    assert ds.module.dim == 3
    for inj, pr in zip(ds.injections, ds.projections):
        assert (pr.matrix @ inj.matrix) == Matrix.identity(GF7, inj.src.dim)
    assert free_module(d, 2).dim == 4
