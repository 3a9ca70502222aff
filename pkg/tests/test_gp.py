import numpy as np
import pytest

from cleftgp.algebra import (
    EXCEEDS,
    ModuleHom,
    ResolutionWindow,
    algebra_from_products,
    is_projective,
    random_module,
)
from cleftgp.exactla import Matrix
from cleftgp.gp import (
    GP_CERTIFIED,
    GP_LIKELY,
    NOT_GP,
    WindowError,
    ab_test,
    complete_window,
    default_depth,
    gldim_bounded,
    gorenstein_bound,
    is_self_injective,
    verify_window,
)

from helpers import GF7, dual_numbers, dual_simple, field_algebra, t2_simple, truncated_cubic, upper_triangular


def two_loop_local():
    """k<x, y>/(x, y)^2: local, radical square zero, not Gorenstein."""
    return algebra_from_products(GF7, 3, {(0, 0): [1, 0, 0], (0, 1): [0, 1, 0], (1, 0): [0, 1, 0],
                                          (0, 2): [0, 0, 1], (2, 0): [0, 0, 1]}, [1, 0, 0], name="L")


def test_self_injective_examples():
    assert is_self_injective(dual_numbers())
    assert not is_self_injective(upper_triangular())
    assert is_self_injective(field_algebra())


def test_gldim_examples():
    assert gldim_bounded(field_algebra(), 4) == 0
    assert gldim_bounded(upper_triangular(), 4) == 1
    assert gldim_bounded(dual_numbers(), 4) == EXCEEDS


def test_gorenstein_bound():
    assert gorenstein_bound(dual_numbers(), 6) == 0
    assert gorenstein_bound(upper_triangular(), 6) == 1
    assert gorenstein_bound(two_loop_local(), 6) is None


def test_default_depth():
    assert default_depth(field_algebra()) == 6
    assert default_depth(upper_triangular()) == 6


def test_oracle_examples():
    d = dual_numbers()
    assert ab_test(d.regular_module).status == GP_CERTIFIED
    v = ab_test(dual_simple(), 6)
    assert v.status == GP_CERTIFIED
    assert v.evidence["ext_to_regular"] == [0] * 6
    v = ab_test(t2_simple(1))
    assert v.status == NOT_GP
    assert v.witness == {"check": "ext", "degree": 1, "dim": 1}


def test_non_gorenstein_simple_is_rejected():
    alg = two_loop_local()
    s = [random_module(alg, np.random.default_rng(0), 1)][0]
    assert ab_test(s).status == NOT_GP
    assert ab_test(alg.regular_module).status == GP_CERTIFIED


def test_depth_must_be_positive():
    with pytest.raises(ValueError):
        ab_test(dual_simple(), 0)


def test_verdict_label():
    v = ab_test(dual_simple(), 6)
    assert v.label() == GP_CERTIFIED
    v.status = GP_LIKELY
    assert v.label() == "GP-likely(6)"


def test_window_of_projective():
    w = complete_window(dual_numbers().regular_module, 2)
    assert verify_window(w)["ok"]
    # x -> x by the identity, padded with zeros
    assert [t.dim for t in w.terms] == [0, 0, 2, 2, 0]
    assert w.diff(0).is_iso()


def test_periodic_window():
    w = complete_window(dual_simple(), 3)
    assert [t.dim for t in w.terms] == [2] * 7
    for d in w.differentials:
        assert d.rank == 1
    rep = verify_window(w)
    assert rep["ok"] and not any(rep["homology"].values())
    assert w.certified == list(w.interior)


def test_zeroed_differential_is_located():
    w = complete_window(dual_simple(), 2)
    diffs = list(w.differentials)
    bad = diffs[1]
    diffs[1] = ModuleHom(bad.src, bad.dst, Matrix.zeros(GF7, bad.dst.dim, bad.src.dim))
    broken = ResolutionWindow(list(w.terms), diffs, start=w.start)
    rep = verify_window(broken)
    assert not rep["ok"]
    assert {deg for deg, h in rep["homology"].items() if h} == {w.start + 1, w.start + 2}


def test_empty_window_is_valid():
    assert verify_window(ResolutionWindow([], [], start=0))["ok"]


def test_window_refuses_non_gp():
    with pytest.raises(WindowError):
        complete_window(t2_simple(1), 2)


@pytest.mark.parametrize("alg", [dual_numbers(), truncated_cubic()])
def test_self_injective_sample_certified_and_windows_verify(alg):
    rng = np.random.default_rng(3)
    for _ in range(10):
        x = random_module(alg, rng, 4)
        assert ab_test(x).status == GP_CERTIFIED
        assert verify_window(complete_window(x, 2))["ok"]


def test_finite_gldim_oracle_matches_projectivity():
    rng = np.random.default_rng(4)
    for _ in range(20):
        x = random_module(upper_triangular(), rng, 4)
        assert ab_test(x).certified == is_projective(x)


def test_verdicts_do_not_downgrade_with_depth():
    rng = np.random.default_rng(5)
    for alg in (dual_numbers(), upper_triangular()):
        for _ in range(8):
            x = random_module(alg, rng, 3)
            shallow, deep = ab_test(x, 3), ab_test(x, 7)
            if shallow.positive:
                assert not deep.negative
