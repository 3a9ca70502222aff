"""Small algebras and extensions built directly, independent of the file format."""

import functools
import inspect

from cleftgp.algebra import Bimodule, LeftModule, algebra_from_products
from cleftgp.cleft import ThetaData, build_T
from cleftgp.criteria import build_morita_context
from cleftgp.exactla import Field, Matrix

GF7 = Field(7)


def memo(fn):
    """Memoise on the bound arguments with defaults applied, so f() and f(7) share a result."""
    sig = inspect.signature(fn)
    store = {}

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        bound = sig.bind(*args, **kwargs)
        bound.apply_defaults()
        key = tuple(bound.arguments.items())
        if key not in store:
            store[key] = fn(*args, **kwargs)
        return store[key]
    return wrapper


def mat(rows, fld=GF7, ncols=None):
    return Matrix.from_rows(fld, rows, ncols=ncols)


@memo
def field_algebra(p=7):
    return algebra_from_products(Field(p), 1, {(0, 0): [1]}, [1], name="k")


@memo
def dual_numbers(p=7):
    return algebra_from_products(Field(p), 2, {(0, 0): [1, 0], (0, 1): [0, 1], (1, 0): [0, 1], (1, 1): [0, 0]},
                                 [1, 0], name="D")


@memo
def truncated_cubic(p=7):
    return algebra_from_products(Field(p), 3, {(0, 0): [1, 0, 0], (0, 1): [0, 1, 0], (1, 0): [0, 1, 0],
                                               (0, 2): [0, 0, 1], (2, 0): [0, 0, 1], (1, 1): [0, 0, 1]},
                                 [1, 0, 0], name="N3")


@memo
def upper_triangular(p=7):
    """Basis e11, e12, e22."""
    return algebra_from_products(Field(p), 3, {(0, 0): [1, 0, 0], (0, 1): [0, 1, 0], (1, 2): [0, 1, 0],
                                               (2, 2): [0, 0, 1]}, [1, 0, 1], name="T2")


def t2_simple(i, p=7):
    """Simple module at vertex 1 (i = 0, projective) or vertex 2 (i = 1, the source simple)."""
    alg = upper_triangular(p)
    fld = alg.field
    acts = [Matrix.zeros(fld, 1, 1) for _ in range(3)]
    acts[0 if i == 0 else 2] = Matrix.identity(fld, 1)
    return LeftModule(alg, acts, name=f"S{i + 1}")


def dual_simple(p=7):
    alg = dual_numbers(p)
    fld = alg.field
    return LeftModule(alg, [Matrix.identity(fld, 1), Matrix.zeros(fld, 1, 1)], name="S")


def identity_bimodule(r, n):
    fld = r.field
    return Bimodule(r, r, [Matrix.identity(fld, n)], [Matrix.identity(fld, n)], name=f"k{n}")


@memo
def ext_e1():
    k = field_algebra()
    return build_T(ThetaData.zero(k, identity_bimodule(k, 0)), name="E1")


@memo
def ext_e2():
    k = field_algebra()
    return build_T(ThetaData.zero(k, identity_bimodule(k, 1)), name="E2")


@memo
def ext_e5():
    k = field_algebra()
    m = identity_bimodule(k, 2)
    theta = mat([[0, 0, 0, 0], [1, 0, 0, 0]])
    return build_T(ThetaData.from_k_level(k, m, theta), name="E5")


@memo
def ctx_e3():
    a, b = dual_numbers(), field_algebra()
    m = Bimodule(a, b, list(a.left_regular), [Matrix.identity(GF7, 2)], name="M")
    return build_morita_context(a, b, m, None, name="E3")


@memo
def ctx_e4():
    k = field_algebra()
    return build_morita_context(k, k, identity_bimodule(k, 1), identity_bimodule(k, 1), name="E4")


def zero_of(alg):
    from cleftgp.algebra import zero_module
    return zero_module(alg)


def simple_k(alg=None):
    alg = alg or field_algebra()
    return LeftModule(alg, [Matrix.identity(alg.field, 1)], name="k")


# acceptance results, one line per criterion, printed at the end of the session
ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE[criterion] = line
    print(line)
