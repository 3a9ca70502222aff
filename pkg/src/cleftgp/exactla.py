"""Exact dense linear algebra over GF(p) and the rationals.

Matrices wrap a numpy array. Over GF(p) with small p the array is ``int64``
and every operation reduces modulo p; otherwise entries are Python objects
(``int`` for large primes, ``Fraction`` for the rationals).

Tensor products use one global basis ordering: the basis of ``U (x) V`` is
``(u_i, v_j)`` enumerated with ``j`` fastest, which is what ``numpy.kron``
produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

# p*p*n must stay below 2**63 for int64 matmul
_INT64_PRIME_LIMIT = 46337


class FieldMismatch(ValueError):
    pass


class NotAComplex(ValueError):
    """Raised when two composable maps do not compose to zero."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """A prime field GF(p), or the rationals when ``p`` is None."""

    p: int | None = 7

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def dtype(self):
        if self.p is not None and self.p <= _INT64_PRIME_LIMIT:
            return np.int64
        return object

    def __str__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    def element(self, value) -> int | Fraction:
        """Coerce an int, Fraction or string like ``"3/4"`` into the field."""
        if self.p is None:
            return Fraction(value)
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        return int(value) % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return Fraction(1) / x
        return pow(int(x), -1, self.p)

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        if self.p is None:
            out = np.empty(arr.shape, dtype=object)
            flat = out.reshape(-1)
            for k, v in enumerate(np.asarray(arr, dtype=object).reshape(-1)):
                flat[k] = Fraction(v)
            return out
        if self.dtype is np.int64:
            if arr.dtype == object:
                arr = np.vectorize(lambda v: self.element(v), otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
            return np.mod(arr.astype(np.int64, copy=False), self.p)
        out = np.empty(arr.shape, dtype=object)
        flat = out.reshape(-1)
        for k, v in enumerate(np.asarray(arr, dtype=object).reshape(-1)):
            flat[k] = self.element(v)
        return out

    def _reduce(self, arr: np.ndarray) -> np.ndarray:
        # cheap re-normalization after arithmetic on already-normalized data
        if self.p is None:
            return arr
        return arr % self.p

    def random_array(self, rng: np.random.Generator, shape, low: int = -3, high: int = 3) -> np.ndarray:
        if self.p is None:
            return self.normalize(rng.integers(low, high + 1, size=shape))
        return self.normalize(rng.integers(0, self.p, size=shape))


class Matrix:
    """An immutable matrix over a :class:`Field`."""

    __slots__ = ("field", "a")

    def __init__(self, field: Field, a: np.ndarray, *, normalized: bool = False):
        if a.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if not normalized:
            a = field.normalize(np.asarray(a))
        elif a.dtype != field.dtype and not (field.dtype is object and a.dtype == object):
            a = field.normalize(a)
        a.flags.writeable = False
        self.field = field
        self.a = a

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        if len(rows) == 0:
            return cls.zeros(field, 0, ncols or 0)
        arr = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, row in enumerate(rows):
            if len(row) != arr.shape[1]:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                arr[i, j] = field.element(v)
        return cls(field, arr)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        if field.dtype is object:
            z = Fraction(0) if field.is_rational else 0
            arr = np.full((rows, cols), z, dtype=object)
        else:
            arr = np.zeros((rows, cols), dtype=np.int64)
        return cls(field, arr, normalized=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls.zeros(field, n, n).a.copy()
        for i in range(n):
            m[i, i] = Fraction(1) if field.is_rational else 1
        return cls(field, m, normalized=True)

    @classmethod
    def column(cls, field: Field, values: Iterable) -> "Matrix":
        vals = list(values)
        return cls.from_rows(field, [[v] for v in vals], ncols=1)

    @classmethod
    def unit_column(cls, field: Field, n: int, i: int) -> "Matrix":
        m = cls.zeros(field, n, 1).a.copy()
        m[i, 0] = 1
        return cls(field, m, normalized=False)

    def _wrap(self, arr: np.ndarray) -> "Matrix":
        return Matrix(self.field, self.field._reduce(arr), normalized=True)

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    # -- shape -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.a.T.copy(), normalized=True)

    def __getitem__(self, key) -> "Matrix":
        sub = self.a[key]
        if sub.ndim != 2:
            raise IndexError("use slices that keep both axes")
        return Matrix(self.field, sub.copy(), normalized=True)

    def entry(self, i: int, j: int):
        return self.a[i, j]

    # -- arithmetic --------------------------------------------------------
    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.field.dtype is object and (self.rows == 0 or other.cols == 0 or self.cols == 0):
            return Matrix.zeros(self.field, self.rows, other.cols)
        return self._wrap(self.a @ other.a)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return self._wrap(self.a + other.a)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return self._wrap(self.a - other.a)

    def __neg__(self) -> "Matrix":
        return self._wrap(-self.a)

    def scale(self, c) -> "Matrix":
        return self._wrap(self.a * self.field.element(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.a == other.a))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.a.reshape(-1).tolist())))

    def is_zero(self) -> bool:
        return self.a.size == 0 or not np.any(self.a != 0)

    def tolist(self) -> list[list]:
        if self.field.is_rational:
            return [[str(v) for v in row] for row in self.a.tolist()]
        return [[int(v) for v in row] for row in self.a.tolist()]

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.tolist()})"


def _as_field(mats: Sequence[Matrix]) -> Field:
    fields = {m.field for m in mats}
    if len(fields) != 1:
        raise FieldMismatch(f"mixed fields: {sorted(map(str, fields))}")
    return fields.pop()


def hstack(mats: Sequence[Matrix], rows: int | None = None, field: Field | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, rows or 0, 0)
    f = _as_field(mats)
    return Matrix(f, np.hstack([m.a for m in mats]), normalized=True)


def vstack(mats: Sequence[Matrix], cols: int | None = None, field: Field | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, 0, cols or 0)
    f = _as_field(mats)
    return Matrix(f, np.vstack([m.a for m in mats]), normalized=True)


def block_diag(mats: Sequence[Matrix], field: Field | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, 0, 0)
    f = _as_field(mats)
    out = Matrix.zeros(f, sum(m.rows for m in mats), sum(m.cols for m in mats)).a.copy()
    r = c = 0
    for m in mats:
        out[r:r + m.rows, c:c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Matrix(f, out, normalized=True)


def block(rows: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a block matrix; every block must be given (use zeros)."""
    return vstack([hstack(list(r)) for r in rows])


# -- elimination --------------------------------------------------------------

def rref(m: Matrix) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    field = m.field
    a = m.a.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    p = field.p
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.flatnonzero(col != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = field.inv(a[r, c])
        a[r] = a[r] * inv
        if p is not None:
            a[r] %= p
        colv = a[:, c].copy()
        colv[r] = 0
        others = np.flatnonzero(colv != 0)
        if others.size:
            a[others] = a[others] - np.outer(colv[others], a[r])
            if p is not None:
                a[others] %= p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the right null space of ``m``."""
    n = m.cols
    if m.rows == 0:
        return Matrix.identity(m.field, n)
    r, pivots = rref(m)
    free = [c for c in range(n) if c not in set(pivots)]
    out = Matrix.zeros(m.field, n, len(free)).a.copy()
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, pc in enumerate(pivots):
            out[pc, k] = -r[i, f]
    return Matrix(m.field, out, normalized=False)


def image_basis(m: Matrix) -> Matrix:
    """A subset of the columns of ``m`` forming a basis of its column space."""
    if m.rows == 0 or m.cols == 0:
        return Matrix.zeros(m.field, m.rows, 0)
    _, pivots = rref(m)
    return Matrix(m.field, m.a[:, pivots].copy(), normalized=True)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Some ``x`` with ``a @ x == b``, or None when the system is inconsistent."""
    a._check(b)
    if a.rows != b.rows:
        raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
    n = a.cols
    x = Matrix.zeros(a.field, n, b.cols).a.copy()
    if a.rows == 0:
        return Matrix(a.field, x, normalized=True)
    aug = hstack([a, b])
    r, pivots = rref(aug)
    if pivots and pivots[-1] >= n:
        return None
    for i, pc in enumerate(pivots):
        x[pc] = r[i, n:]
    return Matrix(a.field, x, normalized=True)


def inverse(a: Matrix) -> Matrix:
    if a.rows != a.cols:
        raise ValueError("inverse of a non-square matrix")
    x = solve(a, Matrix.identity(a.field, a.rows))
    if x is None or rank(a) != a.rows:
        raise ZeroDivisionError("matrix is singular")
    return x


def kron(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    if a.field.dtype is object and (a.a.size == 0 or b.a.size == 0):
        return Matrix.zeros(a.field, a.rows * b.rows, a.cols * b.cols)
    return a._wrap(np.kron(a.a, b.a))


def homology_dim_at(d1: Matrix, d2: Matrix) -> int:
    """dim ker(d2) - rank(d1) for ``U --d1--> V --d2--> W``."""
    d1._check(d2)
    if d1.rows != d2.cols:
        raise ValueError(f"maps do not compose: {d1.shape} then {d2.shape}")
    if not (d2 @ d1).is_zero():
        raise NotAComplex("composite of consecutive maps is nonzero")
    return d1.rows - rank(d2) - rank(d1)


def quotient_map(w: Matrix) -> tuple[Matrix, Matrix]:
    """Projection onto ``ambient / colspan(w)`` and a section of it.

    Returns ``(proj, section)`` with ``proj @ w == 0`` and
    ``proj @ section == I``. Quotient coordinates are the non-pivot
    coordinates of the ambient space after reduction modulo the span.
    """
    n = w.rows
    field = w.field
    if w.cols == 0 or w.is_zero():
        eye = Matrix.identity(field, n)
        return eye, eye
    r, pivots = rref(w.T)
    r = r[: len(pivots)]
    pset = set(pivots)
    nonpiv = [c for c in range(n) if c not in pset]
    eye = Matrix.identity(field, n).a
    sel_np = eye[nonpiv]
    sel_p = eye[pivots]
    proj = sel_np - r[:, nonpiv].T @ sel_p
    section = eye[:, nonpiv].copy()
    return Matrix(field, field._reduce(proj), normalized=True), Matrix(field, section, normalized=True)


def in_span(basis: Matrix, v: Matrix) -> bool:
    return solve(basis, v) is not None


def random_matrix(field: Field, rng: np.random.Generator, rows: int, cols: int) -> Matrix:
    return Matrix(field, field.random_array(rng, (rows, cols)), normalized=True)


def random_invertible(field: Field, rng: np.random.Generator, n: int) -> Matrix:
    while True:
        m = random_matrix(field, rng, n, n)
        if rank(m) == n:
            return m
