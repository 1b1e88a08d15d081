"""Scalar rings, dense matrices and commuting coefficient tuples.

Two scalar modes are supported.  ``"exact"`` stores entries as
:class:`fractions.Fraction` inside a numpy object array, so every ring
operation is bit-exact.  ``"float"`` stores binary64 entries and compares
with a relative Frobenius tolerance.
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

import numpy as np

from .errors import CoefficientError, CommutativityError, DimensionError

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

#: default relative comparison tolerance in float mode
FLOAT_TOL = 1e-10
#: relative commutator tolerance used to certify float coefficient tuples
COMMUTE_TOL_FLOAT = 1e-9


def check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"unknown scalar mode {mode!r}; expected one of {MODES}")
    return mode


def to_scalar(value, mode=EXACT):
    """Convert ``value`` (int, Fraction, float or ``"p/q"`` string) into ``mode``.

    Floats entering exact mode go through their shortest repr, so ``0.1``
    becomes ``1/10`` rather than the binary expansion.
    """
    check_mode(mode)
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if mode == EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, Rational)):
            return Fraction(value)
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"non-finite value {value!r} in exact mode")
            return Fraction(repr(value))
        if isinstance(value, str):
            return Fraction(value.strip())
        if isinstance(value, np.integer):
            return Fraction(int(value))
        if isinstance(value, np.floating):
            return Fraction(repr(float(value)))
        raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    if isinstance(value, (Real, np.floating, np.integer)):
        return float(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a float scalar")


def format_scalar(value):
    """Rationals print as ``p`` or ``p/q``; floats with 17 significant digits."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


class ProductCount:
    """Tally of matrix products performed while a counter is active.

    ``flops`` accumulates ``rows * inner * cols`` so products of different
    sizes can be compared; :meth:`equivalents` converts to d x d products.
    """

    def __init__(self):
        self.calls = 0
        self.flops = 0
        self._lock = threading.Lock()

    def add(self, rows, inner, cols):
        with self._lock:
            self.calls += 1
            self.flops += rows * inner * cols

    def equivalents(self, d):
        return self.flops // (d ** 3)


_active_counters: ContextVar[tuple] = ContextVar("_active_counters", default=())


@contextmanager
def count_products():
    """Count every :class:`Matrix` product made inside the ``with`` block.

    Counters nest: an outer counter also sees products tallied by inner ones.
    """
    box = ProductCount()
    token = _active_counters.set(_active_counters.get() + (box,))
    try:
        yield box
    finally:
        _active_counters.reset(token)


class Matrix:
    """Immutable dense matrix over the exact or float scalar ring.

    Most matrices here are square; column matrices (d x 1) are used for
    vector-valued sequences.
    """

    __slots__ = ("_a", "_mode")

    def __init__(self, entries, mode=EXACT):
        check_mode(mode)
        if isinstance(entries, Matrix):
            entries = entries._a
        arr = np.array(entries, dtype=object)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise DimensionError(f"matrix entries must form a non-empty 2-D array, got shape {arr.shape}")
        if mode == EXACT:
            conv = np.empty(arr.shape, dtype=object)
            for idx, v in np.ndenumerate(arr):
                conv[idx] = to_scalar(v, EXACT)
        else:
            conv = np.array([[to_scalar(v, FLOAT) for v in row] for row in arr], dtype=float)
        conv.setflags(write=False)
        self._a = conv
        self._mode = mode

    @classmethod
    def _wrap(cls, arr, mode):
        # trusted constructor: arr already holds entries of the right ring
        m = object.__new__(cls)
        if mode == EXACT and arr.dtype != object:
            arr = arr.astype(object)
        arr.setflags(write=False)
        m._a = arr
        m._mode = mode
        return m

    @classmethod
    def identity(cls, d, mode=EXACT):
        if mode == EXACT:
            arr = np.full((d, d), Fraction(0), dtype=object)
            for i in range(d):
                arr[i, i] = Fraction(1)
            return cls._wrap(arr, mode)
        return cls._wrap(np.eye(d), check_mode(mode))

    @classmethod
    def zeros(cls, rows, cols=None, mode=EXACT):
        cols = rows if cols is None else cols
        if mode == EXACT:
            return cls._wrap(np.full((rows, cols), Fraction(0), dtype=object), mode)
        return cls._wrap(np.zeros((rows, cols)), check_mode(mode))

    @classmethod
    def diag(cls, values, mode=EXACT):
        d = len(values)
        m = [[0] * d for _ in range(d)]
        for i, v in enumerate(values):
            m[i][i] = v
        return cls(m, mode)

    @classmethod
    def from_flat(cls, values, rows, cols=None, mode=EXACT):
        cols = rows if cols is None else cols
        if len(values) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(values)}")
        return cls([list(values[i * cols:(i + 1) * cols]) for i in range(rows)], mode)

    @property
    def mode(self):
        return self._mode

    @property
    def exact(self):
        return self._mode == EXACT

    @property
    def shape(self):
        return self._a.shape

    @property
    def dim(self):
        """Side length of a square matrix."""
        rows, cols = self._a.shape
        if rows != cols:
            raise DimensionError(f"matrix of shape {self._a.shape} is not square")
        return rows

    @property
    def is_square(self):
        return self._a.shape[0] == self._a.shape[1]

    @property
    def array(self):
        """Read-only view of the underlying numpy array."""
        return self._a

    def __getitem__(self, idx):
        return self._a[idx]

    def tolist(self):
        return self._a.tolist()

    def flat(self):
        return list(self._a.ravel())

    def __repr__(self):
        rows = "; ".join(", ".join(format_scalar(v) for v in row) for row in self._a)
        return f"Matrix([{rows}], mode={self._mode!r})"

    def _check_same(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other._mode != self._mode:
            raise TypeError(f"cannot mix {self._mode} and {other._mode} matrices")
        if other.shape != self.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return None

    def __add__(self, other):
        bad = self._check_same(other)
        if bad is NotImplemented:
            return bad
        return Matrix._wrap(self._a + other._a, self._mode)

    def __sub__(self, other):
        bad = self._check_same(other)
        if bad is NotImplemented:
            return bad
        return Matrix._wrap(self._a - other._a, self._mode)

    def __neg__(self):
        return Matrix._wrap(-self._a, self._mode)

    def __mul__(self, scalar):
        if isinstance(scalar, Matrix):
            raise TypeError("use @ for matrix products")
        return Matrix._wrap(self._a * to_scalar(scalar, self._mode), self._mode)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other._mode != self._mode:
            raise TypeError(f"cannot mix {self._mode} and {other._mode} matrices")
        rows, inner = self.shape
        inner2, cols = other.shape
        if inner != inner2:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        for box in _active_counters.get():
            box.add(rows, inner, cols)
        return Matrix._wrap(self._a @ other._a, self._mode)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._mode == other._mode and self.shape == other.shape and bool(np.all(self._a == other._a))

    def __hash__(self):
        return hash((self._mode, self.shape, tuple(self._a.ravel().tolist())))

    def transpose(self):
        return Matrix._wrap(self._a.T.copy(), self._mode)

    T = property(transpose)

    def is_zero(self):
        return bool(np.all(self._a == 0))

    def is_symmetric(self, tol=None):
        if not self.is_square:
            return False
        if self.exact:
            return bool(np.all(self._a == self._a.T))
        tol = FLOAT_TOL if tol is None else tol
        return (self - self.T).frobenius_norm() <= tol * max(self.frobenius_norm(), 1.0)

    def frobenius_sq(self):
        """Squared Frobenius norm; exact in rational mode."""
        if self.exact:
            return sum((v * v for v in self._a.ravel()), Fraction(0))
        return float(np.sum(self._a * self._a))

    def frobenius_norm(self):
        if self.exact:
            return math.sqrt(self.frobenius_sq())
        return float(np.linalg.norm(self._a))

    def to_numpy(self):
        """Float64 copy of the entries."""
        if self.exact:
            return np.array([[float(v) for v in row] for row in self._a], dtype=float)
        return self._a.copy()

    def to_mode(self, mode):
        check_mode(mode)
        if mode == self._mode:
            return self
        if mode == FLOAT:
            return Matrix._wrap(self.to_numpy(), FLOAT)
        return Matrix(self._a.tolist(), EXACT)

    def scalar_identity_value(self):
        """Return ``a`` if this matrix equals ``a * I``, else ``None``."""
        if not self.is_square:
            return None
        a = self._a[0, 0]
        if self == Matrix.identity(self.dim, self._mode) * a:
            return a
        return None

    def close_to(self, other, tol=None):
        """Relative Frobenius comparison; exact equality in rational mode."""
        if self.exact and other.exact:
            return self == other
        tol = FLOAT_TOL if tol is None else tol
        a, b = self.to_numpy(), other.to_numpy()
        if a.shape != b.shape:
            return False
        return float(np.linalg.norm(a - b)) <= tol * max(1.0, float(np.linalg.norm(a)), float(np.linalg.norm(b)))


def max_abs_deviation(a, b):
    """Largest entrywise absolute difference (exact Fraction in rational mode)."""
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.exact and b.exact:
        return max(abs(x - y) for x, y in zip(a.flat(), b.flat()))
    return float(np.max(np.abs(a.to_numpy() - b.to_numpy())))


def commutator_norm(x, y):
    """Frobenius norm of ``xy - yx``; zero exactly when x and y commute (rational mode)."""
    if x.shape != y.shape or not x.is_square:
        raise DimensionError(f"commutator needs equal square shapes, got {x.shape} and {y.shape}")
    return (x @ y - y @ x).frobenius_norm()


def commute(x, y, tol=None):
    """Commutativity test with the ring's tolerance (exact: zero commutator)."""
    comm = x @ y - y @ x
    if x.exact:
        return comm.is_zero()
    tol = COMMUTE_TOL_FLOAT if tol is None else tol
    return comm.frobenius_norm() <= tol * x.frobenius_norm() * y.frobenius_norm()


def mat_power_naive(x, n):
    """``x**n`` by repeated squaring, with ``x**0 == I``."""
    if n < 0:
        raise ValueError("negative exponent")
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result @ base
        n >>= 1
        if n:
            base = base @ base
    return Matrix.identity(x.dim, x.mode) if result is None else result


@dataclass(frozen=True)
class CoefficientTuple:
    """Coefficients ``(c_1, ..., c_r)`` in lag order: ``c_l`` multiplies the lag-``l`` term.

    Build instances with :meth:`from_matrices`, which validates shapes and
    records whether the family is pairwise commuting.
    """

    mats: tuple
    commuting_certified: bool

    @classmethod
    def from_matrices(cls, mats, *, tol=None, require_symmetric=False, allow_zero_last=False):
        mats = tuple(mats)
        if len(mats) < 2:
            raise CoefficientError(f"recurrence order must be at least 2, got {len(mats)}")
        d = mats[0].dim
        mode = mats[0].mode
        for m in mats:
            if not m.is_square or m.dim != d:
                raise DimensionError("all coefficient matrices must be square with a common dimension")
            if m.mode != mode:
                raise TypeError("coefficient matrices mix scalar modes")
        if mats[-1].is_zero() and not allow_zero_last:
            raise CoefficientError("the highest-lag coefficient c_r must be nonzero")
        if require_symmetric:
            for l, m in enumerate(mats, start=1):
                if not m.is_symmetric():
                    raise CoefficientError(f"coefficient c_{l} is not symmetric")
        certified = all(
            commute(mats[i], mats[j], tol) for i in range(len(mats)) for j in range(i + 1, len(mats))
        )
        return cls(mats, certified)

    @classmethod
    def from_scalars(cls, values, d=1, mode=EXACT, **kwargs):
        """Coefficients ``c_l * I_d`` from a list of scalars in lag order."""
        eye = Matrix.identity(d, mode)
        return cls.from_matrices([eye * v for v in values], **kwargs)

    @property
    def r(self):
        return len(self.mats)

    @property
    def d(self):
        return self.mats[0].dim

    @property
    def mode(self):
        return self.mats[0].mode

    def lag(self, l):
        """Coefficient of the lag-``l`` term, ``1 <= l <= r``."""
        if not 1 <= l <= self.r:
            raise IndexError(f"lag {l} outside 1..{self.r}")
        return self.mats[l - 1]

    def require_certified(self):
        if not self.commuting_certified:
            raise CommutativityError("coefficient matrices do not pairwise commute")

    def scalar_values(self):
        """Scalars ``a_l`` when every ``c_l == a_l * I``; otherwise ``None``."""
        vals = [m.scalar_identity_value() for m in self.mats]
        return None if any(v is None for v in vals) else vals

    def max_commutator_norm(self):
        return max(
            (commutator_norm(self.mats[i], self.mats[j]) for i in range(self.r) for j in range(i + 1, self.r)),
            default=0.0,
        )


def _poly_in(m, coeffs):
    # Horner evaluation of sum coeffs[k] * m**k
    d = m.dim
    acc = Matrix.identity(d, m.mode) * coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc @ m + Matrix.identity(d, m.mode) * c
    return acc


def generate_commuting_family(seed, r, d, mode=EXACT):
    """Seeded family of ``r`` pairwise commuting ``d x d`` matrices.

    Each matrix is a polynomial of degree < d in one random symmetric integer
    matrix, hence the family commutes exactly.  Zero polynomials are bumped
    by the identity so every member (in particular ``c_r``) is nonzero.
    """
    if r < 2 or d < 1:
        raise ValueError("need r >= 2 and d >= 1")
    rng = np.random.default_rng(seed)
    upper = rng.integers(-2, 3, size=(d, d))
    base = np.triu(upper) + np.triu(upper, 1).T
    m = Matrix(base.tolist(), EXACT)
    mats = []
    for _ in range(r):
        coeffs = [int(c) for c in rng.integers(-2, 3, size=d)]
        p = _poly_in(m, coeffs)
        if p.is_zero():
            p = Matrix.identity(d, EXACT)
        mats.append(p.to_mode(mode))
    return CoefficientTuple.from_matrices(mats)


def random_integer_matrix(rng, rows, cols=None, low=-3, high=3, mode=EXACT):
    cols = rows if cols is None else cols
    return Matrix(rng.integers(low, high + 1, size=(rows, cols)).tolist(), mode)
