"""Operator- and vector-valued linear recurrences with commuting coefficients.

A recurrence of order ``r`` is ``T_n = c_1 T_{n-1} + ... + c_r T_{n-r}``
with the coefficients stored in lag order.  Vector sequences are the
special case of ``d x 1`` terms.
"""

from dataclasses import dataclass

from .core import EXACT, CoefficientTuple, Matrix
from .errors import DimensionError, RangeError
from .rho import coefficient_for_position, rho_dp


@dataclass(frozen=True)
class RecurrenceSpec:
    coeffs: CoefficientTuple
    initial: tuple

    def __post_init__(self):
        object.__setattr__(self, "initial", tuple(self.initial))
        if len(self.initial) != self.coeffs.r:
            raise DimensionError(f"need {self.coeffs.r} initial terms, got {len(self.initial)}")
        shape = self.initial[0].shape
        for t in self.initial:
            if t.shape != shape or t.shape[0] != self.coeffs.d:
                raise DimensionError("initial terms must share a shape with d rows")
            if t.mode != self.coeffs.mode:
                raise TypeError("initial terms and coefficients use different scalar modes")

    @classmethod
    def from_scalars(cls, coeffs, initial, mode=EXACT, **kwargs):
        """One-dimensional recurrence from plain numbers (lag order)."""
        A = CoefficientTuple.from_scalars(coeffs, 1, mode, **kwargs)
        return cls(A, tuple(Matrix([[v]], mode) for v in initial))

    @property
    def r(self):
        return self.coeffs.r

    @property
    def d(self):
        return self.coeffs.d

    @property
    def mode(self):
        return self.coeffs.mode

    def shifted(self, k=1):
        """Same recurrence started from ``T_k, ..., T_{k+r-1}``."""
        terms = iterate_sequence(self, k + self.r - 1)
        return RecurrenceSpec(self.coeffs, tuple(terms[k:k + self.r]))


def iterate_sequence(spec, n_max):
    """``[T_0, ..., T_{n_max}]`` by direct evaluation of the recurrence.

    Works for non-commuting coefficients too; this is the reference every
    closed form is checked against.
    """
    if n_max < spec.r - 1:
        raise RangeError(f"n_max must be at least r - 1 = {spec.r - 1}")
    terms = list(spec.initial)
    A = spec.coeffs
    for n in range(spec.r, n_max + 1):
        acc = A.lag(1) @ terms[n - 1]
        for l in range(2, spec.r + 1):
            acc = acc + A.lag(l) @ terms[n - l]
        terms.append(acc)
    return terms


def weights(spec):
    """``W_s = sum_{j=s}^{r-1} P_j V_{s+r-1-j}`` for ``s = 0..r-1``.

    ``P_j`` is the coefficient paired with multi-index position ``j`` in the
    rho expansion, i.e. the lag-``(j + 1)`` coefficient.
    """
    r = spec.r
    V = spec.initial
    out = []
    for s in range(r):
        acc = None
        for j in range(s, r):
            term = coefficient_for_position(spec.coeffs, j) @ V[s + r - 1 - j]
            acc = term if acc is None else acc + term
        out.append(acc)
    return tuple(out)


def closed_term(spec, n, table=None, W=None):
    """``T_n = sum_s rho(n - s, r; A) W_s`` for ``n >= r``.

    Pass a prebuilt :class:`~combrec.rho.RhoTable` and weight family to
    amortise them over many ``n``.
    """
    if n < spec.r:
        raise RangeError(f"closed form holds for n >= r = {spec.r}; use the initial term T_{n} directly")
    spec.coeffs.require_certified()
    if table is None or n > table.n_max:
        table = rho_dp(n, spec.coeffs)
    W = weights(spec) if W is None else W
    acc = table[n] @ W[0]
    for s in range(1, spec.r):
        acc = acc + table[n - s] @ W[s]
    return acc


def closed_terms(spec, n_max):
    """Closed-form ``T_n`` for ``r <= n <= n_max`` sharing one rho table."""
    table = rho_dp(n_max, spec.coeffs)
    W = weights(spec)
    return {n: closed_term(spec, n, table, W) for n in range(spec.r, n_max + 1)}
