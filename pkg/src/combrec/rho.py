"""Fundamental-solution coefficients rho(m, r; A).

``rho(m)`` is computed two independent ways: by summing multinomially
weighted monomials over multi-indices of weighted degree ``m - r``
(:func:`rho_enum`), and by running the recurrence itself from the boundary
values ``rho(r) = I``, ``rho(m) = 0`` for ``m < r`` (:func:`rho_dp`).

Index pairing: position ``j`` of a multi-index (weight ``j + 1``) pairs with
the lag-``(j + 1)`` coefficient.  This is the only pairing under which the
monomial sum solves the recurrence; ``tests/test_rho.py`` pins it against
direct iteration.
"""

import contextvars
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .core import EXACT, Matrix, count_products
from .errors import PrecisionWarning, RangeError
from .multiindex import iter_weighted, iter_weighted_by_top, multinomial

#: lag of the coefficient that multi-index position j raises to k_j
LAG_OFFSET = 1

_FLOAT_EXACT_INT = 2 ** 53


def lag_of_position(j):
    return j + LAG_OFFSET


def coefficient_for_position(A, j):
    return A.lag(lag_of_position(j))


def _power_cache(A, top):
    # powers[j][e] == (coefficient at position j) ** e for 1 <= e <= max exponent
    r = A.r
    powers = []
    for j in range(r):
        base = coefficient_for_position(A, j)
        row = [None, base]
        for _ in range(2, top // (j + 1) + 1):
            row.append(row[-1] @ base)
        powers.append(row)
    return powers


def _partial_sum(indices, powers, d, mode):
    acc = Matrix.zeros(d, mode=mode)
    big = False
    for k in indices:
        mono = None
        for j, kj in enumerate(k):
            if kj:
                p = powers[j][kj]
                mono = p if mono is None else mono @ p
        coeff = multinomial(k)
        if mode != EXACT and coeff > _FLOAT_EXACT_INT:
            big = True
        acc = acc + mono * coeff
    return acc, big


def rho_enum(n, A, threads=1):
    """``rho(n, r; A)`` as the multinomial sum over multi-indices of weighted degree ``n - r``."""
    A.require_certified()
    r, d, mode = A.r, A.d, A.mode
    if n < r:
        return Matrix.zeros(d, mode=mode)
    if n == r:
        return Matrix.identity(d, mode)
    top = n - r
    powers = _power_cache(A, top)
    if threads > 1:
        # chunks keyed by k_{r-1}; exact addition makes the reduction order irrelevant
        chunks = [list(iter_weighted_by_top(r, top, t)) for t in range(top // r + 1)]
        # each task runs in a copy of the caller's context so product counters see it
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(contextvars.copy_context().run, _partial_sum, c, powers, d, mode) for c in chunks
            ]
            parts = [f.result() for f in futures]
        acc = Matrix.zeros(d, mode=mode)
        big = False
        for part, flag in parts:
            acc = acc + part
            big = big or flag
    else:
        acc, big = _partial_sum(iter_weighted(r, top), powers, d, mode)
    if big:
        warnings.warn(
            f"multinomial coefficients above 2**53 in float mode at n={n}; results lose integer precision",
            PrecisionWarning,
            stacklevel=2,
        )
    return acc


def rho_scalar(n, a):
    """Scalar ``rho(n, r)`` for coefficients ``a`` in lag order (``a[0]`` is lag 1)."""
    r = len(a)
    if r < 2:
        raise ValueError("order must be at least 2")
    if n < r:
        return 0 * a[0]
    total = 0 * a[0]
    for k in iter_weighted(r, n - r):
        term = multinomial(k)
        for j, kj in enumerate(k):
            if kj:
                term = term * a[lag_of_position(j) - 1] ** kj
        total += term
    return total


@dataclass(frozen=True)
class RhoTable:
    r: int
    d: int
    mode: str
    n_max: int
    values: dict = field(repr=False)
    op_count: int = 0

    def __getitem__(self, m):
        if m < self.r:
            return Matrix.zeros(self.d, mode=self.mode)
        if m > self.n_max:
            raise RangeError(f"rho({m}) requested beyond table limit {self.n_max}")
        return self.values[m]

    def __contains__(self, m):
        return m <= self.n_max


def rho_dp(n_max, A):
    """Table of ``rho(m)`` for ``r <= m <= n_max`` filled by the recurrence.

    Products with ``rho(m - l) = 0`` (``m - l < r``) are skipped, so each
    step costs at most ``r`` d x d products.
    """
    A.require_certified()
    r, d, mode = A.r, A.d, A.mode
    n_max = max(n_max, r)
    values = {r: Matrix.identity(d, mode)}
    with count_products() as box:
        for m in range(r + 1, n_max + 1):
            acc = None
            for l in range(1, r + 1):
                if m - l < r:
                    continue
                term = A.lag(l) @ values[m - l]
                acc = term if acc is None else acc + term
            values[m] = acc
    return RhoTable(r=r, d=d, mode=mode, n_max=n_max, values=values, op_count=box.calls)
