"""Stirling numbers of the second kind, Bell numbers and Bell polynomials."""

import cmath
import math

from .errors import RangeError


class StirlingTable:
    """Triangular table of ``S(n, k)`` grown row by row on demand."""

    def __init__(self, n_max=0):
        self.rows = [[1]]
        self.extend(n_max)

    @property
    def n_max(self):
        return len(self.rows) - 1

    def extend(self, n_max):
        while len(self.rows) <= n_max:
            prev = self.rows[-1]
            n = len(self.rows)
            row = [0] * (n + 1)
            for k in range(1, n + 1):
                row[k] = (k * prev[k] if k < n else 0) + prev[k - 1]
            self.rows.append(row)
        return self

    def row(self, n):
        self.extend(n)
        return self.rows[n]

    def __call__(self, n, k):
        if n < 0 or k < 0 or k > n:
            raise RangeError(f"S({n}, {k}) needs 0 <= k <= n")
        return self.row(n)[k]


_TABLE = StirlingTable()


def stirling2(n, k):
    """Number of partitions of an ``n``-set into ``k`` non-empty blocks."""
    return _TABLE(n, k)


def bell_number(n):
    if n < 0:
        raise ValueError("n must be non-negative")
    return sum(_TABLE.row(n))


def bell_poly(n, x):
    """``B_n(x) = sum_k S(n, k) x^k`` by Horner's rule on the exact coefficients.

    ``x`` may be an int, Fraction, float or complex.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    acc = 0
    for c in reversed(_TABLE.row(n)):
        acc = acc * x + c
    return acc


def r_bell_poly_dobinski(n, shift, x, eps=1e-12):
    """``e^{-x} sum_k (k + shift)^n x^k / k!`` truncated once the tail is negligible.

    The terms rise to a peak before decaying, so the stopping test only
    fires once ``k > x``, ``k > n`` and the terms have started to shrink.
    """
    if n < 0 or shift < 0:
        raise ValueError("n and shift must be non-negative")
    x = float(x)
    if x <= 0:
        raise ValueError("x must be positive")
    weight = 1.0  # x^k / k!
    terms = []
    prev = -1.0
    k = 0
    while True:
        term = float((k + shift) ** n) * weight
        terms.append(term)
        decreasing = k > x and k > n and term <= prev
        if decreasing and term < eps * math.fsum(terms):
            break
        prev = term
        k += 1
        weight *= x / k
    return math.exp(-x) * math.fsum(terms)


def weighted_exp_sum(j, lam):
    """Closed form of ``sum_n n^j lam^n / n!``, namely ``e^lam B_j(lam)``."""
    if j < 0:
        raise ValueError("j must be non-negative")
    exp = cmath.exp(lam) if isinstance(lam, complex) else math.exp(lam)
    return exp * bell_poly(j, lam)


def weighted_exp_sum_series(j, lam, tol=1e-16):
    """Direct truncated series for ``sum_n n^j lam^n / n!``; oracle for :func:`weighted_exp_sum`."""
    total = 0.0
    weight = 1.0  # lam^n / n!
    n = 0
    mag = abs(lam)
    while True:
        term = (n ** j) * weight
        total += term
        if n > mag and n > j and abs(term) <= tol * max(abs(total), 1e-300):
            return total
        n += 1
        weight *= lam / n
