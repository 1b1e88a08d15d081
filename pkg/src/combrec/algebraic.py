"""Powers and exponentials of algebraic matrices.

An algebraic matrix ``T`` with minimal polynomial
``X^r - a_1 X^{r-1} - ... - a_r`` generates the scalar-coefficient
recurrence ``T^n = a_1 T^{n-1} + ... + a_r T^{n-r}``.  Its powers then have
both a rho (combinatorial) form and a Binet form, and the Binet form sums
term by term into ``e^T = sum S_{i,j} e^{lambda_i} B_j(lambda_i)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bell import bell_poly
from .binet import (
    CLUSTER_TOL,
    binet_eval,
    binet_solve,
    characteristic_polynomial,
    real_part_checked,
    roots_with_multiplicities,
)
from .core import CoefficientTuple, Matrix, mat_power_naive
from .errors import ConsistencyError, RangeError
from .recurrence import RecurrenceSpec, closed_term

POWER_RTOL = 1e-8


def expm_series_oracle(x, tol=1e-12):
    """``e^x`` by scaling and squaring around a truncated Taylor series.

    The argument is halved until its Frobenius norm is at most 1/2; series
    terms are added until one falls below ``tol`` relative to the partial sum.
    """
    a = x.to_numpy()
    d = a.shape[0]
    nrm = float(np.linalg.norm(a))
    s = 0 if nrm <= 0.5 else int(math.ceil(math.log2(nrm / 0.5)))
    a = a / (2.0 ** s)
    total = np.eye(d)
    term = np.eye(d)
    k = 0
    while True:
        k += 1
        term = term @ a / k
        total = total + term
        if np.linalg.norm(term) < tol * max(np.linalg.norm(total), 1.0):
            break
    for _ in range(s):
        total = total @ total
    return Matrix._wrap(total, "float")


def power_sequence(T, r):
    """``[T^0, ..., T^{r-1}]``."""
    out = [Matrix.identity(T.dim, T.mode)]
    for _ in range(1, r):
        out.append(out[-1] @ T)
    return out


def power_decomposition(T, coeffs, tol_cluster=CLUSTER_TOL, spectral=None):
    """Binet decomposition of ``n -> T^n`` for a minimal-polynomial recurrence ``coeffs`` (lag order)."""
    coeffs = list(coeffs)
    if spectral is None:
        spectral = roots_with_multiplicities(characteristic_polynomial(coeffs), tol_cluster)
    return binet_solve(power_sequence(T, len(coeffs)), spectral)


def algebraic_expm(dec):
    """``sum S_{i,j} e^{lambda_i} B_j(lambda_i)`` for a decomposition of ``T^n``."""
    acc = np.zeros(dec.shape, dtype=complex)
    for _, j, lam, S in dec.terms():
        acc += S * (np.exp(lam) * bell_poly(j, lam))
    return real_part_checked(acc)


@dataclass(frozen=True)
class PowerPaths:
    combinatorial: Matrix
    binet: Matrix
    rel_deviation: float


def _frob(m):
    return float(np.linalg.norm(m.to_numpy()))


def algebraic_power_paths(T, coeffs, n, tol_cluster=CLUSTER_TOL):
    """``T^n`` through the rho closed form and through the Binet form.

    A zero root of multiplicity ``m0`` has no ``n^j 0^n`` representation, so
    the Binet side works on ``T^{m0}, T^{m0+1}, ...``, which satisfies the
    recurrence of the polynomial with ``X^{m0}`` divided out.
    """
    coeffs = list(coeffs)
    r = len(coeffs)
    if n < r:
        raise RangeError(f"representations hold for n >= r = {r}")
    A = CoefficientTuple.from_scalars(coeffs, T.dim, T.mode, allow_zero_last=True)
    powers = power_sequence(T, r)
    comb = closed_term(RecurrenceSpec(A, powers), n)

    m0 = 0
    while m0 < r and coeffs[r - 1 - m0] == 0:
        m0 += 1
    q = r - m0
    if q == 0:
        binet = Matrix.zeros(T.dim, mode="float")
    else:
        spectral = roots_with_multiplicities(characteristic_polynomial(coeffs[:q]), tol_cluster)
        dec = binet_solve(powers[m0:], spectral)
        binet = binet_eval(dec, n - m0)

    diff = float(np.linalg.norm(comb.to_numpy() - binet.to_numpy()))
    size = _frob(comb)
    rel = diff / size if size > 0 else diff
    return PowerPaths(comb, binet, rel)


def algebraic_power(T, coeffs, n, rtol=POWER_RTOL, tol_cluster=CLUSTER_TOL):
    """``T^n`` from the combinatorial form after checking it against the Binet form."""
    paths = algebraic_power_paths(T, coeffs, n, tol_cluster)
    if paths.rel_deviation > rtol:
        raise ConsistencyError(
            f"combinatorial and Binet forms of T^{n} differ by {paths.rel_deviation:.3g} (relative); "
            "root finding likely failed"
        )
    return paths.combinatorial


__all__ = [
    "PowerPaths",
    "algebraic_expm",
    "algebraic_power",
    "algebraic_power_paths",
    "expm_series_oracle",
    "mat_power_naive",
    "power_decomposition",
    "power_sequence",
]
