"""Test-data builders shared by several test modules."""

from fractions import Fraction
from itertools import product

import numpy as np

from combrec.core import Matrix, random_integer_matrix


def exact_inverse(m):
    """Gauss-Jordan inverse over the rationals."""
    n = m.dim
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.tolist())]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return Matrix([row[n:] for row in a])


def unimodular(rng, d):
    low = np.tril(rng.integers(-2, 3, size=(d, d)), -1) + np.eye(d, dtype=int)
    up = np.triu(rng.integers(-2, 3, size=(d, d)), 1) + np.eye(d, dtype=int)
    return Matrix((low @ up).tolist())


def jordan(blocks):
    """Block-diagonal Jordan matrix from ``[(eigenvalue, size), ...]``."""
    d = sum(s for _, s in blocks)
    m = [[Fraction(0)] * d for _ in range(d)]
    pos = 0
    for lam, size in blocks:
        for i in range(size):
            m[pos + i][pos + i] = Fraction(lam)
            if i + 1 < size:
                m[pos + i][pos + i + 1] = Fraction(1)
        pos += size
    return Matrix(m)


def poly_from_roots(roots):
    """Monic coefficients (highest first) of prod (X - root)."""
    coeffs = [Fraction(1)]
    for lam in roots:
        nxt = coeffs + [Fraction(0)]
        for i in range(1, len(nxt)):
            nxt[i] -= lam * coeffs[i - 1]
        coeffs = nxt
    return coeffs


def lag_coeffs_from_roots(roots):
    """Lag-order recurrence coefficients whose characteristic polynomial has these roots."""
    return [-c for c in poly_from_roots(roots)[1:]]


EIGEN_POOL = [Fraction(v, 4) for v in range(-8, 9) if v != 0]


def random_algebraic(rng, d, r, repeated):
    """Random ``d x d`` rational matrix with real spectrum and minimal polynomial of degree ``r``.

    With ``repeated`` the minimal polynomial has a double root (a Jordan
    block of size 2).  Returns ``(T, lag_coeffs, blocks)``.
    """
    assert r <= d
    while True:
        if repeated:
            assert r >= 2
            lam = EIGEN_POOL[rng.integers(len(EIGEN_POOL))]
            others = [v for v in EIGEN_POOL if v != lam]
            picks = [others[i] for i in rng.choice(len(others), size=r - 2, replace=False)]
            blocks = [(lam, 2)] + [(v, 1) for v in picks]
            min_roots = [lam, lam] + picks
        else:
            picks = [EIGEN_POOL[i] for i in rng.choice(len(EIGEN_POOL), size=r, replace=False)]
            blocks = [(v, 1) for v in picks]
            min_roots = picks
        # pad with extra blocks that do not raise the minimal polynomial degree
        while sum(s for _, s in blocks) < d:
            lam, _ = blocks[rng.integers(len(blocks))]
            blocks.append((lam, 1))
        P = unimodular(rng, d)
        T = P @ jordan(blocks) @ exact_inverse(P)
        coeffs = lag_coeffs_from_roots(min_roots)
        return T, coeffs, blocks


def eval_poly_at_matrix(T, lag_coeffs):
    """``T^r - c_1 T^{r-1} - ... - c_r I``."""
    acc = Matrix.identity(T.dim)
    for c in lag_coeffs:
        acc = acc @ T - Matrix.identity(T.dim) * c
    return acc


def random_initial(rng, r, d, cols=None):
    return tuple(random_integer_matrix(rng, d, cols) for _ in range(r))


def brute_weighted(r, m):
    """Every k in Z_+^r with weighted degree m by scanning a bounding box."""
    if m < 0:
        return []
    ranges = [range(m // (j + 1) + 1) for j in range(r)]
    return [k for k in product(*ranges) if sum((j + 1) * kj for j, kj in enumerate(k)) == m]


def set_partitions(items):
    """All partitions of a list into non-empty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part
