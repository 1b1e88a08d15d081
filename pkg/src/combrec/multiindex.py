"""Multi-indices of fixed weighted degree and exact multinomial coefficients.

The weight vector is fixed to ``(1, 2, ..., r)``: index position ``j``
carries weight ``j + 1``.
"""

from functools import lru_cache
from math import comb


def weighted_degree(k):
    return sum((j + 1) * kj for j, kj in enumerate(k))


def length(k):
    return sum(k)


def iter_weighted(r, m):
    """Yield every ``k`` in Z_+^r with weighted degree ``m`` in descending lexicographic order.

    Components are fixed left to right by recursive descent, so only one
    partial index of length ``r`` is alive at any time.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    if m < 0:
        return
    k = [0] * r

    def descend(pos, remaining):
        w = pos + 1
        if pos == r - 1:
            if remaining % w == 0:
                k[pos] = remaining // w
                yield tuple(k)
            return
        for kp in range(remaining // w, -1, -1):
            k[pos] = kp
            yield from descend(pos + 1, remaining - w * kp)

    yield from descend(0, m)


def enumerate_weighted(r, m):
    """All multi-indices of length ``r`` with weighted degree ``m``.

    >>> enumerate_weighted(2, 4)
    [(4, 0), (2, 1), (0, 2)]
    """
    return list(iter_weighted(r, m))


def iter_weighted_by_top(r, m, top):
    """Indices of weighted degree ``m`` whose last component equals ``top``.

    Used to split the enumeration into independent chunks for parallel consumers.
    """
    rest = m - r * top
    if rest < 0:
        return
    if r == 1:
        if rest == 0:
            yield (top,)
        return
    for head in iter_weighted(r - 1, rest):
        yield head + (top,)


def multinomial(k):
    """``|k|! / (k_0! ... k_{r-1}!)`` as a product of binomials of partial sums."""
    if any(kj < 0 for kj in k):
        raise ValueError(f"negative component in multi-index {k}")
    total = 1
    partial = 0
    for kj in k:
        partial += kj
        total *= comb(partial, kj)
    return total


@lru_cache(maxsize=None)
def _count(r, m):
    if m == 0:
        return 1
    if m < 0 or r == 0:
        return 0
    # partitions of m into parts <= r: either no part equals r, or remove one r
    return _count(r - 1, m) + _count(r, m - r)


def count_weighted(r, m):
    """Number of partitions of ``m`` into parts of size at most ``r``."""
    if r < 1:
        raise ValueError("r must be at least 1")
    if m < 0:
        return 0
    # fill the cache bottom-up to keep recursion shallow for large m
    for mm in range(m + 1):
        for rr in range(1, r + 1):
            _count(rr, mm)
    return _count(r, m)
