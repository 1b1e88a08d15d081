from itertools import product

import numpy as np
import pytest

from combrec.companion import (
    ORIENTATION,
    BlockMatrix,
    build_companion,
    c_block,
    companion_power_closed,
    companion_power_naive,
    entry_formula,
    raw_entries,
)
from combrec.core import Matrix, generate_commuting_family
from combrec.errors import RangeError
from combrec.recurrence import RecurrenceSpec, iterate_sequence
from combrec.rho import rho_dp

from helpers import random_initial


def test_orientation_recovered_by_calibration():
    # only one of the four flips reproduces B**n for every tuple and n >= r
    fitting = []
    for flips in product([False, True], repeat=2):
        ok = True
        for r, d, seed in [(2, 1, 0), (2, 2, 1), (3, 2, 2), (3, 1, 3)]:
            A = generate_commuting_family(seed, r, d)
            B = build_companion(A)
            for n in range(r, r + 4):
                ok = ok and entry_formula(A, n, orientation=flips) == companion_power_naive(B, n)
        if ok:
            fitting.append(flips)
    assert fitting == [ORIENTATION]


def test_fibonacci_companion():
    A = generate_commuting_family(0, 2, 1)
    B = build_companion(A)
    assert B.flatten() == Matrix([[A.lag(1)[0, 0], A.lag(2)[0, 0]], [1, 0]])


def test_companion_layout():
    A = generate_commuting_family(5, 3, 2)
    B = build_companion(A)
    assert [B[0, j] for j in range(3)] == [A.lag(1), A.lag(2), A.lag(3)]
    assert B[1, 0] == Matrix.identity(2) and B[2, 1] == Matrix.identity(2)
    assert B[1, 1].is_zero() and B[2, 0].is_zero()


@pytest.mark.parametrize("r,d", [(2, 2), (3, 2), (4, 1), (4, 2)])
def test_closed_power_matches_naive(r, d):
    A = generate_commuting_family(r + d, r, d)
    B = build_companion(A)
    table = rho_dp(30, A)
    for n in range(r, 25):
        assert companion_power_closed(A, n, table) == companion_power_naive(B, n)


def test_closed_power_below_order():
    A = generate_commuting_family(0, 3, 2)
    with pytest.raises(RangeError):
        companion_power_closed(A, 2)


@pytest.mark.parametrize("n", [0, 1])
def test_literal_formula_fails_at_small_n(n):
    A = generate_commuting_family(8, 2, 2)
    B = build_companion(A)
    assert entry_formula(A, n) != companion_power_naive(B, n)


def test_power_zero_is_identity():
    A = generate_commuting_family(8, 3, 2)
    assert companion_power_naive(build_companion(A), 0) == BlockMatrix.identity(3, 2, "exact")


def test_c_block_cases():
    A = generate_commuting_family(4, 3, 2)
    assert c_block(0, 0, A) == A.lag(1)
    assert c_block(1, 1, A) == A.lag(3)
    assert c_block(2, 0, A) == A.lag(3)
    assert c_block(2, 2, A).is_zero()
    with pytest.raises(RangeError):
        c_block(3, 0, A)


def test_raw_grid_shape():
    A = generate_commuting_family(4, 3, 1)
    grid = raw_entries(A, 5)
    assert len(grid) == 3 and all(len(row) == 3 for row in grid)


def test_state_propagation():
    # B**n maps (T_{r-1}, ..., T_0) to (T_{n+r-1}, ..., T_n)
    r, d = 3, 2
    A = generate_commuting_family(12, r, d)
    spec = RecurrenceSpec(A, random_initial(np.random.default_rng(3), r, d))
    terms = iterate_sequence(spec, 20)
    n = 9
    P = companion_power_closed(A, n)
    state = [terms[r - 1 - k] for k in range(r)]
    for i in range(r):
        acc = P[i, 0] @ state[0]
        for k in range(1, r):
            acc = acc + P[i, k] @ state[k]
        assert acc == terms[n + r - 1 - i]


def test_block_roundtrip():
    A = generate_commuting_family(4, 3, 2)
    B = build_companion(A)
    assert BlockMatrix.from_flat(B.flatten(), 3, 2) == B
