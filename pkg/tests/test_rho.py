import warnings
from fractions import Fraction

import numpy as np
import pytest

from combrec.core import CoefficientTuple, Matrix, count_products, generate_commuting_family
from combrec.errors import CommutativityError, PrecisionWarning, RangeError
from combrec.rho import LAG_OFFSET, RhoTable, coefficient_for_position, rho_dp, rho_enum, rho_scalar


def scalar_iteration(a, n_max):
    """rho from its boundary values by direct iteration of the recurrence."""
    r = len(a)
    vals = {m: 0 for m in range(r)}
    vals[r] = 1
    for m in range(r + 1, n_max + 1):
        vals[m] = sum(a[l - 1] * vals[m - l] for l in range(1, r + 1))
    return vals


def test_pairing_regression():
    # asymmetric coefficients distinguish position j <-> lag j+1 from the reverse
    assert [rho_scalar(n, (1, 2)) for n in range(2, 7)] == [1, 1, 3, 5, 11]
    assert [rho_scalar(n, (2, 1)) for n in range(2, 7)] == [1, 2, 5, 12, 29]
    it = scalar_iteration((1, 2), 6)
    assert [it[n] for n in range(2, 7)] == [1, 1, 3, 5, 11]
    assert LAG_OFFSET == 1


@pytest.mark.parametrize("a", [(1, 1), (1, 2), (3, -1), (2, 0, 1), (1, -2, 3, 1)])
def test_scalar_matches_iteration(a):
    it = scalar_iteration(a, 30)
    assert [rho_scalar(n, a) for n in range(31)] == [it[n] for n in range(31)]


def test_scalar_rational():
    a = (Fraction(1, 2), Fraction(1, 3))
    it = scalar_iteration(a, 15)
    assert all(rho_scalar(n, a) == it[n] for n in range(16))


def test_boundary_values():
    A = generate_commuting_family(3, 3, 2)
    for m in range(3):
        assert rho_enum(m, A).is_zero()
    assert rho_enum(3, A) == Matrix.identity(2)
    table = rho_dp(10, A)
    assert table[0].is_zero() and table[3] == Matrix.identity(2)


@pytest.mark.parametrize("seed", range(5))
def test_rho_solves_recurrence(seed):
    A = generate_commuting_family(seed, 3, 2)
    vals = [rho_enum(m, A) for m in range(15)]
    for m in range(4, 15):
        rhs = A.lag(1) @ vals[m - 1] + A.lag(2) @ vals[m - 2] + A.lag(3) @ vals[m - 3]
        assert vals[m] == rhs


def test_position_pairing_matrix():
    A = generate_commuting_family(0, 3, 2)
    assert coefficient_for_position(A, 0) == A.lag(1)
    assert coefficient_for_position(A, 2) == A.lag(3)
    # rho(r + 1) = c_1, rho(r + 2) = c_1^2 + c_2
    assert rho_enum(4, A) == A.lag(1)
    assert rho_enum(5, A) == A.lag(1) @ A.lag(1) + A.lag(2)


def test_enum_requires_certificate():
    A = CoefficientTuple.from_matrices([Matrix([[0, 1], [0, 0]]), Matrix([[0, 0], [1, 0]])])
    with pytest.raises(CommutativityError):
        rho_enum(5, A)
    with pytest.raises(CommutativityError):
        rho_dp(5, A)


@pytest.mark.parametrize("threads", [2, 4])
def test_threads_give_identical_results(threads):
    A = generate_commuting_family(9, 3, 3)
    for m in (3, 8, 17):
        assert rho_enum(m, A, threads=threads) == rho_enum(m, A)


def test_thread_products_are_counted():
    A = generate_commuting_family(9, 3, 2)
    with count_products() as one:
        rho_enum(15, A)
    with count_products() as many:
        rho_enum(15, A, threads=3)
    assert many.calls >= one.calls > 0


def test_table_range():
    A = generate_commuting_family(1, 2, 1)
    table = rho_dp(6, A)
    assert isinstance(table, RhoTable) and 6 in table
    with pytest.raises(RangeError):
        table[7]


def test_dp_cost_linear_enum_superlinear():
    A = generate_commuting_family(2, 3, 2)
    dp = [rho_dp(n, A).op_count for n in range(10, 40)]
    assert len(set(np.diff(dp))) == 1
    enum = []
    for n in range(10, 40):
        with count_products() as box:
            rho_enum(n, A)
        enum.append(box.calls)
    assert enum[-1] > enum[0] * 5


def test_float_mode_matches_exact_and_warns_on_huge_multinomials():
    A = CoefficientTuple.from_scalars([1, 1], 1, "float")
    assert float(rho_enum(30, A)[0, 0]) == rho_scalar(30, (1, 1))
    B = CoefficientTuple.from_scalars([Fraction(1, 2), Fraction(1, 2)], 1, "float")
    with pytest.warns(PrecisionWarning):
        rho_enum(130, B)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        rho_enum(40, B)
