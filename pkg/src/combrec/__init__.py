"""Closed forms for linear recurrences with pairwise commuting matrix coefficients."""

from .algebraic import algebraic_expm, algebraic_power, expm_series_oracle, power_decomposition
from .bell import bell_number, bell_poly, r_bell_poly_dobinski, stirling2, weighted_exp_sum
from .binet import (
    atomic_moment_report,
    binet_eval,
    binet_solve,
    characteristic_polynomial,
    roots_with_multiplicities,
)
from .companion import build_companion, c_block, companion_power_closed, companion_power_naive
from .core import (
    CoefficientTuple,
    Matrix,
    commutator_norm,
    count_products,
    generate_commuting_family,
    mat_power_naive,
)
from .multiindex import count_weighted, enumerate_weighted, multinomial
from .recurrence import RecurrenceSpec, closed_term, iterate_sequence, weights
from .rho import RhoTable, rho_dp, rho_enum, rho_scalar

__version__ = "0.1.0"
