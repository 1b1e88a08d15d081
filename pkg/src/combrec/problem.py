"""JSON problem files: parsing, validation and canonical re-emission.

A problem file looks like::

    {
      "schema_version": 1,
      "mode": "exact",
      "r": 2, "d": 1,
      "order": "lag",
      "coefficients": [[1], [1]],
      "initial": [[0], [1]],
      "n": 10
    }

Matrices are row-major flat entry lists; rationals may be written as
``"p/q"`` strings.  Coefficient matrices have ``d*d`` entries.  Initial
terms have ``d*d`` entries, or ``d`` entries for a vector (``d x 1``)
problem.  The ``order`` tag is mandatory and must be ``"lag"``: entry ``l``
of ``coefficients`` multiplies the term ``l`` steps back.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .core import EXACT, FLOAT, MODES, CoefficientTuple, Matrix
from .errors import CombrecError
from .recurrence import RecurrenceSpec

SCHEMA_VERSION = 1
OPTION_KEYS = ("n", "n_max", "eps", "tol", "tol_cluster")


class ProblemError(CombrecError, ValueError):
    """Malformed or inconsistent problem file."""


@dataclass(frozen=True)
class Problem:
    spec: RecurrenceSpec
    options: dict = field(default_factory=dict)

    @property
    def mode(self):
        return self.spec.mode


def _matrix(entries, rows, cols, mode, what):
    if not isinstance(entries, list):
        raise ProblemError(f"{what} must be a flat list of entries")
    if len(entries) != rows * cols:
        raise ProblemError(f"{what} has {len(entries)} entries, expected {rows * cols}")
    try:
        return Matrix.from_flat(entries, rows, cols, mode)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ProblemError(f"{what}: bad entry ({exc})") from exc


def parse_problem(data, mode=None, require_symmetric=False):
    """Build a :class:`Problem` from a decoded JSON object.

    ``mode`` overrides the file's scalar mode.
    """
    if not isinstance(data, dict):
        raise ProblemError("problem file must hold a JSON object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ProblemError(f"unsupported schema_version {data.get('schema_version')!r}; expected {SCHEMA_VERSION}")
    if data.get("order") != "lag":
        raise ProblemError('coefficient order must be tagged explicitly as "order": "lag"')
    mode = mode or data.get("mode", EXACT)
    if mode not in MODES:
        raise ProblemError(f"mode must be one of {MODES}, got {mode!r}")
    r, d = data.get("r"), data.get("d")
    if not isinstance(r, int) or not isinstance(d, int) or r < 2 or d < 1:
        raise ProblemError("r must be an integer >= 2 and d an integer >= 1")
    coeffs = data.get("coefficients")
    initial = data.get("initial")
    if not isinstance(coeffs, list) or len(coeffs) != r:
        raise ProblemError(f"expected {r} coefficient matrices")
    if not isinstance(initial, list) or len(initial) != r:
        raise ProblemError(f"expected {r} initial terms")
    mats = [_matrix(c, d, d, mode, f"coefficient c_{l}") for l, c in enumerate(coeffs, start=1)]
    cols = d
    if d > 1 and initial and isinstance(initial[0], list) and len(initial[0]) == d:
        cols = 1
    terms = [_matrix(t, d, cols, mode, f"initial term T_{i}") for i, t in enumerate(initial)]
    try:
        A = CoefficientTuple.from_matrices(mats, require_symmetric=require_symmetric)
    except CombrecError as exc:
        raise ProblemError(str(exc)) from exc
    options = {k: data[k] for k in OPTION_KEYS if k in data}
    return Problem(RecurrenceSpec(A, tuple(terms)), options)


def load_problem(path, mode=None, require_symmetric=False):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc}") from exc
    return parse_problem(data, mode, require_symmetric)


def _entry(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return float(v)


def canonical(problem):
    """JSON-ready dict that :func:`parse_problem` turns back into an equal problem."""
    spec = problem.spec
    out = {
        "schema_version": SCHEMA_VERSION,
        "mode": spec.mode,
        "r": spec.r,
        "d": spec.d,
        "order": "lag",
        "coefficients": [[_entry(v) for v in m.flat()] for m in spec.coeffs.mats],
        "initial": [[_entry(v) for v in t.flat()] for t in spec.initial],
    }
    out.update(problem.options)
    return out


def dump_canonical(problem):
    # one key per line, matrices kept on a single line each
    items = canonical(problem).items()
    return "{\n" + ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in items) + "\n}"


__all__ = ["EXACT", "FLOAT", "Problem", "ProblemError", "canonical", "dump_canonical", "load_problem", "parse_problem"]
