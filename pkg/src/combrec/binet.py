"""Binet decomposition for recurrences with scalar coefficients.

When every coefficient is ``a_l * I`` the terms take the form
``T_n = sum_i sum_j S_{i,j} n^j lambda_i^n`` over the distinct roots
``lambda_i`` (multiplicity ``m_i``) of ``X^r - a_1 X^{r-1} - ... - a_r``.
Roots come from companion-matrix eigenvalues and are grouped into
multiplicities by a declared clustering tolerance; the ``S_{i,j}`` solve a
confluent Vandermonde system against the initial terms.

All complex arithmetic stays in this module.  Public results are real
:class:`~combrec.core.Matrix` values guarded by an imaginary-residue check.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import FLOAT, Matrix
from .errors import (
    CoefficientError,
    ConditioningError,
    DimensionError,
    ImaginaryResidueError,
    MultiplicityWarning,
    NotSimpleRootsError,
)

CLUSTER_TOL = 1e-7
MAX_CONDITION = 1e12
IMAG_TOL = 1e-8
PSD_TOL = 1e-9


def characteristic_polynomial(c):
    """Monic coefficients, highest degree first, of ``X^r - c_1 X^{r-1} - ... - c_r``.

    >>> characteristic_polynomial([1, 1])
    [1, -1, -1]
    """
    c = list(c)
    if not c:
        raise CoefficientError("need at least one coefficient")
    if c[-1] == 0:
        raise CoefficientError("the highest-lag coefficient must be nonzero")
    one = c[0] * 0 + 1
    return [one] + [-x for x in c]


@dataclass(frozen=True)
class SpectralData:
    """Distinct roots with multiplicities; ``warnings`` carries clustering doubts."""

    roots: tuple
    warnings: tuple = ()

    def __post_init__(self):
        roots = tuple((complex(lam), int(m)) for lam, m in self.roots)
        if any(m < 1 for _, m in roots):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "roots", roots)

    @classmethod
    def exact(cls, pairs):
        """User-supplied roots and multiplicities, bypassing root finding."""
        return cls(tuple(pairs))

    @property
    def order(self):
        return sum(m for _, m in self.roots)

    @property
    def s(self):
        return len(self.roots)

    @property
    def simple(self):
        return all(m == 1 for _, m in self.roots)


def _clusters(z, tol):
    # single-linkage grouping of points closer than tol
    n = len(z)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(n):
        for b in range(a + 1, n):
            if abs(z[a] - z[b]) <= tol:
                parent[find(a)] = find(b)
    groups = {}
    for a in range(n):
        groups.setdefault(find(a), []).append(a)
    return sorted(tuple(sorted(g)) for g in groups.values())


def polynomial_roots(poly):
    """All complex roots of a monic polynomial via companion-matrix eigenvalues."""
    coeffs = np.array([complex(c) for c in poly])
    if coeffs[0] != 1:
        raise CoefficientError("polynomial must be monic")
    deg = len(coeffs) - 1
    if deg < 1:
        raise CoefficientError("polynomial must have degree at least 1")
    comp = np.zeros((deg, deg), dtype=complex)
    comp[0, :] = -coeffs[1:]
    comp[np.arange(1, deg), np.arange(deg - 1)] = 1
    if np.all(coeffs.imag == 0):
        comp = comp.real
    return np.linalg.eigvals(comp).astype(complex)


def roots_with_multiplicities(poly, tol_cluster=CLUSTER_TOL):
    """Group the roots of ``poly`` into ``(lambda, multiplicity)`` pairs.

    Roots closer than ``tol_cluster`` after dividing by the largest root
    modulus share a cluster; its mean is the reported root.  When halving or
    doubling the tolerance changes the grouping, a
    :class:`~combrec.errors.MultiplicityWarning` is attached to the result.
    """
    z = polynomial_roots(poly)
    scale = float(np.max(np.abs(z))) or 1.0
    zs = z / scale
    groups = _clusters(zs, tol_cluster)
    notes = []
    if _clusters(zs, tol_cluster / 2) != groups or _clusters(zs, tol_cluster * 2) != groups:
        notes.append(MultiplicityWarning(
            f"root clustering is ambiguous near tolerance {tol_cluster:g}; multiplicities may be wrong"
        ))
    real_poly = all(complex(c).imag == 0 for c in poly)
    roots = []
    for g in groups:
        lam = complex(np.mean(z[list(g)]))
        if real_poly and abs(lam.imag) <= tol_cluster * scale:
            lam = complex(lam.real, 0.0)
        roots.append((lam, len(g)))
    roots.sort(key=lambda p: (p[0].real, p[0].imag))
    return SpectralData(tuple(roots), tuple(notes))


@dataclass(frozen=True)
class BinetDecomposition:
    spectral: SpectralData
    S: dict = field(repr=False)
    shape: tuple
    residual: float
    condition: float

    def coefficient(self, i, j):
        """``S_{i,j}`` as a complex numpy array (``i`` counts distinct roots from 0)."""
        return self.S[(i, j)]

    def terms(self):
        for i, (lam, m) in enumerate(self.spectral.roots):
            for j in range(m):
                yield i, j, lam, self.S[(i, j)]


def _columns(spectral):
    return [(i, j, lam) for i, (lam, m) in enumerate(spectral.roots) for j in range(m)]


def vandermonde(spectral, rows=None):
    """Confluent Vandermonde matrix with entry ``n^j lambda_i^n`` (``0^0 = 1``)."""
    cols = _columns(spectral)
    rows = len(cols) if rows is None else rows
    V = np.empty((rows, len(cols)), dtype=complex)
    for n in range(rows):
        for c, (_, j, lam) in enumerate(cols):
            V[n, c] = (n ** j) * (lam ** n)
    return V


def binet_solve(initial, spectral, max_condition=MAX_CONDITION):
    """Solve for ``S_{i,j}`` so the Binet sum reproduces ``T_0 .. T_{r-1}``."""
    r = spectral.order
    if len(initial) != r:
        raise DimensionError(f"need {r} initial terms to match the root multiplicities, got {len(initial)}")
    shape = initial[0].shape
    if any(t.shape != shape for t in initial):
        raise DimensionError("initial terms must share a shape")
    V = vandermonde(spectral)
    cond = float(np.linalg.cond(V))
    if not np.isfinite(cond) or cond > max_condition:
        hint = ""
        if any(lam == 0 and m > 1 for lam, m in spectral.roots):
            hint = " (a repeated zero root has no n^j 0^n representation)"
        raise ConditioningError(f"confluent Vandermonde system is ill-conditioned, cond ~ {cond:.3g}{hint}", cond)
    b = np.array([t.to_numpy().ravel() for t in initial], dtype=complex)
    x = np.linalg.solve(V, b)
    residual = float(np.max(np.abs(V @ x - b))) if b.size else 0.0
    S = {(i, j): x[c].reshape(shape) for c, (i, j, _) in enumerate(_columns(spectral))}
    return BinetDecomposition(spectral, S, shape, residual, cond)


def real_part_checked(arr, tol=IMAG_TOL):
    """Real part of ``arr`` as a float Matrix; raise if the imaginary part is not negligible."""
    arr = np.asarray(arr, dtype=complex)
    re, im = np.linalg.norm(arr.real), np.linalg.norm(arr.imag)
    if im > tol * (1.0 + re):
        raise ImaginaryResidueError(f"imaginary residue {im:.3g} exceeds {tol:g} * (1 + {re:.3g})")
    return Matrix._wrap(arr.real.copy(), FLOAT)


def binet_sum(dec, n):
    """Complex ``sum S_{i,j} n^j lambda_i^n`` without the real cast."""
    acc = np.zeros(dec.shape, dtype=complex)
    for _, j, lam, S in dec.terms():
        acc += S * ((n ** j) * (lam ** n))
    return acc


def binet_eval(dec, n):
    if n < 0:
        raise ValueError("n must be non-negative")
    return real_part_checked(binet_sum(dec, n))


def scalar_coefficients(A):
    """Plain scalars ``a_l`` of a tuple whose members are all ``a_l * I``."""
    vals = A.scalar_values()
    if vals is None:
        raise CoefficientError("Binet decomposition needs scalar-multiple-of-identity coefficients")
    return vals


def decompose(spec, tol_cluster=CLUSTER_TOL, spectral=None):
    """Binet decomposition of a scalar-coefficient :class:`RecurrenceSpec`."""
    if spectral is None:
        spectral = roots_with_multiplicities(characteristic_polynomial(scalar_coefficients(spec.coeffs)), tol_cluster)
    return binet_solve(spec.initial, spectral)


@dataclass(frozen=True)
class AtomReport:
    root: complex
    hermitian: bool
    min_eigenvalue: float
    psd: bool


@dataclass(frozen=True)
class MomentReport:
    atoms: tuple
    moment_min_eigenvalues: tuple
    verdict: bool

    @property
    def message(self):
        if self.verdict:
            support = ", ".join(f"{a.root.real:.12g}" for a in self.atoms)
            return f"operator moment sequence on {{{support}}}"
        return "not an operator moment sequence on the root set"


def atomic_moment_report(dec, sample_vectors, tol=PSD_TOL):
    """Check positivity of the atom weights and of sampled local moment matrices.

    Needs simple roots.  The verdict is positive only when every root is
    real, every ``S_i`` is Hermitian positive semidefinite and every local
    moment matrix ``(<T_{i+j} x, x>)`` built from ``sample_vectors`` is PSD.
    """
    if not dec.spectral.simple:
        raise NotSimpleRootsError("the atomic moment report requires simple characteristic roots")
    if len(dec.shape) != 2 or dec.shape[0] != dec.shape[1]:
        raise DimensionError("moment report needs square operator terms")
    atoms = []
    for i, (lam, _) in enumerate(dec.spectral.roots):
        S = dec.S[(i, 0)]
        size = 1.0 + float(np.linalg.norm(S))
        herm = float(np.linalg.norm(S - S.conj().T)) <= tol * size
        min_eig = float(np.min(np.linalg.eigvalsh((S + S.conj().T) / 2)))
        psd = herm and min_eig >= -tol * size and abs(lam.imag) <= tol
        atoms.append(AtomReport(lam, herm, min_eig, psd))
    r = dec.spectral.order
    T = [binet_eval(dec, k).to_numpy() for k in range(2 * r - 1)]
    mins = []
    for x in sample_vectors:
        x = np.asarray(x, dtype=float).ravel()
        q = [float(x @ Tk @ x) for Tk in T]
        M = np.array([[q[i + j] for j in range(r)] for i in range(r)])
        mins.append(float(np.min(np.linalg.eigvalsh(M))) / (1.0 + float(np.max(np.abs(M)))))
    moments_ok = all(m >= -tol for m in mins)
    verdict = all(a.psd for a in atoms) and moments_ok
    return MomentReport(tuple(atoms), tuple(mins), verdict)
