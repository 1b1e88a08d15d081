"""Block companion matrix of a recurrence and two ways to raise it to a power.

The companion matrix acts on the state ``Y_n = (u_{n+r-1}, ..., u_n)``:
its first block row holds the coefficients by increasing lag and the block
subdiagonal holds identities, so ``Y_{n+1} = B Y_n``.

The closed form expresses the blocks of ``B^n`` through ``rho``.  In the
raw formula, block ``(i, k)`` describes how ``u_{n+i}`` depends on
``u_{r-1-k}``.  The state vector lists ``u_{n+i}`` at row ``r-1-i`` and
``u_{r-1-k}`` at column ``k``, so rows are flipped and columns kept
(:data:`ORIENTATION`); ``tests/test_companion.py`` recovers the same map by
trying all four flips against the naive power.
"""

from dataclasses import dataclass

from .core import Matrix, mat_power_naive
from .errors import DimensionError, RangeError
from .rho import coefficient_for_position, rho_dp

#: (flip rows, flip columns) applied to the raw entry formula
ORIENTATION = (True, False)


@dataclass(frozen=True)
class BlockMatrix:
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(row) for row in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        r = len(blocks)
        if r == 0 or any(len(row) != r for row in blocks):
            raise DimensionError("block matrix must be r x r")
        d = blocks[0][0].dim
        if any(b.shape != (d, d) for row in blocks for b in row):
            raise DimensionError("all blocks must be d x d")

    @property
    def r(self):
        return len(self.blocks)

    @property
    def d(self):
        return self.blocks[0][0].dim

    @property
    def mode(self):
        return self.blocks[0][0].mode

    def __getitem__(self, ik):
        i, k = ik
        return self.blocks[i][k]

    def __eq__(self, other):
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        return self.blocks == other.blocks

    __hash__ = None

    def flatten(self):
        r, d = self.r, self.d
        rows = []
        for i in range(r):
            for a in range(d):
                rows.append([self.blocks[i][k][a, b] for k in range(r) for b in range(d)])
        return Matrix(rows, self.mode)

    @classmethod
    def from_flat(cls, m, r, d):
        if m.shape != (r * d, r * d):
            raise DimensionError(f"expected a {r * d} x {r * d} matrix, got {m.shape}")
        arr = m.array
        return cls(tuple(
            tuple(Matrix._wrap(arr[i * d:(i + 1) * d, k * d:(k + 1) * d].copy(), m.mode) for k in range(r))
            for i in range(r)
        ))

    @classmethod
    def identity(cls, r, d, mode):
        eye, zero = Matrix.identity(d, mode), Matrix.zeros(d, mode=mode)
        return cls(tuple(tuple(eye if i == k else zero for k in range(r)) for i in range(r)))


def build_companion(A):
    """Companion block matrix with ``c_{j+1}`` in block ``(0, j)`` and ``I`` on the subdiagonal."""
    r, d, mode = A.r, A.d, A.mode
    eye, zero = Matrix.identity(d, mode), Matrix.zeros(d, mode=mode)
    rows = [tuple(A.lag(j + 1) for j in range(r))]
    for i in range(1, r):
        rows.append(tuple(eye if k == i - 1 else zero for k in range(r)))
    return BlockMatrix(tuple(rows))


def companion_power_naive(B, n):
    """``B**n`` by repeated squaring of the flattened ``rd x rd`` matrix."""
    if n < 0:
        raise ValueError("negative exponent")
    return BlockMatrix.from_flat(mat_power_naive(B.flatten(), n), B.r, B.d)


def c_block(s, k, A):
    """Coefficient at multi-index position ``s + k`` when ``s + k <= r - 1``, else zero."""
    r = A.r
    if not (0 <= s <= r - 1 and 0 <= k <= r - 1):
        raise RangeError(f"block indices ({s}, {k}) outside 0..{r - 1}")
    if s + k <= r - 1:
        return coefficient_for_position(A, s + k)
    return Matrix.zeros(A.d, mode=A.mode)


def raw_entries(A, n, table=None):
    """Unoriented grid ``F[i][k] = sum_s rho(n+i-s) C_{s,k}``, evaluated for any ``n >= 0``."""
    A.require_certified()
    r = A.r
    if table is None or n + r - 1 > table.n_max:
        table = rho_dp(n + r - 1, A)
    C = [[c_block(s, k, A) for k in range(r)] for s in range(r)]
    grid = []
    for i in range(r):
        row = []
        for k in range(r):
            acc = table[n + i] @ C[0][k]
            for s in range(1, r):
                acc = acc + table[n + i - s] @ C[s][k]
            row.append(acc)
        grid.append(row)
    return grid


def orient(grid, flip_rows, flip_cols):
    r = len(grid)
    ri = (lambda i: r - 1 - i) if flip_rows else (lambda i: i)
    ci = (lambda k: r - 1 - k) if flip_cols else (lambda k: k)
    return BlockMatrix(tuple(tuple(grid[ri(i)][ci(k)] for k in range(r)) for i in range(r)))


def entry_formula(A, n, table=None, orientation=ORIENTATION):
    """The closed-form block matrix without the ``n >= r`` guard.

    Below ``n = r`` the rho boundary zeros make this differ from ``B**n``;
    kept public so that failure can be demonstrated.
    """
    return orient(raw_entries(A, n, table), *orientation)


def companion_power_closed(A, n, table=None):
    """``B**n`` from the rho closed form; valid for ``n >= r``."""
    if n < A.r:
        raise RangeError(f"closed form for B**n needs n >= r = {A.r}; use companion_power_naive")
    return entry_formula(A, n, table)
