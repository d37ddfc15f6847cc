"""Block partitions and the Tracy-Singh (block Kronecker) product."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .linalg import (
    DimensionError,
    _frozen,
    as_cmatrix,
    commutation_matrix,
    is_perfect_square,
    kron,
)

DEFAULT_DIM_CAP = 10_000


def get_dim_cap(dim_cap: int | None = None) -> int:
    """Resolve the dimension cap: explicit value, then ``BOXTIMES_DIM_CAP``, then 10 000."""
    if dim_cap is not None:
        return int(dim_cap)
    env = os.environ.get("BOXTIMES_DIM_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"BOXTIMES_DIM_CAP must be an integer, got {env!r}") from None
    return DEFAULT_DIM_CAP


@dataclass(frozen=True)
class BlockPartition:
    """Block heights (``row_cuts``) and widths (``col_cuts``) of a matrix."""

    row_cuts: tuple[int, ...]
    col_cuts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "row_cuts", tuple(int(x) for x in self.row_cuts))
        object.__setattr__(self, "col_cuts", tuple(int(x) for x in self.col_cuts))
        for label, cuts in (("row_cuts", self.row_cuts), ("col_cuts", self.col_cuts)):
            if not cuts:
                raise ValueError(f"BlockPartition: {label} is empty")
            for pos, size in enumerate(cuts):
                if size < 1:
                    raise ValueError(f"BlockPartition: {label}[{pos}] = {size} is not positive")

    @property
    def shape(self) -> tuple[int, int]:
        return sum(self.row_cuts), sum(self.col_cuts)

    @property
    def row_offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.row_cuts)])

    @property
    def col_offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.col_cuts)])

    @property
    def T(self) -> "BlockPartition":
        return BlockPartition(self.col_cuts, self.row_cuts)

    @classmethod
    def trivial(cls, shape) -> "BlockPartition":
        return cls((shape[0],), (shape[1],))

    @classmethod
    def uniform(cls, n_row_blocks: int, height: int, n_col_blocks: int, width: int):
        return cls((height,) * n_row_blocks, (width,) * n_col_blocks)


def _check_cuts(what: str, left: tuple[int, ...], right: tuple[int, ...]):
    if left == right:
        return
    for pos, (a, b) in enumerate(zip(left, right)):
        if a != b:
            raise DimensionError(f"{what}: cut {pos} differs ({a} vs {b})")
    raise DimensionError(f"{what}: {len(left)} cuts vs {len(right)} cuts")


@dataclass(frozen=True, eq=False)
class PartitionedMatrix:
    """A matrix together with a block partition whose sums match its shape."""

    matrix: np.ndarray
    partition: BlockPartition

    def __post_init__(self):
        mat = as_cmatrix(self.matrix)
        object.__setattr__(self, "matrix", mat)
        rows, cols = self.partition.shape
        if mat.shape != (rows, cols):
            raise DimensionError(
                f"PartitionedMatrix: partition covers {rows}x{cols} but matrix is "
                f"{mat.shape[0]}x{mat.shape[1]}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def block(self, i: int, j: int) -> np.ndarray:
        r = self.partition.row_offsets
        c = self.partition.col_offsets
        return self.matrix[r[i]:r[i + 1], c[j]:c[j + 1]]

    @property
    def T(self) -> "PartitionedMatrix":
        return PartitionedMatrix(self.matrix.T, self.partition.T)

    # Block-wise algebra; conformality is checked eagerly.

    def __add__(self, other: "PartitionedMatrix") -> "PartitionedMatrix":
        _check_cuts("add (rows)", self.partition.row_cuts, other.partition.row_cuts)
        _check_cuts("add (cols)", self.partition.col_cuts, other.partition.col_cuts)
        return PartitionedMatrix(self.matrix + other.matrix, self.partition)

    def __matmul__(self, other: "PartitionedMatrix") -> "PartitionedMatrix":
        _check_cuts("matmul (inner)", self.partition.col_cuts, other.partition.row_cuts)
        return PartitionedMatrix(
            self.matrix @ other.matrix,
            BlockPartition(self.partition.row_cuts, other.partition.col_cuts),
        )

    def scale(self, s: complex) -> "PartitionedMatrix":
        return PartitionedMatrix(s * self.matrix, self.partition)

    def inv(self) -> "PartitionedMatrix":
        """Inverse, partitioned so that ``A @ A.inv()`` has matching row/col cuts."""
        return PartitionedMatrix(np.linalg.inv(self.matrix), self.partition.T)


def canonical_partition(a) -> PartitionedMatrix:
    """Partition an ``n^2 x p^2`` matrix into an ``n x p`` grid of ``n x p`` blocks."""
    a = as_cmatrix(a)
    rows, cols = a.shape
    n = is_perfect_square(rows)
    if n is None:
        raise DimensionError(f"canonical_partition: row count {rows} is not a perfect square")
    p = is_perfect_square(cols)
    if p is None:
        raise DimensionError(f"canonical_partition: column count {cols} is not a perfect square")
    return PartitionedMatrix(a, BlockPartition.uniform(n, n, p, p))


def _as_partitioned(x) -> PartitionedMatrix:
    if isinstance(x, PartitionedMatrix):
        return x
    return canonical_partition(x)


def tracy_singh_partitioned(a, b) -> PartitionedMatrix:
    """Tracy-Singh product returned with its natural fine partition.

    Block ``(ij, kl)`` of the result is ``A_ij (x) B_kl``; the outer index pair
    ``(i, j)`` runs over the blocks of ``a`` and the inner pair ``(k, l)`` over
    the blocks of ``b``. The returned partition has one block per ``(i, k)``
    row pair and ``(j, l)`` column pair, which is what associativity and the
    mixed-product rule need. Plain arrays are given their canonical partition.
    """
    a = _as_partitioned(a)
    b = _as_partitioned(b)
    pa, pb = a.partition, b.partition
    m, n = a.shape
    p, q = b.shape

    row_cuts = tuple(mi * pk for mi in pa.row_cuts for pk in pb.row_cuts)
    col_cuts = tuple(nj * ql for nj in pa.col_cuts for ql in pb.col_cuts)
    out = np.empty((m * p, n * q), dtype=np.complex128)

    ar, ac = pa.row_offsets, pa.col_offsets
    br, bc = pb.row_offsets, pb.col_offsets
    r0 = 0
    for i, mi in enumerate(pa.row_cuts):
        c0 = 0
        for j, nj in enumerate(pa.col_cuts):
            a_ij = a.matrix[ar[i]:ar[i + 1], ac[j]:ac[j + 1]]
            r = r0
            for k, pk in enumerate(pb.row_cuts):
                c = c0
                for l, ql in enumerate(pb.col_cuts):
                    b_kl = b.matrix[br[k]:br[k + 1], bc[l]:bc[l + 1]]
                    out[r:r + mi * pk, c:c + nj * ql] = np.kron(a_ij, b_kl)
                    c += nj * ql
                r += mi * pk
            c0 += nj * q
        r0 += mi * p
    return PartitionedMatrix(out, BlockPartition(row_cuts, col_cuts))


def tracy_singh(a, b) -> np.ndarray:
    """Tracy-Singh product ``a [x] b`` as a plain matrix.

    >>> import numpy as np
    >>> tracy_singh(np.eye(4), np.eye(4)).shape
    (16, 16)
    """
    return _frozen(np.array(tracy_singh_partitioned(a, b).matrix))


def ts_via_commutation(c, cp) -> np.ndarray:
    """Canonical Tracy-Singh product through the commutation-matrix factorization.

    Computes ``(I_n (x) K (x) I_m) (c (x) cp) (I_p (x) K' (x) I_q)`` for ``c`` of
    shape ``n^2 x p^2`` and ``cp`` of shape ``m^2 x q^2``. ``K`` moves the middle
    factors ``C^n (x) C^m`` to ``C^m (x) C^n`` on the output side and ``K'``
    does ``C^q (x) C^p -> C^p (x) C^q`` on the input side.
    """
    c = canonical_partition(c).matrix
    cp = canonical_partition(cp).matrix
    n, p = is_perfect_square(c.shape[0]), is_perfect_square(c.shape[1])
    m, q = is_perfect_square(cp.shape[0]), is_perfect_square(cp.shape[1])
    left = kron(np.eye(n), commutation_matrix(n, m), np.eye(m))
    right = kron(np.eye(p), commutation_matrix(q, p), np.eye(q))
    return _frozen(left @ kron(c, cp) @ right)


def boxtimes_power(c, k: int, dim_cap: int | None = None) -> np.ndarray:
    """Iterate ``C -> C [x] C`` starting from ``c``, ``k - 1`` times.

    For a ``d^2 x d^2`` gate the result has size ``d^(2^k)`` and can be read as
    a 2-qudit gate on qudits of dimension ``d^(2^(k-1))``.
    """
    if k < 1:
        raise ValueError(f"boxtimes_power: k must be >= 1, got {k}")
    c = as_cmatrix(c, "boxtimes_power")
    if c.shape[0] != c.shape[1] or is_perfect_square(c.shape[0]) is None:
        raise DimensionError(f"boxtimes_power: expected a square d^2 x d^2 gate, got {c.shape}")
    cap = get_dim_cap(dim_cap)
    final = c.shape[0] ** (2 ** (k - 1))
    if final > cap:
        raise DimensionError(
            f"boxtimes_power: result dimension {final} exceeds the cap {cap} "
            f"(set BOXTIMES_DIM_CAP to raise it)"
        )
    out = c
    for _ in range(k - 1):
        out = tracy_singh(out, out)
    return out
