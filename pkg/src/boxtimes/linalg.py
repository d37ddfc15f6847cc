"""Dense complex matrix helpers.

Every matrix in the package is a two-dimensional ``complex128`` numpy array.
Composite indices are first-factor-major, i.e. the basis of
``C^a (x) C^b`` is ordered ``e_0 (x) e_0, e_0 (x) e_1, ...``, which is the
order produced by :func:`numpy.kron`.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

DEFAULT_TOL = 1e-10


class DimensionError(ValueError):
    """Raised when matrix shapes are incompatible with an operation."""


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Validate ``a`` and return it as a read-only 2-D complex array.

    Parameters
    ----------
    a : array_like
        Anything numpy can turn into a 2-D array of numbers.
    name : str
        Used in error messages.

    Returns
    -------
    numpy.ndarray
        A fresh ``complex128`` array with ``writeable=False``.
    """
    arr = np.array(a, dtype=np.complex128, copy=True)
    if arr.ndim != 2:
        raise DimensionError(f"{name}: expected a 2-D matrix, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name}: empty matrix of shape {arr.shape}")
    bad = ~np.isfinite(arr)
    if bad.any():
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        raise ValueError(f"{name}: non-finite entry at index {idx}")
    arr.flags.writeable = False
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def identity(n: int) -> np.ndarray:
    if n < 1:
        raise DimensionError(f"identity: size must be >= 1, got {n}")
    return _frozen(np.eye(n, dtype=np.complex128))


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: cannot multiply {a.shape} by {b.shape}")
    return _frozen(a @ b)


def kron(*factors) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not factors:
        raise DimensionError("kron: need at least one factor")
    mats = [np.asarray(f, dtype=np.complex128) for f in factors]
    return _frozen(reduce(np.kron, mats))


def kron_power(a, n: int) -> np.ndarray:
    if n < 1:
        raise DimensionError(f"kron_power: exponent must be >= 1, got {n}")
    return kron(*([a] * n))


def commutation_matrix(m: int, n: int) -> np.ndarray:
    """The ``mn x mn`` permutation with ``K (e_i (x) e_j) = e_j (x) e_i``.

    Here ``e_i`` ranges over ``C^m`` and ``e_j`` over ``C^n``, so ``K`` maps
    ``C^m (x) C^n`` onto ``C^n (x) C^m``. Equivalently ``K vec(X) = vec(X^T)``
    for ``X`` of shape ``(n, m)`` with column-major ``vec``.
    """
    if m < 1 or n < 1:
        raise DimensionError(f"commutation_matrix: dimensions must be >= 1, got ({m}, {n})")
    i, j = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    src = (i * n + j).ravel()
    dst = (j * m + i).ravel()
    out = np.zeros((m * n, m * n), dtype=np.complex128)
    out[dst, src] = 1.0
    return _frozen(out)


def swap_matrix(d: int) -> np.ndarray:
    """Swap of the two tensor factors of ``C^d (x) C^d``."""
    return commutation_matrix(d, d)


def middle_swap(d: int) -> np.ndarray:
    """``I_d (x) P (x) I_d`` on ``(C^d)^(x)4``: exchanges the two middle factors."""
    eye = np.eye(d, dtype=np.complex128)
    return kron(eye, swap_matrix(d), eye)


def partial_trace_second(a, d1: int, d2: int) -> np.ndarray:
    """Trace out the second factor of an operator on ``C^d1 (x) C^d2``."""
    a = np.asarray(a, dtype=np.complex128)
    n = d1 * d2
    if a.ndim != 2 or a.shape != (n, n):
        raise DimensionError(
            f"partial_trace_second: expected a square matrix of size {d1}*{d2}={n}, "
            f"got shape {a.shape}"
        )
    return _frozen(np.einsum("ijkj->ik", a.reshape(d1, d2, d1, d2)))


def max_abs_diff(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"max_abs_diff: shape mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def approx_eq(a, b, tol: float = DEFAULT_TOL) -> bool:
    """True iff the shapes match and every entry differs by at most ``tol``."""
    if tol < 0:
        raise ValueError(f"approx_eq: tolerance must be non-negative, got {tol}")
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return max_abs_diff(a, b) <= tol


def inverse(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name}: cannot invert non-square shape {a.shape}")
    try:
        inv = np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"{name}: matrix is singular") from exc
    if not np.all(np.isfinite(inv)):
        raise np.linalg.LinAlgError(f"{name}: matrix is numerically singular")
    return _frozen(inv)


def is_perfect_square(n: int) -> int | None:
    """Return ``r`` with ``r*r == n``, or ``None``."""
    r = int(round(n ** 0.5))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == n:
            return cand
    return None
