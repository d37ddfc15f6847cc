"""Gate objects, Yang-Baxter and unitarity checks, entanglement classification."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    as_cmatrix,
    identity,
    kron,
    max_abs_diff,
    swap_matrix,
)
from .tracy_singh import tracy_singh

RANK_TOL = 1e-8


class EntanglementClass(str, Enum):
    PRIMITIVE_TENSOR = "primitive-tensor"
    PRIMITIVE_SWAP = "primitive-swap"
    ENTANGLING = "entangling"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class Gate:
    """A square matrix acting on ``k`` qudits of local dimension ``d``.

    ``d`` and ``k`` are stored rather than inferred, so a 16x16 matrix can be
    a 2-qudit gate with ``d=4`` or a 4-qudit gate with ``d=2``.
    """

    matrix: np.ndarray
    d: int
    k: int = 2
    name: str | None = None

    def __post_init__(self):
        mat = as_cmatrix(self.matrix, self.name or "gate")
        object.__setattr__(self, "matrix", mat)
        if self.d < 1 or self.k < 1:
            raise DimensionError(f"Gate: need d >= 1 and k >= 1, got d={self.d}, k={self.k}")
        size = self.d ** self.k
        if mat.shape != (size, size):
            raise DimensionError(
                f"Gate {self.name or ''}: matrix shape {mat.shape} does not match "
                f"d^k = {self.d}^{self.k} = {size}"
            )

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def inverse(self) -> "Gate":
        return Gate(np.linalg.inv(self.matrix), self.d, self.k)

    def boxtimes(self, other: "Gate") -> "Gate":
        """Canonical Tracy-Singh product viewed as a 2-qudit gate on ``C^(d d')``."""
        _require_arity(self, 2, "boxtimes")
        _require_arity(other, 2, "boxtimes")
        return Gate(tracy_singh(self.matrix, other.matrix), self.d * other.d, 2)


def _require_arity(g: Gate, k: int, op: str):
    if g.k != k:
        raise DimensionError(f"{op}: expected a {k}-qudit gate, got arity {g.k}")


def as_gate(g, d: int | None = None, k: int = 2) -> Gate:
    """Coerce an array to a :class:`Gate`; ``d`` defaults to the k-th root of the size."""
    if isinstance(g, Gate):
        return g
    mat = as_cmatrix(g)
    if d is None:
        d = int(round(mat.shape[0] ** (1.0 / k)))
        if d ** k != mat.shape[0]:
            raise DimensionError(f"as_gate: size {mat.shape[0]} is not a {k}-th power")
    return Gate(mat, d, k)


def ybe_sides(g: Gate) -> tuple[np.ndarray, np.ndarray]:
    g = as_gate(g)
    _require_arity(g, 2, "ybe_residual")
    eye = np.eye(g.d)
    c12 = np.kron(g.matrix, eye)
    c23 = np.kron(eye, g.matrix)
    return c12 @ c23 @ c12, c23 @ c12 @ c23


def ybe_residual(g: Gate) -> float:
    """Max-entry difference between ``c12 c23 c12`` and ``c23 c12 c23``."""
    lhs, rhs = ybe_sides(g)
    return max_abs_diff(lhs, rhs)


def is_yang_baxter(g: Gate, tol: float = DEFAULT_TOL) -> bool:
    return ybe_residual(g) <= tol


def unitarity_residual(g) -> float:
    mat = g.matrix if isinstance(g, Gate) else np.asarray(g, dtype=complex)
    return max_abs_diff(mat.conj().T @ mat, np.eye(mat.shape[0]))


def is_unitary(g, tol: float = DEFAULT_TOL) -> bool:
    return unitarity_residual(g) <= tol


def realign(mat, d1: int, d2: int | None = None) -> np.ndarray:
    """Realignment ``R[(i,k),(j,l)] = M[(i,j),(k,l)]`` of an operator on ``C^d1 (x) C^d2``.

    ``M = A (x) B`` exactly when ``R`` is the rank-one matrix ``vec(A) vec(B)^T``
    (row-major ``vec``).
    """
    d2 = d1 if d2 is None else d2
    mat = np.asarray(mat, dtype=np.complex128)
    n = d1 * d2
    if mat.shape != (n, n):
        raise DimensionError(f"realign: expected {n}x{n}, got {mat.shape}")
    t = mat.reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3)
    return t.reshape(d1 * d1, d2 * d2)


def _numerical_rank(mat, rel_tol: float) -> int:
    s = np.linalg.svd(mat, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def operator_schmidt_rank(g, rel_tol: float = RANK_TOL) -> int:
    g = as_gate(g)
    _require_arity(g, 2, "operator_schmidt_rank")
    return _numerical_rank(realign(g.matrix, g.d), rel_tol)


def _check_invertible(g: Gate, op: str):
    s = np.linalg.svd(g.matrix, compute_uv=False)
    if s[-1] <= 1e-12 * s[0]:
        raise np.linalg.LinAlgError(f"{op}: gate is singular (smallest singular value {s[-1]:.3g})")


def classify_entangling(g, rel_tol: float = RANK_TOL) -> EntanglementClass:
    """Classify a 2-qudit gate by operator Schmidt rank.

    ``primitive-tensor`` when ``g = c1 (x) c2``, ``primitive-swap`` when
    ``g = (c1 (x) c2) P`` with ``P`` the swap, ``entangling`` otherwise.
    Singular values below ``rel_tol * s_max`` count as zero.
    """
    g = as_gate(g)
    _require_arity(g, 2, "classify_entangling")
    _check_invertible(g, "classify_entangling")
    if operator_schmidt_rank(g, rel_tol) == 1:
        return EntanglementClass.PRIMITIVE_TENSOR
    gp = g.matrix @ swap_matrix(g.d)
    if _numerical_rank(realign(gp, g.d), rel_tol) == 1:
        return EntanglementClass.PRIMITIVE_SWAP
    return EntanglementClass.ENTANGLING


def product_probe_states(d: int) -> list[np.ndarray]:
    """``e_i (x) e_j`` plus ``u (x) v`` with ``u, v`` among normalized ``e_i + w e_k``
    for ``i < k`` and ``w`` in ``{1, 1j}``.

    The phase ``1j`` matters: CNOT fixes every real superposition probe up to
    a product, but not ``(e_0 + e_1) (x) (e_0 + 1j e_1)``.
    """
    eye = np.eye(d)
    singles = [eye[i] for i in range(d)]
    pairs = [
        (eye[i] + w * eye[k]) / np.sqrt(2)
        for i in range(d)
        for k in range(i + 1, d)
        for w in (1, 1j)
    ]
    probes = [np.kron(a, b) for a in singles for b in singles]
    probes += [np.kron(a, b) for a in pairs for b in pairs]
    return probes


def maps_products_to_products(g, rel_tol: float = RANK_TOL) -> bool:
    """Probe-set check: does ``g`` send every probe product state to a product state?

    Independent of :func:`classify_entangling`: it looks at output vectors,
    not at the operator's realignment.
    """
    g = as_gate(g)
    _require_arity(g, 2, "maps_products_to_products")
    for psi in product_probe_states(g.d):
        out = (g.matrix @ psi).reshape(g.d, g.d)
        if _numerical_rank(out, rel_tol) > 1:
            return False
    return True


def tensor_factor(g, rel_tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray] | None:
    """Split a primitive-tensor gate as ``c1 (x) c2``; ``None`` for any other class.

    ``c1`` has unit Frobenius norm and its largest-magnitude entry is real
    positive; the overall scale sits in ``c2``.
    """
    g = as_gate(g)
    if classify_entangling(g, rel_tol) is not EntanglementClass.PRIMITIVE_TENSOR:
        return None
    d = g.d
    u, s, vh = np.linalg.svd(realign(g.matrix, d))
    c1 = u[:, 0].reshape(d, d)
    c2 = s[0] * vh[0].reshape(d, d)
    lead = c1.flat[int(np.argmax(np.abs(c1)))]
    phase = lead / abs(lead)
    return as_cmatrix(c1 / phase), as_cmatrix(c2 * phase)


@dataclass(frozen=True)
class GateReport:
    is_unitary: bool
    unitarity_residual: float
    is_yang_baxter: bool
    ybe_residual: float
    entanglement_class: str
    operator_schmidt_rank: int

    def to_dict(self) -> dict:
        return asdict(self)

    def __str__(self):
        lines = [
            f"unitary:             {self.is_unitary} (residual {self.unitarity_residual:.3e})",
            f"yang-baxter:         {self.is_yang_baxter} (residual {self.ybe_residual:.3e})",
            f"entanglement class:  {self.entanglement_class}",
            f"operator Schmidt rk: {self.operator_schmidt_rank}",
        ]
        return "\n".join(lines)


def gate_report(g, tol: float = DEFAULT_TOL) -> GateReport:
    g = as_gate(g)
    ures = unitarity_residual(g)
    yres = ybe_residual(g)
    return GateReport(
        is_unitary=ures <= tol,
        unitarity_residual=ures,
        is_yang_baxter=yres <= tol,
        ybe_residual=yres,
        entanglement_class=classify_entangling(g).value,
        operator_schmidt_rank=operator_schmidt_rank(g),
    )


# Named gates -----------------------------------------------------------------

_R = 1 / np.sqrt(2)

KAUFFMAN_C = np.array(
    [
        [_R, 0, 0, _R],
        [0, _R, -_R, 0],
        [0, _R, _R, 0],
        [-_R, 0, 0, _R],
    ],
    dtype=np.complex128,
)

EXAMPLE_D = np.array(
    [
        [2, 0, 0, 0],
        [0, 0, 1, 0],
        [0, 1, 1.5, 0],
        [0, 0, 0, 2],
    ],
    dtype=np.complex128,
)

CNOT = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ],
    dtype=np.complex128,
)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) * _R


def swap(d: int = 2) -> Gate:
    return Gate(swap_matrix(d), d, 2, name=f"swap:{d}")


def identity_gate(d: int = 2, k: int = 2) -> Gate:
    return Gate(identity(d ** k), d, k, name=f"identity:{d}:{k}")


def diagonal_braiding(q) -> Gate:
    """The YBE solution ``e_i (x) e_j -> q[i, j] e_j (x) e_i``, i.e. ``P diag(q)``."""
    q = np.asarray(q, dtype=np.complex128)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise DimensionError(f"diagonal_braiding: q must be square, got {q.shape}")
    d = q.shape[0]
    return Gate(swap_matrix(d) @ np.diag(q.ravel()), d, 2, name="diagonal_braiding")


def builtin_gates() -> dict[str, Gate]:
    """The fixed-size named gates. ``swap`` and ``identity`` take parameters via
    :func:`get_builtin` (``"swap:3"``, ``"identity:2:1"``)."""
    return {
        "kauffman_c": Gate(KAUFFMAN_C, 2, 2, name="kauffman_c"),
        "example_d": Gate(EXAMPLE_D, 2, 2, name="example_d"),
        "cnot": Gate(CNOT, 2, 2, name="cnot"),
        "swap": swap(2),
        "identity": identity_gate(2, 2),
        "hadamard": Gate(HADAMARD, 2, 1, name="hadamard"),
    }


def get_builtin(text: str) -> Gate:
    """Look up ``name`` or ``name:arg[:arg]`` among the builtin gates."""
    name, *args = text.split(":")
    try:
        ints = [int(a) for a in args]
    except ValueError:
        raise KeyError(f"builtin gate {text!r}: arguments must be integers") from None
    if name == "swap" and ints:
        return swap(*ints[:1])
    if name == "identity" and ints:
        return identity_gate(*ints[:2])
    table = builtin_gates()
    if name not in table or ints:
        raise KeyError(
            f"unknown builtin gate {text!r}; available: "
            + ", ".join(sorted(table) + ["swap:<d>", "identity:<d>[:<k>]"])
        )
    return table[name]


def kron_gate(*gates: Gate) -> Gate:
    d = gates[0].d
    if any(g.d != d for g in gates):
        raise DimensionError("kron_gate: all factors must share the local dimension")
    return Gate(kron(*(g.matrix for g in gates)), d, sum(g.k for g in gates))
