"""Circuits over qudit wires and realizations of Tracy-Singh products.

Matrix convention: a circuit whose gates are listed ``G_1, G_2, ..., G_k``
represents the product ``G_1 G_2 ... G_k``. The same holds for the factors of
a :class:`Factorization`, so ``c = L_1 L_2 ... L_k`` is stored in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import zip_longest

import numpy as np

from .gates import Gate, identity_gate, swap
from .linalg import DEFAULT_TOL, DimensionError, _frozen, max_abs_diff
from .tracy_singh import get_dim_cap


@dataclass(frozen=True, eq=False)
class PlacedGate:
    gate: Gate
    wires: tuple[int, ...]

    def __post_init__(self):
        wires = tuple(int(w) for w in self.wires)
        object.__setattr__(self, "wires", wires)
        if len(set(wires)) != len(wires):
            raise ValueError(f"PlacedGate: repeated wire in {wires}")
        if len(wires) != self.gate.k:
            raise DimensionError(
                f"PlacedGate: gate of arity {self.gate.k} placed on {len(wires)} wires {wires}"
            )


Layer = tuple[PlacedGate, ...]


@dataclass(frozen=True, eq=False)
class Circuit:
    """``width`` wires of local dimension ``d`` and an ordered list of layers.

    Gates inside a layer act on disjoint wires, so their order within the
    layer does not matter.
    """

    width: int
    d: int
    layers: tuple[Layer, ...] = field(default_factory=tuple)

    def __post_init__(self):
        layers = tuple(tuple(layer) for layer in self.layers)
        object.__setattr__(self, "layers", layers)
        if self.width < 1 or self.d < 1:
            raise DimensionError(f"Circuit: need width >= 1 and d >= 1, got {self.width}, {self.d}")
        for li, layer in enumerate(layers):
            used: set[int] = set()
            for pg in layer:
                if pg.gate.d != self.d:
                    raise DimensionError(
                        f"Circuit layer {li}: gate {pg.gate.name or ''} has d={pg.gate.d}, "
                        f"circuit has d={self.d}"
                    )
                for w in pg.wires:
                    if not 0 <= w < self.width:
                        raise ValueError(f"Circuit layer {li}: wire {w} outside 0..{self.width - 1}")
                    if w in used:
                        raise ValueError(f"Circuit layer {li}: wire {w} used twice")
                    used.add(w)

    @property
    def gates(self) -> list[PlacedGate]:
        return [pg for layer in self.layers for pg in layer]

    def __len__(self):
        return len(self.layers)

    def shifted(self, offset: int, width: int | None = None) -> "Circuit":
        width = self.width + offset if width is None else width
        layers = [
            tuple(PlacedGate(pg.gate, tuple(w + offset for w in pg.wires)) for pg in layer)
            for layer in self.layers
        ]
        return Circuit(width, self.d, tuple(layers))

    def __add__(self, other: "Circuit") -> "Circuit":
        if (self.width, self.d) != (other.width, other.d):
            raise DimensionError("Circuit concatenation needs equal width and d")
        return Circuit(self.width, self.d, self.layers + other.layers)


def merge_parallel(a: Circuit, b: Circuit) -> Circuit:
    """Run ``a`` and ``b`` side by side, layer by layer; they must use disjoint wires."""
    if (a.width, a.d) != (b.width, b.d):
        raise DimensionError("merge_parallel needs equal width and d")
    layers = [tuple(x or ()) + tuple(y or ()) for x, y in zip_longest(a.layers, b.layers)]
    return Circuit(a.width, a.d, tuple(layers))


def _apply_left(state: np.ndarray, pg: PlacedGate, n: int, d: int) -> np.ndarray:
    """Left-multiply ``state`` (shape ``(d,)*n + (N,)``) by ``pg`` embedded on its wires."""
    k = pg.gate.k
    g = pg.gate.matrix.reshape((d,) * (2 * k))
    out = np.tensordot(g, state, axes=(list(range(k, 2 * k)), list(pg.wires)))
    # tensordot puts the gate's output axes first; move them back into place.
    return np.moveaxis(out, list(range(k)), list(pg.wires))


def simulate(circuit: Circuit, dim_cap: int | None = None) -> np.ndarray:
    """The ``d^n x d^n`` matrix ``G_1 G_2 ... G_k`` of the circuit's gates in order.

    A gate on wires ``(w_1, ..., w_k)`` acts as identity on every other wire;
    a 2-qudit gate on ``(j-1, j)`` embeds as ``I^(j-1) (x) g (x) I^(n-j-1)``.
    """
    n, d = circuit.width, circuit.d
    dim = d ** n
    cap = get_dim_cap(dim_cap)
    if dim > cap:
        raise DimensionError(f"simulate: dimension {dim} exceeds the cap {cap}")
    state = np.eye(dim, dtype=np.complex128).reshape((d,) * n + (dim,))
    for pg in reversed(circuit.gates):
        state = _apply_left(state, pg, n, d)
    return _frozen(np.ascontiguousarray(state.reshape(dim, dim)))


def sandwich_realization(c: Gate, cp: Gate) -> Circuit:
    """Four-wire circuit ``SWAP(1,2) . (c on 0,1 and cp on 2,3) . SWAP(1,2)``."""
    if c.k != 2 or cp.k != 2:
        raise DimensionError("sandwich_realization: both gates must be 2-qudit gates")
    if c.d != cp.d:
        raise DimensionError(f"sandwich_realization: local dimensions differ ({c.d} vs {cp.d})")
    sw = PlacedGate(swap(c.d), (1, 2))
    middle = (PlacedGate(c, (0, 1)), PlacedGate(cp, (2, 3)))
    return Circuit(4, c.d, ((sw,), middle, (sw,)))


# Factorizations ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Factor:
    """Either a 2-qudit gate ``U`` (kind ``"U"``) or a local pair ``S (x) T``."""

    kind: str
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.kind == "U":
            if len(self.gates) != 1 or self.gates[0].k != 2:
                raise ValueError("Factor 'U' takes exactly one 2-qudit gate")
        elif self.kind == "local":
            if len(self.gates) != 2 or any(g.k != 1 for g in self.gates):
                raise ValueError("Factor 'local' takes exactly two 1-qudit gates S, T")
        else:
            raise ValueError(f"Factor kind must be 'U' or 'local', got {self.kind!r}")
        if len({g.d for g in self.gates}) != 1:
            raise DimensionError("Factor: S and T must share the local dimension")

    @classmethod
    def universal(cls, u: Gate) -> "Factor":
        return cls("U", (u,))

    @classmethod
    def local(cls, s: Gate, t: Gate) -> "Factor":
        return cls("local", (s, t))

    @property
    def d(self) -> int:
        return self.gates[0].d

    @property
    def matrix(self) -> np.ndarray:
        if self.kind == "U":
            return self.gates[0].matrix
        return np.kron(self.gates[0].matrix, self.gates[1].matrix)

    def placed(self, offset: int) -> Layer:
        if self.kind == "U":
            return (PlacedGate(self.gates[0], (offset, offset + 1)),)
        s, t = self.gates
        return (PlacedGate(s, (offset,)), PlacedGate(t, (offset + 1,)))


@dataclass(frozen=True, eq=False)
class Factorization:
    """``target = L_1 L_2 ... L_k`` with each ``L_i`` a :class:`Factor`.

    The product is checked against the target on construction.
    """

    target: Gate
    factors: tuple[Factor, ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.target.k != 2:
            raise DimensionError("Factorization: target must be a 2-qudit gate")
        if not self.factors:
            raise ValueError("Factorization: empty factor list")
        for pos, f in enumerate(self.factors):
            if f.d != self.target.d:
                raise DimensionError(
                    f"Factorization: factor {pos} has d={f.d}, target has d={self.target.d}"
                )
        res = self.residual
        if res > self.tol:
            raise ValueError(
                f"Factorization: product of factors differs from target by {res:.3e} "
                f"(tolerance {self.tol:.1e})"
            )

    @property
    def d(self) -> int:
        return self.target.d

    def product(self) -> np.ndarray:
        out = np.eye(self.target.size, dtype=np.complex128)
        for f in self.factors:
            out = out @ f.matrix
        return out

    @property
    def residual(self) -> float:
        return max_abs_diff(self.product(), self.target.matrix)

    def to_circuit(self) -> Circuit:
        """The factors as a 2-wire circuit, one layer per factor."""
        return Circuit(2, self.d, tuple(f.placed(0) for f in self.factors))


def _identity_factor(d: int) -> Factor:
    eye = identity_gate(d, 1)
    return Factor.local(eye, eye)


def realize_boxtimes(fc: Factorization, fcp: Factorization) -> Circuit:
    """Realize ``c [x] c'`` on four wires from factorizations of ``c`` and ``c'``.

    The circuit is the swap of wires 1 and 2, then one layer per index ``i``
    holding ``L_i`` on wires 0, 1 and ``M_i`` on wires 2, 3, then the swap
    again. The shorter factor list is padded at the end with ``I (x) I``.
    """
    if fc.d != fcp.d:
        raise DimensionError(f"realize_boxtimes: local dimensions differ ({fc.d} vs {fcp.d})")
    d = fc.d
    pad = _identity_factor(d)
    sw = (PlacedGate(swap(d), (1, 2)),)
    middle = [
        l_i.placed(0) + m_i.placed(2)
        for l_i, m_i in zip_longest(fc.factors, fcp.factors, fillvalue=pad)
    ]
    return Circuit(4, d, (sw, *middle, sw))


def block_swap_network(start: int, m: int, d: int, width: int) -> list[Layer]:
    """Adjacent transpositions exchanging wires ``[start, start+m)`` with ``[start+m, start+2m)``.

    Each element of the second block is bubbled left in turn, giving ``m*m``
    single-swap layers in a fixed order. The resulting permutation is its own
    inverse, so the same list serves on both sides of a sandwich.
    """
    sw = swap(d)
    layers = []
    for t in range(m):
        for pos in range(start + m + t - 1, start + t - 1, -1):
            layers.append((PlacedGate(sw, (pos, pos + 1)),))
    if layers and max(pg.wires[1] for (pg,) in layers) >= width:
        raise ValueError("block_swap_network: network runs past the circuit width")
    return layers


def iterate_realization(f: Factorization, k: int, dim_cap: int | None = None) -> Circuit:
    """Circuit on ``2^k`` wires realizing ``boxtimes_power(f.target, k)``.

    ``k = 1`` is the factorization itself and ``k = 2`` is
    ``realize_boxtimes(f, f)``. Each further step treats the previous circuit
    as a 2-qudit gate on composite qudits of ``m = 2^(k-2)`` wires each, runs
    two copies in parallel, and sandwiches them between wire-level networks
    that exchange the two middle composite qudits.
    """
    if k < 1:
        raise ValueError(f"iterate_realization: k must be >= 1, got {k}")
    d = f.d
    cap = get_dim_cap(dim_cap)
    width = 2 ** k
    if d ** width > cap:
        raise DimensionError(
            f"iterate_realization: {width} wires of dimension {d} give {d ** width} "
            f"which exceeds the cap {cap}"
        )
    circ = f.to_circuit()
    if k == 1:
        return circ
    circ = realize_boxtimes(f, f)
    for level in range(3, k + 1):
        half = 2 ** (level - 1)
        m = half // 2
        w = 2 * half
        inner = merge_parallel(
            Circuit(w, d, circ.layers), circ.shifted(half, width=w)
        )
        net = block_swap_network(m, m, d, w)
        circ = Circuit(w, d, (*net, *inner.layers, *net))
    return circ
