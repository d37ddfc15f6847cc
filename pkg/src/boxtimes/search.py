"""Numerical search for enhanced pairs and the shipped fixture corpus.

Primitive pairs are searched inside a family where the commutation condition
holds by construction: ``c1``, ``c2`` and ``mu`` diagonal. The two partial
trace conditions are then solved by nonlinear least squares over the three
diagonals, and the solution is conjugated by a random well-conditioned ``S``
(``c -> (S (x) S) c (S (x) S)^-1``, ``mu -> S mu S^-1``), which preserves
every enhanced-pair condition and every invariant value.
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np
from scipy.optimize import least_squares

from .braids import EnhancedPair, check_enhanced_pair
from .gates import Gate, diagonal_braiding, swap
from .linalg import partial_trace_second, swap_matrix

ACCEPT_TOL = 1e-10

TENSOR = "tensor"
SWAP_FORM = "swap"


def _unpack(z: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    zc = z[: 3 * d] + 1j * z[3 * d:]
    return zc[:d], zc[d:2 * d], zc[2 * d:]


def _gate_from_diagonals(a, b, form: str) -> np.ndarray:
    c = np.kron(np.diag(a), np.diag(b))
    if form == SWAP_FORM:
        c = c @ swap_matrix(len(a))
    return c


def _residuals(z, d, form, norm2):
    a, b, m = _unpack(z, d)
    mu = np.diag(m)
    c = _gate_from_diagonals(a, b, form)
    mm = np.kron(mu, mu)
    r1 = partial_trace_second(c @ mm, d, d) - mu
    r2 = partial_trace_second(np.linalg.solve(c, mm), d, d) - mu
    r = np.concatenate([
        r1.ravel(),
        r2.ravel(),
        np.abs(a) ** 2 - 1,
        np.abs(b) ** 2 - 1,
        [np.sum(np.abs(m) ** 2) - norm2],
    ])
    return np.concatenate([r.real, r.imag])


def _random_invertible(rng, d, cond_max=3.0):
    while True:
        s = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        if np.linalg.cond(s) < cond_max:
            return s


def search_primitive_pair(
    rng: np.random.Generator,
    d: int = 2,
    form: str = TENSOR,
    conjugate: bool = True,
    max_tries: int = 200,
) -> EnhancedPair:
    """Find an enhanced pair whose gate is ``c1 (x) c2`` (``form="tensor"``)
    or ``(c1 (x) c2) P`` (``form="swap"``).

    Unknowns are the diagonals of ``c1``, ``c2`` and ``mu``. Besides the trace
    conditions the residual pins ``|c1_ii| = |c2_ii| = 1`` (so the gate is
    unitary before conjugation) and fixes ``||mu||_F`` to keep ``mu`` away
    from the trivial solution ``mu = 0``. Raises ``RuntimeError`` when no
    attempt drives the enhanced-pair residuals below :data:`ACCEPT_TOL`.
    """
    for _ in range(max_tries):
        norm2 = float(d) if form == SWAP_FORM else rng.uniform(0.6, 1.5)
        z0 = rng.normal(size=6 * d)
        sol = least_squares(
            _residuals, z0, args=(d, form, norm2), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15
        )
        if np.max(np.abs(sol.fun)) > 1e-12:
            continue
        a, b, m = _unpack(sol.x, d)
        c = _gate_from_diagonals(a, b, form)
        mu = np.diag(m)
        if conjugate:
            s = _random_invertible(rng, d)
            ss = np.kron(s, s)
            c = ss @ c @ np.linalg.inv(ss)
            mu = s @ mu @ np.linalg.inv(s)
        pair = EnhancedPair(Gate(c, d, 2), mu)
        if check_enhanced_pair(pair).max_residual < ACCEPT_TOL:
            return pair
    raise RuntimeError(f"search_primitive_pair: no {form} pair found in {max_tries} tries")


def random_trace_one(rng: np.random.Generator, d: int) -> np.ndarray:
    while True:
        mu = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        tr = np.trace(mu)
        if abs(tr) > 0.5:
            return mu / tr


def generate_corpus(seed: int = 20240611, d: int = 2) -> list[dict]:
    """Build the fixture corpus as a list of records ``{name, kind, pair}``.

    ``kind`` is the gate's expected class; every pair is validated before it
    is returned.
    """
    rng = np.random.default_rng(seed)
    records = []

    def add(name, kind, pair):
        rep = check_enhanced_pair(pair)
        if rep.max_residual >= ACCEPT_TOL:
            raise RuntimeError(f"corpus entry {name} rejected: residual {rep.max_residual:.3e}")
        records.append({"name": name, "kind": kind, "pair": EnhancedPair(pair.gate, pair.mu, name)})

    add("swap_identity", "primitive-swap", EnhancedPair(swap(d), np.eye(d)))
    for i in range(2):
        mu = random_trace_one(rng, d)
        add(f"identity_trace_one_{i}", "primitive-tensor", EnhancedPair(Gate(np.eye(d * d), d), mu))
    mu = -random_trace_one(rng, d)
    add("minus_identity_trace_minus_one", "primitive-tensor", EnhancedPair(Gate(-np.eye(d * d), d), mu))
    for i in range(4):
        add(f"tensor_search_{i}", "primitive-tensor", search_primitive_pair(rng, d, TENSOR))
    for i in range(3):
        add(f"swap_search_{i}", "primitive-swap", search_primitive_pair(rng, d, SWAP_FORM))
    for i in range(2):
        q = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(d, d)))
        np.fill_diagonal(q, 1.0)
        add(f"diagonal_braiding_{i}", "entangling", EnhancedPair(diagonal_braiding(q), np.eye(d)))
    return records


# Fixture files -----------------------------------------------------------------


def corpus_to_json(records: list[dict]) -> dict:
    from .io import gate_to_json, matrix_to_json

    return {
        "pairs": [
            {
                "name": r["name"],
                "kind": r["kind"],
                "gate": gate_to_json(r["pair"].gate),
                "enhancer": matrix_to_json(r["pair"].mu),
            }
            for r in records
        ]
    }


def corpus_from_json(obj: dict) -> list[dict]:
    from .io import gate_from_json, matrix_from_json

    out = []
    for entry in obj["pairs"]:
        pair = EnhancedPair(
            gate_from_json(entry["gate"]), matrix_from_json(entry["enhancer"]), entry["name"]
        )
        out.append({"name": entry["name"], "kind": entry["kind"], "pair": pair})
    return out


def load_corpus() -> list[dict]:
    """The shipped fixture corpus (see ``scripts/make_corpus.py``)."""
    text = resources.files("boxtimes.data").joinpath("corpus/enhanced_pairs.json").read_text()
    return corpus_from_json(json.loads(text))


def corpus_pairs(kind: str | None = None) -> list[EnhancedPair]:
    return [r["pair"] for r in load_corpus() if kind is None or r["kind"] == kind]
