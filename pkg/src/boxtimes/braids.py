"""Braid words, braid group representations from R-matrices, Turaev invariants."""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterable, Iterator

import numpy as np

from .gates import EntanglementClass, Gate, classify_entangling, ybe_residual
from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    as_cmatrix,
    inverse,
    kron,
    kron_power,
    max_abs_diff,
    partial_trace_second,
)
from .tracy_singh import tracy_singh

PAIR_TOL = 1e-9


class NotARepresentationWarning(UserWarning):
    """The gate fails the Yang-Baxter equation, so braid relations may not hold."""


class PairNotEnhancedWarning(UserWarning):
    """The (gate, enhancer) pair fails the enhanced-pair conditions."""


class HypothesisError(ValueError):
    """Inputs do not meet the preconditions of a product-formula check."""


_TOKEN = re.compile(r"^s(\d+)(\^(-?1))?$")


@dataclass(frozen=True)
class BraidWord:
    """A word in the generators ``s_1 .. s_{n-1}`` of the braid group ``B_n``.

    ``letters`` holds ``(j, e)`` pairs with ``1 <= j < n`` and ``e = +1/-1``.
    Letters compose left to right as operator products.
    """

    strands: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        letters = tuple((int(j), int(e)) for j, e in self.letters)
        object.__setattr__(self, "letters", letters)
        if self.strands < 2:
            raise ValueError(f"BraidWord: need at least 2 strands, got {self.strands}")
        for pos, (j, e) in enumerate(letters):
            if not 1 <= j < self.strands:
                raise ValueError(
                    f"BraidWord: letter {pos} uses generator s{j}, outside 1..{self.strands - 1}"
                )
            if e not in (1, -1):
                raise ValueError(f"BraidWord: letter {pos} has exponent {e}, expected +1 or -1")

    @classmethod
    def parse(cls, text: str, strands: int) -> "BraidWord":
        """Parse whitespace-separated tokens ``s<j>`` / ``s<j>^-1``."""
        letters = []
        for pos, tok in enumerate(text.split()):
            m = _TOKEN.match(tok)
            if m is None:
                raise ValueError(f"braid word: cannot parse token {pos} {tok!r}")
            letters.append((int(m.group(1)), int(m.group(3) or 1)))
        return cls(strands, tuple(letters))

    def __str__(self):
        return " ".join(f"s{j}" if e == 1 else f"s{j}^-1" for j, e in self.letters)

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise ValueError("BraidWord: cannot concatenate words on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple((j, -e) for j, e in reversed(self.letters)))

    def conjugate(self, g: "BraidWord") -> "BraidWord":
        """``g . self . g^-1``."""
        return g * self * g.inverse()

    def stabilize(self, sign: int = 1) -> "BraidWord":
        """Markov stabilization: ``self . s_n^sign`` in ``B_{n+1}``."""
        n = self.strands
        return BraidWord(n + 1, self.letters + ((n, sign),))


def all_words(strands: int, max_length: int) -> Iterator[BraidWord]:
    """Every braid word of length ``0..max_length`` in ``B_strands``, shortest first."""
    alphabet = [(j, e) for j in range(1, strands) for e in (1, -1)]
    for length in range(max_length + 1):
        for letters in iproduct(alphabet, repeat=length):
            yield BraidWord(strands, letters)


def _embedded_generators(c: np.ndarray, d: int, n: int) -> dict[tuple[int, int], np.ndarray]:
    cinv = np.linalg.inv(c)
    out = {}
    for j in range(1, n):
        left = np.eye(d ** (j - 1))
        right = np.eye(d ** (n - j - 1))
        out[(j, 1)] = np.kron(np.kron(left, c), right)
        out[(j, -1)] = np.kron(np.kron(left, cinv), right)
    return out


def _warn_if_not_ybe(c: Gate, tol: float):
    res = ybe_residual(c)
    if res > tol:
        warnings.warn(
            f"gate fails the Yang-Baxter equation (residual {res:.3e}); "
            "the braid map is not a representation",
            NotARepresentationWarning,
            stacklevel=3,
        )


def braid_rep(c: Gate, n: int, b: BraidWord, tol: float = DEFAULT_TOL, check: bool = True) -> np.ndarray:
    """Image of ``b`` under ``s_j -> I^(j-1) (x) c (x) I^(n-j-1)``.

    The result is the ordered product of the embedded ``c^(+-1)`` over the
    letters of ``b``; ``I_(d^n)`` for the empty word.
    """
    if c.k != 2:
        raise DimensionError(f"braid_rep: gate must be a 2-qudit gate, got arity {c.k}")
    if b.strands != n:
        raise DimensionError(f"braid_rep: word has {b.strands} strands, representation has {n}")
    if check:
        _warn_if_not_ybe(c, tol)
    gens = _embedded_generators(c.matrix, c.d, n)
    out = np.eye(c.d ** n, dtype=np.complex128)
    for letter in b.letters:
        out = out @ gens[letter]
    return out


@dataclass(frozen=True, eq=False)
class EnhancedPair:
    """A 2-qudit gate together with an enhancer ``mu`` acting on one qudit."""

    gate: Gate
    mu: np.ndarray
    name: str | None = None

    def __post_init__(self):
        if self.gate.k != 2:
            raise DimensionError("EnhancedPair: gate must be a 2-qudit gate")
        mu = as_cmatrix(self.mu, "enhancer")
        if mu.shape != (self.gate.d, self.gate.d):
            raise DimensionError(
                f"EnhancedPair: enhancer has shape {mu.shape}, expected "
                f"{self.gate.d}x{self.gate.d}"
            )
        object.__setattr__(self, "mu", mu)

    @property
    def d(self) -> int:
        return self.gate.d


@dataclass(frozen=True)
class PairReport:
    commutator_residual: float
    trace_residual_plus: float
    trace_residual_minus: float
    tol: float = PAIR_TOL

    @property
    def max_residual(self) -> float:
        return max(self.commutator_residual, self.trace_residual_plus, self.trace_residual_minus)

    @property
    def accepted(self) -> bool:
        return self.max_residual <= self.tol

    def to_dict(self) -> dict:
        return {
            "commutator_residual": self.commutator_residual,
            "trace_residual_plus": self.trace_residual_plus,
            "trace_residual_minus": self.trace_residual_minus,
            "tol": self.tol,
            "accepted": self.accepted,
        }


def check_enhanced_pair(p: EnhancedPair, tol: float = PAIR_TOL) -> PairReport:
    """Residuals of ``[c, mu (x) mu] = 0`` and ``Tr_2(c^(+-1) (mu (x) mu)) = mu``."""
    c = p.gate.matrix
    d = p.d
    cinv = inverse(c, "check_enhanced_pair")
    mm = kron(p.mu, p.mu)
    return PairReport(
        commutator_residual=max_abs_diff(c @ mm, mm @ c),
        trace_residual_plus=max_abs_diff(partial_trace_second(c @ mm, d, d), p.mu),
        trace_residual_minus=max_abs_diff(partial_trace_second(cinv @ mm, d, d), p.mu),
        tol=tol,
    )


def _warn_if_not_enhanced(p: EnhancedPair, tol: float):
    rep = check_enhanced_pair(p, tol)
    if not rep.accepted:
        warnings.warn(
            f"pair {p.name or ''} is not an enhanced pair (max residual {rep.max_residual:.3e})",
            PairNotEnhancedWarning,
            stacklevel=3,
        )


def _trace_against(rho: np.ndarray, mu_n: np.ndarray) -> complex:
    # Tr(rho @ mu_n) without forming the product
    return complex(np.sum(rho * mu_n.T))


def turaev_invariant(p: EnhancedPair, b: BraidWord, tol: float = PAIR_TOL, check: bool = True) -> complex:
    """``Tr(rho_n(b) mu^(x)n)`` for the pair's gate and enhancer."""
    if check:
        _warn_if_not_enhanced(p, tol)
    n = b.strands
    rho = braid_rep(p.gate, n, b, check=False)
    return _trace_against(rho, kron_power(p.mu, n))


def invariant_table(
    p: EnhancedPair, strands: int, max_length: int, tol: float = PAIR_TOL, check: bool = True
) -> dict[BraidWord, complex]:
    """Invariants of every word of length ``<= max_length`` in ``B_strands``.

    Walks the word tree depth first so each word costs one matrix product.
    """
    if check:
        _warn_if_not_enhanced(p, tol)
    gens = _embedded_generators(p.gate.matrix, p.d, strands)
    mu_n = kron_power(p.mu, strands)
    alphabet = [(j, e) for j in range(1, strands) for e in (1, -1)]
    table: dict[BraidWord, complex] = {}
    stack = [((), np.eye(p.d ** strands, dtype=np.complex128))]
    while stack:
        letters, rho = stack.pop()
        table[BraidWord(strands, letters)] = _trace_against(rho, mu_n)
        if len(letters) < max_length:
            for letter in alphabet:
                stack.append((letters + (letter,), rho @ gens[letter]))
    return table


def boxtimes_pair(p: EnhancedPair, q: EnhancedPair, tol: float = PAIR_TOL) -> EnhancedPair:
    """``(c [x] c', mu (x) eta)`` with the product gate on qudits of dimension ``d^2``."""
    if p.d != q.d:
        raise DimensionError(f"boxtimes_pair: local dimensions differ ({p.d} vs {q.d})")
    gate = Gate(tracy_singh(p.gate.matrix, q.gate.matrix), p.d * q.d, 2)
    out = EnhancedPair(gate, kron(p.mu, q.mu))
    if check_enhanced_pair(p, tol).accepted and check_enhanced_pair(q, tol).accepted:
        _warn_if_not_enhanced(out, tol)
    return out


@dataclass(frozen=True)
class ProductCheck:
    word: BraidWord
    lhs: complex
    rhs: complex

    @property
    def abs_error(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_dict(self) -> dict:
        return {
            "word": str(self.word),
            "strands": self.word.strands,
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "abs_error": self.abs_error,
        }


def _require_class(p: EnhancedPair, wanted: EntanglementClass, op: str, form: str):
    got = classify_entangling(p.gate)
    if got is not wanted:
        raise HypothesisError(
            f"{op}: needs both gates primitive of the form {form}; "
            f"gate {p.name or ''} is {got.value}"
        )


def _require_accepted(p: EnhancedPair, tol: float, op: str):
    rep = check_enhanced_pair(p, tol)
    if not rep.accepted:
        raise HypothesisError(
            f"{op}: pair {p.name or ''} is not an enhanced pair "
            f"(max residual {rep.max_residual:.3e} > {tol:.1e})"
        )


def _product_rows(p, q, words, tol) -> list[ProductCheck]:
    pq = boxtimes_pair(p, q, tol)
    rows = []
    for b in words:
        lhs = turaev_invariant(pq, b, check=False)
        rhs = turaev_invariant(p, b, check=False) * turaev_invariant(q, b, check=False)
        rows.append(ProductCheck(b, lhs, rhs))
    return rows


def verify_product_formula(
    p: EnhancedPair, q: EnhancedPair, b: BraidWord | Iterable[BraidWord], tol: float = PAIR_TOL
):
    """Compare ``I_(c [x] c')(b)`` with ``I_c(b) I_(c')(b)`` for tensor-form primitives.

    Both gates must classify as ``primitive-tensor`` and both pairs must be
    enhanced; otherwise :class:`HypothesisError` is raised. Returns one
    :class:`ProductCheck` for a single word, a list for an iterable.
    """
    if p.d != q.d:
        raise DimensionError(f"verify_product_formula: local dimensions differ ({p.d} vs {q.d})")
    for pair in (p, q):
        _require_class(pair, EntanglementClass.PRIMITIVE_TENSOR, "verify_product_formula", "c1 (x) c2")
        _require_accepted(pair, tol, "verify_product_formula")
    if isinstance(b, BraidWord):
        return _product_rows(p, q, [b], tol)[0]
    return _product_rows(p, q, list(b), tol)


def product_formula_table(
    p: EnhancedPair, q: EnhancedPair, strands: int, max_length: int, tol: float = PAIR_TOL
) -> list[ProductCheck]:
    """:func:`verify_product_formula` over all words up to ``max_length``, computed in bulk."""
    if p.d != q.d:
        raise DimensionError(f"product_formula_table: local dimensions differ ({p.d} vs {q.d})")
    for pair in (p, q):
        _require_class(pair, EntanglementClass.PRIMITIVE_TENSOR, "product_formula_table", "c1 (x) c2")
        _require_accepted(pair, tol, "product_formula_table")
    return _table_rows(p, q, strands, max_length, tol)


def _table_rows(p, q, strands, max_length, tol):
    ip = invariant_table(p, strands, max_length, check=False)
    iq = invariant_table(q, strands, max_length, check=False)
    ipq = invariant_table(boxtimes_pair(p, q, tol), strands, max_length, check=False)
    return [ProductCheck(b, ipq[b], ip[b] * iq[b]) for b in ip]


def explore_swap_form(
    p: EnhancedPair,
    q: EnhancedPair,
    braids: Iterable[BraidWord],
    tol: float = PAIR_TOL,
) -> list[ProductCheck]:
    """Same comparison as :func:`verify_product_formula` for swap-form primitives.

    Both gates must classify as ``primitive-swap``. No pass/fail verdict is
    attached to the rows.
    """
    if p.d != q.d:
        raise DimensionError(f"explore_swap_form: local dimensions differ ({p.d} vs {q.d})")
    for pair in (p, q):
        _require_class(pair, EntanglementClass.PRIMITIVE_SWAP, "explore_swap_form", "(c1 (x) c2) P")
        _require_accepted(pair, tol, "explore_swap_form")
    return _product_rows(p, q, list(braids), tol)
