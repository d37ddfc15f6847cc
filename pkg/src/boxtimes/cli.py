"""Command line interface.

Exit status: 0 on success, 1 when a requested verification fails, 2 on usage,
I/O or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import braids, io
from .circuit import iterate_realization, realize_boxtimes, simulate
from .gates import EntanglementClass, Gate, gate_report
from .linalg import DEFAULT_TOL
from .tracy_singh import (
    PartitionedMatrix,
    boxtimes_power,
    canonical_partition,
    tracy_singh,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    """Usage, I/O or parse problem; reported with exit status 2."""


def _load_gate(src: str, d=None, k=None) -> Gate:
    if src.startswith("builtin:"):
        try:
            return io.gate_from_json(src, d=d, k=k)
        except (KeyError, ValueError) as exc:
            raise CliError(f"{src}: {exc.args[0] if exc.args else exc}") from None
    obj = io.read_json(src)
    try:
        return io.gate_from_json(obj, d=d, k=k)
    except ValueError as exc:
        raise CliError(f"{src}: gate: {exc}") from None


def _load_matrix(src: str) -> np.ndarray:
    if src.startswith("builtin:"):
        return _load_gate(src).matrix
    obj = io.read_json(src)
    try:
        return io.matrix_from_json(obj)
    except ValueError as exc:
        raise CliError(f"{src}: matrix: {exc}") from None


def _load_partitioned(src: str, part: str) -> PartitionedMatrix:
    mat = _load_matrix(src)
    if part == "canonical":
        try:
            return canonical_partition(mat)
        except ValueError as exc:
            raise CliError(f"{src}: {exc}") from None
    try:
        return PartitionedMatrix(mat, io.partition_from_json(io.read_json(part)))
    except ValueError as exc:
        raise CliError(f"{part}: {exc}") from None


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _write_or_print(args, obj):
    text = io.dumps(obj)
    if args.output:
        io.write_atomic(args.output, text)
    else:
        sys.stdout.write(text)


# gate ---------------------------------------------------------------------------

_EXPECT = {
    "yang-baxter": lambda r: r.is_yang_baxter,
    "unitary": lambda r: r.is_unitary,
    "entangling": lambda r: r.entanglement_class == EntanglementClass.ENTANGLING.value,
    "primitive": lambda r: r.entanglement_class != EntanglementClass.ENTANGLING.value,
}


def cmd_gate_info(args) -> int:
    g = _load_gate(args.source, d=args.d, k=args.k)
    if g.k != 2:
        raise CliError(f"{args.source}: gate info needs a 2-qudit gate, got arity {g.k}")
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    rep = gate_report(g, tol)
    payload = {"source": args.source, "d": g.d, "k": g.k, "tol": tol, **rep.to_dict()}
    status = EXIT_OK
    if args.expect:
        ok = _EXPECT[args.expect](rep)
        payload["expect"] = args.expect
        payload["passed"] = ok
        status = EXIT_OK if ok else EXIT_FAIL
    text = f"{args.source} (d={g.d}, k={g.k})\n{rep}"
    if args.expect:
        text += f"\nexpect {args.expect}: {'PASS' if status == EXIT_OK else 'FAIL'}"
    _emit(args, payload, text)
    return status


# ts -----------------------------------------------------------------------------


def cmd_ts_product(args) -> int:
    pa = args.partition_a or args.partition
    pb = args.partition_b or args.partition
    a = _load_partitioned(args.a, pa)
    b = _load_partitioned(args.b, pb)
    out = io.matrix_to_json(tracy_singh(a, b))
    if pa == pb == "canonical" and a.shape[0] == a.shape[1] and b.shape[0] == b.shape[1]:
        da = canonical_partition(a.matrix).partition.row_cuts[0]
        db = canonical_partition(b.matrix).partition.row_cuts[0]
        out["d"], out["k"] = da * db, 2
    _write_or_print(args, out)
    return EXIT_OK


def cmd_ts_power(args) -> int:
    g = _load_gate(args.source)
    out = io.gate_to_json(Gate(boxtimes_power(g.matrix, args.k, dim_cap=args.dim_cap),
                               g.d ** (2 ** (args.k - 1)), 2))
    _write_or_print(args, out)
    return EXIT_OK


# realize / simulate -------------------------------------------------------------


def _load_factorization(src, tol):
    obj = io.read_json(src)
    try:
        return io.factorization_from_json(obj, tol=tol if tol is not None else DEFAULT_TOL)
    except (ValueError, KeyError) as exc:
        raise CliError(f"{src}: {exc}") from None


def cmd_realize(args) -> int:
    fc = _load_factorization(args.c, args.tol)
    if args.iterate is not None:
        if args.cprime:
            raise CliError("realize: --iterate takes only --c")
        circ = iterate_realization(fc, args.iterate, dim_cap=args.dim_cap)
    else:
        if not args.cprime:
            raise CliError("realize: --cprime is required unless --iterate is given")
        circ = realize_boxtimes(fc, _load_factorization(args.cprime, args.tol))
    _write_or_print(args, io.circuit_to_json(circ))
    return EXIT_OK


def cmd_simulate(args) -> int:
    obj = io.read_json(args.circuit)
    try:
        circ = io.circuit_from_json(obj)
    except (ValueError, KeyError) as exc:
        raise CliError(f"{args.circuit}: {exc}") from None
    _write_or_print(args, io.matrix_to_json(simulate(circ, dim_cap=args.dim_cap)))
    return EXIT_OK


# braid / pair -------------------------------------------------------------------


def _load_pair(gate_src, mu_src, name=None) -> braids.EnhancedPair:
    g = _load_gate(gate_src)
    mu = _load_matrix(mu_src)
    try:
        return braids.EnhancedPair(g, mu, name or gate_src)
    except ValueError as exc:
        raise CliError(f"{mu_src}: {exc}") from None


def _pair_tol(args):
    return args.tol if args.tol is not None else braids.PAIR_TOL


def _words(args):
    try:
        if args.word is not None:
            return [braids.BraidWord.parse(args.word, args.strands)]
        return list(braids.all_words(args.strands, args.max_length))
    except ValueError as exc:
        raise CliError(f"--word: {exc}") from None


def cmd_pair_check(args) -> int:
    p = _load_pair(args.gate, args.enhancer)
    rep = braids.check_enhanced_pair(p, _pair_tol(args))
    text = "\n".join(
        [
            f"commutator residual:    {rep.commutator_residual:.3e}",
            f"trace residual (c):     {rep.trace_residual_plus:.3e}",
            f"trace residual (c^-1):  {rep.trace_residual_minus:.3e}",
            f"enhanced pair:          {rep.accepted} (tol {rep.tol:.1e})",
        ]
    )
    _emit(args, rep.to_dict(), text)
    return EXIT_OK if rep.accepted else EXIT_FAIL


def cmd_braid_invariant(args) -> int:
    p = _load_pair(args.gate, args.enhancer)
    words = _words(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        values = [braids.turaev_invariant(p, b, _pair_tol(args)) for b in words]
    for w in {str(c.message) for c in caught}:
        print(f"warning: {w}", file=sys.stderr)
    payload = {
        "strands": args.strands,
        "invariants": [{"word": str(b), "value": [v.real, v.imag]} for b, v in zip(words, values)],
    }
    text = "\n".join(f"[{b}] -> {v.real:.12g}{v.imag:+.12g}j" for b, v in zip(words, values))
    _emit(args, payload, text)
    return EXIT_OK


def _product_cmd(args, fn):
    p = _load_pair(args.gate, args.enhancer)
    q = _load_pair(args.gate2, args.enhancer2)
    tol = _pair_tol(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", braids.NotARepresentationWarning)
        try:
            rows = fn(p, q, _words(args), tol)
        except braids.HypothesisError as exc:
            raise CliError(str(exc)) from None
    if args.output:
        io.write_atomic(args.output, io.product_rows_to_csv(rows))
    worst = max(r.abs_error for r in rows)
    payload = {"rows": [r.to_dict() for r in rows], "max_abs_error": worst}
    text = f"{len(rows)} braid words, max |lhs - rhs| = {worst:.3e}"
    return payload, text, worst, tol


def cmd_braid_verify(args) -> int:
    payload, text, worst, tol = _product_cmd(args, braids.verify_product_formula)
    ok = worst <= tol
    payload["passed"] = ok
    _emit(args, payload, text + f" (tol {tol:.1e}): {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_braid_explore(args) -> int:
    payload, text, _, _ = _product_cmd(args, braids.explore_swap_form)
    if not args.output or args.json:
        _emit(args, payload, text)
    else:
        print(text)
    return EXIT_OK


# parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="absolute tolerance (default 1e-10; 1e-9 for enhanced-pair checks)")
    common.add_argument("--json", action="store_true", help="print reports as JSON")
    common.add_argument("--dim-cap", type=int, default=None,
                        help="largest matrix dimension allowed (default $BOXTIMES_DIM_CAP or 10000)")

    ap = argparse.ArgumentParser(prog="boxtimes", description="Tracy-Singh products of quantum gates.")
    sub = ap.add_subparsers(dest="command", required=True)

    gate = sub.add_parser("gate", help="gate reports").add_subparsers(dest="sub", required=True)
    p = gate.add_parser("info", parents=[common], help="unitarity, YBE and entanglement report")
    p.add_argument("source", help="gate file or builtin:<name>")
    p.add_argument("--d", type=int, help="local dimension (overrides the file)")
    p.add_argument("--k", type=int, help="arity (overrides the file)")
    p.add_argument("--expect", choices=sorted(_EXPECT), help="exit 1 unless the property holds")
    p.set_defaults(func=cmd_gate_info)

    ts = sub.add_parser("ts", help="Tracy-Singh products").add_subparsers(dest="sub", required=True)
    p = ts.add_parser("product", parents=[common], help="A [x] B")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--partition", default="canonical", help="'canonical' or a partition file for both")
    p.add_argument("--partition-a", help="partition of A (overrides --partition)")
    p.add_argument("--partition-b", help="partition of B (overrides --partition)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ts_product)
    p = ts.add_parser("power", parents=[common], help="iterated C -> C [x] C")
    p.add_argument("source")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ts_power)

    p = sub.add_parser("realize", parents=[common], help="circuit for c [x] c' from factorizations")
    p.add_argument("--c", required=True, help="factorization file of c")
    p.add_argument("--cprime", help="factorization file of c'")
    p.add_argument("--iterate", type=int, help="realize the k-th iterated power of c instead")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("simulate", parents=[common], help="matrix of a circuit")
    p.add_argument("circuit")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    braid = sub.add_parser("braid", help="braid invariants").add_subparsers(dest="sub", required=True)

    def braid_args(p, two=False):
        p.add_argument("--gate", required=True)
        p.add_argument("--enhancer", required=True)
        if two:
            p.add_argument("--gate2", required=True)
            p.add_argument("--enhancer2", required=True)
        p.add_argument("--strands", type=int, required=True)
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--word", help='e.g. "s1 s2^-1 s1"')
        g.add_argument("--max-length", type=int, help="all words up to this length")

    p = braid.add_parser("invariant", parents=[common], help="Turaev invariant of braid words")
    braid_args(p)
    p.set_defaults(func=cmd_braid_invariant)
    p = braid.add_parser("verify-product", parents=[common],
                         help="compare I_{c [x] c'} with I_c I_c' for tensor-form primitives")
    braid_args(p, two=True)
    p.add_argument("-o", "--output", help="write a CSV table")
    p.set_defaults(func=cmd_braid_verify)
    p = braid.add_parser("explore-swap", parents=[common],
                         help="same comparison for swap-form primitives, no verdict")
    braid_args(p, two=True)
    p.add_argument("-o", "--output", help="write a CSV table")
    p.set_defaults(func=cmd_braid_explore)

    pair = sub.add_parser("pair", help="enhanced pairs").add_subparsers(dest="sub", required=True)
    p = pair.add_parser("check", parents=[common], help="enhanced-pair residuals")
    p.add_argument("--gate", required=True)
    p.add_argument("--enhancer", required=True)
    p.set_defaults(func=cmd_pair_check)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CliError, io.FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (ValueError, KeyError, np.linalg.LinAlgError, OSError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"error: {args.command} {getattr(args, 'sub', '') or ''}: {msg}".replace("  ", " "),
              file=sys.stderr)
    return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
