"""JSON and CSV file formats.

Matrix: ``{"rows": R, "cols": C, "entries": [[re, im], ...]}`` row-major.
Gate: a matrix object plus ``"d"`` and ``"k"``.
Partition: ``{"row_cuts": [...], "col_cuts": [...]}``.
Factorization: ``{"target": <gate>, "factors": [{"kind": "U", "matrix": <gate>}
| {"kind": "local", "S": <gate>, "T": <gate>}]}``.
Circuit: ``{"width": n, "d": d, "gates": [{"gate": <name or gate>, "wires": [...],
"layer": i}, ...]}``.

Anywhere a gate is expected, the string ``"builtin:<name>"`` may be used.
Floats are written with ``repr`` precision so a write/read cycle is exact.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .circuit import Circuit, Factor, Factorization, PlacedGate
from .gates import Gate, get_builtin
from .linalg import DEFAULT_TOL, as_cmatrix
from .tracy_singh import BlockPartition


class FormatError(ValueError):
    """A file does not follow the expected format."""


def _reject_constant(tok):
    raise FormatError(f"non-finite number {tok} is not allowed")


def loads(text: str):
    return json.loads(text, parse_constant=_reject_constant)


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise FormatError(f"matrix: expected an object, got {type(obj).__name__}")
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except KeyError as exc:
        raise FormatError(f"matrix: missing field {exc.args[0]!r}") from None
    if rows < 1 or cols < 1:
        raise FormatError(f"matrix: rows and cols must be positive, got {rows}x{cols}")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        got = len(entries) if isinstance(entries, list) else "non-list"
        raise FormatError(f"matrix: expected {rows}*{cols}={rows * cols} entries, got {got}")
    vals = np.empty(rows * cols, dtype=np.complex128)
    for pos, e in enumerate(entries):
        if not (isinstance(e, list) and len(e) == 2):
            raise FormatError(f"matrix: entry {pos} is not a [re, im] pair")
        re_, im_ = e
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re_, im_)):
            raise FormatError(f"matrix: entry {pos} has non-numeric parts")
        if not (math.isfinite(re_) and math.isfinite(im_)):
            raise FormatError(f"matrix: entry {pos} is not finite")
        vals[pos] = complex(re_, im_)
    return as_cmatrix(vals.reshape(rows, cols))


def gate_to_json(g: Gate) -> dict:
    out = matrix_to_json(g.matrix)
    out["d"] = g.d
    out["k"] = g.k
    return out


def gate_from_json(obj, d: int | None = None, k: int | None = None) -> Gate:
    """Parse a gate object or ``"builtin:<name>"``; ``d``/``k`` override the file."""
    if isinstance(obj, str):
        if not obj.startswith("builtin:"):
            raise FormatError(f"gate: string must start with 'builtin:', got {obj!r}")
        g = get_builtin(obj[len("builtin:"):])
        if d is None and k is None:
            return g
        return Gate(g.matrix, d or g.d, k or g.k)
    mat = matrix_from_json(obj)
    k = k if k is not None else int(obj.get("k", 2))
    if d is None:
        if "d" in obj:
            d = int(obj["d"])
        else:
            d = int(round(mat.shape[0] ** (1.0 / k)))
    return Gate(mat, d, k, name=obj.get("name"))


def partition_to_json(p: BlockPartition) -> dict:
    return {"row_cuts": list(p.row_cuts), "col_cuts": list(p.col_cuts)}


def partition_from_json(obj) -> BlockPartition:
    try:
        return BlockPartition(tuple(obj["row_cuts"]), tuple(obj["col_cuts"]))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"partition: malformed object ({exc})") from None


def _gate_ref(g: Gate):
    if g.name:
        try:
            ref = get_builtin(g.name)
        except KeyError:
            ref = None
        if ref is not None and ref.k == g.k and np.array_equal(ref.matrix, g.matrix):
            return g.name
    return gate_to_json(g)


def factorization_to_json(f: Factorization) -> dict:
    factors = []
    for fac in f.factors:
        if fac.kind == "U":
            factors.append({"kind": "U", "matrix": _builtin_or_gate(fac.gates[0])})
        else:
            factors.append({"kind": "local", "S": _builtin_or_gate(fac.gates[0]), "T": _builtin_or_gate(fac.gates[1])})
    return {"target": gate_to_json(f.target), "factors": factors}


def _builtin_or_gate(g: Gate):
    ref = _gate_ref(g)
    return f"builtin:{ref}" if isinstance(ref, str) else ref


def factorization_from_json(obj, tol: float = DEFAULT_TOL) -> Factorization:
    if "target" not in obj or "factors" not in obj:
        raise FormatError("factorization: needs 'target' and 'factors'")
    target = gate_from_json(obj["target"], k=2)
    d = target.d
    factors = []
    for pos, fac in enumerate(obj["factors"]):
        kind = fac.get("kind")
        try:
            if kind == "U":
                factors.append(Factor.universal(gate_from_json(fac["matrix"], d=d, k=2)))
            elif kind == "local":
                s = gate_from_json(fac["S"], d=d, k=1)
                t = gate_from_json(fac["T"], d=d, k=1)
                factors.append(Factor.local(s, t))
            else:
                raise FormatError(f"unknown kind {kind!r}")
        except (KeyError, ValueError) as exc:
            raise FormatError(f"factorization: factor {pos}: {exc}") from None
    return Factorization(target, tuple(factors), tol=tol)


def circuit_to_json(c: Circuit) -> dict:
    gates = []
    for li, layer in enumerate(c.layers):
        for pg in layer:
            gates.append({"gate": _gate_ref(pg.gate), "wires": list(pg.wires), "layer": li})
    return {"width": c.width, "d": c.d, "gates": gates}


def circuit_from_json(obj) -> Circuit:
    try:
        width, d, entries = int(obj["width"]), int(obj["d"]), obj["gates"]
    except KeyError as exc:
        raise FormatError(f"circuit: missing field {exc.args[0]!r}") from None
    layers: list[list[PlacedGate]] = []
    for pos, e in enumerate(entries):
        wires = tuple(e["wires"])
        ref = e["gate"]
        if isinstance(ref, str):
            g = get_builtin(ref)
        else:
            g = gate_from_json(ref, d=d, k=len(wires))
        li = int(e.get("layer", len(layers)))
        if li < len(layers) - 1 or li < 0:
            raise FormatError(f"circuit: gate {pos} has out-of-order layer {li}")
        while len(layers) <= li:
            layers.append([])
        layers[li].append(PlacedGate(g, wires))
    return Circuit(width, d, tuple(tuple(layer) for layer in layers))


def dumps(obj) -> str:
    return json.dumps(obj, allow_nan=False, indent=None, separators=(",", ":")) + "\n"


def write_atomic(path, text: str):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None


CSV_COLUMNS = ["word", "strands", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_error"]


def product_rows_to_csv(rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([
            str(r.word), r.word.strands,
            repr(r.lhs.real), repr(r.lhs.imag),
            repr(r.rhs.real), repr(r.rhs.imag),
            repr(r.abs_error),
        ])
    return buf.getvalue()
