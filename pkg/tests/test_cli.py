import csv
import io as _io
import json
import subprocess
import sys

import numpy as np
import pytest

from boxtimes.cli import main
from boxtimes.gates import CNOT, KAUFFMAN_C, EXAMPLE_D, Gate
from boxtimes.io import CSV_COLUMNS, dumps, gate_to_json, matrix_from_json, matrix_to_json
from boxtimes.search import corpus_pairs
from boxtimes.tracy_singh import boxtimes_power, tracy_singh


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(dumps(obj))
        return str(path)

    tensor = corpus_pairs("primitive-tensor")
    swaps = corpus_pairs("primitive-swap")
    cnot_fact = {"target": "builtin:cnot", "factors": [{"kind": "U", "matrix": "builtin:cnot"}]}
    return {
        "dir": tmp_path,
        "cnot_fact": write("cnot_fact.json", cnot_fact),
        "t1_gate": write("t1.json", gate_to_json(tensor[4].gate)),
        "t1_mu": write("t1_mu.json", matrix_to_json(tensor[4].mu)),
        "t2_gate": write("t2.json", gate_to_json(tensor[5].gate)),
        "t2_mu": write("t2_mu.json", matrix_to_json(tensor[5].mu)),
        "s_gate": write("s.json", gate_to_json(swaps[1].gate)),
        "s_mu": write("s_mu.json", matrix_to_json(swaps[1].mu)),
        "eye2": write("eye2.json", matrix_to_json(np.eye(2))),
        "twice": write("twice.json", matrix_to_json(np.eye(2))),
        "partition": write("part.json", {"row_cuts": [1, 3], "col_cuts": [2, 2]}),
    }


class TestGateInfo:
    def test_kauffman(self, capsys):
        code, out, _ = run(capsys, "gate", "info", "builtin:kauffman_c", "--json")
        rep = json.loads(out)
        assert code == 0
        assert rep["is_unitary"] and rep["is_yang_baxter"]
        assert rep["entanglement_class"] == "entangling"

    def test_human_output(self, capsys):
        code, out, _ = run(capsys, "gate", "info", "builtin:swap:3")
        assert code == 0 and "primitive-swap" in out

    def test_expect_failure(self, capsys):
        code, out, _ = run(capsys, "gate", "info", "builtin:cnot", "--expect", "yang-baxter")
        assert code == 1 and "FAIL" in out

    def test_tol_threads_through(self, capsys):
        code, _, _ = run(capsys, "gate", "info", "builtin:cnot", "--expect", "yang-baxter", "--tol", "2")
        assert code == 0

    def test_unknown_builtin(self, capsys):
        code, _, err = run(capsys, "gate", "info", "builtin:nope")
        assert code == 2 and "builtin:nope" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "gate", "info", str(tmp_path / "none.json"))
        assert code == 2 and "none.json" in err


class TestTs:
    def test_product_then_info(self, capsys, files):
        out_path = str(files["dir"] / "prod.json")
        code, _, _ = run(capsys, "ts", "product", "builtin:kauffman_c", "builtin:example_d", "-o", out_path)
        assert code == 0
        obj = json.loads(open(out_path).read())
        assert (obj["d"], obj["k"]) == (4, 2)
        assert np.array_equal(matrix_from_json(obj), tracy_singh(KAUFFMAN_C, EXAMPLE_D))
        code, out, _ = run(capsys, "gate", "info", out_path, "--d", "4", "--k", "2", "--json")
        assert code == 0 and json.loads(out)["is_yang_baxter"]

    def test_product_partition_file(self, capsys, files):
        code, out, _ = run(capsys, "ts", "product", "builtin:cnot", "builtin:cnot",
                           "--partition", files["partition"])
        assert code == 0
        assert matrix_from_json(json.loads(out)).shape == (16, 16)

    def test_help(self, capsys):
        code, out, _ = run(capsys, "ts", "product", "--help")
        assert code == 0 and "usage" in out

    def test_power(self, capsys):
        code, out, _ = run(capsys, "ts", "power", "builtin:cnot", "--k", "3")
        obj = json.loads(out)
        assert code == 0 and obj["d"] == 16
        assert np.array_equal(matrix_from_json(obj), boxtimes_power(CNOT, 3))

    def test_power_cap(self, capsys):
        code, _, err = run(capsys, "ts", "power", "builtin:cnot", "--k", "3", "--dim-cap", "100")
        assert code == 2 and "cap" in err


class TestRealizeSimulate:
    def test_pipeline(self, capsys, files):
        circ = str(files["dir"] / "circ.json")
        mat = str(files["dir"] / "mat.json")
        assert run(capsys, "realize", "--c", files["cnot_fact"], "--cprime", files["cnot_fact"], "-o", circ)[0] == 0
        assert run(capsys, "simulate", circ, "-o", mat)[0] == 0
        got = matrix_from_json(json.loads(open(mat).read()))
        assert np.allclose(got, tracy_singh(CNOT, CNOT), atol=1e-12)

    def test_iterate(self, capsys, files):
        code, out, _ = run(capsys, "realize", "--c", files["cnot_fact"], "--iterate", "3")
        obj = json.loads(out)
        assert code == 0 and obj["width"] == 8

    def test_cprime_required(self, capsys, files):
        code, _, err = run(capsys, "realize", "--c", files["cnot_fact"])
        assert code == 2 and "--cprime" in err

    def test_bad_factorization(self, capsys, files, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"target": "builtin:cnot", "factors": [{"kind": "U", "matrix": "builtin:swap"}]}))
        code, _, err = run(capsys, "realize", "--c", str(bad), "--iterate", "1")
        assert code == 2 and "bad.json" in err and "differs" in err

    def test_deterministic_bytes(self, capsys, files):
        a, b = files["dir"] / "a.json", files["dir"] / "b.json"
        for path in (a, b):
            run(capsys, "realize", "--c", files["cnot_fact"], "--iterate", "3", "-o", str(path))
        assert a.read_bytes() == b.read_bytes()


class TestBraidCommands:
    def test_invariant(self, capsys, files):
        code, out, _ = run(capsys, "braid", "invariant", "--gate", "builtin:swap",
                           "--enhancer", files["eye2"], "--strands", "2", "--word", "s1", "--json")
        assert code == 0
        assert json.loads(out)["invariants"][0]["value"] == [2.0, 0.0]

    def test_invariant_bad_word(self, capsys, files):
        code, _, err = run(capsys, "braid", "invariant", "--gate", "builtin:swap",
                           "--enhancer", files["eye2"], "--strands", "2", "--word", "s2")
        assert code == 2 and "s2" in err

    def test_invariant_warns(self, capsys, files):
        code, _, err = run(capsys, "braid", "invariant", "--gate", "builtin:cnot",
                           "--enhancer", files["eye2"], "--strands", "2", "--word", "s1")
        assert code == 0 and "warning" in err

    def test_verify_product_csv(self, capsys, files):
        csv_path = files["dir"] / "table.csv"
        code, out, _ = run(capsys, "braid", "verify-product", "--gate", files["t1_gate"],
                           "--enhancer", files["t1_mu"], "--gate2", files["t2_gate"],
                           "--enhancer2", files["t2_mu"], "--strands", "3", "--max-length", "3",
                           "-o", str(csv_path))
        assert code == 0 and "PASS" in out
        rows = list(csv.reader(_io.StringIO(csv_path.read_text())))
        assert rows[0] == CSV_COLUMNS
        assert len(rows) == 1 + 85

    def test_verify_product_hypothesis(self, capsys, files):
        code, _, err = run(capsys, "braid", "verify-product", "--gate", "builtin:cnot",
                           "--enhancer", files["eye2"], "--gate2", files["t2_gate"],
                           "--enhancer2", files["t2_mu"], "--strands", "2", "--word", "s1")
        assert code == 2 and "primitive" in err

    def test_explore_swap(self, capsys, files):
        csv_path = files["dir"] / "swap.csv"
        code, _, _ = run(capsys, "braid", "explore-swap", "--gate", files["s_gate"],
                         "--enhancer", files["s_mu"], "--gate2", "builtin:swap",
                         "--enhancer2", files["eye2"], "--strands", "3", "--max-length", "4",
                         "-o", str(csv_path))
        assert code == 0
        rows = list(csv.DictReader(_io.StringIO(csv_path.read_text())))
        assert len(rows) == sum(4 ** k for k in range(5))
        assert set(rows[0]) == set(CSV_COLUMNS)


class TestPairCheck:
    def test_accepted(self, capsys, files):
        code, out, _ = run(capsys, "pair", "check", "--gate", "builtin:swap", "--enhancer", files["eye2"], "--json")
        assert code == 0 and json.loads(out)["accepted"]

    def test_rejected(self, capsys, files):
        code, _, _ = run(capsys, "pair", "check", "--gate", "builtin:identity", "--enhancer", files["eye2"])
        assert code == 1

    def test_shape_mismatch(self, capsys, files):
        code, _, err = run(capsys, "pair", "check", "--gate", "builtin:swap:3", "--enhancer", files["eye2"])
        assert code == 2 and "eye2.json" in err


def test_usage_error(capsys):
    assert run(capsys, "gate")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "boxtimes.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "ts" in res.stdout
