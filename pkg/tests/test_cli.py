import json
import math
import re
import subprocess
import sys

import pytest

from symzeta.cli import parse_complex, parse_form, run


def invoke(argv):
    code, doc = run(argv)
    return code, doc


def parse_doc(doc):
    return json.loads(doc)


def test_parse_complex_forms():
    assert parse_complex("-1") == -1.0
    assert parse_complex("0.5-2i") == 0.5 - 2j
    assert parse_complex("3i") == 3j
    from symzeta.cli import UsageError

    with pytest.raises(UsageError):
        parse_complex("zork")


def test_parse_form_rationals():
    q = parse_form("1,1/2;1/2,1")
    assert q.dimension == 2
    assert q.exact[0][1].denominator == 2


def test_riemann_value_document():
    code, doc = invoke(["zeta", "riemann", "--s", "-1"])
    assert code == 0
    env = parse_doc(doc)
    assert env["command"] == "zeta.riemann"
    assert abs(env["value"]["re"] + 0.0833333333333333) < 1e-12
    assert env["is_pole"] is False
    assert env["version"]
    assert "runtime_ms" in env["diagnostics"]


def test_quadratic_pole_document():
    code, doc = invoke(["zeta", "quadratic", "--form", "1,0;0,1", "--s", "1"])
    assert code == 0
    env = parse_doc(doc)
    assert env["is_pole"] is True
    assert abs(env["residue"]["re"] - 2 * math.pi) < 1e-4


def test_torus_determinant_document():
    code, doc = invoke(["det", "torus", "--dim", "1"])
    assert code == 0
    env = parse_doc(doc)
    assert abs(env["value"]["re"] - 39.478417604357434) < 1e-5


def test_sum_fp_symbol_grammar():
    code, doc = invoke(["sum", "fp", "--symbol", "pow(norm2(x), -0.75)", "--dim", "1"])
    assert code == 0
    env = parse_doc(doc)
    assert abs(env["value"]["re"] - 5.224750697370925) < 1e-9


def test_integral_and_residue_commands():
    code, doc = invoke(
        ["integral", "cutoff", "--symbol", "pow(norm2(x), -0.75)", "--dim", "1"]
    )
    assert code == 0
    env = parse_doc(doc)
    assert abs(env["value"]["re"] - 4.639927096230246) < 1e-8
    code, doc = invoke(
        ["residue", "symbol", "--symbol", "pow(norm2(x), -0.5)", "--dim", "1"]
    )
    assert code == 0
    env = parse_doc(doc)
    assert abs(env["value"]["re"] - 2 / math.sqrt(2 * math.pi)) < 1e-12


def test_quadratic_with_form_power():
    code, doc = invoke(
        ["sum", "fp", "--symbol", "pow(q(x), -1.3)", "--dim", "2", "--form", "1,0;0,1"]
    )
    assert code == 0
    env = parse_doc(doc)
    assert abs(env["value"]["re"] - 13.160278487044913) < 1e-9


def test_sweep_csv_rows():
    code, doc = invoke(
        [
            "sweep", "laurent", "--symbol", "pow(norm2(x), -0.5)", "--dim", "1",
            "--out", "csv", "--npoints", "16",
        ]
    )
    assert code == 0
    lines = doc.strip().split("\n")
    assert lines[0].startswith("command,index,z_re,z_im,value_re,value_im")
    assert len(lines) == 1 + 32  # both contour radii are recorded


def test_usage_errors_exit_2():
    code, _ = invoke(["zeta", "riemann"])  # missing --s
    assert code == 2
    code, _ = invoke(["zeta", "quadratic", "--form", "1,0;0,x", "--s", "2"])
    assert code == 2
    code, _ = invoke(["sum", "fp", "--symbol", "exp(x)", "--dim", "1"])
    assert code == 2
    code, _ = invoke(["zeta", "riemann", "--s", "-1", "--out", "xml"])
    assert code == 2


def test_accuracy_error_exit_3_with_document():
    # an impossible fit tolerance forces a PoorFit failure but still emits
    # a diagnostics document
    code, doc = invoke(
        ["sum", "fp", "--symbol", "pow(q(x), -0.275)", "--dim", "2",
         "--form", "1,0;0,1", "--tol", "1e-60"]
    )
    assert code == 3
    env = parse_doc(doc)
    assert "error" in env["diagnostics"]


def test_determinism_byte_identical_minus_runtime():
    argv = ["zeta", "riemann", "--s", "0.5"]
    _, doc1 = invoke(argv)
    _, doc2 = invoke(argv)
    strip = lambda d: re.sub(r'"runtime_ms":[0-9.eE+-]+', '"runtime_ms":0', d)
    assert strip(doc1) == strip(doc2)


def test_seed_accepted_and_ignored():
    code1, doc1 = invoke(["zeta", "riemann", "--s", "2", "--seed", "7"])
    code2, doc2 = invoke(["zeta", "riemann", "--s", "2", "--seed", "99"])
    assert code1 == code2 == 0
    strip = lambda d: re.sub(r'"runtime_ms":[0-9.eE+-]+', '"runtime_ms":0', d)
    assert strip(doc1) == strip(doc2)


def test_console_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "symzeta.cli", "zeta", "hurwitz", "--s", "-1", "--p", "3"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    env = json.loads(proc.stdout)
    assert abs(env["value"]["re"] + 37.0 / 12.0) < 1e-9


def test_seventeen_digit_floats():
    _, doc = invoke(["zeta", "riemann", "--s", "0.5"])
    env = parse_doc(doc)
    # round-trip preserves the value bit-for-bit
    assert env["value"]["re"] == parse_doc(doc)["value"]["re"]
    m = re.search(r'"re":(-?[0-9.]+[0-9eE+-]*)', doc)
    assert m is not None
