import json
import subprocess
import sys

import pytest

from qschur.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_weighted_passes(capsys):
    code, out, _ = run(capsys, "verify", "weighted", "--r", "2", "--umax", "3", "--dmax", "3", "--qmax", "12")
    assert code == 0
    assert "2/2 checks passed" in out


def test_bad_r_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "weighted", "--r", "0")
    assert code == 2 and "r must be" in err


def test_unknown_flag_is_usage_error(capsys):
    assert run(capsys, "verify", "weighted", "--bogus")[0] == 2


def test_alphabet_violation_names_invariant(capsys):
    code, _, err = run(capsys, "verify", "dilated", "--N", "2", "--a", "1,2")
    assert code == 2 and "a(1)+...+a(r)" in err


def test_dilated_single_sigma(capsys):
    code, out, _ = run(capsys, "verify", "dilated", "--N", "7", "--a", "1,2,4", "--sigma", "3,1,2")
    assert code == 0
    assert "sigma=[3, 1, 2]" in out


def test_qdiff_needs_room_for_parts(capsys):
    code, _, err = run(capsys, "verify", "qdiff", "--r", "2", "--umax", "3", "--xmax", "4")
    assert code == 2 and "at least 6" in err


def test_cost_ceiling(capsys):
    code, _, err = run(capsys, "verify", "weighted", "--r", "3", "--max-cost", "100")
    assert code == 2 and "ceiling 100" in err


@pytest.mark.parametrize("suite", ["weighted", "dilated", "qdiff"])
def test_perturbation_exits_one_with_key(capsys, suite):
    code, out, _ = run(capsys, "verify", suite, "--format", "json", "--perturb")
    assert code == 1
    payload = json.loads(out)
    assert payload["schema"] == 1 and payload["passed"] is False
    failing = [r for r in payload["reports"] if r["status"] == "fail"]
    assert failing and all(r["mismatch"]["key"] is not None for r in failing)


def test_expand_overpartitions(capsys):
    code, out, _ = run(capsys, "expand", "overpartitions", "--qmax", "4")
    assert code == 0
    assert out.split() == ["1", "2*q", "4*q^2", "8*q^3", "14*q^4"]


def test_expand_schur_product(capsys):
    code, out, _ = run(capsys, "expand", "schur", "--qmax", "7", "--format", "json")
    coeffs = {e[0]: c for e, c in json.loads(out)["terms"]}
    assert [coeffs.get(n, 0) for n in range(8)] == [1, 1, 1, 1, 1, 2, 2, 3]


def test_expand_bad_monomial(capsys):
    code, _, err = run(capsys, "expand", "pochhammer", "--monomial", "u1*z")
    assert code == 2 and "cannot parse" in err


def test_expand_help(capsys):
    code, out, _ = run(capsys, "expand", "--help")
    assert code == 0 and "usage:" in out


def test_enumerate_list(capsys):
    code, out, _ = run(capsys, "enumerate", "E", "--r", "1", "--qmax", "2", "--umax", "2", "--dmax", "1", "--list")
    lines = out.splitlines()
    assert code == 0 and lines[-1] == f"{len(lines) - 1} objects"
    assert "1(u1,o) 0(u1,-)" in lines


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qschur", "verify", "qdiff", "--r", "1", "--umax", "3",
                           "--xmax", "3"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0, proc.stderr
