import io
import json
import subprocess
import sys

import pytest

from sctrace.cli import EXIT_CHECK, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, run
import sctrace.cli as cli
from sctrace.trace_engine import InternalConsistencyError


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_trace_example():
    assert call("trace", "--S", "1", "--T", "3", "--k", "5", "--neb", "q3", "--t", "-1", "--zeta", "i", "--n", "4") == (EXIT_OK, "-76\n")


def test_dim_example():
    assert call("dim", "--S", "1", "--T", "2", "--k", "8", "--zeta", "+1") == (EXIT_OK, "1\n")


def test_bias_example():
    code, out = call("bias", "--S", "7", "--k", "4")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "Delta = 3"


def test_rep_selection_and_modulus():
    code, out = call("trace", "--S", "11", "--T", "2", "--k", "6", "--n", "7", "--fp2-modulus", "11:7,2", "--rep", "2:1:+1", "--rep", "11:10")
    assert (code, out) == (EXIT_OK, "-103-31*sqrt(3)\n")
    # nu_m and nu_{11m} name the same representation
    assert call("trace", "--S", "11", "--T", "2", "--k", "6", "--n", "7", "--fp2-modulus", "11:7,2", "--rep", "2:1:+1", "--rep", "11:110")[1] == out


def test_json_schema():
    code, out = call("trace", "--T", "3", "--k", "5", "--neb", "q3", "--t", "-1", "--zeta=-i", "--n", "7", "--format", "json")
    obj = json.loads(out)
    assert code == EXIT_OK and obj[0]["total_string"] == "71"
    assert {"level", "weight", "n", "tuple", "identity_term", "gamma_terms", "total", "total_float"} <= set(obj[0])


def test_csv_and_table():
    code, out = call("dim", "--T", "5", "--k", "4", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "level,weight,tuple,dim" and len(lines) == 9
    code, out = call("dim", "--T", "5", "--k", "4")
    assert out.splitlines()[-1].split()[-2:] == ["total", "24"]


def test_breakdown_columns():
    code, out = call("trace", "--T", "3", "--k", "5", "--neb", "q3", "--t", "-1", "--zeta", "i", "--n", "4", "--breakdown")
    assert code == EXIT_OK
    assert "gamma  " in out and "Phi_inf" in out and "Phi_l" in out


def test_deterministic_output():
    argv = ("enumerate", "--S", "5", "--T", "2", "--k", "4", "--format", "json")
    assert call(*argv) == call(*argv)


@pytest.mark.parametrize(
    "argv",
    [
        ("dim", "--S", "4", "--k", "4"),
        ("dim", "--k", "4"),
        ("dim", "--T", "3", "--k", "2"),
        ("dim", "--T", "15", "--k", "4", "--t", "1"),
        ("dim", "--T", "3", "--k", "5", "--neb", "q3", "--zeta", "0.5"),
        ("trace", "--T", "3", "--k", "5", "--neb", "q3", "--n", "3"),
        ("dim", "--T", "3", "--k", "4", "--neb", "bogus"),
        ("frobnicate",),
        ("dim", "--T", "3"),
    ],
)
def test_usage_errors(argv):
    assert call(*argv)[0] == EXIT_USAGE


def test_internal_consistency_exit(monkeypatch):
    def broken(*args, **kw):
        raise InternalConsistencyError("dimension is 1/2")

    monkeypatch.setattr(cli, "trace_hecke", broken)
    assert call("dim", "--T", "2", "--k", "8")[0] == EXIT_INTERNAL


def test_lmfdb_check_offline():
    code, out = call("lmfdb-check", "--T", "3", "--k", "5", "--neb", "q3", "--char", "b", "--offline")
    assert code == EXIT_OK and "unique" in out
    code, _ = call("lmfdb-check", "--T", "5", "--k", "4", "--char", "a", "--offline")
    assert code == EXIT_CHECK


def test_validate_single_criterion():
    code, out = call("validate", "--criterion", "1")
    assert code == EXIT_OK and out.startswith("criterion 1: PASS")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sctrace", "dim", "--T", "2", "--k", "8", "--zeta", "+1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1\n"
