import numpy as np

from sepcert.cli.files import dense_to_file, write_state_file
from sepcert.cli.main import EXIT_FAIL, EXIT_PARSE
from sepcert.fixtures import PLUS, x_correlated_state
from scripts.batch_separate import certify_one


def _state(tmp_path, name, rho):
    return str(write_state_file(dense_to_file(rho, [2, 2]), tmp_path / f"{name}.json"))


def test_certify_one_writes_certificate(tmp_path):
    path = _state(tmp_path, "ex", x_correlated_state())
    row = certify_one(path, str(tmp_path / "certs"), None)
    assert row["status"] == "ok" and row["exit_code"] == 0
    assert row["terms"] == 2
    assert (tmp_path / "certs" / "ex.cert.json").exists()


def test_certify_one_reports_bad_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    row = certify_one(str(bad), str(tmp_path / "certs"), None)
    assert row["status"] == "SchemaError" and row["exit_code"] == EXIT_PARSE


def test_certify_one_survives_unwritable_output(tmp_path):
    path = _state(tmp_path, "prod", np.kron(PLUS, PLUS))
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    row = certify_one(path, str(blocker / "sub"), None)
    assert row["status"] != "ok"
    assert row["exit_code"] == EXIT_FAIL
    assert row["error"]
    assert "elapsed_s" in row
