import io
import json

import pandas as pd
import pytest

from offdelta.cli import main as cli
from offdelta.cli.output import OutputEnvelope
from offdelta.utils.errors import OracleConvergenceError, RangeExhaustedError


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_table(text):
    return pd.read_csv(io.StringIO(text), comment="#")


def header(text):
    return dict(
        line[2:].split(": ", 1) for line in text.splitlines() if line.startswith("# ")
    )


def test_levels_non_interacting(capsys):
    code, out, _ = run(capsys, "levels", "--g", "0", "--c", "0.75", "--count", "4")
    assert code == cli.EXIT_OK
    table = read_table(out)
    assert list(table.columns) == ["n", "parity", "epsilon", "Q", "kind"]
    assert table["n"].tolist() == [0, 1, 2, 3]
    assert table["epsilon"].tolist() == pytest.approx([0.5, 1.5, 2.5, 3.5], abs=1e-10)
    assert table["parity"].tolist() == ["even", "odd", "even", "odd"]
    meta = header(out)
    assert meta["command"] == "levels"
    assert meta["schema_version"] == "1.0"
    assert "root_tol" in meta


def test_levels_single_sector_reports_dark_state(capsys):
    code, out, _ = run(capsys, "levels", "--g", "10", "--c", "1", "--parity", "even", "--count", "2")
    assert code == cli.EXIT_OK
    table = read_table(out)
    dark = table[table["kind"] == "dark"]
    assert dark["n"].tolist() == [2]
    assert dark["epsilon"].iloc[0] == pytest.approx(2.5, abs=1e-10)


def test_zero_count_is_a_usage_error(capsys):
    code, _, err = run(capsys, "levels", "--g", "1", "--c", "0.75", "--count", "0")
    assert code == cli.EXIT_USAGE
    assert err.startswith("Error: levels:")


def test_negative_displacement_is_a_usage_error(capsys):
    code, _, _ = run(capsys, "levels", "--g", "1", "--c", "-1")
    assert code == cli.EXIT_USAGE


def test_unknown_flag_exits_with_usage():
    with pytest.raises(SystemExit) as info:
        cli.main(["levels", "--g", "1", "--c", "1", "--bogus"])
    assert info.value.code == 2


def test_solver_failure_exit_code(capsys, monkeypatch):
    def exhausted(*args, **kwargs):
        raise RangeExhaustedError(2, 6, 40.0)

    monkeypatch.setattr(cli, "solve_spectrum", exhausted)
    code, out, err = run(capsys, "levels", "--g", "1", "--c", "0.75")
    assert code == cli.EXIT_SOLVER
    assert out == ""
    assert "RangeExhaustedError" in err


def test_oracle_failure_exit_code(capsys, monkeypatch):
    def diverged(*args, **kwargs):
        raise OracleConvergenceError("no convergence")

    monkeypatch.setattr(cli, "certified_error", diverged)
    code, _, _ = run(capsys, "oracle", "--g", "1", "--c", "0.75", "--k", "2")
    assert code == cli.EXIT_ORACLE


def test_bad_grid_is_a_usage_error(capsys):
    code, _, err = run(capsys, "oracle", "--g", "1", "--c", "0.75", "--h", "0.01")
    assert code == cli.EXIT_USAGE
    assert "GridSpecError" in err


def test_oracle_table(capsys):
    code, out, _ = run(capsys, "oracle", "--g", "0", "--c", "0.75", "--h", "0.005", "--k", "3")
    assert code == cli.EXIT_OK
    table = read_table(out)
    assert list(table.columns) == ["k", "epsilon", "second_moment", "error", "extrapolated"]
    assert table["epsilon"].tolist() == pytest.approx([0.5, 1.5, 2.5], abs=5e-4)
    assert header(out)["h_fine"] == "0.0025"


def test_json_output_and_verify_round_trip(capsys, tmp_path):
    code, csv_text, _ = run(capsys, "levels", "--g", "2", "--c", "0.75", "--count", "3")
    assert code == cli.EXIT_OK
    target = tmp_path / "levels.json"
    code, out, _ = run(capsys, "levels", "--g", "2", "--c", "0.75", "--count", "3", "--format", "json", "--out", str(target))
    assert code == cli.EXIT_OK
    assert out == ""
    document = json.loads(target.read_text())
    assert document["data"]["columns"] == ["n", "parity", "epsilon", "Q", "kind"]
    assert document["params"]["g"] == 2.0
    code, verified, _ = run(capsys, "verify", str(target))
    assert code == cli.EXIT_OK
    assert verified == csv_text


def test_verify_rejects_foreign_json(capsys, tmp_path):
    target = tmp_path / "other.json"
    target.write_text(json.dumps({"rows": []}))
    code, _, _ = run(capsys, "verify", str(target))
    assert code == cli.EXIT_USAGE


def test_dark_command(capsys):
    code, out, _ = run(capsys, "dark", "--n-max", "3", "--c-max", "2")
    assert code == cli.EXIT_OK
    table = read_table(out)
    assert table["n"].tolist() == [2, 3]
    assert table["c_star"].tolist() == pytest.approx([1.0, 3 ** 0.5], rel=1e-12)
    assert table["parity"].tolist() == ["even", "odd"]


@pytest.mark.parametrize("g, c, low, high", [("100", "1.5", 0.99, 1.0), ("20", "0.75", 0.0, 0.05)])
def test_wavefunction_mass_inside(capsys, g, c, low, high):
    code, out, _ = run(capsys, "wavefunction", "--g", g, "--c", c, "--n", "0", "--dx", "0.001")
    assert code == cli.EXIT_OK
    table = read_table(out)
    dx = 0.001
    density = table["phi"] ** 2
    assert density.sum() * dx == pytest.approx(1.0, abs=1e-3)
    inside = density[table["x"].abs() < float(c)].sum() * dx
    assert low - 1e-3 <= inside <= high + 1e-3


def test_sweep_g_table(capsys):
    code, out, _ = run(capsys, "sweep", "--mode", "g", "--c", "1", "--min", "0", "--max", "4", "--points", "3", "--levels", "3")
    assert code == cli.EXIT_OK
    table = read_table(out)
    assert list(table.columns) == ["g", "n", "parity", "epsilon", "kind"]
    assert len(table) == 9
    assert table[table["n"] == 2]["epsilon"].tolist() == pytest.approx([2.5] * 3, abs=1e-9)


def test_sweep_requires_fixed_parameter(capsys):
    code, _, err = run(capsys, "sweep", "--mode", "g")
    assert code == cli.EXIT_USAGE
    assert "--c" in err


def test_infinite_sweep_writes_crossings(capsys, tmp_path):
    target = tmp_path / "walls.csv"
    code, _, _ = run(
        capsys, "sweep", "--mode", "infinite", "--min", "0.8", "--max", "1.2", "--points", "5",
        "--levels", "2", "--out", str(target),
    )
    assert code == cli.EXIT_OK
    table = read_table(target.read_text())
    assert list(table.columns) == ["c", "rank", "epsilon", "kind", "triple", "regime"]
    crossings = read_table((tmp_path / "walls.crossings.csv").read_text())
    assert crossings["c"].tolist() == pytest.approx([1.0], abs=1e-8)
    assert crossings["epsilon"].tolist() == pytest.approx([2.5], abs=1e-8)


def test_envelope_rejects_ragged_rows():
    with pytest.raises(ValueError):
        OutputEnvelope(["a", "b"], [[1]])
