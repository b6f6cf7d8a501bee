import json
import math
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dirac_antidot.cli import (
    EXIT_DOMAIN,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    EmitError,
    RunConfig,
    UsageError,
    emit,
    main,
    read_csv,
    render,
    run,
)

DATA = Path(__file__).parent / "data"


def run_cli(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def rows(text):
    return read_csv(text)[1]


def test_empty_records_header_only():
    assert render([], ["a", "b"]) == "a,b\n"


def test_golden_row(tmp_path):
    path = tmp_path / "out.csv"
    emit([{"n": 3, "value": 0.1, "label": "landau", "missing": None}], ["n", "value", "label", "missing"], "csv", path)
    assert path.read_bytes() == (DATA / "golden_row.csv").read_bytes()


def test_nan_rejected(tmp_path):
    path = tmp_path / "out.csv"
    with pytest.raises(EmitError):
        emit([{"x": math.nan}], ["x"], "csv", path)
    assert not path.exists()


def test_json_mirrors_csv():
    records = [{"m": -1, "eta": 0.25}, {"m": 0, "eta": 1.0 / 3.0}]
    doc = json.loads(render(records, ["m", "eta"], "json"))
    assert doc["columns"] == ["m", "eta"]
    assert doc["records"] == records
    assert rows(render(records, ["m", "eta"])) == records


finite = st.floats(allow_nan=False, allow_infinity=False)


@given(st.lists(st.tuples(st.integers(-10**6, 10**6), finite, finite), max_size=20))
def test_csv_round_trip(values):
    records = [{"m": m, "x": x, "y": y} for m, x, y in values]
    columns, parsed = read_csv(render(records, ["m", "x", "y"]))
    assert columns == ["m", "x", "y"]
    assert parsed == records


def test_spectrum_landau_ground_row(capsys):
    status, out, _ = run_cli(capsys, "spectrum", "--regime", "landau", "--n", "0", "--m", "0")
    assert status == EXIT_OK
    (row,) = rows(out)
    assert row["value"] == 0.5


def test_figure1_properties(capsys):
    status, out, _ = run_cli(capsys, "figure1", "--alpha", "8", "--b", "10", "--m-range", "-20:5")
    assert status == EXIT_OK
    table = rows(out)
    assert [r["m"] for r in table] == list(range(-20, 6))
    antidot = [r["antidot"] for r in table]
    assert all(b > a for a, b in zip(antidot, antidot[1:]))
    assert all(r["landau"] == 0.5 for r in table if r["m"] <= 0)
    assert all(r["shifted"] == 0.5 for r in table if r["m"] <= -8)


def test_figure1_golden(tmp_path, capsys):
    out = tmp_path / "fig1.csv"
    status, _, _ = run_cli(capsys, "figure1", "--alpha", "8", "--b", "10", "--m", "0", "--out", str(out))
    assert status == EXIT_OK
    assert out.read_bytes() == (DATA / "figure1_m0.csv").read_bytes()


def test_verify_benchmark(capsys):
    status, out, _ = run_cli(capsys, "verify", "--lambda1", "0.0625", "--lambda3", "0.9375", "--n-max", "2")
    assert status == EXIT_OK
    table = rows(out)
    assert [r["n"] for r in table] == [0, 1, 2]
    assert all(r["relative_error"] <= 1e-5 for r in table)


def test_verify_relativistic_mode(capsys):
    status, out, _ = run_cli(capsys, "verify", "--w", "1", "--b", "10", "--n", "0", "--m", "0")
    assert status == EXIT_OK
    (row,) = rows(out)
    assert row["defect"] <= 1e-4


def test_figure2_requires_w(capsys):
    status, _, err = run_cli(capsys, "figure2", "--alpha", "8", "--b", "10")
    assert status == EXIT_USAGE
    assert json.loads(err)["error"] == "usage"


def test_figure2_columns(capsys):
    status, out, _ = run_cli(capsys, "figure2", "--alpha", "8", "--b", "10", "--w", "0.01", "--m-range", "-10:2")
    assert status == EXIT_OK
    table = rows(out)
    full = [r["eta_full"] for r in table]
    assert all(b > a for a, b in zip(full, full[1:]))
    landau = [r["eta_landau"] for r in table if r["m"] <= 0]
    assert max(landau) - min(landau) <= 1e-9


def test_figure3(capsys):
    status, out, _ = run_cli(capsys, "figure3", "--alpha", "8", "--b", "10", "--w", "1", "--n", "0", "--m", "0")
    assert status == EXIT_OK
    table = rows(out)
    assert len(table) == 2000
    assert all(r["density_no_antidot"] >= 0 and r["density_antidot"] >= 0 for r in table)


def test_figure3_requires_state(capsys):
    status, _, _ = run_cli(capsys, "figure3", "--alpha", "8", "--b", "10", "--w", "1")
    assert status == EXIT_USAGE


def test_density_json(capsys):
    status, out, _ = run_cli(
        capsys, "density", "--w", "1", "--n", "1", "--m", "0", "--grid", "0.01:30:300", "--format", "json",
        "--include-lower", "false",
    )
    assert status == EXIT_OK
    doc = json.loads(out)
    assert doc["columns"] == ["rho", "upper", "lower", "density"]
    assert len(doc["records"]) == 300
    assert all(r["density"] == pytest.approx(r["upper"] ** 2) for r in doc["records"])


def test_density_short_grid_is_domain_error(capsys):
    status, _, err = run_cli(capsys, "density", "--w", "1", "--grid", "0.01:2:100")
    assert status == EXIT_DOMAIN
    assert json.loads(err)["error"] == "GridError"


def test_parse_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--m-range", "oops"])
    assert exc.value.code == EXIT_USAGE
    assert json.loads(capsys.readouterr().err)["status"] == EXIT_USAGE


def test_domain_error_exit_code(capsys):
    status, _, err = run_cli(capsys, "spectrum", "--w", "-1")
    assert status == EXIT_DOMAIN
    assert json.loads(err)["error"] == "ParameterError"


def test_io_error_exit_code(tmp_path, capsys):
    status, _, err = run_cli(capsys, "figure1", "--out", str(tmp_path / "missing" / "x.csv"))
    assert status == EXIT_IO
    assert json.loads(err)["status"] == EXIT_IO


def test_mixed_parameter_blocks_rejected(capsys):
    status, _, _ = run_cli(capsys, "spectrum", "--alpha", "1", "--effective-mass", "1", "--magnetic-field", "1")
    assert status == EXIT_USAGE


def test_physical_block_matches_dimensionless(capsys):
    # m* = hbar = c = e = 1, B = 1, delta = 50 -> alpha = 0, b = 10, w = 1
    _, phys, _ = run_cli(
        capsys, "spectrum", "--effective-mass", "1", "--magnetic-field", "1", "--antidot-strength", "50",
        "--n-range", "0:1", "--m-range", "-2:2",
    )
    _, dimless, _ = run_cli(capsys, "spectrum", "--b", "10", "--w", "1", "--n-range", "0:1", "--m-range", "-2:2")
    assert phys == dimless


def test_range_limits():
    with pytest.raises(UsageError):
        RunConfig(command="spectrum", m_values=[10**4 + 1])
    with pytest.raises(UsageError):
        RunConfig(command="spectrum", n_values=[1001])
    with pytest.raises(UsageError):
        RunConfig(command="spectrum", m_values=[])


def test_run_returns_status(tmp_path):
    out = tmp_path / "s.csv"
    assert run(RunConfig(command="spectrum", regime="landau", out=str(out))) == EXIT_OK
    assert rows(out.read_text())[0]["value"] == 0.5


def test_determinism_across_threads(tmp_path, capsys, monkeypatch):
    args = ["spectrum", "--regime", "rel", "--alpha", "8", "--b", "10", "--w", "0.3", "--n-range", "0:3", "--m-range", "-6:6"]
    outputs = []
    for threads in ("1", "4", "1"):
        monkeypatch.setenv("DIRAC_ANTIDOT_THREADS", threads)
        path = tmp_path / f"out{len(outputs)}.csv"
        assert main(args + ["--out", str(path)]) == EXIT_OK
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
