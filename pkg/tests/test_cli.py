"""Command-line front end: schemas, parsing, precedence, exit codes."""

import csv
import io
import subprocess
import sys

import pytest

from thqaoa import cli
from thqaoa.errors import NumericalError
from thqaoa.figures import round_grid_pow2
from thqaoa.maxcut import knn_spectrum


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


# ---------------------------------------------------------------------------
# Frozen output schemas
# ---------------------------------------------------------------------------

REPORT_HEADER = ["r", "t_opt", "t_centered", "rho", "p", "e_r", "c_r", "quantile", "eta", "lam"]

SCHEMA_CASES = [
    (["kappa"], ["x1", "kappa"]),
    (["cthr", "--r", "1,2"], ["r", "rho_star", "cth", "cth_over_r"]),
    (["pr", "--r", "1", "--rho", "0.25"], ["r", "rho", "rho_th", "p", "p_poly", "eta"]),
    (["threshold", "--dist", "twopoint:0.2", "--r", "1"], REPORT_HEADER),
    (["curve", "--dist", "twopoint:0.2", "--r", "1"], ["r", "t", "f_t", "e_r", "c_r"]),
    (["sweep", "--dist", "twopoint:0.2", "--r", "1,2"], REPORT_HEADER),
    (
        ["gmqaoa", "--dist", "twopoint:0.2", "--r", "1", "--restarts", "2"],
        ["r", "e_opt", "c", "quantile"],
    ),
    (
        ["bound", "--dist", "twopoint:0.2", "--r", "1"],
        ["r", "tau1", "tau2", "e_floor", "c_cap", "q_low", "q_high",
         "min_rounds_exact", "min_rounds_grover"],
    ),
    (["maxcut", "--n", "3"], ["value", "count", "mass", "cdf"]),
    (["maxcut", "--n", "4", "--lam", "0.6"], ["n", "lam", "bound_kind", "r"]),
    (["crs", "--dist", "twopoint:0.2", "--r", "1"], ["r", "k", "e_min", "stderr", "method"]),
    (["reproduce", "fig1"], ["r", "cth", "cth_over_r"]),
]


@pytest.mark.parametrize("argv, header", SCHEMA_CASES, ids=lambda c: c[0] if isinstance(c, list) else "")
def test_output_schemas(capsys, argv, header):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    got_header, rows = parse_csv(out)
    assert got_header == header
    assert rows  # at least one data row


# ---------------------------------------------------------------------------
# Value spot checks through the full pipeline
# ---------------------------------------------------------------------------


def test_pr_certainty_and_poly_domain(capsys):
    code, out, _ = run_cli(capsys, "pr", "--r", "1", "--rho", "0.2,0.25,0.5")
    assert code == 0
    _, rows = parse_csv(out)
    low = rows[0]
    assert 0.0 < float(low[3]) < 1.0
    assert float(low[4]) == pytest.approx(float(low[3]), abs=1e-12)
    for certain in rows[1:]:
        assert float(certain[3]) == 1.0
        assert certain[4] == ""  # at or above the threshold ratio: no polynomial value


def test_threshold_two_point_is_exact(capsys):
    code, out, _ = run_cli(
        capsys, "threshold", "--dist", "twopoint:0.25", "--r", "1", "--t", "-0.5"
    )
    assert code == 0
    _, rows = parse_csv(out)
    row = dict(zip(REPORT_HEADER, rows[0]))
    assert float(row["rho"]) == 0.25
    assert float(row["p"]) == 1.0
    assert float(row["e_r"]) == -1.0
    assert float(row["lam"]) == 1.0  # minimum is -1


def test_curve_uses_support_grid_for_discrete(capsys):
    code, out, _ = run_cli(capsys, "curve", "--dist", "knn:3", "--r", "1")
    assert code == 0
    _, rows = parse_csv(out)
    law = knn_spectrum(3)
    assert len(rows) == law.spectrum.values.size
    assert [float(r[1]) for r in rows] == law.spectrum.values.tolist()


def test_round_spec_forms(capsys):
    code, out, _ = run_cli(capsys, "cthr", "--r", "linspace:1,10,100")
    _, rows = parse_csv(out)
    assert [int(r[0]) for r in rows] == list(range(1, 11))  # deduplicated

    code, out, _ = run_cli(capsys, "cthr", "--r", "pow2:2,8")
    _, rows = parse_csv(out)
    assert [int(r[0]) for r in rows] == round_grid_pow2(2, 8)


def test_rho_geom_spec(capsys):
    code, out, _ = run_cli(capsys, "pr", "--r", "1", "--rho", "geom:0.001,0.1,5")
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 5
    assert float(rows[0][1]) == pytest.approx(0.001)
    assert float(rows[-1][1]) == pytest.approx(0.1)


def test_empirical_spec_roundtrip(capsys, tmp_path):
    path = tmp_path / "law.csv"
    path.write_text("-3.0,1\n-1.0,1\n0.0,2\n")
    code, out, _ = run_cli(
        capsys, "threshold", "--dist", f"empirical:{path}", "--r", "1", "--t", "-1.0"
    )
    assert code == 0
    _, rows = parse_csv(out)
    row = dict(zip(REPORT_HEADER, rows[0]))
    assert float(row["rho"]) == 0.5
    assert float(row["e_r"]) == -2.0  # boosted branch: conditional mean


def test_maxcut_graph_file(capsys, tmp_path):
    path = tmp_path / "triangle.txt"
    path.write_text("0 1\n1 2\n0 2\n")
    code, out, _ = run_cli(capsys, "maxcut", "--graph", str(path), "--frame", "x")
    assert code == 0
    _, rows = parse_csv(out)
    # triangle: 2 uncut assignments of cut 0, 6 of cut 2
    assert [(float(r[0]), int(r[1])) for r in rows] == [(-2.0, 6), (0.0, 2)]


# ---------------------------------------------------------------------------
# Determinism and file output
# ---------------------------------------------------------------------------


def test_byte_identical_reruns(capsys):
    argv = ["sweep", "--dist", "normal:0,1", "--r", "1,4,16"]
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2

    argv = [
        "crs", "--dist", "normal:0,1", "--r", "2", "--method", "monte_carlo",
        "--trials", "2000", "--seed", "9",
    ]
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2


def test_out_flag_writes_identical_file(capsys, tmp_path):
    argv = ["cthr", "--r", "1,2,3"]
    _, stdout_text, _ = run_cli(capsys, *argv)
    path = tmp_path / "table.csv"
    code, out, _ = run_cli(capsys, *argv, "--out", str(path))
    assert code == 0
    assert out == ""
    assert path.read_text() == stdout_text


def test_unwritable_out_path_is_io_error(capsys):
    code, out, err = run_cli(
        capsys, "kappa", "--out", "/nonexistent-dir/deep/table.csv"
    )
    assert code == 2
    assert err.startswith("error: io:")


# ---------------------------------------------------------------------------
# Config files and precedence
# ---------------------------------------------------------------------------


def test_config_file_supplies_options(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# threshold analysis\ndist = twopoint:0.25\nr = 1\nt = -0.5\n")
    code, out, _ = run_cli(capsys, "threshold", "--config", str(cfg))
    assert code == 0
    _, rows = parse_csv(out)
    assert float(rows[0][3]) == 0.25


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("r = 1\nrho = 0.5\n")
    code, out, _ = run_cli(capsys, "pr", "--config", str(cfg), "--rho", "0.25")
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 1
    assert float(rows[0][1]) == 0.25


def test_unknown_config_key_rejected(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("r = 1\nrho = 0.25\nfrobnicate = 7\n")
    code, _, err = run_cli(capsys, "pr", "--config", str(cfg))
    assert code == 2
    assert "frobnicate" in err


def test_config_coercion_failure(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("dist = twopoint:0.2\nr = 1\nrestarts = soon\n")
    code, _, err = run_cli(capsys, "gmqaoa", "--config", str(cfg))
    assert code == 2
    assert "restarts" in err


def test_missing_config_file(capsys):
    code, _, err = run_cli(capsys, "pr", "--config", "/does/not/exist.cfg")
    assert code == 2
    assert err.startswith("error: config:")


# ---------------------------------------------------------------------------
# Exit codes and error mapping
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["threshold", "--r", "1"],  # missing required --dist
        ["threshold", "--dist", "twopoint:0.2"],  # missing required --r
        ["pr", "--r", "0", "--rho", "0.1"],  # invalid round count
        ["pr", "--r", "1", "--rho", "1.5"],  # invalid marked fraction
        ["sweep", "--dist", "cauchy:0,1", "--r", "1"],  # unknown law
        ["maxcut", "--n", "3", "--frame", "z"],  # invalid choice
        ["maxcut", "--lam", "0.6"],  # round search without size
        ["reproduce", "fig10"],  # unknown target
        ["curve", "--dist", "normal:0,1", "--r", "1", "--grid", "support"],
        ["crs", "--dist", "twopoint:0.2", "--r", "1", "--method", "blom"],
        ["frobnicate"],  # unknown subcommand
    ],
)
def test_config_errors_exit_two(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2
    assert err.startswith("error: ")
    assert out == ""


def test_numerical_error_exits_three(capsys, monkeypatch):
    def explode(cfg):
        raise NumericalError("synthetic instability")

    monkeypatch.setitem(cli._HANDLERS, "kappa", explode)
    code, _, err = run_cli(capsys, "kappa")
    assert code == 3
    assert err == "error: numerical: synthetic instability\n"


def test_help_exits_zero(capsys):
    code, out, _ = run_cli(capsys, "--help")
    assert code == 0
    assert "subcommand" in out
    code, out, _ = run_cli(capsys, "threshold", "--help")
    assert code == 0
    assert "--dist" in out


# ---------------------------------------------------------------------------
# Process-level behavior
# ---------------------------------------------------------------------------


def test_closed_pipe_exits_cleanly():
    # a reader that stops early (| head) must not produce a stack trace
    script = (
        f"{sys.executable} -m thqaoa.cli pr --r 1 --rho geom:1e-9,0.2,30000"
        " | head -n 2; exit ${PIPESTATUS[0]}"
    )
    proc = subprocess.run(
        ["/bin/bash", "-c", script], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    assert "Traceback" not in proc.stderr


def test_console_entry_point():
    proc = subprocess.run(
        ["thqaoa", "kappa"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "x1,kappa"
