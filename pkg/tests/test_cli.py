"""End-to-end checks of the command-line interface.

Everything goes through ``nrd.cli.main(argv)`` so the exit-code contract is
exercised exactly as a shell user would see it: 0 success, 1 usage error,
2 precondition violated, 3 numerical failure.  File-producing commands are
re-run to confirm byte-identical outputs and manifests.
"""

from __future__ import annotations

import json

import numpy as np
import pytest

from nrd import CoopLV, Domain1D, jacobians
from nrd.cli import main
from nrd.stability import DispersionData

COOP_PARAMS = "a=1,b=0.1,c=0.1,d=1"


def run_cli(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, out


# -- exit codes --------------------------------------------------------------

def test_version_exits_zero(capsys):
    assert main(["--version"]) == 0
    assert "nrd" in capsys.readouterr().out


def test_unknown_subcommand_exits_one(capsys):
    assert main(["frobnicate"]) == 1


def test_malformed_params_exit_one():
    assert main(["analyze", "--model", "coop", "--params", "a=0.1,b",
                 "--d1", "0.01", "--d2", "1.0"]) == 1
    assert main(["analyze", "--model", "coop", "--params", "a=oops",
                 "--d1", "0.01", "--d2", "1.0"]) == 1


def test_unknown_model_exits_one():
    assert main(["analyze", "--model", "nosuch", "--d1", "0.1"]) == 1


def test_missing_required_flag_exits_one():
    assert main(["analyze", "--model", "coop", "--params", COOP_PARAMS,
                 "--d2", "1.0"]) == 1  # no --d1
    assert main(["simulate", "--model", "logistic", "--params", "a=0.1,b=1.1",
                 "--d1", "0.45"]) == 1  # no --t-end


def test_scalar_analyze_is_a_usage_error():
    # classification needs two species; the CLI should say so, not crash
    assert main(["analyze", "--model", "logistic", "--params", "a=0.1,b=1.1",
                 "--d1", "0.45", "--l", "2"]) == 1


def test_bad_inline_ic_exits_one():
    assert main(["simulate", "--model", "logistic", "--params", "a=0.1,b=1.1",
                 "--d1", "0.45", "--t-end", "1.0", "--ic", "{not json"]) == 1


def test_not_destabilizable_exits_two():
    # membrane uptake is self-damping, so there is no finite critical diffusion
    assert main(["bifpoints", "--model", "membrane",
                 "--params", "k_on=1,k_fb=1,k_off=1", "--l", "2"]) == 2


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_blow_up_exits_three():
    # dt far beyond the kinetics' stability limit: explicit reaction part blows up
    assert main(["simulate", "--model", "coop", "--params", COOP_PARAMS,
                 "--d1", "0.004", "--d2", "1.0", "--l", "1", "--N", "32",
                 "--dt", "10", "--t-end", "2000"]) == 3


# -- analyze -----------------------------------------------------------------

def test_analyze_coop_reports_first_steady_mode(capsys):
    rc, out = run_cli(capsys, [
        "analyze", "--model", "coop", "--params", COOP_PARAMS,
        "--d1", "0.00584", "--d2", "1.0", "--l", "1",
    ])
    assert rc == 0
    report = json.loads(out)
    assert report["steady_modes"] == [1]
    assert report["hopf_modes"] == []
    assert report["case"] == "i"
    (lo, hi), = report["I_S"]
    assert lo == 0.0 and hi > 1.0


def test_analyze_localized_coop_has_no_averaging_driven_modes(capsys):
    rc, out = run_cli(capsys, [
        "analyze", "--model", "coop", "--params", COOP_PARAMS, "--localized",
        "--d1", "0.004", "--d2", "1.0", "--l", "1",
    ])
    assert rc == 0
    report = json.loads(out)
    assert report["hopf_modes"] == []
    assert report["I_H"] == []
    assert report["case"].startswith("iv")


# -- bifpoints ---------------------------------------------------------------

def test_bifpoints_logistic_closed_form(capsys):
    rc, out = run_cli(capsys, [
        "bifpoints", "--model", "logistic", "--params", "a=0.1,b=1.1",
        "--l", "2", "--max-mode", "4",
    ])
    assert rc == 0
    points = json.loads(out)
    assert [p["mode"] for p in points] == [1, 2, 3, 4]
    assert all(p["kind"] == "SteadyState" and p["param"] == "d" for p in points)
    expected = [0.4, 0.1, 0.4 / 9.0, 0.025]
    for p, want in zip(points, expected):
        assert p["value"] == pytest.approx(want, rel=1e-14)


def test_bifpoints_domain_length_changes_values(capsys):
    _, out = run_cli(capsys, ["bifpoints", "--model", "logistic",
                              "--params", "a=0.1,b=1.1", "--max-mode", "1"])
    assert json.loads(out)[0]["value"] == pytest.approx(0.1, rel=1e-14)  # l = 1
    _, out = run_cli(capsys, ["bifpoints", "--model", "logistic",
                              "--params", "a=0.1,b=1.1", "--l", "2", "--max-mode", "1"])
    assert json.loads(out)[0]["value"] == pytest.approx(0.4, rel=1e-14)


def test_bifpoints_rm_reference_values(capsys):
    rc, out = run_cli(capsys, [
        "bifpoints", "--model", "rm", "--params", "k=0.5,theta=1",
        "--d1", "0.006", "--d2", "0.9", "--l", "4",
    ])
    assert rc == 0
    points = json.loads(out)
    hopf = sorted(p["value"] for p in points if p["kind"] == "Hopf")
    steady10 = sorted(p["value"] for p in points
                      if p["kind"] == "SteadyState" and p["mode"] == 10)
    assert hopf == pytest.approx([0.0706, 0.4011], abs=1e-3)
    assert steady10[0] == pytest.approx(0.2988, abs=1e-3)
    assert all(p["param"] == "lambda" for p in points)


# -- simulate ----------------------------------------------------------------

def test_simulate_writes_csv_outcome_and_manifest(tmp_path, capsys):
    out_csv = tmp_path / "traj.csv"
    rc, out = run_cli(capsys, [
        "simulate", "--model", "logistic", "--params", "a=0.1,b=1.1",
        "--d1", "0.45", "--l", "2", "--N", "64", "--t-end", "0.5",
        "--steady-tol", "0", "--out", str(out_csv),
    ])
    assert rc == 0
    outcome = json.loads(out)
    assert outcome["kind"] in {"ConstantSteady", "PatternedSteady",
                               "PeriodicOrbit", "Undecided"}

    lines = out_csv.read_text().splitlines()
    assert lines[0] == "t,x,u"
    assert len(lines) == 1 + 6 * 64  # snapshots at t = 0, 0.1, ..., 0.5

    outcome_path = tmp_path / "traj_outcome.json"
    assert json.loads(outcome_path.read_text()) == outcome

    manifest = json.loads((tmp_path / "traj.csv.manifest.json").read_text())
    assert manifest["command"] == "simulate"
    assert manifest["outputs"] == sorted([str(out_csv), str(outcome_path)])
    assert manifest["resolved"]["d1"] == 0.45


def test_repeat_runs_are_byte_identical(tmp_path, capsys):
    out_csv = tmp_path / "rep.csv"
    argv = [
        "simulate", "--model", "logistic", "--params", "a=0.1,b=1.1",
        "--d1", "0.45", "--l", "1", "--N", "32", "--t-end", "0.2",
        "--steady-tol", "0", "--format", "frames", "--seed", "11",
        "--ic", '{"type": "random", "low": 0.9, "high": 1.1}',
        "--out", str(out_csv),
    ]
    paths = [out_csv, tmp_path / "rep_outcome.json", tmp_path / "rep.csv.manifest.json"]

    assert main(argv) == 0
    capsys.readouterr()
    first = [p.read_bytes() for p in paths]
    assert main(argv) == 0
    capsys.readouterr()
    second = [p.read_bytes() for p in paths]
    assert first == second


# -- modes -------------------------------------------------------------------

def test_modes_single_entry_for_pure_cosine(tmp_path, capsys):
    dom = Domain1D(l=2.0, N=64)
    u = np.cos(2.0 * dom.x / dom.l)
    csv = tmp_path / "frame.csv"
    header = "t," + ",".join(f"u{j}" for j in range(dom.N))
    row = "0," + ",".join("%.17g" % v for v in u)
    csv.write_text(header + "\n" + row + "\n")

    rc, out = run_cli(capsys, ["modes", "--in", str(csv), "--l", "2"])
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "mode,amp_u"
    assert len(lines) == 2
    mode, amp = lines[1].split(",")
    assert mode == "2"
    assert float(amp) == pytest.approx(1.0, abs=1e-12)


def test_modes_needs_an_input_file():
    assert main(["modes", "--l", "2"]) == 1
    assert main(["modes", "--in", "/nonexistent/frame.csv", "--l", "2"]) == 1


def test_modes_two_species_table(tmp_path, capsys):
    out_csv = tmp_path / "rm.csv"
    rc, _ = run_cli(capsys, [
        "simulate", "--model", "rm", "--params", "k=0.5,m=6,theta=1",
        "--d1", "0.1", "--d2", "0.2", "--l", "4", "--N", "32",
        "--t-end", "0.2", "--steady-tol", "0", "--format", "frames",
        "--out", str(out_csv),
    ])
    assert rc == 0
    rc, out = run_cli(capsys, ["modes", "--in", str(out_csv), "--l", "4"])
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "mode,amp_u,amp_v"
    assert len(lines) > 1


# -- config files and precedence ---------------------------------------------

def test_config_file_overrides_flags(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d1": 0.00584}))
    rc, out = run_cli(capsys, [
        "analyze", "--model", "coop", "--params", COOP_PARAMS,
        "--d1", "0.05", "--d2", "1.0", "--l", "1", "--config", str(cfg),
    ])
    assert rc == 0
    # the flag value 0.05 alone would give no unstable steady modes
    assert json.loads(out)["steady_modes"] == [1]


def test_unreadable_or_invalid_config_exits_one(tmp_path):
    assert main(["analyze", "--model", "coop", "--params", COOP_PARAMS,
                 "--d1", "0.01", "--d2", "1.0",
                 "--config", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2, 3]")
    assert main(["analyze", "--model", "coop", "--params", COOP_PARAMS,
                 "--d1", "0.01", "--d2", "1.0", "--config", str(bad)]) == 1


# -- sweep -------------------------------------------------------------------

def test_sweep_coop_grid_contours_manifest(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NRD_THREADS", "2")
    out_csv = tmp_path / "sweep.csv"
    rc, _ = run_cli(capsys, [
        "sweep", "--model", "coop", "--params", COOP_PARAMS, "--d2", "1.0",
        "--l", "1", "--x-range", "0.001:0.01:5", "--p-range", "0.1:5.0:7",
        "--out", str(out_csv),
    ])
    assert rc == 0

    lines = out_csv.read_text().splitlines()
    assert lines[0] == "beta,p,D,T"
    assert len(lines) == 1 + 5 * 7

    # spot-check one cell against a direct dispersion evaluation
    beta, p, D_val, T_val = (float(v) for v in lines[1 + 2 * 7 + 3].split(","))
    disp = DispersionData.from_jacobians(
        jacobians(CoopLV(a=1, b=0.1, c=0.1, d=1), beta, 1.0)
    )
    assert D_val == pytest.approx(float(disp.D(np.array([p]))[0]), rel=1e-15)
    assert T_val == pytest.approx(float(disp.T(np.array([p]))[0]), rel=1e-15)

    contours = json.loads((tmp_path / "sweep_contours.json").read_text())
    assert contours["x_name"] == "beta"
    assert isinstance(contours["D"], list) and isinstance(contours["T"], list)

    manifest = json.loads((tmp_path / "sweep.csv.manifest.json").read_text())
    assert manifest["outputs"] == sorted(
        [str(out_csv), str(tmp_path / "sweep_contours.json")]
    )


def test_sweep_rm_uses_lambda_axis(tmp_path, capsys):
    out_csv = tmp_path / "rm_sweep.csv"
    rc, _ = run_cli(capsys, [
        "sweep", "--model", "rm", "--params", "k=0.5,theta=1",
        "--d1", "0.005", "--d2", "1.0", "--l", "2",
        "--x-range", "0.1:0.4:4", "--p-range", "1:40:5", "--out", str(out_csv),
    ])
    assert rc == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "lambda,p,D,T"
    assert len(lines) == 1 + 4 * 5


def test_sweep_rejects_bad_ranges_and_thread_counts(tmp_path, monkeypatch):
    base = ["sweep", "--model", "coop", "--params", COOP_PARAMS, "--d2", "1.0",
            "--out", str(tmp_path / "x.csv")]
    assert main(base + ["--x-range", "1:2"]) == 1
    assert main(base + ["--x-range", "2:1:10"]) == 1
    monkeypatch.setenv("NRD_THREADS", "0")
    assert main(base + ["--x-range", "0.001:0.01:3", "--p-range", "0.1:5:3"]) == 1
