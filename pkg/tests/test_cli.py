import os

import pytest

from compactfv.cli import main


def _run_dir_files(path):
    return sorted(os.listdir(path))


def test_missing_subcommand_exits_with_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_missing_problem_is_a_usage_error(capsys):
    assert main(["run", "--method", "eno", "--M", "10", "--N", "1"]) == 2
    assert "problem" in capsys.readouterr().err


def test_omega_requires_fixed_omega_method(capsys):
    rc = main([
        "run", "--problem", "rotating-gaussian", "--method", "eno",
        "--omega", "0.5", "--M", "10", "--N", "1",
    ])
    assert rc == 2
    assert "omega" in capsys.readouterr().err


def test_fixed_omega_requires_omega(capsys):
    rc = main([
        "run", "--problem", "rotating-gaussian", "--method", "fixed-omega",
        "--M", "10", "--N", "1",
    ])
    assert rc == 2


def test_weno_knobs_rejected_for_other_methods():
    rc = main([
        "run", "--problem", "rotating-gaussian", "--method", "eno",
        "--omega-bar", "0.4", "--M", "10", "--N", "1",
    ])
    assert rc == 2


def test_n_and_n_rule_are_mutually_exclusive():
    rc = main([
        "run", "--problem", "rotating-gaussian", "--method", "eno",
        "--M", "10", "--N", "1", "--N-rule", "M/10",
    ])
    assert rc == 2


def test_bad_n_rule_is_rejected():
    rc = main([
        "run", "--problem", "rotating-gaussian", "--method", "eno",
        "--M", "10", "--N-rule", "banana",
    ])
    assert rc == 2
    rc = main([
        "study", "--problem", "rotating-gaussian", "--method", "eno",
        "--M", "10,15", "--N-rule", "M/10",
    ])
    assert rc == 2  # 15 not divisible by 10


def test_positivity_check_linear_only():
    rc = main([
        "run", "--problem", "burgers-smooth", "--method", "eno",
        "--M", "10", "--N", "1", "--positivity-check",
    ])
    assert rc == 2


def test_run_writes_field_dumps(tmp_path, capsys):
    outdir = str(tmp_path)
    rc = main([
        "run", "--problem", "rotating-gaussian", "--method", "eno",
        "--M", "10", "--N-rule", "M/10",
        "--dump-times", "0,1/2,1", "--outdir", outdir,
    ])
    assert rc == 0
    files = _run_dir_files(outdir)
    # N = 1, so fractions 1/2 and 1 both round to step 1: the later fraction
    # wins the step slot, plus the separate t = 0 dump
    assert "field_t0.000000.csv" in files
    assert any(f.startswith("field_t1.000000") for f in files)
    out = capsys.readouterr().out
    assert "E = " in out
    assert "Cmax_x" in out


def test_run_dumps_parameters_for_limited_methods(tmp_path):
    outdir = str(tmp_path)
    rc = main([
        "run", "--problem", "rotating-gaussian", "--method", "weno",
        "--M", "10", "--N", "1", "--outdir", outdir,
    ])
    assert rc == 0
    files = _run_dir_files(outdir)
    assert "params_step1_omega_xm.csv" in files
    assert "params_step1_ell_yp.csv" in files
    assert "params_step1_r_xp.csv" in files


def test_run_positivity_log(tmp_path):
    outdir = str(tmp_path)
    rc = main([
        "run", "--problem", "rotating-gaussian", "--method", "fixed-omega",
        "--omega", "0.5", "--M", "10", "--N", "2",
        "--positivity-check", "--outdir", outdir,
    ])
    assert rc == 0
    lines = (tmp_path / "positivity.csv").read_text().strip().splitlines()
    assert lines[0].startswith("step,")
    assert len(lines) == 3  # header + one row per step


def test_study_writes_convergence_table(tmp_path, capsys):
    outdir = str(tmp_path)
    rc = main([
        "study", "--problem", "rotating-gaussian", "--method", "first-order",
        "--M", "10,20", "--N-rule", "M/10", "--outdir", outdir,
    ])
    assert rc == 0
    lines = (tmp_path / "convergence.csv").read_text().strip().splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("10,1,")
    assert lines[2].startswith("20,2,")
    out = capsys.readouterr().out
    assert "EOC" in out


def test_diagnose_writes_positivity_rows(tmp_path, capsys):
    outdir = str(tmp_path)
    rc = main([
        "diagnose", "--problem", "rotating-gaussian", "--method", "eno",
        "--M", "10", "--N", "2", "--outdir", outdir,
    ])
    assert rc == 0
    lines = (tmp_path / "positivity.csv").read_text().strip().splitlines()
    assert len(lines) == 3
    assert "worst lt excess" in capsys.readouterr().out


def test_diagnose_rejects_nonlinear_problems():
    rc = main([
        "diagnose", "--problem", "burgers-shock", "--method", "eno",
        "--M", "10", "--N", "1",
    ])
    assert rc == 2


def test_config_file_supplies_defaults_and_flags_win(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# sample configuration\n"
        "problem = rotating-gaussian\n"
        "method = fixed-omega\n"
        "omega = 0.5\n"
        "M = 10\n"
        "N = 2\n"
    )
    outdir = str(tmp_path / "out")
    rc = main(["run", "--config", str(cfg), "--N", "1", "--outdir", outdir])
    assert rc == 0
    # the flag value N=1 overrode the config's N=2: a single positivity row
    rc = main([
        "run", "--config", str(cfg), "--N", "1", "--positivity-check",
        "--outdir", outdir,
    ])
    assert rc == 0
    lines = (tmp_path / "out" / "positivity.csv").read_text().strip().splitlines()
    assert len(lines) == 2


def test_config_file_unknown_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("mystery = 7\n")
    rc = main(["run", "--config", str(cfg), "--M", "10", "--N", "1"])
    assert rc == 2
    assert "mystery" in capsys.readouterr().err


def test_runs_are_deterministic(tmp_path):
    args = [
        "run", "--problem", "rotating-shapes", "--method", "weno",
        "--M", "12", "--N", "2",
    ]
    dirs = []
    for tag in ("a", "b"):
        outdir = tmp_path / tag
        assert main(args + ["--outdir", str(outdir)]) == 0
        dirs.append(outdir)
    names = _run_dir_files(dirs[0])
    assert names == _run_dir_files(dirs[1])
    for name in names:
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()
