import pytest

from decosense.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_sql_prints_table(tmp_path, capsys):
    code, out = run(capsys, "sql", "--L", "12", "--out", str(tmp_path))
    assert code == 0
    lines = out.strip().splitlines()
    assert "F_SQL = 2.0" in lines
    assert "D_SQL = 1.125" in lines
    assert any(line.startswith("tau_D = ") for line in lines)


def test_sql_deterministic(tmp_path, capsys):
    _, first = run(capsys, "sql", "--L", "12", "--out", str(tmp_path))
    _, second = run(capsys, "sql", "--L", "12", "--out", str(tmp_path))
    assert first == second


def test_flag_overrides_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("L = 10\nm = 2\n")
    code, out = run(capsys, "sql", "--config", str(cfg), "--L", "12", "--out", str(tmp_path))
    assert code == 0
    lines = out.strip().splitlines()
    assert "L = 12.0" in lines  # flag wins
    assert "m = 2.0" in lines  # file value survives


def test_invalid_value_exits_2(tmp_path, capsys):
    code, out = run(capsys, "sql", "--m", "heavy", "--out", str(tmp_path))
    assert code == 2
    assert out.strip().splitlines()[-1] == "error: m: not a number: 'heavy'"


def test_missing_config_file_exits_2(tmp_path, capsys):
    code, out = run(capsys, "sql", "--config", str(tmp_path / "absent.cfg"))
    assert code == 2
    assert out.startswith("error: config: cannot read")


def test_domain_error_relayed(tmp_path, capsys):
    code, out = run(capsys, "scale-hbar", "--out", str(tmp_path))
    assert code == 2
    assert out.strip().splitlines()[-1].startswith("error: L: required")


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["sql", "--unknown", "1"])


def test_first_order_writes_deficits(tmp_path, capsys):
    out_dir = tmp_path / "run" / "a"
    code, out = run(capsys, "first-order", "--out", str(out_dir))
    assert code == 0
    content = (out_dir / "deficits.csv").read_text()
    assert content.splitlines()[0] == "eps,deficit"
    assert len(content.splitlines()) == 6
    assert any(line.startswith("slope = ") for line in out.splitlines())


def test_simulate_writes_grid_files(tmp_path, capsys):
    code, out = run(
        capsys, "simulate", "--state", "gaussian", "--mode", "analytic",
        "--nx", "48", "--steps", "4", "--out", str(tmp_path),
    )
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == [
        "diffused.grid", "diffused_p.csv", "diffused_x.csv",
        "free.grid", "free_p.csv", "free_x.csv",
        "initial.grid", "initial_p.csv", "initial_x.csv",
    ]
    assert (tmp_path / "initial.grid").read_text().startswith("# wigner-grid v1\n")


def test_detect_writes_surface(tmp_path, capsys):
    code, out = run(
        capsys, "detect", "--n_sigma", "3", "--n_r", "3", "--out", str(tmp_path)
    )
    assert code == 0
    surface = (tmp_path / "surface.csv").read_text()
    assert surface.splitlines()[0] == "sigma_x,r,exponent"
    assert len(surface.splitlines()) == 10
    assert any(line.startswith("exponent = ") for line in out.splitlines())


def test_rerun_writes_identical_files(tmp_path, capsys):
    a = tmp_path / "a"
    b = tmp_path / "b"
    run(capsys, "detect", "--n_sigma", "3", "--n_r", "3", "--out", str(a))
    run(capsys, "detect", "--n_sigma", "3", "--n_r", "3", "--out", str(b))
    assert (a / "surface.csv").read_bytes() == (b / "surface.csv").read_bytes()


def test_unreachable_server_exits_2(capsys):
    code, out = run(capsys, "sql", "--server", "not-a-url")
    assert code == 2
    assert out.startswith("error: service:")
