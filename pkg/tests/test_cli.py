"""CLI surfaces: subcommands, CSV schema, config parsing, determinism."""

import pytest
from click.testing import CliRunner

from liouville_lab.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_scenario_list_contains_registry(runner):
    res = runner.invoke(main, ["scenario", "list"])
    assert res.exit_code == 0
    for name in ("equality_disk", "appendix_audit_annulus", "conformal_equality"):
        assert name in res.output


def test_eig_writes_schema_csv(runner, tmp_path):
    res = runner.invoke(main, ["eig", "--domain", "disk:1",
                               "--weight", "const-mass:4pi",
                               "--h", "0.2", "--refinements", "1",
                               "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    text = (tmp_path / "eig.csv").read_text()
    lines = text.strip().splitlines()
    assert lines[0] == "# schema=1"
    assert lines[1] == "h,nu_hat,residual_norm"
    assert len(lines) == 4
    h0, nu0, _ = (float(x) for x in lines[2].split(","))
    h1, nu1, _ = (float(x) for x in lines[3].split(","))
    assert h1 < h0


def test_bol_csv_and_determinism(runner, tmp_path):
    args = ["bol", "--domain", "disk:sqrt8", "--weight", "ulam:1",
            "--h", "0.15", "--levels", "12"]
    res1 = runner.invoke(main, args + ["--out", str(tmp_path / "a")])
    res2 = runner.invoke(main, args + ["--out", str(tmp_path / "b")])
    assert res1.exit_code == 0, res1.output
    assert res2.exit_code == 0
    b1 = (tmp_path / "a" / "bol.csv").read_bytes()
    b2 = (tmp_path / "b" / "bol.csv").read_bytes()
    assert b1 == b2
    header = b1.decode().splitlines()[1]
    assert header == "t,m,mu,ell,defect,components,holes"


def test_audit_csv_rows(runner, tmp_path):
    res = runner.invoke(main, ["audit", "--h", "0.15", "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    lines = (tmp_path / "audit.csv").read_text().strip().splitlines()
    assert lines[1] == "name,lhs,rhs,margin,ok"
    assert all(ln.endswith("true") for ln in lines[2:])
    assert "case3_total_mass_small" in res.output


def test_rearrange_summary(runner, tmp_path):
    res = runner.invoke(main, ["rearrange", "--h", "0.1", "--levels", "50",
                               "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "rearrange.csv").exists()
    summary = (tmp_path / "rearrange_summary.csv").read_text()
    assert "R0" in summary


def test_scenario_run_pass_and_exit_codes(runner, tmp_path):
    res = runner.invoke(main, ["scenario", "run", "gauge_invariance",
                               "--h", "0.15", "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    assert "all checks passed" in res.output


def test_unknown_scenario_is_usage_error(runner):
    res = runner.invoke(main, ["scenario", "run", "nonsense"])
    assert res.exit_code == 2


def test_failed_check_exits_1_and_names_assertion(runner, tmp_path):
    cfg = tmp_path / "strict.cfg"
    cfg.write_text("[scenario annulus_positive]\ntol.margin = 50\n")
    res = runner.invoke(main, ["scenario", "run", "annulus_positive",
                               "--h", "0.12", "--config", str(cfg),
                               "--out", str(tmp_path)])
    assert res.exit_code == 1
    assert "nu_hat_strictly_positive" in res.output


def test_scenario_plot_renders(runner, tmp_path):
    res = runner.invoke(main, ["scenario", "run", "gauge_invariance",
                               "--h", "0.2", "--plot", "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "gauge_invariance_gauge.png").exists()


def test_config_file_overrides_and_rejects_unknown_keys(runner, tmp_path):
    cfg = tmp_path / "lab.cfg"
    cfg.write_text("h = 0.2\n[scenario gauge_invariance]\nlevels = 10\n")
    res = runner.invoke(main, ["scenario", "run", "gauge_invariance",
                               "--config", str(cfg), "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output

    bad = tmp_path / "bad.cfg"
    bad.write_text("mystery = 12\n")
    res = runner.invoke(main, ["scenario", "run", "gauge_invariance",
                               "--config", str(bad), "--out", str(tmp_path)])
    assert res.exit_code == 2


def test_config_rejects_nonpositive_tolerance(runner, tmp_path):
    cfg = tmp_path / "lab.cfg"
    cfg.write_text("[scenario gauge_invariance]\ntol.gauge = -1\n")
    res = runner.invoke(main, ["scenario", "run", "gauge_invariance",
                               "--config", str(cfg), "--out", str(tmp_path)])
    assert res.exit_code == 2


def test_config_syntax_error_is_exit_2(runner, tmp_path):
    cfg = tmp_path / "lab.cfg"
    cfg.write_text("just some words\n")
    res = runner.invoke(main, ["eig", "--config", str(cfg)])
    assert res.exit_code == 2


def test_dump_flags(runner, tmp_path):
    res = runner.invoke(main, ["eig", "--domain", "disk:1",
                               "--weight", "zero", "--h", "0.25",
                               "--out", str(tmp_path),
                               "--dump-mesh", str(tmp_path / "m.txt"),
                               "--dump-field", str(tmp_path / "f.txt")])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "m.txt").exists()
    assert (tmp_path / "f.txt").read_text().startswith("# mesh ")


def test_env_var_sets_default_out(runner, tmp_path, monkeypatch):
    monkeypatch.setenv("LIOUVILLE_LAB_OUT", str(tmp_path / "envout"))
    res = runner.invoke(main, ["eig", "--domain", "disk:1", "--weight", "zero",
                               "--h", "0.3"])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "envout" / "eig.csv").exists()


def test_plot_flag_renders_png(runner, tmp_path):
    res = runner.invoke(main, ["bol", "--domain", "disk:sqrt8",
                               "--weight", "ulam:1", "--h", "0.2",
                               "--levels", "8", "--plot",
                               "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "bol.png").exists()


def test_bad_domain_spec_is_usage_error(runner):
    res = runner.invoke(main, ["eig", "--domain", "hexagon:1"])
    assert res.exit_code == 2


def test_mapped_domain_requires_map(runner):
    res = runner.invoke(main, ["eig", "--domain", "mapped"])
    assert res.exit_code == 2


def test_non_univalent_map_rejected(runner):
    res = runner.invoke(main, ["eig", "--domain", "mapped",
                               "--map", "poly:1,0.8"])
    assert res.exit_code == 2
