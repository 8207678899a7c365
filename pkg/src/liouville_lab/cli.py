"""Command-line driver: eigenvalue runs, level-set reports, appendix audits,
rearrangement reports, and the named scenario suite.

Output is CSV (schema-versioned header comment); with ``--plot`` each table
is also rendered to a PNG next to it.  Exit codes: 0 all checks pass,
1 a numerical assertion failed (named on stderr), 2 configuration errors.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click
import numpy as np

from .fields import EIGHT_PI, dump_field
from .levelset import appendix_audit, bol_defect, decompose, extend_hat, level_profile
from .mesh import dump_mesh, fill_holes, refine
from .rearrange import rayleigh_chain_report
from .scenarios import (SCENARIOS, ScenarioConfig, _fmt, build_domain,
                        build_weight, list_scenarios, run_scenario)
from .spectral import assemble_stiffness, assemble_weighted_mass, first_eigenpair

_SCHEMA_LINE = "# schema=1"


def _out_dir(flag_value: str | None, config: dict) -> Path:
    path = flag_value or config.get("out") or os.environ.get("LIOUVILLE_LAB_OUT") or "."
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_csv(path: Path, header: list, rows: list) -> None:
    lines = [_SCHEMA_LINE, ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _emit(outdir: Path, stem: str, header: list, rows: list, plot: bool) -> Path:
    path = outdir / f"{stem}.csv"
    write_csv(path, header, rows)
    click.echo(f"wrote {path}")
    if plot:
        from . import plots
        png = outdir / f"{stem}.png"
        if plots.render_table(stem, header, rows, png):
            click.echo(f"wrote {png}")
    return path


def _load_config(path: str | None) -> dict:
    """Flat ``key = value`` file with optional ``[scenario NAME]`` sections."""
    data: dict = {"": {}}
    if not path:
        return data
    section = ""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise click.UsageError(f"cannot read config {path!r}: {exc}")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section.startswith("scenario"):
                section = section[len("scenario"):].strip()
            data.setdefault(section, {})
            continue
        if "=" not in line:
            raise click.UsageError(f"{path}:{lineno}: expected key = value")
        key, _, val = line.partition("=")
        data.setdefault(section, {})[key.strip()] = val.strip()
    return data


_CONFIG_KEYS = {"domain", "weight", "h", "refinements", "levels", "out", "map"}


def _scenario_config(name: str, file_cfg: dict, **overrides) -> ScenarioConfig:
    merged: dict = {}
    for source in (file_cfg.get("", {}), file_cfg.get(name, {})):
        for key, val in source.items():
            if key.startswith("tol."):
                merged.setdefault("tolerances", {})[key[4:]] = float(val)
                continue
            if key not in _CONFIG_KEYS:
                raise click.UsageError(f"unknown config key {key!r}")
            merged[key] = val
    for key, val in overrides.items():
        if val is not None:
            merged[key] = val
    kwargs = {}
    for key in ("domain", "weight", "map", "out"):
        if key in merged:
            kwargs[key] = str(merged[key])
    for key, cast in (("h", float), ("refinements", int), ("levels", int)):
        if key in merged:
            kwargs[key] = cast(merged[key])
    kwargs["tolerances"] = merged.get("tolerances", {})
    try:
        return ScenarioConfig(name=name, **kwargs)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _common_build(domain, weight, h, map_spec, dump_mesh_path, dump_field_path):
    try:
        mesh = build_domain(domain, h, map_spec)
        w = build_weight(weight, mesh, map_spec)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if dump_mesh_path:
        dump_mesh(mesh, dump_mesh_path)
        click.echo(f"wrote {dump_mesh_path}")
    if dump_field_path:
        dump_field(w, dump_field_path)
        click.echo(f"wrote {dump_field_path}")
    return mesh, w


def _fail(name: str) -> None:
    click.echo(f"assertion failed: {name}", err=True)
    sys.exit(1)


@click.group()
def main():
    """Verification lab for Liouville subsolutions, weighted first
    eigenvalues, and the sharp isoperimetric (Bol) inequality."""


@main.command()
@click.option("--domain", default="disk:sqrt8", show_default=True)
@click.option("--weight", default="ulam:1", show_default=True)
@click.option("--h", type=float, default=0.1, show_default=True)
@click.option("--refinements", type=int, default=0, show_default=True)
@click.option("--map", "map_spec", default=None, help="conformal map spec")
@click.option("--out", default=None, help="output directory")
@click.option("--config", default=None, help="key = value config file")
@click.option("--dump-mesh", "dump_mesh_path", default=None)
@click.option("--dump-field", "dump_field_path", default=None)
@click.option("--plot/--no-plot", default=False, show_default=True)
def eig(domain, weight, h, refinements, map_spec, out, config, dump_mesh_path,
        dump_field_path, plot):
    """First eigenvalue run with uniform refinement: CSV h,nu_hat,residual_norm."""
    cfg = _load_config(config).get("", {})
    outdir = _out_dir(out, cfg)
    mesh, w = _common_build(domain, weight, h, map_spec, dump_mesh_path,
                            dump_field_path)
    rows = []
    for level in range(refinements + 1):
        pair = first_eigenpair(assemble_stiffness(mesh),
                               assemble_weighted_mass(mesh, w))
        rows.append([mesh.resolution_h, pair.nu_hat, pair.residual_norm])
        click.echo(f"h={mesh.resolution_h:.6g} nu_hat={pair.nu_hat:.6e} "
                   f"residual={pair.residual_norm:.2e}")
        if level < refinements:
            mesh = refine(mesh)
            w = build_weight(weight, mesh, map_spec)
    _emit(outdir, "eig", ["h", "nu_hat", "residual_norm"], rows, plot)


@main.command()
@click.option("--domain", default="disk:sqrt8", show_default=True)
@click.option("--weight", default="ulam:1", show_default=True)
@click.option("--h", type=float, default=0.1, show_default=True)
@click.option("--levels", type=int, default=50, show_default=True)
@click.option("--field", "field_kind", type=click.Choice(["u", "eigen"]),
              default="u", show_default=True,
              help="whose level sets: the zero-trace part u or the eigenfunction")
@click.option("--map", "map_spec", default=None)
@click.option("--out", default=None)
@click.option("--config", default=None)
@click.option("--dump-mesh", "dump_mesh_path", default=None)
@click.option("--dump-field", "dump_field_path", default=None)
@click.option("--plot/--no-plot", default=False, show_default=True)
def bol(domain, weight, h, levels, field_kind, map_spec, out, config,
        dump_mesh_path, dump_field_path, plot):
    """Level-set report: CSV t,m,mu,ell,defect,components,holes."""
    cfg = _load_config(config).get("", {})
    outdir = _out_dir(out, cfg)
    mesh, w = _common_build(domain, weight, h, map_spec, dump_mesh_path,
                            dump_field_path)
    dec = decompose(w)
    if field_kind == "u":
        fld = dec.u
    else:
        pair = first_eigenpair(assemble_stiffness(mesh),
                               assemble_weighted_mass(mesh, w))
        fld = pair.eigenfunction
    prof = level_profile(fld, w, n_levels=levels, base_weight=dec.h)
    header = ["t", "m", "mu", "ell", "defect", "components", "holes"]
    rows = []
    for k in range(len(prof.levels)):
        mass = min(prof.mass[k], EIGHT_PI)
        rows.append([prof.levels[k], prof.mass[k], prof.base_mass[k],
                     prof.boundary_weight[k],
                     bol_defect(prof.boundary_weight[k], mass),
                     prof.component_count[k], prof.hole_count[k]])
    _emit(outdir, "bol", header, rows, plot)
    # discretization noise near the equality case sits well below this gate
    bad = [r for r in rows[1:-1] if r[4] < -1e-4 * EIGHT_PI ** 2]
    if bad:
        _fail(f"negative Bol defect at level t={bad[0][0]:.6g}")


@main.command()
@click.option("--domain", default="annulus:1,2", show_default=True,
              help="enclosing domain")
@click.option("--weight", default="zero", show_default=True)
@click.option("--omega", default="annulus:1.2,1.8", show_default=True,
              help="audited subregion (semicolon-joined pieces allowed)")
@click.option("--h", type=float, default=0.08, show_default=True)
@click.option("--map", "map_spec", default=None)
@click.option("--out", default=None)
@click.option("--config", default=None)
@click.option("--dump-mesh", "dump_mesh_path", default=None)
@click.option("--dump-field", "dump_field_path", default=None)
@click.option("--plot/--no-plot", default=False, show_default=True)
def audit(domain, weight, omega, h, map_spec, out, config, dump_mesh_path,
          dump_field_path, plot):
    """Multiply-connected strictness audit: CSV name,lhs,rhs,margin,ok."""
    cfg = _load_config(config).get("", {})
    outdir = _out_dir(out, cfg)
    mesh, w = _common_build(domain, weight, h, map_spec, dump_mesh_path,
                            dump_field_path)
    if mesh.hole_count() > 0:
        ambient = fill_holes(mesh)
        w = extend_hat(w, ambient)
    else:
        ambient = mesh
    try:
        om = build_domain(omega, h, map_spec)
        report = appendix_audit(om, w, ambient)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    header = ["name", "lhs", "rhs", "margin", "ok"]
    rows = [[r.name, r.lhs, r.rhs, r.margin, r.ok] for r in report.rows]
    click.echo(f"case: {report.case_label}  final defect: {report.final_defect:.6g}")
    _emit(outdir, "audit", header, rows, plot)
    if not report.ok:
        bad = next(r for r in report.rows if not r.ok)
        _fail(f"audit inequality {bad.name}")


@main.command()
@click.option("--domain", default="disk:1", show_default=True)
@click.option("--weight", default="const-mass:4pi", show_default=True)
@click.option("--h", type=float, default=0.05, show_default=True)
@click.option("--levels", type=int, default=200, show_default=True)
@click.option("--map", "map_spec", default=None)
@click.option("--out", default=None)
@click.option("--config", default=None)
@click.option("--dump-mesh", "dump_mesh_path", default=None)
@click.option("--dump-field", "dump_field_path", default=None)
@click.option("--plot/--no-plot", default=False, show_default=True)
def rearrange(domain, weight, h, levels, map_spec, out, config,
              dump_mesh_path, dump_field_path, plot):
    """Rearrangement report: CSV t,m,R,phi_star plus a summary table."""
    cfg = _load_config(config).get("", {})
    outdir = _out_dir(out, cfg)
    mesh, w = _common_build(domain, weight, h, map_spec, dump_mesh_path,
                            dump_field_path)
    pair = first_eigenpair(assemble_stiffness(mesh),
                           assemble_weighted_mass(mesh, w))
    report = rayleigh_chain_report(pair.eigenfunction, w, n_levels=levels)
    star = report.rearranged
    rows = [[r.level, r.mass,
             float(np.sqrt(8 * r.mass / (EIGHT_PI - r.mass))),
             float(star(np.sqrt(8 * r.mass / (EIGHT_PI - r.mass))))]
            for r in report.rows]
    _emit(outdir, "rearrange", ["t", "m", "R", "phi_star"], rows, plot)
    summary = [["R0", star.radius_R0],
               ["norm_2d", report.norm_2d],
               ["norm_radial", report.norm_radial],
               ["energy_2d", report.energy_2d],
               ["energy_radial", report.energy_radial]]
    _emit(outdir, "rearrange_summary", ["quantity", "value"], summary, plot)
    if report.energy_radial > report.energy_2d * (1 + 1e-3):
        _fail("rearranged Dirichlet energy exceeds the 2D energy")


@main.group()
def scenario():
    """Named verification scenarios."""


@scenario.command("list")
def scenario_list():
    """List the registered scenarios with their claims."""
    for name, claim in list_scenarios():
        click.echo(f"{name}: {claim}")


@scenario.command("run")
@click.argument("name")
@click.option("--h", type=float, default=None)
@click.option("--levels", type=int, default=None)
@click.option("--refinements", type=int, default=None)
@click.option("--domain", default=None)
@click.option("--weight", default=None)
@click.option("--map", "map_spec", default=None)
@click.option("--out", default=None)
@click.option("--config", default=None)
@click.option("--plot/--no-plot", default=False, show_default=True)
def scenario_run(name, h, levels, refinements, domain, weight, map_spec, out,
                 config, plot):
    """Run one scenario; exit 0 iff all of its checks pass."""
    if name not in SCENARIOS:
        raise click.UsageError(
            f"unknown scenario {name!r}; see 'scenario list'")
    file_cfg = _load_config(config)
    cfg = _scenario_config(name, file_cfg, h=h, levels=levels,
                           refinements=refinements, domain=domain,
                           weight=weight, map=map_spec, out=out)
    outdir = _out_dir(out, file_cfg.get("", {}))
    report = run_scenario(cfg)
    click.echo(f"scenario {report.name}: {report.claim}")
    for table_name, (header, rows) in report.tables.items():
        _emit(outdir, f"{report.name}_{table_name}", header, rows, plot)
    for check in report.checks:
        click.echo(check.describe())
    if not report.ok:
        _fail(report.failing()[0].name)
    click.echo("all checks passed")


if __name__ == "__main__":
    main()
