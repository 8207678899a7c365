"""Acceptance gate: every quantitative claim at its stated tolerance.

Each criterion is one test that prints a PASS/FAIL line; run with ``-s`` (or
read the captured output) for the one-line-per-criterion report.
"""

import math
import time

import numpy as np

from liouville_lab import (ScalarField, appendix_audit, assemble_stiffness,
                           assemble_weighted_mass, bol_defect, boundary_weight,
                           constant_field, extend_hat, fill_holes, first_eigenpair,
                           level_profile, mesh_annulus, mesh_disk, normalize_gauge,
                           refine, total_mass, u_lambda_field)
from liouville_lab.cli import write_csv
from liouville_lab.rearrange import radial_weighted_mass, rayleigh_chain_report
from liouville_lab.scenarios import SCENARIOS, ScenarioConfig, run_scenario

import oracles as O

SQRT8 = math.sqrt(8.0)
EIGHT_PI = 8 * math.pi
FOUR_PI = 4 * math.pi


def _report(num, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, detail


def test_criterion_01_closed_form_mass():
    pairs = [(1.0, 1.0), (1.0, SQRT8), (SQRT8, 1.0), (2.0, 2.0)]
    worst_err, worst_ratio, worst_time = 0.0, np.inf, 0.0
    for lam, delta in pairs:
        t0 = time.perf_counter()
        mesh = mesh_disk(delta, 0.05)
        exact = O.disk_mass_exact(lam, delta)
        e0 = abs(total_mass(u_lambda_field(mesh, lam)) - exact) / exact
        fine = refine(mesh)
        e1 = abs(total_mass(u_lambda_field(fine, lam)) - exact) / exact
        elapsed = time.perf_counter() - t0
        worst_err = max(worst_err, e0)
        worst_ratio = min(worst_ratio, e0 / e1)
        worst_time = max(worst_time, elapsed)
    ok = worst_err <= 1e-3 and worst_ratio >= 2.8 and worst_time < 5.0
    _report(1, ok, f"mass rel err <= {worst_err:.2e} (tol 1e-3), refinement "
                   f"ratio >= {worst_ratio:.2f} (~4), slowest case {worst_time:.2f}s (< 5s)")


def test_criterion_02_closed_form_boundary_integral():
    worst = 0.0
    for lam, delta in [(1.0, 1.0), (1.0, SQRT8), (SQRT8, 1.0), (2.0, 2.0)]:
        mesh = mesh_disk(delta, 0.05)
        exact = O.disk_boundary_exact(lam, delta)
        err = abs(boundary_weight(u_lambda_field(mesh, lam)) - exact) / exact
        worst = max(worst, err)
    ok = worst <= 1e-3
    _report(2, ok, f"boundary integral rel err <= {worst:.2e} (tol 1e-3)")


def test_criterion_03_bol_equality_on_disks():
    worst = 0.0
    for delta, lam in [(SQRT8, 1.0), (1.0, SQRT8)]:
        mesh = mesh_disk(delta, 0.05)
        w = u_lambda_field(mesh, lam)
        # whole-domain level
        whole = abs(bol_defect(boundary_weight(w),
                               min(total_mass(w), EIGHT_PI))) / EIGHT_PI ** 2
        worst = max(worst, whole)
        # >= 20 interior level sets of the radial decreasing bubble profile
        r2 = (mesh.vertices ** 2).sum(axis=1)
        scale = 8.0 / lam ** 2
        psi = ScalarField(mesh=mesh, values=(scale - r2) / (scale + r2))
        prof = level_profile(psi, w, n_levels=24)
        for ell, m in zip(prof.boundary_weight[1:-1], prof.mass[1:-1]):
            worst = max(worst, abs(bol_defect(ell, min(m, EIGHT_PI))) / EIGHT_PI ** 2)
    ok = worst <= 2e-3
    _report(3, ok, f"normalized Bol defect <= {worst:.2e} on both equality "
                   f"disks, whole domain + 22 interior levels (tol 2e-3)")


def test_criterion_04_bol_strictness():
    mesh = mesh_disk(1.0, 0.05)
    w = constant_field(mesh, math.log(FOUR_PI / mesh.area()))
    whole = bol_defect(boundary_weight(w), total_mass(w))
    dom = mesh_annulus(1.0, 2.0, 0.05)
    ambient = fill_holes(dom)
    what = extend_hat(constant_field(dom, 0.0), ambient)
    omega = mesh_annulus(1.2, 1.8, 0.05)
    audit = appendix_audit(omega, what, ambient)
    chain_ok = all(r.ok for r in audit.rows)
    ok = whole >= 0.5 and chain_ok and audit.final_defect > 0
    _report(4, ok, f"constant-weight whole-domain defect {whole:.3f} (>= 0.5); "
                   f"audit case {audit.case_label}, chain ok={chain_ok}, "
                   f"final defect {audit.final_defect:.3f} (> 0)")


def test_criterion_05_eigenvalue_equality_case():
    t0 = time.perf_counter()
    mesh = mesh_disk(SQRT8, 0.05)
    w = u_lambda_field(mesh, 1.0)
    pair = first_eigenpair(assemble_stiffness(mesh), assemble_weighted_mass(mesh, w))
    r2 = (mesh.vertices ** 2).sum(axis=1)
    psi = (8.0 - r2) / (8.0 + r2)
    phi = pair.eigenfunction.values
    sup_err = np.abs(phi / np.abs(phi).max() - psi).max()
    fine = refine(mesh)
    wf = u_lambda_field(fine, 1.0)
    pf = first_eigenpair(assemble_stiffness(fine), assemble_weighted_mass(fine, wf))
    elapsed = time.perf_counter() - t0
    ok = (abs(pair.nu_hat) <= 5e-3 and abs(pf.nu_hat) <= 1.5e-3
          and sup_err <= 1e-2 and elapsed < 30.0)
    _report(5, ok, f"nu_hat {pair.nu_hat:.2e} (<= 5e-3), refined {pf.nu_hat:.2e} "
                   f"(<= 1.5e-3), eigenfunction sup err {sup_err:.2e} (<= 1e-2), "
                   f"{elapsed:.1f}s (< 30s)")


def test_criterion_06_strict_positivity_at_threshold():
    mesh = mesh_disk(1.0, 0.05)
    w = constant_field(mesh, math.log(4.0))
    pair = first_eigenpair(assemble_stiffness(mesh), assemble_weighted_mass(mesh, w))
    target = O.bessel_j0_zero() ** 2 / 4.0 - 1.0
    disk_err = abs(pair.nu_hat - target)

    ann = mesh_annulus(1.0, 2.0, 0.05)
    wa = constant_field(ann, math.log(4.0 / 3.0))
    pa = first_eigenpair(assemble_stiffness(ann), assemble_weighted_mass(ann, wa))
    ok = disk_err <= 1e-2 and pa.nu_hat > 0.1
    _report(6, ok, f"constant-weight disk nu_hat {pair.nu_hat:.5f} vs "
                   f"{target:.5f} (err {disk_err:.2e} <= 1e-2); annulus "
                   f"nu_hat {pa.nu_hat:.3f} (> 0.1)")


# frozen from the 1D radial finite-element oracle (tests/oracles.py)
SWEEP_ORACLE = {2 * math.pi: 1.46802096, 3 * math.pi: 0.49411034,
                3.8 * math.pi: 0.07874350, 4 * math.pi: 0.0}


def test_criterion_07_threshold_sweep():
    mesh = mesh_disk(1.0, 0.05)
    nus = []
    for mass in SWEEP_ORACLE:
        lam = O.lambda_for_mass(mass)
        w = u_lambda_field(mesh, lam)
        pair = first_eigenpair(assemble_stiffness(mesh),
                               assemble_weighted_mass(mesh, w))
        nus.append(pair.nu_hat)
    oracle_err = max(abs(nu - ref) for nu, ref in zip(nus, SWEEP_ORACLE.values()))
    ok = (all(nu > 0 for nu in nus[:3]) and abs(nus[3]) <= 5e-3
          and all(a > b for a, b in zip(nus, nus[1:])) and oracle_err <= 1e-2)
    _report(7, ok, f"sweep nu_hat {['%.4f' % v for v in nus]}: positive below "
                   f"4pi, |at 4pi| = {abs(nus[3]):.2e} (<= 5e-3), decreasing, "
                   f"oracle err {oracle_err:.2e}")


def test_criterion_08_rearrangement_chain():
    mesh = mesh_disk(1.0, 0.025)
    w = constant_field(mesh, math.log(FOUR_PI / mesh.area()))
    pair = first_eigenpair(assemble_stiffness(mesh), assemble_weighted_mass(mesh, w))
    report = rayleigh_chain_report(pair.eigenfunction, w, n_levels=200)
    star = report.rearranged
    eq_err = max(abs(radial_weighted_mass(star, t) - m)
                 for t, m in zip(star.profile.levels, star.profile.mass))
    eq_rel = eq_err / star.total_mass
    norm_rel = abs(report.norm_radial - report.norm_2d) / report.norm_2d
    energy_ok = report.energy_radial <= report.energy_2d * (1 + 1e-3)
    r0_err = abs(star.radius_R0 - SQRT8)
    ok = (eq_rel <= 1e-3 and norm_rel <= 1e-3 and energy_ok
          and r0_err <= 1e-3)
    _report(8, ok, f"equimeasurability {eq_rel:.2e} (<= 1e-3), L2 match "
                   f"{norm_rel:.2e} (<= 1e-3), radial energy "
                   f"{report.energy_radial:.5f} <= {report.energy_2d:.5f}+1e-3, "
                   f"R0 err {r0_err:.2e} (<= 1e-3)")


def test_criterion_09_conformal_equality_transport():
    cfg = ScenarioConfig(name="conformal_equality", h=0.05)
    rep = run_scenario(cfg)
    vals = {c.name: c for c in rep.checks}
    mass_rel = vals["pullback_mass_rel"].value
    nu = vals["nu_hat_near_zero"].value
    sup = vals["eigenfunction_transport"].value
    ok = mass_rel <= 2e-3 and abs(nu) <= 1e-2 and sup <= 2e-2
    _report(9, ok, f"pullback mass rel {mass_rel:.2e} (<= 2e-3), nu_hat "
                   f"{nu:.2e} (<= 1e-2), transported eigenfunction sup err "
                   f"{sup:.2e} (<= 2e-2)")


def test_criterion_10_gauge_invariance():
    mesh = mesh_disk(SQRT8, 0.05)
    w = u_lambda_field(mesh, 1.0)
    m0, l0 = total_mass(w), boundary_weight(w)
    worst = 0.0
    for c in (-1.0, 0.5, 2.0):
        wc = normalize_gauge(w, c)
        worst = max(worst, abs(total_mass(wc) - m0) / m0,
                    abs(boundary_weight(wc) - l0) / l0)
    ok = worst <= 1e-10
    _report(10, ok, f"mass and boundary weight drift <= {worst:.2e} under "
                    f"the gauge (tol 1e-10)")


def test_criterion_11_determinism_and_runtime(tmp_path):
    t0 = time.perf_counter()
    outputs = {}
    for attempt in ("first", "second"):
        outdir = tmp_path / attempt
        outdir.mkdir()
        for name in SCENARIOS:
            rep = run_scenario(ScenarioConfig(name=name))
            assert rep.ok, f"{name}: {[c.name for c in rep.failing()]}"
            for table, (header, rows) in rep.tables.items():
                path = outdir / f"{name}_{table}.csv"
                write_csv(path, header, rows)
                outputs.setdefault(attempt, {})[path.name] = path.read_bytes()
    elapsed = time.perf_counter() - t0
    same = outputs["first"] == outputs["second"]
    ok = same and elapsed < 600.0
    _report(11, ok, f"two full scenario-suite runs byte-identical={same}, "
                    f"{elapsed:.0f}s total (< 600s)")
