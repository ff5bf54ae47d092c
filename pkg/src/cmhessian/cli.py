"""Config-driven command line: run solvers, compare reports, print schemas.

Subcommands:
    run <config.json>                  execute one mode, write the report
    compare <a.json> <b.json> [--tol-file t.json]
    schema [config|report]             print the shipped JSON schema

Exit codes: 0 success, 2 validation error, 3 solver failure, 4 check
failure in verify mode.  Reports and the node CSV use full-precision
shortest-representation floats; CSV quoting is RFC-4180 via the stdlib
writer.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from importlib import resources

import numpy as np

from . import __version__
from . import hessian as hs
from .bifurcation import affine_rhs, exponential_rhs, solve_bifurcation, \
    check_uniqueness_bifurcation, table_rhs
from .bounds import bounds_report
from .dirichlet import SolverConfig, solve_sigma_m
from .eigen import continuity_path, inverse_iteration, uniqueness_probe, \
    verify_eigenpair
from .errors import CmHessianError
from .fields import ScalarField
from .functionals import energy, rayleigh_quotient, weighted_volume
from .geometry import make_domain
from .radial import radial_eigen_shoot

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_CHECK = 4


class ValidationFailure(Exception):
    pass


def _schema(name):
    text = resources.files("cmhessian.schemas").joinpath(
        f"{name}.schema.json").read_text()
    return json.loads(text)


def load_config(path):
    with open(path) as fh:
        cfg = json.load(fh)
    import jsonschema

    try:
        jsonschema.validate(cfg, _schema("config"))
    except jsonschema.ValidationError as exc:
        raise ValidationFailure(f"config invalid: {exc.message}") from exc
    n = cfg["domain"]["n"]
    m = cfg["problem"]["m"]
    if not 1 <= m <= n <= 2:
        raise ValidationFailure(f"require 1 <= m <= n <= 2, got m={m}, n={n}")
    mode = cfg["problem"]["mode"]
    if mode == "bifurcate" and "psi" not in cfg["problem"]:
        raise ValidationFailure("bifurcate mode requires problem.psi")
    if mode == "verify" and "verify" not in cfg:
        raise ValidationFailure("verify mode requires a 'verify' section")
    return cfg


def load_report(path):
    with open(path) as fh:
        rep = json.load(fh)
    import jsonschema

    try:
        jsonschema.validate(rep, _schema("report"))
    except jsonschema.ValidationError as exc:
        raise ValidationFailure(f"report invalid: {exc.message}") from exc
    return rep


def _build_f(grid, spec):
    if spec is None or spec.get("type") == "constant":
        value = 1.0 if spec is None else spec.get("value", 1.0)
        return ScalarField.constant(grid, value)
    c = np.asarray(grid.domain.center)
    r2 = ((grid.points - c) ** 2).sum(axis=1)
    if spec["type"] == "radial_poly":
        coeffs = spec["coeffs"]
        vals = sum(ck * r2 ** k for k, ck in enumerate(coeffs))
        return ScalarField(grid, np.asarray(vals, dtype=float), bc="none")
    if spec["type"] == "gaussian":
        at = np.asarray(spec.get("at", grid.domain.center))
        d2 = ((grid.points - at) ** 2).sum(axis=1)
        vals = spec.get("base", 1.0) + spec.get("amplitude", 0.0) * np.exp(
            -d2 / spec["width"] ** 2)
        return ScalarField(grid, vals, bc="none")
    raise ValidationFailure(f"unknown f type {spec['type']!r}")


def _build_psi(spec):
    fam = spec["family"]
    if fam == "affine":
        return affine_rhs(spec["a"], spec["b"])
    if fam == "exponential":
        return exponential_rhs(spec["a"], spec["b"], spec.get("s_floor", -10.0))
    if fam == "table":
        return table_rhs(spec["s"], spec["values"])
    raise ValidationFailure(f"unknown psi family {fam!r}")


def _solver_config(cfg):
    overrides = dict(cfg.get("solver", {}))
    return SolverConfig(**overrides)


def _write_field_csv(path, grid, u: ScalarField, m: int):
    e = hs.hessian_entries(u)
    n = grid.domain.n
    sig = hs.sigma_from_entries(e, n, m)
    slack = hs.gamma_slack_from_entries(e, n, m)
    cols = [f"x{a}" for a in range(grid.dim)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols + ["u", "sigma_m", "cone_slack"])
        row_of = grid.interior_index
        for i in range(grid.size):
            coords = [repr(float(x)) for x in grid.points[i]]
            r = row_of[i]
            if r >= 0:
                w.writerow(coords + [repr(float(u.values[i])),
                                     repr(float(sig[r])), repr(float(slack[r]))])
            else:
                w.writerow(coords + [repr(float(u.values[i])), "", ""])


def _write_radial_csv(path, profile):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "v", "v_prime"])
        for t, v, vp in zip(profile.t, profile.v, profile.vp):
            w.writerow([repr(float(t)), repr(float(v)), repr(float(vp))])


def _run_eigen(domain, grid, cfg, scfg, f, results, flags):
    m = cfg["problem"]["m"]
    eigen_cfg = cfg.get("eigen", {})
    with_path = eigen_cfg.get("with_path", domain.n == 1)
    r = inverse_iteration(domain, m, f, scfg)
    results["lambda1"] = r.lambda1
    results["iterations"] = r.iterations
    ver = verify_eigenpair(domain, m, f, r.lambda1, r.u1)
    results["equation_residual"] = ver.equation_residual
    results["normalization_defect"] = ver.normalization_defect
    results["boundary_defect"] = ver.boundary_defect
    results["cone_slack_min"] = ver.cone_slack_min
    results["rayleigh_defect"] = ver.rayleigh_defect
    flags["normalized"] = ver.normalization_defect <= 1e-9
    flags["boundary_zero"] = ver.boundary_defect == 0.0
    if with_path:
        p = continuity_path(domain, m, f, scfg)
        results["lambda1_path"] = p.lambda1
        results["lambda_path_error"] = p.lambda_error
        results["path"] = [[float(l), float(s)] for l, s in p.path]
        gap = abs(p.lambda1 - r.lambda1) / r.lambda1
        results["method_agreement_rel"] = gap
        flags["methods_agree_0p5pct"] = gap <= 5e-3
    starts = eigen_cfg.get("uniqueness_starts", 0)
    if starts >= 2:
        probe = uniqueness_probe(domain, m, f, scfg, k=starts,
                                 seed=eigen_cfg.get("seed", 0))
        results["uniqueness_lambda_spread"] = probe.lambda_spread_rel
        results["uniqueness_fn_spread"] = probe.eigenfunction_spread
    return r


def run(config_path: str) -> int:
    try:
        cfg = load_config(config_path)
    except (ValidationFailure, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    determinism = cfg.get("determinism", "exact")
    threads = cfg.get("threads")
    if threads is None:
        # environment override is honored only when the config omits it
        threads = int(os.environ.get("CMHESSIAN_THREADS", "0")) or None
    if determinism == "exact":
        threads = 1
    threads = threads or os.cpu_count() or 1

    t0 = time.time()
    mode = cfg["problem"]["mode"]
    m = cfg["problem"]["m"]
    results, flags = {}, {}
    try:
        dom_cfg = cfg["domain"]
        domain, grid = make_domain(
            dom_cfg["kind"], dom_cfg["params"], dom_cfg["n"], dom_cfg["h"],
            center=dom_cfg.get("center"),
            delta_band=dom_cfg.get("delta_band", 0.1))
        scfg = _solver_config(cfg)
        f = _build_f(grid, cfg["problem"].get("f"))
        u_for_csv = None
        if domain.is_heuristic:
            # box rho is only piecewise smooth; results are heuristic
            flags["domain_rho_smooth"] = False

        if mode == "dirichlet":
            C = math.comb(domain.n, m)
            h_field = ScalarField(
                grid, np.where(grid.interior, C * f.values ** m, 0.0), bc="zero")
            u = solve_sigma_m(domain, m, h_field, scfg)
            u_for_csv = u
            e = hs.hessian_entries(u)
            res = float(np.abs(
                hs.sigma_from_entries(e, domain.n, m) - h_field.interior).max())
            results.update({
                "sup_u": u.sup(),
                "equation_residual": res,
                "energy": energy(u, m),
                "weighted_volume": weighted_volume(u, f, m),
                "rayleigh_quotient": rayleigh_quotient(u, f, m),
                "cone_slack_min": float(
                    hs.gamma_slack_from_entries(e, domain.n, m).min()),
            })
            flags["residual_ok"] = res <= scfg.residual_tol * max(
                1.0, float(h_field.interior.max()))

        elif mode == "eigen":
            r = _run_eigen(domain, grid, cfg, scfg, f, results, flags)
            u_for_csv = r.u1

        elif mode == "bounds":
            r = _run_eigen(domain, grid, cfg, scfg, f, results, flags)
            u_for_csv = r.u1
            ones = ScalarField.constant(grid, 1.0)
            lam_m1 = (r.lambda1 if (m == 1 and np.allclose(f.interior, 1.0))
                      else inverse_iteration(domain, 1, ones, scfg).lambda1)
            results["lambda1_m1"] = lam_m1
            rep = bounds_report(domain, f, m, r, lambda1_m1=lam_m1, cfg=scfg)
            results.update({
                "lower_alexandrov": rep.lower_alexandrov,
                "lower_diam": rep.lower_diam,
                "upper_laplacian": rep.upper_laplacian,
                "upper_inscribed_ball": rep.upper_inscribed_ball,
                "inscribed_ball_is_witness": rep.inscribed_ball_is_witness,
            })
            flags.update(rep.flags)
            flags["bounds_pass"] = rep.passed

        elif mode == "bifurcate":
            rhs = _build_psi(cfg["problem"]["psi"])
            lam1 = cfg["problem"].get("lambda1")
            if lam1 is None:
                ones = ScalarField.constant(grid, 1.0)
                lam1 = inverse_iteration(domain, m, ones, scfg).lambda1
            results["lambda1"] = lam1
            results["gamma0"] = rhs.gamma0
            u, info = solve_bifurcation(domain, grid, m, rhs, lam1, scfg)
            u_for_csv = u
            results["sup_u"] = u.sup()
            results["bifurcation_steps"] = int(info["steps"])
            results["bifurcation_root_residual"] = info["root_residual"]
            starts = cfg.get("eigen", {}).get("uniqueness_starts", 0)
            if starts >= 2:
                spread = check_uniqueness_bifurcation(
                    domain, grid, m, rhs, lam1, scfg, k=starts,
                    seed=cfg.get("eigen", {}).get("seed", 0))
                results["bifurcation_spread"] = spread["sup_spread"]
            flags["spectral_condition"] = rhs.gamma0 < lam1

        elif mode == "radial":
            lam, profile = radial_eigen_shoot(domain.n, m, domain.inradius())
            results["radial_lambda"] = lam
            results["radial_endpoint_defect"] = float(abs(profile.v[-1]))
            if cfg["output"].get("radial_csv"):
                _write_radial_csv(cfg["output"]["radial_csv"], profile)

        elif mode == "verify":
            stored = load_report(cfg["verify"]["report"])
            rel_tol = cfg["verify"].get("rel_tol", 0.01)
            r = _run_eigen(domain, grid, cfg, scfg, f, results, flags)
            u_for_csv = r.u1
            gap = abs(stored["results"]["lambda1"] - r.lambda1) / r.lambda1
            results["verify_lambda_rel_gap"] = gap
            flags["lambda1_matches"] = gap <= rel_tol
            rep = bounds_report(domain, f, m, r, cfg=scfg)
            flags.update(rep.flags)
            flags["bounds_pass"] = rep.passed

        if u_for_csv is not None and cfg["output"].get("field_csv"):
            _write_field_csv(cfg["output"]["field_csv"], grid, u_for_csv, m)

    except (ValidationFailure, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CmHessianError as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    results["wall_time_s"] = time.time() - t0
    report = {
        "mode": mode,
        "inputs": cfg,
        "results": results,
        "flags": flags,
        "provenance": {
            "package": "cmhessian",
            "version": __version__,
            "grid_shape": list(grid.shape),
            "interior_nodes": grid.n_interior,
            "determinism": determinism,
            "threads": threads,
        },
    }
    with open(cfg["output"]["report"], "w") as fh:
        json.dump(_jsonable(report), fh, indent=2)
        fh.write("\n")

    if mode == "verify" and not all(flags.values()):
        bad = [k for k, v in flags.items() if not v]
        print(f"verify failed: {', '.join(bad)}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def _jsonable(obj):
    """Coerce numpy scalars (and containers of them) to plain JSON types."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _flatten(prefix, obj, out):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(obj, (int, float)) and not isinstance(obj, bool):
        out[prefix] = float(obj)


def compare(path_a: str, path_b: str, tol_file: str | None = None) -> int:
    try:
        a = load_report(path_a)
        b = load_report(path_b)
        tols = {}
        if tol_file:
            with open(tol_file) as fh:
                tols = json.load(fh)
    except (ValidationFailure, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    if a["mode"] != b["mode"]:
        print(f"error: mode mismatch {a['mode']} vs {b['mode']}", file=sys.stderr)
        return EXIT_VALIDATION
    if a["inputs"].get("domain") != b["inputs"].get("domain"):
        ha = a["inputs"].get("domain", {}).get("h")
        hb = b["inputs"].get("domain", {}).get("h")
        da = {k: v for k, v in a["inputs"].get("domain", {}).items() if k != "h"}
        db = {k: v for k, v in b["inputs"].get("domain", {}).items() if k != "h"}
        if da != db:
            print("error: domain key mismatch", file=sys.stderr)
            return EXIT_VALIDATION

    fa, fb = {}, {}
    _flatten("", a["results"], fa)
    _flatten("", b["results"], fb)
    default_tol = tols.get("default", 1e-12)
    per_key = tols.get("per_key", {})
    worst = []
    for key in sorted(set(fa) & set(fb)):
        if key.startswith("wall_time") or key.startswith("path."):
            continue
        tol = per_key.get(key, default_tol)
        va, vb = fa[key], fb[key]
        scale = max(abs(va), abs(vb), 1e-300)
        if abs(va - vb) / scale > tol:
            worst.append((key, va, vb, tol))
    if worst:
        for key, va, vb, tol in worst:
            print(f"mismatch {key}: {va!r} vs {vb!r} (tol {tol})",
                  file=sys.stderr)
        return 1
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cmhessian",
        description="complex m-Hessian Dirichlet and eigenvalue solvers")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute a run configuration")
    p_run.add_argument("config")
    p_cmp = sub.add_parser("compare", help="compare two reports")
    p_cmp.add_argument("report_a")
    p_cmp.add_argument("report_b")
    p_cmp.add_argument("--tol-file", default=None)
    p_schema = sub.add_parser("schema", help="print a shipped JSON schema")
    p_schema.add_argument("which", nargs="?", default="config",
                          choices=["config", "report"])
    args = parser.parse_args(argv)

    if args.command == "run":
        return run(args.config)
    if args.command == "compare":
        return compare(args.report_a, args.report_b, args.tol_file)
    print(json.dumps(_schema(args.which), indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
