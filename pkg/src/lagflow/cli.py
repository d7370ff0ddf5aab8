"""Command-line front end.

Subcommands: ``classify``, ``verify``, ``brakke``, ``export`` and
``ode-find``.  Exit codes: 0 when every check passes, 1 on a failed or
inconclusive verification, 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .brakke import limit_check, log_divergence_probe, smooth_flow_check
from .config import ConfigError, RunConfig, as_float_tuple
from .integer_family import IntegerSlice, LambdaSpec, classify
from .mesh import export_mesh
from .ode_family import find_periodic
from .verify import all_passed, verify_integer, verify_ode

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CSV_HEADER = "t,mass,variation,error_estimate"
REPORT_SCHEMA = 1
# a refinement change above this fraction of the limit tolerance makes a run inconclusive
CONVERGENCE_SHARE = 0.1


class UsageError(Exception):
    pass


def _parse_lambdas(text: str) -> tuple[float, ...]:
    try:
        vals = as_float_tuple(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse lambdas {text!r}") from exc
    if len(vals) < 2:
        raise UsageError("need at least two lambdas")
    if any(v == 0 for v in vals):
        raise UsageError("lambda entries must be nonzero")
    return tuple([v for v in vals if v > 0] + [v for v in vals if v < 0])


def _parse_complex_list(text: str) -> tuple[complex, ...]:
    try:
        return tuple(complex(v) for v in text.replace(" ", "").split(",") if v)
    except ValueError as exc:
        raise UsageError(f"cannot parse complex list {text!r}") from exc


_FLAG_FIELDS = {
    "family": "family",
    "t": "t_values",
    "t0": "t0",
    "count": "count",
    "alpha": "alpha",
    "radius": "phi_radius",
    "amplitude": "phi_amplitude",
    "n_r": "n_r",
    "n_polar": "n_polar",
    "n_azimuth": "n_azimuth",
    "n_s": "n_s",
    "samples": "samples",
    "rng_seed": "rng_seed",
    "out_dir": "output_dir",
    "seed_file": "seed_file",
    "seed_name": "seed_name",
}


def build_config(args) -> RunConfig:
    """Config file (if any) overridden by explicitly given flags."""
    base = RunConfig.load(args.config) if getattr(args, "config", None) else RunConfig()
    updates = {}
    for flag, name in _FLAG_FIELDS.items():
        val = getattr(args, flag, None)
        if val is not None:
            updates[name] = as_float_tuple(val) if name == "t_values" else val
    if getattr(args, "lambdas", None):
        updates["lambdas"] = _parse_lambdas(args.lambdas)
    if getattr(args, "center", None):
        c = _parse_complex_list(args.center)
        updates["phi_center_re"] = tuple(v.real for v in c)
        updates["phi_center_im"] = tuple(v.imag for v in c)
    if getattr(args, "no_flow", False):
        updates["check_flow"] = False
    return dataclasses.replace(base, **updates)


def _out_path(cfg: RunConfig, given: str | None, default_name: str) -> Path:
    if given:
        return Path(given)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out / default_name


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# classify -----------------------------------------------------------------

_CSIGNS = {"+": 1, "-": -1, "0": 0, "pos": 1, "neg": -1, "zero": 0}


def cmd_classify(args) -> int:
    spec = LambdaSpec(_parse_lambdas(args.lambdas), strict_integer=True)
    signs = [_CSIGNS[args.csign]] if args.csign is not None else [1, 0, -1]
    reports = [classify(spec, c) for c in signs]
    lines = []
    if spec.special_lagrangian:
        lines.append("special Lagrangian (sum = 0)")
    label = {1: "C>0", 0: "C=0", -1: "C<0"}
    for rep in reports:
        prefix = "" if args.csign is not None else f"{label[rep.c_sign]}: "
        lines.append(prefix + rep.summary())
    print("\n".join(lines))
    if args.json:
        _write_json(Path(args.json), {"schema": REPORT_SCHEMA, "reports": [r.to_dict() for r in reports]})
    return EXIT_OK


# verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    cfg = build_config(args)
    records = []
    if cfg.family == "integer":
        spec = cfg.lambda_spec()
        for t in cfg.t_values:
            slc = IntegerSlice.at_level(spec, t if t != 0 else 1.0) if spec.total == 0 else IntegerSlice.at_time(spec, t)
            checks = verify_integer(slc, cfg.samples, cfg.rng_seed, inject_bug=args.inject_bug)
            records.append((t, checks))
    else:
        rec = cfg.seed_record()
        orbit = find_periodic(rec.params, rec.state, period_hint=rec.period_hint)
        for t in cfg.t_values:
            checks = verify_ode(orbit, t, cfg.samples, cfg.rng_seed, inject_bug=args.inject_bug)
            records.append((t, checks))
    ok = True
    doc = {"schema": REPORT_SCHEMA, "config": cfg.to_dict(), "slices": []}
    for t, checks in records:
        print(f"[{cfg.family} lambdas={list(cfg.lambdas)} t={t!r}]")
        for c in checks:
            print("  " + c.line())
        ok &= all_passed(checks)
        doc["slices"].append({"t": t, "checks": [c.to_dict() for c in checks]})
    doc["passed"] = bool(ok)
    _write_json(_out_path(cfg, args.json, "verify.json"), doc)
    print("ALL PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


# brakke -------------------------------------------------------------------


def _csv_rows(reports) -> str:
    rows = [CSV_HEADER]
    for r in sorted(reports, key=lambda rep: rep.t):
        rows.append(f"{r.t!r},{r.mass!r},{r.variation!r},{r.error_estimate!r}")
    return "\n".join(rows) + "\n"


def _converged(reports, tol: float) -> bool:
    for r in reports:
        scale = max(abs(r.mass), abs(r.variation), 1e-12)
        if not (r.error_estimate <= CONVERGENCE_SHARE * tol * scale):
            return False
    return True


def cmd_brakke(args) -> int:
    cfg = build_config(args)
    make_slice = cfg.slice_factory()
    phi = cfg.test_function()
    grid = cfg.grid
    lines: list[str] = []
    doc: dict = {"schema": REPORT_SCHEMA, "config": cfg.to_dict()}
    centered_value = float(phi.value(np.zeros(cfg.n, dtype=complex)))

    if cfg.n == 2 and centered_value != 0:
        probe = log_divergence_probe(make_slice, phi, cfg.t0, max(cfg.count, 3), grid, estimate_error=True)
        reports = list(probe.reports)
        lines += probe.lines()
        ok = probe.divergent and probe.dphi_h_settles
        status = "PASS" if ok else "FAIL"
        doc["probe"] = {
            "slope": probe.slope,
            "correlation": probe.correlation,
            "fitted_offset": probe.fitted_offset,
            "dphi_h_differences": list(probe.dphi_h_differences),
        }
    else:
        verdict = limit_check(make_slice, phi, cfg.t0, cfg.count, grid, tolerance=cfg.limit_tol)
        reports = [verdict.cone] + [r for side in verdict.sides for r in side.reports]
        lines += verdict.lines()
        status = verdict.status
        flows = []
        if cfg.check_flow:
            for side in verdict.sides:
                for t in side.times:
                    f = smooth_flow_check(make_slice, phi, t, grid)
                    flows.append(f)
                    err = 0.0 if f.variation == 0 and f.mass_rate == 0 else f.relative_error
                    tag = "PASS" if err <= cfg.flow_tol else "FAIL"
                    lines.append(f"{tag} d/dt mass = variation at t={t!r}: relative error {err:.3e}")
                    if tag == "FAIL" and status == "PASS":
                        status = "FAIL"
        doc["limits"] = [
            {"side": s.sign, "limit": s.extrapolation.limit, "order": s.extrapolation.order, "relative_gap": s.relative_gap}
            for s in verdict.sides
        ]
        doc["cone_variation"] = verdict.cone.variation
        doc["flow"] = [{"t": f.t, "mass_rate": f.mass_rate, "variation": f.variation} for f in flows]
    if status == "PASS" and not _converged(reports, cfg.limit_tol):
        status = "INCONCLUSIVE"
        lines.append("quadrature refinement change exceeds the convergence budget")
    lines.append(f"status: {status}")
    print("\n".join(lines))

    csv_text = _csv_rows(reports)
    _out_path(cfg, args.csv, "brakke.csv").write_text(csv_text)
    doc["rows"] = [
        {"t": r.t, "mass": r.mass, "variation": r.variation, "error_estimate": r.error_estimate, "grid": r.grid.as_dict()}
        for r in sorted(reports, key=lambda rep: rep.t)
    ]
    doc["status"] = status
    _write_json(_out_path(cfg, args.json, "brakke.json"), doc)
    return EXIT_OK if status == "PASS" else EXIT_FAIL


# export -------------------------------------------------------------------


def cmd_export(args) -> int:
    cfg = build_config(args)
    make_slice = cfg.slice_factory()
    proj = None
    if args.projection:
        proj = np.asarray(json.loads(Path(args.projection).read_text()), dtype=float)
        if proj.shape != (3, 2 * cfg.n):
            raise UsageError(f"projection must be a 3 x {2 * cfg.n} matrix")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for t in cfg.t_values:
        mesh = export_mesh(make_slice(t), args.grid_r, args.grid_s, args.extent, projection=proj)
        stem = f"{cfg.family}_t{t!r}"
        mesh.write_obj(out / f"{stem}.obj")
        mesh.write_csv(out / f"{stem}.csv")
        print(f"t={t!r}: {len(mesh.vertices)} vertices, {len(mesh.faces)} quads -> {out / stem}.obj")
    return EXIT_OK


# ode-find -----------------------------------------------------------------


def cmd_ode_find(args) -> int:
    cfg = build_config(args)
    rec = cfg.seed_record()
    orbit = find_periodic(rec.params, rec.state, tol=args.tol, period_hint=rec.period_hint)
    lo, hi = orbit.r_bounds
    ok = orbit.closure_residual < 1e-6 and bool(np.all(lo > 0))
    print(f"seed {rec.name}: lambdas={list(rec.params.lambdas)} alpha={rec.params.alpha}")
    print(f"period T = {orbit.period!r}")
    print(f"closure residual = {orbit.closure_residual:.3e}")
    print(f"theta winding over one period = {orbit.winding}")
    print("r_j bounds: " + ", ".join(f"[{a:.6f}, {b:.6f}]" for a, b in zip(lo, hi)))
    doc = {
        "schema": REPORT_SCHEMA,
        "name": rec.name,
        "lambdas": list(rec.params.lambdas),
        "period": orbit.period,
        "closure_residual": orbit.closure_residual,
        "r_min": lo.tolist(),
        "r_max": hi.tolist(),
        "winding": orbit.winding,
    }
    _write_json(_out_path(cfg, args.json, "orbit.json"), doc)
    return EXIT_OK if ok else EXIT_FAIL


# parser -------------------------------------------------------------------


def _add_run_flags(p: argparse.ArgumentParser, families: bool = True) -> None:
    p.add_argument("--config", help="RunConfig JSON file; flags override its values")
    if families:
        p.add_argument("--family", choices=["integer", "ode"])
    p.add_argument("--lambdas", help="comma-separated weights, e.g. 1,1,-1")
    p.add_argument("--t", help="comma-separated times")
    p.add_argument("--alpha", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--rng-seed", type=int, dest="rng_seed")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--seed-file", dest="seed_file")
    p.add_argument("--seed-name", dest="seed_name")
    p.add_argument("--json", help="JSON report path")


def _add_quadrature_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t0", type=float, help="largest |t| of the dyadic sequence")
    p.add_argument("--count", type=int, help="number of dyadic times per side")
    p.add_argument("--center", help="comma-separated complex bump centre, e.g. 0.5+0.1j,0,0")
    p.add_argument("--radius", type=float)
    p.add_argument("--amplitude", type=float)
    p.add_argument("--n-r", type=int, dest="n_r")
    p.add_argument("--n-polar", type=int, dest="n_polar")
    p.add_argument("--n-azimuth", type=int, dest="n_azimuth")
    p.add_argument("--n-s", type=int, dest="n_s")
    p.add_argument("--no-flow", action="store_true", help="skip the d/dt mass checks")
    p.add_argument("--csv", help="CSV table path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lagflow", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="topology of the integer family")
    p.add_argument("--lambdas", required=True)
    p.add_argument("--csign", choices=sorted(_CSIGNS))
    p.add_argument("--json")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="pointwise invariant suite")
    _add_run_flags(p)
    p.add_argument("--inject-bug", action="store_true", help="flip the sign of the closed-form H")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("brakke", help="mass/variation tables and limit verdicts")
    _add_run_flags(p)
    _add_quadrature_flags(p)
    p.set_defaults(func=cmd_brakke)

    p = sub.add_parser("export", help="OBJ mesh and CSV point cloud")
    _add_run_flags(p)
    p.add_argument("--grid-r", type=int, default=64)
    p.add_argument("--grid-s", type=int, default=64)
    p.add_argument("--extent", type=float, default=2.0, help="r range in units of sqrt|C|")
    p.add_argument("--projection", help="JSON 3 x 2n matrix")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("ode-find", help="periodic orbit from a shipped seed")
    _add_run_flags(p, families=False)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_ode_find, family="ode")
    return ap


# list-valued options whose values may start with a minus sign
_LIST_OPTIONS = ("--lambdas", "--t", "--center")


def attach_list_values(argv: list[str]) -> list[str]:
    """Rewrite ``--t -0.5,0.5`` as ``--t=-0.5,0.5`` so argparse keeps the value."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _LIST_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(attach_list_values(argv))
    try:
        return args.func(args)
    except (UsageError, ConfigError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
