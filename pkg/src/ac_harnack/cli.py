"""Batch front-end.

Subcommands: params, simulate, verify-differential, verify-classical,
waves.  Exit codes: 0 all checks pass, 1 verification failure, 2
configuration error, 3 runtime guard (confinement/floor breach), 4 I/O
failure.  All emitted reports are deterministic functions of the config
and seed; no timestamps are written.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .config import RunConfig, parse_config
from .errors import (
    ACHarnackError,
    AdmissibilityError,
    CFLViolationError,
    ConfigError,
    ConfinementError,
    FloorError,
)
from .params import derive_constants, phi, phi_floor_check
from .solver import Trajectory, evolve, generate_ic, read_trajectory, write_trajectory
from .grid import ScalarField
from .verify import (
    VerificationReport,
    verify_classical,
    verify_differential,
)
from .waves import (
    corollary_bound_gap,
    modica_bound_gap,
    polynomial_comparison,
    shoot_standing_wave,
    tanh_derivative,
    tanh_profile,
)

G17 = "%.17g"


def _fmt(x: float) -> str:
    return G17 % x


def _say(quiet: bool, msg: str) -> None:
    if not quiet:
        print(msg)


# --- report writers ---------------------------------------------------------


def _write_report_text(path: str, report: VerificationReport) -> None:
    with open(path, "w") as fh:
        p = report.params
        fh.write(
            f"params alpha={_fmt(p.alpha)} beta={_fmt(p.beta)} n={p.n} "
            f"k={_fmt(p.k)} d={_fmt(p.d)}\n"
        )
        if report.constants is not None:
            dc = report.constants
            fh.write(
                f"constants a={_fmt(dc.a)} b={_fmt(dc.b)} c={_fmt(dc.c)} "
                f"q={_fmt(dc.q)}\n"
            )
        for key, val in sorted(report.tolerances.items()):
            fh.write(f"tolerance {key}={_fmt(val)}\n")
        if report.error_message:
            fh.write(f"error {report.error_message}\n")
        for chk in report.checks:
            loc = ",".join(str(i) for i in chk.location)
            fh.write(
                f"check={chk.name} status={'PASS' if chk.passed else 'FAIL'} "
                f"margin={_fmt(chk.margin)} t={_fmt(chk.t)} x={loc}\n"
            )
        fh.write(f"overall {'PASS' if report.overall else 'FAIL'}\n")


def _write_summary_json(path: str, report: VerificationReport) -> None:
    p = report.params
    doc = {
        "overall": report.overall,
        "params": {"alpha": p.alpha, "beta": p.beta, "n": p.n, "k": p.k, "d": p.d},
        "constants": None,
        "tolerances": report.tolerances,
        "checks": [
            {
                "name": c.name,
                "passed": c.passed,
                "margin": c.margin,
                "t": c.t,
                "location": list(c.location),
            }
            for c in report.checks
        ],
    }
    if report.constants is not None:
        dc = report.constants
        doc["constants"] = {"a": dc.a, "b": dc.b, "c": dc.c, "q": dc.q, "d": dc.d}
    if report.error_message:
        doc["error"] = report.error_message
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def _write_hmin_csv(path: str, report: VerificationReport, dim: int) -> None:
    cols = ["t", "h_min"] + [f"x{i}" for i in range(dim)] + ["p2_min", "p3_min"]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for s in report.snapshots:
            row = [_fmt(s.t), _fmt(s.h_min)]
            row += [str(i) for i in s.argmin]
            row += [_fmt(s.p2_min), _fmt(s.p3_min)]
            fh.write(",".join(row) + "\n")


def _write_pairs_csv(path: str, report: VerificationReport, dim: int) -> None:
    cols = (
        ["t1"] + [f"x1_{i}" for i in range(dim)]
        + ["t2"] + [f"x2_{i}" for i in range(dim)]
        + ["d_geo", "lhs", "rhs_paper", "rhs_tight", "skipped"]
    )
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for s in report.pairs:
            row = [_fmt(s.t1)] + [str(i) for i in s.x1]
            row += [_fmt(s.t2)] + [str(i) for i in s.x2]
            row += [_fmt(s.d_geo), _fmt(s.lhs), _fmt(s.rhs_paper), _fmt(s.rhs_tight)]
            row += ["1" if s.skipped else "0"]
            fh.write(",".join(row) + "\n")


# --- trajectory acquisition --------------------------------------------------


def _make_ic(cfg: RunConfig, grid, seed_override):
    spec = cfg.ic_spec(seed_override)
    if spec["type"] == "constant":
        return ScalarField(grid, np.full(grid.points, spec["value"]))
    return generate_ic(grid, spec["seed"], spec["fmin"], spec["fmax"], spec["modes"])


def _obtain_trajectory(cfg: RunConfig, out: str, seed_override, quiet: bool) -> Trajectory:
    manifest = os.path.join(out, "manifest.txt")
    if os.path.exists(manifest):
        _say(quiet, f"loading trajectory from {out}")
        return read_trajectory(out)
    grid = cfg.build_grid()
    scheme = cfg.build_scheme()
    f0 = _make_ic(cfg, grid, seed_override)
    t_end = cfg.get("time", "t_end")
    snap = cfg.get("time", "snapshot_every")
    _say(quiet, f"simulating inline: dim={grid.dim} N={grid.points} t_end={t_end}")
    traj = evolve(f0, t_end, scheme, snap)
    write_trajectory(out, traj)
    return traj


def _resolve_out(cfg: RunConfig, args) -> str:
    if args.out is not None:
        return args.out
    if cfg.has("output") and "directory" in cfg.sections["output"]:
        return cfg.sections["output"]["directory"]
    raise ConfigError("no output directory: pass --out or set [output] directory")


# --- subcommands -------------------------------------------------------------


def cmd_params(cfg: RunConfig, args) -> int:
    dim = cfg.build_grid().dim if cfg.has("grid") else None
    p = cfg.build_params(dim)
    dc = derive_constants(p)
    cap_line = f"beta={_fmt(p.beta)} admissible for alpha={_fmt(p.alpha)}, n={p.n}, k={_fmt(p.k)}"
    print(cap_line)
    print(f"a = {_fmt(dc.a)}")
    print(f"b = {_fmt(dc.b)}")
    print(f"c = {_fmt(dc.c)}")
    print(f"q = {_fmt(dc.q)}")
    id1 = 2.0 + dc.c / (2.0 * p.beta) - dc.b
    id2 = 2.0 + dc.c / (4.0 * p.beta) + dc.a * p.beta
    print(f"identity 2+c/(2beta)-b   = {_fmt(id1)}")
    print(f"identity 2+c/(4beta)+a*beta = {_fmt(id2)}")
    print(f"phi floor ok: {phi_floor_check(dc, p)}")
    for t in (0.01, 0.1, 1.0, 10.0):
        print(f"phi({t}) = {_fmt(phi(t, dc))}")
    return 0


def cmd_simulate(cfg: RunConfig, args) -> int:
    out = _resolve_out(cfg, args)
    grid = cfg.build_grid()
    scheme = cfg.build_scheme()
    f0 = _make_ic(cfg, grid, args.seed)
    t_end = cfg.get("time", "t_end")
    snap = cfg.get("time", "snapshot_every")
    traj = evolve(f0, t_end, scheme, snap)
    names = write_trajectory(out, traj)
    _say(args.quiet, f"wrote {len(names)} snapshots to {out}")
    print(
        f"confinement: min={_fmt(traj.min_seen)} max={_fmt(traj.max_seen)} "
        f"band=({_fmt(1e-12)}, {_fmt(1 - 1e-12)}) ok"
    )
    return 0


def cmd_verify_differential(cfg: RunConfig, args) -> int:
    out = _resolve_out(cfg, args)
    grid = cfg.build_grid()
    p = cfg.build_params(grid.dim)
    if p.k != 0.0:
        raise ConfigError("[harnack] simulations require k = 0 (flat torus)")
    derive_constants(p)  # fail fast -> exit 2 on inadmissible parameters
    traj = _obtain_trajectory(cfg, out, args.seed, args.quiet)
    t_min = cfg.get("harnack", "t_min", default=0.05)
    tol = cfg.get("harnack", "tol", default=1e-2)
    report = verify_differential(traj, p, t_min=t_min, tol=tol)
    fmts = cfg.formats()
    if "text" in fmts:
        _write_report_text(os.path.join(out, "report.txt"), report)
    if "json" in fmts:
        _write_summary_json(os.path.join(out, "summary.json"), report)
    if "csv" in fmts:
        _write_hmin_csv(os.path.join(out, "hmin_series.csv"), report, grid.dim)
    for chk in report.checks:
        print(
            f"{chk.name}: {'PASS' if chk.passed else 'FAIL'} margin={_fmt(chk.margin)}"
        )
    return 0 if report.overall else 1


def cmd_verify_classical(cfg: RunConfig, args) -> int:
    out = _resolve_out(cfg, args)
    grid = cfg.build_grid()
    p = cfg.build_params(grid.dim)
    if p.k != 0.0:
        raise ConfigError("[harnack] simulations require k = 0 (flat torus)")
    derive_constants(p)
    traj = _obtain_trajectory(cfg, out, args.seed, args.quiet)
    pairs = cfg.get("classical", "pairs")
    seed = args.seed if args.seed is not None else cfg.get("classical", "seed")
    t_min = cfg.get("harnack", "t_min", default=0.05)
    report = verify_classical(traj, p, pairs=pairs, seed=seed, t_min=t_min)
    fmts = cfg.formats()
    if "text" in fmts:
        _write_report_text(os.path.join(out, "report.txt"), report)
    if "json" in fmts:
        _write_summary_json(os.path.join(out, "summary.json"), report)
    if "csv" in fmts:
        _write_pairs_csv(os.path.join(out, "pairs.csv"), report, grid.dim)
    skipped = sum(1 for s in report.pairs if s.skipped)
    _say(args.quiet, f"pairs sampled={len(report.pairs)} skipped={skipped}")
    for chk in report.checks:
        print(
            f"{chk.name}: {'PASS' if chk.passed else 'FAIL'} margin={_fmt(chk.margin)}"
        )
    return 0 if report.overall else 1


def cmd_waves(cfg: RunConfig, args) -> int:
    out = _resolve_out(cfg, args)
    n = cfg.get("waves", "n")
    samples = cfg.get("waves", "samples", default=401)
    halfwidth = cfg.get("waves", "halfwidth", default=8.0)
    step = cfg.get("waves", "step", default=0.01)
    shoot_halfwidth = cfg.get("waves", "shoot_halfwidth", default=8.0)
    shoot_step = cfg.get("waves", "shoot_step", default=0.005)
    try:
        comp = polynomial_comparison(n, samples)
    except ValueError as exc:
        raise ConfigError(f"[waves] {exc}") from None

    os.makedirs(out, exist_ok=True)
    fmts = cfg.formats()
    if "csv" in fmts:
        with open(os.path.join(out, "comparison.csv"), "w") as fh:
            fh.write("x,g1,g2\n")
            for x, a, b in zip(comp.xs, comp.g1, comp.g2):
                fh.write(f"{_fmt(x)},{_fmt(a)},{_fmt(b)}\n")
        with open(os.path.join(out, "crossings.csv"), "w") as fh:
            fh.write("x\n")
            for x in comp.crossings:
                fh.write(_fmt(x) + "\n")

    xs = np.arange(-round(halfwidth / step), round(halfwidth / step) + 1) * step
    tanh_w = tanh_profile(xs)
    modica_margin = float(np.abs(modica_bound_gap(tanh_w, dps=tanh_derivative(xs))).max())
    gap = corollary_bound_gap(tanh_w, n, dps=tanh_derivative(xs))
    pos = xs > 0.0
    sign_change_at = None
    gx, gg = xs[pos], gap[pos]
    for i in range(gg.size - 1):
        if gg[i] < 0.0 <= gg[i + 1]:
            sign_change_at = 0.5 * (gx[i] + gx[i + 1])
            break
    wave = shoot_standing_wave(shoot_halfwidth, shoot_step)
    slope = float((wave.ps[wave.xs.size // 2 + 1] - wave.ps[wave.xs.size // 2 - 1])
                  / (2.0 * wave.h))
    inner = np.abs(wave.xs) <= shoot_halfwidth / 2.0
    tanh_dist = float(
        np.abs(wave.ps[inner] - np.tanh(wave.xs[inner] / np.sqrt(2.0))).max()
    )

    lines = [
        f"polynomials n={n} samples={samples}",
        "crossings " + " ".join(_fmt(x) for x in comp.crossings),
        f"modica_margin_analytic_tanh {_fmt(modica_margin)}",
        f"corollary_gap_sign_change_x "
        + (_fmt(sign_change_at) if sign_change_at is not None else "none"),
        f"shooting_slope {_fmt(slope)}",
        f"shooting_tanh_distance {_fmt(tanh_dist)}",
    ]
    if "text" in fmts:
        with open(os.path.join(out, "waves_report.txt"), "w") as fh:
            fh.write("\n".join(lines) + "\n")
    if "json" in fmts:
        doc = {
            "n": n,
            "samples": samples,
            "crossings": list(comp.crossings),
            "modica_margin_analytic_tanh": modica_margin,
            "corollary_gap_sign_change_x": sign_change_at,
            "shooting_slope": slope,
            "shooting_tanh_distance": tanh_dist,
        }
        with open(os.path.join(out, "summary.json"), "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    for ln in lines:
        _say(args.quiet, ln)
    return 0


_COMMANDS = {
    "params": cmd_params,
    "simulate": cmd_simulate,
    "verify-differential": cmd_verify_differential,
    "verify-classical": cmd_verify_classical,
    "waves": cmd_waves,
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ac-harnack", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="run configuration file")
        sp.add_argument("--out", default=None, help="output directory override")
        sp.add_argument("--seed", type=int, default=None, help="seed override")
        sp.add_argument("--quiet", action="store_true")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        return _COMMANDS[args.command](cfg, args)
    except (ConfigError, AdmissibilityError, CFLViolationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ConfinementError, FloorError) as exc:
        print(f"runtime guard: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    except ACHarnackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
