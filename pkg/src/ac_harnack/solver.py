"""Time integration of the parabolic Allen-Cahn equation f_t = lap f + f - f^3.

Two schemes: explicit Euler under a CFL-limited automatic step, and an
IMEX step with the diffusion solved exactly in the discrete Fourier basis
of the stencil.  Solutions starting inside (0,1) must stay there
(maximum principle); every run is monitored and a breach aborts it, since
clamping would silently invalidate the Harnack verification downstream.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import CFLViolationError, ConfinementError
from .grid import ScalarField, TorusGrid, gradient_sq, read_field, write_field

__all__ = [
    "EPS_FLOOR",
    "SchemeConfig",
    "Trajectory",
    "auto_dt",
    "cfl_limit",
    "step_explicit",
    "step_imex",
    "evolve",
    "generate_ic",
    "discrete_energy",
    "write_trajectory",
    "read_trajectory",
]

EPS_FLOOR = 1e-12
# The reaction term f - f^3 has Lipschitz constant max|1-3f^2| = 2 on [0,1];
# keeping dt*2 <= 0.1 preserves the discrete maximum principle comfortably.
REACTION_DT_CAP = 0.05


@dataclass(frozen=True)
class SchemeConfig:
    """Time-stepping choice: kind in {"explicit_euler", "imex"}, dt=None for auto."""

    kind: str = "explicit_euler"
    dt: float | None = None
    sigma: float = 0.8

    def __post_init__(self) -> None:
        if self.kind not in ("explicit_euler", "imex"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.dt is not None and not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not 0.0 < self.sigma <= 1.0:
            raise ValueError(f"sigma must lie in (0,1], got {self.sigma}")


@dataclass
class Trajectory:
    """Time-ordered snapshots (t_j, field_j) of one run, t_0 = 0."""

    times: list[float]
    fields: list[ScalarField]
    scheme: SchemeConfig
    dt: float
    min_seen: float = field(default=math.nan)
    max_seen: float = field(default=math.nan)

    @property
    def grid(self) -> TorusGrid:
        return self.fields[0].grid

    def __len__(self) -> int:
        return len(self.times)


def _inv_h2(grid: TorusGrid) -> tuple[float, ...]:
    return tuple(1.0 / (h * h) for h in grid.spacing)


def _diffusion_rate(grid: TorusGrid) -> float:
    return sum(2.0 / (h * h) for h in grid.spacing)


def auto_dt(grid: TorusGrid, sigma: float = 0.8) -> float:
    """Automatic explicit step: sigma / sum_i(2/h_i^2), capped by the reaction limit."""
    return min(sigma / _diffusion_rate(grid), REACTION_DT_CAP)


def cfl_limit(grid: TorusGrid) -> float:
    """Hard stability bound (sigma = 1) for the explicit scheme."""
    return auto_dt(grid, sigma=1.0)


def step_explicit(f: ScalarField, dt: float) -> ScalarField:
    """One explicit Euler step f + dt*(lap f + f - f^3)."""
    if dt > 1.01 * cfl_limit(f.grid):
        raise CFLViolationError(
            f"dt={dt} exceeds the CFL bound {cfl_limit(f.grid)} by more than 1%"
        )
    out, _, _, _ = kernels.explicit_run(
        f.values, _inv_h2(f.grid), dt, 1, -np.inf, np.inf
    )
    return ScalarField(f.grid, out)


@lru_cache(maxsize=32)
def _imex_denominator(points: tuple[int, ...], lengths: tuple[float, ...], dt: float):
    # eigenvalues of the periodic stencil: per axis (2/h^2)(cos(2 pi k/N) - 1)
    dim = len(points)
    lam = np.zeros([N if ax < dim - 1 else N // 2 + 1 for ax, N in enumerate(points)])
    for ax, (N, L) in enumerate(zip(points, lengths)):
        h = L / N
        ks = np.arange(N if ax < dim - 1 else N // 2 + 1)
        lam_ax = (2.0 / (h * h)) * (np.cos(2.0 * np.pi * ks / N) - 1.0)
        shape = [1] * dim
        shape[ax] = lam_ax.size
        lam = lam + lam_ax.reshape(shape)
    return 1.0 - dt * lam


def step_imex(f: ScalarField, dt: float) -> ScalarField:
    """IMEX step: solve (I - dt*lap_h) f_new = f + dt*(f - f^3) spectrally."""
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    g = f.grid
    v = f.values
    rhs = v + dt * (v - v * v * v)
    denom = _imex_denominator(g.points, g.lengths, dt)
    out = np.fft.irfftn(np.fft.rfftn(rhs) / denom, s=g.points)
    return ScalarField(g, out)


def _snapshot_steps(t_end: float, dt: float, snapshot_every: float) -> tuple[int, list[int]]:
    n_total = max(1, math.ceil(t_end / dt - 1e-9))
    steps = {0, n_total}
    m = 1
    while m * snapshot_every < t_end - 1e-9 * t_end:
        steps.add(min(n_total, round(m * snapshot_every / dt)))
        m += 1
    return n_total, sorted(steps)


def evolve(
    f0: ScalarField,
    t_end: float,
    scheme: SchemeConfig,
    snapshot_every: float,
) -> Trajectory:
    """Integrate to t_end, snapshotting every ~snapshot_every time units.

    Snapshots are taken at the nearest step and recorded with the exact
    step time; t=0 and the final step are always included.  Raises
    ConfinementError if any intermediate field leaves
    [EPS_FLOOR, 1 - EPS_FLOOR].
    """
    if not t_end > 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if not snapshot_every > 0.0:
        raise ValueError(f"snapshot_every must be positive, got {snapshot_every}")
    g = f0.grid
    mn0, mx0 = f0.min(), f0.max()
    if not (0.0 < mn0 and mx0 < 1.0):
        raise ValueError(f"initial values must lie in (0,1), got [{mn0}, {mx0}]")
    lo, hi = EPS_FLOOR, 1.0 - EPS_FLOOR
    if mn0 < lo or mx0 > hi:
        raise ConfinementError(
            f"initial field already outside [{lo}, {1.0 - EPS_FLOOR}] at t=0"
        )

    if scheme.kind == "explicit_euler":
        dt = scheme.dt if scheme.dt is not None else auto_dt(g, scheme.sigma)
        if dt > 1.01 * cfl_limit(g):
            raise CFLViolationError(
                f"dt={dt} exceeds the CFL bound {cfl_limit(g)} by more than 1%"
            )
    else:
        dt = scheme.dt if scheme.dt is not None else auto_dt(g, scheme.sigma)

    _, snap_steps = _snapshot_steps(t_end, dt, snapshot_every)
    times = [0.0]
    fields = [f0]
    vmin, vmax = mn0, mx0
    inv_h2 = _inv_h2(g)

    cur = f0.values
    for s_prev, s_next in itertools.pairwise(snap_steps):
        n_seg = s_next - s_prev
        if scheme.kind == "explicit_euler":
            cur, seg_min, seg_max, breach = kernels.explicit_run(
                cur, inv_h2, dt, n_seg, lo, hi
            )
            vmin = min(vmin, seg_min)
            vmax = max(vmax, seg_max)
            if breach >= 0:
                t_bad = (s_prev + breach) * dt
                raise ConfinementError(
                    f"confinement breach at t={t_bad:.9g} (step {s_prev + breach}): "
                    f"range [{seg_min:.9g}, {seg_max:.9g}]"
                )
        else:
            for s in range(s_prev, s_next):
                nxt = step_imex(ScalarField(g, cur), dt)
                cur = nxt.values
                mn, mx = cur.min(), cur.max()
                vmin = min(vmin, mn)
                vmax = max(vmax, mx)
                if mn < lo or mx > hi:
                    raise ConfinementError(
                        f"confinement breach at t={(s + 1) * dt:.9g} (step {s + 1}): "
                        f"range [{mn:.9g}, {mx:.9g}]"
                    )
        times.append(s_next * dt)
        fields.append(ScalarField(g, cur))

    return Trajectory(times, fields, scheme, dt, min_seen=vmin, max_seen=vmax)


def generate_ic(
    g: TorusGrid, seed: int, fmin: float, fmax: float, modes: int
) -> ScalarField:
    """Seeded band-limited random field, affinely rescaled to [fmin, fmax].

    A real cosine series over all per-axis integer wavenumbers with
    |k_i| <= modes: deterministic in the seed and C-infinity smooth, so the
    gradient obeys a Bernstein-type bound set by `modes`.
    """
    if not (0.0 < fmin < fmax < 1.0):
        raise ValueError(f"need 0 < fmin < fmax < 1, got [{fmin}, {fmax}]")
    if modes < 1:
        raise ValueError(f"modes must be >= 1, got {modes}")
    rng = np.random.default_rng(seed)
    thetas = [2.0 * np.pi * np.arange(N) / N for N in g.points]
    raw = np.zeros(g.points)
    for kvec in itertools.product(range(-modes, modes + 1), repeat=g.dim):
        if all(kj == 0 for kj in kvec):
            continue
        amp = rng.standard_normal()
        phase = rng.uniform(0.0, 2.0 * np.pi)
        arg = np.zeros(g.points)
        for ax, kj in enumerate(kvec):
            shape = [1] * g.dim
            shape[ax] = g.points[ax]
            arg = arg + kj * thetas[ax].reshape(shape)
        raw += amp * np.cos(arg + phase)
    lo, hi = raw.min(), raw.max()
    if hi - lo < 1e-300:
        raise RuntimeError(f"degenerate random field for seed {seed}")
    s = (raw - lo) / (hi - lo)
    return ScalarField(g, fmin * (1.0 - s) + fmax * s)


def discrete_energy(f: ScalarField) -> float:
    """Allen-Cahn energy sum_x [ |grad f|^2/2 + (f^2-1)^2/4 ] * prod(h_i)."""
    v = f.values
    well = 0.25 * (v * v - 1.0) ** 2
    return float((0.5 * gradient_sq(f).values + well).sum() * f.grid.cell_volume)


# --- trajectory persistence --------------------------------------------------


def write_trajectory(directory, traj: Trajectory) -> list[str]:
    """Write snapshots as AC-FIELD v1 files plus a manifest; returns file names."""
    import os

    os.makedirs(directory, exist_ok=True)
    names = []
    for idx, (t, fld) in enumerate(zip(traj.times, traj.fields)):
        name = f"snap_{idx:06d}.field"
        write_field(os.path.join(directory, name), fld, t)
        names.append(name)
    with open(os.path.join(directory, "manifest.txt"), "w") as fh:
        fh.write("AC-TRAJECTORY v1\n")
        fh.write(f"snapshots={len(names)}\n")
        fh.write(f"scheme={traj.scheme.kind}\n")
        fh.write("dt=%.17g\n" % traj.dt)
        fh.write("min_seen=%.17g\n" % traj.min_seen)
        fh.write("max_seen=%.17g\n" % traj.max_seen)
        for t, name in zip(traj.times, names):
            fh.write("t=%.17g file=%s\n" % (t, name))
    return names


def read_trajectory(directory) -> Trajectory:
    """Load a trajectory written by write_trajectory."""
    import os

    manifest = os.path.join(directory, "manifest.txt")
    with open(manifest) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != "AC-TRAJECTORY v1":
        raise ValueError(f"{manifest}: not an AC-TRAJECTORY v1 manifest")
    meta = {}
    entries = []
    for ln in lines[1:]:
        if ln.startswith("t=") and " file=" in ln:
            t_part, f_part = ln.split(" file=", 1)
            entries.append((float(t_part[2:]), f_part))
        else:
            key, val = ln.split("=", 1)
            meta[key] = val
    times = []
    fields = []
    for t_manifest, name in entries:
        fld, t_file = read_field(os.path.join(directory, name))
        times.append(t_file)
        fields.append(fld)
    scheme = SchemeConfig(kind=meta.get("scheme", "explicit_euler"), dt=None)
    return Trajectory(
        times,
        fields,
        scheme,
        dt=float(meta.get("dt", "nan")),
        min_seen=float(meta.get("min_seen", "nan")),
        max_seen=float(meta.get("max_seen", "nan")),
    )
