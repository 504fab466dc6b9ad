"""Harnack verification on trajectories.

Differential side: the quantity h = lap u + alpha |grad u|^2 + beta e^{2u}
+ phi(t) with u = log f must be nonnegative for t > 0; the grouped terms
P2, P3 must be nonnegative and P4 vanishes on closed manifolds.  Classical
side: the ratio f(x2,t2)/f(x1,t1) must dominate both the stated closed-form
lower bound and the sharper bound obtained by integrating phi exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import ACHarnackError, AdmissibilityError, FloorError
from .grid import ScalarField, geodesic_distance, gradient_sq, laplacian
from .params import (
    DerivedConstants,
    HarnackParams,
    derive_constants,
    phi,
    phi_deriv,
    phi_integral,
    phi_ode_residual,
)
from .solver import EPS_FLOOR, Trajectory

__all__ = [
    "HarnackSnapshot",
    "CheckResult",
    "PairSample",
    "VerificationReport",
    "log_field",
    "harnack_quantity",
    "u_evolution_residual",
    "p_terms",
    "p3_chain_floor",
    "verify_differential",
    "classical_harnack_rhs_paper",
    "classical_harnack_rhs_tight",
    "verify_classical",
]


def log_field(f: ScalarField) -> ScalarField:
    """Pointwise log; requires every value >= EPS_FLOOR."""
    mn = f.min()
    if mn < EPS_FLOOR:
        raise FloorError(f"field minimum {mn} is below the floor {EPS_FLOOR}")
    return ScalarField(f.grid, np.log(f.values))


def harnack_quantity(
    u: ScalarField, p: HarnackParams, dc: DerivedConstants, t: float
) -> ScalarField:
    """h = lap u + alpha |grad u|^2 + beta e^{2u} + phi(t)."""
    vals = (
        laplacian(u).values
        + p.alpha * gradient_sq(u).values
        + p.beta * np.exp(2.0 * u.values)
        + phi(t, dc)
    )
    return ScalarField(u.grid, vals)


def u_evolution_residual(traj: Trajectory, j: int) -> ScalarField:
    """Residual of u_t = lap u + |grad u|^2 + 1 - e^{2u} at snapshot j.

    Central in time across the neighbouring snapshots, so j must be an
    interior index.
    """
    if not 0 < j < len(traj) - 1:
        raise IndexError(f"need an interior snapshot index, got {j} of {len(traj)}")
    um = log_field(traj.fields[j - 1])
    u0 = log_field(traj.fields[j])
    up = log_field(traj.fields[j + 1])
    dudt = (up.values - um.values) / (traj.times[j + 1] - traj.times[j - 1])
    rhs = (
        laplacian(u0).values
        + gradient_sq(u0).values
        + 1.0
        - np.exp(2.0 * u0.values)
    )
    return ScalarField(u0.grid, dudt - rhs)


def p_terms(
    u: ScalarField,
    h: ScalarField,
    p: HarnackParams,
    dc: DerivedConstants,
    t: float,
) -> tuple[ScalarField, ScalarField, ScalarField, ScalarField]:
    """Grouped terms P1..P4 of the evolution inequality for h, with psi = 0.

    P4 is identically zero on closed manifolds (no spatial potential), and
    is returned as the zero field.
    """
    gs = gradient_sq(u).values
    e2u = np.exp(2.0 * u.values)
    c1 = 2.0 * (1.0 - p.alpha) / p.n
    ph = phi(t, dc)
    p1 = c1 * h.values - 2.0 * c1 * (p.alpha * gs + p.beta * e2u + ph) - 2.0 * e2u
    p2 = (
        c1 * p.alpha * p.alpha * gs * gs
        - 2.0 * p.k * (1.0 - p.alpha) * gs
        + 2.0 * c1 * p.alpha * ph * gs
        + gs * e2u * (2.0 * c1 * p.alpha * p.beta - 6.0 * p.beta - 2.0 * p.alpha - 4.0)
    )
    p3 = (
        c1 * p.beta * p.beta * e2u * e2u
        + 2.0 * e2u * ((c1 * p.beta + 1.0) * ph + p.beta)
        + c1 * ph * ph
        + phi_deriv(t, dc)
    )
    g = u.grid
    return (
        ScalarField(g, p1),
        ScalarField(g, p2),
        ScalarField(g, p3),
        ScalarField(g, np.zeros(g.points)),
    )


def p3_chain_floor(dc: DerivedConstants, t: float) -> float:
    """Completing-the-square lower bound for P3: a phi^2 - b phi - c + phi'.

    Equals d * phi(t) identically when dc carries a shift d, and 0 in the
    d -> 0 limit.
    """
    return phi_ode_residual(t, dc, d=0.0)


@dataclass(frozen=True)
class HarnackSnapshot:
    """Per-snapshot record of the Harnack quantity and P-term minima."""

    t: float
    h_field: ScalarField = field(repr=False)
    h_min: float
    argmin: tuple[int, ...]
    p2_min: float
    p3_min: float


@dataclass(frozen=True)
class CheckResult:
    """One verification check: margin >= 0 means pass."""

    name: str
    passed: bool
    margin: float
    t: float = math.nan
    location: tuple[int, ...] = ()


@dataclass(frozen=True)
class PairSample:
    """One classical-Harnack space-time pair and its bound evaluations."""

    t1: float
    x1: tuple[int, ...]
    t2: float
    x2: tuple[int, ...]
    d_geo: float
    lhs: float
    rhs_paper: float
    rhs_tight: float
    skipped: bool = False


@dataclass
class VerificationReport:
    """Pass/fail record with worst-case margins per check."""

    checks: list[CheckResult]
    params: HarnackParams
    constants: DerivedConstants | None
    tolerances: dict[str, float]
    snapshots: list[HarnackSnapshot] = field(default_factory=list)
    pairs: list[PairSample] = field(default_factory=list)
    error_message: str = ""

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)


def _argmin_index(values: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.unravel_index(int(values.argmin()), values.shape))


def verify_differential(
    traj: Trajectory,
    p: HarnackParams,
    t_min: float = 0.05,
    tol: float = 1e-2,
) -> VerificationReport:
    """Check h >= -tol, P2 >= -tol, P3 >= -tol, P4 == 0 on every snapshot.

    Nonnegativity minima are recorded for every t > 0 snapshot; the
    asserted margins only consider snapshots with t >= t_min, where the
    discrete time resolution is trustworthy.  Failures become report
    entries, never exceptions.
    """
    tolerances = {"tol": tol, "t_min": t_min}
    try:
        dc = derive_constants(p)
    except AdmissibilityError as exc:
        check = CheckResult("configuration", False, -math.inf)
        return VerificationReport([check], p, None, tolerances, error_message=str(exc))

    snaps: list[HarnackSnapshot] = []
    worst = {
        "h_nonneg": (math.inf, math.nan, ()),
        "p2_nonneg": (math.inf, math.nan, ()),
        "p3_nonneg": (math.inf, math.nan, ()),
        "p4_zero": (0.0, math.nan, ()),
    }
    for t, fld in zip(traj.times, traj.fields):
        if t <= 0.0:
            continue
        u = log_field(fld)
        h = harnack_quantity(u, p, dc, t)
        _, p2, p3, p4 = p_terms(u, h, p, dc, t)
        h_min = h.min()
        snaps.append(
            HarnackSnapshot(
                t=t,
                h_field=h,
                h_min=h_min,
                argmin=_argmin_index(h.values),
                p2_min=p2.min(),
                p3_min=p3.min(),
            )
        )
        if t >= t_min:
            for name, fld_min, fobj in (
                ("h_nonneg", h_min, h),
                ("p2_nonneg", p2.min(), p2),
                ("p3_nonneg", p3.min(), p3),
            ):
                if fld_min < worst[name][0]:
                    worst[name] = (fld_min, t, _argmin_index(fobj.values))
            p4_max = float(np.abs(p4.values).max())
            if p4_max > worst["p4_zero"][0]:
                worst["p4_zero"] = (p4_max, t, ())

    checks = []
    for name in ("h_nonneg", "p2_nonneg", "p3_nonneg"):
        val, t_at, loc = worst[name]
        margin = val + tol
        checks.append(CheckResult(name, margin >= 0.0, margin, t_at, loc))
    p4_max, t_at, loc = worst["p4_zero"]
    checks.append(CheckResult("p4_zero", p4_max == 0.0, -p4_max, t_at, loc))
    return VerificationReport(checks, p, dc, tolerances, snapshots=snaps)


def classical_harnack_rhs_paper(
    p: HarnackParams, dc: DerivedConstants, d_geo: float, t1: float, t2: float
) -> float:
    """Stated closed-form lower bound for f(x2,t2)/f(x1,t1).

    exp(-d^2/(4(1-alpha)(t2-t1)))
      * ((e^{-2q t2}-1)/(e^{-2q t1}-1))^{-1/a}
      * exp(-(4q+b)/(2a) (t2-t1)).
    """
    if not 0.0 < t1 < t2:
        raise ValueError(f"need 0 < t1 < t2, got t1={t1}, t2={t2}")
    if d_geo < 0.0:
        raise ValueError(f"distance must be >= 0, got {d_geo}")
    dt = t2 - t1
    b_eff = dc.b + dc.d
    gauss = math.exp(-d_geo * d_geo / (4.0 * (1.0 - p.alpha) * dt))
    ratio = math.expm1(-2.0 * dc.q * t2) / math.expm1(-2.0 * dc.q * t1)
    return gauss * ratio ** (-1.0 / dc.a) * math.exp(-(4.0 * dc.q + b_eff) / (2.0 * dc.a) * dt)


def classical_harnack_rhs_tight(
    p: HarnackParams,
    dc: DerivedConstants,
    d_geo: float,
    t1: float,
    t2: float,
    check_quadrature: bool = True,
) -> float:
    """Sharper bound exp(-d^2/(4(1-alpha)(t2-t1)) - int_{t1}^{t2} phi).

    The integral is evaluated in closed form and, unless disabled,
    cross-checked against adaptive quadrature at 1e-10 relative.
    """
    if not 0.0 < t1 < t2:
        raise ValueError(f"need 0 < t1 < t2, got t1={t1}, t2={t2}")
    if d_geo < 0.0:
        raise ValueError(f"distance must be >= 0, got {d_geo}")
    integral = phi_integral(t1, t2, dc)
    if check_quadrature:
        num, _ = quad(lambda s: phi(s, dc), t1, t2, epsabs=0.0, epsrel=1e-12, limit=200)
        if abs(num - integral) > 1e-10 * abs(integral):
            raise ACHarnackError(
                f"phi integral mismatch: closed form {integral!r} vs quadrature {num!r}"
            )
    dt = t2 - t1
    return math.exp(-d_geo * d_geo / (4.0 * (1.0 - p.alpha) * dt) - integral)


def verify_classical(
    traj: Trajectory,
    p: HarnackParams,
    pairs: int,
    seed: int,
    t_min: float = 0.05,
    tol: float = 0.0,
) -> VerificationReport:
    """Sample space-time pairs and check the ratio against both bounds.

    For each pair with t2 > t1 >= t_min (equal sampled times are skipped
    and recorded): f(x2,t2)/f(x1,t1) >= rhs - tol for both bounds, and
    rhs_tight >= rhs_paper.  Times come from the trajectory's snapshots
    only; there is no temporal interpolation.
    """
    tolerances = {"tol": tol, "t_min": t_min}
    try:
        dc = derive_constants(p)
    except AdmissibilityError as exc:
        check = CheckResult("configuration", False, -math.inf)
        return VerificationReport([check], p, None, tolerances, error_message=str(exc))

    g = traj.grid
    eligible = [j for j, t in enumerate(traj.times) if t >= t_min]
    if len(eligible) < 2:
        raise ValueError(f"need at least two snapshots with t >= {t_min}")
    rng = np.random.default_rng(seed)
    samples: list[PairSample] = []
    worst_paper = (math.inf, math.nan, ())
    worst_tight = (math.inf, math.nan, ())
    worst_order = math.inf
    for _ in range(pairs):
        j1, j2 = (int(j) for j in rng.choice(len(eligible), size=2))
        j1, j2 = eligible[j1], eligible[j2]
        x1 = tuple(int(rng.integers(0, N)) for N in g.points)
        x2 = tuple(int(rng.integers(0, N)) for N in g.points)
        if j1 == j2:
            samples.append(
                PairSample(traj.times[j1], x1, traj.times[j2], x2,
                           math.nan, math.nan, math.nan, math.nan, skipped=True)
            )
            continue
        if traj.times[j1] > traj.times[j2]:
            j1, j2 = j2, j1
            x1, x2 = x2, x1
        t1, t2 = traj.times[j1], traj.times[j2]
        d_geo = geodesic_distance(g, x1, x2)
        lhs = float(traj.fields[j2].values[x2] / traj.fields[j1].values[x1])
        rp = classical_harnack_rhs_paper(p, dc, d_geo, t1, t2)
        rt = classical_harnack_rhs_tight(p, dc, d_geo, t1, t2)
        samples.append(PairSample(t1, x1, t2, x2, d_geo, lhs, rp, rt))
        if lhs - rp < worst_paper[0]:
            worst_paper = (lhs - rp, t2, x2)
        if lhs - rt < worst_tight[0]:
            worst_tight = (lhs - rt, t2, x2)
        worst_order = min(worst_order, rt - rp)

    live = [s for s in samples if not s.skipped]
    checks = []
    if live:
        checks.append(
            CheckResult("ratio_vs_paper", worst_paper[0] + tol >= 0.0,
                        worst_paper[0] + tol, worst_paper[1], worst_paper[2])
        )
        checks.append(
            CheckResult("ratio_vs_tight", worst_tight[0] + tol >= 0.0,
                        worst_tight[0] + tol, worst_tight[1], worst_tight[2])
        )
        checks.append(CheckResult("tight_ge_paper", worst_order >= 0.0, worst_order))
    else:
        checks.append(CheckResult("no_live_pairs", False, -math.inf))
    return VerificationReport(checks, p, dc, tolerances, pairs=samples)
