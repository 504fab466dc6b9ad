"""One-dimensional standing/traveling wave analysis.

Covers the residual of c p' + p'' = p^3 - p, a shooting solver for the
heteroclinic standing wave p(0)=0, p(x)->1, and the two degree-4 gradient
bounds compared in the closing discussion: the dimension-dependent
polynomial p^2[(2n-1)-(n-1)p^2] and the tight bound (p^2-1)^2/2 with
equality for the tanh profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "WaveProfile",
    "tanh_profile",
    "tanh_derivative",
    "traveling_wave_residual",
    "shoot_standing_wave",
    "corollary_bound_gap",
    "modica_bound_gap",
    "PolynomialComparison",
    "polynomial_comparison",
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class WaveProfile:
    """Uniformly sampled 1-D profile p(x) with wave speed c >= 0."""

    xs: np.ndarray = field(repr=False)
    ps: np.ndarray = field(repr=False)
    c: float = 0.0

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=np.float64)
        ps = np.asarray(self.ps, dtype=np.float64)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ps", ps)
        if xs.ndim != 1 or xs.size < 2 or xs.shape != ps.shape:
            raise ValueError("xs and ps must be 1-D arrays of equal length >= 2")
        steps = np.diff(xs)
        if not np.all(steps > 0):
            raise ValueError("xs must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-12, atol=1e-12 * abs(steps[0])):
            raise ValueError("xs must be uniformly spaced")
        if not np.all(np.isfinite(ps)):
            raise ValueError("profile values must be finite")
        if self.c < 0.0:
            raise ValueError(f"wave speed must be >= 0, got {self.c}")

    @property
    def h(self) -> float:
        return float(self.xs[1] - self.xs[0])


def tanh_profile(xs) -> WaveProfile:
    """The classical heteroclinic p(x) = tanh(x / sqrt(2)), speed 0."""
    xs = np.asarray(xs, dtype=np.float64)
    return WaveProfile(xs, np.tanh(xs / SQRT2), c=0.0)


def tanh_derivative(xs) -> np.ndarray:
    """Analytic derivative of tanh(x/sqrt2): (1 - p^2)/sqrt(2)."""
    p = np.tanh(np.asarray(xs, dtype=np.float64) / SQRT2)
    return (1.0 - p * p) / SQRT2


def traveling_wave_residual(w: WaveProfile) -> float:
    """Max-norm of c p' + p'' - p^3 + p over interior samples (central diffs)."""
    if w.xs.size < 5:
        raise ValueError(f"need at least 5 samples, got {w.xs.size}")
    h = w.h
    p = w.ps
    pp = (p[2:] - p[:-2]) / (2.0 * h)
    ppp = (p[2:] - 2.0 * p[1:-1] + p[:-2]) / (h * h)
    mid = p[1:-1]
    res = w.c * pp + ppp - mid**3 + mid
    return float(np.abs(res).max())


def _rk4_shoot(slope: float, X: float, h: float):
    """Integrate p'' = p^3 - p from (0, slope); stop on overshoot/turnback.

    Returns (ps, verdict) with verdict "over" (p exceeded 1), "under"
    (p' turned negative or never reached 1), sampling p on 0, h, 2h, ... X.
    """
    n = round(X / h)
    p, v = 0.0, slope
    ps = np.empty(n + 1)
    ps[0] = p
    for i in range(1, n + 1):
        k1p = v
        k1v = p**3 - p
        p2 = p + 0.5 * h * k1p
        v2 = v + 0.5 * h * k1v
        k2p = v2
        k2v = p2**3 - p2
        p3 = p + 0.5 * h * k2p
        v3 = v + 0.5 * h * k2v
        k3p = v3
        k3v = p3**3 - p3
        p4 = p + h * k3p
        v4 = v + h * k3v
        k4p = v4
        k4v = p4**3 - p4
        p += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        ps[i] = p
        if p > 1.0:
            return ps[: i + 1], "over"
        if v < 0.0:
            return ps[: i + 1], "under"
    return ps, "under"


def shoot_standing_wave(X: float = 8.0, h: float = 0.01) -> WaveProfile:
    """Standing wave via shooting: p(0)=0, bisect p'(0) so that p(X) -> 1.

    Bisection on the initial slope in [0.5, 1.0] to width 1e-12 (the
    heteroclinic slope is 1/sqrt(2)); the returned profile covers [-X, X]
    by odd reflection.  Raises RuntimeError if 200 bisections do not
    separate the bracket, which only happens for invalid inputs.
    """
    if X < 5.0:
        raise ValueError(f"half-width must be >= 5, got {X}")
    if h > 0.05:
        raise ValueError(f"step must be <= 0.05, got {h}")
    lo_s, hi_s = 0.5, 1.0
    _, verdict_lo = _rk4_shoot(lo_s, X, h)
    _, verdict_hi = _rk4_shoot(hi_s, X, h)
    if verdict_lo != "under" or verdict_hi != "over":
        raise RuntimeError("shooting bracket [0.5, 1.0] does not straddle the slope")
    converged = False
    for _ in range(200):
        mid = 0.5 * (lo_s + hi_s)
        _, verdict = _rk4_shoot(mid, X, h)
        if verdict == "over":
            hi_s = mid
        else:
            lo_s = mid
        if hi_s - lo_s < 1e-12:
            converged = True
            break
    if not converged:
        raise RuntimeError("shooting did not converge after 200 bisections")
    slope = lo_s
    ps_half, _ = _rk4_shoot(slope, X, h)
    if ps_half.size != round(X / h) + 1:
        # the converged under-shoot must reach X; otherwise the bracket lied
        raise RuntimeError("converged slope still leaves the domain early")
    n = ps_half.size - 1
    xs = np.arange(-n, n + 1) * h
    ps = np.concatenate([-ps_half[:0:-1], ps_half])
    return WaveProfile(xs, ps, c=0.0)


def corollary_bound_gap(w: WaveProfile, n: int, dps: np.ndarray | None = None) -> np.ndarray:
    """Gap p^2[(2n-1) - (n-1) p^2] - |p'|^2 per sample.

    Positive where the formal corollary bound holds; the true standing
    wave violates it near p = 0, which is the point of the diagnostic.
    dps overrides the derivative (else 2nd-order np.gradient).
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    p = w.ps
    dp = np.gradient(w.ps, w.h) if dps is None else np.asarray(dps, dtype=np.float64)
    return p * p * ((2.0 * n - 1.0) - (n - 1.0) * p * p) - dp * dp


def modica_bound_gap(w: WaveProfile, dps: np.ndarray | None = None) -> np.ndarray:
    """Gap (p^2-1)^2/2 - |p'|^2 per sample; zero for the exact tanh profile."""
    p = w.ps
    dp = np.gradient(w.ps, w.h) if dps is None else np.asarray(dps, dtype=np.float64)
    return 0.5 * (p * p - 1.0) ** 2 - dp * dp


@dataclass(frozen=True)
class PolynomialComparison:
    """Sampled comparison of the two gradient-bound polynomials on [-1, 1]."""

    xs: np.ndarray = field(repr=False)
    g1: np.ndarray = field(repr=False)  # x^2 (2n-1 - (n-1) x^2)
    g2: np.ndarray = field(repr=False)  # (x^2-1)^2 / 2
    crossings: tuple[float, ...] = ()


def polynomial_comparison(n: int = 2, samples: int = 401) -> PolynomialComparison:
    """Tabulate g1 = x^2(2n-1-(n-1)x^2) and g2 = (x^2-1)^2/2 and find g1 = g2.

    n = 1 is allowed: g1 degenerates to x^2 (the quartic coefficient
    vanishes) and the table is still meaningful.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if samples < 100:
        raise ValueError(f"need at least 100 samples, got {samples}")
    xs = np.linspace(-1.0, 1.0, samples)

    def g1f(x):
        return x * x * ((2.0 * n - 1.0) - (n - 1.0) * x * x)

    def g2f(x):
        return 0.5 * (x * x - 1.0) ** 2

    g1 = g1f(xs)
    g2 = g2f(xs)
    diff = g1 - g2
    crossings = []
    for i in range(samples - 1):
        a, b = diff[i], diff[i + 1]
        if a == 0.0:
            crossings.append(float(xs[i]))
        elif a * b < 0.0:
            crossings.append(float(brentq(lambda x: g1f(x) - g2f(x), xs[i], xs[i + 1],
                                          xtol=1e-14, rtol=8.9e-16)))
    if diff[-1] == 0.0:
        crossings.append(float(xs[-1]))
    return PolynomialComparison(xs, g1, g2, tuple(crossings))
