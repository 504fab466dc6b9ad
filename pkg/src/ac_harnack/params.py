"""Constant algebra behind the differential Harnack estimate.

Everything here is closed-form: admissibility of the exponent pair
(alpha, beta), the derived coefficients (a, b, c, q), and the blow-up
factor phi(t) = (b + d + 2q coth(qt)) / (2a) together with its defining
Riccati-type ODE  a phi^2 - (b+d) phi - c + phi' = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AdmissibilityError

__all__ = [
    "HarnackParams",
    "DerivedConstants",
    "beta_admissible_max",
    "derive_constants",
    "phi",
    "phi_deriv",
    "phi_ode_residual",
    "phi_inf",
    "phi_floor_check",
    "phi_integral",
]


def beta_admissible_max(alpha: float, n: int, k: float = 0.0) -> float:
    """Largest admissible beta for given (alpha, n, k).

    Returns min( -n(alpha+2)/(2 alpha^2 - 2 alpha + 3n),
                 -n k / (4 alpha),
                 -n / (2 (1 - alpha)) ).
    A beta is admissible iff beta <= this value (the value is always < 0
    because the last expression is).
    """
    if not 0.0 < alpha < 1.0:
        raise AdmissibilityError(f"alpha must lie in (0,1), got {alpha}")
    if n < 1:
        raise AdmissibilityError(f"dimension n must be >= 1, got {n}")
    if k < 0.0:
        raise AdmissibilityError(f"Ricci bound k must be >= 0, got {k}")
    e1 = -n * (alpha + 2.0) / (2.0 * alpha * alpha - 2.0 * alpha + 3.0 * n)
    e2 = -n * k / (4.0 * alpha)
    e3 = -n / (2.0 * (1.0 - alpha))
    return min(e1, e2, e3)


@dataclass(frozen=True)
class HarnackParams:
    """Exponents and manifold data entering the Harnack quantity.

    alpha in (0,1), beta < 0, n >= 1 the dimension, k >= 0 the magnitude of
    the Ricci lower bound (0 on flat tori), d >= 0 the auxiliary shift used
    to keep the strict-positivity chain strict (0 in the final estimate).

    Basic domain checks run at construction; the beta-vs-(alpha,n,k)
    admissibility gate lives in :func:`derive_constants` so that a caller
    probing bad beta values gets the documented rejection there.
    """

    alpha: float
    beta: float
    n: int
    k: float = 0.0
    d: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise AdmissibilityError(f"alpha must lie in (0,1), got {self.alpha}")
        if not self.n >= 1:
            raise AdmissibilityError(f"dimension n must be >= 1, got {self.n}")
        if self.k < 0.0:
            raise AdmissibilityError(f"Ricci bound k must be >= 0, got {self.k}")
        if self.d < 0.0:
            raise AdmissibilityError(f"shift d must be >= 0, got {self.d}")
        if not self.beta < 0.0:
            raise AdmissibilityError(f"beta must be negative, got {self.beta}")

    def validate(self) -> None:
        """Raise AdmissibilityError unless beta clears every admissibility cap."""
        cap = beta_admissible_max(self.alpha, self.n, self.k)
        if self.beta > cap:
            raise AdmissibilityError(
                f"beta={self.beta} is not admissible for alpha={self.alpha}, "
                f"n={self.n}, k={self.k}: need beta <= {cap!r}"
            )


@dataclass(frozen=True)
class DerivedConstants:
    """Coefficients (a, b, c, q) of the phi ODE, plus the shift d they embed.

    a > 0, b >= 0, c > 0 and q = sqrt(ac + (b+d)^2/4) > 0.  The shift d is
    recorded because q already depends on it and phi(t) needs b + d.
    """

    a: float
    b: float
    c: float
    q: float
    d: float = 0.0


def derive_constants(p: HarnackParams) -> DerivedConstants:
    """Derive (a, b, c, q) from admissible parameters.

    Only the branch beta <= -n/(2(1-alpha)) is supported (it is the one the
    admissibility cap enforces); anything above it is rejected.
    """
    p.validate()
    second_case_cap = -p.n / (2.0 * (1.0 - p.alpha))
    if p.beta > second_case_cap:
        raise AdmissibilityError(
            f"beta={p.beta} > {second_case_cap}: only the branch "
            "beta <= -n/(2(1-alpha)) is supported"
        )
    bb = p.beta * (1.0 - p.alpha)
    a = -(2.0 / p.beta) * (1.0 + p.n / (4.0 * bb))
    b = 2.0 * (1.0 + p.n / (2.0 * bb))
    c = 2.0 * p.n / (1.0 - p.alpha)
    q = 0.5 * math.sqrt((b + p.d) ** 2 + 4.0 * a * c)
    return DerivedConstants(a=a, b=b, c=c, q=q, d=p.d)


def _coth(x: float) -> float:
    # (1 + e^{-2x}) / (1 - e^{-2x}), stable for every x > 0
    em = math.expm1(-2.0 * x)
    return -(2.0 + em) / em


def _csch_sq(x: float) -> float:
    # 4 e^{-2x} / (1 - e^{-2x})^2, stable for every x > 0
    em = math.expm1(-2.0 * x)
    return 4.0 * math.exp(-2.0 * x) / (em * em)


def phi(t: float, dc: DerivedConstants) -> float:
    """Blow-up factor phi(t) = (b + d + 2 q coth(q t)) / (2 a) for t > 0."""
    if not t > 0.0:
        raise ValueError(f"phi is defined for t > 0, got t={t}")
    return (dc.b + dc.d + 2.0 * dc.q * _coth(dc.q * t)) / (2.0 * dc.a)


def phi_deriv(t: float, dc: DerivedConstants) -> float:
    """Analytic phi'(t) = -q^2 csch^2(q t) / a."""
    if not t > 0.0:
        raise ValueError(f"phi' is defined for t > 0, got t={t}")
    return -dc.q * dc.q * _csch_sq(dc.q * t) / dc.a


def phi_ode_residual(t: float, dc: DerivedConstants, d: float | None = None) -> float:
    """Residual a phi^2 - (b+d) phi - c + phi' at time t.

    With d equal to the shift baked into dc (the default) the residual is
    zero up to rounding; with d=0 against a d>0 dc it equals d * phi(t).
    """
    if d is None:
        d = dc.d
    ph = phi(t, dc)
    return dc.a * ph * ph - (dc.b + d) * ph - dc.c + phi_deriv(t, dc)


def phi_inf(dc: DerivedConstants) -> float:
    """inf over t>0 of phi(t), attained in the t -> infinity limit."""
    return (dc.b + dc.d + 2.0 * dc.q) / (2.0 * dc.a)


def phi_floor_check(dc: DerivedConstants, p: HarnackParams) -> bool:
    """Whether inf phi >= n k / (2 alpha), the floor the estimate needs.

    This is a genuine check: admissibility does not imply it for every
    k > 0 (e.g. alpha=0.9, n=1, k=32.4, beta=-10 is admissible but fails).
    For k = 0 it always holds since phi > 0.
    """
    return phi_inf(dc) >= p.n * p.k / (2.0 * p.alpha)


def phi_integral(t1: float, t2: float, dc: DerivedConstants) -> float:
    """Exact integral of phi over [t1, t2], 0 < t1 < t2.

    int phi = (b+d)/(2a) (t2-t1) + (1/a) ln( sinh(q t2) / sinh(q t1) ),
    evaluated in the overflow-free form
    (b+d+2q)/(2a) (t2-t1) + (1/a)[log1p(-e^{-2q t2}) - log1p(-e^{-2q t1})].
    """
    if not 0.0 < t1 < t2:
        raise ValueError(f"need 0 < t1 < t2, got t1={t1}, t2={t2}")
    log_part = math.log1p(-math.exp(-2.0 * dc.q * t2)) - math.log1p(
        -math.exp(-2.0 * dc.q * t1)
    )
    return (dc.b + dc.d + 2.0 * dc.q) / (2.0 * dc.a) * (t2 - t1) + log_part / dc.a
