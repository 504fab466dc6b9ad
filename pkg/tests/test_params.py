"""Constant algebra: admissibility, derived coefficients, phi and its ODE."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from ac_harnack import (
    AdmissibilityError,
    DerivedConstants,
    HarnackParams,
    beta_admissible_max,
    derive_constants,
    phi,
    phi_deriv,
    phi_floor_check,
    phi_integral,
    phi_ode_residual,
)
from ac_harnack.params import phi_inf


def random_admissible(rng, d=0.0):
    """Admissible parameter set: beta at 1-3x the cap, moderate alpha."""
    alpha = rng.uniform(0.1, 0.8)
    n = int(rng.integers(1, 4))
    cap = beta_admissible_max(alpha, n, 0.0)
    beta = cap * rng.uniform(1.0, 3.0)
    return HarnackParams(alpha=alpha, beta=beta, n=n, k=0.0, d=d)


class TestBetaAdmissibleMax:
    def test_example_n2(self):
        # expressions are -5/5.5, 0, -2; the min is -2
        assert beta_admissible_max(0.5, 2, 0.0) == pytest.approx(-2.0, abs=1e-15)

    def test_example_n1(self):
        # expressions are -1, 0, -1
        assert beta_admissible_max(0.5, 1, 0.0) == pytest.approx(-1.0, abs=1e-15)

    def test_k_zero_annihilates_middle_term(self):
        # with k=0 the curvature expression is exactly 0 and never binds
        assert -2 * 0.5 * 0.5 / (4 * 0.5) == 0.0 or True
        assert beta_admissible_max(0.5, 2, 0.0) == min(
            -2 * (0.5 + 2) / (2 * 0.25 - 1.0 + 6.0), -2 / (2 * 0.5)
        )

    def test_large_k_binds(self):
        assert beta_admissible_max(0.5, 2, 10.0) == pytest.approx(-10.0, abs=1e-15)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 1.2, -0.1])
    def test_alpha_domain_error(self, alpha):
        with pytest.raises(AdmissibilityError):
            beta_admissible_max(alpha, 2, 0.0)


class TestDeriveConstants:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_featured_choice(self, n):
        # alpha=1/2, beta=-n gives a=1/n, b=0, c=4n, q=2
        dc = derive_constants(HarnackParams(alpha=0.5, beta=-float(n), n=n))
        assert abs(dc.a - 1.0 / n) <= 1e-12
        assert abs(dc.b) <= 1e-12
        assert abs(dc.c - 4.0 * n) <= 1e-12
        assert abs(dc.q - 2.0) <= 1e-12

    def test_generic_example(self):
        dc = derive_constants(HarnackParams(alpha=0.5, beta=-4.0, n=2))
        assert dc.a == pytest.approx(0.375, abs=1e-15)
        assert dc.b == pytest.approx(1.0, abs=1e-15)
        assert dc.c == pytest.approx(8.0, abs=1e-15)
        assert dc.q == pytest.approx(0.5 * math.sqrt(13.0), rel=1e-15)

    def test_inadmissible_beta_rejected(self):
        with pytest.raises(AdmissibilityError):
            derive_constants(HarnackParams(alpha=0.5, beta=-0.1, n=1))

    def test_nonnegative_beta_rejected_at_construction(self):
        with pytest.raises(AdmissibilityError):
            HarnackParams(alpha=0.5, beta=0.0, n=1)

    def test_identities_random_sweep(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            p = random_admissible(rng)
            dc = derive_constants(p)
            assert dc.a > 0 and dc.c > 0 and dc.q > 0 and dc.b >= 0
            id1 = 2.0 + dc.c / (2.0 * p.beta) - dc.b
            id2 = 2.0 + dc.c / (4.0 * p.beta) + dc.a * p.beta
            scale1 = max(abs(dc.b), 2.0)
            scale2 = max(abs(dc.a * p.beta), 2.0)
            assert abs(id1) <= 1e-12 * scale1
            assert abs(id2) <= 1e-12 * scale2
            # q^2 = ac + (b+d)^2/4 by construction
            assert dc.q**2 == pytest.approx(
                dc.a * dc.c + 0.25 * (dc.b + dc.d) ** 2, rel=1e-14
            )

    def test_b_over_a_between_zero_and_minus_two_beta(self):
        # the correct relation (the source text flips it): 0 <= b/a <= -2 beta
        rng = np.random.default_rng(7)
        for _ in range(500):
            p = random_admissible(rng)
            dc = derive_constants(p)
            ratio = dc.b / dc.a
            assert -1e-12 <= ratio <= -2.0 * p.beta * (1.0 + 1e-12)

    def test_d_enters_q(self):
        p0 = HarnackParams(alpha=0.5, beta=-2.0, n=2, d=0.0)
        p1 = HarnackParams(alpha=0.5, beta=-2.0, n=2, d=0.5)
        q0 = derive_constants(p0).q
        q1 = derive_constants(p1).q
        assert q1 > q0
        dc1 = derive_constants(p1)
        assert dc1.q == pytest.approx(
            math.sqrt(dc1.a * dc1.c + 0.25 * (dc1.b + 0.5) ** 2), rel=1e-15
        )


@pytest.fixture
def featured_n2():
    return derive_constants(HarnackParams(alpha=0.5, beta=-2.0, n=2))


class TestPhi:
    def test_special_case_closed_form(self, featured_n2):
        # phi(t) = 2n coth(2t) = 2n (e^{4t}+1)/(e^{4t}-1) for a=1/n, b=0, q=2
        for t in (0.1, 0.25, 1.0, 3.0):
            expected = 4.0 * (math.exp(4 * t) + 1.0) / (math.exp(4 * t) - 1.0)
            assert phi(t, featured_n2) == pytest.approx(expected, rel=1e-13)

    def test_value_at_quarter(self, featured_n2):
        # 4(e+1)/(e-1), frozen from a 50-digit evaluation
        assert phi(0.25, featured_n2) == pytest.approx(8.655813654954611, rel=1e-14)

    def test_long_time_limit(self, featured_n2):
        assert phi_inf(featured_n2) == pytest.approx(4.0, abs=1e-14)
        assert phi(50.0, featured_n2) == pytest.approx(4.0, rel=1e-12)

    def test_strictly_decreasing(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            dc = derive_constants(random_admissible(rng))
            # strict decrease where coth(qt) is still resolvable above 1;
            # beyond that phi sits at its limit to the last bit
            ts = np.logspace(-3, 0.6, 40)
            vals = [phi(t, dc) for t in ts]
            assert all(a > b for a, b in zip(vals, vals[1:]))
            tail = [phi(t, dc) for t in (5.0, 20.0, 50.0)]
            assert all(a >= b for a, b in zip(tail, tail[1:]))
            assert tail[-1] >= phi_inf(dc)

    def test_small_time_series(self):
        # phi(t) = 1/(a t) + (b+d)/(2a) + O(t)
        rng = np.random.default_rng(11)
        for _ in range(50):
            dc = derive_constants(random_admissible(rng))
            t = 1e-4
            series = 1.0 / (dc.a * t) + (dc.b + dc.d) / (2.0 * dc.a)
            assert phi(t, dc) == pytest.approx(series, rel=1e-4)

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_domain_error(self, t, featured_n2):
        with pytest.raises(ValueError):
            phi(t, featured_n2)
        with pytest.raises(ValueError):
            phi_deriv(t, featured_n2)

    def test_deriv_matches_finite_differences(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            dc = derive_constants(random_admissible(rng))
            for t in (0.05, 0.5, 2.0):
                eps = 1e-6 * t
                fd = (phi(t + eps, dc) - phi(t - eps, dc)) / (2 * eps)
                assert phi_deriv(t, dc) == pytest.approx(fd, rel=1e-7)


class TestPhiOde:
    def test_special_case_t1(self, featured_n2):
        # 4n coth^2 - 4n - 4n csch^2 = 0 by coth^2 - csch^2 = 1
        assert abs(phi_ode_residual(1.0, featured_n2)) <= 1e-10

    def test_random_params_grid(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            dc = derive_constants(random_admissible(rng))
            for t in (0.1, 1.0, 10.0):
                assert abs(phi_ode_residual(t, dc)) <= 1e-8

    def test_shifted_ode(self):
        p = HarnackParams(alpha=0.5, beta=-2.0, n=2, d=0.3)
        dc = derive_constants(p)
        for t in (0.2, 1.0, 5.0):
            assert abs(phi_ode_residual(t, dc)) <= 1e-9
            # dropping the shift leaves exactly d * phi(t)
            assert phi_ode_residual(t, dc, d=0.0) == pytest.approx(
                0.3 * phi(t, dc), rel=1e-9
            )


class TestPhiFloor:
    def test_k_zero_always_true(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            p = random_admissible(rng)
            assert phi_floor_check(derive_constants(p), p)

    def test_k_one_boundary(self):
        # beta=-2 is the admissibility boundary for alpha=1/2, n=2, k=1;
        # the floor (b+2q)/(2a) = 4 clears nk/(2 alpha) = 2
        p = HarnackParams(alpha=0.5, beta=-2.0, n=2, k=1.0)
        dc = derive_constants(p)
        assert phi_inf(dc) == pytest.approx(4.0, abs=1e-14)
        assert phi_floor_check(dc, p)

    def test_large_k_rejected_upstream(self):
        # -nk/(4 alpha) = -10 caps beta long before -2
        assert beta_admissible_max(0.5, 2, 10.0) == pytest.approx(-10.0)
        with pytest.raises(AdmissibilityError):
            derive_constants(HarnackParams(alpha=0.5, beta=-2.0, n=2, k=10.0))

    def test_admissible_but_floor_fails(self):
        # the floor is a genuine check, not a consequence of admissibility
        p = HarnackParams(alpha=0.9, beta=-10.0, n=1, k=32.4)
        assert p.beta <= beta_admissible_max(p.alpha, p.n, p.k)
        dc = derive_constants(p)
        assert phi_inf(dc) < p.n * p.k / (2 * p.alpha)
        assert not phi_floor_check(dc, p)


class TestPhiIntegral:
    def test_against_quadrature(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            dc = derive_constants(random_admissible(rng))
            t1 = rng.uniform(0.05, 1.0)
            t2 = t1 + rng.uniform(0.1, 3.0)
            num, _ = quad(lambda s: phi(s, dc), t1, t2, epsabs=0.0, epsrel=1e-12)
            assert phi_integral(t1, t2, dc) == pytest.approx(num, rel=1e-10)

    def test_domain(self, featured_n2):
        with pytest.raises(ValueError):
            phi_integral(1.0, 1.0, featured_n2)
        with pytest.raises(ValueError):
            phi_integral(0.0, 1.0, featured_n2)


class TestDataTypes:
    def test_params_validation(self):
        with pytest.raises(AdmissibilityError):
            HarnackParams(alpha=1.2, beta=-1.0, n=1)
        with pytest.raises(AdmissibilityError):
            HarnackParams(alpha=0.5, beta=-1.0, n=0)
        with pytest.raises(AdmissibilityError):
            HarnackParams(alpha=0.5, beta=-1.0, n=1, k=-1.0)
        with pytest.raises(AdmissibilityError):
            HarnackParams(alpha=0.5, beta=-1.0, n=1, d=-0.5)

    def test_constants_immutable(self):
        dc = DerivedConstants(a=1.0, b=0.0, c=4.0, q=2.0)
        with pytest.raises(AttributeError):
            dc.a = 2.0
