"""Torus grids, stencils, geodesic distance, and the AC-FIELD v1 format."""

import math

import numpy as np
import pytest

from ac_harnack import ScalarField, TorusGrid, geodesic_distance, gradient_sq, laplacian
from ac_harnack.grid import read_field, write_field


def sin_field(N, L=1.0, mode=1):
    g = TorusGrid((L,), (N,))
    x = g.axis_coords(0)
    return g, ScalarField(g, np.sin(2 * np.pi * mode * x / L))


class TestTorusGrid:
    def test_spacing(self):
        g = TorusGrid((2.0, 1.0), (16, 32))
        assert g.spacing == (0.125, 0.03125)
        assert g.dim == 2
        assert g.total_points == 512

    def test_validation(self):
        with pytest.raises(ValueError):
            TorusGrid((1.0,), (4,))  # too few points
        with pytest.raises(ValueError):
            TorusGrid((1.0, 1.0, 1.0, 1.0), (8, 8, 8, 8))  # dim 4
        with pytest.raises(ValueError):
            TorusGrid((-1.0,), (16,))
        with pytest.raises(ValueError):
            TorusGrid((1.0, 1.0, 1.0), (1024, 1024, 1024))  # above the cap

    def test_field_shape_and_finiteness(self):
        g = TorusGrid((1.0,), (16,))
        with pytest.raises(ValueError):
            ScalarField(g, np.zeros(17))
        with pytest.raises(ValueError):
            ScalarField(g, np.full(16, np.nan))


class TestLaplacian:
    def test_constant_annihilated(self):
        g = TorusGrid((1.0, 2.0), (16, 8))
        f = ScalarField(g, np.full((16, 8), 0.7))
        assert np.abs(laplacian(f).values).max() == 0.0

    @pytest.mark.parametrize("N", [32, 64, 128])
    def test_sine_eigenresponse(self, N):
        # discrete eigenvalue of the 3-point stencil: -(2/h^2)(1 - cos(2 pi h/L))
        g, f = sin_field(N)
        h = g.spacing[0]
        lam = -(2.0 / h**2) * (1.0 - math.cos(2 * math.pi * h / 1.0))
        err = np.abs(laplacian(f).values - lam * f.values).max()
        assert err <= 1e-11 * abs(lam)

    def test_richardson_factor(self):
        # error against the continuum eigenvalue -(2 pi/L)^2 shrinks ~4x per halving
        errs = []
        for N in (32, 64, 128):
            g, f = sin_field(N)
            target = -((2 * math.pi) ** 2) * f.values
            errs.append(np.abs(laplacian(f).values - target).max())
        s1 = math.log2(errs[0] / errs[1])
        s2 = math.log2(errs[1] / errs[2])
        assert 1.8 <= s1 <= 2.2
        assert 1.8 <= s2 <= 2.2

    def test_shift_equivariance_exact(self):
        rng = np.random.default_rng(0)
        g = TorusGrid((1.0, 1.0), (16, 12))
        v = rng.uniform(-1, 1, size=(16, 12))
        f = ScalarField(g, v)
        for shift, ax in ((3, 0), (5, 1)):
            rolled = laplacian(ScalarField(g, np.roll(v, shift, axis=ax))).values
            assert np.array_equal(rolled, np.roll(laplacian(f).values, shift, axis=ax))

    def test_integration_by_parts(self):
        rng = np.random.default_rng(1)
        for dim, shape in ((1, (32,)), (2, (16, 12)), (3, (8, 8, 10))):
            g = TorusGrid((1.0,) * dim, shape)
            f = ScalarField(g, rng.uniform(-1, 1, size=shape))
            h = ScalarField(g, rng.uniform(-1, 1, size=shape))
            lhs = float((f.values * laplacian(h).values).sum())
            rhs = float((h.values * laplacian(f).values).sum())
            scale = np.abs(f.values * laplacian(h).values).sum()
            assert abs(lhs - rhs) <= 1e-12 * scale


class TestGradientSq:
    def test_constant(self):
        g = TorusGrid((1.0,), (16,))
        f = ScalarField(g, np.full(16, 0.3))
        assert np.abs(gradient_sq(f).values).max() == 0.0

    def test_sine_symbol(self):
        # (sin(2 pi h/L)/h)^2 cos^2(2 pi x/L), converging at O(h^2)
        errs = []
        for N in (32, 64, 128):
            g, f = sin_field(N)
            h = g.spacing[0]
            x = g.axis_coords(0)
            sym = (math.sin(2 * math.pi * h) / h) ** 2
            expect = sym * np.cos(2 * np.pi * x) ** 2
            assert np.abs(gradient_sq(f).values - expect).max() <= 1e-11
            errs.append(
                np.abs(gradient_sq(f).values - (2 * np.pi) ** 2 * np.cos(2 * np.pi * x) ** 2).max()
            )
        assert 1.8 <= math.log2(errs[0] / errs[1]) <= 2.2

    def test_shift_equivariance_exact(self):
        rng = np.random.default_rng(2)
        g = TorusGrid((1.0,), (24,))
        v = rng.uniform(-1, 1, size=24)
        f = ScalarField(g, v)
        rolled = gradient_sq(ScalarField(g, np.roll(v, 7))).values
        assert np.array_equal(rolled, np.roll(gradient_sq(f).values, 7))


class TestGeodesicDistance:
    def test_identity(self):
        g = TorusGrid((1.0, 1.0), (16, 16))
        assert geodesic_distance(g, (3, 4), (3, 4)) == 0.0

    def test_wraparound_t1(self):
        # coordinates 0.1 and 0.9 on L=1: wrap distance 0.2
        g = TorusGrid((1.0,), (10,))
        assert geodesic_distance(g, (1,), (9,)) == pytest.approx(0.2, rel=1e-12)

    def test_half_period_t2(self):
        g = TorusGrid((1.0, 1.0), (10, 10))
        assert geodesic_distance(g, (0, 0), (5, 5)) == pytest.approx(
            math.sqrt(0.5), rel=1e-12
        )

    def test_metric_axioms_random(self):
        rng = np.random.default_rng(3)
        g = TorusGrid((1.0, 2.0), (12, 16))
        pts = [tuple(int(rng.integers(0, N)) for N in g.points) for _ in range(30)]
        for x, y, z in zip(pts, pts[1:], pts[2:]):
            dxy = geodesic_distance(g, x, y)
            assert dxy == geodesic_distance(g, y, x)
            assert dxy >= 0.0
            assert dxy <= geodesic_distance(g, x, z) + geodesic_distance(g, z, y) + 1e-14

    def test_bad_index(self):
        g = TorusGrid((1.0,), (10,))
        with pytest.raises(ValueError):
            geodesic_distance(g, (10,), (0,))


class TestFieldIO:
    def test_roundtrip_bit_identical(self, tmp_path):
        rng = np.random.default_rng(4)
        g = TorusGrid((1.0, 1.5), (12, 8))
        f = ScalarField(g, rng.uniform(1e-12, 1 - 1e-12, size=(12, 8)))
        t = 0.730000000001234
        path = tmp_path / "snap.field"
        write_field(path, f, t)
        f2, t2 = read_field(path)
        assert t2 == t
        assert f2.grid == g
        assert np.array_equal(f2.values, f.values)

    def test_header_format(self, tmp_path):
        g = TorusGrid((1.0,), (8,))
        f = ScalarField(g, np.linspace(0.1, 0.9, 8))
        path = tmp_path / "snap.field"
        write_field(path, f, 0.25)
        header = path.read_text().splitlines()[0]
        assert header.startswith("AC-FIELD v1 dim=1 N=8 L=1 t=0.25")

    def test_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.field"
        path.write_text("NOT-A-FIELD\n1.0\n")
        with pytest.raises(ValueError):
            read_field(path)
