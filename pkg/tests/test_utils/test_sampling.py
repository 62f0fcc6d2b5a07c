"""
Tests for seeded sampling helpers
"""

import math

import pytest

from coarsedeg.utils.sampling import (
    MAX_LATTICE_SAMPLES,
    hash_noise,
    lattice_points,
    make_rng,
    sphere_points,
    uniform_in_cube,
    window_samples,
)


class TestLatticePoints:
    """Test lattice enumeration"""

    def test_count_and_order(self):
        """Test (2L+1)^n points in lexicographic order"""
        pts = lattice_points(2, 1)
        assert len(pts) == 9
        assert pts[0] == (-1.0, -1.0)
        assert pts[-1] == (1.0, 1.0)
        assert pts == sorted(pts)

    def test_spacing_and_refine(self):
        """Test world coordinates with spacing and refinement"""
        pts = lattice_points(1, 1, spacing=2.0, refine=2)
        assert pts == [(-2.0,), (-1.0,), (0.0,), (1.0,), (2.0,)]


class TestSpherePoints:
    """Test quasi-uniform sphere points"""

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_on_sphere(self, n):
        """Test that every point has the requested norm"""
        for p in sphere_points(n, 5.0, 64, seed=3):
            assert math.isclose(math.hypot(*p), 5.0, rel_tol=1e-9)

    @pytest.mark.parametrize("n", [2, 3])
    def test_halfspace(self, n):
        """Test that the upper hemisphere is respected"""
        pts = sphere_points(n, 1.0, 33, seed=1, halfspace=True)
        assert len(pts) == 33
        assert all(p[-1] >= -1e-12 for p in pts)

    def test_planar_halfspace_includes_ends(self):
        """Test that both ends of the half-circle are sampled"""
        pts = sphere_points(2, 10.0, 5, halfspace=True)
        assert pts[0] == pytest.approx((10.0, 0.0))
        assert pts[-1] == pytest.approx((-10.0, 0.0), abs=1e-9)

    def test_deterministic(self):
        """Test that the seed fully determines the points"""
        assert sphere_points(3, 2.0, 16, seed=7) == sphere_points(3, 2.0, 16, seed=7)
        assert sphere_points(2, 2.0, 16, seed=7) != sphere_points(2, 2.0, 16, seed=8)

    def test_one_dimension(self):
        """Test the zero-sphere"""
        assert sphere_points(1, 3.0, 10) == [(3.0,), (-3.0,)]
        assert sphere_points(1, 3.0, 10, halfspace=True) == [(3.0,)]

    def test_zero_count(self):
        """Test an empty request"""
        assert sphere_points(2, 1.0, 0) == []


class TestHashNoise:
    """Test deterministic hash noise"""

    def test_pure(self):
        """Test that noise is a function of (seed, point)"""
        assert hash_noise(1, (2.0, 3.0)) == hash_noise(1, (2.0, 3.0))
        assert hash_noise(1, (2.0, 3.0)) != hash_noise(2, (2.0, 3.0))

    def test_range(self):
        """Test that every component lies in [-1, 1]"""
        for k in range(100):
            for c in hash_noise(0, (float(k), -float(k))):
                assert -1.0 <= c <= 1.0

    def test_signed_zero(self):
        """Test that -0.0 and 0.0 hash alike"""
        assert hash_noise(5, (-0.0, 1.0)) == hash_noise(5, (0.0, 1.0))


class TestWindowSamples:
    """Test window sample sets"""

    def test_small_window_is_full_lattice_plus_extra(self):
        """Test a window small enough to enumerate"""
        pts = window_samples(2, 2, count=10, seed=0)
        assert len(pts) == 25 + 10
        assert all(max(abs(c) for c in p) <= 2.0 for p in pts)

    def test_large_window_is_capped(self):
        """Test that huge lattices are subsampled with the corners kept"""
        pts = window_samples(3, 40, count=0, seed=0)
        assert len(pts) == MAX_LATTICE_SAMPLES + 8
        assert (40.0, 40.0, 40.0) in pts
        assert (-40.0, -40.0, -40.0) in pts

    def test_uniform_in_cube(self):
        """Test the cube sampler bounds"""
        pts = uniform_in_cube(make_rng(0), 3, 2.5, 100)
        assert pts.shape == (100, 3)
        assert (abs(pts) <= 2.5).all()
