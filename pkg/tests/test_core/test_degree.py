"""
Tests for covering numbers and the coarse degree
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsedeg.core.chains import Chain, ChainMismatchError, boundary
from coarsedeg.core.degree import (
    CoveringIndex,
    NonGenericPointError,
    boundary_clearance,
    covering_number,
    degree,
    pushforward,
)
from coarsedeg.core.lattice import Window, fundamental_boundary, fundamental_cycle, split_cycle
from coarsedeg.maps.ast_nodes import Antipodal, Identity, Reflection
from coarsedeg.maps.evaluate import vertex_map
from coarsedeg.maps.parser import parse_map

vertex = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
triangles = st.lists(
    st.tuples(st.tuples(vertex, vertex, vertex), st.integers(-3, 3)), min_size=1, max_size=6
).map(lambda items: Chain.from_terms(2, items))


class TestPushforward:
    """Test pushing chains along vertex maps"""

    def test_merges_identical_images(self):
        """Test that tuples with the same image add up"""
        c = Chain(q=0, terms={((0,),): 1, ((1,),): 2})
        pushed = pushforward(c, lambda v: (0,))
        assert dict(pushed.terms) == {((0,),): 3}

    def test_keeps_degenerate_images(self):
        """Test that collapsed tuples remain as terms"""
        c = Chain(q=1, terms={((0,), (1,)): 1})
        assert dict(pushforward(c, lambda v: (5,)).terms) == {((5,), (5,)): 1}

    @given(triangles, st.integers(0, 1000), st.floats(0.0, 3.0))
    def test_chain_map(self, c, seed, eps):
        """Test that pushforward commutes with the boundary"""
        vm = vertex_map(parse_map(f"perturb({eps},{seed}){{linear(2,1;-1,1)}}", 2))
        assert boundary(pushforward(c, vm)) == pushforward(boundary(c), vm)

    def test_seeded_chain_map_cases(self):
        """Test the chain map property on 500 seeded chains and vertex maps"""
        rng = np.random.default_rng(1)
        for case in range(500):
            items = [
                (tuple(tuple(int(x) for x in rng.integers(-3, 4, size=2)) for _ in range(3)),
                 int(rng.integers(-3, 4)))
                for _ in range(int(rng.integers(1, 5)))
            ]
            c = Chain.from_terms(2, items)
            vm = vertex_map(parse_map(f"perturb(1.5,{case}){{rotate(0.3)}}", 2))
            assert boundary(pushforward(c, vm)) == pushforward(boundary(c), vm)


class TestCoveringNumber:
    """Test signed covering numbers"""

    def test_one_dimensional(self):
        """Test the unit interval chain"""
        c = fundamental_cycle(Window(n=1, L=4))
        assert covering_number(c, (0.5,)) == 1
        assert covering_number(c, (4.5,)) == 0

    @pytest.mark.parametrize("p", [(0.3, 0.1), (-2.7, 3.35), (3.9, -3.9)])
    def test_fundamental_cycle_covers_once(self, window2, p):
        """Test covering number 1 at generic interior points"""
        assert covering_number(fundamental_cycle(window2), p) == 1

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_hundred_interior_points(self, n):
        """Test covering number 1 at 100 seeded interior points of the L=8 window"""
        index = CoveringIndex(fundamental_cycle(Window(n=n, L=8)))
        rng = np.random.default_rng(n)
        for p in rng.uniform(-7.5, 7.5, size=(100, n)):
            assert index.covering(p) == 1

    def test_outside_window(self, window2):
        """Test covering number 0 outside the window"""
        assert covering_number(fundamental_cycle(window2), (5.5, 0.3)) == 0

    def test_face_point(self, window2):
        """Test that a point on a lattice line is rejected"""
        with pytest.raises(NonGenericPointError) as excinfo:
            covering_number(fundamental_cycle(window2), (0.5, 0.0))
        assert excinfo.value.point == (0.5, 0.0)

    def test_spacing(self):
        """Test covering numbers of a scaled lattice"""
        c = fundamental_cycle(Window(n=2, L=2, spacing=0.5))
        assert covering_number(c, (0.9, 0.3)) == 1
        assert covering_number(c, (1.1, 0.3)) == 0

    def test_degenerate_terms_ignored(self):
        """Test that flat tuples contribute nothing"""
        c = Chain(q=2, terms={((0, 0), (1, 1), (2, 2)): 7})
        assert CoveringIndex(c).simplices == []
        assert covering_number(c, (0.7, 0.9)) == 0

    def test_needs_top_degree(self):
        """Test that edges have no covering number in the plane"""
        with pytest.raises(ChainMismatchError):
            covering_number(Chain(q=1, terms={((0, 0), (1, 0)): 1}), (0.5, 0.5))

    def test_split_cycle(self):
        """Test the two halves of a split cycle and a reflected half"""
        lower, upper = split_cycle(Window(n=2, L=8), 0)
        left, right = (-2.12, 1.37), (2.12, 1.37)
        assert covering_number(lower, left) == 1
        assert covering_number(lower, right) == 0
        assert covering_number(upper, right) == 1
        flipped = pushforward(lower, vertex_map(Reflection(domain_dim=2, axis=0)))
        assert covering_number(flipped, right) == -1


class TestBoundaryClearance:
    """Test the certified test region"""

    def test_identity(self):
        """Test L minus one lattice step"""
        assert boundary_clearance(fundamental_boundary(Window(n=2, L=4))) == 3.0

    def test_world_units(self):
        """Test that the clearance scales with the spacing"""
        assert boundary_clearance(fundamental_boundary(Window(n=2, L=4, spacing=0.5))) == 1.5

    def test_zero_chain(self):
        """Test that an empty boundary misses everything"""
        assert boundary_clearance(Chain(q=1, terms={})) == float("inf")


class TestDegree:
    """Test the coarse degree"""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_identity(self, n):
        """Test degree 1 for the identity"""
        L = 4 if n == 3 else 8
        result = degree(Identity(domain_dim=n), n, Window(n=n, L=L))
        assert result.stable
        assert result.d == 1
        assert all(tp.covering == tp.covering_half == 1 for tp in result.test_points)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_reflection(self, n):
        """Test degree -1 for a reflection"""
        L = 4 if n == 3 else 8
        result = degree(Reflection(domain_dim=n, axis=n - 1), n, Window(n=n, L=L))
        assert result.stable
        assert result.d == -1

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_antipodal(self, n):
        """Test degree (-1)^n for the antipodal map"""
        L = 4 if n == 3 else 8
        result = degree(Antipodal(domain_dim=n), n, Window(n=n, L=L))
        assert result.d == (-1) ** n

    @pytest.mark.parametrize("text", ["translate(1,0)", "rotate(pi/2)", "scale(2)"])
    def test_degree_one_maps(self, window8, text):
        """Test maps coarsely homotopic to the identity"""
        assert degree(parse_map(text, 2), 2, window8).d == 1

    def test_fold_has_degree_zero(self):
        """Test that an even fold is not surjective with sign"""
        g = parse_map("fold{translate(1)}", 2)
        result = degree(g, 2, Window(n=2, L=16))
        assert result.stable
        assert result.d == 0

    def test_window_too_small_is_unstable(self, window8):
        """Test a map whose pushed boundary reaches the origin"""
        with pytest.warns(UserWarning, match="unstable"):
            result = degree(parse_map("translate(4,0)", 2), 2, window8)
        assert not result.stable
        assert result.d is None
        assert result.reason

    def test_test_points_in_safe_region(self, window8, identity2):
        """Test that every test point is inside the certified radius"""
        result = degree(identity2, 2, window8, num_test_points=16, seed=5)
        assert len(result.test_points) == 16
        for tp in result.test_points:
            assert max(abs(c) for c in tp.p) < result.safe_radius

    def test_test_points_in_growth_ball(self, window8, identity2):
        """Test that test points also respect the growth-based radius when it is positive"""
        result = degree(identity2, 2, window8, num_test_points=32, seed=11)
        assert result.heuristic_radius is not None and result.heuristic_radius > 0
        assert result.sample_radius <= 0.9 * result.heuristic_radius / math.sqrt(2) + 1e-12
        for tp in result.test_points:
            assert math.hypot(*tp.p) < result.heuristic_radius
            assert max(abs(c) for c in tp.p) < result.safe_radius
        assert result.d == 1

    def test_thread_count_does_not_change_result(self, window8, antipodal2):
        """Test deterministic results across thread counts"""
        one = degree(antipodal2, 2, window8, seed=3, threads=1)
        many = degree(antipodal2, 2, window8, seed=3, threads=4)
        assert one.to_dict() == many.to_dict()

    def test_dimension_mismatch(self, window8):
        """Test map/window dimension checks"""
        with pytest.raises(ValueError, match="Dimension mismatch"):
            degree(Identity(domain_dim=3), 3, window8)

    def test_to_dict(self, window8, identity2):
        """Test the serialized result"""
        doc = degree(identity2, 2, window8).to_dict()
        assert doc["d"] == 1
        assert doc["half_window"]["L"] == 4
        assert len(doc["test_points"]) == 8


ZOO = ["identity", "reflect(0)", "reflect(1)", "antipodal", "rotate(pi/2)"]


class TestDegreeInvariants:
    """Test multiplicativity and invariance under bounded perturbations"""

    @pytest.fixture(scope="class")
    def degrees(self):
        window = Window(n=2, L=8)
        return {text: degree(parse_map(text, 2), 2, window).d for text in ZOO}

    @pytest.mark.parametrize("first", ZOO)
    @pytest.mark.parametrize("second", ZOO)
    def test_multiplicativity(self, degrees, first, second):
        """Test deg(compose{a;b}) = deg(a)·deg(b)"""
        composed = parse_map(f"compose{{{first};{second}}}", 2)
        result = degree(composed, 2, Window(n=2, L=8))
        assert result.stable
        assert result.d == degrees[first] * degrees[second]

    @pytest.mark.parametrize("text,expected", [("identity", 1), ("antipodal", 1), ("reflect(0)", -1)])
    @pytest.mark.parametrize("seed", range(20))
    def test_bounded_perturbation(self, text, expected, seed):
        """Test that moving every point by at most two steps keeps the degree"""
        m = parse_map(f"perturb(2,{seed}){{{text}}}", 2)
        result = degree(m, 2, Window(n=2, L=16), seed=seed)
        assert result.stable
        assert result.d == expected
