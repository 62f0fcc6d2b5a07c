"""
Coarse degree by pushforward and signed covering numbers

The fundamental cycle of a window is pushed through the vertex map of f and
evaluated at generic points p: the covering number counts, with orientation,
the image simplices containing p. Away from the image of the window boundary
the count is locally constant, and at the origin it is the integer d with
f_*[z] = d·[z].

Test points are drawn inside a certified region: an ∞-norm cube around the
origin that no pushed-forward boundary simplex can reach, further cut down
to the growth-based ball when that estimate is positive. The computation is
repeated on the half-size window, and d is only reported when every count
agrees.
"""

import math
import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from coarsedeg.core.chains import Chain, ChainMismatchError, LatticePoint
from coarsedeg.core.lattice import (
    Window,
    enumerate_window,
    fundamental_boundary,
    fundamental_cycle,
    half_window,
)
from coarsedeg.maps.ast_nodes import MapSpec
from coarsedeg.maps.coarseness import estimate_bornologous_modulus
from coarsedeg.maps.evaluate import vertex_map
from coarsedeg.utils.exact import FacePointError, orientation, simplex_contains, to_rational_point
from coarsedeg.utils.parallel import ordered_map
from coarsedeg.utils.sampling import JITTER_UNIT, make_rng

MAX_JITTER_RETRIES = 5
JITTER_STEP = 1e-3
# Test points stay this fraction inside the certified region
SAFE_FRACTION = 0.9


class NonGenericPointError(ValueError):
    """Raised when a covering number is requested at a point on a simplex face"""

    def __init__(self, message: str, point: Sequence[float], barycentric: float):
        super().__init__(message)
        self.point = tuple(point)
        self.barycentric = barycentric


@dataclass(frozen=True)
class TestPoint:
    """A test point with its covering numbers on the full and half window"""

    __test__ = False  # not a pytest class

    p: tuple[float, ...]
    covering: int
    covering_half: int

    def to_dict(self) -> dict:
        return {"p": list(self.p), "covering": self.covering, "covering_half": self.covering_half}


@dataclass(frozen=True)
class DegreeResult:
    """
    Outcome of a degree computation

    Attributes:
        d: The degree, or None when the counts disagree
        stable: True iff all covering numbers agree on both windows
        window: Window used (the half-size window is derived from it)
        spacing: World units per lattice step
        test_points: Points with their covering numbers
        safe_radius: Half-width of the certified test region (world units)
        heuristic_radius: Growth-based radius (L/(2·K) - collar - S(√n·spacing))·spacing
        sample_radius: Half-width of the cube the test points were drawn from; the
            certified cube intersected with the growth-based ball when that is positive
        reason: Why the result is unstable
    """

    d: int | None
    stable: bool
    window: Window
    spacing: float
    test_points: list[TestPoint] = field(default_factory=list)
    safe_radius: float = 0.0
    heuristic_radius: float | None = None
    sample_radius: float = 0.0
    reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "stable": self.stable,
            "window": self.window.to_dict(),
            "half_window": half_window(self.window).to_dict(),
            "spacing": self.spacing,
            "safe_radius": self.safe_radius,
            "heuristic_radius": self.heuristic_radius,
            "sample_radius": self.sample_radius,
            "reason": self.reason,
            "test_points": [tp.to_dict() for tp in self.test_points],
        }


def pushforward(c: Chain, vm: Callable[[LatticePoint], LatticePoint]) -> Chain:
    """
    Push a chain forward along a vertex map

    Σ r_x·(x_0, ..., x_q)  ↦  Σ r_x·(vm(x_0), ..., vm(x_q))

    Identical image tuples merge; vertex order is kept, so the result
    commutes with the boundary operator.
    """
    return Chain.from_terms(
        c.q,
        ((tuple(vm(v) for v in simplex), coeff) for simplex, coeff in c.terms.items()),
        spacing=c.spacing,
    )


class CoveringIndex:
    """
    Bounding-box index over the realized simplices of a top-degree chain

    Degenerate tuples are dropped up front; they realize to null sets.
    """

    def __init__(self, c: Chain):
        dim = c.dimension()
        if dim is not None and c.q != dim:
            raise ChainMismatchError(
                f"Covering numbers need a top-degree chain, got q={c.q} in dimension {dim}"
            )
        self.spacing = c.spacing
        self.simplices: list[tuple[LatticePoint, ...]] = []
        self.weights: list[int] = []
        for simplex, coeff in c.terms.items():
            sign = orientation(simplex)
            if sign:
                self.simplices.append(simplex)
                self.weights.append(coeff * sign)

        if self.simplices:
            vertices = np.array(self.simplices, dtype=np.int64)
            self.lower = vertices.min(axis=1)
            self.upper = vertices.max(axis=1)
        else:
            self.lower = self.upper = np.zeros((0, dim or 0), dtype=np.int64)

    def candidates(self, point: Sequence[float]) -> np.ndarray:
        """Indices of simplices whose bounding box contains the point"""
        x = np.asarray(point, dtype=float) / self.spacing
        inside = np.all((self.lower <= x + 1e-9) & (x - 1e-9 <= self.upper), axis=1)
        return np.flatnonzero(inside)

    def covering(self, point: Sequence[float]) -> int:
        """
        Signed covering number at a world point

        Raises:
            NonGenericPointError: If the point is within tolerance of a face
        """
        if not self.simplices:
            return 0
        numerators, den = to_rational_point(point, self.spacing)
        total = 0
        for k in self.candidates(point):
            try:
                if simplex_contains(self.simplices[k], numerators, den):
                    total += self.weights[k]
            except FacePointError as e:
                raise NonGenericPointError(
                    f"Point {tuple(point)} lies on a face of {self.simplices[k]}",
                    point=point,
                    barycentric=float(e.barycentric),
                ) from e
        return total


def covering_number(c: Chain, p: Sequence[float]) -> int:
    """
    Signed covering number of a top-degree chain at a world point

    Σ r_x·orient(x)·[p ∈ realization(x)]; degenerate tuples contribute 0.

    Raises:
        ChainMismatchError: If the chain is not of top degree
        NonGenericPointError: If p lies within 1e-9 (barycentric) of a face

    Examples:
        >>> covering_number(fundamental_cycle(Window(n=1, L=4)), (0.5,))
        1
    """
    return CoveringIndex(c).covering(p)


def boundary_clearance(pushed_boundary: Chain) -> float:
    """
    Certified ∞-norm radius around the origin missed by a boundary chain

    Every realized tuple lies within its ∞-diameter of each of its vertices,
    so no point of ∞-norm below (min vertex ∞-norm - ∞-diameter) is on it.

    Returns:
        The minimum of that bound over all tuples, in world units
        (infinity for the zero chain)
    """
    best = math.inf
    for simplex in pushed_boundary.terms:
        nearest = min(max(abs(x) for x in v) for v in simplex)
        diameter = max(
            (max(abs(a - b) for a, b in zip(u, v, strict=True)) for u in simplex for v in simplex),
            default=0,
        )
        best = min(best, nearest - diameter)
    return best * pushed_boundary.spacing


def _heuristic_radius(
    m: MapSpec, window: Window, vm: Callable[[LatticePoint], LatticePoint], seed: int
) -> float | None:
    growth = 0.0
    for v in enumerate_window(window):
        image = vm(v)
        growth = max(growth, max(abs(y) for y in image) / max(max(abs(x) for x in v), 1))
    if growth == 0.0:
        return None
    reach = math.sqrt(window.n) * window.spacing
    S = estimate_bornologous_modulus(m, [reach], window, pairs_per_radius=64, seed=seed).S(reach)
    return (window.L / (2.0 * growth) - (window.collar or 0) - S / window.spacing) * window.spacing


def degree(
    m: MapSpec,
    n: int,
    window: Window,
    num_test_points: int = 8,
    seed: int = 0,
    threads: int | None = None,
) -> DegreeResult:
    """
    Compute the coarse degree of a map of R^n

    Args:
        m: Map of R^n
        n: Dimension
        window: Window of the fundamental cycle; its half-size window is
            used as the second rung
        num_test_points: Generic points per window
        seed: Seed for the test points
        threads: Worker cap for the covering evaluations

    Returns:
        DegreeResult; d is None unless the result is stable

    Raises:
        ValueError: If the map or window has the wrong dimension
        MapEvaluationError: If the map fails on a lattice point
    """
    if m.domain_dim != n or window.n != n:
        raise ValueError(
            f"Dimension mismatch: map on R^{m.domain_dim}, window in R^{window.n}, n={n}"
        )
    if num_test_points < 1:
        raise ValueError(f"num_test_points must be >= 1, got {num_test_points}")

    vm = vertex_map(m, window.spacing)
    rungs = [window, half_window(window)]
    indexes = []
    clearance = math.inf
    for w in rungs:
        indexes.append(CoveringIndex(pushforward(fundamental_cycle(w), vm)))
        clearance = min(clearance, boundary_clearance(pushforward(fundamental_boundary(w), vm)))
    # a boundary that cancels completely certifies the whole half window
    clearance = min(clearance, rungs[1].world_half_width)

    heuristic = _heuristic_radius(m, window, vm, seed)

    if not clearance > 0:
        reason = "the pushed-forward boundary reaches the origin; no certified test region"
        warnings.warn(f"Degree of {m} is unstable: {reason}", UserWarning, stacklevel=2)
        return DegreeResult(
            d=None,
            stable=False,
            window=window,
            spacing=window.spacing,
            safe_radius=max(clearance, 0.0),
            heuristic_radius=heuristic,
            reason=reason,
        )

    # intersect with the growth-based ball when it is informative
    limit = clearance
    if heuristic is not None and heuristic > 0:
        limit = min(limit, heuristic / math.sqrt(n))
    reach = SAFE_FRACTION * limit
    rng = make_rng(seed)
    draws = rng.uniform(-reach, reach, size=(num_test_points, n))
    jitter = np.array([JITTER_UNIT * JITTER_STEP * window.spacing * (i + 1) for i in range(n)])

    def evaluate_point(row: np.ndarray) -> TestPoint:
        for attempt in range(MAX_JITTER_RETRIES + 1):
            p = tuple(float(c) for c in row + attempt * jitter)
            try:
                return TestPoint(
                    p=p, covering=indexes[0].covering(p), covering_half=indexes[1].covering(p)
                )
            except NonGenericPointError:
                if attempt == MAX_JITTER_RETRIES:
                    raise
                warnings.warn(
                    f"Test point {p} is on a simplex face; retrying with jitter",
                    UserWarning,
                    stacklevel=2,
                )
        raise AssertionError("unreachable")

    test_points = ordered_map(evaluate_point, list(draws), threads)
    values = {tp.covering for tp in test_points} | {tp.covering_half for tp in test_points}

    if len(values) == 1:
        (d,) = values
        return DegreeResult(
            d=d,
            stable=True,
            window=window,
            spacing=window.spacing,
            test_points=test_points,
            safe_radius=clearance,
            heuristic_radius=heuristic,
            sample_radius=reach,
        )

    reason = f"covering numbers disagree across test points or windows: {sorted(values)}"
    warnings.warn(f"Degree of {m} is unstable: {reason}", UserWarning, stacklevel=2)
    return DegreeResult(
        d=None,
        stable=False,
        window=window,
        spacing=window.spacing,
        test_points=test_points,
        safe_radius=clearance,
        heuristic_radius=heuristic,
        sample_radius=reach,
        reason=reason,
    )
