"""
Lattice windows and the Kuhn triangulation

A Window is the finite lattice box [-L, L]^n that truncates the locally
finite sums of coarse homology. The cube is cut into unit cubes, and every
unit cube with corner c is cut into n! Kuhn simplices

    c, c + e_π(1), c + e_π(1) + e_π(2), ..., c + (1, ..., 1)

one per permutation π of the axes. Vertices of a Kuhn simplex are totally
ordered coordinatewise, and that order is the tuple order used everywhere, so
an interior face shared by two simplices appears as the same ordered tuple in
both and cancels exactly in the boundary.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from coarsedeg.core.chains import Chain, LatticePoint, boundary
from coarsedeg.utils.exact import int_det

DEFAULT_COLLAR = 2


class InvalidWindowError(ValueError):
    """Raised when a window has an invalid dimension, width, spacing or collar"""

    pass


@dataclass(frozen=True)
class Window:
    """
    Finite lattice box [-L, L]^n

    Attributes:
        n: Dimension
        L: Half-width in lattice units (L = 0 is a degenerate, empty-interior window)
        spacing: World units per lattice step
        collar: Boundary band width in lattice units; None picks
            min(DEFAULT_COLLAR, L - 1)
    """

    n: int
    L: int
    spacing: float = 1.0
    collar: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidWindowError(f"Window dimension must be >= 1, got {self.n}")
        if self.L < 0:
            raise InvalidWindowError(f"Window half-width must be >= 0, got {self.L}")
        if not self.spacing > 0 or not math.isfinite(self.spacing):
            raise InvalidWindowError(f"Spacing must be a positive real, got {self.spacing}")

        if self.collar is None:
            object.__setattr__(self, "collar", min(DEFAULT_COLLAR, max(self.L - 1, 0)))
        elif self.collar < 0:
            raise InvalidWindowError(f"Collar must be non-negative, got {self.collar}")
        elif self.L >= 1 and self.collar >= self.L:
            raise InvalidWindowError(f"Collar {self.collar} must be smaller than L={self.L}")

    @property
    def world_half_width(self) -> float:
        """Half-width in world units"""
        return self.L * self.spacing

    def contains(self, v: LatticePoint) -> bool:
        """True if the lattice point lies in the window"""
        return len(v) == self.n and all(abs(x) <= self.L for x in v)

    def to_dict(self) -> dict:
        return {"n": self.n, "L": self.L, "spacing": self.spacing, "collar": self.collar}


@dataclass(frozen=True)
class OrientedSimplex:
    """
    Nondegenerate lattice simplex with its orientation

    Attributes:
        vertices: (q+1)-tuple of lattice points in Kuhn order
        sign: +1 or -1, the sign of det(v_1 - v_0, ..., v_q - v_0)
    """

    vertices: tuple[LatticePoint, ...]
    sign: int

    def volume(self, spacing: float = 1.0) -> float:
        """Realized (unsigned) volume in world units"""
        v0 = self.vertices[0]
        edges = [[a - b for a, b in zip(v, v0, strict=True)] for v in self.vertices[1:]]
        n = len(edges)
        return abs(int_det(edges)) / math.factorial(n) * spacing**n


def _require_valid(window: Window) -> None:
    if window.L < 1:
        raise InvalidWindowError(f"Window half-width must be >= 1, got {window.L}")


def enumerate_window(window: Window) -> list[LatticePoint]:
    """
    All lattice points of the window in lexicographic order

    Returns:
        (2L+1)^n points with every coordinate in [-L, L]

    Raises:
        InvalidWindowError: If L < 1
    """
    _require_valid(window)
    axis = range(-window.L, window.L + 1)
    return list(itertools.product(axis, repeat=window.n))


def boundary_vertices(window: Window) -> list[LatticePoint]:
    """Lattice points of the window with some coordinate of absolute value L"""
    return [v for v in enumerate_window(window) if any(abs(x) == window.L for x in v)]


def half_window(window: Window) -> Window:
    """The window of half the size (L' = max(L // 2, 1)) with the same spacing"""
    L = max(window.L // 2, 1)
    collar = min(window.collar or 0, max(L - 1, 0))
    return Window(n=window.n, L=L, spacing=window.spacing, collar=collar)


@lru_cache(maxsize=16)
def kuhn_simplices(window: Window) -> tuple[OrientedSimplex, ...]:
    """
    The n! (2L)^n Kuhn simplices triangulating [-L, L]^n

    Cube corners run in lexicographic order and permutations in
    itertools.permutations order, so the sequence is deterministic.
    A degenerate window (L = 0) has no simplices.

    Returns:
        Tuple of OrientedSimplex values
    """
    if window.L < 1:
        return ()

    n = window.n
    perms = list(itertools.permutations(range(n)))
    simplices = []
    for corner in itertools.product(range(-window.L, window.L), repeat=n):
        for perm in perms:
            vertex = list(corner)
            vertices = [tuple(vertex)]
            for axis in perm:
                vertex[axis] += 1
                vertices.append(tuple(vertex))
            edges = [[a - b for a, b in zip(v, corner, strict=True)] for v in vertices[1:]]
            sign = 1 if int_det(edges) > 0 else -1
            simplices.append(OrientedSimplex(vertices=tuple(vertices), sign=sign))
    return tuple(simplices)


@lru_cache(maxsize=16)
def fundamental_cycle(window: Window) -> Chain:
    """
    Finite-window fundamental cycle of R^n

    The n-chain sum sign(σ)·(v_0, ..., v_n) over the Kuhn simplices of the
    window. Every realized simplex is positively oriented once its sign is
    applied, so the signed covering number is +1 at generic interior points,
    and the boundary is supported on the faces of the window's boundary.
    """
    terms = {s.vertices: s.sign for s in kuhn_simplices(window)}
    return Chain(q=window.n, terms=terms, spacing=window.spacing)


@lru_cache(maxsize=16)
def fundamental_boundary(window: Window) -> Chain:
    """Cached boundary of the fundamental cycle"""
    cycle = fundamental_cycle(window)
    if cycle.is_zero():
        return Chain(q=window.n - 1, terms={}, spacing=window.spacing)
    return boundary(cycle)


def split_cycle(window: Window, axis: int) -> tuple[Chain, Chain]:
    """
    Split the fundamental cycle along a coordinate hyperplane

    Args:
        window: The window
        axis: Coordinate axis of the splitting hyperplane x_axis = 0

    Returns:
        (Δ1, Δ2): the terms lying in x_axis <= 0 and in x_axis >= 0; they sum
        to the fundamental cycle
    """
    if not 0 <= axis < window.n:
        raise InvalidWindowError(f"Axis {axis} out of range for dimension {window.n}")

    lower: dict = {}
    upper: dict = {}
    for simplex, coeff in fundamental_cycle(window).terms.items():
        if all(v[axis] <= 0 for v in simplex):
            lower[simplex] = coeff
        else:
            upper[simplex] = coeff
    return (
        Chain(q=window.n, terms=lower, spacing=window.spacing),
        Chain(q=window.n, terms=upper, spacing=window.spacing),
    )
