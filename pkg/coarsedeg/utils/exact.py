"""
Exact predicates on integer lattices

Orientation and point-in-simplex tests run on integers only. Lattice vertices
are integers already; query points are converted from floats to exact
rationals (every finite float is a dyadic rational) and then cleared of their
common denominator, so no tolerance is needed to decide a sign.
"""

import math
from collections.abc import Sequence
from fractions import Fraction

# Barycentric coordinates this close to zero mark a point as sitting on a face
FACE_TOLERANCE = Fraction(1, 10**9)


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """
    Determinant of a square integer matrix (Bareiss fraction-free elimination)

    Args:
        rows: Square matrix as a sequence of integer rows

    Returns:
        The exact determinant

    Examples:
        >>> int_det([[1, 0], [0, 1]])
        1
        >>> int_det([[0, 1], [1, 0]])
        -1
    """
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return int(rows[0][0])
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]

    a = [list(map(int, row)) for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def orientation(vertices: Sequence[Sequence[int]]) -> int:
    """
    Sign of the determinant of the edge vectors (v_1 - v_0, ..., v_q - v_0)

    Only meaningful for full-dimensional tuples (q equal to the ambient
    dimension). Returns 0 for affinely degenerate tuples.
    """
    v0 = vertices[0]
    edges = [[vi - v0i for vi, v0i in zip(v, v0, strict=True)] for v in vertices[1:]]
    det = int_det(edges)
    return (det > 0) - (det < 0)


def to_rational_point(point: Sequence[float], spacing: float = 1.0) -> tuple[list[int], int]:
    """
    Convert a world point to lattice units as integers over a common denominator

    Args:
        point: World coordinates
        spacing: World units per lattice step

    Returns:
        (numerators, denominator) with denominator > 0
    """
    scale = Fraction(spacing)
    coords = [Fraction(c) / scale for c in point]
    den = math.lcm(*(c.denominator for c in coords)) if coords else 1
    return [int(c * den) for c in coords], den


class FacePointError(ValueError):
    """Raised when a point lies on (or within tolerance of) a simplex face"""

    def __init__(self, message: str, barycentric: Fraction):
        super().__init__(message)
        self.barycentric = barycentric


def simplex_contains(
    vertices: Sequence[Sequence[int]],
    numerators: Sequence[int],
    den: int,
    tolerance: Fraction = FACE_TOLERANCE,
) -> bool:
    """
    Exact strict point-in-simplex test

    The query point is numerators / den in lattice units. Barycentric
    coordinates are computed with Cramer's rule on integers.

    Args:
        vertices: n+1 integer vertices of an n-simplex in n dimensions
        numerators: Point numerators
        den: Common denominator of the point
        tolerance: Barycentric band treated as "on a face"

    Returns:
        True if the point is strictly inside the simplex, False if outside
        (degenerate simplices contain nothing)

    Raises:
        FacePointError: If the point is inside the closed simplex but one of
            its barycentric coordinates is within tolerance of zero
    """
    v0 = vertices[0]
    edges = [[vi - v0i for vi, v0i in zip(v, v0, strict=True)] for v in vertices[1:]]
    det = int_det(edges)
    if det == 0:
        return False

    offset = [pi - den * v0i for pi, v0i in zip(numerators, v0, strict=True)]
    full = den * det
    weights = []
    for i in range(len(edges)):
        replaced = edges[:i] + [offset] + edges[i + 1 :]
        weights.append(int_det(replaced))
    weights.insert(0, full - sum(weights))

    if full < 0:
        weights = [-w for w in weights]
        full = -full

    band = tolerance * full
    if any(w < -band for w in weights):
        return False
    near = min(weights, key=abs)
    if abs(near) <= band:
        raise FacePointError(
            "Point lies on a simplex face", barycentric=Fraction(near, full)
        )
    return True
