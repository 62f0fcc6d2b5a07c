"""
Coarse fixed point witnesses

A map f has a coarse fixed point witness with budget R when there are points
x_i escaping to infinity and directions ζ_i such that both x_i and f(x_i) lie
within R of the ray {s·ζ_i : s >= 0}. The search scans spheres of ascending
radius and keeps, per radius, the point whose best common ray is closest.
A failed search means "refuted at this budget and ladder", nothing more.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from coarsedeg.core.lattice import Window
from coarsedeg.maps.ast_nodes import MapSpec
from coarsedeg.maps.coarseness import estimate_bornologous_modulus
from coarsedeg.maps.evaluate import MapEvaluationError, evaluate
from coarsedeg.utils.aggregates import MinAggregator
from coarsedeg.utils.parallel import ordered_map
from coarsedeg.utils.sampling import sphere_points

Point = tuple[float, ...]

DEFAULT_SLERP_SAMPLES = 32
VERIFY_TOLERANCE = 1e-9
# Relative slack between |x| and the radius it is listed under
RADIUS_TOLERANCE = 1e-6
# Window half-width used when measuring the budget modulus
BUDGET_WINDOW = 16


class InvalidDirectionError(ValueError):
    """Raised when a ray direction is the zero vector"""

    pass


class DegeneratePairError(ValueError):
    """Raised when both points of a pair are the origin"""

    pass


@dataclass(frozen=True)
class WitnessEntry:
    """One escaping point with its ray and both distances"""

    r: float
    x: Point
    zeta: Point
    dx: float
    dfx: float

    def to_dict(self) -> dict:
        return {"r": self.r, "x": list(self.x), "zeta": list(self.zeta), "dx": self.dx, "dfx": self.dfx}


@dataclass(frozen=True)
class RayWitness:
    """
    Witness sequence for the coarse fixed point property

    Attributes:
        R: Budget
        entries: One entry per radius, radii strictly increasing
    """

    R: float
    entries: tuple[WitnessEntry, ...]

    def to_dict(self) -> dict:
        return {"R": self.R, "entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, doc: dict) -> "RayWitness":
        entries = tuple(
            WitnessEntry(
                r=float(e["r"]),
                x=tuple(float(c) for c in e["x"]),
                zeta=tuple(float(c) for c in e["zeta"]),
                dx=float(e["dx"]),
                dfx=float(e["dfx"]),
            )
            for e in doc["entries"]
        )
        return cls(R=float(doc["R"]), entries=entries)


@dataclass(frozen=True)
class RadiusScan:
    """Best point found on one sphere"""

    r: float
    best_max_dist: float
    x: Point
    fx: Point
    zeta: Point

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "best_max_dist": self.best_max_dist,
            "x": list(self.x),
            "fx": list(self.fx),
            "zeta": list(self.zeta),
        }


@dataclass(frozen=True)
class SearchVerdict:
    """
    Outcome of a witness search

    Attributes:
        found: True if every radius had a point within budget
        budget: The budget R
        scans: Per radius, the best achievable max-distance and where
        witness: The assembled witness when found
    """

    found: bool
    budget: float
    scans: tuple[RadiusScan, ...]
    witness: RayWitness | None = None
    points_per_sphere: int = 0
    seed: int = 0
    halfspace: bool = False

    @property
    def label(self) -> str:
        return "found" if self.found else "refuted at budget/ladder"

    @property
    def failing_radii(self) -> list[float]:
        return [s.r for s in self.scans if s.best_max_dist > self.budget]

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "label": self.label,
            "budget": self.budget,
            "points_per_sphere": self.points_per_sphere,
            "seed": self.seed,
            "halfspace": self.halfspace,
            "scans": [s.to_dict() for s in self.scans],
            "witness": self.witness.to_dict() if self.witness else None,
        }


def _unit(v: Sequence[float]) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0 or not math.isfinite(norm):
        raise InvalidDirectionError(f"Direction {tuple(v)} cannot be normalized")
    return arr / norm


def ray_distance(p: Sequence[float], zeta: Sequence[float]) -> float:
    """
    Distance from p to the ray {s·ζ : s >= 0}

    ζ is normalized first. Points behind the origin are measured to the origin.

    Raises:
        InvalidDirectionError: If ζ is zero

    Examples:
        >>> ray_distance((3.0, 4.0), (1.0, 0.0))
        4.0
        >>> ray_distance((-3.0, 0.0), (1.0, 0.0))
        3.0
    """
    u = _unit(zeta)
    x = np.asarray(p, dtype=float)
    s = float(np.dot(x, u))
    if s < 0:
        return float(np.linalg.norm(x))
    return float(np.linalg.norm(x - s * u))


def _slerp(a: np.ndarray, b: np.ndarray, count: int) -> list[np.ndarray]:
    cos = float(np.clip(np.dot(a, b), -1.0, 1.0))
    omega = math.acos(cos)
    sin = math.sin(omega)
    if sin < 1e-12:
        return []
    return [
        (math.sin((1 - s) * omega) * a + math.sin(s * omega) * b) / sin
        for s in (k / (count + 1) for k in range(1, count + 1))
    ]


def best_common_ray(
    x: Sequence[float], y: Sequence[float], slerp: int = DEFAULT_SLERP_SAMPLES
) -> tuple[Point, float]:
    """
    Best single ray for a pair of points among a candidate set

    Candidates are dir(x), dir(y), the bisector and `slerp` great-circle
    samples between dir(x) and dir(y). Ties keep the earlier candidate.

    Returns:
        (ζ, max(ray_distance(x, ζ), ray_distance(y, ζ)))

    Raises:
        DegeneratePairError: If both points are the origin
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    directions = [_unit(v) for v in (xa, ya) if np.any(v != 0.0)]
    if not directions:
        raise DegeneratePairError("Both points are the origin; no ray is preferred")

    candidates = list(directions)
    if len(directions) == 2:
        dx, dy = directions
        if np.any(dx + dy != 0.0):
            candidates.append(_unit(dx + dy))
        candidates.extend(_slerp(dx, dy, slerp))

    best = MinAggregator()
    for order, zeta in enumerate(candidates):
        value = max(ray_distance(xa, zeta), ray_distance(ya, zeta))
        best.update(value, order)
    zeta = candidates[best.witness]
    return tuple(float(c) for c in zeta), float(best.result())


def _validate_radii(radii: Sequence[float]) -> list[float]:
    radii = [float(r) for r in radii]
    if not radii:
        raise ValueError("At least one radius is required")
    if any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError(f"Radii must be positive and strictly ascending, got {radii}")
    return radii


def _scan_sphere(
    m: MapSpec, r: float, count: int, seed: int, halfspace: bool, slerp: int
) -> RadiusScan:
    best = MinAggregator()
    for k, x in enumerate(sphere_points(m.domain_dim, r, count, seed=seed, halfspace=halfspace)):
        fx = evaluate(m, x)
        try:
            zeta, dist = best_common_ray(x, fx, slerp=slerp)
        except InvalidDirectionError as e:
            raise MapEvaluationError(f"Image of {x} is not finite: {fx}") from e
        best.update(dist, (k, x, fx, zeta))
    _, x, fx, zeta = best.witness
    return RadiusScan(r=r, best_max_dist=best.result(), x=x, fx=fx, zeta=zeta)


def search_witness(
    m: MapSpec,
    R_budget: float,
    radii: Sequence[float],
    points_per_sphere: int = 256,
    seed: int = 0,
    halfspace: bool = False,
    slerp: int = DEFAULT_SLERP_SAMPLES,
    threads: int | None = None,
) -> SearchVerdict:
    """
    Search for a coarse fixed point witness on a ladder of spheres

    Args:
        m: Map to search
        R_budget: Distance budget R > 0
        radii: Strictly ascending sphere radii
        points_per_sphere: Quasi-uniform points per sphere
        seed: Seed of the sphere point scheme
        halfspace: Scan only the closed upper hemisphere (half-space maps)
        slerp: Candidate ray resolution between dir(x) and dir(f(x))
        threads: Worker cap; radii are scanned independently

    Returns:
        SearchVerdict with per-radius minima and, when found, a RayWitness

    Raises:
        ValueError: On an invalid budget or radius ladder
        MapEvaluationError: If the map fails on a sphere point
    """
    if not R_budget > 0:
        raise ValueError(f"Budget must be positive, got {R_budget}")
    radii = _validate_radii(radii)
    if points_per_sphere < 1:
        raise ValueError(f"points_per_sphere must be >= 1, got {points_per_sphere}")

    scans = tuple(
        ordered_map(
            lambda r: _scan_sphere(m, r, points_per_sphere, seed, halfspace, slerp),
            radii,
            threads,
        )
    )
    found = all(s.best_max_dist <= R_budget for s in scans)
    witness = None
    if found:
        witness = RayWitness(
            R=R_budget,
            entries=tuple(
                WitnessEntry(
                    r=s.r,
                    x=s.x,
                    zeta=s.zeta,
                    dx=ray_distance(s.x, s.zeta),
                    dfx=ray_distance(s.fx, s.zeta),
                )
                for s in scans
            ),
        )
    return SearchVerdict(
        found=found,
        budget=R_budget,
        scans=scans,
        witness=witness,
        points_per_sphere=points_per_sphere,
        seed=seed,
        halfspace=halfspace,
    )


def verify_witness(m: MapSpec, w: RayWitness, tolerance: float = VERIFY_TOLERANCE) -> bool:
    """
    Independently re-check a witness

    True iff the radii strictly increase, every point x lies on the sphere
    of its stated radius, and, for every entry, both the stored and the
    recomputed distances of x and m(x) to the ray are within the budget.
    """
    if not w.entries:
        return False
    radii = [e.r for e in w.entries]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        return False
    # the points themselves must escape, not just their labels
    norms = [math.hypot(*e.x) for e in w.entries]
    if any(abs(norm - r) > RADIUS_TOLERANCE * max(1.0, r) for norm, r in zip(norms, radii)):
        return False
    if any(b <= a for a, b in zip(norms, norms[1:])):
        return False

    limit = w.R * (1.0 + tolerance) + tolerance
    for e in w.entries:
        try:
            dx = ray_distance(e.x, e.zeta)
            dfx = ray_distance(evaluate(m, e.x), e.zeta)
        except (InvalidDirectionError, MapEvaluationError, ValueError):
            return False
        if max(e.dx, e.dfx, dx, dfx) > limit:
            return False
    return True


def theorem_budget(
    g: MapSpec, spacing: float = 1.0, seed: int = 0, window: Window | None = None
) -> float:
    """
    Budget for fold witness searches: 4·spacing + S_g(1)

    S_g(1) is the measured bornologous modulus of g at radius 1.
    """
    window = window or Window(n=g.domain_dim, L=BUDGET_WINDOW, spacing=spacing)
    modulus = estimate_bornologous_modulus(g, [1.0], window, pairs_per_radius=200, seed=seed)
    return 4.0 * spacing + modulus.S(1.0)
