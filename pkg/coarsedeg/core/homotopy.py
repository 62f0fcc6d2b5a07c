"""
Coarse homotopies

A coarse homotopy is a family h_t, t in [0, 1], that is uniformly proper,
uniformly bornologous and uniformly pseudocontinuous. Each condition is
measured here on a finite t-grid and a window (ladder), and every report
carries the grids it was measured on.

The linear homotopy H_t(x) = t·h(x) - (1-t)·x joins the antipodal map to h.
If it stays proper, h is coarsely homotopic to the antipodal map. The
triangle bound check tests the geometric estimate behind that argument:
whenever the segment from -x to h(x) meets B(0, T) and |x| >= 2T, h(x) is
within C·T of the ray through x, with C = 2(1 + K).
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

from coarsedeg.core.cfpp import ray_distance
from coarsedeg.core.lattice import Window
from coarsedeg.maps.ast_nodes import Antipodal, Blend, MapSpec
from coarsedeg.maps.coarseness import (
    DEFAULT_RANDOM_SAMPLES,
    BornologousModulus,
    PropernessReport,
    estimate_bornologous_modulus,
    preimage_profile,
)
from coarsedeg.maps.evaluate import evaluate
from coarsedeg.utils.aggregates import MaxAggregator
from coarsedeg.utils.parallel import ordered_map
from coarsedeg.utils.sampling import make_rng, uniform_in_cube, window_samples

Point = tuple[float, ...]

DEFAULT_T_STEPS = 16
BOUND_TOLERANCE = 1e-9


class FamilyKind(Enum):
    LINEAR = "linear"
    GENERIC = "generic"

    def __str__(self) -> str:
        return self.value


def make_t_grid(steps: int = DEFAULT_T_STEPS) -> tuple[float, ...]:
    """The grid k/steps, k = 0..steps"""
    if steps < 1:
        raise ValueError(f"t-grid needs at least one step, got {steps}")
    return tuple(k / steps for k in range(steps + 1))


def _validate_t_grid(t_grid: Sequence[float], minimum: int = 1) -> list[float]:
    grid = [float(t) for t in t_grid]
    if len(grid) < minimum:
        raise ValueError(f"t-grid needs at least {minimum} knot(s), got {len(grid)}")
    if any(not 0.0 <= t <= 1.0 for t in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"t-grid must be strictly increasing inside [0, 1], got {grid}")
    return grid


@dataclass(frozen=True)
class HomotopyFamily:
    """
    A family t ↦ H_t of maps of R^n

    Attributes:
        kind: LINEAR (H_t = t·h - (1-t)·id) or GENERIC (piecewise linear in t)
        knots: (t, map) pairs; for LINEAR the single knot (1, h)
    """

    kind: FamilyKind
    knots: tuple[tuple[float, MapSpec], ...]

    @property
    def dim(self) -> int:
        return self.knots[0][1].domain_dim

    @property
    def base(self) -> MapSpec:
        """The map h of a linear family"""
        return self.knots[-1][1]

    def at(self, t: float) -> MapSpec:
        """
        The map H_t

        Raises:
            ValueError: If t is outside [0, 1]
        """
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t must lie in [0, 1], got {t}")

        if self.kind is FamilyKind.LINEAR:
            h = self.base
            if t == 0.0:
                return Antipodal(domain_dim=self.dim)
            if t == 1.0:
                return h
            return Blend(domain_dim=self.dim, parts=((t, h), (1.0 - t, Antipodal(domain_dim=self.dim))))

        for (t0, m0), (t1, m1) in zip(self.knots, self.knots[1:]):
            if t == t0:
                return m0
            if t == t1:
                return m1
            if t0 < t < t1:
                s = (t - t0) / (t1 - t0)
                return Blend(domain_dim=self.dim, parts=((1.0 - s, m0), (s, m1)))
        return self.knots[0][1]

    def to_dict(self) -> dict:
        return {
            "kind": str(self.kind),
            "knots": [{"t": t, "map": str(m)} for t, m in self.knots],
        }


def linear_homotopy(h: MapSpec) -> HomotopyFamily:
    """
    The linear homotopy from the antipodal map to h

    H_t(x) = t·h(x) - (1-t)·x, so H_0 = antipodal and H_1 = h exactly.
    """
    return HomotopyFamily(kind=FamilyKind.LINEAR, knots=((1.0, h),))


def generic_homotopy(knots: Sequence[tuple[float, MapSpec]]) -> HomotopyFamily:
    """
    Piecewise-linear family through the given knots

    Args:
        knots: (t, map) pairs with t strictly increasing from 0 to 1

    Raises:
        ValueError: On malformed knots or mismatched dimensions
    """
    knots = tuple((float(t), m) for t, m in knots)
    if len(knots) < 2:
        raise ValueError("A generic homotopy needs at least two knots")
    ts = [t for t, _ in knots]
    if ts[0] != 0.0 or ts[-1] != 1.0 or any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError(f"Knot times must increase strictly from 0 to 1, got {ts}")
    if len({m.domain_dim for _, m in knots}) != 1:
        raise ValueError("All knots of a homotopy must share one dimension")
    return HomotopyFamily(kind=FamilyKind.GENERIC, knots=knots)


@dataclass(frozen=True)
class Pseudocontinuity:
    """
    Largest jump d(H_t(x), H_t'(x)) between adjacent knots

    Attributes:
        R: Max jump on the t-grid
        step: Largest grid step
        refined_R: Max jump on the grid with every step halved
        refined_step: Largest step of the refined grid
        witness: (x, t, t') attaining R
    """

    R: float
    step: float
    refined_R: float
    refined_step: float
    witness: tuple[Point, float, float] | None = None

    def to_dict(self) -> dict:
        return {
            "R": self.R,
            "step": self.step,
            "refined_R": self.refined_R,
            "refined_step": self.refined_step,
            "witness": (
                {"x": list(self.witness[0]), "t": self.witness[1], "t_next": self.witness[2]}
                if self.witness
                else None
            ),
        }


@dataclass(frozen=True)
class TriangleBound:
    """
    Result of the triangle bound check

    Attributes:
        T: Ball radius
        K: Growth constant, |h(x)| <= K·max(|x|, 1) on the samples
        C: 2·(1 + K)
        A: Slope of the affine bound |h(x)| <= A·|x| + b on the same samples
        b: |h(0)|
        tested: Samples with |x| >= 2T whose segment [-x, h(x)] meets B(0, T)
        violations: Samples breaking the ray bound or the foot inequality
    """

    T: float
    K: float
    C: float
    A: float
    b: float
    tested: int
    samples: int
    seed: int
    window: Window
    violations: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "K": self.K,
            "C": self.C,
            "A": self.A,
            "b": self.b,
            "tested": self.tested,
            "samples": self.samples,
            "seed": self.seed,
            "window": self.window.to_dict(),
            "violations": self.violations,
        }


@dataclass(frozen=True)
class HomotopyReport:
    """All three uniform conditions of a family, with their grids"""

    family: HomotopyFamily
    t_grid: tuple[float, ...]
    window: Window
    ladder: tuple[int, ...]
    seed: int
    bornologous: BornologousModulus
    properness: PropernessReport
    pseudocontinuity: Pseudocontinuity
    lemma_bound: dict[float, float] | None = None
    triangle: TriangleBound | None = None

    @property
    def lemma_bound_holds(self) -> bool | None:
        if self.lemma_bound is None:
            return None
        return all(
            self.bornologous.S(R) <= bound * (1.0 + BOUND_TOLERANCE)
            for R, bound in self.lemma_bound.items()
        )

    def to_dict(self) -> dict:
        return {
            "family": self.family.to_dict(),
            "t_grid": list(self.t_grid),
            "window": self.window.to_dict(),
            "ladder": list(self.ladder),
            "seed": self.seed,
            "bornologous": self.bornologous.to_dict(),
            "lemma_bound": (
                [{"R": R, "bound": b} for R, b in self.lemma_bound.items()]
                if self.lemma_bound is not None
                else None
            ),
            "lemma_bound_holds": self.lemma_bound_holds,
            "properness": self.properness.to_dict(),
            "pseudocontinuity": self.pseudocontinuity.to_dict(),
            "triangle": self.triangle.to_dict() if self.triangle else None,
        }


def check_uniformly_bornologous(
    fam: HomotopyFamily,
    radii: Sequence[float],
    t_grid: Sequence[float],
    w: Window,
    seed: int = 0,
    pairs_per_radius: int = 200,
    threads: int | None = None,
) -> BornologousModulus:
    """
    Uniform modulus: S(R) = max over the t-grid of the modulus of H_t

    Every H_t is measured on the same seeded pairs.
    """
    grid = _validate_t_grid(t_grid)
    samples: dict[float, float] = {}
    witnesses: dict = {}
    for t in grid:
        modulus = estimate_bornologous_modulus(
            fam.at(t), radii, w, pairs_per_radius=pairs_per_radius, seed=seed, threads=threads
        )
        for R, S in modulus.samples.items():
            if R not in samples or S > samples[R]:
                samples[R] = S
                witnesses[R] = modulus.witnesses.get(R)
    return BornologousModulus(
        samples=samples,
        window=w,
        pairs_per_radius=pairs_per_radius,
        seed=seed,
        witnesses=witnesses,
    )


def check_uniformly_proper(
    fam: HomotopyFamily,
    T: float,
    window_ladder: Sequence[Window],
    t_grid: Sequence[float],
    seed: int = 0,
    random_samples: int = DEFAULT_RANDOM_SAMPLES,
    threads: int | None = None,
) -> PropernessReport:
    """
    Uniform properness: bound on |x| over samples with |H_t(x)| <= T for some t

    Uses the same nested ladder samples and stabilization verdict as
    check_properness.
    """
    maps = [fam.at(t) for t in _validate_t_grid(t_grid)]

    def smallest_image(x: Point) -> float:
        return min(math.hypot(*evaluate(m, x)) for m in maps)

    return preimage_profile(
        smallest_image, T, window_ladder, seed=seed, random_samples=random_samples, threads=threads
    )


def _max_jump(
    fam: HomotopyFamily, grid: Sequence[float], points: Sequence[Point], threads: int | None
) -> tuple[float, tuple[Point, float, float] | None]:
    maps = [fam.at(t) for t in grid]

    def jumps(x: Point) -> tuple[float, int]:
        images = [evaluate(m, x) for m in maps]
        best, where = 0.0, 0
        for k in range(len(images) - 1):
            jump = math.dist(images[k], images[k + 1])
            if jump > best:
                best, where = jump, k
        return best, where

    best = MaxAggregator()
    for x, (jump, k) in zip(points, ordered_map(jumps, points, threads), strict=True):
        best.update(jump, (x, grid[k], grid[k + 1]))
    return best.result() or 0.0, best.witness


def check_pseudocontinuity(
    fam: HomotopyFamily,
    t_grid: Sequence[float],
    w: Window,
    seed: int = 0,
    samples: int = 1000,
    threads: int | None = None,
) -> Pseudocontinuity:
    """
    Max jump between adjacent t-knots over window samples

    The same samples are measured again on the grid with every step halved.
    """
    grid = _validate_t_grid(t_grid, minimum=2)
    points = window_samples(w.n, w.L, w.spacing, seed=seed, count=samples)

    refined = [grid[0]]
    for a, b in zip(grid, grid[1:]):
        refined.extend([(a + b) / 2.0, b])

    R, witness = _max_jump(fam, grid, points, threads)
    refined_R, _ = _max_jump(fam, refined, points, threads)
    return Pseudocontinuity(
        R=R,
        step=max(b - a for a, b in zip(grid, grid[1:])),
        refined_R=refined_R,
        refined_step=max(b - a for a, b in zip(refined, refined[1:])),
        witness=witness,
    )


def growth_constant(h: MapSpec, w: Window, seed: int = 0, samples: int = 1000) -> float:
    """
    Smallest K with |h(x)| <= K·max(|x|, 1) over window samples

    Examples:
        >>> growth_constant(Antipodal(domain_dim=2), Window(n=2, L=4))
        1.0
    """
    return max(
        math.hypot(*evaluate(h, x)) / max(math.hypot(*x), 1.0)
        for x in window_samples(w.n, w.L, w.spacing, seed=seed, count=samples)
    )


def affine_growth(h: MapSpec, w: Window, seed: int = 0, samples: int = 1000) -> tuple[float, float]:
    """
    Affine growth bound |h(x)| <= A·|x| + b with b = |h(0)|

    Returns:
        (A, b), A the smallest slope valid on the window samples
    """
    b = math.hypot(*evaluate(h, (0.0,) * w.n))
    A = 0.0
    for x in window_samples(w.n, w.L, w.spacing, seed=seed, count=samples):
        r = math.hypot(*x)
        if r > 0:
            A = max(A, (math.hypot(*evaluate(h, x)) - b) / r)
    return A, b


def closest_point_to_origin(a: Sequence[float], b: Sequence[float]) -> Point:
    """Point of the segment [a, b] nearest the origin"""
    d = [bi - ai for ai, bi in zip(a, b, strict=True)]
    dd = math.fsum(c * c for c in d)
    if dd == 0.0:
        return tuple(float(c) for c in a)
    s = -math.fsum(ai * di for ai, di in zip(a, d)) / dd
    s = min(max(s, 0.0), 1.0)
    return tuple(ai + s * di for ai, di in zip(a, d))


def segment_meets_ball(a: Sequence[float], b: Sequence[float], T: float) -> bool:
    """
    True iff the closed segment [a, b] comes within T of the origin

    Examples:
        >>> segment_meets_ball((-2.0, 0.0), (2.0, 0.0), 0.1)
        True
        >>> segment_meets_ball((0.0, 5.0), (5.0, 5.0), 1.0)
        False
    """
    if T < 0:
        raise ValueError(f"Ball radius must be non-negative, got {T}")
    return math.hypot(*closest_point_to_origin(a, b)) <= T


def triangle_bound_check(
    h: MapSpec, T: float, w: Window, num_samples: int = 10000, seed: int = 0
) -> TriangleBound:
    """
    Check the similar-triangle estimate on seeded samples

    For every sample x with |x| >= 2T whose segment [-x, h(x)] meets
    B(0, T), checks ray_distance(h(x), x) <= C·T, and that the segment
    point p nearest the origin satisfies d(-x, p) >= |x| / 2 when p is in
    the ball.

    Args:
        h: Map of R^n
        T: Ball radius, T > 0
        w: Window the samples are drawn from
        num_samples: Number of seeded samples
        seed: Sampling seed

    Returns:
        TriangleBound with every violation listed
    """
    if not T > 0:
        raise ValueError(f"Ball radius must be positive, got {T}")

    rng = make_rng(seed)
    xs = [tuple(float(c) for c in row) for row in uniform_in_cube(rng, w.n, w.world_half_width, num_samples)]
    images = [evaluate(h, x) for x in xs]

    K = growth_constant(h, w, seed=seed)
    for x, hx in zip(xs, images, strict=True):
        K = max(K, math.hypot(*hx) / max(math.hypot(*x), 1.0))
    A, b = affine_growth(h, w, seed=seed)
    for x, hx in zip(xs, images, strict=True):
        r = math.hypot(*x)
        if r > 0:
            A = max(A, (math.hypot(*hx) - b) / r)
    C = 2.0 * (1.0 + K)
    limit = C * T * (1.0 + BOUND_TOLERANCE)

    tested = 0
    violations: list[dict] = []
    for x, hx in zip(xs, images, strict=True):
        norm = math.hypot(*x)
        minus_x = tuple(-c for c in x)
        if norm < 2 * T or not segment_meets_ball(minus_x, hx, T):
            continue
        tested += 1

        distance = ray_distance(hx, x)
        if distance > limit:
            violations.append(
                {"kind": "ray", "x": list(x), "hx": list(hx), "distance": distance, "bound": C * T}
            )

        foot = closest_point_to_origin(minus_x, hx)
        if math.hypot(*foot) <= T and math.dist(minus_x, foot) < norm / 2.0 * (1.0 - BOUND_TOLERANCE):
            violations.append(
                {
                    "kind": "foot",
                    "x": list(x),
                    "hx": list(hx),
                    "distance": math.dist(minus_x, foot),
                    "bound": norm / 2.0,
                }
            )

    return TriangleBound(
        T=T,
        K=K,
        C=C,
        A=A,
        b=b,
        tested=tested,
        samples=num_samples,
        seed=seed,
        window=w,
        violations=violations,
    )


def lemma_bornologous_bound(modulus_h: BornologousModulus) -> dict[float, float]:
    """
    The estimate R + S_h(R) for the uniform modulus of a linear homotopy
    """
    return {R: R + S for R, S in modulus_h.samples.items()}


def homotopy_report(
    fam: HomotopyFamily,
    radii: Sequence[float],
    T: float,
    window_ladder: Sequence[Window],
    t_grid: Sequence[float] | None = None,
    seed: int = 0,
    pairs_per_radius: int = 200,
    samples: int = 1000,
    triangle_samples: int = 10000,
    threads: int | None = None,
) -> HomotopyReport:
    """
    Measure all three uniform conditions of a family

    The bornologous and pseudocontinuity checks run on the largest rung of
    the ladder. Linear families also get the R + S_h(R) estimate and the
    triangle bound check.
    """
    grid = tuple(t_grid) if t_grid is not None else make_t_grid()
    w = window_ladder[-1]

    bornologous = check_uniformly_bornologous(
        fam, radii, grid, w, seed=seed, pairs_per_radius=pairs_per_radius, threads=threads
    )
    properness = check_uniformly_proper(
        fam, T, window_ladder, grid, seed=seed, random_samples=samples, threads=threads
    )
    pseudo = check_pseudocontinuity(fam, grid, w, seed=seed, samples=samples, threads=threads)

    lemma_bound = None
    triangle = None
    if fam.kind is FamilyKind.LINEAR:
        modulus_h = estimate_bornologous_modulus(
            fam.base, radii, w, pairs_per_radius=pairs_per_radius, seed=seed, threads=threads
        )
        lemma_bound = lemma_bornologous_bound(modulus_h)
        triangle = triangle_bound_check(fam.base, T, w, num_samples=triangle_samples, seed=seed)

    return HomotopyReport(
        family=fam,
        t_grid=grid,
        window=w,
        ladder=tuple(rung.L for rung in window_ladder),
        seed=seed,
        bornologous=bornologous,
        properness=properness,
        pseudocontinuity=pseudo,
        lemma_bound=lemma_bound,
        triangle=triangle,
    )
