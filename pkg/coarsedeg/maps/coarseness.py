"""
Sampled estimators for the two coarse-map conditions

A map is coarse when it is bornologous (for every R there is an S with
d(x, x') <= R  =>  d(f(x), f(x')) <= S) and proper (preimages of bounded
sets are bounded). Both quantifiers range over infinite space, so here they
are estimated on a window and reported together with the evidence used.
"""

import math
import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from coarsedeg.core.lattice import Window
from coarsedeg.maps.ast_nodes import MapSpec
from coarsedeg.maps.evaluate import evaluate
from coarsedeg.utils.aggregates import MaxAggregator
from coarsedeg.utils.parallel import ordered_map
from coarsedeg.utils.sampling import lattice_points, make_rng, uniform_in_cube

Point = tuple[float, ...]

# Slack allowed before a rung-to-rung increase counts as growth
STABILITY_TOLERANCE = 1e-12
DEFAULT_RANDOM_SAMPLES = 2000


class Verdict(Enum):
    """Outcome of a properness ladder"""

    PROPER_AT_SCALE = "proper-at-scale"
    SUSPECT = "suspect"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BornologousModulus:
    """
    Measured R ↦ S table

    Attributes:
        samples: Mapping R -> S in world units, nondecreasing in R
        window: Window the pairs were drawn from
        pairs_per_radius: Pairs sampled for each R
        seed: Sampling seed
        witnesses: Per R, the pair (p, p') attaining S
    """

    samples: dict[float, float]
    window: Window
    pairs_per_radius: int
    seed: int = 0
    witnesses: dict[float, tuple[Point, Point] | None] = field(default_factory=dict)

    def S(self, R: float) -> float:
        """Measured S for a radius in the table"""
        return self.samples[R]

    def to_dict(self) -> dict:
        return {
            "window": self.window.to_dict(),
            "pairs_per_radius": self.pairs_per_radius,
            "seed": self.seed,
            "samples": [
                {
                    "R": R,
                    "S": S,
                    "witness": [list(p) for p in self.witnesses[R]] if self.witnesses.get(R) else None,
                }
                for R, S in self.samples.items()
            ],
        }


@dataclass(frozen=True)
class PropernessReport:
    """
    Preimage bounds of the ball B(0, T) across a window ladder

    Attributes:
        ball_radius: T
        ladder: Half-widths L of the windows, strictly increasing
        max_preimage_norm: Per rung, the largest norm of a sample mapping into the ball
        sample_counts: Per rung, how many samples landed in the ball
        verdict: PROPER_AT_SCALE iff the last rung did not grow past the previous one
    """

    ball_radius: float
    ladder: tuple[int, ...]
    max_preimage_norm: tuple[float, ...]
    sample_counts: tuple[int, ...]
    verdict: Verdict

    @property
    def bound(self) -> float:
        """Preimage bound at the largest rung"""
        return self.max_preimage_norm[-1] if self.max_preimage_norm else 0.0

    def to_dict(self) -> dict:
        return {
            "ball_radius": self.ball_radius,
            "verdict": str(self.verdict),
            "rungs": [
                {"L": L, "max_preimage_norm": norm, "samples_in_ball": count}
                for L, norm, count in zip(
                    self.ladder, self.max_preimage_norm, self.sample_counts, strict=True
                )
            ],
        }


def _pair_offsets(n: int, R: float, count: int, rng: np.random.Generator) -> list[np.ndarray]:
    # half the pairs are axis-aligned at distance exactly R, the rest random inside the R-ball
    offsets = []
    aligned = (count + 1) // 2
    for k in range(aligned):
        e = np.zeros(n)
        e[k % n] = R if (k // n) % 2 == 0 else -R
        offsets.append(e)
    for _ in range(count - aligned):
        u = rng.normal(size=n)
        length = np.linalg.norm(u)
        if length == 0.0:
            u, length = np.eye(n)[0], 1.0
        offsets.append(u / length * R * rng.uniform(0.0, 1.0))
    return offsets


def estimate_bornologous_modulus(
    m: MapSpec,
    radii: Sequence[float],
    w: Window,
    pairs_per_radius: int = 200,
    seed: int = 0,
    threads: int | None = None,
) -> BornologousModulus:
    """
    Estimate S(R) for each R on sampled pairs in a window

    Base points are seeded random lattice points of the window. The
    resulting table is made monotone with a cumulative max.

    Args:
        m: Map to measure
        radii: Positive ascending radii
        w: Window to draw pairs from
        pairs_per_radius: Pairs per radius
        seed: Sampling seed
        threads: Worker cap for map evaluation

    Returns:
        BornologousModulus

    Raises:
        ValueError: If the radii are not positive and ascending
    """
    radii = [float(R) for R in radii]
    if any(R <= 0 for R in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError(f"Radii must be positive and strictly ascending, got {radii}")
    if pairs_per_radius < 1:
        raise ValueError(f"pairs_per_radius must be >= 1, got {pairs_per_radius}")

    rng = make_rng(seed)
    n = w.n
    half = w.world_half_width

    samples: dict[float, float] = {}
    witnesses: dict[float, tuple[Point, Point] | None] = {}
    running = 0.0
    running_witness = None
    for R in radii:
        offsets = _pair_offsets(n, R, pairs_per_radius, rng)
        bases = rng.integers(-w.L, w.L + 1, size=(pairs_per_radius, n)) * w.spacing
        pairs = []
        for base, offset in zip(bases, offsets, strict=True):
            p = base.astype(float)
            q = p + offset
            if np.max(np.abs(q)) > half:
                # keep both ends in the window
                q = np.clip(p - offset, -half, half)
            pairs.append((tuple(float(c) for c in p), tuple(float(c) for c in q)))

        def stretch(pair: tuple[Point, Point]) -> float:
            return math.dist(evaluate(m, pair[0]), evaluate(m, pair[1]))

        best = MaxAggregator()
        for pair, s in zip(pairs, ordered_map(stretch, pairs, threads), strict=True):
            best.update(s, pair)

        if best.result() is not None and best.result() > running:
            running, running_witness = best.result(), best.witness
        samples[R] = running
        witnesses[R] = running_witness

    return BornologousModulus(
        samples=samples,
        window=w,
        pairs_per_radius=pairs_per_radius,
        seed=seed,
        witnesses=witnesses,
    )


def _validate_ladder(window_ladder: Sequence[Window]) -> None:
    if not window_ladder:
        raise ValueError("Window ladder must not be empty")
    Ls = [w.L for w in window_ladder]
    if any(b <= a for a, b in zip(Ls, Ls[1:])):
        raise ValueError(f"Window ladder must be strictly increasing, got {Ls}")
    if len({(w.n, w.spacing) for w in window_ladder}) != 1:
        raise ValueError("All windows of a ladder must share dimension and spacing")


def ladder_samples(
    window_ladder: Sequence[Window], seed: int = 0, random_samples: int = DEFAULT_RANDOM_SAMPLES
) -> list[Point]:
    """
    Nested sample points for a window ladder

    The lattice points of the largest rung plus seeded random points drawn
    in it. The samples of a smaller rung are exactly the points of this list
    lying in that rung, so rung maxima can only grow with the ladder.
    """
    top = window_ladder[-1]
    points = lattice_points(top.n, top.L, top.spacing)
    rng = make_rng(seed)
    extra = uniform_in_cube(rng, top.n, top.world_half_width, random_samples)
    points.extend(tuple(float(c) for c in row) for row in extra)
    return points


def preimage_profile(
    image_norms: Callable[[Point], float],
    T: float,
    window_ladder: Sequence[Window],
    seed: int = 0,
    random_samples: int = DEFAULT_RANDOM_SAMPLES,
    threads: int | None = None,
) -> PropernessReport:
    """
    Properness ladder for any point function reporting an image norm

    Args:
        image_norms: x ↦ |f(x)|; a family reports the minimum over its t-grid
        T: Ball radius
        window_ladder: Strictly increasing windows
        seed: Sampling seed
        random_samples: Random points drawn in the largest rung
        threads: Worker cap

    Returns:
        PropernessReport
    """
    _validate_ladder(window_ladder)
    points = ladder_samples(window_ladder, seed, random_samples)
    norms = ordered_map(image_norms, points, threads)
    inside = [p for p, r in zip(points, norms, strict=True) if r <= T]

    maxima: list[float] = []
    counts: list[int] = []
    for w in window_ladder:
        half = w.world_half_width
        in_rung = [p for p in inside if max(abs(c) for c in p) <= half]
        if not in_rung:
            warnings.warn(
                f"No sample of window L={w.L} maps into the ball of radius {T}",
                UserWarning,
                stacklevel=3,
            )
        maxima.append(max((math.hypot(*p) for p in in_rung), default=0.0))
        counts.append(len(in_rung))

    if len(maxima) >= 2 and maxima[-1] <= maxima[-2] + STABILITY_TOLERANCE:
        verdict = Verdict.PROPER_AT_SCALE
    else:
        verdict = Verdict.SUSPECT

    return PropernessReport(
        ball_radius=T,
        ladder=tuple(w.L for w in window_ladder),
        max_preimage_norm=tuple(maxima),
        sample_counts=tuple(counts),
        verdict=verdict,
    )


def check_properness(
    m: MapSpec,
    T: float,
    window_ladder: Sequence[Window],
    seed: int = 0,
    random_samples: int = DEFAULT_RANDOM_SAMPLES,
    threads: int | None = None,
) -> PropernessReport:
    """
    Estimate whether preimages of B(0, T) stay bounded

    For every rung, the largest norm among sampled points mapping into the
    ball. The verdict is proper-at-scale iff this stops increasing across
    the last two rungs; a single rung is always suspect.

    Args:
        m: Map to test
        T: Ball radius
        window_ladder: Strictly increasing windows of one dimension and spacing
        seed: Sampling seed
        random_samples: Random points drawn in the largest rung
        threads: Worker cap

    Returns:
        PropernessReport

    Raises:
        ValueError: If the ladder is empty or not strictly increasing
    """
    return preimage_profile(
        lambda p: math.hypot(*evaluate(m, p)),
        T,
        window_ladder,
        seed=seed,
        random_samples=random_samples,
        threads=threads,
    )
