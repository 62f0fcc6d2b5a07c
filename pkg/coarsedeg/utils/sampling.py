"""
Seeded sampling helpers

Every estimator in coarsedeg draws its evidence from here so that a seed fully
determines a report. Lattice samples are nested across window sizes: the
samples of a smaller window are a subset of those of a larger one, which is
what makes "the maximum stopped growing" a meaningful statement.
"""

import hashlib
import itertools
import math
import struct
from collections.abc import Sequence

import numpy as np
from scipy.stats import norm, qmc

# Irrational unit used to push test points off lattice-aligned hyperplanes
JITTER_UNIT = 1.0 / math.sqrt(2.0)


def make_rng(seed: int) -> np.random.Generator:
    """Create the project-wide seeded generator"""
    return np.random.default_rng(seed)


def lattice_points(n: int, L: int, spacing: float = 1.0, refine: int = 1) -> list[tuple[float, ...]]:
    """
    World coordinates of the (refined) lattice points of the cube [-L, L]^n

    Args:
        n: Dimension
        L: Half-width in lattice units
        spacing: World units per lattice step
        refine: Subdivisions per lattice step (1 = lattice itself)

    Returns:
        Points in lexicographic order of their integer indices
    """
    step = spacing / refine
    axis = [k * step for k in range(-L * refine, L * refine + 1)]
    return list(itertools.product(axis, repeat=n))


def uniform_in_cube(rng: np.random.Generator, n: int, half_width: float, count: int) -> np.ndarray:
    """Draw count points uniformly from [-half_width, half_width]^n"""
    return rng.uniform(-half_width, half_width, size=(count, n))


def sphere_points(
    n: int, radius: float, count: int, seed: int = 0, halfspace: bool = False
) -> list[tuple[float, ...]]:
    """
    Deterministic quasi-uniform points on the sphere of a given radius

    In the plane the points are equally spaced in angle with a seeded phase.
    In higher dimensions a scrambled Halton sequence is pushed through the
    Gaussian inverse CDF and normalized. With halfspace=True only the closed
    upper hemisphere (last coordinate >= 0) is produced.

    Args:
        n: Ambient dimension
        radius: Sphere radius (world units)
        count: Number of points
        seed: Seed for the phase / scrambling
        halfspace: Restrict to the upper hemisphere

    Returns:
        List of points
    """
    if count < 1:
        return []
    if n == 1:
        return [(radius,)] if halfspace else [(radius,), (-radius,)]

    if n == 2:
        phase = make_rng(seed).uniform(0.0, 1.0)
        arc = math.pi if halfspace else 2.0 * math.pi
        if halfspace:
            # include both ends of the half-circle
            angles = [arc * k / (count - 1) for k in range(count)] if count > 1 else [arc / 2]
        else:
            angles = [arc * (k + phase) / count for k in range(count)]
        return [(radius * math.cos(a), radius * math.sin(a)) for a in angles]

    halton = qmc.Halton(d=n, scramble=True, seed=seed)
    uniforms = np.clip(halton.random(count), 1e-12, 1.0 - 1e-12)
    gauss = norm.ppf(uniforms)
    lengths = np.linalg.norm(gauss, axis=1, keepdims=True)
    lengths[lengths == 0.0] = 1.0
    directions = gauss / lengths
    if halfspace:
        directions[:, -1] = np.abs(directions[:, -1])
    return [tuple(float(c) for c in radius * d) for d in directions]


def hash_noise(seed: int, point: Sequence[float]) -> tuple[float, ...]:
    """
    Deterministic noise vector in [-1, 1]^n keyed by (seed, point)

    Pure function of its inputs: the same point always gets the same noise,
    regardless of evaluation order or process. Signed zeros hash alike.
    """
    payload = struct.pack(f"<q{len(point)}d", seed, *(float(c) + 0.0 for c in point))
    noise = []
    for axis in range(len(point)):
        digest = hashlib.blake2b(payload, digest_size=8, salt=struct.pack("<Q", axis)).digest()
        (word,) = struct.unpack("<Q", digest)
        noise.append(2.0 * (word / 2.0**64) - 1.0)
    return tuple(noise)


# Largest lattice enumerated in full by window_samples
MAX_LATTICE_SAMPLES = 20000


def window_samples(
    n: int, L: int, spacing: float = 1.0, seed: int = 0, count: int = 1000
) -> list[tuple[float, ...]]:
    """
    Lattice points of [-L, L]^n plus count seeded uniform points

    Lattices larger than MAX_LATTICE_SAMPLES are replaced by that many
    seeded random lattice points; the corners are always included.
    """
    rng = make_rng(seed)
    if (2 * L + 1) ** n <= MAX_LATTICE_SAMPLES:
        points = lattice_points(n, L, spacing)
    else:
        indices = rng.integers(-L, L + 1, size=(MAX_LATTICE_SAMPLES, n))
        points = [tuple(float(k * spacing) for k in row) for row in indices]
        points.extend(itertools.product((-L * spacing, L * spacing), repeat=n))
    extra = uniform_in_cube(rng, n, L * spacing, count)
    points.extend(tuple(float(c) for c in row) for row in extra)
    return points
