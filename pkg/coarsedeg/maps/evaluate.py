"""
Map evaluation

evaluate() is a pure function of (map, point): perturbations draw their
noise from a hash of the point, so a MapSpec behaves like an ordinary
deterministic function everywhere in the library.
"""

import math
from collections.abc import Callable, Sequence

from coarsedeg.core.chains import LatticePoint
from coarsedeg.maps.ast_nodes import (
    Antipodal,
    BinOp,
    Blend,
    Call,
    Composition,
    Expr,
    Expression,
    Fold,
    Identity,
    Linear,
    MapSpec,
    Number,
    Perturbation,
    Radial,
    Reflection,
    Rotation,
    Translation,
    UnaryOp,
    Var,
)
from coarsedeg.utils.sampling import hash_noise, make_rng

Point = tuple[float, ...]

FOLD_CHECK_SAMPLES = 1000
FOLD_CHECK_RADIUS = 100.0


class MapEvaluationError(ArithmeticError):
    """Raised when a map cannot be evaluated at a point"""

    def __init__(self, message: str, coordinate: int | None = None):
        super().__init__(message)
        self.coordinate = coordinate


class DomainViolationError(ValueError):
    """Raised when a half-space map is found to leave the half-space"""

    def __init__(self, message: str, point: Point | None = None):
        super().__init__(message)
        self.point = point


def evaluate_expr(node: Expr, p: Sequence[float], coordinate: int = 0) -> float:
    """Evaluate one expression tree at p; `coordinate` labels errors"""
    match node:
        case Number(value=value):
            return value
        case Var(index=index):
            return float(p[index])
        case UnaryOp(operand=operand):
            return -evaluate_expr(operand, p, coordinate)
        case BinOp(op=op, left=left, right=right):
            a = evaluate_expr(left, p, coordinate)
            b = evaluate_expr(right, p, coordinate)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if b == 0:
                raise MapEvaluationError(
                    f"Division by zero in output coordinate {coordinate + 1} at {tuple(p)}",
                    coordinate=coordinate,
                )
            return a / b
        case Call(func=func, args=args):
            values = [evaluate_expr(a, p, coordinate) for a in args]
            if func == "abs":
                return abs(values[0])
            if func == "min":
                return min(values)
            if func == "max":
                return max(values)
            if func == "floor":
                return float(math.floor(values[0]))
            if values[0] < 0:
                raise MapEvaluationError(
                    f"sqrt of negative value in output coordinate {coordinate + 1} at {tuple(p)}",
                    coordinate=coordinate,
                )
            return math.sqrt(values[0])
    raise MapEvaluationError(f"Unknown expression node {node!r}", coordinate=coordinate)


def evaluate(m: MapSpec, p: Sequence[float]) -> Point:
    """
    Evaluate a map at a world point

    Args:
        m: Map description
        p: Point with len(p) == m.domain_dim

    Returns:
        The image point

    Raises:
        ValueError: On a dimension mismatch
        MapEvaluationError: On arithmetic failure inside an expression map
    """
    if len(p) != m.domain_dim:
        raise ValueError(f"Point {tuple(p)} has dimension {len(p)}, map expects {m.domain_dim}")

    match m:
        case Identity():
            return tuple(float(c) for c in p)
        case Reflection(axis=axis):
            return tuple(-float(c) if i == axis else float(c) for i, c in enumerate(p))
        case Antipodal():
            return tuple(-float(c) for c in p)
        case Translation(vector=vector):
            return tuple(float(c) + v for c, v in zip(p, vector, strict=True))
        case Linear(matrix=matrix):
            return tuple(
                math.fsum(a * float(c) for a, c in zip(row, p, strict=True)) for row in matrix
            )
        case Rotation(angle=angle, plane=(i, j)):
            cos, sin = math.cos(angle), math.sin(angle)
            out = [float(c) for c in p]
            out[i] = cos * p[i] - sin * p[j]
            out[j] = sin * p[i] + cos * p[j]
            return tuple(out)
        case Fold(inner=inner):
            folded = tuple(float(c) for c in p[:-1]) + (abs(float(p[-1])),)
            return evaluate(inner, folded)
        case Radial(scale=scale, power=power):
            r = math.hypot(*p)
            if r == 0:
                return tuple(0.0 for _ in p)
            factor = scale * r ** (power - 1.0)
            return tuple(factor * float(c) for c in p)
        case Perturbation(base=base, eps=eps, seed=seed):
            image = evaluate(base, p)
            noise = hash_noise(seed, p)
            return tuple(y + eps * u for y, u in zip(image, noise, strict=True))
        case Composition(parts=parts):
            out = tuple(float(c) for c in p)
            for part in parts:
                out = evaluate(part, out)
            return out
        case Expression(ast=ast):
            return tuple(evaluate_expr(e, p, k) for k, e in enumerate(ast.outputs))
        case Blend(parts=parts):
            total = [0.0] * len(p)
            for weight, part in parts:
                image = evaluate(part, p)
                total = [acc + weight * y for acc, y in zip(total, image, strict=True)]
            return tuple(total)
    raise ValueError(f"Unsupported map kind: {type(m).__name__}")


def fold_to_full_space(f: MapSpec, samples: int = FOLD_CHECK_SAMPLES, seed: int = 0) -> Fold:
    """
    Fold a half-space self-map into an even map of the full space

    g(x, t) = f(x, |t|). The half-space condition (f keeps the last
    coordinate non-negative) is checked on seeded samples, not proved.

    Args:
        f: Map of R^n x [0, inf) into itself, described on R^(n+1)
        samples: Number of seeded half-space points to check
        seed: Sampling seed

    Returns:
        The fold map

    Raises:
        DomainViolationError: If a sample leaves the half-space
    """
    n = f.domain_dim
    rng = make_rng(seed)
    points = rng.uniform(-FOLD_CHECK_RADIUS, FOLD_CHECK_RADIUS, size=(samples, n))
    points[:, -1] = abs(points[:, -1])
    # the boundary t = 0 is part of the half-space
    points[: samples // 10, -1] = 0.0
    for row in points:
        p = tuple(float(c) for c in row)
        image = evaluate(f, p)
        if image[-1] < 0:
            raise DomainViolationError(
                f"Map {f} leaves the half-space: f{p} = {image}", point=p
            )
    return Fold(domain_dim=n, inner=f)


def vertex_map(m: MapSpec, spacing: float = 1.0) -> Callable[[LatticePoint], LatticePoint]:
    """
    Lattice approximation of a map

    v ↦ round(m(v·spacing) / spacing) per coordinate, rounding half toward
    negative infinity. Results are memoized per lattice point.

    Args:
        m: Map description
        spacing: World units per lattice step

    Returns:
        A function from lattice points to lattice points
    """
    cache: dict[LatticePoint, LatticePoint] = {}

    def apply(v: LatticePoint) -> LatticePoint:
        image = cache.get(v)
        if image is None:
            world = evaluate(m, tuple(c * spacing for c in v))
            image = tuple(round_half_down(y / spacing) for y in world)
            cache[v] = image
        return image

    return apply


def round_half_down(y: float) -> int:
    """Round to the nearest integer, ties toward negative infinity"""
    if not math.isfinite(y):
        raise MapEvaluationError(f"Non-finite image coordinate {y}")
    return math.ceil(y - 0.5)
