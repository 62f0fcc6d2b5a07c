"""
Controlled chains on the integer lattice

A q-chain is a finite integer combination of ordered (q+1)-tuples of lattice
points. Chains are immutable values: every constructor prunes zero
coefficients and stores the terms in canonical order (lexicographic on the
flattened vertex coordinates), so equality and serialization are
deterministic.

Tuples are kept ordered and are never symmetrized; degenerate tuples are legal
terms and only lose meaning when a chain is realized geometrically.
"""

import json
import math
import numbers
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from coarsedeg.core.lattice import Window

LatticePoint = tuple[int, ...]
Simplex = tuple[LatticePoint, ...]



class DegreeUnderflowError(ValueError):
    """Raised when taking the boundary of a 0-chain"""

    pass


class ChainMismatchError(ValueError):
    """Raised when chains of different degree, spacing or shape are combined"""

    pass


def _as_integer(value: Any, what: str) -> int:
    if isinstance(value, bool):
        raise ChainMismatchError(f"{what} must be an integer, got {value!r}")
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real) and float(value).is_integer():
        return int(value)
    raise ChainMismatchError(f"{what} must be an integer, got {value!r}")


@dataclass(frozen=True)
class Chain:
    """
    Sparse integer q-chain

    Attributes:
        q: Degree (tuple length - 1)
        terms: Mapping from (q+1)-tuples of lattice points to nonzero coefficients
        spacing: World units per lattice step
    """

    q: int
    terms: Mapping[Simplex, int] = field(default_factory=dict)
    spacing: float = 1.0

    def __post_init__(self):
        if self.q < 0:
            raise ChainMismatchError(f"Chain degree must be non-negative, got {self.q}")
        if self.spacing <= 0:
            raise ChainMismatchError(f"Spacing must be positive, got {self.spacing}")

        normalized: dict[Simplex, int] = {}
        for simplex in sorted(self.terms):
            coeff = _as_integer(self.terms[simplex], "Coefficient")
            if coeff == 0:
                continue
            if len(simplex) != self.q + 1:
                raise ChainMismatchError(
                    f"Tuple {simplex} has {len(simplex)} vertices, expected {self.q + 1}"
                )
            normalized[simplex] = coeff
        object.__setattr__(self, "terms", normalized)

    @classmethod
    def from_terms(
        cls, q: int, items: Iterable[tuple[Simplex, int]], spacing: float = 1.0
    ) -> "Chain":
        """
        Build a chain by summing coefficients of repeated tuples

        Args:
            q: Chain degree
            items: (tuple, coefficient) pairs; repeated tuples are added together
            spacing: World scale

        Returns:
            The pruned, canonically ordered chain
        """
        acc: dict[Simplex, int] = {}
        for simplex, coeff in items:
            key = tuple(tuple(_as_integer(c, "Vertex coordinate") for c in v) for v in simplex)
            acc[key] = acc.get(key, 0) + coeff
        return cls(q=q, terms=acc, spacing=spacing)

    def is_zero(self) -> bool:
        """True for the zero chain"""
        return not self.terms

    def dimension(self) -> int | None:
        """Ambient dimension of the vertices, or None for the zero chain"""
        for simplex in self.terms:
            return len(simplex[0])
        return None

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __repr__(self) -> str:
        return f"Chain(q={self.q}, terms={len(self.terms)}, spacing={self.spacing})"

    def to_dict(self) -> dict[str, Any]:
        """Serialize to the chain JSON document structure"""
        return {
            "q": self.q,
            "spacing": self.spacing,
            "terms": [
                {"vertices": [list(v) for v in simplex], "coeff": coeff}
                for simplex, coeff in self.terms.items()
            ],
        }

    def to_json(self, indent: int | None = None) -> str:
        """Serialize to JSON with terms in canonical order"""
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "Chain":
        """Rebuild a chain from its JSON document structure"""
        try:
            items = [
                (tuple(tuple(v) for v in term["vertices"]), term["coeff"])
                for term in doc["terms"]
            ]
            q = _as_integer(doc["q"], "Degree")
            return cls.from_terms(q, items, spacing=float(doc["spacing"]))
        except (KeyError, TypeError) as e:
            raise ChainMismatchError(f"Malformed chain document: {e}") from e

    @classmethod
    def from_json(cls, text: str) -> "Chain":
        """Parse a chain JSON document"""
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ControlRadius:
    """Maximum pairwise vertex distance over the support, in world units"""

    value: float

    def __float__(self) -> float:
        return self.value


def zero_chain(q: int, spacing: float = 1.0) -> Chain:
    """The zero q-chain"""
    return Chain(q=q, terms={}, spacing=spacing)


def boundary(c: Chain) -> Chain:
    """
    Coarse boundary map

    b(sum r_x (x_0..x_q)) = sum_i (-1)^i sum r_x (x_0..x̂_i..x_q)

    Args:
        c: Chain of degree q >= 1

    Returns:
        The (q-1)-chain, zero coefficients pruned

    Raises:
        DegreeUnderflowError: If c.q == 0
    """
    if c.q == 0:
        raise DegreeUnderflowError("Boundary of a 0-chain is undefined")

    acc: dict[Simplex, int] = {}
    for simplex, coeff in c.terms.items():
        for i in range(c.q + 1):
            face = simplex[:i] + simplex[i + 1 :]
            acc[face] = acc.get(face, 0) + (coeff if i % 2 == 0 else -coeff)
    return Chain(q=c.q - 1, terms=acc, spacing=c.spacing)


def combine(c1: Chain, c2: Chain, k1: int = 1, k2: int = 1) -> Chain:
    """
    Integer linear combination k1*c1 + k2*c2

    Raises:
        ChainMismatchError: On degree or spacing mismatch
    """
    if c1.q != c2.q:
        raise ChainMismatchError(f"Cannot combine chains of degree {c1.q} and {c2.q}")
    if c1.spacing != c2.spacing:
        raise ChainMismatchError(
            f"Cannot combine chains with spacing {c1.spacing} and {c2.spacing}"
        )

    acc: dict[Simplex, int] = {simplex: k1 * coeff for simplex, coeff in c1.terms.items()}
    for simplex, coeff in c2.terms.items():
        acc[simplex] = acc.get(simplex, 0) + k2 * coeff
    return Chain(q=c1.q, terms=acc, spacing=c1.spacing)


def control_radius(c: Chain) -> ControlRadius:
    """
    Exact control radius: max pairwise Euclidean vertex distance over the support

    Returns:
        ControlRadius in world units (0 for the zero chain)
    """
    best = 0.0
    for simplex in c.terms:
        for a, b in combinations(simplex, 2):
            best = max(best, math.dist(a, b))
    return ControlRadius(best * c.spacing)


def chain_support(c: Chain) -> set[LatticePoint]:
    """All lattice points appearing in some supported tuple"""
    return {v for simplex in c.terms for v in simplex}


def restrict_to_window(c: Chain, w: "Window") -> Chain:
    """
    Keep exactly the terms whose vertices all lie in the window

    Raises:
        ChainMismatchError: If the chain's dimension or spacing differs from the window's
    """
    if c.spacing != w.spacing:
        raise ChainMismatchError(f"Chain has spacing {c.spacing}, window {w.spacing}")
    dim = c.dimension()
    if dim is not None and dim != w.n:
        raise ChainMismatchError(f"Chain lives in dimension {dim}, window in {w.n}")

    kept = {
        simplex: coeff
        for simplex, coeff in c.terms.items()
        if all(abs(x) <= w.L for v in simplex for x in v)
    }
    return Chain(q=c.q, terms=kept, spacing=c.spacing)
