"""
Reduction helpers for sampled estimators

Provides MAX and MIN reductions that also remember where the extreme value
was attained. Each aggregator maintains state and can be updated
incrementally; ties are broken by the smaller witness, so the result does not
depend on the order in which samples arrive.
"""

from typing import Any


class Aggregator:
    """Base class for aggregators"""

    def update(self, value: float, witness: Any = None) -> None:
        """Update aggregator with a new value"""
        raise NotImplementedError

    def result(self) -> float | None:
        """Get final aggregated result"""
        raise NotImplementedError


class MaxAggregator(Aggregator):
    """MAX aggregator - finds maximum value and its witness"""

    def __init__(self):
        self.max: float | None = None
        self.witness: Any = None

    def update(self, value: float, witness: Any = None) -> None:
        """Update maximum"""
        if value is None:
            return

        if self.max is None or value > self.max:
            self.max = value
            self.witness = witness
        elif value == self.max and _before(witness, self.witness):
            self.witness = witness

    def result(self) -> float | None:
        """Return maximum value, or None if no values"""
        return self.max


class MinAggregator(Aggregator):
    """MIN aggregator - finds minimum value and its witness"""

    def __init__(self):
        self.min: float | None = None
        self.witness: Any = None

    def update(self, value: float, witness: Any = None) -> None:
        """Update minimum"""
        if value is None:
            return

        if self.min is None or value < self.min:
            self.min = value
            self.witness = witness
        elif value == self.min and _before(witness, self.witness):
            self.witness = witness

    def result(self) -> float | None:
        """Return minimum value, or None if no values"""
        return self.min


def _before(candidate: Any, current: Any) -> bool:
    if candidate is None or current is None:
        return False
    try:
        return bool(candidate < current)
    except (TypeError, ValueError):
        return False
