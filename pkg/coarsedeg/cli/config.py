"""
Run configuration

Click options are resolved into a frozen RunConfig; every report embeds
RunConfig.to_dict() so that a report alone is enough to reproduce it.
"""

from dataclasses import asdict, dataclass
from typing import Any

REPRODUCIBLE_ENV = "COARSEDEG_REPRODUCIBLE"

FORMATS = ("json", "csv", "table")


class ConfigError(ValueError):
    """Raised when an option value cannot be interpreted"""

    pass


@dataclass(frozen=True)
class RunConfig:
    """
    Fully resolved options of one CLI invocation

    Attributes that a command does not use stay at their defaults and are
    still reported.
    """

    command: str
    map_text: str | None = None
    dim: int = 2
    window: int = 8
    spacing: float = 1.0
    collar: int | None = None
    seed: int = 0
    test_points: int = 8
    budget: float | None = None
    radii: tuple[float, ...] = ()
    points: int = 256
    halfspace: bool = False
    slerp: int = 32
    ball: float = 1.0
    t_steps: int = 16
    ladder: tuple[int, ...] = (4, 8, 16)
    samples: int = 10000
    pairs: int = 200
    boundary: bool = False
    bundle: str | None = None
    output_format: str = "json"
    output: str | None = None
    threads: int | None = None
    reproducible: bool = False

    def to_dict(self) -> dict[str, Any]:
        """Computational parameters only; the output destination is left out"""
        doc = asdict(self)
        del doc["output"]
        doc["radii"] = list(self.radii)
        doc["ladder"] = list(self.ladder)
        return doc


def parse_radii(text: str) -> tuple[float, ...]:
    """
    Parse a radius ladder

    Accepts "start:stop:step" (stop included when hit exactly) or a comma
    separated list.

    Examples:
        >>> parse_radii("10:40:10")
        (10.0, 20.0, 30.0, 40.0)
        >>> parse_radii("1,2.5")
        (1.0, 2.5)
    """
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ConfigError(f"Radii must look like start:stop:step, got '{text}'")
            start, stop, step = parts
            if step <= 0:
                raise ConfigError(f"Radius step must be positive, got {step}")
            count = int(round((stop - start) / step)) + 1
            radii = tuple(start + k * step for k in range(count) if start + k * step <= stop + 1e-9)
        else:
            radii = tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Cannot parse radii '{text}': {e}") from e

    if not radii:
        raise ConfigError(f"Radius ladder '{text}' is empty")
    if any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ConfigError(f"Radii must be positive and strictly ascending, got {list(radii)}")
    return radii


def parse_ladder(text: str) -> tuple[int, ...]:
    """
    Parse a window ladder like "4,8,16"

    Raises:
        ConfigError: If the ladder is empty, non-integer or not increasing
    """
    try:
        ladder = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as e:
        raise ConfigError(f"Cannot parse ladder '{text}': {e}") from e
    if not ladder or ladder[0] < 1 or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ConfigError(f"Ladder must be strictly increasing positive integers, got '{text}'")
    return ladder


def infer_format(output_format: str | None, output: str | None) -> str:
    """
    Pick the output format

    An explicit format wins; otherwise the output file extension decides,
    defaulting to JSON.
    """
    if output_format:
        return output_format
    if output:
        if output.endswith(".csv"):
            return "csv"
        if output.endswith(".txt"):
            return "table"
    return "json"
