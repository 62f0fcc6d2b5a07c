"""
AST node definitions for maps

Expression trees for the map-expression language, and the MapSpec family that
describes candidate coarse maps. All nodes are frozen dataclasses; str() of a
MapSpec renders the builtin syntax accepted by parse_map, so a spec can be
embedded in a report and parsed back.
"""

from dataclasses import dataclass
from enum import Enum
from typing import ClassVar


@dataclass(frozen=True)
class Number:
    """Numeric literal"""

    value: float

    def __repr__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    """Variable x1..xn (index is 0-based)"""

    index: int

    def __repr__(self) -> str:
        return f"x{self.index + 1}"


@dataclass(frozen=True)
class UnaryOp:
    """Negation"""

    op: str  # '-'
    operand: "Expr"

    def __repr__(self) -> str:
        return f"-({self.operand!r})"


@dataclass(frozen=True)
class BinOp:
    """Binary arithmetic: left op right"""

    op: str  # '+', '-', '*', '/'
    left: "Expr"
    right: "Expr"

    def __repr__(self) -> str:
        return f"({self.left!r} {self.op} {self.right!r})"


@dataclass(frozen=True)
class Call:
    """Function call: abs, min, max, sqrt, floor"""

    func: str
    args: tuple["Expr", ...]

    def __repr__(self) -> str:
        return f"{self.func}({', '.join(repr(a) for a in self.args)})"


Expr = Number | Var | UnaryOp | BinOp | Call


@dataclass(frozen=True)
class ExprAst:
    """
    Per-output-coordinate expression trees

    Examples:
        (x1+1, abs(x2))
    """

    outputs: tuple[Expr, ...]

    @property
    def arity(self) -> int:
        return len(self.outputs)

    def free_variables(self) -> set[int]:
        """0-based indices of the variables used anywhere"""
        found: set[int] = set()
        stack: list[Expr] = list(self.outputs)
        while stack:
            node = stack.pop()
            if isinstance(node, Var):
                found.add(node.index)
            elif isinstance(node, UnaryOp):
                stack.append(node.operand)
            elif isinstance(node, BinOp):
                stack.extend((node.left, node.right))
            elif isinstance(node, Call):
                stack.extend(node.args)
        return found

    def __repr__(self) -> str:
        return "(" + ", ".join(repr(e) for e in self.outputs) + ")"


class MapKind(Enum):
    """Kinds of map a MapSpec can describe"""

    IDENTITY = "identity"
    REFLECTION = "reflection"
    ANTIPODAL = "antipodal"
    TRANSLATION = "translation"
    LINEAR = "linear"
    ROTATION = "rotation"
    FOLD = "fold"
    RADIAL = "radial"
    PERTURBATION = "perturbation"
    COMPOSITION = "composition"
    EXPRESSION = "expression"
    BLEND = "blend"

    def __str__(self) -> str:
        return self.value


def _num(x: float) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


@dataclass(frozen=True)
class MapSpec:
    """
    Base class for map descriptions

    Every map is an endomap of R^domain_dim.
    """

    domain_dim: int

    kind: ClassVar[MapKind]


@dataclass(frozen=True)
class Identity(MapSpec):
    kind = MapKind.IDENTITY

    def __str__(self) -> str:
        return "identity"


@dataclass(frozen=True)
class Reflection(MapSpec):
    """Negates coordinate `axis`"""

    axis: int = 0
    kind = MapKind.REFLECTION

    def __str__(self) -> str:
        return f"reflect({self.axis})"


@dataclass(frozen=True)
class Antipodal(MapSpec):
    """x ↦ -x"""

    kind = MapKind.ANTIPODAL

    def __str__(self) -> str:
        return "antipodal"


@dataclass(frozen=True)
class Translation(MapSpec):
    """x ↦ x + vector"""

    vector: tuple[float, ...] = ()
    kind = MapKind.TRANSLATION

    def __str__(self) -> str:
        return f"translate({','.join(_num(v) for v in self.vector)})"


@dataclass(frozen=True)
class Linear(MapSpec):
    """x ↦ A x, matrix given row by row"""

    matrix: tuple[tuple[float, ...], ...] = ()
    kind = MapKind.LINEAR

    def __str__(self) -> str:
        rows = ";".join(",".join(_num(a) for a in row) for row in self.matrix)
        return f"linear({rows})"


@dataclass(frozen=True)
class Rotation(MapSpec):
    """Rotation by `angle` radians in the (plane[0], plane[1]) coordinate plane"""

    angle: float = 0.0
    plane: tuple[int, int] = (0, 1)
    kind = MapKind.ROTATION

    def __str__(self) -> str:
        if self.plane == (0, 1):
            return f"rotate({_num(self.angle)})"
        return f"rotate({_num(self.angle)},{self.plane[0]},{self.plane[1]})"


@dataclass(frozen=True)
class Fold(MapSpec):
    """g(x, t) = f(x, |t|) for a half-space map f"""

    inner: MapSpec = None  # type: ignore[assignment]
    kind = MapKind.FOLD

    def __str__(self) -> str:
        return f"fold{{{self.inner}}}"


@dataclass(frozen=True)
class Radial(MapSpec):
    """x ↦ scale·|x|^power·x/|x|, 0 ↦ 0"""

    scale: float = 1.0
    power: float = 1.0
    kind = MapKind.RADIAL

    def __str__(self) -> str:
        return f"radial({_num(self.scale)},{_num(self.power)})"


@dataclass(frozen=True)
class Perturbation(MapSpec):
    """base(x) + eps·noise(seed, x) with noise in [-1, 1]^n"""

    base: MapSpec = None  # type: ignore[assignment]
    eps: float = 0.0
    seed: int = 0
    kind = MapKind.PERTURBATION

    def __str__(self) -> str:
        return f"perturb({_num(self.eps)},{self.seed}){{{self.base}}}"


@dataclass(frozen=True)
class Composition(MapSpec):
    """Maps applied in reading order: compose{a;b}(x) = b(a(x))"""

    parts: tuple[MapSpec, ...] = ()
    kind = MapKind.COMPOSITION

    def __str__(self) -> str:
        return "compose{" + ";".join(str(p) for p in self.parts) + "}"


@dataclass(frozen=True)
class Expression(MapSpec):
    """Map given by a parsed expression per output coordinate"""

    ast: ExprAst = None  # type: ignore[assignment]
    kind = MapKind.EXPRESSION

    def __str__(self) -> str:
        return repr(self.ast)


@dataclass(frozen=True)
class Blend(MapSpec):
    """Pointwise weighted sum: x ↦ sum w_i·m_i(x)"""

    parts: tuple[tuple[float, MapSpec], ...] = ()
    kind = MapKind.BLEND

    def __str__(self) -> str:
        return "blend{" + ";".join(f"{_num(w)}:{m}" for w, m in self.parts) + "}"
