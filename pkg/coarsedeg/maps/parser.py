"""
Map parser - Hand-written recursive descent parser

Parses two related languages:
- Expression maps: (e1, ..., em) over variables x1..xn
- Builtin maps: identity, antipodal, reflect(i), translate(v1,...),
  scale(k), shear(k), rotate(theta[,i,j]), linear(a,b;c,d),
  radial(scale,power), fold{...}, perturb(eps,seed){...},
  compose{a;b;...}, blend{w:m;...} and expr(...) / (...)

Errors carry the 1-based line and column of the offending token.
"""

import math
import re
from dataclasses import dataclass

from coarsedeg.maps.ast_nodes import (
    Antipodal,
    BinOp,
    Blend,
    Call,
    Composition,
    Expr,
    ExprAst,
    Expression,
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
from coarsedeg.maps.evaluate import evaluate_expr, fold_to_full_space

FUNCTIONS = {"abs": 1, "sqrt": 1, "floor": 1, "min": None, "max": None}
CONSTANTS = {"pi": math.pi}

_TOKEN_RE = re.compile(
    r"""
    (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/(),;:{}])
  | (?P<newline>\n)
  | (?P<space>[ \t\r]+)
    """,
    re.VERBOSE,
)


class MapParseError(ValueError):
    """Raised when map text cannot be parsed"""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # 'number', 'ident', 'op'
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    """
    Split map text into tokens with positions

    The Unicode minus sign is read as '-'.

    Raises:
        MapParseError: On a character no token starts with
    """
    text = text.replace("−", "-")
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise MapParseError(
                f"Unexpected character '{text[pos]}'", line=line, column=pos - line_start + 1
            )
        kind = match.lastgroup
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind != "space":
            tokens.append(Token(kind, match.group(), line, pos - line_start + 1))
        pos = match.end()
    return tokens


class MapParser:
    """
    Recursive descent parser for map text

    Grammar:
        map     := builtin | expr_map
        expr_map:= "(" expr { "," expr } ")"
        expr    := term { ("+"|"-") term }
        term    := factor { ("*"|"/") factor }
        factor  := number | var | const | func "(" expr { "," expr } ")"
                 | "(" expr ")" | "-" factor
    """

    def __init__(self, text: str, dim: int | None = None):
        if not text or not text.strip():
            raise MapParseError("Empty map text")
        self.text = text
        self.dim = dim
        self.tokens = tokenize(text)
        self.pos = 0

    def current(self) -> Token | None:
        """Get current token without advancing"""
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def peek(self, offset: int = 1) -> Token | None:
        """Look ahead at token"""
        pos = self.pos + offset
        if pos < len(self.tokens):
            return self.tokens[pos]
        return None

    def error(self, message: str, token: Token | None = None) -> MapParseError:
        """Build an error positioned at token (or the last token at end of input)"""
        token = token or self.current() or (self.tokens[-1] if self.tokens else None)
        if token is None:
            return MapParseError(message)
        return MapParseError(message, line=token.line, column=token.column)

    def consume(self, expected: str | None = None) -> Token:
        """
        Consume and return current token, optionally checking its text

        Raises:
            MapParseError: If the token doesn't match or input ended
        """
        token = self.current()
        if token is None:
            what = f"'{expected}'" if expected else "more input"
            raise self.error(f"Unexpected end of input, expected {what}")
        if expected is not None and token.text != expected:
            raise self.error(f"Expected '{expected}' but got '{token.text}'", token)
        self.pos += 1
        return token

    def at(self, text: str) -> bool:
        token = self.current()
        return token is not None and token.text == text

    def expect_end(self) -> None:
        token = self.current()
        if token is not None:
            raise self.error(f"Unexpected trailing input '{token.text}'", token)

    # expressions

    def parse_expression_map(self) -> Expression:
        """Parse "(e1, ..., em)" into an Expression map"""
        start = self.consume("(")
        outputs = [self._parse_expr()]
        while self.at(","):
            self.consume(",")
            outputs.append(self._parse_expr())
        self.consume(")")

        ast = ExprAst(outputs=tuple(outputs))
        dim = self.dim if self.dim is not None else ast.arity
        if ast.arity != dim:
            raise self.error(
                f"Arity mismatch: expression has {ast.arity} outputs, dimension is {dim}", start
            )
        unused = sorted(i for i in ast.free_variables() if i >= dim)
        if unused:
            raise self.error(
                f"Arity mismatch: variable x{unused[-1] + 1} exceeds dimension {dim}", start
            )
        return Expression(domain_dim=dim, ast=ast)

    def _parse_expr(self) -> Expr:
        node = self._parse_term()
        while self.at("+") or self.at("-"):
            op = self.consume().text
            node = BinOp(op, node, self._parse_term())
        return node

    def _parse_term(self) -> Expr:
        node = self._parse_factor()
        while self.at("*") or self.at("/"):
            op = self.consume().text
            node = BinOp(op, node, self._parse_factor())
        return node

    def _parse_factor(self) -> Expr:
        token = self.current()
        if token is None:
            raise self.error("Unexpected end of input, expected an expression")

        if token.text == "-":
            self.consume()
            return UnaryOp("-", self._parse_factor())
        if token.text == "(":
            self.consume()
            node = self._parse_expr()
            self.consume(")")
            return node
        if token.kind == "number":
            self.consume()
            return Number(float(token.text))
        if token.kind == "ident":
            return self._parse_identifier()
        raise self.error(f"Unexpected token '{token.text}'", token)

    def _parse_identifier(self) -> Expr:
        token = self.consume()
        name = token.text

        if re.fullmatch(r"x\d+", name):
            index = int(name[1:])
            if index < 1:
                raise self.error(f"Unknown identifier '{name}'", token)
            return Var(index - 1)
        if name in CONSTANTS:
            return Number(CONSTANTS[name])
        if name not in FUNCTIONS:
            raise self.error(f"Unknown identifier '{name}'", token)

        self.consume("(")
        args = [self._parse_expr()]
        while self.at(","):
            self.consume(",")
            args.append(self._parse_expr())
        self.consume(")")

        expected = FUNCTIONS[name]
        if expected is not None and len(args) != expected:
            raise self.error(f"{name}() takes {expected} argument, got {len(args)}", token)
        return Call(name, tuple(args))

    # builtins

    def parse_map(self) -> MapSpec:
        """Parse one builtin or expression map and require end of input"""
        m = self._parse_map()
        self.expect_end()
        return m

    def _parse_map(self) -> MapSpec:
        token = self.current()
        if token is None:
            raise self.error("Unexpected end of input, expected a map")
        if token.text == "(":
            return self.parse_expression_map()
        if token.kind != "ident":
            raise self.error(f"Expected a map name but got '{token.text}'", token)

        name = token.text
        if name == "expr":
            self.consume()
            return self.parse_expression_map()

        dim = self._require_dim(token)
        self.consume()

        if name == "identity":
            return Identity(domain_dim=dim)
        if name == "antipodal":
            return Antipodal(domain_dim=dim)
        if name == "reflect":
            (axis,) = self._int_args(token, 1)
            self._check_axis(axis, dim, token)
            return Reflection(domain_dim=dim, axis=axis)
        if name == "translate":
            vector = self._number_args()
            if len(vector) > dim:
                raise self.error(
                    f"translate has {len(vector)} components, dimension is {dim}", token
                )
            return Translation(domain_dim=dim, vector=tuple(vector) + (0.0,) * (dim - len(vector)))
        if name == "scale":
            (k,) = self._exact_args(token, 1)
            return Linear(domain_dim=dim, matrix=_diagonal(dim, k))
        if name == "shear":
            (k,) = self._exact_args(token, 1)
            if dim < 2:
                raise self.error("shear needs dimension >= 2", token)
            rows = [list(row) for row in _diagonal(dim, 1.0)]
            rows[0][dim - 1] = k
            return Linear(domain_dim=dim, matrix=tuple(tuple(r) for r in rows))
        if name == "rotate":
            return self._parse_rotation(token, dim)
        if name == "linear":
            return self._parse_linear(token, dim)
        if name == "radial":
            scale, power = self._exact_args(token, 2)
            return Radial(domain_dim=dim, scale=scale, power=power)
        if name == "fold":
            inner = self._parse_braced(1)[0]
            return fold_to_full_space(inner)
        if name == "perturb":
            eps, seed = self._exact_args(token, 2)
            if eps < 0:
                raise self.error(f"Perturbation amplitude must be >= 0, got {eps}", token)
            base = self._parse_braced(1)[0]
            return Perturbation(domain_dim=dim, base=base, eps=eps, seed=self._as_int(seed, token))
        if name == "compose":
            return Composition(domain_dim=dim, parts=tuple(self._parse_braced(None)))
        if name == "blend":
            return self._parse_blend(dim)
        raise self.error(f"Unknown map '{name}'", token)

    def _require_dim(self, token: Token) -> int:
        if self.dim is None:
            raise self.error(f"Map '{token.text}' needs a dimension", token)
        if self.dim < 1:
            raise self.error(f"Dimension must be >= 1, got {self.dim}", token)
        return self.dim

    def _constant(self) -> float:
        token = self.current()
        node = self._parse_expr()
        if ExprAst((node,)).free_variables():
            raise self.error("Builtin arguments must be constants", token)
        return evaluate_expr(node, ())

    def _number_args(self) -> list[float]:
        self.consume("(")
        values = [self._constant()]
        while self.at(","):
            self.consume(",")
            values.append(self._constant())
        self.consume(")")
        return values

    def _exact_args(self, token: Token, count: int) -> list[float]:
        values = self._number_args()
        if len(values) != count:
            raise self.error(f"{token.text} takes {count} argument(s), got {len(values)}", token)
        return values

    def _as_int(self, value: float, token: Token) -> int:
        if not float(value).is_integer():
            raise self.error(f"Expected an integer argument, got {value}", token)
        return int(value)

    def _int_args(self, token: Token, count: int) -> list[int]:
        return [self._as_int(v, token) for v in self._exact_args(token, count)]

    def _check_axis(self, axis: int, dim: int, token: Token) -> None:
        if not 0 <= axis < dim:
            raise self.error(f"Axis {axis} out of range for dimension {dim}", token)

    def _parse_rotation(self, token: Token, dim: int) -> Rotation:
        values = self._number_args()
        if len(values) not in (1, 3):
            raise self.error("rotate takes (theta) or (theta, i, j)", token)
        plane = (0, 1)
        if len(values) == 3:
            plane = (self._as_int(values[1], token), self._as_int(values[2], token))
        for axis in plane:
            self._check_axis(axis, dim, token)
        if plane[0] == plane[1]:
            raise self.error("Rotation plane needs two distinct axes", token)
        return Rotation(domain_dim=dim, angle=values[0], plane=plane)

    def _parse_linear(self, token: Token, dim: int) -> Linear:
        self.consume("(")
        rows = [[self._constant()]]
        while self.at(",") or self.at(";"):
            if self.consume().text == ";":
                rows.append([])
            rows[-1].append(self._constant())
        self.consume(")")
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise self.error(f"linear needs a {dim}x{dim} matrix", token)
        return Linear(domain_dim=dim, matrix=tuple(tuple(r) for r in rows))

    def _parse_braced(self, count: int | None) -> list[MapSpec]:
        start = self.consume("{")
        parts = [self._parse_map()]
        while self.at(";"):
            self.consume(";")
            parts.append(self._parse_map())
        self.consume("}")
        if count is not None and len(parts) != count:
            raise self.error(f"Expected {count} map(s) in braces, got {len(parts)}", start)
        return parts

    def _parse_blend(self, dim: int) -> Blend:
        self.consume("{")
        parts = []
        while True:
            weight = self._constant()
            self.consume(":")
            parts.append((weight, self._parse_map()))
            if not self.at(";"):
                break
            self.consume(";")
        self.consume("}")
        return Blend(domain_dim=dim, parts=tuple(parts))


def parse_map_expr(text: str, dim: int | None = None) -> Expression:
    """
    Parse an expression map

    Args:
        text: "(e1, ..., em)" with each ei over x1..xn
        dim: Expected dimension; defaults to the number of outputs

    Returns:
        Expression map of R^m

    Raises:
        MapParseError: On syntax errors, unknown identifiers or arity mismatch

    Examples:
        >>> m = parse_map_expr("(x1+1, abs(x2))")
        >>> m.domain_dim
        2
    """
    parser = MapParser(text, dim)
    m = parser.parse_expression_map()
    parser.expect_end()
    return m


def parse_map(text: str, dim: int | None = None) -> MapSpec:
    """
    Parse a builtin or expression map

    Args:
        text: Map text, e.g. "fold{translate(1)}" or "(x2, x1)"
        dim: Dimension of the map; required for builtins

    Returns:
        MapSpec

    Raises:
        MapParseError: On malformed text
        DomainViolationError: If a fold's inner map leaves the half-space
    """
    return MapParser(text, dim).parse_map()


def _diagonal(dim: int, k: float) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(k if i == j else 0.0 for j in range(dim)) for i in range(dim))
