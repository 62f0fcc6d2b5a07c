"""
Tests for the map parser
"""

import math

import pytest

from coarsedeg.core.lattice import Window, enumerate_window
from coarsedeg.maps.ast_nodes import (
    Antipodal,
    BinOp,
    Blend,
    Call,
    Composition,
    Expression,
    Fold,
    Identity,
    Linear,
    MapKind,
    Number,
    Perturbation,
    Radial,
    Reflection,
    Rotation,
    Translation,
    UnaryOp,
    Var,
)
from coarsedeg.maps.evaluate import DomainViolationError, evaluate
from coarsedeg.maps.parser import MapParseError, parse_map, parse_map_expr, tokenize


class TestTokenizer:
    """Test tokenization"""

    def test_positions(self):
        """Test 1-based line and column tracking"""
        tokens = tokenize("(x1,\n  x2)")
        assert [(t.text, t.line, t.column) for t in tokens] == [
            ("(", 1, 1),
            ("x1", 1, 2),
            (",", 1, 4),
            ("x2", 2, 3),
            (")", 2, 5),
        ]

    def test_numbers(self):
        """Test integer, decimal and exponent literals"""
        assert [t.text for t in tokenize("1 2.5 .5 1e-3")] == ["1", "2.5", ".5", "1e-3"]

    def test_unicode_minus(self):
        """Test that U+2212 reads as '-'"""
        assert [t.text for t in tokenize("−x1")] == ["-", "x1"]

    def test_bad_character(self):
        """Test an illegal character"""
        with pytest.raises(MapParseError) as excinfo:
            tokenize("(x1 $ 2)")
        assert excinfo.value.column == 5


class TestExpressionMaps:
    """Test the expression language"""

    def test_simple(self):
        """Test outputs and arity inference"""
        m = parse_map_expr("(x1+1, abs(x2))")
        assert m.domain_dim == 2
        assert m.kind is MapKind.EXPRESSION
        assert m.ast.outputs == (
            BinOp("+", Var(0), Number(1.0)),
            Call("abs", (Var(1),)),
        )

    def test_precedence(self):
        """Test that * binds tighter than + and - is left associative"""
        m = parse_map_expr("(1 - 2 - 3 * x1)")
        assert evaluate(m, (2.0,)) == (1.0 - 2.0 - 6.0,)

    def test_unary_minus(self):
        """Test negation"""
        m = parse_map_expr("(-x1, --x2)")
        assert m.ast.outputs[0] == UnaryOp("-", Var(0))
        assert evaluate(m, (3.0, 4.0)) == (-3.0, 4.0)

    def test_functions(self):
        """Test every builtin function"""
        m = parse_map_expr("(min(x1, x2, 0), max(x1, x2), sqrt(abs(x1)), floor(x2))", dim=4)
        assert m.domain_dim == 4
        assert evaluate(m, (-4.0, 2.5, 0.0, 0.0)) == (-4.0, 2.5, 2.0, 2.0)

    def test_pi_constant(self):
        """Test the pi constant"""
        m = parse_map_expr("(pi * x1)")
        assert evaluate(m, (1.0,)) == (math.pi,)

    def test_expr_prefix(self):
        """Test the expr(...) spelling"""
        assert isinstance(parse_map("expr(x2, x1)"), Expression)

    def test_missing_operand_column(self):
        """Test that end-of-input errors point at the last token"""
        with pytest.raises(MapParseError) as excinfo:
            parse_map_expr("(x1 +")
        assert excinfo.value.line == 1
        assert excinfo.value.column == 5
        assert "column 5" in str(excinfo.value)

    def test_unknown_identifier(self):
        """Test an unknown name"""
        with pytest.raises(MapParseError) as excinfo:
            parse_map_expr("(x1, y)")
        assert excinfo.value.column == 6

    def test_x0_rejected(self):
        """Test that variables are 1-based"""
        with pytest.raises(MapParseError):
            parse_map_expr("(x0)")

    def test_arity_mismatch(self):
        """Test outputs against the requested dimension"""
        with pytest.raises(MapParseError, match="Arity mismatch"):
            parse_map_expr("(x1, x2)", dim=3)

    def test_variable_beyond_dimension(self):
        """Test a variable index above the dimension"""
        with pytest.raises(MapParseError, match="x3"):
            parse_map_expr("(x1, x3)")

    def test_function_arity(self):
        """Test a unary function with two arguments"""
        with pytest.raises(MapParseError):
            parse_map_expr("(abs(x1, x2), x2)")

    def test_trailing_input(self):
        """Test text after the map"""
        with pytest.raises(MapParseError, match="trailing"):
            parse_map_expr("(x1) x2")

    def test_empty(self):
        """Test empty text"""
        with pytest.raises(MapParseError):
            parse_map("   ")


class TestBuiltins:
    """Test builtin map syntax"""

    def test_simple_builtins(self):
        """Test the parameterless and axis builtins"""
        assert parse_map("identity", 3) == Identity(domain_dim=3)
        assert parse_map("antipodal", 2) == Antipodal(domain_dim=2)
        assert parse_map("reflect(1)", 2) == Reflection(domain_dim=2, axis=1)

    def test_builtin_needs_dimension(self):
        """Test that builtins cannot infer a dimension"""
        with pytest.raises(MapParseError, match="needs a dimension"):
            parse_map("identity")

    def test_reflect_axis_range(self):
        """Test reflection axis bounds"""
        with pytest.raises(MapParseError, match="out of range"):
            parse_map("reflect(2)", 2)
        with pytest.raises(MapParseError, match="integer"):
            parse_map("reflect(0.5)", 2)

    def test_translate_padding(self):
        """Test that short translation vectors are zero-padded"""
        assert parse_map("translate(1)", 3) == Translation(domain_dim=3, vector=(1.0, 0.0, 0.0))
        assert parse_map("translate(−3, 7)", 2).vector == (-3.0, 7.0)
        with pytest.raises(MapParseError):
            parse_map("translate(1,2,3)", 2)

    def test_scale_and_shear(self):
        """Test the diagonal and shear matrices"""
        assert parse_map("scale(2)", 2) == Linear(domain_dim=2, matrix=((2.0, 0.0), (0.0, 2.0)))
        shear = parse_map("shear(1)", 2)
        assert shear.matrix == ((1.0, 1.0), (0.0, 1.0))
        assert evaluate(shear, (0.0, 3.0)) == (3.0, 3.0)

    def test_linear(self):
        """Test row-major matrices"""
        m = parse_map("linear(0,1;1,0)", 2)
        assert m.matrix == ((0.0, 1.0), (1.0, 0.0))
        with pytest.raises(MapParseError, match="2x2"):
            parse_map("linear(1,2,3;4,5,6)", 2)

    def test_rotate(self):
        """Test rotations with a constant-expression angle"""
        m = parse_map("rotate(pi/2)", 2)
        assert isinstance(m, Rotation)
        assert m.angle == pytest.approx(math.pi / 2)
        assert parse_map("rotate(1,0,2)", 3).plane == (0, 2)
        with pytest.raises(MapParseError, match="distinct"):
            parse_map("rotate(1,1,1)", 3)

    def test_constant_arguments_only(self):
        """Test that builtin arguments cannot use variables"""
        with pytest.raises(MapParseError, match="constants"):
            parse_map("scale(x1)", 2)

    def test_radial(self):
        """Test radial maps"""
        assert parse_map("radial(1,2)", 2) == Radial(domain_dim=2, scale=1.0, power=2.0)

    def test_fold(self):
        """Test folding a half-space map"""
        m = parse_map("fold{translate(1)}", 2)
        assert isinstance(m, Fold)
        assert evaluate(m, (0.0, -2.0)) == (1.0, 2.0)

    def test_fold_rejects_non_halfspace_map(self):
        """Test the half-space check"""
        with pytest.raises(DomainViolationError):
            parse_map("fold{translate(0,-1)}", 2)

    def test_perturb(self):
        """Test perturbations"""
        m = parse_map("perturb(0.5,7){identity}", 2)
        assert m == Perturbation(domain_dim=2, base=Identity(domain_dim=2), eps=0.5, seed=7)
        with pytest.raises(MapParseError):
            parse_map("perturb(-1,0){identity}", 2)

    def test_compose(self):
        """Test composition in reading order"""
        m = parse_map("compose{translate(1,0);scale(2)}", 2)
        assert isinstance(m, Composition)
        assert evaluate(m, (0.0, 1.0)) == (2.0, 2.0)

    def test_blend(self):
        """Test weighted sums"""
        m = parse_map("blend{0.25:identity;0.75:antipodal}", 2)
        assert isinstance(m, Blend)
        assert evaluate(m, (4.0, 0.0)) == (-2.0, 0.0)

    def test_nested_expression(self):
        """Test expression maps inside builtins"""
        m = parse_map("compose{(x2, x1);reflect(0)}", 2)
        assert evaluate(m, (1.0, 2.0)) == (-2.0, 1.0)

    def test_unknown_map(self):
        """Test an unknown builtin"""
        with pytest.raises(MapParseError, match="Unknown map"):
            parse_map("twist(1)", 2)

    def test_missing_brace(self):
        """Test an unterminated brace group"""
        with pytest.raises(MapParseError):
            parse_map("compose{identity;antipodal", 2)

    @pytest.mark.parametrize(
        "text",
        [
            "identity",
            "antipodal",
            "reflect(1)",
            "translate(1.5,-2)",
            "linear(1,2;3,4)",
            "rotate(0.5)",
            "radial(2,0.5)",
            "perturb(0.5,3){shear(2)}",
            "compose{reflect(0);translate(1,0)}",
            "blend{0.5:identity;0.5:antipodal}",
            "fold{translate(1,0)}",
        ],
    )
    def test_str_parses_back(self, text):
        """Test that str() of a map is accepted by the parser"""
        m = parse_map(text, 2)
        assert parse_map(str(m), 2) == m

    @pytest.mark.parametrize(
        "builtin,expression",
        [
            ("reflect(0)", "(-x1, x2)"),
            ("antipodal", "(-x1, -x2)"),
            ("translate(1,-2)", "(x1+1, x2-2)"),
            ("linear(2,1;-1,1)", "(2*x1+x2, -x1+x2)"),
        ],
    )
    def test_builtin_matches_expression(self, builtin, expression):
        """Test that a builtin and its written-out formula agree on every window vertex"""
        named = parse_map(builtin, 2)
        written = parse_map(expression, 2)
        for v in enumerate_window(Window(n=2, L=8)):
            assert evaluate(named, v) == evaluate(written, v)
