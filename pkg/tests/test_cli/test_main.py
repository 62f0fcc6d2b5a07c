"""
Tests for CLI main commands
"""

import json

import pytest

try:
    from click.testing import CliRunner

    from coarsedeg.cli.main import cli

    CLICK_AVAILABLE = True
except ImportError:
    CLICK_AVAILABLE = False
    CliRunner = None
    cli = None


def _read_json(path):
    return json.loads(path.read_text())


@pytest.mark.skipif(not CLICK_AVAILABLE, reason="Click not installed")
class TestGroup:
    """Test the command group"""

    def test_version(self):
        """Test --version"""
        result = CliRunner().invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.output

    def test_help_lists_commands(self):
        """Test --help"""
        result = CliRunner().invoke(cli, ["--help"])
        assert result.exit_code == 0
        for command in ("degree", "cfpp", "homotopy", "coarse-check", "demo", "dump-chain"):
            assert command in result.output

    def test_unknown_option_exits_one(self):
        """Test that usage errors use exit code 1"""
        result = CliRunner().invoke(cli, ["degree", "--map", "identity", "--bogus"])
        assert result.exit_code == 1

    def test_missing_map_exits_one(self):
        """Test a missing required option"""
        result = CliRunner().invoke(cli, ["degree"])
        assert result.exit_code == 1


@pytest.mark.skipif(not CLICK_AVAILABLE, reason="Click not installed")
class TestDegreeCommand:
    """Test the degree command"""

    def test_identity(self, tmp_path):
        """Test a stable degree written as JSON"""
        out = tmp_path / "degree.json"
        result = CliRunner().invoke(
            cli, ["degree", "--map", "identity", "--dim", "2", "--window", "8", "-o", str(out)]
        )
        assert result.exit_code == 0
        doc = _read_json(out)
        assert doc["meta"]["command"] == "degree"
        assert doc["meta"]["config"]["map_text"] == "identity"
        assert doc["meta"]["seed"] == 0
        assert doc["result"]["d"] == 1
        assert doc["result"]["stable"] is True

    def test_reflection_to_stdout(self):
        """Test JSON on stdout"""
        result = CliRunner().invoke(cli, ["degree", "--map", "reflect(0)", "--dim", "1"])
        assert result.exit_code == 0
        assert '"d": -1' in result.output

    def test_unstable_exit_code(self):
        """Test exit code 2 when no certified region exists"""
        result = CliRunner().invoke(cli, ["degree", "--map", "translate(4,0)", "--window", "8"])
        assert result.exit_code == 2

    def test_parse_error(self):
        """Test exit code 1 with a positioned message"""
        result = CliRunner().invoke(cli, ["degree", "--map", "(x1 +"])
        assert result.exit_code == 1
        assert "Error:" in result.output
        assert "column 5" in result.output

    def test_csv_inferred_from_extension(self, tmp_path):
        """Test that -o file.csv picks the CSV formatter"""
        out = tmp_path / "points.csv"
        result = CliRunner().invoke(cli, ["degree", "--map", "antipodal", "-o", str(out)])
        assert result.exit_code == 0
        lines = out.read_text().splitlines()
        assert lines[0].split(",")[:3] == ["p", "covering", "covering_half"]
        assert len(lines) == 1 + 8

    def test_table_format(self):
        """Test the table formatter"""
        result = CliRunner().invoke(
            cli, ["degree", "--map", "identity", "-f", "table", "--no-color", "--test-points", "3"]
        )
        assert result.exit_code == 0
        assert "3 rows" in result.output

    def test_reproducible_reports_are_identical(self, tmp_path):
        """Test byte-identical output with --reproducible"""
        runner = CliRunner()
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for out in (first, second):
            result = runner.invoke(
                cli, ["degree", "--map", "rotate(pi/2)", "--seed", "4", "--reproducible", "-o", str(out)]
            )
            assert result.exit_code == 0
        assert first.read_bytes() == second.read_bytes()
        assert _read_json(first)["meta"]["duration_s"] is None

    def test_reproducible_from_environment(self, tmp_path):
        """Test COARSEDEG_REPRODUCIBLE"""
        out = tmp_path / "r.json"
        result = CliRunner().invoke(
            cli,
            ["degree", "--map", "identity", "-o", str(out)],
            env={"COARSEDEG_REPRODUCIBLE": "1"},
        )
        assert result.exit_code == 0
        assert _read_json(out)["meta"]["config"]["reproducible"] is True

    def test_timed_by_default(self, tmp_path):
        """Test that the duration is recorded without --reproducible"""
        out = tmp_path / "t.json"
        result = CliRunner().invoke(cli, ["degree", "--map", "identity", "-o", str(out)])
        assert result.exit_code == 0
        assert _read_json(out)["meta"]["duration_s"] >= 0


@pytest.mark.skipif(not CLICK_AVAILABLE, reason="Click not installed")
class TestCfppCommand:
    """Test the cfpp command"""

    def test_found(self, tmp_path):
        """Test exit code 0 for a half-space translation"""
        out = tmp_path / "cfpp.json"
        result = CliRunner().invoke(
            cli,
            ["cfpp", "--map", "translate(1,0)", "--halfspace", "--budget", "2",
             "--radii", "10:100:10", "-o", str(out)],
        )
        assert result.exit_code == 0
        doc = _read_json(out)
        assert doc["result"]["found"] is True
        assert len(doc["result"]["witness"]["entries"]) == 10

    def test_refuted(self):
        """Test exit code 3 for the rotation control"""
        result = CliRunner().invoke(
            cli, ["cfpp", "--map", "rotate(pi/2)", "--budget", "10", "--radii", "10:200:10"]
        )
        assert result.exit_code == 3
        assert "refuted at budget/ladder" in result.output

    def test_default_budget(self, tmp_path):
        """Test that the budget defaults to 4·spacing + S(1)"""
        out = tmp_path / "fold.json"
        result = CliRunner().invoke(
            cli, ["cfpp", "--map", "fold{translate(1)}", "--radii", "10,20,40", "-o", str(out)]
        )
        assert result.exit_code == 0
        assert _read_json(out)["meta"]["config"]["budget"] == pytest.approx(5.0)

    def test_bad_radii(self):
        """Test a malformed radius ladder"""
        result = CliRunner().invoke(cli, ["cfpp", "--map", "identity", "--budget", "1", "--radii", "10:5"])
        assert result.exit_code == 1
        assert "Error:" in result.output


@pytest.mark.skipif(not CLICK_AVAILABLE, reason="Click not installed")
class TestHomotopyCommands:
    """Test homotopy and coarse-check"""

    def test_homotopy(self, tmp_path):
        """Test a linear homotopy report"""
        out = tmp_path / "h.json"
        result = CliRunner().invoke(
            cli,
            ["homotopy", "--map", "rotate(pi/2)", "--t-steps", "4", "--ladder", "4,8",
             "--samples", "500", "--pairs", "20", "-o", str(out)],
        )
        assert result.exit_code == 0
        doc = _read_json(out)["result"]
        assert doc["family"]["kind"] == "linear"
        assert doc["lemma_bound_holds"] is True
        assert doc["triangle"]["violations"] == []
        assert doc["properness"]["verdict"] == "proper-at-scale"

    def test_coarse_check(self, tmp_path):
        """Test bornologous and properness estimates"""
        out = tmp_path / "c.json"
        result = CliRunner().invoke(
            cli, ["coarse-check", "--map", "scale(2)", "--radii", "1,2", "-o", str(out)]
        )
        assert result.exit_code == 0
        doc = _read_json(out)["result"]
        assert [s["S"] for s in doc["bornologous"]["samples"]] == pytest.approx([2.0, 4.0])
        assert doc["properness"]["verdict"] == "proper-at-scale"

    def test_coarse_check_csv(self):
        """Test the flattened rows"""
        result = CliRunner().invoke(
            cli, ["coarse-check", "--map", "(x1, 0)", "--ladder", "4,8", "-f", "csv"]
        )
        assert result.exit_code == 0
        assert "properness,verdict,suspect" in result.output

    def test_bad_ladder(self):
        """Test a decreasing ladder"""
        result = CliRunner().invoke(cli, ["coarse-check", "--map", "identity", "--ladder", "8,4"])
        assert result.exit_code == 1


@pytest.mark.skipif(not CLICK_AVAILABLE, reason="Click not installed")
class TestDemoAndDump:
    """Test demo bundles and chain dumps"""

    def test_demo_lemma1(self, tmp_path):
        """Test the reflection bundle"""
        out = tmp_path / "demo.json"
        result = CliRunner().invoke(cli, ["demo", "lemma1", "-o", str(out)])
        assert result.exit_code == 0
        doc = _read_json(out)
        assert doc["result"]["passed"] is True
        assert doc["meta"]["duration_s"] is None
        assert all(c["status"] == "PASS" for c in doc["result"]["checks"])

    def test_demo_table(self):
        """Test the pass/fail table"""
        result = CliRunner().invoke(cli, ["demo", "lemma2", "-f", "table", "--no-color"])
        assert result.exit_code == 0
        assert "PASS" in result.output
        assert "FAIL" not in result.output

    def test_demo_unknown_bundle(self):
        """Test an unknown bundle name"""
        result = CliRunner().invoke(cli, ["demo", "lemma9"])
        assert result.exit_code == 1

    def test_dump_chain_reflection(self, tmp_path):
        """Test the pushed-forward cycle of R^1"""
        out = tmp_path / "chain.json"
        result = CliRunner().invoke(
            cli, ["dump-chain", "--dim", "1", "--window", "2", "--map", "reflect(0)", "-o", str(out)]
        )
        assert result.exit_code == 0
        doc = _read_json(out)["result"]
        assert doc["q"] == 1
        assert {(tuple(map(tuple, t["vertices"])), t["coeff"]) for t in doc["terms"]} == {
            (((2,), (1,)), 1),
            (((1,), (0,)), 1),
            (((0,), (-1,)), 1),
            (((-1,), (-2,)), 1),
        }

    def test_dump_boundary(self, tmp_path):
        """Test --boundary"""
        out = tmp_path / "b.json"
        result = CliRunner().invoke(
            cli, ["dump-chain", "--dim", "1", "--window", "2", "--boundary", "-o", str(out)]
        )
        assert result.exit_code == 0
        terms = _read_json(out)["result"]["terms"]
        assert {(t["vertices"][0][0], t["coeff"]) for t in terms} == {(-2, -1), (2, 1)}
