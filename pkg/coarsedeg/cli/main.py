"""
coarsedeg CLI - Coarse degrees, homotopies and fixed point witnesses

Usage:
    coarsedeg degree --map <map> --dim n --window L
    coarsedeg cfpp --map <map> --budget R --radii start:stop:step
    coarsedeg homotopy --map <map> --dim n
    coarsedeg coarse-check --map <map> --dim n
    coarsedeg demo lemma1|lemma2|lemma3|theorem|all
    coarsedeg dump-chain --dim n --window L [--map <map>] [--boundary]

Exit codes: 0 success, 1 error, 2 unstable degree, 3 refuted at budget,
4 demo failure.
"""

import sys
from collections.abc import Callable

try:
    import click

    CLICK_AVAILABLE = True
except ImportError:
    CLICK_AVAILABLE = False
    click = None

from coarsedeg import __version__
from coarsedeg.cli.config import (
    FORMATS,
    REPRODUCIBLE_ENV,
    RunConfig,
    infer_format,
    parse_ladder,
    parse_radii,
)
from coarsedeg.cli.formatters import get_formatter
from coarsedeg.cli.report import Report, Stopwatch, format_point
from coarsedeg.utils.parallel import THREADS_ENV

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSTABLE = 2
EXIT_REFUTED = 3
EXIT_DEMO_FAILED = 4


class CoarseGroup(click.Group):
    """Click group whose usage errors exit with code 1 like every other error"""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra,
            )
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_ERROR)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_ERROR)
        if standalone_mode:
            sys.exit(rv if isinstance(rv, int) else EXIT_OK)
        return rv


def common_options(func: Callable) -> Callable:
    """Options shared by every command"""
    options = [
        click.option("--seed", type=int, default=0, show_default=True, help="Sampling seed"),
        click.option(
            "--format",
            "-f",
            "output_format",
            type=click.Choice(FORMATS, case_sensitive=False),
            default=None,
            help="Output format [default: json, or inferred from --output]",
        ),
        click.option(
            "--output", "-o", type=click.Path(), default=None, help="Write output to file instead of stdout"
        ),
        click.option(
            "--threads",
            type=int,
            default=None,
            envvar=THREADS_ENV,
            show_envvar=True,
            help="Worker threads [default: 1]",
        ),
        click.option(
            "--reproducible",
            is_flag=True,
            envvar=REPRODUCIBLE_ENV,
            show_envvar=True,
            help="Omit the wall-clock duration so reports are byte-identical",
        ),
        click.option("--no-color", is_flag=True, help="Disable colored table output"),
        click.option("--verbose", "-v", is_flag=True, help="Print progress to stderr"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def map_options(func: Callable) -> Callable:
    """--map and the window geometry"""
    options = [
        click.option("--map", "map_text", type=str, required=True, help="Builtin or expression map"),
        click.option("--dim", type=int, default=2, show_default=True, help="Dimension n"),
        click.option("--spacing", type=float, default=1.0, show_default=True, help="Lattice spacing"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _progress(verbose: bool, message: str) -> None:
    if verbose:
        click.echo(f"[coarsedeg] {message}", err=True)


def _emit(report: Report, cfg: RunConfig, no_color: bool) -> None:
    fmt = cfg.output_format
    text = get_formatter(fmt).format(report, no_color=no_color or cfg.output is not None or not sys.stdout.isatty())
    if cfg.output:
        with open(cfg.output, "w") as f:
            f.write(text if text.endswith("\n") else text + "\n")
        click.echo(f"Report written to {cfg.output} ({fmt} format)", err=True)
    else:
        click.echo(text)


def _fail(e: Exception) -> None:
    click.echo(f"Error: {e}", err=True)
    if "--debug" in sys.argv:
        raise e
    sys.exit(EXIT_ERROR)


def _config(command: str, output_format: str | None, output: str | None, **kwargs) -> RunConfig:
    return RunConfig(command=command, output_format=infer_format(output_format, output), output=output, **kwargs)


@click.group(cls=CoarseGroup)
@click.version_option(version=__version__, prog_name="coarsedeg")
@click.option("--debug", is_flag=True, hidden=True, help="Re-raise errors with a traceback")
def cli(debug: bool):
    """
    coarsedeg - Computational coarse topology on Euclidean space

    Coarse degrees of maps of R^n, coarse homotopies to the antipodal map,
    and fixed point witness searches for half-space maps.
    """
    if not CLICK_AVAILABLE:
        print("CLI requires click library. Install with: pip install coarsedeg[cli]")
        sys.exit(1)


@cli.command()
@map_options
@click.option("--window", type=int, default=8, show_default=True, help="Window half-width L")
@click.option(
    "--collar", type=int, default=None, show_default="2, capped at L-1", help="Boundary collar"
)
@click.option("--test-points", type=int, default=8, show_default=True, help="Generic test points")
@common_options
def degree(map_text, dim, spacing, window, collar, test_points, seed, output_format, output, threads, reproducible, no_color, verbose):
    """
    Compute the coarse degree of a map

    Exit code 0 for a stable degree, 2 when the covering numbers disagree.

    Examples:

        \b
        $ coarsedeg degree --map "reflect(0)" --dim 2 --window 8
        $ coarsedeg degree --map "fold{translate(1)}" --dim 2 --window 16 -f csv
    """
    from coarsedeg.core.degree import degree as degree_fn
    from coarsedeg.core.lattice import Window
    from coarsedeg.maps.parser import parse_map

    try:
        clock = Stopwatch(reproducible)
        cfg = _config(
            "degree", output_format, output, map_text=map_text, dim=dim, window=window, spacing=spacing,
            collar=collar, seed=seed, test_points=test_points, threads=threads, reproducible=reproducible,
        )
        m = parse_map(map_text, dim)
        w = Window(n=dim, L=window, spacing=spacing, collar=collar)
        _progress(verbose, f"pushing the fundamental cycle of L={window} through {m}")
        result = degree_fn(m, dim, w, num_test_points=test_points, seed=seed, threads=threads)

        rows = [
            {"p": format_point(tp.p), "covering": tp.covering, "covering_half": tp.covering_half,
             "d": result.d, "stable": result.stable}
            for tp in result.test_points
        ]
        report = Report(cfg, {"map": str(m), **result.to_dict()}, rows, f"degree of {m}", clock.elapsed())
        _emit(report, cfg, no_color)
    except Exception as e:
        _fail(e)
    sys.exit(EXIT_OK if result.stable else EXIT_UNSTABLE)


@cli.command()
@map_options
@click.option("--budget", type=float, default=None, show_default="4·spacing + S(1)", help="Distance budget R")
@click.option("--radii", type=str, default="10:100:10", show_default=True, help="start:stop:step or a list")
@click.option("--points", type=int, default=256, show_default=True, help="Points per sphere")
@click.option("--halfspace", is_flag=True, help="Scan only the upper hemisphere (half-space maps)")
@click.option("--slerp", type=int, default=32, show_default=True, help="Candidate rays between dir(x) and dir(f(x))")
@common_options
def cfpp(map_text, dim, spacing, budget, radii, points, halfspace, slerp, seed, output_format, output, threads, reproducible, no_color, verbose):
    """
    Search for a coarse fixed point witness

    Exit code 0 when found, 3 when refuted at the budget and radius ladder.

    Examples:

        \b
        $ coarsedeg cfpp --map "translate(1,0)" --halfspace --budget 2 --radii 10:100:10
        $ coarsedeg cfpp --map "rotate(pi/2)" --budget 10 --radii 10:200:10
    """
    from coarsedeg.core.cfpp import search_witness, theorem_budget
    from coarsedeg.maps.parser import parse_map

    try:
        clock = Stopwatch(reproducible)
        ladder = parse_radii(radii)
        m = parse_map(map_text, dim)
        if budget is None:
            _progress(verbose, "measuring S(1) for the budget")
            budget = theorem_budget(m, spacing=spacing, seed=seed)
        cfg = _config(
            "cfpp", output_format, output, map_text=map_text, dim=dim, spacing=spacing, budget=budget,
            radii=ladder, points=points, halfspace=halfspace, slerp=slerp, seed=seed, threads=threads,
            reproducible=reproducible,
        )
        _progress(verbose, f"scanning {len(ladder)} spheres")
        verdict = search_witness(
            m, budget, ladder, points_per_sphere=points, seed=seed, halfspace=halfspace, slerp=slerp,
            threads=threads,
        )
        rows = [
            {"r": s.r, "best_max_dist": s.best_max_dist, "within_budget": s.best_max_dist <= budget,
             "x": format_point(s.x), "fx": format_point(s.fx), "zeta": format_point(s.zeta)}
            for s in verdict.scans
        ]
        report = Report(cfg, {"map": str(m), **verdict.to_dict()}, rows, f"fixed point witness for {m}", clock.elapsed())
        _emit(report, cfg, no_color)
    except Exception as e:
        _fail(e)
    sys.exit(EXIT_OK if verdict.found else EXIT_REFUTED)


@cli.command()
@map_options
@click.option("--ball", type=float, default=1.0, show_default=True, help="Ball radius T")
@click.option("--t-steps", type=int, default=16, show_default=True, help="t-grid k/steps")
@click.option("--ladder", type=str, default="4,8,16", show_default=True, help="Window ladder")
@click.option("--radii", type=str, default="1:4:1", show_default=True, help="Radii for the uniform modulus")
@click.option("--samples", type=int, default=10000, show_default=True, help="Triangle bound samples")
@click.option("--pairs", type=int, default=200, show_default=True, help="Pairs per radius")
@common_options
def homotopy(map_text, dim, spacing, ball, t_steps, ladder, radii, samples, pairs, seed, output_format, output, threads, reproducible, no_color, verbose):
    """
    Check the linear homotopy from the antipodal map to a map

    Measures uniform bornology, uniform properness and pseudocontinuity of
    H_t(x) = t·h(x) - (1-t)·x, and the triangle bound with C = 2(1+K).

    Examples:

        \b
        $ coarsedeg homotopy --map antipodal --dim 2
        $ coarsedeg homotopy --map "rotate(pi/2)" --dim 2 --ball 1
    """
    from coarsedeg.core.homotopy import homotopy_report, linear_homotopy, make_t_grid
    from coarsedeg.core.lattice import Window
    from coarsedeg.maps.parser import parse_map

    try:
        clock = Stopwatch(reproducible)
        rungs = parse_ladder(ladder)
        R_values = parse_radii(radii)
        cfg = _config(
            "homotopy", output_format, output, map_text=map_text, dim=dim, spacing=spacing, ball=ball,
            t_steps=t_steps, ladder=rungs, radii=R_values, samples=samples, pairs=pairs, seed=seed,
            threads=threads, reproducible=reproducible,
        )
        h = parse_map(map_text, dim)
        windows = [Window(n=dim, L=L, spacing=spacing) for L in rungs]
        _progress(verbose, f"measuring the linear homotopy to {h} on {t_steps + 1} knots")
        report_data = homotopy_report(
            linear_homotopy(h), R_values, ball, windows, make_t_grid(t_steps), seed=seed,
            pairs_per_radius=pairs, triangle_samples=samples, threads=threads,
        )

        rows = [{"check": "bornologous", "key": f"S({R:g})", "value": S} for R, S in report_data.bornologous.samples.items()]
        rows += [
            {"check": "properness", "key": f"L={L}", "value": norm}
            for L, norm in zip(report_data.properness.ladder, report_data.properness.max_preimage_norm)
        ]
        rows.append({"check": "properness", "key": "verdict", "value": str(report_data.properness.verdict)})
        rows.append({"check": "pseudocontinuity", "key": "R", "value": report_data.pseudocontinuity.R})
        rows.append({"check": "pseudocontinuity", "key": "refined_R", "value": report_data.pseudocontinuity.refined_R})
        if report_data.triangle is not None:
            rows.append({"check": "triangle", "key": "C", "value": report_data.triangle.C})
            rows.append({"check": "triangle", "key": "A", "value": report_data.triangle.A})
            rows.append({"check": "triangle", "key": "b", "value": report_data.triangle.b})
            rows.append({"check": "triangle", "key": "violations", "value": len(report_data.triangle.violations)})

        report = Report(cfg, {"map": str(h), **report_data.to_dict()}, rows, f"linear homotopy to {h}", clock.elapsed())
        _emit(report, cfg, no_color)
    except Exception as e:
        _fail(e)
    sys.exit(EXIT_OK)


@cli.command("coarse-check")
@map_options
@click.option("--radii", type=str, default="1:4:1", show_default=True, help="Radii R for S(R)")
@click.option("--pairs", type=int, default=200, show_default=True, help="Pairs per radius")
@click.option("--ball", type=float, default=1.0, show_default=True, help="Ball radius T")
@click.option("--ladder", type=str, default="4,8,16", show_default=True, help="Window ladder")
@common_options
def coarse_check(map_text, dim, spacing, radii, pairs, ball, ladder, seed, output_format, output, threads, reproducible, no_color, verbose):
    """
    Estimate whether a map is bornologous and proper

    Examples:

        \b
        $ coarsedeg coarse-check --map "scale(2)" --dim 2
        $ coarsedeg coarse-check --map "(x1, 0)" --dim 2 --ball 1
    """
    from coarsedeg.core.lattice import Window
    from coarsedeg.maps.coarseness import check_properness, estimate_bornologous_modulus
    from coarsedeg.maps.parser import parse_map

    try:
        clock = Stopwatch(reproducible)
        rungs = parse_ladder(ladder)
        R_values = parse_radii(radii)
        cfg = _config(
            "coarse-check", output_format, output, map_text=map_text, dim=dim, spacing=spacing,
            radii=R_values, pairs=pairs, ball=ball, ladder=rungs, seed=seed, threads=threads,
            reproducible=reproducible,
        )
        m = parse_map(map_text, dim)
        windows = [Window(n=dim, L=L, spacing=spacing) for L in rungs]
        modulus = estimate_bornologous_modulus(m, R_values, windows[-1], pairs_per_radius=pairs, seed=seed, threads=threads)
        properness = check_properness(m, ball, windows, seed=seed, threads=threads)

        rows = [{"check": "bornologous", "key": f"S({R:g})", "value": S} for R, S in modulus.samples.items()]
        rows += [
            {"check": "properness", "key": f"L={L}", "value": norm}
            for L, norm in zip(properness.ladder, properness.max_preimage_norm)
        ]
        rows.append({"check": "properness", "key": "verdict", "value": str(properness.verdict)})
        result = {"map": str(m), "bornologous": modulus.to_dict(), "properness": properness.to_dict()}
        _emit(Report(cfg, result, rows, f"coarseness of {m}", clock.elapsed()), cfg, no_color)
    except Exception as e:
        _fail(e)
    sys.exit(EXIT_OK)


@cli.command()
@click.argument("which", type=click.Choice(["lemma1", "lemma2", "lemma3", "theorem", "all"]))
@click.option("--seed", type=int, default=0, show_default=True, help="Sampling seed")
@click.option("--format", "-f", "output_format", type=click.Choice(FORMATS, case_sensitive=False), default=None, help="Output format [default: json]")
@click.option("--output", "-o", type=click.Path(), default=None, help="Write output to file instead of stdout")
@click.option("--threads", type=int, default=None, envvar=THREADS_ENV, show_envvar=True, help="Worker threads [default: 1]")
@click.option("--timed", is_flag=True, help="Record the wall-clock duration (reports are reproducible by default)")
@click.option("--no-color", is_flag=True, help="Disable colored table output")
@click.option("--verbose", "-v", is_flag=True, help="Print progress to stderr")
def demo(which, seed, output_format, output, threads, timed, no_color, verbose):
    """
    Rerun a demo bundle and print a pass/fail table

    Exit code 4 when any check fails.

    Examples:

        \b
        $ coarsedeg demo lemma1
        $ coarsedeg demo theorem -f table
    """
    from coarsedeg.cli.demo import BUNDLES, run_bundle

    try:
        clock = Stopwatch(reproducible=not timed)
        cfg = _config("demo", output_format, output, bundle=which, seed=seed, threads=threads, reproducible=not timed)
        rows = []
        for name in BUNDLES if which == "all" else (which,):
            _progress(verbose, f"running {name}")
            rows.extend(run_bundle(name, seed=seed, threads=threads))
        passed = all(row.passed for row in rows)
        result = {"bundle": which, "passed": passed, "checks": [row.to_dict() for row in rows]}
        report = Report(cfg, result, [row.to_row() for row in rows], f"demo {which}", clock.elapsed())
        _emit(report, cfg, no_color)
    except Exception as e:
        _fail(e)
    sys.exit(EXIT_OK if passed else EXIT_DEMO_FAILED)


@cli.command("dump-chain")
@click.option("--dim", type=int, default=2, show_default=True, help="Dimension n")
@click.option("--window", type=int, default=2, show_default=True, help="Window half-width L")
@click.option("--spacing", type=float, default=1.0, show_default=True, help="Lattice spacing")
@click.option("--map", "map_text", type=str, default=None, help="Push the cycle forward along this map")
@click.option("--boundary", is_flag=True, help="Dump the boundary instead of the cycle")
@common_options
def dump_chain(dim, window, spacing, map_text, boundary, seed, output_format, output, threads, reproducible, no_color, verbose):
    """
    Dump the fundamental cycle of a window as a chain document

    Examples:

        \b
        $ coarsedeg dump-chain --dim 1 --window 2 --map "reflect(0)"
        $ coarsedeg dump-chain --dim 2 --window 1 --boundary -f csv
    """
    from coarsedeg.core.chains import boundary as boundary_fn
    from coarsedeg.core.degree import pushforward
    from coarsedeg.core.lattice import Window, fundamental_cycle
    from coarsedeg.maps.evaluate import vertex_map
    from coarsedeg.maps.parser import parse_map

    try:
        clock = Stopwatch(reproducible)
        cfg = _config(
            "dump-chain", output_format, output, map_text=map_text, dim=dim, window=window,
            spacing=spacing, boundary=boundary, seed=seed, threads=threads, reproducible=reproducible,
        )
        chain = fundamental_cycle(Window(n=dim, L=window, spacing=spacing))
        if map_text:
            chain = pushforward(chain, vertex_map(parse_map(map_text, dim), spacing))
        if boundary:
            chain = boundary_fn(chain)
        rows = [
            {"vertices": " ".join("(" + ",".join(str(c) for c in v) + ")" for v in simplex), "coeff": coeff}
            for simplex, coeff in chain
        ]
        _emit(Report(cfg, chain.to_dict(), rows, repr(chain), clock.elapsed()), cfg, no_color)
    except Exception as e:
        _fail(e)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    cli()
