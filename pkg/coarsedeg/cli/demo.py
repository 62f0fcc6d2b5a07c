"""
Demo bundles

Each bundle reruns one result end to end and returns pass/fail rows with
the numbers behind them:

- lemma1: reflections have degree -1
- lemma2: the antipodal map of R^n has degree (-1)^n and is a
  composition of n reflections
- lemma3: the triangle bound, properness of the linear homotopy, and the
  rotation negative control
- theorem: folds of half-space maps have degree 0 and a fixed point witness
"""

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from coarsedeg.core.cfpp import search_witness, theorem_budget, verify_witness
from coarsedeg.core.degree import covering_number, degree, pushforward
from coarsedeg.core.homotopy import (
    check_uniformly_proper,
    linear_homotopy,
    make_t_grid,
    triangle_bound_check,
)
from coarsedeg.core.lattice import Window, enumerate_window, split_cycle
from coarsedeg.maps.ast_nodes import Antipodal, Composition, MapSpec, Reflection
from coarsedeg.maps.coarseness import Verdict
from coarsedeg.maps.evaluate import evaluate, fold_to_full_space, vertex_map
from coarsedeg.maps.parser import parse_map

BUNDLES = ("lemma1", "lemma2", "lemma3", "theorem")

DEGREE_WINDOW = 8
FOLD_WINDOW = 16
TRIANGLE_WINDOW = 32
TRIANGLE_SAMPLES = 10000
THEOREM_RADII = tuple(float(r) for r in range(10, 101, 10))
CONTROL_RADII = tuple(float(r) for r in range(10, 201, 10))
CONTROL_BUDGET = 10.0
CONTROL_SLACK = 0.05

TRIANGLE_ZOO = (
    "identity",
    "antipodal",
    "reflect(0)",
    "rotate(pi/2)",
    "translate(5,0)",
    "translate(-3,7)",
    "scale(2)",
    "scale(0.5)",
)

HALFSPACE_ZOO = (
    "identity",
    "translate(1,0)",
    "shear(1)",
    "(x1+1, abs(x2)+1)",
    "perturb(1,{seed}){{translate(0,1)}}",
)


@dataclass
class DemoRow:
    """One checked claim"""

    bundle: str
    case: str
    expected: Any
    observed: Any
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "bundle": self.bundle,
            "case": self.case,
            "expected": self.expected,
            "observed": self.observed,
            "status": "PASS" if self.passed else "FAIL",
            "details": self.details,
        }

    def to_row(self) -> dict[str, Any]:
        return {
            "bundle": self.bundle,
            "case": self.case,
            "expected": str(self.expected),
            "observed": str(self.observed),
            "status": "PASS" if self.passed else "FAIL",
        }


def _degree_row(bundle: str, case: str, m: MapSpec, n: int, L: int, expected: int, seed: int, threads):
    result = degree(m, n, Window(n=n, L=L), num_test_points=8, seed=seed, threads=threads)
    return DemoRow(
        bundle=bundle,
        case=case,
        expected=expected,
        observed=result.d,
        passed=result.stable and result.d == expected,
        details={"stable": result.stable, "safe_radius": result.safe_radius, "reason": result.reason},
    )


def run_lemma1(seed: int = 0, threads: int | None = None) -> list[DemoRow]:
    """Reflections in every axis of R^1..R^3 have degree -1"""
    rows = []
    for n in (1, 2, 3):
        for axis in range(n):
            rows.append(
                _degree_row(
                    "lemma1",
                    f"reflect({axis}) on R^{n}",
                    Reflection(domain_dim=n, axis=axis),
                    n,
                    DEGREE_WINDOW,
                    -1,
                    seed,
                    threads,
                )
            )

    # split z = Δ1 + Δ2 along x1 = 0; the reflection carries Δ1 onto the other side
    window = Window(n=2, L=DEGREE_WINDOW)
    lower, _ = split_cycle(window, 0)
    left, right = (-2.12, 1.37), (2.12, 1.37)
    flipped = pushforward(lower, vertex_map(Reflection(domain_dim=2, axis=0)))
    observed = (
        covering_number(lower, left),
        covering_number(lower, right),
        covering_number(flipped, right),
    )
    rows.append(
        DemoRow(
            bundle="lemma1",
            case="split cycle covering (Δ1 at x<0, Δ1 at x>0, r(Δ1) at x>0)",
            expected=(1, 0, -1),
            observed=observed,
            passed=observed == (1, 0, -1),
        )
    )
    return rows


def run_lemma2(seed: int = 0, threads: int | None = None) -> list[DemoRow]:
    """The antipodal map of R^n has degree (-1)^n and equals n reflections"""
    rows = []
    for n in (1, 2, 3):
        antipodal = Antipodal(domain_dim=n)
        rows.append(
            _degree_row(
                "lemma2", f"antipodal on R^{n}", antipodal, n, DEGREE_WINDOW, (-1) ** n, seed, threads
            )
        )

        reflections = Composition(
            domain_dim=n, parts=tuple(Reflection(domain_dim=n, axis=i) for i in range(n))
        )
        window = Window(n=n, L=DEGREE_WINDOW)
        mismatches = sum(
            1 for v in enumerate_window(window) if evaluate(reflections, v) != evaluate(antipodal, v)
        )
        rows.append(
            DemoRow(
                bundle="lemma2",
                case=f"antipodal = composition of {n} reflections on R^{n} (pointwise)",
                expected=0,
                observed=mismatches,
                passed=mismatches == 0,
            )
        )

        composed = degree(reflections, n, window, seed=seed, threads=threads)
        rows.append(
            DemoRow(
                bundle="lemma2",
                case=f"degree of the composition = (-1)^{n} (multiplicativity)",
                expected=(-1) ** n,
                observed=composed.d,
                passed=composed.stable and composed.d == (-1) ** n,
            )
        )
    return rows


def run_lemma3(seed: int = 0, threads: int | None = None) -> list[DemoRow]:
    """Triangle bound, properness discrimination and the rotation control"""
    rows = []
    window = Window(n=2, L=TRIANGLE_WINDOW)
    for text in TRIANGLE_ZOO:
        h = parse_map(text, 2)
        for T in (1.0, 2.0):
            bound = triangle_bound_check(h, T, window, num_samples=TRIANGLE_SAMPLES, seed=seed)
            rows.append(
                DemoRow(
                    bundle="lemma3",
                    case=f"triangle bound {text}, T={T:g}",
                    expected="0 violations",
                    observed=f"{len(bound.violations)} violations",
                    passed=not bound.violations,
                    details={"K": bound.K, "C": bound.C, "tested": bound.tested},
                )
            )

    ladder = [Window(n=2, L=L) for L in (4, 8, 16)]
    grid = make_t_grid()
    for text, expected in (("antipodal", Verdict.PROPER_AT_SCALE), ("identity", Verdict.SUSPECT)):
        report = check_uniformly_proper(
            linear_homotopy(parse_map(text, 2)), 1.0, ladder, grid, seed=seed, threads=threads
        )
        rows.append(
            DemoRow(
                bundle="lemma3",
                case=f"uniform properness of the linear homotopy to {text}",
                expected=str(expected),
                observed=str(report.verdict),
                passed=report.verdict is expected,
                details={"max_preimage_norm": list(report.max_preimage_norm)},
            )
        )

    rotation = parse_map("rotate(pi/2)", 2)
    verdict = search_witness(rotation, CONTROL_BUDGET, CONTROL_RADII, seed=seed, threads=threads)
    within = all(
        abs(s.best_max_dist - s.r * math.sin(math.pi / 4)) <= CONTROL_SLACK * s.r * math.sin(math.pi / 4)
        for s in verdict.scans
    )
    rows.append(
        DemoRow(
            bundle="lemma3",
            case="rotate(pi/2) refuted at budget 10, minima ≈ r·sin(π/4)",
            expected="refuted at budget/ladder",
            observed=verdict.label,
            passed=not verdict.found and within,
            details={"minima": [s.best_max_dist for s in verdict.scans]},
        )
    )
    rows.append(
        _degree_row("lemma3", "degree of rotate(pi/2) on R^2", rotation, 2, DEGREE_WINDOW, 1, seed, threads)
    )
    return rows


def run_theorem(seed: int = 0, threads: int | None = None) -> list[DemoRow]:
    """Folds of half-space maps: degree 0 and a witness with the modulus budget"""
    rows = []
    for template in HALFSPACE_ZOO:
        text = template.format(seed=seed)
        g = fold_to_full_space(parse_map(text, 2), seed=seed)
        rows.append(_degree_row("theorem", f"degree of fold{{{text}}}", g, 2, FOLD_WINDOW, 0, seed, threads))

        budget = theorem_budget(g, spacing=1.0, seed=seed)
        verdict = search_witness(g, budget, THEOREM_RADII, seed=seed, threads=threads)
        verified = verdict.found and verify_witness(g, verdict.witness)
        rows.append(
            DemoRow(
                bundle="theorem",
                case=f"fixed point witness for fold{{{text}}}",
                expected="found",
                observed=verdict.label,
                passed=verified,
                details={"budget": budget, "minima": [s.best_max_dist for s in verdict.scans]},
            )
        )
    return rows


RUNNERS: dict[str, Callable[..., list[DemoRow]]] = {
    "lemma1": run_lemma1,
    "lemma2": run_lemma2,
    "lemma3": run_lemma3,
    "theorem": run_theorem,
}


def run_bundle(which: str, seed: int = 0, threads: int | None = None) -> list[DemoRow]:
    """
    Run one bundle, or all of them for which == "all"

    Raises:
        ValueError: On an unknown bundle name
    """
    if which == "all":
        return [row for name in BUNDLES for row in RUNNERS[name](seed=seed, threads=threads)]
    if which not in RUNNERS:
        raise ValueError(f"Unknown demo bundle: {which}. Available: {', '.join(BUNDLES)}, all")
    return RUNNERS[which](seed=seed, threads=threads)
