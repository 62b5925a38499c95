"""
The acceptance suite: every guaranteed property of the toolkit, checked on desk-scale grids.

Each criterion returns a :class:`~wiener_convex.verify.report.CheckReport`; a criterion that raises is reported as
failed with the error in its details, so :func:`verify_all` always returns a full report.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import cached_property
from logging import getLogger
from typing import Any, Callable, Dict, Final, List, Optional, Sequence, Tuple

import numpy as np

from wiener_convex.exceptions import ExperimentRunError
from wiener_convex.experiments.data import affine, hermite, quadratic_shift, random_convex_data
from wiener_convex.gauss.calculus import adjoint_residual, interior_mask, ou_semigroup
from wiener_convex.gauss.grid import (
    GAUSS_HERMITE,
    UNIFORM_TRUNCATED,
    GaussianGrid,
    GridSpec,
    ScalarField,
    VectorField,
    build_grid,
)
from wiener_convex.geometry.level_sets import bottom_of, extract_level_sets, level_set_optimality_check
from wiener_convex.geometry.problems import classify_minimizer, solve_volume_constrained, wulff_halfspace_check
from wiener_convex.geometry.sets import IndicatorSet, perimeter_gamma, volume
from wiener_convex.integrands.core import ConvexIntegrand, vector_norm
from wiener_convex.integrands.kinds import anisotropic_norm, euclidean_norm, power_p, quadratic
from wiener_convex.integrands.regularized import delta_regularize
from wiener_convex.solver.euler_lagrange import interior_max
from wiener_convex.solver.flow import gradient_flow
from wiener_convex.solver.params import Solution, SolverParams
from wiener_convex.solver.primal_dual import solve
from wiener_convex.solver.spectral import spectral_solve_quadratic
from wiener_convex.verify.coarea import coarea_check
from wiener_convex.verify.convexity import check_convexity_field, check_convexity_set
from wiener_convex.verify.duality import jensen_contraction_violation, jensen_energy_excess
from wiener_convex.verify.oracles import brute_force_interval_oracle, brute_force_rof_oracle
from wiener_convex.verify.report import CheckReport, jsonable
from wiener_convex.verify.sweep import dimension_sweep_check

_LOGGER = getLogger(__name__)

CORPUS_NODES: Final[Dict[int, int]] = {1: 257, 2: 65}
ORACLE_NODES: Final[int] = 65
TRUNCATION_RADIUS: Final[float] = 6.0
GAP_TOLERANCE: Final[float] = 1e-6
INSTANCE_SECONDS: Final[float] = 60.0
RANDOM_CONVEX_DATA: Final[int] = 20
RANDOM_PAIRS: Final[int] = 1000
SEMIGROUP_TRIALS: Final[int] = 10
OU_TIMES: Final[Tuple[float, ...]] = (1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0)
GAUSSIAN_HALF_PERIMETER: Final[float] = 1.0 / math.sqrt(2.0 * math.pi)

_TIGHT = dict(gap_tol=1e-9, max_iters=200_000)
_TABLE_X: Final[Tuple[float, ...]] = (-6.0, -2.0, -0.5, 1.0, 6.0)
_TABLE_Y: Final[Tuple[float, ...]] = (6.0, 1.0, -0.25, 0.5, 8.0)


def uniform_grid(dimension: int, nodes: int, radius: float = TRUNCATION_RADIUS) -> GaussianGrid:
    """A ``uniform_truncated`` grid on ``[-radius, radius]^dimension``."""
    return build_grid(
        GridSpec(dimension=dimension, nodes_per_axis=nodes, scheme=UNIFORM_TRUNCATED, truncation_radius=float(radius))
    )


def hermite_grid(dimension: int, nodes: int) -> GaussianGrid:
    """A Gauss-Hermite grid."""
    return build_grid(GridSpec(dimension=dimension, nodes_per_axis=nodes, scheme=GAUSS_HERMITE))


def corpus_integrands(dimension: int) -> Dict[str, ConvexIntegrand]:
    """The four integrand kinds every solve criterion covers."""
    return {
        "norm": euclidean_norm(),
        "power_p(1.5)": power_p(1.5),
        "quadratic": quadratic(1.0),
        "anisotropic": anisotropic_norm([2.0] if dimension == 1 else [1.0, 4.0]),
    }


def tabulated_convex(grid: GaussianGrid) -> ScalarField:
    """A piecewise linear convex profile of ``x1``, plus ``x2^2 / 4`` on two-dimensional grids."""
    values = np.interp(grid.coords[0], _TABLE_X, _TABLE_Y)
    if grid.dimension > 1:
        values = values + 0.25 * grid.coords[1] ** 2
    return ScalarField(grid, values)


def smooth_field(grid: GaussianGrid, rng: np.random.Generator) -> np.ndarray:
    """``sum_j sin(a_j x_j + b_j) + 0.3 c |x|^2`` with random coefficients."""
    a = rng.uniform(0.5, 2.0, size=grid.dimension)
    b = rng.uniform(0.0, 2.0 * math.pi, size=grid.dimension)
    c = float(rng.normal())
    values = sum(np.sin(a_j * x + b_j) for a_j, b_j, x in zip(a, b, grid.coords))
    return values + 0.3 * c * sum(x**2 for x in grid.coords)


def random_trial_field(grid: GaussianGrid, rng: np.random.Generator, localized: bool = False) -> np.ndarray:
    """Gaussian noise, or a random multiple of the indicator of a slab ``lo <= x1 < lo + width``."""
    if not localized:
        return 2.0 * rng.normal(size=grid.shape)
    lo = float(rng.uniform(-3.0, 3.0))
    width = float(rng.uniform(0.1, 1.5))
    x = grid.coords[0]
    return 2.0 * float(rng.normal()) * ((x >= lo) & (x < lo + width))


def corpus_data(grid: GaussianGrid) -> Dict[str, ScalarField]:
    """The four convex data fields every solve criterion covers."""
    last = grid.dimension - 1
    return {
        "hermite(1)": hermite(1, grid, 0),
        "hermite(2)": hermite(2, grid, last),
        "affine(1.5)": affine(1.5, grid, 0),
        "tabulated": tabulated_convex(grid),
    }


@dataclass(frozen=True, eq=False)
class Instance:
    """One solved corpus problem."""

    integrand: str
    data: str
    F: ConvexIntegrand = field(repr=False)
    g: ScalarField = field(repr=False)
    solution: Solution = field(repr=False)
    seconds: float = 0.0

    @property
    def label(self) -> str:
        """``integrand/data/dimension``."""
        return f"{self.integrand}/{self.data}/{self.g.grid.dimension}d"


def _timed_solve(F: ConvexIntegrand, g: ScalarField, params: Optional[SolverParams] = None) -> Tuple[Solution, float]:
    start = time.perf_counter()
    solution = solve(F, g, params)
    return solution, time.perf_counter() - start


def _worst(values: Sequence[float]) -> float:
    return float(max(values)) if len(values) else 0.0


class AcceptanceSuite:
    """The acceptance criteria sharing one seed and one solved corpus."""

    CRITERIA: Final[Tuple[str, ...]] = (
        "duality_gap",
        "convexity_of_minimizers",
        "spectral_agreement",
        "soft_thresholding",
        "energy_bound",
        "coarea",
        "adjointness",
        "ou_properties",
        "level_sets",
        "isoperimetry",
        "classification",
        "gradient_flow",
        "regularization_ladders",
        "oracle_cross_validation",
    )

    def __init__(self, seed: int = 0):
        self.seed = int(seed)

    def rng(self, offset: int = 0) -> np.random.Generator:
        """A generator derived from the suite seed; every criterion draws from its own stream."""
        return np.random.default_rng([self.seed, offset])

    @cached_property
    def line(self) -> GaussianGrid:
        """The one-dimensional corpus grid."""
        return uniform_grid(1, CORPUS_NODES[1])

    @cached_property
    def plane(self) -> GaussianGrid:
        """The two-dimensional corpus grid."""
        return uniform_grid(2, CORPUS_NODES[2])

    @cached_property
    def corpus(self) -> List[Instance]:
        """Every integrand solved against every datum on both corpus grids."""
        instances = []
        for grid in (self.line, self.plane):
            for data_name, g in corpus_data(grid).items():
                for name, F in corpus_integrands(grid.dimension).items():
                    solution, seconds = _timed_solve(F, g)
                    instances.append(Instance(name, data_name, F, g, solution, seconds))
                    _LOGGER.debug(f"Corpus {instances[-1].label}: relative gap {solution.relative_gap:.3e}")
        return instances

    @cached_property
    def random_instances(self) -> List[Instance]:
        """Solves against seeded random convex data on the line."""
        rng = self.rng(1)
        integrands = list(corpus_integrands(1).items())
        instances = []
        for i in range(RANDOM_CONVEX_DATA):
            g, formula = random_convex_data(self.line, rng)
            name, F = integrands[i % len(integrands)]
            solution, seconds = _timed_solve(F, g)
            instances.append(Instance(name, formula, F, g, solution, seconds))
        return instances

    def run(self, name: str) -> CheckReport:
        """
        Run one criterion, turning an error into a failed report.

        :raise ExperimentRunError: When ``name`` is not a criterion.
        """
        if name not in self.CRITERIA:
            raise ExperimentRunError(f"Unknown acceptance criterion {name}.")
        method: Callable[[], CheckReport] = getattr(self, name)
        try:
            report = method()
        except (ValueError, ArithmeticError) as e:
            _LOGGER.error(f"Criterion {name} raised {type(e).__name__}: {e}")
            report = CheckReport(name=name, passed=False, details={"error": f"{type(e).__name__}: {e}"})
        report.name = name
        report.seed = self.seed
        _LOGGER.info(f"Criterion {name}: {'passed' if report.passed else 'FAILED'}, measured {report.measured}")
        return report

    def duality_gap(self) -> CheckReport:
        """Every corpus instance converges to the relative gap tolerance within the time limit."""
        rows = [
            {
                "instance": inst.label,
                "relative_gap": inst.solution.relative_gap,
                "iterations": inst.solution.iterations,
                "converged": inst.solution.converged,
                "seconds": inst.seconds,
            }
            for inst in self.corpus
        ]
        failures = [
            r["instance"]
            for r in rows
            if not (r["converged"] and r["relative_gap"] <= GAP_TOLERANCE and r["seconds"] <= INSTANCE_SECONDS)
        ]
        return CheckReport(
            name="duality_gap",
            passed=not failures,
            measured=_worst([r["relative_gap"] for r in rows]),
            tolerance=GAP_TOLERANCE,
            details={"instances": len(rows), "failures": failures, "rows": rows},
        )

    def convexity_of_minimizers(self) -> CheckReport:
        """Converged minimisers for convex data pass the field convexity check."""
        rows = []
        for inst in self.corpus + self.random_instances:
            if not inst.solution.converged:
                continue
            report = check_convexity_field(inst.solution.u, seed=self.seed)
            rows.append({"instance": inst.label, "passed": report.passed, "measured": report.measured})
        failures = [r["instance"] for r in rows if not r["passed"]]
        return CheckReport(
            name="convexity_of_minimizers",
            passed=bool(rows) and not failures,
            measured=_worst([r["measured"] for r in rows]),
            details={"checked": len(rows), "failures": failures, "rows": rows},
        )

    def spectral_agreement(self) -> CheckReport:
        """The quadratic problem against its Hermite eigenfunction solutions."""
        tol = 1e-4
        gh = hermite_grid(1, 65)
        x = gh.coords[0]
        u1 = spectral_solve_quadratic(hermite(1, gh))
        u2 = spectral_solve_quadratic(hermite(2, gh))
        errors = {
            "spectral hermite(1)": interior_max(u1.like(u1.values - 0.5 * x), radius=4.0),
            "spectral hermite(2)": interior_max(u2.like(u2.values - (x**2 - 1.0) / 3.0), radius=4.0),
        }
        solution = solve(quadratic(1.0), hermite(1, self.line), SolverParams(**_TIGHT))
        pd = solution.u
        errors["primal-dual hermite(1)"] = interior_max(pd.like(pd.values - 0.5 * self.line.coords[0]), radius=4.0)
        worst = _worst(list(errors.values()))
        return CheckReport(
            name="spectral_agreement",
            passed=worst <= tol,
            measured=worst,
            tolerance=tol,
            details={"errors": errors, "primal_dual_relative_gap": solution.relative_gap},
        )

    def soft_thresholding(self) -> CheckReport:
        """Total variation of linear data ``c x``: zero below ``c = 1``, ``(c - 1) x`` above."""
        x = self.line.coords[0]
        params = SolverParams(**_TIGHT)
        rows = []
        for c, tol in ((0.25, 1e-4), (0.5, 1e-4), (0.9, 1e-4), (1.5, 1e-3), (2.0, 1e-3)):
            u = solve(euclidean_norm(), affine(c, self.line), params).u
            if c < 1.0:
                error = float(np.max(np.abs(u.values)))
            else:
                error = interior_max(u.like(u.values - (c - 1.0) * x), radius=4.0)
            rows.append({"c": c, "error": error, "tolerance": tol, "passed": error <= tol})
        return CheckReport(
            name="soft_thresholding",
            passed=all(r["passed"] for r in rows),
            measured=_worst([r["error"] for r in rows]),
            details={"rows": rows},
        )

    def energy_bound(self) -> CheckReport:
        """``|u| <= 2 |g|`` in the weighted norm on every converged instance."""
        excess = [
            (inst.label, inst.solution.u.norm() - 2.0 * inst.g.norm())
            for inst in self.corpus + self.random_instances
            if inst.solution.converged
        ]
        worst = _worst([e for _, e in excess])
        return CheckReport(
            name="energy_bound",
            passed=bool(excess) and worst <= 1e-8,
            measured=worst,
            tolerance=1e-8,
            details={"checked": len(excess), "failures": [label for label, e in excess if e > 1e-8]},
        )

    def coarea(self) -> CheckReport:
        """Total variation against the level integral of perimeters, isotropic and anisotropic."""
        line, plane = self.line, self.plane
        aniso_line, aniso_plane = anisotropic_norm([2.0]), anisotropic_norm([1.0, 4.0])
        x = line.coords[0]
        smooth = {
            "x": (ScalarField(line, x), None),
            "x^2": (ScalarField(line, x**2), None),
            "x (anisotropic)": (ScalarField(line, x), aniso_line),
            "x^2 (anisotropic)": (ScalarField(line, x**2), aniso_line),
            "x1 + x2": (ScalarField(plane, plane.coords[0] + plane.coords[1]), None),
            "x1 + x2 (anisotropic)": (ScalarField(plane, plane.coords[0] + plane.coords[1]), aniso_plane),
        }
        for inst in self.corpus:
            u = inst.solution.u
            if u.grid.dimension == 1 and np.ptp(u.values) >= 1e-2:
                smooth[f"solution {inst.label}"] = (u, None)
        half_line = IndicatorSet.from_predicate(line, lambda x1: x1 < 0.3).indicator()
        half_plane = IndicatorSet.from_predicate(plane, lambda x1, x2: x1 + 2.0 * x2 < 0.5).indicator()
        indicators = {
            "indicator {x < 0.3}": (half_line, None),
            "indicator {x1 + 2 x2 < 0.5}": (half_plane, None),
            "indicator {x1 + 2 x2 < 0.5} (anisotropic)": (half_plane, aniso_plane),
        }
        rows = []
        for name, (u, F) in smooth.items():
            report = coarea_check(u, F=F)
            rows.append({"field": name, "residual": report.measured, "tolerance": report.tolerance, "passed": report.passed})
        for name, (u, F) in indicators.items():
            report = coarea_check(u, F=F, tol=1e-10)
            rows.append({"field": name, "residual": report.measured, "tolerance": report.tolerance, "passed": report.passed})
        return CheckReport(
            name="coarea",
            passed=all(r["passed"] for r in rows),
            measured=_worst([r["residual"] for r in rows]),
            details={"rows": rows},
        )

    def adjointness(self) -> CheckReport:
        """Discrete integration by parts on random pairs on uniform and Gauss-Hermite grids."""
        rng = self.rng(7)
        grids = {
            "uniform 1d": self.line,
            "gauss_hermite 1d": hermite_grid(1, 65),
            "uniform 2d": self.plane,
            "gauss_hermite 2d": hermite_grid(2, 33),
        }
        rows = []
        for name, grid in grids.items():
            worst = 0.0
            for _ in range(RANDOM_PAIRS):
                u = ScalarField(grid, rng.normal(size=grid.shape))
                phi = VectorField(grid, rng.normal(size=grid.shape + (grid.dimension,)))
                worst = max(worst, adjoint_residual(u, phi) / (1.0 + u.norm() * phi.norm()))
            rows.append({"grid": name, "relative_residual": worst, "pairs": RANDOM_PAIRS})
        worst = _worst([r["relative_residual"] for r in rows])
        return CheckReport(
            name="adjointness",
            passed=worst <= 1e-12,
            measured=worst,
            tolerance=1e-12,
            details={"rows": rows},
        )

    def ou_properties(self) -> CheckReport:
        """
        Mass conservation, the action on ``x``, the semigroup law and both forms of the Jensen contraction of the
        Ornstein-Uhlenbeck flow.
        """
        grids = {
            "uniform 1d": (self.line, 2.0),
            "gauss_hermite 1d": (hermite_grid(1, 65), 3.0),
            "uniform 2d": (self.plane, 2.0),
        }
        mass_error = 0.0
        linear_error = 0.0
        for grid, radius in grids.values():
            one = ScalarField.constant(grid, 1.0)
            for t in (0.1, math.log(2.0), 1.0, 5.0):
                mass_error = max(mass_error, float(np.max(np.abs(ou_semigroup(one, t).values - 1.0))))
            x = ScalarField(grid, grid.coords[0])
            moved = ou_semigroup(x, math.log(2.0))
            residual = moved.like(moved.values - 0.5 * grid.coords[0])
            linear_error = max(linear_error, interior_max(residual, radius=radius))

        rng = self.rng(8)
        default = build_grid(GridSpec())
        semigroup_error = 0.0
        for _ in range(SEMIGROUP_TRIALS):
            u = ScalarField(default, smooth_field(default, rng))
            s, t = (float(v) for v in rng.uniform(0.05, 1.0, size=2))
            composed = ou_semigroup(ou_semigroup(u, s), t)
            difference = composed.like(composed.values - ou_semigroup(u, s + t).values)
            semigroup_error = max(semigroup_error, difference.norm())

        integrands = list(corpus_integrands(1).values())
        jensen = 0.0
        excess = 0.0
        for trial in range(RANDOM_PAIRS):
            F = integrands[int(rng.integers(0, len(integrands)))]
            phi = VectorField(self.line, random_trial_field(self.line, rng, localized=trial % 2 == 1)[..., None])
            t = float(rng.choice(OU_TIMES))
            scale = 1.0 + float(np.max(F.value(phi.values)))
            jensen = max(jensen, jensen_contraction_violation(F, phi, t) / scale)
            excess = max(excess, jensen_energy_excess(F, phi, t))
        passed = (
            mass_error <= 1e-10
            and linear_error <= 1e-6
            and semigroup_error <= 1e-4
            and jensen <= 1e-10
            and excess <= 1e-8
        )
        return CheckReport(
            name="ou_properties",
            passed=passed,
            measured=max(mass_error, linear_error, semigroup_error, jensen, excess),
            details={
                "mass_error": mass_error,
                "linear_error": linear_error,
                "semigroup_error": semigroup_error,
                "jensen_violation": jensen,
                "energy_excess": excess,
                "jensen_trials": RANDOM_PAIRS,
            },
        )

    def level_sets(self) -> CheckReport:
        """Nested families, optimality against the interval oracle and reconstruction, on five convex data."""
        line = self.line
        x = line.coords[0]
        data = {
            "hermite(2)": hermite(2, line),
            "affine(2)": affine(2.0, line),
            "|x|": ScalarField(line, np.abs(x)),
            "quadratic_shift": quadratic_shift(line, 0.5, 0.5, -1.0),
            "random": random_convex_data(line, self.rng(9))[0],
        }
        F = euclidean_norm()
        core = interior_mask(line, 3.0)
        rows = []
        for name, g in data.items():
            solution = solve(F, g)
            lam_bar, _ = bottom_of(solution.u)
            top = float(np.max(solution.u.values[core]))
            family = extract_level_sets(solution, np.linspace(lam_bar, top, 18)[1:])
            report = level_set_optimality_check(family, g, F)
            details = report.details
            reconstructed = details["reconstruction_error"] <= details["threshold_spacing"] + 1e-12
            rows.append(
                {
                    "data": name,
                    "excess": report.measured,
                    "slack": report.tolerance,
                    "nested": details["nested"],
                    "reconstruction_error": details["reconstruction_error"],
                    "threshold_spacing": details["threshold_spacing"],
                    "passed": report.passed and details["nested"] and reconstructed,
                }
            )
        return CheckReport(
            name="level_sets",
            passed=all(r["passed"] for r in rows),
            measured=_worst([r["excess"] for r in rows]),
            details={"rows": rows},
        )

    def isoperimetry(self) -> CheckReport:
        """The half-space of volume one half, and the anisotropic Wulff selection."""
        tol = 1e-3
        E, lam_star = solve_volume_constrained(ScalarField.constant(self.line, 0.0), 0.5)
        perimeter = perimeter_gamma(E)
        convex = check_convexity_set(E, seed=self.seed)
        wulff = wulff_halfspace_check(anisotropic_norm([1.0, 4.0]), 0.5, self.plane, seed=self.seed)
        nu = np.asarray(wulff.details["nu_min"])
        ratio = wulff.details["axis_values"]["+e2"] / wulff.measured
        errors = {"perimeter": abs(perimeter - GAUSSIAN_HALF_PERIMETER), "wulff": abs(wulff.measured - GAUSSIAN_HALF_PERIMETER)}
        passed = (
            max(errors.values()) <= tol
            and convex.passed
            and wulff.passed
            and np.allclose(nu, [1.0, 0.0])
            and abs(ratio - 2.0) <= 1e-9
        )
        return CheckReport(
            name="isoperimetry",
            passed=bool(passed),
            measured=max(errors.values()),
            tolerance=tol,
            details={
                "volume": volume(E),
                "perimeter": perimeter,
                "lambda_star": lam_star,
                "set_convex": convex.passed,
                "wulff": wulff.to_dict(),
                "e2_ratio": ratio,
            },
        )

    def classification(self) -> CheckReport:
        """Constant data on both sides of zero, and a quadratic against the interval oracle."""
        line = self.line
        negative = classify_minimizer(ScalarField.constant(line, -1.0))
        positive = classify_minimizer(ScalarField.constant(line, 1.0))
        g = ScalarField(line, line.coords[0] ** 2 - 2.0)
        mixed = classify_minimizer(g)
        _, oracle = brute_force_interval_oracle(g, 0.0)
        full = negative.minimizer is not None and negative.minimizer.count == line.size
        checks = {
            "negative_case_A": negative.case == "A",
            "negative_full_space": full,
            "negative_value": abs(negative.value + 1.0) <= 1e-3,
            "positive_case_B": positive.case == "B" and positive.minimizer is None,
            "oracle_sign": (mixed.case == "A") == (oracle < 0.0),
        }
        return CheckReport(
            name="classification",
            passed=all(checks.values()),
            measured=abs(negative.value + 1.0),
            tolerance=1e-3,
            details={
                "checks": checks,
                "negative": negative.to_dict(),
                "positive": positive.to_dict(),
                "x^2 - 2": mixed.to_dict(),
                "oracle_value": oracle,
            },
        )

    def gradient_flow(self) -> CheckReport:
        """Every implicit Euler iterate from a convex start stays convex."""
        line = self.line
        x = line.coords[0]
        rng = self.rng(12)
        starts = {"x^2": ScalarField(line, x**2), "|x| + x/2": ScalarField(line, np.abs(x) + 0.5 * x)}
        for i in range(3):
            u0, formula = random_convex_data(line, rng)
            starts[f"random {i}: {formula}"] = u0
        F = euclidean_norm()
        rows = []
        for name, u0 in starts.items():
            for dt in (0.1, 1.0):
                trajectory = gradient_flow(F, u0, dt, 10)
                reports = [check_convexity_field(u, seed=self.seed) for u in trajectory]
                rows.append(
                    {
                        "start": name,
                        "dt": dt,
                        "iterates": len(trajectory),
                        "passed": all(r.passed for r in reports),
                        "measured": _worst([r.measured for r in reports]),
                    }
                )
        return CheckReport(
            name="gradient_flow",
            passed=all(r["passed"] for r in rows),
            measured=_worst([r["measured"] for r in rows]),
            details={"rows": rows},
        )

    def regularization_ladders(self) -> CheckReport:
        """``F_delta -> F`` monotonically over halvings, and the dimension sweep over cylindrical data."""
        deltas = [0.5 / 2**k for k in range(5)]
        points = 2.0 * self.rng(13).normal(size=(100, 2))
        norms = vector_norm(points)
        ladder = {}
        increase = 0.0
        for name, F in (("norm", euclidean_norm()), ("anisotropic", anisotropic_norm([1.0, 4.0]))):
            exact = F.value(points)
            tol = 1e-6 * (1.0 + exact)
            gaps = np.array([np.abs(delta_regularize(F, d).value(points) - exact) for d in deltas])
            steps = np.max(gaps[1:] - gaps[:-1] - tol[None, :]) if len(deltas) > 1 else -np.inf
            limit = np.max(gaps[-1] - deltas[-1] * norms - tol)
            increase = max(increase, float(steps), float(limit))
            ladder[name] = {"max_gap": gaps.max(axis=1).tolist(), "worst_increase": float(steps)}
        sweep_grid = self.plane
        g = ScalarField.from_function(sweep_grid, lambda x1, x2: x1**2 + 0.5 * np.abs(x2 - 0.3))
        sweep = dimension_sweep_check(euclidean_norm(), g, [1, 2], seed=self.seed)
        return CheckReport(
            name="regularization_ladders",
            passed=increase <= 0.0 and sweep.passed,
            measured=increase,
            tolerance=0.0,
            details={"deltas": deltas, "ladder": ladder, "sweep": sweep.to_dict()},
        )

    def oracle_cross_validation(self) -> CheckReport:
        """Primal-dual objectives against the L-BFGS-B oracle on small one-dimensional problems."""
        tol = 1e-5
        grid = uniform_grid(1, ORACLE_NODES)
        params = SolverParams(gap_tol=1e-8, max_iters=200_000)
        rows = []
        for data_name, g in corpus_data(grid).items():
            for name, F in corpus_integrands(1).items():
                solution = solve(F, g, params)
                _, oracle = brute_force_rof_oracle(F, g, seed=self.seed)
                difference = abs(solution.primal_value - oracle)
                rows.append(
                    {
                        "instance": f"{name}/{data_name}",
                        "primal_dual": solution.primal_value,
                        "oracle": oracle,
                        "difference": difference,
                        "passed": difference <= tol,
                    }
                )
        return CheckReport(
            name="oracle_cross_validation",
            passed=all(r["passed"] for r in rows),
            measured=_worst([r["difference"] for r in rows]),
            tolerance=tol,
            details={"rows": rows},
        )


@dataclass
class AcceptanceReport:
    """The reports of one :func:`verify_all` run."""

    seed: int
    reports: List[CheckReport]

    @property
    def passed(self) -> bool:
        """All criteria passed."""
        return all(r.passed for r in self.reports)

    @property
    def failed(self) -> List[str]:
        """The names of the failed criteria."""
        return [r.name for r in self.reports if not r.passed]

    def to_dict(self) -> Dict[str, Any]:
        """A JSON friendly form."""
        return jsonable(
            {
                "seed": self.seed,
                "passed": self.passed,
                "failed": self.failed,
                "criteria": [r.to_dict() for r in self.reports],
            }
        )

    def summary_rows(self) -> List[List[Any]]:
        """``[name, passed, measured, tolerance]`` per criterion."""
        return [[r.name, r.passed, r.measured, r.tolerance] for r in self.reports]


def verify_all(seed: int = 0, criteria: Optional[Sequence[str]] = None) -> AcceptanceReport:
    """
    Run the acceptance suite.

    :param seed: The seed of every random draw.
    :param criteria: A subset of :attr:`AcceptanceSuite.CRITERIA`, all of them when None.
    :return: An :class:`AcceptanceReport`, deterministic given the seed apart from the timings.
    :raise ExperimentRunError: When an unknown criterion is named.
    """
    suite = AcceptanceSuite(seed)
    names = list(AcceptanceSuite.CRITERIA) if criteria is None else list(criteria)
    unknown = [n for n in names if n not in AcceptanceSuite.CRITERIA]
    if unknown:
        raise ExperimentRunError(f"Unknown acceptance criteria: {', '.join(unknown)}")
    start = time.perf_counter()
    reports = [suite.run(name) for name in names]
    _LOGGER.info(
        f"Acceptance suite with seed {seed}: {sum(r.passed for r in reports)}/{len(reports)} passed "
        f"in {time.perf_counter() - start:.1f}s"
    )
    return AcceptanceReport(seed, reports)
