from __future__ import annotations

import os.path
import pathlib
import time
from datetime import datetime
from logging import Logger, getLogger
from typing import Any, Dict, Final, List, Optional, Sequence, Tuple
from uuid import uuid4

import numpy as np

from wiener_convex import EXPERIMENTS_DIR
from wiener_convex.exceptions import ConfigGroupValidationError, ExperimentRunError, IntegrandError
from wiener_convex.experiments.config import (
    CLASSIFY,
    FLOW,
    ISOPERIMETRIC,
    LEVELSETS,
    SOLVE,
    SWEEP,
    VERIFY_ALL,
    ExperimentConfig,
)
from wiener_convex.experiments.data import build_data
from wiener_convex.experiments.io import ArtifactWriter
from wiener_convex.gauss.calculus import interior_mask
from wiener_convex.gauss.grid import GAUSS_HERMITE, GaussianGrid, ScalarField, VectorField, build_grid
from wiener_convex.geometry.level_sets import (
    bottom_of,
    extract_level_sets,
    level_set_optimality_check,
    reconstruct_from_level_sets,
    uniform_field,
)
from wiener_convex.geometry.problems import (
    classify_minimizer,
    perimeter_report,
    solve_volume_constrained,
    wulff_halfspace_check,
)
from wiener_convex.geometry.sets import IndicatorSet, encode_mask
from wiener_convex.integrands.core import QUADRATIC, ConvexIntegrand
from wiener_convex.integrands.factory import build_integrand
from wiener_convex.solver.euler_lagrange import interior_max
from wiener_convex.solver.flow import gradient_flow
from wiener_convex.solver.params import Solution
from wiener_convex.solver.primal_dual import solve
from wiener_convex.solver.spectral import spectral_solve_quadratic
from wiener_convex.verify.acceptance import verify_all
from wiener_convex.verify.convexity import check_convexity_field, check_convexity_set
from wiener_convex.verify.oracles import ORACLE_MAX_NODES, brute_force_interval_oracle, brute_force_rof_oracle
from wiener_convex.verify.report import CheckReport
from wiener_convex.verify.sweep import dimension_sweep_check

_LOGGER = getLogger(__name__)

EXIT_OK: Final[int] = 0
EXIT_INVALID: Final[int] = 1
EXIT_PROPERTY_FAILURE: Final[int] = 2

ENERGY_BOUND_SLACK: Final[float] = 1e-8
INTERIOR_RADIUS: Final[float] = 3.0
SPECTRAL_RADIUS: Final[float] = 4.0


class ExperimentRun:
    """
    The ``ExperimentRun`` class runs one task of an :class:`ExperimentConfig` and writes its artifacts.

    The ``ExperimentRun`` class can be used 'straight out of the box', as every config section has defaults.

    .. code::python

        run = ExperimentRun()
        run.exit_code

    The ``ExperimentRun`` class can also be used manually by setting auto=False.

    .. code::python

        run = ExperimentRun(config, auto=False)
        run.setup()
        run.execute()
        run.save()

    If no output directory is configured, a path is generated using the EXPERIMENTS_DIR, today's date, and the
    uuid of the instance of ``ExperimentRun``.
    """

    def __init__(
        self,
        config: Optional[ExperimentConfig] = None,
        output_dir: Optional[str] = None,
        formats: Optional[Sequence[str]] = None,
        seed: Optional[int] = None,
        base_path: Optional[pathlib.Path] = None,
        logger: Optional[Logger] = None,
        auto: bool = True,
    ):
        """
        The ExperimentRun constructor.

        :param config: An instance of ``ExperimentConfig``, the defaults when None.
        :param output_dir: Overrides ``output.directory``.
        :param formats: Overrides ``output.formats``.
        :param seed: Overrides ``seed``.
        :param base_path: The directory relative paths of the config are resolved against.
        :param logger: An optional custom logger to override the use of the default module logger.
        :param auto: If True, ``setup()``, ``execute()``, and ``save()`` are called automatically.
        """
        # Give the run an uuid
        self.uuid: Final[str] = str(uuid4())

        self.config: ExperimentConfig = config if config else ExperimentConfig()
        if output_dir is not None:
            self.config.output.directory = str(output_dir)
        if formats is not None:
            self.config.output.formats = list(formats)
        if seed is not None:
            self.config.seed = seed
        self.base_path = base_path
        self.auto = auto

        self.grid: Optional[GaussianGrid] = None
        self.F: Optional[ConvexIntegrand] = None
        self.g: Optional[ScalarField] = None
        self.output_dir: Optional[pathlib.Path] = None
        self.results: Dict[str, Any] = {}
        self.checks: List[CheckReport] = []
        self.wall_time: Optional[float] = None
        self._fields: Optional[Tuple[ScalarField, ScalarField, Optional[VectorField]]] = None
        self._plots: List[Tuple[str, Dict[str, ScalarField], Sequence[IndicatorSet], str]] = []

        self.logger = _LOGGER if logger is None else logger
        self.logger.debug(f"Run {self.uuid}: Run initialised")

        if self.auto:
            self.setup()
            self.execute()
            self.save()

    @property
    def task(self) -> str:
        """The configured task."""
        return self.config.task.value

    @property
    def seed(self) -> int:
        """The configured seed."""
        return self.config.seed.value

    @property
    def passed(self) -> bool:
        """Every property check of the run passed."""
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        """``0`` when every check passed, ``2`` otherwise."""
        return EXIT_OK if self.passed else EXIT_PROPERTY_FAILURE

    def _args_dict(self) -> Dict[str, Any]:
        return {
            "uuid": self.uuid,
            "task": self.task,
            "seed": self.seed,
            "config": self.config.to_dict(values_only=True),
        }

    def setup(self):
        """
        Validate the config, then build the grid, the integrand and the data.

        :raise ConfigGroupValidationError: When the config fails validation.
        """
        try:
            self.config.raise_if_invalid()
        except ConfigGroupValidationError as e:
            self.logger.critical(f"Run {self.uuid}: Invalid config: {e}")
            raise e

        directory = self.config.output.directory.value
        if directory:
            self.output_dir = pathlib.Path(directory)
        else:
            self.output_dir = pathlib.Path(
                os.path.join(EXPERIMENTS_DIR, str(datetime.now().date()), f"{self.uuid}")
            )

        if self.task == VERIFY_ALL:
            self.logger.debug(f"Run {self.uuid}: Acceptance suite needs no grid")
            return
        self.grid = build_grid(self.config.grid)
        self.logger.debug(f"Run {self.uuid}: Grid {self.grid.key} built")
        self.F = build_integrand(self.config.integrand)
        self.logger.debug(f"Run {self.uuid}: Integrand {self.F!r} built")
        self.g = build_data(self.config.data, self.grid, self.base_path)
        self.logger.debug(f"Run {self.uuid}: Data {self.config.data.name.value} built")

    def execute(self) -> Dict[str, Any]:
        """
        Run the configured task.

        :return: The results of the task.
        :raise ExperimentRunError: When the run has not been set up.
        """
        if self.output_dir is None:
            msg = (
                f"Cannot execute run {self.uuid} as it has not been setup. "
                f"Call .setup() on the instance of {self.__class__.__name__} to setup the run."
            )
            self.logger.error(msg)
            raise ExperimentRunError(msg)
        self.logger.debug(f"Run {self.uuid}: Executing task {self.task}")
        start = time.perf_counter()
        tasks = {
            SOLVE: self._solve,
            LEVELSETS: self._levelsets,
            ISOPERIMETRIC: self._isoperimetric,
            CLASSIFY: self._classify,
            FLOW: self._flow,
            SWEEP: self._sweep,
            VERIFY_ALL: self._verify_all,
        }
        self.results = tasks[self.task]()
        self.wall_time = time.perf_counter() - start
        self.logger.info(
            f"Run {self.uuid}: Task {self.task} finished in {self.wall_time:.2f}s, "
            f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed"
        )
        return self.results

    def _solution(self) -> Solution:
        solution = solve(self.F, self.g, self.config.solver)
        self.checks.append(
            CheckReport(
                name="duality_gap",
                passed=solution.converged,
                measured=solution.relative_gap,
                tolerance=self.config.solver.gap_tol.value,
            )
        )
        return solution

    def _convexity_checks(self, label: str, fields: Sequence[ScalarField], start: ScalarField) -> Dict[str, Any]:
        """Check ``fields`` for convexity when ``start`` is convex."""
        start_report = check_convexity_field(start, seed=self.seed)
        if not start_report.passed:
            self.logger.debug(f"Run {self.uuid}: {label} is not convex, convexity of the results is not checked")
            return {"checked": False}
        reports = [check_convexity_field(u, seed=self.seed) for u in fields]
        worst = max(r.measured for r in reports)
        self.checks.append(
            CheckReport(
                name="convexity",
                passed=all(r.passed for r in reports),
                measured=worst,
                seed=self.seed,
                details={"fields": len(reports), "failed": [i for i, r in enumerate(reports) if not r.passed]},
            )
        )
        return {"checked": True, "passed": self.checks[-1].passed, "measured": worst}

    def _solve(self) -> Dict[str, Any]:
        solution = self._solution()
        u, g = solution.u, self.g
        lam_bar, v_bar = bottom_of(uniform_field(u))
        results: Dict[str, Any] = {
            "solution": solution.summary(),
            "lambda_bar": lam_bar,
            "v_bar": v_bar,
            "history": solution.history_rows(),
        }

        bound = u.norm() - 2.0 * g.norm()
        self.checks.append(
            CheckReport(
                name="energy_bound",
                passed=bound <= ENERGY_BOUND_SLACK,
                measured=bound,
                tolerance=ENERGY_BOUND_SLACK,
                details={"u_norm": u.norm(), "g_norm": g.norm()},
            )
        )
        results["convexity"] = self._convexity_checks("The data", [u], g)

        if self.F.kind == QUADRATIC and self.grid.scheme == GAUSS_HERMITE and self.grid.dimension <= 2:
            spectral = spectral_solve_quadratic(g, self.F.mu)
            results["spectral_residual"] = interior_max(u.like(u.values - spectral.values), radius=SPECTRAL_RADIUS)

        if self.grid.dimension == 1 and self.grid.nodes_per_axis <= ORACLE_MAX_NODES:
            try:
                _, objective = brute_force_rof_oracle(self.F, g, seed=self.seed)
                results["oracle_objective"] = objective
                results["oracle_residual"] = abs(solution.primal_value - objective)
            except IntegrandError as e:
                self.logger.debug(f"Run {self.uuid}: No oracle for {self.F.kind}: {e}")

        self._fields = (u, g, solution.phi)
        self._plots.append(("solution", {"u": u, "g": g}, (), f"{self.F.kind}, {self.config.data.name.value}"))
        return results

    def _thresholds(self, u: ScalarField) -> np.ndarray:
        configured = self.config.geometry.thresholds.value
        if configured:
            return np.asarray(configured, dtype=float)
        lam_bar, _ = bottom_of(u)
        core = interior_mask(u.grid, INTERIOR_RADIUS)
        top = float(np.max(u.values[core])) if np.any(core) else float(np.max(u.values))
        count = self.config.geometry.threshold_count.value
        return np.linspace(lam_bar, max(top, lam_bar), count + 1)[1:]

    def _levelsets(self) -> Dict[str, Any]:
        solution = self._solution()
        u = uniform_field(solution.u)
        family = extract_level_sets(solution, self._thresholds(u))
        reconstruction = reconstruct_from_level_sets(family)
        results: Dict[str, Any] = {
            "solution": solution.summary(),
            "level_sets": family.to_dict(),
            "reconstruction_error": reconstruction.max_error(),
            "uncovered": reconstruction.uncovered,
        }
        self.checks.append(CheckReport(name="nested", passed=family.is_nested()))
        if self.grid.dimension == 1 and self.F.one_homogeneous:
            self.checks.append(level_set_optimality_check(family, self.g, self.F))
        self._fields = (solution.u, self.g, solution.phi)
        self._plots.append(("level_sets", {"u": family.u}, family.sets, "strict sublevel sets of u"))
        return results

    def _isoperimetric(self) -> Dict[str, Any]:
        v = float(self.config.geometry.volume.value)
        E, lam_star = solve_volume_constrained(
            self.g, v, self.F, self.config.solver, float(self.config.geometry.vol_tol.value)
        )
        report = perimeter_report(E, self.F)
        results: Dict[str, Any] = {
            "volume": report["volume"],
            "target_volume": v,
            "perimeter": report["perimeter"],
            "anisotropic_perimeter": report["anisotropic_perimeter"],
            "lambda_star": lam_star,
            "set": encode_mask(E),
        }
        self.checks.append(check_convexity_set(E, seed=self.seed))
        try:
            wulff = wulff_halfspace_check(self.F, v, E.grid, seed=self.seed)
            self.checks.append(wulff)
            results["wulff"] = wulff.to_dict()
        except IntegrandError as e:
            self.logger.debug(f"Run {self.uuid}: No Wulff comparison for {self.F.kind}: {e}")
        self._plots.append(("set", {"indicator": E.indicator()}, (E,), f"volume {report['volume']:.4f}"))
        return results

    def _classify(self) -> Dict[str, Any]:
        classification = classify_minimizer(self.g, self.F, self.config.solver)
        results: Dict[str, Any] = {"classification": classification.to_dict()}
        if self.grid.dimension == 1:
            _, oracle = brute_force_interval_oracle(uniform_field(self.g), 0.0, self.F)
            agrees = classification.boundary or (classification.case == "A") == (oracle < 0.0)
            self.checks.append(
                CheckReport(
                    name="classification_oracle",
                    passed=agrees,
                    measured=oracle,
                    details={"case": classification.case, "boundary": classification.boundary},
                )
            )
            results["oracle_value"] = oracle
        if classification.minimizer is not None:
            E = classification.minimizer
            self._plots.append(("minimizer", {"indicator": E.indicator()}, (E,), f"case {classification.case}"))
        return results

    def _flow(self) -> Dict[str, Any]:
        dt = float(self.config.flow.dt.value)
        steps = self.config.flow.steps.value
        trajectory = gradient_flow(self.F, self.g, dt, steps, self.config.solver)
        results: Dict[str, Any] = {
            "dt": dt,
            "steps": steps,
            "norms": [u.norm() for u in trajectory],
            "convexity": self._convexity_checks("The initial field", trajectory[1:], self.g),
        }
        self._fields = (trajectory[-1], self.g, None)
        shown = {f"t = {k * dt:g}": trajectory[k] for k in sorted({0, steps // 2, steps})}
        self._plots.append(("flow", shown, (), f"implicit Euler, dt = {dt:g}"))
        return results

    def _sweep(self) -> Dict[str, Any]:
        report = dimension_sweep_check(self.F, self.g, self.config.sweep.dims.value, self.config.solver, self.seed)
        self.checks.append(report)
        return {"sweep": report.to_dict()}

    def _verify_all(self) -> Dict[str, Any]:
        acceptance = verify_all(self.seed)
        self.checks.extend(acceptance.reports)
        return {"acceptance": acceptance.to_dict()}

    def summary_rows(self) -> List[List[Any]]:
        """``[check, passed, measured, tolerance]`` per property check."""
        return [[c.name, c.passed, c.measured, c.tolerance] for c in self.checks]

    def save(self) -> pathlib.Path:
        """
        Write ``results.json``, ``fields.csv`` and the SVG plots, as far as requested by ``output.formats``.

        Artifacts already written are removed again when a later one fails.

        :return: The output directory.
        """
        writer = ArtifactWriter(self.output_dir, self.config.output.formats.value)
        try:
            writer.results(
                {
                    **self._args_dict(),
                    "results": self.results,
                    "checks": [c.to_dict() for c in self.checks],
                    "passed": self.passed,
                    "wall_time": self.wall_time,
                }
            )
            if self._fields is not None:
                writer.fields(*self._fields)
            for name, curves, sets, title in self._plots:
                writer.plot(name, curves, sets, title)
        except Exception as e:
            self.logger.error(f"Run {self.uuid}: Saving failed, removing partial artifacts: {e}")
            writer.cleanup()
            raise ExperimentRunError(f"Run {self.uuid}: artifacts could not be written to {self.output_dir}.") from e
        self.logger.debug(f"Run {self.uuid}: Saved {len(writer.written)} artifacts to: {self.output_dir}")
        return self.output_dir
