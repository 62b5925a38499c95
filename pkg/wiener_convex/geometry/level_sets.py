"""
Sublevel sets of solved fields.

For the total variation problem with data ``g`` the strict sublevel sets ``E_lam = {u < lam}`` of the minimiser
minimise ``P(E) + sum_E w (g - lam)``, and ``lam -> E_lam`` is nondecreasing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Dict, Final, Optional, Sequence, Tuple

import numpy as np

from wiener_convex.exceptions import GridError, LevelSetError
from wiener_convex.gauss.calculus import resample_to_uniform
from wiener_convex.gauss.grid import ScalarField
from wiener_convex.geometry.sets import IndicatorSet, curvature_energy, encode_mask, volume
from wiener_convex.integrands.core import ConvexIntegrand
from wiener_convex.solver.params import Solution
from wiener_convex.verify.oracles import brute_force_interval_oracle
from wiener_convex.verify.report import CheckReport

_LOGGER = getLogger(__name__)

VOLUME_EPSILON: Final[float] = 1e-9
"""Sets of smaller volume count as empty when locating the bottom of ``u``."""

FLAT_TOLERANCE: Final[float] = 1e-4
"""Values within ``FLAT_TOLERANCE * (1 + range of u)`` of the bottom belong to the flat bottom."""

OPTIMALITY_SLACK_FACTOR: Final[float] = 5.0
"""The optimality check allows an excess of this many grid spacings."""


def uniform_field(u: ScalarField, like: Optional[ScalarField] = None) -> ScalarField:
    """``u`` on a uniform grid, resampled onto the grid of ``like`` (or onto the default radius) when needed."""
    if like is not None:
        if u.grid.key == like.grid.key:
            return u
        return resample_to_uniform(u, like.grid.nodes_per_axis, like.grid.truncation_radius)
    return resample_to_uniform(u)


def bottom_of(u: ScalarField) -> Tuple[float, float]:
    """
    The bottom ``lam_bar = inf {lam : volume({u < lam}) > 0}`` and ``v_bar = volume({u <= lam_bar})``.

    :return: ``(lam_bar, v_bar)``.
    """
    values = u.values.ravel()
    weights = u.grid.weights.ravel()
    order = np.argsort(values, kind="stable")
    cumulative = np.cumsum(weights[order])
    first = int(np.searchsorted(cumulative, VOLUME_EPSILON, side="right"))
    first = min(first, values.size - 1)
    lam_bar = float(values[order][first])
    flat = FLAT_TOLERANCE * (1.0 + float(np.ptp(values)))
    v_bar = float(np.sum(weights[values <= lam_bar + flat]))
    return lam_bar, v_bar


@dataclass(frozen=True, eq=False)
class LevelSetFamily:
    """The strict sublevel sets of a solution at increasing thresholds."""

    source: Solution
    u: ScalarField = field(repr=False)
    """The solution on the uniform grid of the sets."""
    thresholds: np.ndarray = field(repr=False)
    sets: Tuple[IndicatorSet, ...] = field(repr=False)
    lambda_bar: float = 0.0
    v_bar: float = 0.0

    @property
    def grid(self):
        """The uniform grid of the sets."""
        return self.u.grid

    @property
    def volumes(self) -> np.ndarray:
        """The Gaussian volume of every set."""
        return np.array([volume(E) for E in self.sets])

    def is_nested(self) -> bool:
        """Exact containment of each set in the next."""
        return all(a.issubset(b) for a, b in zip(self.sets, self.sets[1:]))

    def to_dict(self) -> Dict[str, Any]:
        """Thresholds, volumes, bottom and run-length encoded sets."""
        return {
            "thresholds": self.thresholds.tolist(),
            "volumes": self.volumes.tolist(),
            "lambda_bar": self.lambda_bar,
            "v_bar": self.v_bar,
            "nested": self.is_nested(),
            "sets": [encode_mask(E) for E in self.sets],
        }


def extract_level_sets(sol: Solution, thresholds: Sequence[float]) -> LevelSetFamily:
    """
    The sets ``{u < lam}`` of ``sol.u`` for every threshold.

    Solutions on Gauss-Hermite grids are first interpolated onto a uniform grid.

    :param sol: The solution.
    :param thresholds: The thresholds, sorted and deduplicated here.
    :return: A :class:`LevelSetFamily`.
    :raise LevelSetError: When no threshold is given.
    """
    thresholds = np.unique(np.asarray(thresholds, dtype=float))
    if thresholds.size == 0:
        raise LevelSetError("At least one threshold is needed to extract level sets.")
    u = uniform_field(sol.u)
    sets = tuple(IndicatorSet(u.grid, u.values < lam) for lam in thresholds)
    lam_bar, v_bar = bottom_of(u)
    family = LevelSetFamily(sol, u, thresholds, sets, lam_bar, v_bar)
    if not family.is_nested():
        raise LevelSetError("Sublevel sets are not nested.")
    _LOGGER.debug(f"Extracted {thresholds.size} level sets, lambda_bar {lam_bar:.6g}, v_bar {v_bar:.6g}")
    return family


@dataclass(frozen=True, eq=False)
class Reconstruction:
    """``w(x) = min {lam_k : x in E_k}``; nodes in no set are not covered."""

    u: ScalarField = field(repr=False)
    values: np.ndarray = field(repr=False)
    covered: np.ndarray = field(repr=False)

    @property
    def uncovered(self) -> int:
        """The number of nodes in no set."""
        return int(np.count_nonzero(~self.covered))

    def max_error(self) -> float:
        """The largest ``|w - u|`` over covered nodes."""
        if not np.any(self.covered):
            return 0.0
        return float(np.max(np.abs(self.values[self.covered] - self.u.values[self.covered])))


def reconstruct_from_level_sets(family: LevelSetFamily) -> Reconstruction:
    """Rebuild the field from the family: every node takes the first threshold whose set holds it."""
    values = np.full(family.grid.shape, np.nan)
    covered = np.zeros(family.grid.shape, dtype=bool)
    for lam, E in zip(family.thresholds, family.sets):
        fresh = E.membership & ~covered
        values[fresh] = lam
        covered |= fresh
    return Reconstruction(family.u, values, covered)


def level_set_optimality_check(
    family: LevelSetFamily,
    g: ScalarField,
    F: Optional[ConvexIntegrand] = None,
    slack: Optional[float] = None,
) -> CheckReport:
    """
    Compare every set of a one-dimensional family with the interval oracle for its threshold.

    :param family: The family.
    :param g: The data of the solve.
    :param F: The one-homogeneous integrand of the perimeter, the euclidean norm when None.
    :param slack: The allowed excess, ``5 h`` by default.
    :return: A :class:`CheckReport` whose measured value is the worst excess.
    :raise GridError: When the family is not one-dimensional.
    """
    grid = family.grid
    if grid.dimension != 1:
        raise GridError("The level set optimality check is only available on one-dimensional grids.")
    g = uniform_field(g, family.u)
    slack = OPTIMALITY_SLACK_FACTOR * grid.max_spacing if slack is None else float(slack)
    rows = []
    for lam, E in zip(family.thresholds, family.sets):
        energy = curvature_energy(E, g, float(lam), F)
        _, best = brute_force_interval_oracle(g, float(lam), F)
        rows.append({"threshold": float(lam), "energy": energy, "oracle": best, "excess": energy - best})
    worst = max(row["excess"] for row in rows)
    reconstruction = reconstruct_from_level_sets(family)
    spacing = float(np.max(np.diff(family.thresholds))) if family.thresholds.size > 1 else np.inf
    return CheckReport(
        name="level_set_optimality",
        passed=worst <= slack,
        measured=worst,
        tolerance=slack,
        details={
            "rows": rows,
            "nested": family.is_nested(),
            "reconstruction_error": reconstruction.max_error(),
            "threshold_spacing": spacing,
            "uncovered": reconstruction.uncovered,
        },
    )
