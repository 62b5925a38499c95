"""
Set problems solved through one scalar solve: the volume constrained problem, the sign classification of
``min P(E) + sum_E w g`` and the half-space comparison for anisotropic perimeters.
"""
from __future__ import annotations

from dataclasses import dataclass
from logging import getLogger
from typing import Any, Dict, Final, Optional, Tuple

import numpy as np
from scipy.stats import norm

from wiener_convex.exceptions import IntegrandError, TruncationRadiusError, VolumeOutOfRangeError
from wiener_convex.gauss.grid import GaussianGrid, ScalarField
from wiener_convex.geometry.level_sets import bottom_of, extract_level_sets, uniform_field
from wiener_convex.geometry.sets import (
    IndicatorSet,
    anisotropic_perimeter,
    curvature_energy,
    encode_mask,
    perimeter_gamma,
    volume,
)
from wiener_convex.integrands.core import ConvexIntegrand
from wiener_convex.integrands.kinds import euclidean_norm
from wiener_convex.solver.params import SolverParams
from wiener_convex.solver.primal_dual import solve
from wiener_convex.verify.report import CheckReport

_LOGGER = getLogger(__name__)

VOLUME_TOLERANCE: Final[float] = 1e-3
WULFF_DIRECTIONS: Final[int] = 64
WULFF_SLACK_FACTOR: Final[float] = 5.0


def _scalar_integrand(F: Optional[ConvexIntegrand]) -> ConvexIntegrand:
    F = F or euclidean_norm()
    if not F.one_homogeneous:
        raise IntegrandError(f"Set problems need a one-homogeneous integrand, got {F.kind}.")
    return F


def _tilt(g: ScalarField, F: ConvexIntegrand) -> ScalarField:
    """``g + 2 F(nu) <nu, x>`` along the direction ``nu`` minimising ``F`` on the sphere."""
    nu, value = F.spherical_min()
    if nu.size != g.grid.dimension:
        nu = np.eye(g.grid.dimension)[0]
    slope = 2.0 * value
    projection = sum(n * x for n, x in zip(nu, g.grid.coords))
    return g.like(g.values + slope * projection)


def solve_volume_constrained(
    g: ScalarField,
    v: float,
    F: Optional[ConvexIntegrand] = None,
    params: Optional[SolverParams] = None,
    vol_tol: float = VOLUME_TOLERANCE,
) -> Tuple[IndicatorSet, float]:
    """
    Minimise ``P_F(E) + sum_E w g`` among sets of Gaussian volume ``v``.

    The scalar problem is solved once and its sublevel sets are searched by volume: the sorted values of ``u`` are
    scanned for the strict sublevel set whose volume is closest to ``v``. Constant data have only trivial level
    sets, so the data are tilted along the direction minimising ``F`` on the sphere, whose sublevel sets are the
    minimising half-spaces.

    :param g: The data.
    :param v: The volume, above the flat bottom ``v_bar`` of the scalar minimiser and below 1.
    :param F: The one-homogeneous integrand of the perimeter, the euclidean norm when None.
    :param params: The solver parameters.
    :param vol_tol: How far outside the reachable volumes ``v`` may lie.
    :return: The set and the threshold ``lam*``, the smallest node value whose strict sublevel set it is.
    :raise VolumeOutOfRangeError: When ``v <= v_bar`` or ``v >= 1``.
    :raise TruncationRadiusError: When the sublevel volumes of the grid do not reach ``v``.
    """
    F = _scalar_integrand(F)
    if not 0.0 < v < 1.0:
        raise VolumeOutOfRangeError(f"The volume must lie in (0, 1), got {v}.")
    data = g
    if np.ptp(g.values) == 0.0:
        data = _tilt(g, F)
        _LOGGER.info("Constant data: selecting half-space minimisers through a tilted scalar problem")
    solution = solve(F, data, params)
    u = uniform_field(solution.u)
    lam_bar, v_bar = bottom_of(u)
    if data is g and v <= v_bar:
        raise VolumeOutOfRangeError(
            f"The level set construction holds for every v > v_bar = {v_bar:.6g}; got v = {v}."
        )

    values = u.values.ravel()
    weights = u.grid.weights.ravel()
    order = np.argsort(values, kind="stable")
    ordered = values[order]
    volumes = np.cumsum(weights[order])
    # the first k sorted nodes form a strict sublevel set only when u_(k) > u_(k-1)
    k = np.arange(1, values.size)
    valid = k[ordered[k] > ordered[k - 1]]
    if valid.size == 0:
        raise TruncationRadiusError("The scalar minimiser has no nontrivial sublevel set on this grid.")
    reachable = volumes[valid - 1]
    if v < reachable[0] - vol_tol or v > reachable[-1] + vol_tol:
        raise TruncationRadiusError(
            f"Sublevel volumes range over [{reachable[0]:.6g}, {reachable[-1]:.6g}] and do not reach v = {v}; "
            f"increase the truncation radius or the resolution."
        )
    best = valid[int(np.argmin(np.abs(reachable - v)))]
    lam_star = float(ordered[best])
    E = IndicatorSet(u.grid, u.values < lam_star)
    _LOGGER.info(
        f"Volume constrained set: lambda* {lam_star:.6g}, volume {volume(E):.6g} for target {v}, "
        f"perimeter {anisotropic_perimeter(F, E):.6g}"
    )
    return E, lam_star


@dataclass(frozen=True, eq=False)
class Classification:
    """The sign classification of ``min P(E) + sum_E w g``."""

    case: str
    """``"A"`` when ``lam_bar < 0`` and the minimiser is the nonempty ``{u < 0}``, ``"B"`` otherwise."""
    lambda_bar: float
    v_bar: float
    value: float
    minimizer: Optional[IndicatorSet]
    boundary: bool
    """``lam_bar`` is zero up to the solver accuracy: zero energy sets other than the empty one may exist."""

    def to_dict(self) -> Dict[str, Any]:
        """A JSON friendly form with the minimiser run-length encoded."""
        return {
            "case": self.case,
            "lambda_bar": self.lambda_bar,
            "v_bar": self.v_bar,
            "value": self.value,
            "minimizer": encode_mask(self.minimizer) if self.minimizer is not None else None,
            "minimizer_volume": volume(self.minimizer) if self.minimizer is not None else 0.0,
            "boundary": self.boundary,
        }


def classify_minimizer(
    g: ScalarField,
    F: Optional[ConvexIntegrand] = None,
    params: Optional[SolverParams] = None,
    boundary_tolerance: float = 1e-6,
) -> Classification:
    """
    Decide between the two situations for ``min P(E) + sum_E w g``.

    Case A (``lam_bar < 0``): the minimiser ``{u < 0}`` is nonempty and its energy negative. Case B
    (``lam_bar >= 0``): the empty set is a minimiser with energy 0.

    :param g: The data.
    :param F: The one-homogeneous integrand of the perimeter.
    :param params: The solver parameters.
    :param boundary_tolerance: ``|lam_bar|`` below this flags the boundary case.
    :return: A :class:`Classification`.
    """
    F = _scalar_integrand(F)
    solution = solve(F, g, params)
    family = extract_level_sets(solution, [0.0])
    data = uniform_field(g, family.u)
    lam_bar = family.lambda_bar
    boundary = abs(lam_bar) <= boundary_tolerance
    if lam_bar < 0.0 and not family.sets[0].is_empty:
        E = family.sets[0]
        value = curvature_energy(E, data, 0.0, F)
        case, minimizer = "A", E
    else:
        value, case, minimizer = 0.0, "B", None
    _LOGGER.info(f"Classification: case {case}, lambda_bar {lam_bar:.6g}, value {value:.6g}")
    return Classification(case, lam_bar, family.v_bar, value, minimizer, boundary)


def _axis_half_space(grid: GaussianGrid, axis: int, sign: float, v: float) -> IndicatorSet:
    """The discrete half-space ``{sign x_axis < a}`` whose volume is closest to ``v``."""
    x = grid.axis_nodes[axis]
    weights = grid.axis_weights[axis] if sign > 0 else grid.axis_weights[axis][::-1]
    mass = np.cumsum(weights)
    count = int(np.argmin(np.abs(mass - v))) + 1
    line = np.zeros(x.size, dtype=bool)
    if sign > 0:
        line[:count] = True
    else:
        line[x.size - count :] = True
    shape = [1] * grid.dimension
    shape[axis] = -1
    return IndicatorSet(grid, np.broadcast_to(line.reshape(shape), grid.shape))


def _axis_slab(grid: GaussianGrid, axis: int, v: float) -> IndicatorSet:
    """The discrete centred slab ``{|x_axis| < b}`` whose volume is closest to ``v``."""
    x = grid.axis_nodes[axis]
    order = np.argsort(np.abs(x), kind="stable")
    mass = np.cumsum(grid.axis_weights[axis][order])
    count = int(np.argmin(np.abs(mass - v))) + 1
    line = np.zeros(x.size, dtype=bool)
    line[order[:count]] = True
    shape = [1] * grid.dimension
    shape[axis] = -1
    return IndicatorSet(grid, np.broadcast_to(line.reshape(shape), grid.shape))


def wulff_halfspace_check(
    F: ConvexIntegrand,
    v: float,
    grid: Optional[GaussianGrid] = None,
    seed: int = 0,
    directions: int = WULFF_DIRECTIONS,
) -> CheckReport:
    """
    Check that the half-space normal to the minimiser of ``F`` on the sphere solves the Wulff problem.

    The candidate value is ``F(nu_min) phi(Phi^-1(v))``. It is compared with the half-spaces of volume ``v`` along
    ``directions`` random unit vectors and the axes, and, when a uniform grid is given, with the discrete
    axis half-spaces and centred slabs of volume closest to ``v``.

    :param F: A one-homogeneous integrand with a known spherical minimiser.
    :param v: The volume, in (0, 1).
    :param grid: An optional uniform grid for the discrete comparison.
    :param seed: The seed of the sampled directions.
    :param directions: The number of random directions.
    :return: A :class:`CheckReport` whose measured value is the candidate value.
    :raise IntegrandError: When ``F`` is not one-homogeneous or has no known spherical minimiser.
    :raise VolumeOutOfRangeError: When ``v`` is not in (0, 1).
    """
    if not 0.0 < v < 1.0:
        raise VolumeOutOfRangeError(f"The Wulff volume must lie in (0, 1), got {v}.")
    nu, f_min = F.spherical_min()
    m = grid.dimension if grid is not None else (F.dimension or nu.size)
    density = float(norm.pdf(norm.ppf(v)))
    value = f_min * density

    rng = np.random.default_rng(seed)
    sampled = rng.normal(size=(directions, m))
    sampled /= np.linalg.norm(sampled, axis=1, keepdims=True)
    axes = np.concatenate([np.eye(m), -np.eye(m)])
    sampled_values = F.value(np.concatenate([sampled, axes])) * density
    axis_values = {
        f"{'+' if s > 0 else '-'}e{j + 1}": float(F.value(s * np.eye(m)[j]) * density) for s in (1.0, -1.0) for j in range(m)
    }
    slack = 1e-10
    passed = bool(np.min(sampled_values) >= value - slack)

    details: Dict[str, Any] = {
        "nu_min": nu.tolist(),
        "density": density,
        "sampled_min": float(np.min(sampled_values)),
        "axis_values": axis_values,
        "attained": True,
    }
    if grid is not None:
        slack = WULFF_SLACK_FACTOR * grid.max_spacing
        discrete = {}
        for j in range(m):
            for s in (1.0, -1.0):
                discrete[f"half_space_{'+' if s > 0 else '-'}e{j + 1}"] = anisotropic_perimeter(
                    F, _axis_half_space(grid, j, s, v)
                )
            discrete[f"slab_e{j + 1}"] = anisotropic_perimeter(F, _axis_slab(grid, j, v))
        details["discrete"] = discrete
        axis = int(np.argmax(np.abs(nu)))
        if np.isclose(abs(nu[axis]), 1.0):
            sign = "+" if nu[axis] > 0 else "-"
            candidate = discrete[f"half_space_{sign}e{axis + 1}"]
            details["discrete_candidate"] = candidate
            passed = passed and min(discrete.values()) >= candidate - slack
    return CheckReport(
        name="wulff_halfspace",
        passed=passed,
        measured=value,
        tolerance=slack,
        seed=seed,
        details=details,
    )


def perimeter_report(E: IndicatorSet, F: Optional[ConvexIntegrand] = None) -> Dict[str, float]:
    """Volume and perimeters of a set."""
    report = {"volume": volume(E), "perimeter": perimeter_gamma(E)}
    if F is not None:
        report["anisotropic_perimeter"] = anisotropic_perimeter(F, E)
    return report
