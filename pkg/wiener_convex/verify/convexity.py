"""Discrete convexity checks for scalar fields and node sets."""
from logging import getLogger
from typing import Final, Optional, Tuple

import numpy as np

from wiener_convex.gauss.calculus import interpolate
from wiener_convex.gauss.grid import ScalarField
from wiener_convex.geometry.sets import IndicatorSet, set_lines
from wiener_convex.verify.report import CheckReport

_LOGGER = getLogger(__name__)

DEFAULT_PAIRS: Final[int] = 10_000
MIN_WEIGHT: Final[float] = 1e-12
"""Nodes of smaller weight are ignored by the field check."""


def default_convexity_tolerance(u: ScalarField) -> float:
    """``1e-6 + 4 h^2 max|u|`` with ``h`` the largest spacing among nodes of non negligible weight."""
    h = u.grid.max_spacing
    return 1e-6 + 4.0 * h**2 * float(np.max(np.abs(u.values)))


def _second_differences(u: ScalarField, axis: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    The generalised second difference ``D`` along ``axis`` and the product ``h_- h_+`` of the adjacent spacings.

    Both arrays cover the nodes ``1 .. n-2`` along ``axis``.
    """
    x = u.grid.axis_nodes[axis]
    h_minus = x[1:-1] - x[:-2]
    h_plus = x[2:] - x[1:-1]
    values = np.moveaxis(u.values, axis, -1)
    forward = (values[..., 2:] - values[..., 1:-1]) / h_plus
    backward = (values[..., 1:-1] - values[..., :-2]) / h_minus
    d2 = 2.0 * (forward - backward) / (h_minus + h_plus)
    return np.moveaxis(d2, -1, axis), np.moveaxis(np.broadcast_to(h_minus * h_plus, d2.shape), -1, axis)


def _core_slice(ndim: int, axis: int) -> Tuple[slice, ...]:
    index = [slice(None)] * ndim
    index[axis] = slice(1, -1)
    return tuple(index)


def check_convexity_field(
    u: ScalarField,
    tol: Optional[float] = None,
    seed: int = 0,
    pairs: int = DEFAULT_PAIRS,
    min_weight: float = MIN_WEIGHT,
) -> CheckReport:
    """
    Check a field for discrete convexity.

    Two tests are run on the nodes of weight above ``min_weight``:

    * along every grid axis the negative undivided second difference ``-D h_- h_+`` stays below ``tol``;
    * on ``pairs`` random node pairs, the multilinear interpolant at the midpoint stays below the mean of the end
      values, up to ``tol`` plus the interpolation slack ``m h^2 max|D| / 4``.

    :param u: The field.
    :param tol: The tolerance, :func:`default_convexity_tolerance` when None.
    :param seed: The seed of the pair sampler.
    :param pairs: The number of random pairs.
    :param min_weight: Nodes of smaller weight are skipped.
    :return: A :class:`CheckReport` whose measured value is the worst violation.
    """
    grid = u.grid
    tol = default_convexity_tolerance(u) if tol is None else float(tol)
    heavy = grid.weights > min_weight

    axis_violation = 0.0
    max_curvature = 0.0
    worst_node = None
    for axis in range(grid.dimension):
        if grid.nodes_per_axis < 3:
            break
        d2, spacing = _second_differences(u, axis)
        mask = heavy[_core_slice(grid.dimension, axis)]
        if not np.any(mask):
            continue
        violation = np.where(mask, -d2 * spacing, -np.inf)
        index = np.unravel_index(int(np.argmax(violation)), violation.shape)
        if violation[index] > axis_violation:
            axis_violation = float(violation[index])
            node = list(index)
            node[axis] += 1
            worst_node = [float(grid.axis_nodes[k][node[k]]) for k in range(grid.dimension)]
        max_curvature = max(max_curvature, float(np.max(np.abs(d2[mask]))))

    rng = np.random.default_rng(seed)
    points = grid.points[heavy.ravel()]
    values = u.values.ravel()[heavy.ravel()]
    pair_violation = 0.0
    if points.shape[0] > 1 and pairs > 0:
        first = rng.integers(0, points.shape[0], size=pairs)
        second = rng.integers(0, points.shape[0], size=pairs)
        midpoint = interpolate(u, 0.5 * (points[first] + points[second]))
        pair_violation = max(0.0, float(np.max(midpoint - 0.5 * (values[first] + values[second]))))
    slack = 0.25 * grid.dimension * grid.max_spacing**2 * max_curvature

    passed = axis_violation <= tol and pair_violation <= tol + slack
    report = CheckReport(
        name="convexity_field",
        passed=bool(passed),
        measured=max(axis_violation, pair_violation - slack),
        tolerance=tol,
        seed=seed,
        details={
            "axis_violation": axis_violation,
            "pair_violation": pair_violation,
            "interpolation_slack": slack,
            "worst_node": worst_node,
            "pairs": int(pairs),
        },
    )
    if not passed:
        _LOGGER.debug(f"Convexity check failed: axis {axis_violation:.3e}, pairs {pair_violation:.3e}, tol {tol:.3e}")
    return report


def _contiguous(line: np.ndarray) -> bool:
    members = np.flatnonzero(line)
    return members.size == 0 or members[-1] - members[0] + 1 == members.size


def check_convexity_set(E: IndicatorSet, seed: int = 0, pairs: int = DEFAULT_PAIRS) -> CheckReport:
    """
    Check a node set for discrete convexity.

    Every axis-aligned and diagonal grid line must meet ``E`` in a contiguous run, and for ``pairs`` random member
    pairs the node nearest to the midpoint must be a member unless it is next to one.

    :param E: The set, on a uniform grid.
    :param seed: The seed of the pair sampler.
    :param pairs: The number of random member pairs.
    :return: A :class:`CheckReport` whose measured value counts the failures.
    """
    broken = [label for label, line in set_lines(E) if not _contiguous(line)]

    members = np.argwhere(E.membership)
    midpoint_failures = 0
    if members.shape[0] > 1 and pairs > 0:
        rng = np.random.default_rng(seed)
        first = members[rng.integers(0, members.shape[0], size=pairs)]
        second = members[rng.integers(0, members.shape[0], size=pairs)]
        midpoint = np.floor(0.5 * (first + second) + 0.5).astype(int)
        # a non member midpoint is tolerated when one of its neighbours is a member
        padded = np.pad(E.membership, 1)
        near = np.zeros(pairs, dtype=bool)
        for offset in np.ndindex(*(3,) * E.grid.dimension):
            shifted = midpoint + np.array(offset)
            near |= padded[tuple(shifted.T)]
        midpoint_failures = int(np.count_nonzero(~near))

    failures = len(broken) + midpoint_failures
    return CheckReport(
        name="convexity_set",
        passed=failures == 0,
        measured=float(failures),
        tolerance=0.0,
        seed=seed,
        details={
            "broken_lines": len(broken),
            "first_broken_line": broken[0] if broken else None,
            "midpoint_failures": midpoint_failures,
            "members": E.count,
        },
    )
