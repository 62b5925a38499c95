"""
Checks of the dual representation of the integral functional and of its contraction along the Ornstein-Uhlenbeck
flow.
"""
from logging import getLogger
from typing import Final, Optional, Sequence

import numpy as np

from wiener_convex.exceptions import IntegrandError
from wiener_convex.gauss.calculus import gradient, ou_semigroup, ou_semigroup_values
from wiener_convex.gauss.grid import GaussianGrid, ScalarField, VectorField, inner_product
from wiener_convex.integrands.core import ConvexIntegrand
from wiener_convex.solver.energies import conjugate_energy, integrand_energy
from wiener_convex.verify.report import CheckReport

_LOGGER = getLogger(__name__)

MAX_BLOCKS: Final[int] = 4
_SHRINK_ATTEMPTS: Final[int] = 30


def _feasible_vectors(F: ConvexIntegrand, rng: np.random.Generator, count: int, m: int) -> np.ndarray:
    """Random vectors where ``F*`` is finite."""
    q = 2.0 * rng.normal(size=(count, m))
    if F.conjugate_is_indicator:
        return F.project_conjugate_domain(q)
    for _ in range(_SHRINK_ATTEMPTS):
        bad = ~np.isfinite(F.conjugate(q))
        if not np.any(bad):
            return q
        q[bad] *= 0.5
    q[~np.isfinite(F.conjugate(q))] = 0.0
    return q


def random_step_field(F: ConvexIntegrand, grid: GaussianGrid, rng: np.random.Generator) -> VectorField:
    """
    A field ``sum_i chi_{A_i} h_i`` with feasible values ``h_i``.

    The blocks ``A_i`` are slabs cut from a random linear function of the cell coordinates.
    """
    blocks = int(rng.integers(1, MAX_BLOCKS + 1))
    direction = rng.normal(size=grid.dimension)
    level = sum(a * x for a, x in zip(direction, grid.coords))
    cuts = np.sort(rng.uniform(np.min(level), np.max(level), size=blocks - 1))
    labels = np.digitize(level, cuts)
    values = _feasible_vectors(F, rng, blocks, grid.dimension)
    return VectorField(grid, values[labels])


def representation_lower_bound_check(
    F: ConvexIntegrand, u: ScalarField, trials: int = 10_000, seed: int = 0
) -> CheckReport:
    """
    Check ``<phi, grad u> - sum omega F*(phi) <= sum omega F(grad u)`` on random step fields ``phi``.

    The supremum is attained by a subgradient selection ``phi in dF(grad u)`` when the kind provides one; the
    report records how close that field comes.

    :param F: The integrand.
    :param u: The field.
    :param trials: The number of random step fields.
    :param seed: The seed.
    :return: A :class:`CheckReport` whose measured value is the worst excess of a lower bound.
    """
    rng = np.random.default_rng(seed)
    grad_u = gradient(u)
    energy = integrand_energy(F, grad_u)
    slack = 1e-10 * (1.0 + abs(energy))
    worst = -np.inf
    for _ in range(trials):
        phi = random_step_field(F, u.grid, rng)
        bound = inner_product(phi, grad_u) - conjugate_energy(F, phi)
        worst = max(worst, bound - energy)

    attained = None
    try:
        selection = VectorField(u.grid, F.subgradient(grad_u.values))
        attained = inner_product(selection, grad_u) - conjugate_energy(F, selection)
    except IntegrandError:
        _LOGGER.debug(f"No subgradient selection for {F.kind}, the attained bound is not reported")
    attainment_gap = None if attained is None else energy - attained
    passed = worst <= slack
    if attainment_gap is not None:
        passed = passed and abs(attainment_gap) <= 1e-8 * (1.0 + abs(energy))
    return CheckReport(
        name="representation_lower_bound",
        passed=bool(passed),
        measured=float(worst),
        tolerance=slack,
        seed=seed,
        details={
            "energy": energy,
            "trials": trials,
            "attained_bound": attained,
            "attainment_gap": attainment_gap,
        },
    )


def relaxation_monotonicity_check(
    F: ConvexIntegrand, u: ScalarField, t_list: Sequence[float], tol: Optional[float] = None
) -> CheckReport:
    """
    Check that ``sum omega F(grad T_t u)`` does not increase along the Ornstein-Uhlenbeck flow.

    The pass criterion is the monotone form: every energy is below the energy at the previous time up to ``tol``.
    The ratio to ``e^-t`` times the initial energy is reported for information.

    :param F: An integrand with ``F >= 0`` and ``F(0) = 0``.
    :param u: The field.
    :param t_list: The times, sorted here.
    :param tol: The interpolation tolerance, ``1e-8 + h^2 E(u)`` when None.
    :return: A :class:`CheckReport` whose measured value is the worst increase.
    """
    times = sorted(float(t) for t in t_list)
    initial = integrand_energy(F, gradient(u))
    tol = 1e-8 + u.grid.max_spacing**2 * initial if tol is None else float(tol)
    rows = []
    previous = initial
    worst = 0.0
    for t in times:
        energy = integrand_energy(F, gradient(ou_semigroup(u, t)))
        worst = max(worst, energy - initial, energy - previous)
        sharp = np.exp(-t) * initial
        rows.append(
            {"t": t, "energy": energy, "ratio": energy / initial if initial > 0.0 else 1.0, "sharp_bound": sharp}
        )
        previous = energy
    return CheckReport(
        name="relaxation_monotonicity",
        passed=worst <= tol,
        measured=worst,
        tolerance=tol,
        details={"initial_energy": initial, "rows": rows},
    )


def jensen_contraction_violation(F: ConvexIntegrand, phi: VectorField, t: float) -> float:
    """``max_x F(T_t phi)(x) - T_t(F(phi))(x)``, never positive in exact arithmetic."""
    left = F.value(ou_semigroup(phi, t).values)
    right = ou_semigroup_values(phi.grid, F.value(phi.values), t, cells=True)
    return float(np.max(left - right))


def jensen_energy_excess(F: ConvexIntegrand, phi: VectorField, t: float) -> float:
    """
    ``sum omega F(T_t phi) - sum omega F(phi)``, never positive in exact arithmetic.

    The pointwise inequality integrates to this one because the cell weights are invariant under ``T_t``.
    """
    return integrand_energy(F, ou_semigroup(phi, t)) - integrand_energy(F, phi)
