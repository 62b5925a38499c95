"""Solver parameters and the solution record."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

from wiener_convex.config.core import ConfigGroupValidation
from wiener_convex.config.groups.validation import AllOrNoneGroup
from wiener_convex.config.item_types.bool_item import BoolItem, BoolProperties
from wiener_convex.config.item_types.float_item import FloatItem, FloatProperties
from wiener_convex.config.item_types.int_item import IntItem, IntProperties
from wiener_convex.exceptions import ConfigGroupValidationError
from wiener_convex.gauss.grid import ScalarField, VectorField


class SolverParams(AllOrNoneGroup):
    """The parameters of the primal-dual solver; null steps and operator norm are computed per grid."""

    _all_or_none = ("step_primal", "step_dual")

    def __init__(
        self,
        doc: Optional[str] = None,
        step_primal: Optional[Union[int, float]] = None,
        step_dual: Optional[Union[int, float]] = None,
        operator_norm_estimate: Optional[Union[int, float]] = None,
        max_iters: Optional[int] = 20000,
        gap_tol: Optional[Union[int, float]] = 1e-6,
        check_every: Optional[int] = 10,
        accelerate: Optional[bool] = True,
    ):
        """
        The `SolverParams` constructor.

        :param doc: An optional descriptor.
        :param step_primal: The primal step tau, or None for ``0.99 / L``.
        :param step_dual: The dual step sigma, or None for ``0.99 / L``.
        :param operator_norm_estimate: The norm L of the weighted gradient, or None to estimate it.
        :param max_iters: The iteration cap.
        :param gap_tol: The relative duality gap at which the solve stops.
        :param check_every: The number of iterations between two gap evaluations.
        :param accelerate: Use the accelerated step rule of the strongly convex data term.
        """
        self.step_primal: FloatItem = FloatItem(
            value=step_primal,
            doc="The primal step tau.",
            properties=FloatProperties(allow_null=True, min_val=0, inclusive_min=False),
        )
        self.step_dual: FloatItem = FloatItem(
            value=step_dual,
            doc="The dual step sigma.",
            properties=FloatProperties(allow_null=True, min_val=0, inclusive_min=False),
        )
        self.operator_norm_estimate: FloatItem = FloatItem(
            value=operator_norm_estimate,
            doc="The norm L of the weighted gradient.",
            properties=FloatProperties(allow_null=True, min_val=0, inclusive_min=False),
        )
        self.max_iters: IntItem = IntItem(
            value=max_iters,
            doc="The iteration cap.",
            properties=IntProperties(allow_null=False, default=20000, min_val=1, inclusive_min=True),
        )
        self.gap_tol: FloatItem = FloatItem(
            value=gap_tol,
            doc="The relative duality gap at which the solve stops.",
            properties=FloatProperties(allow_null=False, default=1e-6, min_val=0, inclusive_min=False),
        )
        self.check_every: IntItem = IntItem(
            value=check_every,
            doc="The number of iterations between two gap evaluations.",
            properties=IntProperties(allow_null=False, default=10, min_val=1, inclusive_min=True),
        )
        self.accelerate: BoolItem = BoolItem(
            value=accelerate,
            doc="Use the accelerated step rule of the strongly convex data term.",
            properties=BoolProperties(allow_null=False, default=True),
        )
        super().__init__(doc)

    def validate(self) -> ConfigGroupValidation:
        """Extend the parent validation with the step size condition ``tau sigma L^2 <= 1``."""
        super().validate()
        tau = self.step_primal.value
        sigma = self.step_dual.value
        norm = self.operator_norm_estimate.value
        try:
            if (
                all(isinstance(v, (int, float)) for v in (tau, sigma, norm))
                and tau * sigma * norm**2 > 1.0
            ):
                msg = f"Steps violate tau * sigma * L^2 <= 1: {tau} * {sigma} * {norm}^2 = {tau * sigma * norm**2}"
                raise ConfigGroupValidationError(msg)
        except ConfigGroupValidationError as e:
            self.validation.add_validation(msg, e)
        return self.validation


@dataclass(frozen=True, eq=False)
class Solution:
    """The outcome of a solve: the primal minimiser, a dual certificate and the gap between them."""

    u: ScalarField
    phi: VectorField
    g: ScalarField
    primal_value: float
    dual_value: float
    gap: float
    iterations: int
    converged: bool
    data_weight: float = 1.0
    operator_norm: Optional[float] = None
    history: Tuple[Tuple[int, float, float], ...] = field(default=(), repr=False)
    """``(iteration, primal, dual)`` at every gap check."""

    @property
    def relative_gap(self) -> float:
        """``gap / (1 + |primal|)``."""
        return self.gap / (1.0 + abs(self.primal_value))

    def summary(self) -> Dict[str, Any]:
        """The scalar outputs of the solve."""
        return {
            "primal_value": self.primal_value,
            "dual_value": self.dual_value,
            "gap": self.gap,
            "relative_gap": self.relative_gap,
            "iterations": self.iterations,
            "converged": self.converged,
            "data_weight": self.data_weight,
            "operator_norm": self.operator_norm,
        }

    def history_rows(self) -> List[Dict[str, float]]:
        """The gap checks as records."""
        return [{"iteration": k, "primal": p, "dual": d, "gap": p - d} for k, p, d in self.history]
