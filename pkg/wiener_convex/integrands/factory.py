"""Building integrands from experiment config sections."""
from logging import getLogger
from typing import List, Optional, Union

from wiener_convex.config.core import ConfigGroup, ConfigGroupValidation
from wiener_convex.config.item_types.float_item import FloatItem, FloatProperties
from wiener_convex.config.item_types.int_item import IntItem, IntProperties
from wiener_convex.config.item_types.list_item import ListItem, ListProperties
from wiener_convex.config.item_types.str_item import StrItem, StrProperties
from wiener_convex.exceptions import ConfigGroupValidationError, IntegrandError
from wiener_convex.integrands.core import (
    ANISOTROPIC_NORM,
    DELTA_REGULARIZED,
    EUCLIDEAN_NORM,
    KINDS,
    MOREAU_REGULARIZED,
    POWER_P,
    QUADRATIC,
    ConvexIntegrand,
)
from wiener_convex.integrands.kinds import (
    anisotropic_norm,
    euclidean_norm,
    power_p,
    quadratic,
    scaled,
)
from wiener_convex.integrands.regularized import delta_regularize, smooth_approx

_LOGGER = getLogger(__name__)

_BASE_KINDS = [EUCLIDEAN_NORM, POWER_P, QUADRATIC, ANISOTROPIC_NORM]


class IntegrandSpec(ConfigGroup):
    """The ``integrand`` section of an experiment config."""

    def __init__(
        self,
        doc: Optional[str] = None,
        kind: Optional[str] = EUCLIDEAN_NORM,
        p: Optional[Union[int, float]] = None,
        scale: Optional[Union[int, float]] = 1.0,
        mu: Optional[Union[int, float]] = None,
        weights: Optional[List[Union[int, float]]] = None,
        base: Optional[str] = None,
        delta: Optional[Union[int, float]] = None,
        n: Optional[int] = None,
    ):
        """
        The `IntegrandSpec` constructor.

        :param doc: An optional descriptor.
        :param kind: One of the integrand kinds.
        :param p: The exponent of ``power_p``.
        :param scale: A positive factor applied to the integrand.
        :param mu: The parameter of ``quadratic``.
        :param weights: The weights of ``anisotropic_norm``.
        :param base: The base kind of a regularised kind; its parameters are the ones of this section.
        :param delta: The parameter of ``delta_regularized``.
        :param n: The index of ``moreau_regularized``.
        """
        self.kind: StrItem = StrItem(
            value=kind,
            doc="The integrand kind.",
            properties=StrProperties(allow_null=False, default=EUCLIDEAN_NORM, options=list(KINDS)),
        )
        self.p: FloatItem = FloatItem(
            value=p,
            doc="The exponent of power_p.",
            properties=FloatProperties(allow_null=True, min_val=1, inclusive_min=True),
        )
        self.scale: FloatItem = FloatItem(
            value=scale,
            doc="A positive factor applied to the integrand.",
            properties=FloatProperties(allow_null=False, default=1.0, min_val=0, inclusive_min=False),
        )
        self.mu: FloatItem = FloatItem(
            value=mu,
            doc="The parameter of quadratic.",
            properties=FloatProperties(allow_null=True, min_val=0, inclusive_min=False),
        )
        self.weights: ListItem = ListItem(
            value=weights,
            doc="The weights a_j of anisotropic_norm.",
            properties=ListProperties(
                allow_null=True,
                element_types=[float, int],
                min_len=1,
                max_len=3,
                min_val=0,
                inclusive_min=False,
            ),
        )
        self.base: StrItem = StrItem(
            value=base,
            doc="The base kind of a regularised integrand.",
            properties=StrProperties(allow_null=True, options=_BASE_KINDS),
        )
        self.delta: FloatItem = FloatItem(
            value=delta,
            doc="The parameter of delta_regularized.",
            properties=FloatProperties(allow_null=True, min_val=0, inclusive_min=False),
        )
        self.n: IntItem = IntItem(
            value=n,
            doc="The index of moreau_regularized.",
            properties=IntProperties(allow_null=True, min_val=1, inclusive_min=True),
        )
        super().__init__(doc)

    def validate(self) -> ConfigGroupValidation:
        """Extend the parent validation with the parameters every kind requires."""
        super().validate()
        kind = self.kind.value
        base = self.base.value
        required = {
            POWER_P: ["p"],
            ANISOTROPIC_NORM: ["weights"],
            DELTA_REGULARIZED: ["base", "delta"],
            MOREAU_REGULARIZED: ["base", "n"],
        }
        needed = list(required.get(kind, []))
        if kind in (DELTA_REGULARIZED, MOREAU_REGULARIZED):
            needed += required.get(base, [])
        for name in needed:
            try:
                if getattr(self, name).value is None:
                    msg = f"The {kind} integrand requires '{name}' to be set."
                    raise ConfigGroupValidationError(msg)
            except ConfigGroupValidationError as e:
                self.validation.add_validation(msg, e)
        return self.validation


def _build_base(kind: str, spec: IntegrandSpec) -> ConvexIntegrand:
    if kind == EUCLIDEAN_NORM:
        return euclidean_norm()
    if kind == POWER_P:
        return power_p(float(spec.p.value))
    if kind == QUADRATIC:
        return quadratic(float(spec.mu.value or 1.0))
    if kind == ANISOTROPIC_NORM:
        return anisotropic_norm(spec.weights.value)
    raise IntegrandError(f"Unknown base integrand kind {kind}.")


def build_integrand(spec: IntegrandSpec) -> ConvexIntegrand:
    """
    Build the integrand described by an :class:`IntegrandSpec`.

    :raise IntegrandError: When the spec fails validation.
    """
    validation = spec.validate()
    if not validation.passed:
        raise IntegrandError("; ".join(validation.all_fail_reasons()))
    kind = spec.kind.value
    if kind == DELTA_REGULARIZED:
        F = delta_regularize(_build_base(spec.base.value, spec), float(spec.delta.value))
    elif kind == MOREAU_REGULARIZED:
        F = smooth_approx(_build_base(spec.base.value, spec), int(spec.n.value))
    else:
        F = _build_base(kind, spec)
    if spec.scale.value != 1:
        F = scaled(F, float(spec.scale.value))
    _LOGGER.debug(f"Built integrand {F!r}")
    return F
