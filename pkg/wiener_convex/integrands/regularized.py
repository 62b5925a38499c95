"""
Regularised integrands.

* :func:`smooth_approx` builds the smooth, uniformly convex integrand with quadratic growth
  ``F_n = env_{F, 1/n} + |p|^2 / (2n)``, where ``env_{F, mu}(p) = min_z F(z) + |p - z|^2 / (2 mu)``.
* :func:`delta_regularize` builds ``F_delta(p) = delta |p| + inf_q (|p - q| / delta + F(q))``, an integrand with
  linear growth whose conjugate is ``inf {F*(p) : |p| <= 1 / delta, |p - q| <= delta}``.
"""
from __future__ import annotations

import math
from functools import cached_property
from logging import getLogger
from typing import Any, Dict, Final

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from wiener_convex.exceptions import IntegrandError
from wiener_convex.integrands.core import (
    DELTA_REGULARIZED,
    DOMAIN_TOLERANCE,
    MOREAU_REGULARIZED,
    ConvexIntegrand,
    Growth,
    numeric_prox,
    project_ball,
    vector_norm,
)

_LOGGER = getLogger(__name__)

LATTICE_POINTS: Final[int] = 201
"""Candidates per axis of the inf-convolution lattice."""

LATTICE_HALF_WIDTH: Final[float] = 20.0
"""The lattice covers ``[-LATTICE_HALF_WIDTH / delta, LATTICE_HALF_WIDTH / delta]`` on every axis."""

SEGMENT_POINTS: Final[int] = 201
"""Candidates ``s p`` with ``s`` in ``[0, 1]`` added to the lattice for every point ``p``."""

DYKSTRA_ITERATIONS: Final[int] = 2000


class MoreauRegularized(ConvexIntegrand):
    """
    ``F_n(p) = env_{F, mu}(p) + eps |p|^2 / 2``.

    Smooth with ``(1 / mu + eps)``-Lipschitz gradient, ``eps``-strongly convex, and ``F_n(0) = 0`` whenever
    ``F >= 0`` and ``F(0) = 0``.
    """

    kind = MOREAU_REGULARIZED
    smooth = True

    def __init__(self, base: ConvexIntegrand, mu: float, eps: float):
        if not mu > 0.0 or not eps > 0.0:
            raise IntegrandError(f"moreau_regularized needs positive mu and eps, got {mu} and {eps}.")
        self.base = base
        self.mu = float(mu)
        self.eps = float(eps)
        self.radial = base.radial
        self.has_fast_prox = base.has_fast_prox
        super().__init__(
            Growth(p=2.0, alpha1=0.5 / self.mu + 0.5 * self.eps, beta1=0.0, alpha2=0.5 * self.eps, beta2=0.0),
            dimension=base.dimension,
        )

    def parameters(self) -> Dict[str, Any]:
        return {"mu": self.mu, "eps": self.eps, "base": self.base.describe()}

    def envelope(self, h):
        """The Moreau envelope ``env_{F, mu}(h)``."""
        h = self._vectors(h)
        z = self.base.prox(h, self.mu)
        return self.base.value(z) + np.sum((h - z) ** 2, axis=-1) / (2.0 * self.mu)

    def value(self, h):
        h = self._vectors(h)
        return self.envelope(h) + 0.5 * self.eps * np.sum(h * h, axis=-1)

    def grad(self, h):
        h = self._vectors(h)
        return (h - self.base.prox(h, self.mu)) / self.mu + self.eps * h

    def conjugate(self, q):
        """``min_r F*(r) + mu |r|^2 / 2 + |q - r|^2 / (2 eps)``, attained at a prox of ``F*``."""
        q = self._vectors(q)
        shrink = 1.0 + self.mu * self.eps
        r = self.base.prox_conjugate(q / shrink, self.eps / shrink)
        return (
            self.base.conjugate(r)
            + 0.5 * self.mu * np.sum(r * r, axis=-1)
            + np.sum((q - r) ** 2, axis=-1) / (2.0 * self.eps)
        )

    def recession(self, h):
        return np.where(vector_norm(self._vectors(h)) > 0.0, np.inf, 0.0)

    def prox(self, h, tau):
        h = self._vectors(h)
        shrink = 1.0 + tau * self.eps
        x = h / shrink
        s = tau / shrink
        return x + (s / (self.mu + s)) * (self.base.prox(x, self.mu + s) - x)


class DeltaRegularized(ConvexIntegrand):
    """
    ``F_delta(p) = delta |p| + inf_q (|p - q| / delta + F(q))`` for a base of dimension at most 2.

    The infimum is taken over a lattice of candidates, the segment ``[0, p]``, then refined locally; the
    minimand is convex in ``q`` so the refinement starts next to the global minimiser.
    """

    kind = DELTA_REGULARIZED
    has_fast_prox = False

    def __init__(self, base: ConvexIntegrand, delta: float):
        if not delta > 0.0 or not math.isfinite(delta):
            raise IntegrandError(f"delta_regularized needs a positive delta, got {delta}.")
        if base.dimension is not None and base.dimension > 2:
            raise IntegrandError("delta_regularized supports bases of dimension at most 2.")
        self.base = base
        self.delta = float(delta)
        self.radial = base.radial
        super().__init__(
            Growth(p=1.0, alpha1=self.delta + 1.0 / self.delta, beta1=0.0, alpha2=self.delta, beta2=0.0),
            dimension=base.dimension,
        )

    def parameters(self) -> Dict[str, Any]:
        return {"delta": self.delta, "base": self.base.describe()}

    @cached_property
    def _axis_lattice(self) -> np.ndarray:
        half = LATTICE_HALF_WIDTH / self.delta
        return np.linspace(-half, half, LATTICE_POINTS)

    def _lattice(self, d: int) -> np.ndarray:
        axis = self._axis_lattice
        if d == 1:
            return axis[:, None]
        grid = np.meshgrid(axis, axis, indexing="ij")
        return np.stack([g.ravel() for g in grid], axis=-1)

    def _inf_convolution_1d(self, p: float) -> float:
        base, delta = self.base, self.delta
        candidates = np.unique(
            np.concatenate([self._axis_lattice, np.linspace(0.0, 1.0, SEGMENT_POINTS) * p, [0.0, p]])
        )
        values = np.abs(p - candidates) / delta + base.value(candidates[:, None])
        i = int(np.argmin(values))
        best = float(values[i])
        low = candidates[max(i - 1, 0)]
        high = candidates[min(i + 1, candidates.size - 1)]
        if high > low:
            res = minimize_scalar(
                lambda z: abs(p - z) / delta + float(base.value(np.array([z]))),
                bounds=(low, high),
                method="bounded",
                options={"xatol": 1e-12 * max(1.0, abs(p))},
            )
            best = min(best, float(res.fun))
        return best

    def _inf_convolution_2d(self, p: np.ndarray, lattice: np.ndarray, lattice_values: np.ndarray) -> float:
        base, delta = self.base, self.delta
        segment = np.linspace(0.0, 1.0, SEGMENT_POINTS)[:, None] * p[None, :]
        segment_values = base.value(segment)
        candidates = np.concatenate([lattice, segment])
        values = vector_norm(p[None, :] - candidates) / delta + np.concatenate([lattice_values, segment_values])
        i = int(np.argmin(values))
        best = float(values[i])
        start = candidates[i]
        size = max(self._axis_lattice[1] - self._axis_lattice[0], vector_norm(p) / (SEGMENT_POINTS - 1))
        simplex = np.array([start, start + [size, 0.0], start + [0.0, size]])
        res = minimize(
            lambda z: float(vector_norm(p - z)) / delta + float(base.value(z)),
            start,
            method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": 1e-11, "fatol": 1e-13, "maxiter": 4000},
        )
        return min(best, float(res.fun))

    def value(self, h):
        h = self._vectors(h)
        d = h.shape[-1]
        if d > 2:
            raise IntegrandError("delta_regularized is only evaluated on vectors of dimension at most 2.")
        flat = h.reshape(-1, d)
        inner = np.empty(flat.shape[0])
        if d == 1:
            for i, point in enumerate(flat):
                inner[i] = self._inf_convolution_1d(float(point[0]))
        else:
            lattice = self._lattice(2)
            lattice_values = self.base.value(lattice)
            for i, point in enumerate(flat):
                inner[i] = self._inf_convolution_2d(point, lattice, lattice_values)
        return self.delta * vector_norm(h) + inner.reshape(h.shape[:-1])

    def conjugate(self, q):
        """
        ``inf {F*(p) : |p| <= 1 / delta, |p - q| <= delta}``, ``inf`` when the constraint set is empty.

        Closed form for radial bases (the smallest admissible ``|p|`` wins); indicator conjugates are decided by
        projecting ``q`` onto the intersection of the conjugate domain and the ``1 / delta`` ball.
        """
        q = self._vectors(q)
        delta = self.delta
        if self.base.radial:
            norm = vector_norm(q)
            target = np.maximum(norm - delta, 0.0)
            safe = np.where(norm > 0.0, norm, 1.0)
            nearest = q * (target / safe)[..., None]
            values = self.base.conjugate(nearest)
            return np.where(target <= (1.0 + DOMAIN_TOLERANCE) / delta, values, np.inf)
        if self.base.conjugate_is_indicator:
            projected = self._dykstra(q)
            distance = vector_norm(q - projected)
            return np.where(distance <= delta * (1.0 + 1e-6), 0.0, np.inf)
        raise IntegrandError(
            f"The conjugate of delta_regularized is only available for radial or indicator conjugate bases, "
            f"not {self.base.kind}."
        )

    def _dykstra(self, q: np.ndarray) -> np.ndarray:
        """Project onto ``dom F* intersected with the ball of radius 1 / delta`` by Dykstra's algorithm."""
        radius = 1.0 / self.delta
        x = q.copy()
        p_inc = np.zeros_like(q)
        q_inc = np.zeros_like(q)
        for _ in range(DYKSTRA_ITERATIONS):
            y = self.base.project_conjugate_domain(x + p_inc)
            p_inc = x + p_inc - y
            x_next = project_ball(y + q_inc, radius)
            q_inc = y + q_inc - x_next
            if np.max(np.abs(x_next - x)) <= 1e-13:
                x = x_next
                break
            x = x_next
        return x

    def prox(self, h, tau):
        return numeric_prox(self, h, tau)


def smooth_approx(F: ConvexIntegrand, n: int) -> MoreauRegularized:
    """
    The smooth, uniformly convex approximation ``F_n`` of ``F`` with quadratic growth.

    :param F: The integrand.
    :param n: The approximation index, ``n >= 1``; ``F_n -> F`` locally uniformly as ``n`` grows.
    :return: ``env_{F, 1/n} + |p|^2 / (2n)``.
    :raise IntegrandError: When ``n < 1``.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise IntegrandError(f"The smoothing index must be an integer n >= 1, got {n}.")
    return MoreauRegularized(F, mu=1.0 / n, eps=1.0 / n)


def delta_regularize(F: ConvexIntegrand, delta: float) -> DeltaRegularized:
    """
    The linear growth approximation ``F_delta`` of ``F``.

    :raise IntegrandError: When ``delta <= 0`` or the base dimension exceeds 2.
    """
    _LOGGER.debug(f"Regularising {F.kind} with delta={delta}")
    return DeltaRegularized(F, delta)
