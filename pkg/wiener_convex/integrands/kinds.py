"""The closed form integrand kinds."""
from __future__ import annotations

import math
from logging import getLogger
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from wiener_convex.exceptions import IntegrandError
from wiener_convex.integrands.core import (
    ANISOTROPIC_NORM,
    DOMAIN_TOLERANCE,
    EUCLIDEAN_NORM,
    POWER_P,
    QUADRATIC,
    SCALED,
    ConvexIntegrand,
    Growth,
    ball_indicator,
    project_ball,
    unit_direction,
    vector_norm,
)

_LOGGER = getLogger(__name__)

_NEWTON_ITERATIONS = 80


def _radial_shrink(h: np.ndarray, radius_map) -> np.ndarray:
    """Replace ``|h|`` by ``radius_map(|h|)`` keeping the direction."""
    norm = vector_norm(h)
    return unit_direction(h, norm) * radius_map(norm)[..., None]


class EuclideanNorm(ConvexIntegrand):
    """``F(h) = |h|``; the Gaussian total variation integrand."""

    kind = EUCLIDEAN_NORM
    one_homogeneous = True
    radial = True
    conjugate_is_indicator = True

    def __init__(self):
        super().__init__(Growth(p=1.0, alpha1=1.0, beta1=0.0, alpha2=1.0, beta2=0.0))

    def value(self, h):
        return vector_norm(self._vectors(h))

    def conjugate(self, q):
        return ball_indicator(self._vectors(q), 1.0)

    def recession(self, h):
        return self.value(h)

    def prox(self, h, tau):
        return _radial_shrink(self._vectors(h), lambda r: np.maximum(r - tau, 0.0))

    def prox_conjugate(self, q, sigma):
        return project_ball(self._vectors(q), 1.0)

    def subgradient(self, h):
        return unit_direction(self._vectors(h))

    def project_conjugate_domain(self, q):
        return project_ball(self._vectors(q), 1.0)


class PowerP(ConvexIntegrand):
    """``F(h) = c |h|^p`` with ``p >= 1``."""

    kind = POWER_P
    radial = True

    def __init__(self, p: float, scale: float = 1.0):
        """
        The `PowerP` constructor.

        :param p: The exponent, at least 1.
        :param scale: The factor ``c > 0``.
        :raise IntegrandError: On an invalid exponent or scale.
        """
        if not p >= 1.0 or not math.isfinite(p):
            raise IntegrandError(f"power_p needs a finite exponent p >= 1, got {p}.")
        if not scale > 0.0 or not math.isfinite(scale):
            raise IntegrandError(f"power_p needs a positive scale, got {scale}.")
        self.p = float(p)
        self.scale = float(scale)
        self.one_homogeneous = self.p == 1.0
        self.conjugate_is_indicator = self.p == 1.0
        self.smooth = self.p > 1.0
        super().__init__(
            Growth(p=self.p, alpha1=self.scale, beta1=0.0, alpha2=self.scale, beta2=0.0)
        )

    def parameters(self) -> Dict[str, Any]:
        return {"p": self.p, "scale": self.scale}

    def value(self, h):
        return self.scale * vector_norm(self._vectors(h)) ** self.p

    def conjugate(self, q):
        q = self._vectors(q)
        if self.p == 1.0:
            return ball_indicator(q, self.scale)
        p, c = self.p, self.scale
        r = vector_norm(q)
        return c * (p - 1.0) * (r / (c * p)) ** (p / (p - 1.0))

    def recession(self, h):
        h = self._vectors(h)
        if self.p == 1.0:
            return self.value(h)
        return np.where(vector_norm(h) > 0.0, np.inf, 0.0)

    def _prox_radius(self, a: np.ndarray, tau: float) -> np.ndarray:
        """The root of ``r - a + tau c p r^(p-1) = 0`` on ``[0, a]``."""
        p, tc = self.p, tau * self.scale
        if p == 1.0:
            return np.maximum(a - tc, 0.0)
        if p == 2.0:
            return a / (1.0 + 2.0 * tc)
        if p == 1.5:
            b = 1.5 * tc
            s = 0.5 * (np.sqrt(b * b + 4.0 * a) - b)
            return s * s
        # safeguarded Newton with bisection fallback, bracket [0, a]
        low, high = np.zeros_like(a), a.copy()
        r = 0.5 * a
        for _ in range(_NEWTON_ITERATIONS):
            phi = r - a + tc * p * r ** (p - 1.0)
            if np.all(np.abs(phi) <= 1e-14 * np.maximum(a, 1.0)):
                break
            low = np.where(phi < 0.0, r, low)
            high = np.where(phi > 0.0, r, high)
            with np.errstate(divide="ignore", invalid="ignore"):
                slope = 1.0 + tc * p * (p - 1.0) * r ** (p - 2.0)
                step = r - phi / slope
            inside = np.isfinite(step) & (step > low) & (step < high)
            r = np.where(inside, step, 0.5 * (low + high))
        return r

    def prox(self, h, tau):
        h = self._vectors(h)
        return _radial_shrink(h, lambda r: self._prox_radius(r, tau))

    def prox_conjugate(self, q, sigma):
        q = self._vectors(q)
        if self.p == 1.0:
            return project_ball(q, self.scale)
        return super().prox_conjugate(q, sigma)

    def grad(self, h):
        h = self._vectors(h)
        if self.p == 1.0:
            return super().grad(h)
        norm = vector_norm(h)
        with np.errstate(divide="ignore", invalid="ignore"):
            factor = np.where(norm > 0.0, self.scale * self.p * norm ** (self.p - 2.0), 0.0)
        return factor[..., None] * h

    def subgradient(self, h):
        if self.p == 1.0:
            return self.scale * unit_direction(self._vectors(h))
        return self.grad(h)

    def project_conjugate_domain(self, q):
        if self.p == 1.0:
            return project_ball(self._vectors(q), self.scale)
        return super().project_conjugate_domain(q)


class Quadratic(ConvexIntegrand):
    """``F(h) = mu |h|^2 / 2``."""

    kind = QUADRATIC
    smooth = True
    radial = True

    def __init__(self, mu: float = 1.0):
        if not mu > 0.0 or not math.isfinite(mu):
            raise IntegrandError(f"quadratic needs a positive mu, got {mu}.")
        self.mu = float(mu)
        super().__init__(Growth(p=2.0, alpha1=0.5 * self.mu, beta1=0.0, alpha2=0.5 * self.mu, beta2=0.0))

    def parameters(self) -> Dict[str, Any]:
        return {"mu": self.mu}

    def value(self, h):
        h = self._vectors(h)
        return 0.5 * self.mu * np.sum(h * h, axis=-1)

    def conjugate(self, q):
        q = self._vectors(q)
        return np.sum(q * q, axis=-1) / (2.0 * self.mu)

    def recession(self, h):
        return np.where(vector_norm(self._vectors(h)) > 0.0, np.inf, 0.0)

    def prox(self, h, tau):
        return self._vectors(h) / (1.0 + tau * self.mu)

    def prox_conjugate(self, q, sigma):
        return self._vectors(q) / (1.0 + sigma / self.mu)

    def grad(self, h):
        return self.mu * self._vectors(h)


class AnisotropicNorm(ConvexIntegrand):
    """
    ``F(h) = (sum_j a_j h_j^2)^(1/2)``.

    With ``a_j = 1 / lambda_j`` this is the norm of a Cameron-Martin type space whose covariance has eigenvalues
    ``lambda_j``. The conjugate is the indicator of the ellipsoid ``sum_j q_j^2 / a_j <= 1``.
    """

    kind = ANISOTROPIC_NORM
    one_homogeneous = True
    conjugate_is_indicator = True

    def __init__(self, weights: Sequence[float]):
        a = np.asarray(weights, dtype=float)
        if a.ndim != 1 or a.size == 0 or np.any(~np.isfinite(a)) or np.any(a <= 0.0):
            raise IntegrandError(f"anisotropic_norm needs a non empty list of positive weights, got {weights}.")
        self.a = a
        super().__init__(
            Growth(
                p=1.0,
                alpha1=float(np.sqrt(a.max())),
                beta1=0.0,
                alpha2=float(np.sqrt(a.min())),
                beta2=0.0,
            ),
            dimension=a.size,
        )

    def parameters(self) -> Dict[str, Any]:
        return {"weights": self.a.tolist()}

    def value(self, h):
        h = self._vectors(h)
        return np.sqrt(np.sum(self.a * h * h, axis=-1))

    def conjugate(self, q):
        q = self._vectors(q)
        return np.where(
            np.sum(q * q / self.a, axis=-1) <= 1.0 + 2.0 * DOMAIN_TOLERANCE, 0.0, np.inf
        )

    def recession(self, h):
        return self.value(h)

    def project_conjugate_domain(self, q):
        """
        Project onto the ellipsoid ``sum q_j^2 / a_j <= 1``.

        The projection is ``q_j a_j / (a_j + nu)`` where ``nu >= 0`` solves ``sum q_j^2 a_j / (a_j + nu)^2 = 1``;
        the left hand side is convex and decreasing in ``nu`` so Newton from ``nu = 0`` converges monotonically.
        """
        q = self._vectors(q)
        a = self.a
        outside = np.sum(q * q / a, axis=-1) > 1.0
        nu = np.zeros(q.shape[:-1])
        for _ in range(100):
            ratio = a / (a + nu[..., None])
            f = np.sum(q * q * ratio * ratio / a, axis=-1) - 1.0
            df = -2.0 * np.sum(q * q * ratio * ratio / (a + nu[..., None]) / a, axis=-1)
            active = outside & (f > 1e-15)
            if not np.any(active):
                break
            nu = np.where(active, nu - f / np.where(df < 0.0, df, -1.0), nu)
        projected = q * (a / (a + nu[..., None]))
        return np.where(outside[..., None], projected, q)

    def prox_conjugate(self, q, sigma):
        return self.project_conjugate_domain(q)

    def prox(self, h, tau):
        h = self._vectors(h)
        return h - tau * self.project_conjugate_domain(h / tau)

    def subgradient(self, h):
        h = self._vectors(h)
        norm = self.value(h)
        safe = np.where(norm > 0.0, norm, 1.0)
        return np.where(norm[..., None] > 0.0, self.a * h / safe[..., None], 0.0)

    def spherical_min(self) -> Tuple[np.ndarray, float]:
        j = int(np.argmin(self.a))
        nu = np.zeros(self.a.size)
        nu[j] = 1.0
        return nu, float(np.sqrt(self.a[j]))


class Scaled(ConvexIntegrand):
    """``c F`` for a positive constant ``c``."""

    kind = SCALED

    def __init__(self, base: ConvexIntegrand, scale: float):
        if not scale > 0.0 or not math.isfinite(scale):
            raise IntegrandError(f"An integrand can only be scaled by a positive number, got {scale}.")
        self.base = base
        self.scale = float(scale)
        self.one_homogeneous = base.one_homogeneous
        self.smooth = base.smooth
        self.has_fast_prox = base.has_fast_prox
        self.radial = base.radial
        self.conjugate_is_indicator = base.conjugate_is_indicator
        super().__init__(base.growth.scaled(self.scale), dimension=base.dimension)

    def parameters(self) -> Dict[str, Any]:
        return {"scale": self.scale, "base": self.base.describe()}

    def value(self, h):
        return self.scale * self.base.value(h)

    def conjugate(self, q):
        return self.scale * self.base.conjugate(self._vectors(q) / self.scale)

    def recession(self, h):
        return self.scale * self.base.recession(h)

    def prox(self, h, tau):
        return self.base.prox(h, tau * self.scale)

    def grad(self, h):
        return self.scale * self.base.grad(h)

    def subgradient(self, h):
        return self.scale * self.base.subgradient(h)

    def spherical_min(self) -> Tuple[np.ndarray, float]:
        nu, value = self.base.spherical_min()
        return nu, self.scale * value

    def project_conjugate_domain(self, q):
        return self.scale * self.base.project_conjugate_domain(self._vectors(q) / self.scale)


def euclidean_norm() -> EuclideanNorm:
    """The norm ``|h|``."""
    return EuclideanNorm()


def power_p(p: float, scale: float = 1.0) -> PowerP:
    """``c |h|^p``."""
    return PowerP(p, scale)


def quadratic(mu: float = 1.0) -> Quadratic:
    """``mu |h|^2 / 2``."""
    return Quadratic(mu)


def anisotropic_norm(weights: Sequence[float]) -> AnisotropicNorm:
    """``(sum a_j h_j^2)^(1/2)``."""
    return AnisotropicNorm(weights)


def scaled(F: ConvexIntegrand, c: float) -> Scaled:
    """``c F``."""
    return Scaled(F, c)
