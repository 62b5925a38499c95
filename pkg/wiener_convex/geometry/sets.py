"""
Sets of nodes on uniform Gaussian grids, their Gaussian volume and perimeter.

The perimeter is the Gaussian total variation of the indicator summed over grid faces: the face between nodes
``i`` and ``i + e_j`` carries the discrete Gaussian flux of axis ``j`` times the node weights of the other axes.
In one dimension this is exactly the total variation used by the solver.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from logging import getLogger
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from wiener_convex.exceptions import FieldError, GridError, IntegrandError
from wiener_convex.gauss.grid import GaussianGrid, ScalarField
from wiener_convex.integrands.core import ConvexIntegrand

_LOGGER = getLogger(__name__)


def face_weights(grid: GaussianGrid, axis: int) -> np.ndarray:
    """
    The weights of the faces orthogonal to ``axis``.

    :return: An array shaped like the grid with ``n - 1`` entries along ``axis``.
    """
    m = grid.dimension
    factors = [grid.axis_weights[k] if k != axis else grid.face_flux[k] for k in range(m)]
    out = factors[0]
    for f in factors[1:]:
        out = np.multiply.outer(out, f)
    return np.asarray(out)


def face_total_variation(values: np.ndarray, grid: GaussianGrid, F: Optional[ConvexIntegrand] = None) -> float:
    """
    ``sum over faces of weight * F(jump direction) * |jump|``, with ``F = |.|`` by default.

    The jump direction across a face orthogonal to ``e_j`` is ``sign(u(i + e_j) - u(i)) e_j``.
    """
    m = grid.dimension
    total = 0.0
    for axis in range(m):
        jump = np.diff(values, axis=axis)
        weights = face_weights(grid, axis)
        if F is None:
            factor = 1.0
        else:
            unit = np.zeros(m)
            unit[axis] = 1.0
            up, down = float(F.value(unit)), float(F.value(-unit))
            factor = np.where(jump >= 0.0, up, down)
        total += float(np.sum(weights * factor * np.abs(jump)))
    return total


@dataclass(frozen=True, eq=False)
class IndicatorSet:
    """A set of nodes of a ``uniform_truncated`` grid."""

    grid: GaussianGrid
    membership: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.grid.is_uniform:
            raise GridError(f"Sets need a uniform_truncated grid, got {self.grid.scheme}.")
        membership = np.asarray(self.membership, dtype=bool)
        if membership.shape != self.grid.shape:
            if membership.size != self.grid.size:
                raise FieldError(
                    f"A set on a grid of shape {self.grid.shape} cannot have a membership of shape {membership.shape}."
                )
            membership = membership.reshape(self.grid.shape)
        membership = membership.copy()
        membership.setflags(write=False)
        object.__setattr__(self, "membership", membership)

    @classmethod
    def from_predicate(cls, grid: GaussianGrid, predicate: Callable[..., np.ndarray]) -> IndicatorSet:
        """The nodes where ``predicate(x1, ..., xm)`` holds."""
        return cls(grid, np.broadcast_to(predicate(*grid.coords), grid.shape))

    @classmethod
    def empty(cls, grid: GaussianGrid) -> IndicatorSet:
        """The empty set."""
        return cls(grid, np.zeros(grid.shape, dtype=bool))

    @classmethod
    def full(cls, grid: GaussianGrid) -> IndicatorSet:
        """Every node."""
        return cls(grid, np.ones(grid.shape, dtype=bool))

    @cached_property
    def count(self) -> int:
        """The number of member nodes."""
        return int(np.count_nonzero(self.membership))

    @property
    def is_empty(self) -> bool:
        """True when no node is a member."""
        return self.count == 0

    def indicator(self) -> ScalarField:
        """The indicator function as a field."""
        return ScalarField(self.grid, self.membership.astype(float))

    def union(self, other: IndicatorSet) -> IndicatorSet:
        """``self | other``."""
        _check_same_grid(self, other)
        return IndicatorSet(self.grid, self.membership | other.membership)

    def intersection(self, other: IndicatorSet) -> IndicatorSet:
        """``self & other``."""
        _check_same_grid(self, other)
        return IndicatorSet(self.grid, self.membership & other.membership)

    def issubset(self, other: IndicatorSet) -> bool:
        """Exact node-wise containment."""
        _check_same_grid(self, other)
        return bool(np.all(~self.membership | other.membership))


def _check_same_grid(a: IndicatorSet, b: IndicatorSet) -> None:
    if a.grid.key != b.grid.key:
        raise FieldError(f"Sets live on different grids: {a.grid.key} and {b.grid.key}.")


def volume(E: IndicatorSet) -> float:
    """The Gaussian volume ``sum_{i in E} w_i``."""
    return float(np.sum(E.grid.weights[E.membership]))


def perimeter_gamma(E: IndicatorSet) -> float:
    """The Gaussian perimeter, the face total variation of the indicator."""
    return face_total_variation(E.membership.astype(float), E.grid)


def anisotropic_perimeter(F: ConvexIntegrand, E: IndicatorSet) -> float:
    """
    The anisotropic perimeter ``P_F(E)`` of a one-homogeneous ``F``, evaluated on the face normals.

    :raise IntegrandError: When ``F`` is not one-homogeneous.
    """
    if not F.one_homogeneous:
        raise IntegrandError(f"The anisotropic perimeter needs a one-homogeneous integrand, got {F.kind}.")
    return face_total_variation(E.membership.astype(float), E.grid, F)


def curvature_energy(
    E: IndicatorSet, g: ScalarField, lam: float, F: Optional[ConvexIntegrand] = None
) -> float:
    """
    ``P(E) + sum_{i in E} w_i (g_i - lam)``, with the anisotropic perimeter when ``F`` is given.

    :raise FieldError: When ``E`` and ``g`` live on different grids.
    """
    if g.grid.key != E.grid.key:
        raise FieldError(f"The set lives on {E.grid.key} and the data on {g.grid.key}.")
    perimeter = perimeter_gamma(E) if F is None else anisotropic_perimeter(F, E)
    mask = E.membership
    return perimeter + float(np.sum(E.grid.weights[mask] * (g.values[mask] - lam)))


def encode_mask(E: IndicatorSet) -> Dict[str, Any]:
    """
    Run-length encode the membership in C order.

    :return: ``{"shape": [...], "first": bool, "runs": [...]}`` where runs alternate starting with ``first``.
    """
    flat = E.membership.ravel()
    changes = np.flatnonzero(np.diff(flat.astype(np.int8))) + 1
    bounds = np.concatenate([[0], changes, [flat.size]])
    return {
        "shape": list(E.grid.shape),
        "first": bool(flat[0]) if flat.size else False,
        "runs": np.diff(bounds).astype(int).tolist(),
    }


def decode_mask(encoded: Dict[str, Any], grid: GaussianGrid) -> IndicatorSet:
    """
    Rebuild a set from :func:`encode_mask` output.

    :raise FieldError: When the runs do not cover the grid.
    """
    runs: List[int] = list(encoded["runs"])
    if sum(runs) != grid.size or tuple(encoded["shape"]) != grid.shape:
        raise FieldError(f"Encoded mask of shape {encoded['shape']} does not fit the grid {grid.shape}.")
    values = np.zeros(grid.size, dtype=bool)
    state = bool(encoded["first"])
    position = 0
    for run in runs:
        values[position : position + run] = state
        position += run
        state = not state
    return IndicatorSet(grid, values.reshape(grid.shape))


def set_lines(E: IndicatorSet) -> List[Tuple[str, np.ndarray]]:
    """
    Every axis-aligned and diagonal grid line of ``E`` as membership vectors.

    Diagonals are taken in every plane spanned by two axes, in both orientations.
    """
    mem = E.membership
    m = mem.ndim
    lines: List[Tuple[str, np.ndarray]] = []
    for axis in range(m):
        moved = np.moveaxis(mem, axis, -1).reshape(-1, mem.shape[axis])
        lines.extend((f"axis{axis}", row) for row in moved)
    for a in range(m):
        for b in range(a + 1, m):
            plane = np.moveaxis(mem, (a, b), (-2, -1))
            flat = plane.reshape(-1, plane.shape[-2], plane.shape[-1])
            n = flat.shape[-1]
            for sheet in flat:
                for offset in range(-n + 1, n):
                    lines.append((f"diag{a}{b}", np.diagonal(sheet, offset)))
                    lines.append((f"anti{a}{b}", np.diagonal(sheet[:, ::-1], offset)))
    return lines
