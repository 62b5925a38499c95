from contextlib import contextmanager
from typing import Final, Type

import pytest

from wiener_convex.gauss.grid import (
    GAUSS_HERMITE,
    UNIFORM_TRUNCATED,
    GaussianGrid,
    GridSpec,
    build_grid,
)
from wiener_convex.solver.params import SolverParams

TIGHT_GAP: Final[float] = 1e-9
TIGHT_MAX_ITERS: Final[int] = 200_000


@contextmanager
def not_raises(expected_exception: Type[Exception]):
    """
    Function to test whether a function does not raise an exception.

    A 'good' function test.

    Example of a 'good' test:

    .. code::python::

        a_list = ['This is a good test']
        with not_raises(IndexError):
            print(a_list[0])

    Example of a 'bad' test:

    .. code::python::

        a_list = ['This is a bad test']
        with not_raises(IndexError):
            print(a_list[1])

    :param expected_exception: The type of Exception being tested for.
    :raise AssertionError: When the exception is raised expectedly.
    """
    try:
        yield

    except expected_exception as error:
        raise AssertionError(f"Raised exception {error} when it should not!")

    except Exception as error:
        raise AssertionError(f"An unexpected exception {error} raised.")


def uniform(dimension: int = 1, nodes: int = 129, radius: float = 6.0) -> GaussianGrid:
    """A ``uniform_truncated`` grid."""
    return build_grid(
        GridSpec(
            dimension=dimension,
            nodes_per_axis=nodes,
            scheme=UNIFORM_TRUNCATED,
            truncation_radius=radius,
        )
    )


def hermite(dimension: int = 1, nodes: int = 48) -> GaussianGrid:
    """A ``gauss_hermite`` grid."""
    return build_grid(GridSpec(dimension=dimension, nodes_per_axis=nodes, scheme=GAUSS_HERMITE))


@pytest.fixture(scope="session")
def line_grid() -> GaussianGrid:
    """A one-dimensional uniform grid of 257 nodes on [-6, 6]."""
    return uniform(1, 257)


@pytest.fixture(scope="session")
def small_line_grid() -> GaussianGrid:
    """A one-dimensional uniform grid of 65 nodes on [-6, 6], small enough for the brute force oracles."""
    return uniform(1, 65)


@pytest.fixture(scope="session")
def hermite_line_grid() -> GaussianGrid:
    """A one-dimensional Gauss-Hermite grid of 48 nodes."""
    return hermite(1, 48)


@pytest.fixture(scope="session")
def plane_grid() -> GaussianGrid:
    """A two-dimensional uniform grid of 33 x 33 nodes on [-6, 6]^2."""
    return uniform(2, 33)


@pytest.fixture(scope="session")
def hermite_plane_grid() -> GaussianGrid:
    """A two-dimensional Gauss-Hermite grid of 16 x 16 nodes."""
    return hermite(2, 16)


@pytest.fixture
def tight_params() -> SolverParams:
    """Solver parameters tight enough for comparisons with closed forms."""
    return SolverParams(gap_tol=TIGHT_GAP, max_iters=TIGHT_MAX_ITERS)
