"""
Run artifacts: ``results.json``, ``fields.csv`` and SVG plots.

Every file is written to a temporary sibling and renamed into place, so a reader never sees a partial artifact.
"""
from __future__ import annotations

import json
import os
from datetime import datetime
from logging import getLogger
from pathlib import Path
from typing import Any, Callable, Dict, Final, List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from wiener_convex.exceptions import ExperimentRunError, FieldError  # noqa: E402
from wiener_convex.gauss.grid import GaussianGrid, ScalarField, VectorField  # noqa: E402
from wiener_convex.geometry.sets import IndicatorSet  # noqa: E402
from wiener_convex.verify.report import jsonable  # noqa: E402

_LOGGER = getLogger(__name__)

RESULTS_SCHEMA_VERSION: Final[str] = "1.0"
"""Bumped on any change of the ``results.json`` fields."""

RESULTS_FILE: Final[str] = "results.json"
FIELDS_FILE: Final[str] = "fields.csv"
FLOAT_FORMAT: Final[str] = "%.17g"


def _atomic(path: Path, write: Callable[[Path], None]) -> Path:
    tmp = path.with_name(f".{path.name}.tmp")
    try:
        write(tmp)
        os.replace(tmp, path)
    except BaseException:
        if tmp.exists():
            tmp.unlink()
        raise
    return path


def write_results(path: Union[str, Path], results: Dict[str, Any]) -> Path:
    """
    Write a results document with the schema version and a creation timestamp.

    :param path: The ``results.json`` path.
    :param results: The document; numpy values are converted.
    :return: The path.
    """
    document = {"schema_version": RESULTS_SCHEMA_VERSION, "created": datetime.now().isoformat(), **results}

    def write(tmp: Path):
        with open(tmp, "w") as file:
            json.dump(jsonable(document), file, indent=4, allow_nan=False)

    return _atomic(Path(path), write)


def read_results(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a results document.

    :raise ExperimentRunError: When the schema version is not the current one.
    """
    with open(path) as file:
        document = json.load(file)
    version = document.get("schema_version")
    if version != RESULTS_SCHEMA_VERSION:
        raise ExperimentRunError(f"{path} has results schema {version}, expected {RESULTS_SCHEMA_VERSION}.")
    return document


def fields_frame(u: ScalarField, g: ScalarField, phi: Optional[VectorField] = None) -> pd.DataFrame:
    """
    The node table ``x1 .. xm, weight, g, u`` followed by ``phi1 .. phim`` when a dual field is given.

    :raise FieldError: When ``g`` or ``phi`` is not on the grid of ``u``.
    """
    grid = u.grid
    if g.grid.key != grid.key or (phi is not None and phi.grid.key != grid.key):
        raise FieldError("Fields written together must share one grid.")
    columns: Dict[str, np.ndarray] = {f"x{j + 1}": grid.points[:, j] for j in range(grid.dimension)}
    columns["weight"] = grid.weights.ravel()
    columns["g"] = g.values.ravel()
    columns["u"] = u.values.ravel()
    if phi is not None:
        for j in range(grid.dimension):
            columns[f"phi{j + 1}"] = phi.values[..., j].ravel()
    return pd.DataFrame(columns)


def write_fields(
    path: Union[str, Path], u: ScalarField, g: ScalarField, phi: Optional[VectorField] = None
) -> Path:
    """Write :func:`fields_frame` with 17 significant digits."""
    frame = fields_frame(u, g, phi)
    return _atomic(Path(path), lambda tmp: frame.to_csv(tmp, index=False, float_format=FLOAT_FORMAT))


def read_fields(
    path: Union[str, Path], grid: GaussianGrid
) -> Tuple[ScalarField, ScalarField, Optional[VectorField]]:
    """
    Read ``u``, ``g`` and, when present, ``phi`` back from a fields table.

    :raise FieldError: When the table does not match ``grid``.
    """
    frame = pd.read_csv(path, float_precision="round_trip")
    coordinates = [f"x{j + 1}" for j in range(grid.dimension)]
    missing = [c for c in coordinates + ["weight", "g", "u"] if c not in frame.columns]
    if missing:
        raise FieldError(f"{path} lacks the columns {', '.join(missing)}.")
    if len(frame) != grid.size or not np.array_equal(frame[coordinates].to_numpy(), grid.points):
        raise FieldError(f"{path} is not sampled on the nodes of grid {grid.key}.")
    u = ScalarField(grid, frame["u"].to_numpy())
    g = ScalarField(grid, frame["g"].to_numpy())
    flux = [f"phi{j + 1}" for j in range(grid.dimension)]
    phi = VectorField(grid, frame[flux].to_numpy()) if all(c in frame.columns for c in flux) else None
    return u, g, phi


def _boundaries_1d(E: IndicatorSet) -> np.ndarray:
    x = E.grid.axis_nodes[0]
    change = np.flatnonzero(np.diff(E.membership.astype(int)))
    return 0.5 * (x[change] + x[change + 1])


def plot_fields(
    path: Union[str, Path],
    curves: Dict[str, ScalarField],
    sets: Sequence[IndicatorSet] = (),
    title: Optional[str] = None,
) -> Path:
    """
    Save a static SVG: line plots on one-dimensional grids, filled contours of the first curve on two-dimensional
    ones, with the boundaries of ``sets`` overlaid.

    Grids of dimension three are cut at the middle node of the last axis.

    :param path: The ``.svg`` path.
    :param curves: Labelled fields sharing one grid.
    :param sets: Sets whose boundaries are drawn.
    :param title: An optional title.
    :return: The path.
    """
    fig, ax = plt.subplots(figsize=(7, 5))
    try:
        first = next(iter(curves.values()))
        grid = first.grid
        if grid.dimension == 1:
            for label, field in curves.items():
                ax.plot(field.grid.axis_nodes[0], field.values, label=label)
            for k, E in enumerate(sets):
                for i, b in enumerate(_boundaries_1d(E)):
                    ax.axvline(b, color="grey", linestyle="--", linewidth=0.6, label="level set boundary" if k == i == 0 else None)
            ax.set_xlabel("x")
            ax.legend()
        else:
            cut = (slice(None), slice(None)) + (grid.nodes_per_axis // 2,) * (grid.dimension - 2)
            x1, x2 = grid.coords[0][cut], grid.coords[1][cut]
            label, field = next(iter(curves.items()))
            filled = ax.contourf(x1, x2, field.values[cut], levels=30)
            fig.colorbar(filled, ax=ax, label=label)
            for E in sets:
                mask = E.membership[cut].astype(float)
                if 0.0 < mask.mean() < 1.0:
                    ax.contour(E.grid.coords[0][cut], E.grid.coords[1][cut], mask, levels=[0.5], colors="white", linewidths=0.8)
            ax.set_xlabel("x1")
            ax.set_ylabel("x2")
            ax.set_aspect("equal")
        if title:
            ax.set_title(title)
        _atomic(Path(path), lambda tmp: fig.savefig(tmp, format="svg"))
    finally:
        plt.close(fig)
    return Path(path)


class ArtifactWriter:
    """
    Writes the artifacts of one run into a directory and removes them again when the run fails.

    .. code::python

        writer = ArtifactWriter(out_dir)
        try:
            writer.results({...})
        except Exception:
            writer.cleanup()
            raise
    """

    def __init__(self, directory: Union[str, Path], formats: Sequence[str] = ("csv", "json", "svg")):
        self.directory = Path(directory)
        self.formats = list(formats)
        self._created = not self.directory.exists()
        self.directory.mkdir(parents=True, exist_ok=True)
        if not os.access(self.directory, os.W_OK):
            raise ExperimentRunError(f"Output directory {self.directory} is not writable.")
        self.written: List[Path] = []

    def wants(self, fmt: str) -> bool:
        """Whether ``fmt`` is among the requested formats."""
        return fmt in self.formats

    def results(self, results: Dict[str, Any]) -> Optional[Path]:
        """Write ``results.json`` when json output is requested."""
        if not self.wants("json"):
            return None
        return self._track(write_results(self.directory / RESULTS_FILE, results))

    def fields(self, u: ScalarField, g: ScalarField, phi: Optional[VectorField] = None) -> Optional[Path]:
        """Write ``fields.csv`` when csv output is requested."""
        if not self.wants("csv"):
            return None
        return self._track(write_fields(self.directory / FIELDS_FILE, u, g, phi))

    def plot(self, name: str, curves: Dict[str, ScalarField], sets: Sequence[IndicatorSet] = (), title=None):
        """Write ``<name>.svg`` when svg output is requested."""
        if not self.wants("svg"):
            return None
        return self._track(plot_fields(self.directory / f"{name}.svg", curves, sets, title))

    def _track(self, path: Path) -> Path:
        self.written.append(path)
        _LOGGER.debug(f"Wrote {path}")
        return path

    def cleanup(self):
        """Remove every written artifact, and the directory when this writer created it and it is left empty."""
        for path in self.written:
            if path.exists():
                path.unlink()
        self.written = []
        if self._created and self.directory.exists() and not any(self.directory.iterdir()):
            self.directory.rmdir()
        _LOGGER.debug(f"Cleaned up the artifacts in {self.directory}")
