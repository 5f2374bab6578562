"""Paired covariate/response samples and their CSV form."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence

import numpy as np

from .errors import DimensionError, LoadError
from .metrics import Covariates


@dataclass(frozen=True)
class Dataset:
    """``n`` observations ``(X_i, Y_i)`` with ``Y_i`` in R^p."""

    responses: np.ndarray
    covariates: Covariates
    response_names: Sequence[str] = field(default=())
    covariate_names: Sequence[str] = field(default=())

    def __post_init__(self):
        y = np.asarray(self.responses, dtype=float)
        if y.ndim == 1:
            y = y[:, None]
        if y.ndim != 2 or y.shape[1] < 1:
            raise DimensionError(f"responses must be an (n, p) array, got {y.shape}")
        if not isinstance(self.covariates, Covariates):
            object.__setattr__(self, "covariates", Covariates(self.covariates))
        if y.shape[0] != self.covariates.n:
            raise DimensionError(
                f"{y.shape[0]} response rows but {self.covariates.n} covariate rows"
            )
        if not np.all(np.isfinite(y)):
            raise DimensionError("responses contain non-finite values")
        object.__setattr__(self, "responses", y)
        if not self.response_names:
            object.__setattr__(self, "response_names", tuple(f"y{j + 1}" for j in range(y.shape[1])))
        if not self.covariate_names:
            q = self.covariates.values.shape[1]
            object.__setattr__(self, "covariate_names", tuple(f"x{j + 1}" for j in range(q)))

    @property
    def n(self) -> int:
        return self.responses.shape[0]

    @property
    def p(self) -> int:
        return self.responses.shape[1]

    def with_responses(self, responses) -> "Dataset":
        return Dataset(responses, self.covariates, self.response_names, self.covariate_names)


def _read_numeric_csv(path, what: str, header: bool = True):
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise LoadError(f"cannot read {what} file {path}: {exc}") from None
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise LoadError(f"{what} file {path} is empty")
    names: List[str] = []
    if header:
        names = [c.strip() for c in rows[0]]
        rows = rows[1:]
    if not rows:
        raise LoadError(f"{what} file {path} has a header but no data rows")
    width = len(names) if header else len(rows[0])
    out = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        line = i + 2 if header else i + 1
        if len(row) != width:
            raise LoadError(f"{what} file {path}, line {line}: expected {width} cells, got {len(row)}")
        for j, cell in enumerate(row):
            cell = cell.strip()
            if cell == "" or cell.lower() in ("na", "nan", "null"):
                raise LoadError(f"{what} file {path}, line {line}, column {j + 1}: missing value")
            try:
                out[i, j] = float(cell)
            except ValueError:
                raise LoadError(
                    f"{what} file {path}, line {line}, column {j + 1}: non-numeric cell {cell!r}"
                ) from None
            if not np.isfinite(out[i, j]):
                raise LoadError(f"{what} file {path}, line {line}, column {j + 1}: non-finite value")
    return names, out


def read_grid(path) -> np.ndarray:
    """A grid file holds the grid values as a single row, optionally under a
    header row of column labels."""
    path = Path(path)
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if len(rows) not in (1, 2):
        raise LoadError(f"grid file {path} must have one row of values (plus an optional header)")
    try:
        return np.array([float(c) for c in rows[-1]])
    except ValueError:
        raise LoadError(f"grid file {path}: non-numeric grid value") from None


def load_dataset(response_csv, covariate_csv, grid_csv=None, grid_from_header: bool = False) -> Dataset:
    """Read a dataset from CSV files with header rows.

    Curves are recognized when a grid is supplied, either as a separate file
    or (``grid_from_header``) as numeric column labels of the covariate file.
    """
    rnames, y = _read_numeric_csv(response_csv, "response")
    cnames, x = _read_numeric_csv(covariate_csv, "covariate")
    if y.shape[0] != x.shape[0]:
        raise LoadError(
            f"row count mismatch: {y.shape[0]} responses vs {x.shape[0]} covariates"
        )
    grid = None
    if grid_csv is not None:
        grid = read_grid(grid_csv)
    elif grid_from_header:
        try:
            grid = np.array([float(c) for c in cnames])
        except ValueError:
            raise LoadError("covariate header is not a numeric grid") from None
    try:
        cov = Covariates(x, grid)
    except ValueError as exc:
        raise LoadError(str(exc)) from None
    return Dataset(y, cov, tuple(rnames), tuple(cnames))


def fmt(v: float) -> str:
    """Fixed 6-significant-digit formatting used in every output file."""
    return format(float(v), ".6g")


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def save_dataset(ds: Dataset, prefix) -> dict:
    """Write ``<prefix>_responses.csv``, ``<prefix>_covariates.csv`` and, for
    curves, ``<prefix>_grid.csv``. Values are written at full precision."""
    prefix = str(prefix)
    paths = {"responses": f"{prefix}_responses.csv", "covariates": f"{prefix}_covariates.csv"}
    _write_full(paths["responses"], ds.response_names, ds.responses)
    _write_full(paths["covariates"], ds.covariate_names, ds.covariates.values)
    if ds.covariates.grid is not None:
        paths["grid"] = f"{prefix}_grid.csv"
        _write_full(paths["grid"], [f"t{j + 1}" for j in range(ds.covariates.grid.size)],
                    ds.covariates.grid[None, :])
    return paths


def _write_full(path, header, values) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(header))
        for row in np.atleast_2d(values):
            w.writerow([repr(float(v)) for v in row])
