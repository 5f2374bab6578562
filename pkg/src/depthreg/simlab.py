"""Simulation models and the level/power study.

Models 1 and 2 have a trivariate covariate with independent Uniform[0, 1.5]
coordinates and conditional dispersion ``(1 + a * x1 * x2 * x3) * Sigma_p``.
Models 3 and 4 have a functional covariate ``X(t) = B * exp(t)`` on [0, 1],
``B ~ Uniform[0, 1]``, and dispersion ``(1 + a * ||X||_2) * Sigma_p``.
Models 1 and 3 have bivariate responses, 2 and 4 trivariate. All responses
are centered normal.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .dataset import Dataset
from .depth import DepthConfig
from .errors import InputError
from .heterotest import permutation_test
from .metrics import Covariates, trapezoid_weights
from .weights import WeightSpec

GRID_POINTS = 100


def make_sigma(p: int) -> np.ndarray:
    """Equicorrelation matrix: ones on the diagonal, 0.5 elsewhere."""
    if int(p) != p or p < 1:
        raise InputError(f"p must be a positive integer, got {p!r}")
    return 0.5 * np.ones((p, p)) + 0.5 * np.eye(p)


@dataclass(frozen=True)
class SimulationModel:
    id: int
    a: float = 0.0

    def __post_init__(self):
        if self.id not in (1, 2, 3, 4):
            raise InputError(f"model id must be 1-4, got {self.id!r}")
        if not self.a >= 0:
            raise InputError(f"a must be nonnegative, got {self.a!r}")

    @property
    def p(self) -> int:
        return 2 if self.id in (1, 3) else 3

    @property
    def functional(self) -> bool:
        return self.id in (3, 4)


def curve_grid(m: int = GRID_POINTS) -> np.ndarray:
    return np.linspace(0.0, 1.0, m)


def sample_model(model: SimulationModel, n: int, seed: int) -> Dataset:
    """Draw ``n`` observations from ``model``; identical seeds give identical data."""
    if int(n) != n or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    rng = np.random.default_rng(seed)
    chol = np.linalg.cholesky(make_sigma(model.p))
    if model.functional:
        grid = curve_grid()
        b = rng.uniform(0.0, 1.0, n)
        curves = b[:, None] * np.exp(grid)[None, :]
        norms = np.sqrt(curves**2 @ trapezoid_weights(grid))
        factor = 1.0 + model.a * norms
        cov = Covariates(curves, grid)
        names = tuple(f"t{j + 1}" for j in range(grid.size))
    else:
        x = rng.uniform(0.0, 1.5, (n, 3))
        factor = 1.0 + model.a * x.prod(axis=1)
        cov = Covariates(x)
        names = ("x1", "x2", "x3")
    z = rng.standard_normal((n, model.p))
    y = np.sqrt(factor)[:, None] * (z @ chol.T)
    return Dataset(y, cov, tuple(f"y{j + 1}" for j in range(model.p)), names)


@dataclass(frozen=True)
class Cell:
    model: int
    n: int
    a: float


@dataclass
class PowerRow:
    model: int
    n: int
    level: float
    a: float
    rate: float
    replications: int
    permutations: int
    seed: int


@dataclass
class PowerTable:
    rows: List[PowerRow]
    p_values: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def rate(self, model: int, n: int, a: float, level: float = 0.05) -> float:
        for row in self.rows:
            if (row.model, row.n, row.a, row.level) == (model, n, a, level):
                return row.rate
        raise KeyError((model, n, a, level))

    def to_csv_rows(self):
        """Table layout: one line per (model, n, level), one column per a."""
        a_vals = sorted({row.a for row in self.rows})
        header = ["model", "n", "level"] + [f"a={a:g}" for a in a_vals] + ["replications", "permutations"]
        keyed = {}
        meta = {}
        for row in self.rows:
            keyed[(row.model, row.n, row.level, row.a)] = row.rate
            meta[(row.model, row.n, row.level)] = (row.replications, row.permutations)
        lines = []
        for key in sorted(meta):
            vals = [keyed.get(key + (a,), "") for a in a_vals]
            lines.append(list(key) + vals + list(meta[key]))
        return header, lines


def replication_seeds(seed: int, cell_index: int, rep: int):
    """Independent (data, permutation) seeds for one replication of one cell."""
    ss = np.random.SeedSequence([int(seed), int(cell_index), int(rep)])
    data_seed, perm_seed = ss.generate_state(2, dtype=np.uint32)
    return int(data_seed), int(perm_seed)


def _one_replication(cell: Cell, cell_index: int, rep: int, seed: int, B: int,
                     cfg: DepthConfig, r: float, weights: Optional[WeightSpec]) -> float:
    data_seed, perm_seed = replication_seeds(seed, cell_index, rep)
    ds = sample_model(SimulationModel(cell.model, cell.a), cell.n, data_seed)
    return permutation_test(ds, "halfspace", cfg, r, weights, B, perm_seed, "strict").p_value


def _run_batch(args):
    cell, ci, reps, seed, B, cfg, r, weights = args
    return [_one_replication(cell, ci, rep, seed, B, cfg, r, weights) for rep in reps]


def replication_p_values(cell: Cell, cell_index: int, R: int, B: int, seed: int,
                         cfg: Optional[DepthConfig] = None, r: float = 0.5,
                         weights: Optional[WeightSpec] = None, workers: int = 1) -> np.ndarray:
    """Strict permutation p-values for ``R`` seeded replications of one cell."""
    cfg = cfg or DepthConfig()
    reps = list(range(R))
    if workers <= 1:
        return np.asarray(_run_batch((cell, cell_index, reps, seed, B, cfg, r, weights)))
    out = np.empty(R)
    chunks = [reps[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(workers) as ex:
        results = ex.map(_run_batch, [(cell, cell_index, ch, seed, B, cfg, r, weights) for ch in chunks])
        for ch, vals in zip(chunks, results):
            out[ch] = vals
    return out


def power_study(models: Sequence[int], ns: Sequence[int], a_values: Sequence[float],
                levels: Iterable[float] = (0.05, 0.01), R: int = 200, B: int = 200,
                seed: int = 0, cfg: Optional[DepthConfig] = None, r: float = 0.5,
                weights: Optional[WeightSpec] = None, workers: int = 1) -> PowerTable:
    """Rejection rates of the halfspace-depth test over a grid of settings.

    Each (model, n, a) cell runs ``R`` replications with ``B`` permutations;
    all levels share those p-values (reject when ``p <= level``).
    """
    if R < 1 or B < 1:
        raise InputError("R and B must be positive")
    levels = tuple(levels)
    rows = []
    pvals = {}
    timings = {}
    cells = [Cell(m, n, float(a)) for m, n, a in itertools.product(models, ns, a_values)]
    for ci, cell in enumerate(cells):
        t0 = time.perf_counter()
        pv = replication_p_values(cell, ci, R, B, seed, cfg, r, weights, workers)
        timings[(cell.model, cell.n, cell.a)] = time.perf_counter() - t0
        pvals[(cell.model, cell.n, cell.a)] = pv
        for level in levels:
            rows.append(PowerRow(cell.model, cell.n, float(level), cell.a,
                                 float(np.mean(pv <= level)), R, B, seed))
    return PowerTable(rows, pvals, timings)
