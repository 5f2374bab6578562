"""Command-line front end.

Every command writes its results plus ``<command>.manifest.json`` (run
configuration, seed, version, timing, warnings) into ``--out``. Result
files are byte-identical across reruns with the same configuration; only
the manifest's timing differs.

Exit codes: 0 success, 2 input error, 3 numerical/degeneracy error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from .dataset import Dataset, fmt, load_dataset, save_dataset, write_csv
from .depth import DepthConfig, DepthKind, evaluate
from .errors import InputError, NumericalError
from .heterotest import PValueRule, permutation_test
from .metrics import principal_scores
from .regions import central_region, conditional_median, contour_2d, trimmed_mean
from .simlab import SimulationModel, power_study, sample_model
from .spread import spread_diameter, spread_volume_grid, spread_volume_hull
from .svg import Canvas, padded_limits
from .weights import NeighborCache, WeightSpec

SEED_ENV = "DEPTHREG_SEED"


@dataclass
class RunConfig:
    command: str
    depth: str = "halfspace"
    r: float = 0.5
    k: Optional[int] = None
    bandwidth: Optional[float] = None
    kernel: str = "box"
    directions: int = 512
    seed: int = 0
    permutations: int = 500
    p_rule: str = "strict"
    trim: float = 0.10
    resolution: int = 64
    workers: int = 1
    inputs: dict = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)

    def validate(self):
        DepthKind.parse(self.depth)
        PValueRule.parse(self.p_rule)
        if not 0 < self.r < 1:
            raise InputError(f"--r must lie in (0, 1), got {self.r}")
        if not 0 <= self.trim < 1:
            raise InputError(f"--trim must lie in [0, 1), got {self.trim}")
        if self.permutations < 1:
            raise InputError("--permutations must be positive")
        if self.seed < 0:
            raise InputError("--seed must be nonnegative")
        if self.workers < 1:
            raise InputError("--workers must be positive")
        self.weight_spec()
        self.depth_config()
        return self

    def weight_spec(self) -> WeightSpec:
        return WeightSpec(k=self.k, bandwidth=self.bandwidth, kernel=self.kernel)

    def depth_config(self) -> DepthConfig:
        return DepthConfig(direction_count=self.directions, rng_seed=self.seed)


def _round(obj):
    """Floats to 6 significant digits, recursively, for stable JSON."""
    if isinstance(obj, (float, np.floating)):
        return float(fmt(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_round(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def _write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(_round(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _indices(spec: str, n: int) -> List[int]:
    if spec == "all":
        return list(range(n))
    try:
        idx = [int(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"--at expects 'all' or comma-separated indices, got {spec!r}") from None
    bad = [i for i in idx if not 0 <= i < n]
    if bad:
        raise InputError(f"indices {bad} out of range for n={n}")
    return idx


class Run:
    def __init__(self, cfg: RunConfig, out: Path):
        self.cfg = cfg
        self.out = out
        self.out.mkdir(parents=True, exist_ok=True)
        self.t0 = time.perf_counter()
        self.warnings: List[str] = []

    def path(self, name: str) -> Path:
        self.cfg.outputs.append(name)
        return self.out / name

    def finish(self, extra: Optional[dict] = None) -> None:
        manifest = {
            "config": asdict(self.cfg),
            "seed": self.cfg.seed,
            "version": __version__,
            "timing_seconds": time.perf_counter() - self.t0,
            "warnings": self.warnings,
        }
        if extra:
            manifest.update(extra)
        _write_json(self.out / f"{self.cfg.command}.manifest.json", manifest)


def _load(args) -> Dataset:
    return load_dataset(args.responses, args.covariates, args.grid, args.grid_from_header)


def _config(args, command: str) -> RunConfig:
    k = None
    if getattr(args, "k", "auto") not in (None, "auto"):
        try:
            k = int(args.k)
        except ValueError:
            raise InputError(f"--k expects 'auto' or an integer, got {args.k!r}") from None
    cfg = RunConfig(
        command=command,
        depth=getattr(args, "depth", "halfspace"),
        r=getattr(args, "r", 0.5),
        k=k,
        bandwidth=getattr(args, "bandwidth", None),
        kernel=getattr(args, "kernel", "box"),
        directions=getattr(args, "directions", 512),
        seed=args.seed,
        permutations=getattr(args, "permutations", 500),
        p_rule=getattr(args, "p_rule", "strict"),
        trim=getattr(args, "trim", 0.10),
        resolution=getattr(args, "resolution", 64),
        workers=getattr(args, "workers", 1),
    )
    for name in ("responses", "covariates", "grid"):
        if getattr(args, name, None):
            cfg.inputs[name] = str(getattr(args, name))
    return cfg.validate()


# -- commands ----------------------------------------------------------------

def cmd_depth_eval(args) -> None:
    cfg = _config(args, "depth-eval")
    run = Run(cfg, Path(args.out))
    ds = _load(args)
    cache = NeighborCache(ds.covariates.distance_matrix(), cfg.weight_spec())
    dcfg = cfg.depth_config()
    queries = None
    if args.points:
        from .dataset import _read_numeric_csv

        _, queries = _read_numeric_csv(args.points, "query")
        if queries.shape[1] != ds.p:
            raise InputError(f"query points have {queries.shape[1]} columns, responses have {ds.p}")
    rows = []
    approx = False
    for i in _indices(args.at, ds.n):
        s = cache.local_sample(ds.responses, i)
        if queries is None:
            ev = evaluate(s.points, s, cfg.depth, dcfg)
            for row, w, d in zip(s.indices, s.weights, ev.values):
                rows.append([i, int(row), float(w), float(d)])
        else:
            ev = evaluate(queries, s, cfg.depth, dcfg)
            for q, d in enumerate(ev.values):
                rows.append([i, f"q{q}", "", float(d)])
        approx |= ev.approximate
    write_csv(run.path("depths.csv"), ["index", "point", "weight", "depth"], rows)
    if approx:
        run.warnings.append("depth values are direction-sampled approximations")
    run.finish()


def cmd_regions(args) -> None:
    cfg = _config(args, "regions")
    run = Run(cfg, Path(args.out))
    ds = _load(args)
    cache = NeighborCache(ds.covariates.distance_matrix(), cfg.weight_spec())
    dcfg = cfg.depth_config()
    records = []
    for i in _indices(args.at, ds.n):
        s = cache.local_sample(ds.responses, i)
        reg = central_region(s, cfg.depth, dcfg, cfg.r)
        med = conditional_median(s, cfg.depth, dcfg)
        tm = trimmed_mean(s, cfg.depth, dcfg, cfg.trim, reg.depths)
        rec = {
            "index": i,
            "alpha": reg.alpha,
            "member_rows": reg.member_rows.tolist(),
            "member_mass": reg.member_mass,
            "median": med.point.tolist(),
            "median_depth": med.depth,
            "median_policy": med.policy,
            "trimmed_mean": tm.tolist(),
            "trim": cfg.trim,
            "approximate": reg.approximate,
        }
        if ds.p == 2:
            lines = contour_2d(s, cfg.depth, dcfg, reg.alpha, resolution=cfg.resolution)
            crow = [[j, float(x), float(y)] for j, line in enumerate(lines) for x, y in line]
            write_csv(run.path(f"contour_{i}.csv"), ["path", "x", "y"], crow)
            canvas = Canvas(padded_limits(s.points[:, 0]), padded_limits(s.points[:, 1]),
                            title=f"covariate point {i}: {round(100 * cfg.r)}% central region",
                            xlabel=ds.response_names[0], ylabel=ds.response_names[1])
            canvas.points(s.points)
            for line in lines:
                canvas.path(line, closed=bool(np.allclose(line[0], line[-1])))
            canvas.circle_marker(med.point)
            canvas.cross_marker(tm)
            canvas.save(run.path(f"region_{i}.svg"))
        else:
            run.warnings.append(f"no contour plot for p={ds.p}")
        records.append(rec)
    _write_json(run.path("regions.json"), {"r": cfg.r, "depth": cfg.depth, "regions": records})
    run.finish()


def cmd_spread(args) -> None:
    cfg = _config(args, "spread")
    run = Run(cfg, Path(args.out))
    ds = _load(args)
    cache = NeighborCache(ds.covariates.distance_matrix(), cfg.weight_spec())
    dcfg = cfg.depth_config()
    scores, degenerate = principal_scores(ds.covariates, 2)
    if degenerate:
        run.warnings.append("covariate dispersion has rank < 2; missing principal scores are zero")
    header = ["index", "r", "delta"]
    if args.volume != "none":
        header.append(f"volume_{args.volume}")
    header += ["P1", "P2"]
    rows = []
    deltas = np.empty(ds.n)
    for i in range(ds.n):
        s = cache.local_sample(ds.responses, i)
        deltas[i] = spread_diameter(s, cfg.depth, dcfg, cfg.r).value
        row = [i, cfg.r, float(deltas[i])]
        if args.volume == "grid":
            row.append(spread_volume_grid(s, cfg.depth, dcfg, cfg.r, cfg.resolution).value)
        elif args.volume == "hull":
            row.append(spread_volume_hull(s, cfg.depth, dcfg, cfg.r).value)
        rows.append(row + [float(scores[i, 0]), float(scores[i, 1])])
    write_csv(run.path("spread.csv"), header, rows)
    for c, name in ((0, "P1"), (1, "P2")):
        canvas = Canvas(padded_limits(scores[:, c]), padded_limits(deltas),
                        title=f"spread (r={cfg.r:g}) against {name}", xlabel=name, ylabel="delta")
        canvas.points(np.column_stack([scores[:, c], deltas]))
        canvas.save(run.path(f"spread_{name}.svg"))
    run.finish({"pca_degenerate": bool(degenerate)})


def cmd_hetero_test(args) -> None:
    cfg = _config(args, "hetero-test")
    run = Run(cfg, Path(args.out))
    ds = _load(args)
    res = permutation_test(ds, cfg.depth, cfg.depth_config(), cfg.r, cfg.weight_spec(),
                           cfg.permutations, cfg.seed, cfg.p_rule, cfg.workers)
    run.warnings.extend(res.warnings)
    if res.approximate:
        run.warnings.append("depth values are direction-sampled approximations")
    payload = res.to_dict()
    payload.pop("observed_profile", None)
    _write_json(run.path("hetero_test.json"), payload)
    run.finish({"result": {k: payload[k] for k in ("observed_t", "p_value", "p_value_rule", "B")}})


def cmd_simulate(args) -> None:
    cfg = _config(args, "simulate")
    run = Run(cfg, Path(args.out))
    ds = sample_model(SimulationModel(args.model, args.a), args.n, cfg.seed)
    paths = save_dataset(ds, Path(args.out) / args.prefix)
    cfg.outputs.extend(Path(p).name for p in paths.values())
    run.finish({"model": args.model, "a": args.a, "n": args.n})


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_power_study(args) -> None:
    cfg = _config(args, "power-study")
    run = Run(cfg, Path(args.out))
    table = power_study(
        [int(m) for m in _floats(args.models)], [int(n) for n in _floats(args.ns)],
        _floats(args.a), _floats(args.levels), args.replications, cfg.permutations,
        cfg.seed, cfg.depth_config(), cfg.r, cfg.weight_spec(), cfg.workers,
    )
    header, lines = table.to_csv_rows()
    write_csv(run.path("power.csv"), header, lines)
    run.finish({
        "replications": args.replications,
        "cell_timings_seconds": {f"model={m},n={n},a={a:g}": t for (m, n, a), t in table.timings.items()},
    })


# -- argument parsing --------------------------------------------------------

def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _data_args(p):
    p.add_argument("--responses", required=True, help="response CSV with header")
    p.add_argument("--covariates", required=True, help="covariate CSV with header")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--grid", help="one-row CSV of curve grid values")
    g.add_argument("--grid-from-header", action="store_true",
                   help="covariate header holds the curve grid values")


def _analysis_args(p, seed):
    p.add_argument("--depth", default="halfspace", choices=[k.value for k in DepthKind])
    p.add_argument("--r", type=float, default=0.5, help="central-region probability")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--k", default="auto", help="neighbors: 'auto' = floor(log(n)^2)+1, or an integer")
    g.add_argument("--bandwidth", type=float, help="kernel bandwidth (replaces k-NN)")
    p.add_argument("--kernel", default="box", choices=["box", "epanechnikov"])
    p.add_argument("--directions", type=int, default=512)
    _common(p, seed)


def _common(p, seed):
    p.add_argument("--seed", type=int, default=seed, help=f"RNG seed (default ${SEED_ENV} or 0)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--workers", type=int, default=1)


def build_parser(seed: int = 0) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="depthreg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("depth-eval", help="conditional depth of local responses or given points")
    _data_args(p)
    _analysis_args(p, seed)
    p.add_argument("--at", default="all", help="covariate indices ('all' or i,j,...)")
    p.add_argument("--points", help="CSV of query points (header row, p columns)")
    p.set_defaults(func=cmd_depth_eval)

    p = sub.add_parser("regions", help="central regions, medians and trimmed means")
    _data_args(p)
    _analysis_args(p, seed)
    p.add_argument("--at", default="all")
    p.add_argument("--trim", type=float, default=0.10, help="trimming proportion of the trimmed mean")
    p.add_argument("--resolution", type=int, default=64, help="contour grid cells per axis")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("spread", help="central-region diameter at every covariate point")
    _data_args(p)
    _analysis_args(p, seed)
    p.add_argument("--volume", default="none", choices=["none", "grid", "hull"])
    p.add_argument("--resolution", type=int, default=64)
    p.set_defaults(func=cmd_spread)

    p = sub.add_parser("hetero-test", help="permutation test for heteroscedasticity")
    _data_args(p)
    _analysis_args(p, seed)
    p.add_argument("--permutations", type=int, default=500)
    p.add_argument("--p-rule", default="strict", choices=["strict", "addone"])
    p.set_defaults(func=cmd_hetero_test)

    p = sub.add_parser("simulate", help="draw a dataset from a simulation model")
    p.add_argument("--model", type=int, required=True, choices=[1, 2, 3, 4])
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--prefix", default="sim")
    _common(p, seed)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("power-study", help="Monte Carlo level/power study")
    p.add_argument("--models", default="1")
    p.add_argument("--ns", default="100")
    p.add_argument("--a", default="0,2,4,6,8")
    p.add_argument("--levels", default="0.05,0.01")
    p.add_argument("--replications", type=int, default=200)
    p.add_argument("--permutations", type=int, default=200)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--k", default="auto")
    p.add_argument("--directions", type=int, default=512)
    _common(p, seed)
    p.set_defaults(func=cmd_power_study)
    return parser


def main(argv=None) -> int:
    try:
        seed = _default_seed()
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = build_parser(seed)
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
