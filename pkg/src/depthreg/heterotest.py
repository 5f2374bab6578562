"""Permutation test for heteroscedasticity.

The statistic is the empirical variance of the spread profile
``Delta_n(r | X_i), i = 1..n``. Under homoscedasticity the responses are
exchangeable across covariate values, so the null distribution is
approximated by recomputing the statistic after shuffling responses against
fixed covariates. Neighbor lists depend only on covariates and are computed
once.
"""
from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from . import _kernels
from .dataset import Dataset
from .depth import DepthConfig, DepthKind, depth_at_points, is_exact
from .errors import EmptyNeighborhoodError, InputError
from .weights import NeighborCache, WeightSpec

# relative slack when comparing permuted and observed statistics
TIE_RTOL = 1e-12


class PValueRule(str, enum.Enum):
    STRICT = "strict"
    ADD_ONE = "addone"

    @classmethod
    def parse(cls, value) -> "PValueRule":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace("_", "").replace("-", ""))
        except ValueError:
            raise InputError(f"unknown p-value rule {value!r}; use 'strict' or 'addone'") from None


def t_statistic(deltas) -> float:
    """Mean squared deviation of the spread profile from its mean."""
    d = np.asarray(deltas, dtype=float)
    if d.ndim != 1 or d.size == 0:
        raise InputError("spread profile must be a non-empty 1-D array")
    if not np.all(np.isfinite(d)):
        raise InputError("spread profile contains non-finite values")
    return float(np.mean((d - d.mean()) ** 2))


def p_value(observed: float, perm_ts, rule="strict") -> float:
    """Permutation p-value.

    ``strict``: share of permuted statistics larger than the observed one.
    ``addone``: ``(1 + #{perm >= observed}) / (B + 1)``, never zero.
    """
    perm = np.asarray(perm_ts, dtype=float)
    rule = PValueRule.parse(rule)
    slack = TIE_RTOL * max(1.0, abs(observed))
    if rule is PValueRule.STRICT:
        return float(np.count_nonzero(perm > observed + slack) / perm.size)
    return float((1 + np.count_nonzero(perm >= observed - slack)) / (perm.size + 1))


class SpreadProfiler:
    """Computes ``Delta_n(r | X_i)`` for all i for any arrangement of responses."""

    def __init__(self, dataset: Dataset, kind="halfspace", cfg: Optional[DepthConfig] = None,
                 r: float = 0.5, weights: Optional[WeightSpec] = None, cache: Optional[NeighborCache] = None):
        if not 0 < r < 1:
            raise InputError(f"r must lie in (0, 1), got {r!r}")
        self.kind = DepthKind.parse(kind)
        self.cfg = cfg or DepthConfig()
        self.r = float(r)
        self.p = dataset.p
        self.n = dataset.n
        self.weights = weights or WeightSpec()
        self.cache = cache or NeighborCache(dataset.covariates.distance_matrix(), self.weights)
        self.fast = self.kind is DepthKind.HALFSPACE and self.p == 2

    def profile(self, ys) -> np.ndarray:
        ys = np.ascontiguousarray(ys, dtype=float)
        c = self.cache
        if self.fast:
            return _kernels.halfspace2d_delta_profile(
                ys, c.indptr, c.indices, c.weights, self.r, self.cfg.coincidence_tolerance
            )
        out = np.empty(self.n)
        for i in range(self.n):
            s = c.local_sample(ys, i)
            dv = np.ascontiguousarray(depth_at_points(s, self.kind, self.cfg))
            alpha = _kernels.alpha_value(dv, np.ascontiguousarray(s.weights), self.r)
            out[i] = _kernels.max_pairwise_distance(np.ascontiguousarray(s.points), dv >= alpha)[0]
        return out


def delta_profile(dataset: Dataset, kind="halfspace", cfg: Optional[DepthConfig] = None,
                  r: float = 0.5, weights: Optional[WeightSpec] = None) -> np.ndarray:
    """Spread ``Delta_n(r | X_i)`` at every sample covariate value."""
    return SpreadProfiler(dataset, kind, cfg, r, weights).profile(dataset.responses)


def permutation(seed: int, b: int, n: int) -> np.ndarray:
    """The b-th random permutation of ``range(n)``; streams are independent per (seed, b)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(b)])).permutation(n)


@dataclass
class HeteroTestResult:
    observed_t: float
    perm_ts: np.ndarray
    p_value: float
    p_value_rule: PValueRule
    B: int
    seed: int
    r: float
    depth_kind: DepthKind
    weights: dict
    approximate: bool = False
    observed_profile: Optional[np.ndarray] = None
    warnings: List[str] = field(default_factory=list)

    def p_value_as(self, rule) -> float:
        return p_value(self.observed_t, self.perm_ts, rule)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["perm_ts"] = [float(v) for v in self.perm_ts]
        d["p_value_rule"] = self.p_value_rule.value
        d["depth_kind"] = self.depth_kind.value
        if self.observed_profile is not None:
            d["observed_profile"] = [float(v) for v in self.observed_profile]
        return d


def _perm_stats(profiler: SpreadProfiler, ys, seed, bs):
    n = ys.shape[0]
    return [t_statistic(profiler.profile(ys[permutation(seed, b, n)])) for b in bs]


def permutation_test(dataset: Dataset, kind="halfspace", cfg: Optional[DepthConfig] = None,
                     r: float = 0.5, weights: Optional[WeightSpec] = None, B: int = 500,
                     seed: int = 0, rule="strict", workers: int = 1,
                     profiler: Optional[SpreadProfiler] = None) -> HeteroTestResult:
    """Test whether the central-region diameter varies with the covariate.

    Permutation ``b`` shuffles the responses with an RNG stream derived from
    ``(seed, b)``, so results do not depend on ``workers``.
    """
    if int(B) != B or B < 1:
        raise InputError(f"B must be a positive integer, got {B!r}")
    if int(seed) != seed or seed < 0:
        raise InputError(f"seed must be a nonnegative integer, got {seed!r}")
    rule = PValueRule.parse(rule)
    prof = profiler or SpreadProfiler(dataset, kind, cfg, r, weights)
    ys = dataset.responses
    observed_profile = prof.profile(ys)
    observed = t_statistic(observed_profile)
    bs = list(range(1, B + 1))
    if workers > 1 and B > 1:
        chunks = [bs[i::workers] for i in range(workers)]
        perm = np.empty(B)
        with ProcessPoolExecutor(workers) as ex:
            futs = [ex.submit(_perm_stats, prof, ys, seed, ch) for ch in chunks]
            for ch, fut in zip(chunks, futs):
                perm[np.asarray(ch) - 1] = fut.result()
    else:
        perm = np.asarray(_perm_stats(prof, ys, seed, bs))
    notes = []
    slack = TIE_RTOL * max(1.0, abs(observed))
    if np.all(np.abs(perm - observed) <= slack):
        notes.append(
            "degenerate: every permuted statistic equals the observed one "
            f"(T={observed:.6g}); the strict p-value is 0 by construction and carries no evidence"
        )
    return HeteroTestResult(
        observed_t=observed,
        perm_ts=perm,
        p_value=p_value(observed, perm, rule),
        p_value_rule=rule,
        B=int(B),
        seed=int(seed),
        r=prof.r,
        depth_kind=prof.kind,
        weights=prof.weights.describe(dataset.n),
        approximate=not is_exact(prof.kind, dataset.p),
        observed_profile=observed_profile,
        warnings=notes,
    )


__all__ = [
    "EmptyNeighborhoodError",
    "HeteroTestResult",
    "PValueRule",
    "SpreadProfiler",
    "delta_profile",
    "p_value",
    "permutation",
    "permutation_test",
    "t_statistic",
]
