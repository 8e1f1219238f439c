"""Descriptives, Pearson correlation and the rank-sum z test."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from ..exceptions import StatsError
from .special import normal_sf, t_sf_two_sided


@dataclass(frozen=True)
class Observation:
    value: float
    factors: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class GroupSummary:
    levels: Tuple[Tuple[str, str], ...]
    n: int
    mean: float
    sd: float

    @property
    def single(self) -> bool:
        """True when sd is reported as 0 only because n == 1."""
        return self.n == 1


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    t_stat: float
    p: float


@dataclass(frozen=True)
class RankTestResult:
    U: float
    z: float
    p: float
    n1: int
    n2: int


def _level(obs: Observation, name: str) -> str:
    try:
        return str(obs.factors[name])
    except KeyError:
        raise StatsError(f"unknown factor {name!r}") from None


def group_summary(observations: Sequence[Observation], by: Sequence[str] = ()
                  ) -> List[GroupSummary]:
    """n, mean and sample sd (n - 1 denominator) per level combination of ``by``."""
    groups: Dict[Tuple[str, ...], List[float]] = {}
    for obs in observations:
        key = tuple(_level(obs, name) for name in by)
        groups.setdefault(key, []).append(float(obs.value))
    out = []
    for key in sorted(groups):
        vals = np.asarray(groups[key])
        sd = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
        out.append(GroupSummary(tuple(zip(by, key)), len(vals), float(vals.mean()), sd))
    return out


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Pearson r with a two-sided t test on n - 2 degrees of freedom."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise StatsError(f"length mismatch: {x.shape} vs {y.shape}")
    n = len(x)
    if n < 3:
        raise StatsError("pearson needs at least 3 pairs")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise StatsError("correlation undefined for constant input")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return CorrelationResult(r, n, math.copysign(math.inf, r), 0.0)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return CorrelationResult(r, n, t, t_sf_two_sided(t, n - 2))


def midranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with tied values sharing their average rank."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def mann_whitney_z(x: Sequence[float], y: Sequence[float]) -> RankTestResult:
    """Rank-sum test, normal approximation with tie-corrected variance.

    ``U`` counts pairs with x above y (ties count one half); ``z`` is
    negative when x tends to be smaller than y.  No continuity correction.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n1, n2 = len(x), len(y)
    if n1 < 1 or n2 < 1:
        raise StatsError("both samples need at least one value")
    ranks = midranks(np.concatenate([x, y]))
    u = float(ranks[:n1].sum()) - n1 * (n1 + 1) / 2.0
    n = n1 + n2
    _, counts = np.unique(np.concatenate([x, y]), return_counts=True)
    ties = float(np.sum(counts ** 3 - counts))
    var = n1 * n2 / 12.0 * ((n + 1) - (ties / (n * (n - 1)) if n > 1 else 0.0))
    if var <= 0:
        raise StatsError("rank test undefined: all values identical")
    z = (u - n1 * n2 / 2.0) / math.sqrt(var)
    return RankTestResult(u, z, min(1.0, 2.0 * normal_sf(abs(z))), n1, n2)
