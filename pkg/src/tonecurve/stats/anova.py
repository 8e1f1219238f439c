"""Fixed-effects factorial ANOVA for balanced designs."""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..exceptions import StatsError, UnbalancedDesignError
from .inference import Observation, _level
from .special import f_sf


@dataclass(frozen=True)
class AnovaRow:
    name: str
    df: int
    sum_sq: float
    mean_sq: float
    F: float = math.nan
    p: float = math.nan


@dataclass(frozen=True)
class AnovaTable:
    effects: Tuple[AnovaRow, ...]
    residual: AnovaRow
    total: AnovaRow
    model: str = "main_effects"
    degenerate: bool = False

    def __getitem__(self, name) -> AnovaRow:
        for row in self.effects:
            if row.name == name:
                return row
        raise KeyError(name)

    @property
    def rows(self) -> Tuple[AnovaRow, ...]:
        return self.effects + (self.residual, self.total)


def _cells(observations, factors):
    cells: Dict[Tuple[str, ...], List[float]] = defaultdict(list)
    for obs in observations:
        cells[tuple(_level(obs, f) for f in factors)].append(float(obs.value))
    return cells


def is_balanced(observations: Sequence[Observation], factors: Sequence[str]) -> bool:
    """Every cell of the full factor crossing is present with the same count."""
    cells = _cells(observations, factors)
    levels = [sorted({key[i] for key in cells}) for i in range(len(factors))]
    expected = math.prod(len(lv) for lv in levels)
    counts = {len(v) for v in cells.values()}
    return len(cells) == expected and len(counts) == 1


def anova_n_way(observations: Sequence[Observation], factors: Sequence[str],
                include_interactions: bool = False) -> AnovaTable:
    """Sums of squares by level-mean decomposition, F tests against the residual.

    Interaction terms for a factor subset are the marginal sum of squares of
    that subset minus the terms of all its proper subsets, which is exact for
    balanced data.  More than one factor, or any interaction, requires a
    balanced design; a single factor may be unbalanced.
    """
    factors = list(factors)
    if not factors:
        raise StatsError("anova needs at least one factor")
    if len(set(factors)) != len(factors):
        raise StatsError("duplicate factor names")
    observations = list(observations)
    if (len(factors) > 1 or include_interactions) and not is_balanced(observations, factors):
        raise UnbalancedDesignError(f"design over {factors} is unbalanced; use the "
                                    "one-way fallback or balance the data")

    y = np.array([float(o.value) for o in observations])
    n = len(y)
    grand = float(y.mean())
    ss_total = float(np.sum((y - grand) ** 2))
    levels = {f: sorted({_level(o, f) for o in observations}) for f in factors}

    max_order = len(factors) if include_interactions else 1
    subsets = [s for r in range(1, max_order + 1)
               for s in itertools.combinations(factors, r)]
    ss: Dict[Tuple[str, ...], float] = {}
    for subset in subsets:
        marginal = 0.0
        for vals in _cells(observations, subset).values():
            marginal += len(vals) * (float(np.mean(vals)) - grand) ** 2
        lower = sum(ss[t] for r in range(1, len(subset))
                    for t in itertools.combinations(subset, r))
        ss[subset] = max(0.0, marginal - lower)

    df = {s: math.prod(len(levels[f]) - 1 for f in s) for s in subsets}
    df_resid = n - 1 - sum(df.values())
    if df_resid <= 0:
        raise StatsError(f"residual degrees of freedom = {df_resid}; not enough data")
    ss_resid = max(0.0, ss_total - sum(ss.values()))
    ms_resid = ss_resid / df_resid
    scale = max(1.0, abs(grand))
    degenerate = ss_total <= n * (1e-12 * scale) ** 2

    rows = []
    for subset in subsets:
        name = ":".join(subset)
        d = df[subset]
        ms = ss[subset] / d if d > 0 else 0.0
        if degenerate or d == 0:
            F, p = 0.0, 1.0
        elif ms_resid == 0:
            F, p = (math.inf, 0.0) if ms > 0 else (0.0, 1.0)
        else:
            F = ms / ms_resid
            p = f_sf(F, d, df_resid)
        rows.append(AnovaRow(name, d, ss[subset], ms, F, p))
    model = "full_factorial" if include_interactions and len(factors) > 1 else (
        "main_effects" if len(factors) > 1 else f"one_way:{factors[0]}")
    return AnovaTable(tuple(rows),
                      AnovaRow("Residual", df_resid, ss_resid, ms_resid),
                      AnovaRow("Total", n - 1, ss_total, ss_total / (n - 1)),
                      model=model, degenerate=degenerate)


def anova(observations: Sequence[Observation], factors: Sequence[str],
          include_interactions: bool = False, one_way_fallback: bool = False
          ) -> List[AnovaTable]:
    """N-way table, or one one-way table per factor when the design is
    unbalanced and ``one_way_fallback`` is set."""
    try:
        return [anova_n_way(observations, factors, include_interactions)]
    except UnbalancedDesignError:
        if not one_way_fallback:
            raise
    return [anova_n_way(observations, [f]) for f in factors]


def cell_counts(observations: Sequence[Observation], factors: Sequence[str]) -> Counter:
    return Counter(tuple(_level(o, f) for f in factors) for o in observations)
