"""Statistical battery: descriptives, factorial ANOVA, correlation, rank test."""

from .anova import AnovaRow, AnovaTable, anova, anova_n_way, cell_counts, is_balanced
from .inference import (
    CorrelationResult,
    GroupSummary,
    Observation,
    RankTestResult,
    group_summary,
    mann_whitney_z,
    midranks,
    pearson,
)
from .special import betainc, f_cdf, f_sf, normal_cdf, normal_sf, t_cdf, t_sf_two_sided


def format_p(p: float) -> str:
    """Four decimals; anything below 5e-5 prints as 0.0000."""
    return f"{p:.4f}"


__all__ = [
    "AnovaRow", "AnovaTable", "anova", "anova_n_way", "cell_counts", "is_balanced",
    "CorrelationResult", "GroupSummary", "Observation", "RankTestResult",
    "group_summary", "mann_whitney_z", "midranks", "pearson", "betainc", "f_cdf",
    "f_sf", "normal_cdf", "normal_sf", "t_cdf", "t_sf_two_sided", "format_p",
]
