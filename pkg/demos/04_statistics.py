"""
The statistics toolkit on its own
=================================

Factorial ANOVA, correlation and the rank test work on plain observations,
with p-values from a self-contained incomplete beta function.
"""

import numpy as np

from tonecurve.stats import (
    Observation,
    anova_n_way,
    f_sf,
    group_summary,
    mann_whitney_z,
    pearson,
)

rng = np.random.default_rng(0)
obs = []
for dose in ("low", "high"):
    for site in ("a", "b", "c"):
        for _ in range(6):
            mu = (1.0 if dose == "high" else 0.0) + (0.5 if site == "c" else 0.0)
            obs.append(Observation(mu + rng.normal(0, 0.5), {"dose": dose, "site": site}))

table = anova_n_way(obs, ["dose", "site"], include_interactions=True)
print(f"{'effect':<10}{'df':>4}{'SS':>10}{'F':>9}{'p':>10}")
for row in table.rows:
    F = "" if np.isnan(row.F) else f"{row.F:.3f}"
    p = "" if np.isnan(row.p) else f"{row.p:.4f}"
    print(f"{row.name:<10}{row.df:>4}{row.sum_sq:>10.3f}{F:>9}{p:>10}")

for g in group_summary(obs, ["dose"]):
    print(dict(g.levels), f"mean {g.mean:.3f}, sd {g.sd:.3f}, n {g.n}")

print("upper tail of F(2, 30) at 3.32:", round(f_sf(3.32, 2, 30), 4))

x = rng.normal(size=40)
c = pearson(x, 0.6 * x + rng.normal(0, 0.8, 40))
print(f"pearson r = {c.r:.3f}, t = {c.t_stat:.3f}, p = {c.p:.4f}")

r = mann_whitney_z([1.1, 2.3, 2.3, 3.0], [2.9, 3.5, 4.1, 4.4, 5.0])
print(f"rank test U = {r.U}, z = {r.z:.3f}, p = {r.p:.4f}")
