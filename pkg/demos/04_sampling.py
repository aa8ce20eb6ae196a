"""Uniform sampling by rotation on the circle, and the checks built on it."""

# %%
from parking.randomized import holes_check, lucky_clt_check, sample_pf, uniformity_check
from parking.rng import RandomSource

rng = RandomSource(7)
print([sample_pf(4, 6, rng).prefs for _ in range(5)])

# %% Chi-square against uniformity on PF(3,5)
report = uniformity_check(3, 5, 200_000, RandomSource(7, 1))
print(report.statistics, report.passed)

# %% Hole positions: sample means against i(n+1)/(n-m+1)
report = holes_check(60, 80, RandomSource(7, 2), 20_000)
print("worst |z|", max(abs(c.statistic) for c in report.checks))

# %% Lucky cars are close to normal
report = lucky_clt_check(300, 600, RandomSource(7, 3), 50_000)
print({k: round(v, 4) for k, v in report.statistics.items()})

# %% Reports serialize to JSON with the seed embedded
print(report.to_json()[:300], "...")
