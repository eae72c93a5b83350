"""Watch the learner converge: blocked units and welfare round by round."""
import numpy as np

import crowdmatch as cm

cfg = cm.ScenarioConfig(
    n_mus=10, n_types=10, tasks_per_type=(1,) * 10,
    horizon=800, replications=12, master_seed=408,
)
result = cm.run_campaign(cfg, ("ca-mab-sfs", "eps-greedy"))

oracle = np.mean([r.oracle_welfare for r in result.realizations])
for strategy in ("ca-mab-sfs", "eps-greedy"):
    blocked = result.mean_series(strategy, "blocked_mu_count")
    welfare = result.mean_series(strategy, "social_welfare")
    print(f"\n{strategy}")
    print(f"  {'round':>6s} {'blocked':>8s} {'welfare/opt':>12s}")
    for t in (1, 10, 30, 100, 300, 800):
        print(f"  {t:6d} {blocked[t - 1]:8.2f} {welfare[t - 1] / oracle:12.3f}")

free = result.mean_series("ca-mab-sfs", "free_offers_cumulative")
print("\ncumulative free offers (they stop when the learning phase ends):")
for t in (5, 15, 30, 100, 800):
    print(f"  t={t:4d}: {free[t - 1]:.2f}")
