"""Walk through the probability functions that drive placement decisions.

Prints small tables of the allocation function, the Beta-based migration
function, and the EcoCloud shapes so you can eyeball where each policy
accepts, rejects, and migrates.
"""

import numpy as np

from savesim import EcoCloudParams, PolicyConfig, allocation_probability, migration_probability
from savesim.baselines import ecocloud_assign_prob, ecocloud_migrate_prob

cfg = PolicyConfig()
eco = EcoCloudParams.from_config(cfg)

print("utilization  alloc_prob  migrate_prob(regime)   eco_assign  eco_migrate")
for x in np.linspace(0.0, 1.0, 21):
    x = float(x)
    ap = allocation_probability(x, cfg.t_a)
    mig = migration_probability(x, cfg)
    tag = f"{mig.mp:.3f} ({mig.regime})"
    print(
        f"{x:>10.2f}  {ap:>10.4f}  {tag:>20}   "
        f"{ecocloud_assign_prob(x, eco):>9.4f}  {ecocloud_migrate_prob(x, eco):>10.4f}"
    )

print()
print(f"thresholds: T_l={cfg.t_l} T_h={cfg.t_h} T_a={cfg.t_a}, Beta shapes "
      f"alpha={cfg.alpha} beta={cfg.beta}")
print("note how the allocation function rises with utilization (pack the "
      "fullest machine), while migration only fires outside the comfort band.")
