"""Paired comparison of the three policies on the 100-PM / 100-VM fixture.

Every policy sees the identical request list per replication; the
load-balancing baseline keeps the whole fleet powered on, which is what
the consolidating policies save against.
"""

import statistics

from savesim import PmSpec, Policy, PolicyConfig, WorkloadSpec, generate, metrics_of, run

N_PMS, N_VMS, REPS = 100, 100, 10

fleet = [PmSpec(id=i, capacity=400) for i in range(N_PMS)]
policies = [
    PolicyConfig(policy=Policy.DRS_LIKE, all_active=True),
    PolicyConfig(policy=Policy.ECOCLOUD),
    PolicyConfig(policy=Policy.SAVE),
]

energy = {p.policy.value: [] for p in policies}
moves = {p.policy.value: [] for p in policies}
for rep in range(REPS):
    requests = generate(WorkloadSpec(n_vms=N_VMS, seed=100 + rep))
    for pcfg in policies:
        trace, ledger = run(requests, fleet, pcfg.with_seed(100 + rep), horizon=360)
        report = metrics_of(trace, ledger)
        energy[pcfg.policy.value].append(report.total_kwh)
        moves[pcfg.policy.value].append(report.migration_count)

baseline = statistics.fmean(energy["DrsLike"])
print(f"{'policy':<10} {'kWh (mean±std)':<20} {'migrations':<12} relative cost")
for name in ("DrsLike", "EcoCloud", "SAVE"):
    mean = statistics.fmean(energy[name])
    std = statistics.stdev(energy[name])
    print(
        f"{name:<10} {mean:8.3f} ± {std:6.3f}    "
        f"{statistics.fmean(moves[name]):>8.1f}     {mean / baseline * 100:6.2f}%"
    )
