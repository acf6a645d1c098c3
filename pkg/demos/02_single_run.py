"""Simulate one workload under the consolidation policy and inspect the trace.

A 100-PM datacenter receives 100 one-unit VMs over a 6-hour horizon; the
demo prints the event log's first lines, the energy breakdown of the PMs
that actually ran, and the four summary metrics.
"""

from savesim import PmSpec, PolicyConfig, WorkloadSpec, generate, joules_to_wh, metrics_of, run

fleet = [PmSpec(id=i, capacity=400, p_min=110.0, p_max=205.0) for i in range(100)]
requests = generate(WorkloadSpec(n_vms=100, seed=7))
cfg = PolicyConfig(rng_seed=7)

trace, ledger = run(requests, fleet, cfg, horizon=360)

print("first 12 events:")
for e in trace.events[:12]:
    print(f"  slot {e.slot:>3}  {e.kind:<7} vm={e.vm_id} src={e.src_pm} dst={e.dst_pm}")

print("\nper-PM energy (only PMs that were ever active):")
for pm_id, joules in sorted(ledger.per_pm_energy.items()):
    on = joules_to_wh(ledger.on_energy.get(pm_id, 0.0))
    print(f"  PM {pm_id:>3}: {joules_to_wh(joules):8.1f} Wh  (idle share {on:8.1f} Wh)")

report = metrics_of(trace, ledger)
print(f"\ntotal energy        : {report.total_kwh:.4f} kWh")
print(f"migrations          : {report.migration_count}")
print(f"rejected requests   : {report.rejected_count}")
print(f"mean active CPU util: {report.mean_active_utilization:.4f}")
print(f"peak active PMs     : {max(report.active_pm_series)} of {len(fleet)}")
