"""Deterministic slotted-time simulation kernel and run metrics."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .baselines import (
    EcoCloudParams,
    drs_allocate,
    drs_migrate_round,
    ecocloud_allocate,
    ecocloud_migrate_round,
)
from .core import (
    InvariantError,
    NoCapacityError,
    PmMode,
    PmSpec,
    PmState,
    Policy,
    PolicyConfig,
    VmRequest,
    validate_config,
)
from .energy import EnergyLedger, joules_to_kwh
from .save import save_allocate, save_migrate_round

# Within a slot: departures, then arrivals (wakes and rejects belong to the
# arrival phase), then the migration round, then power-mode parking.
EVENT_ORDER = {"depart": 0, "arrive": 1, "wake": 1, "reject": 1, "migrate": 2, "sleep": 3}

TRACE_HEADER = "slot,kind,vm_id,src_pm,dst_pm"
UTILIZATION_HEADER = "slot,pm_id,utilization"


@dataclass(frozen=True)
class SimEvent:
    slot: int
    kind: str  # arrive | depart | migrate | wake | sleep | reject
    vm_id: int | None = None
    src_pm: int | None = None
    dst_pm: int | None = None
    reason: str | None = None


@dataclass
class SimTrace:
    """Ordered event log plus the realized per-slot utilization surface."""

    events: list[SimEvent] = field(default_factory=list)
    per_slot_utilization: dict[tuple[int, int], float] = field(default_factory=dict)
    seed: int = 0
    config: PolicyConfig | None = None
    horizon: int = 0
    aborted_migrations: int = 0


def run(
    requests: Sequence[VmRequest],
    fleet: Sequence[PmSpec],
    cfg: PolicyConfig,
    horizon: int | None = None,
) -> tuple[SimTrace, EnergyLedger]:
    """Simulate one run; returns the event trace and the energy ledger.

    Pure function of (requests, fleet, cfg, horizon): identical inputs
    yield bit-identical traces. Rejected requests are dropped, not queued.
    """
    cfg = validate_config(cfg)
    if not fleet:
        raise InvariantError("fleet is empty")
    max_g = max(s.capacity for s in fleet)
    if horizon is None:
        horizon = max((r.end for r in requests), default=0)
    for r in requests:
        if r.end > horizon:
            raise InvariantError(f"request {r.id} ends past the horizon {horizon}")
        if r.demand > max_g:
            raise InvariantError(f"request {r.id} demands more than any PM capacity")

    initial_mode = PmMode.ACTIVE if cfg.all_active else PmMode.SLEEPING
    states = [PmState(spec=s, mode=initial_mode) for s in sorted(fleet, key=lambda s: s.id)]
    rng = random.Random(cfg.rng_seed)
    eco_params = EcoCloudParams.from_config(cfg) if cfg.policy is Policy.ECOCLOUD else None

    arrivals: dict[int, list[VmRequest]] = {}
    departures: dict[int, list[VmRequest]] = {}
    for r in sorted(requests, key=lambda r: (r.start, r.id)):
        arrivals.setdefault(r.start, []).append(r)
        departures.setdefault(r.end, []).append(r)

    trace = SimTrace(seed=cfg.rng_seed, config=cfg, horizon=horizon)
    ledger = EnergyLedger()
    hosting: dict[int, PmState] = {}

    def allocate(req: VmRequest) -> int:
        if cfg.policy is Policy.SAVE:
            return save_allocate(req, states, cfg, rng)
        if cfg.policy is Policy.ECOCLOUD:
            return ecocloud_allocate(req, states, eco_params, rng)
        return drs_allocate(req, states, cfg)

    for t in range(horizon):
        for req in sorted(departures.get(t, []), key=lambda r: r.id):
            if req.id not in hosting:  # rejected at arrival
                continue
            pm = hosting.pop(req.id)
            pm.release(req.id)
            trace.events.append(SimEvent(t, "depart", vm_id=req.id, src_pm=pm.spec.id))

        for req in sorted(arrivals.get(t, []), key=lambda r: r.id):
            sleeping_before = {pm.spec.id for pm in states if pm.mode is PmMode.SLEEPING}
            try:
                pm_id = allocate(req)
            except NoCapacityError:
                trace.events.append(SimEvent(t, "reject", vm_id=req.id, reason="no_capacity"))
                continue
            if pm_id in sleeping_before:
                trace.events.append(SimEvent(t, "wake", src_pm=pm_id))
            hosting[req.id] = next(pm for pm in states if pm.spec.id == pm_id)
            trace.events.append(SimEvent(t, "arrive", vm_id=req.id, dst_pm=pm_id))

        if t > 0 and t % cfg.migration_check_period == 0:
            if cfg.policy is Policy.SAVE:
                outcome = save_migrate_round(states, cfg, rng)
            elif cfg.policy is Policy.ECOCLOUD:
                outcome = ecocloud_migrate_round(states, eco_params, rng)
            else:
                outcome = drs_migrate_round(states, cfg)
            trace.aborted_migrations += outcome.aborted
            for mv in outcome.moves:
                hosting[mv.vm_id] = next(pm for pm in states if pm.spec.id == mv.dst)
                trace.events.append(
                    SimEvent(t, "migrate", vm_id=mv.vm_id, src_pm=mv.src, dst_pm=mv.dst)
                )

        if not cfg.all_active:
            for pm in states:
                if pm.mode is PmMode.ACTIVE and not pm.hosted:
                    pm.mode = PmMode.SLEEPING
                    trace.events.append(SimEvent(t, "sleep", src_pm=pm.spec.id))

        for pm in states:
            if pm.mode is PmMode.ACTIVE:
                ledger.record_active_slot(pm, cfg.slot_seconds)
                trace.per_slot_utilization[(t, pm.spec.id)] = pm.utilization
            else:
                ledger.record_sleeping_slot(pm, cfg.slot_seconds, cfg.p_sleep)

    # VMs running through the last slot depart at the horizon boundary.
    for req in sorted(departures.get(horizon, []), key=lambda r: r.id):
        if req.id not in hosting:
            continue
        pm = hosting.pop(req.id)
        pm.release(req.id)
        trace.events.append(SimEvent(horizon, "depart", vm_id=req.id, src_pm=pm.spec.id))

    return trace, ledger


@dataclass(frozen=True)
class MetricsReport:
    """The four evaluation metrics of a completed run."""

    mean_active_utilization: float
    utilization_percentiles: dict[int, float]
    active_pm_series: tuple[int, ...]
    total_kwh: float
    migration_count: int
    rejected_count: int


def metrics_of(trace: SimTrace, ledger: EnergyLedger) -> MetricsReport:
    """Summarize a finished run: utilization, active servers, kWh, moves."""
    utils = sorted(trace.per_slot_utilization.values())
    mean_u = sum(utils) / len(utils) if utils else 0.0
    percentiles = {}
    for q in (50, 90, 99):
        if utils:
            idx = min(len(utils) - 1, int(round(q / 100 * (len(utils) - 1))))
            percentiles[q] = utils[idx]
        else:
            percentiles[q] = 0.0
    counts = [0] * trace.horizon
    for (slot, _pm), _u in trace.per_slot_utilization.items():
        counts[slot] += 1
    migrations = sum(1 for e in trace.events if e.kind == "migrate")
    rejected = sum(1 for e in trace.events if e.kind == "reject")
    from .energy import datacenter_energy

    return MetricsReport(
        mean_active_utilization=mean_u,
        utilization_percentiles=percentiles,
        active_pm_series=tuple(counts),
        total_kwh=joules_to_kwh(datacenter_energy(ledger)),
        migration_count=migrations,
        rejected_count=rejected,
    )


def _fmt(value: int | None) -> str:
    return "" if value is None else str(value)


def write_trace(trace: SimTrace, path: str) -> None:
    """Serialize the event log: one `slot,kind,vm_id,src_pm,dst_pm` line
    per event, empty fields for inapplicable columns."""
    lines = [TRACE_HEADER]
    for e in trace.events:
        lines.append(f"{e.slot},{e.kind},{_fmt(e.vm_id)},{_fmt(e.src_pm)},{_fmt(e.dst_pm)}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_utilization(trace: SimTrace, path: str) -> None:
    """Serialize the per-slot utilization of active PMs (sorted rows)."""
    lines = [UTILIZATION_HEADER]
    for (slot, pm_id) in sorted(trace.per_slot_utilization):
        u = trace.per_slot_utilization[(slot, pm_id)]
        lines.append(f"{slot},{pm_id},{u!r}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
