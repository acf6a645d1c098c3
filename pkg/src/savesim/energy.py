"""Linear power model and per-PM / datacenter energy accounting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import PmSpec, PmState

JOULES_PER_WH = 3600.0
JOULES_PER_KWH = 3.6e6


class UtilizationRangeError(ValueError):
    """Utilization outside [0, 1]."""


class EmptyTraceError(ValueError):
    """A utilization trace with no slots cannot be integrated."""


class NegativeDurationError(ValueError):
    """A negative time span was supplied."""


def power(spec: PmSpec, u: float) -> float:
    """Instantaneous power draw (watts) of an active PM at utilization u."""
    if not 0.0 <= u <= 1.0:
        raise UtilizationRangeError(f"utilization {u} outside [0, 1]")
    return spec.p_min + (spec.p_max - spec.p_min) * u


def energy_integral(
    pm_trace: Iterable[tuple[int, float]], spec: PmSpec, slot_seconds: float
) -> float:
    """Energy (joules) of an active PM over a piecewise-constant trace.

    The trace is a sequence of (slot, utilization) pairs; utilization is
    constant within each slot, so the integral reduces to a slot sum.
    """
    total = 0.0
    empty = True
    for _slot, u in pm_trace:
        total += power(spec, u) * slot_seconds
        empty = False
    if empty:
        raise EmptyTraceError("utilization trace has no slots")
    return total


def vm_energy_increment(spec: PmSpec, u_ij: float, duration: float) -> float:
    """Extra energy (joules) a PM draws for hosting one VM.

    u_ij is the utilization increase the VM contributes (demand / capacity)
    and duration the seconds it is hosted; only the dynamic power band
    p_max - p_min depends on load.
    """
    if duration < 0.0:
        raise NegativeDurationError(f"duration {duration} is negative")
    if not 0.0 <= u_ij <= 1.0:
        raise UtilizationRangeError(f"utilization increment {u_ij} outside [0, 1]")
    return (spec.p_max - spec.p_min) * u_ij * duration


@dataclass
class EnergyLedger:
    """Per-PM energy totals plus the idle / per-VM decomposition (joules).

    For piecewise-constant per-slot utilization,
    per_pm_energy[i] == on_energy[i] + sum of per_vm_increment[(i, j)].
    """

    per_pm_energy: dict[int, float] = field(default_factory=dict)
    per_vm_increment: dict[tuple[int, int], float] = field(default_factory=dict)
    on_energy: dict[int, float] = field(default_factory=dict)

    def record_active_slot(self, pm: PmState, slot_seconds: float) -> None:
        """Accrue one slot of an active PM into all three breakdowns."""
        spec = pm.spec
        pm_id = spec.id
        self.per_pm_energy[pm_id] = (
            self.per_pm_energy.get(pm_id, 0.0) + power(spec, pm.utilization) * slot_seconds
        )
        self.on_energy[pm_id] = self.on_energy.get(pm_id, 0.0) + spec.p_min * slot_seconds
        band = spec.p_max - spec.p_min
        for vm_id, demand in pm.hosted.items():
            key = (pm_id, vm_id)
            self.per_vm_increment[key] = (
                self.per_vm_increment.get(key, 0.0)
                + band * (demand / spec.capacity) * slot_seconds
            )

    def record_sleeping_slot(self, pm: PmState, slot_seconds: float, p_sleep: float) -> None:
        """Accrue sleep-mode draw (usually zero) into the PM total only."""
        if p_sleep == 0.0:
            return
        pm_id = pm.spec.id
        self.per_pm_energy[pm_id] = self.per_pm_energy.get(pm_id, 0.0) + p_sleep * slot_seconds

    def pm_energy(self, pm_id: int) -> float:
        return self.per_pm_energy.get(pm_id, 0.0)


def datacenter_energy(ledger: EnergyLedger) -> float:
    """Total energy (joules) across all PMs."""
    return sum(ledger.per_pm_energy.values())


def joules_to_wh(joules: float) -> float:
    return joules / JOULES_PER_WH


def joules_to_kwh(joules: float) -> float:
    return joules / JOULES_PER_KWH
