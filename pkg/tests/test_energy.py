"""Power model and energy accounting, including the decomposition identity."""

import random

import pytest

from savesim.core import PmSpec, PmState
from savesim.energy import (
    EmptyTraceError,
    EnergyLedger,
    NegativeDurationError,
    UtilizationRangeError,
    datacenter_energy,
    energy_integral,
    joules_to_wh,
    power,
    vm_energy_increment,
)

SPEC = PmSpec(id=0, capacity=400, p_min=110.0, p_max=205.0)


def test_power_endpoints_and_midpoint():
    assert power(SPEC, 0.0) == 110.0
    assert power(SPEC, 1.0) == 205.0
    assert power(SPEC, 0.5) == pytest.approx(157.5)


def test_power_rejects_bad_utilization():
    with pytest.raises(UtilizationRangeError):
        power(SPEC, 1.2)
    with pytest.raises(UtilizationRangeError):
        power(SPEC, -0.01)


def test_energy_integral_idle_hour():
    trace = [(t, 0.0) for t in range(60)]
    joules = energy_integral(trace, SPEC, 60.0)
    assert joules == pytest.approx(396_000.0)  # 110 Wh
    assert joules_to_wh(joules) == pytest.approx(110.0)


def test_energy_integral_constant_half_load_matches_closed_form():
    trace = [(t, 0.5) for t in range(60)]
    joules = energy_integral(trace, SPEC, 60.0)
    # constant-utilization closed form: P_min*T + (P_max-P_min)*u*T
    assert joules == pytest.approx(110.0 * 3600 + 95.0 * 0.5 * 3600)
    assert joules_to_wh(joules) == pytest.approx(157.5)


def test_energy_integral_two_piece_trace():
    trace = [(t, 1.0) for t in range(30)] + [(t, 0.0) for t in range(30, 60)]
    assert joules_to_wh(energy_integral(trace, SPEC, 60.0)) == pytest.approx(157.5)


def test_energy_integral_empty_trace():
    with pytest.raises(EmptyTraceError):
        energy_integral([], SPEC, 60.0)


def test_vm_energy_increment_examples():
    assert vm_energy_increment(SPEC, 0.0, 3600.0) == 0.0
    # one 1-unit VM on a 400-unit PM for an hour
    assert joules_to_wh(vm_energy_increment(SPEC, 1 / 400, 3600.0)) == pytest.approx(0.2375)
    assert joules_to_wh(vm_energy_increment(SPEC, 0.25, 7200.0)) == pytest.approx(47.5)
    with pytest.raises(NegativeDurationError):
        vm_energy_increment(SPEC, 0.1, -1.0)


def test_datacenter_energy_sums_pms():
    ledger = EnergyLedger(per_pm_energy={0: 157.5 * 3600, 1: 110.0 * 3600, 2: 0.0})
    assert joules_to_wh(datacenter_energy(ledger)) == pytest.approx(267.5)
    assert datacenter_energy(EnergyLedger()) == 0.0


def _random_hosting(rng, n_slots):
    """Random piecewise-constant hosting: VM intervals on one PM."""
    pm = PmState(spec=SPEC)
    intervals = []
    for vm_id in range(rng.randint(1, 8)):
        a = rng.randrange(n_slots)
        b = rng.randint(a + 1, n_slots)
        intervals.append((vm_id, a, b, rng.randint(1, 40)))
    return pm, intervals


@pytest.mark.parametrize("seed", range(10))
def test_decomposition_identity_random_traces(seed):
    """Slot integration == idle energy + per-VM increments, 50 traces/seed."""
    rng = random.Random(seed)
    for _ in range(50):
        n_slots = rng.randint(1, 48)
        pm, intervals = _random_hosting(rng, n_slots)
        ledger = EnergyLedger()
        trace = []
        for t in range(n_slots):
            pm.hosted = {v: d for v, a, b, d in intervals if a <= t < b}
            pm.load = sum(pm.hosted.values())
            ledger.record_active_slot(pm, 60.0)
            trace.append((t, pm.utilization))
        direct = energy_integral(trace, SPEC, 60.0)
        decomposed = ledger.on_energy[0] + sum(ledger.per_vm_increment.values())
        assert abs(direct - decomposed) <= 1e-9 * max(direct, 1.0)
        assert abs(ledger.per_pm_energy[0] - direct) <= 1e-9 * max(direct, 1.0)


def test_energy_monotone_in_utilization_and_bounded():
    rng = random.Random(42)
    for _ in range(100):
        n = rng.randint(1, 24)
        us = [rng.random() for _ in range(n)]
        base = energy_integral(list(enumerate(us)), SPEC, 60.0)
        # raising any one slot's utilization never decreases energy
        i = rng.randrange(n)
        bumped = list(us)
        bumped[i] = min(1.0, bumped[i] + rng.random() * (1 - bumped[i]))
        assert energy_integral(list(enumerate(bumped)), SPEC, 60.0) >= base
        duration = n * 60.0
        assert SPEC.p_min * duration - 1e-9 <= base <= SPEC.p_max * duration + 1e-9
