"""EcoCloud shape functions and the DRS-like load balancer."""

import random

import numpy as np
import pytest

from savesim.baselines import (
    EcoCloudParams,
    drs_allocate,
    drs_migrate_round,
    ecocloud_allocate,
    ecocloud_assign_prob,
    ecocloud_migrate_prob,
    ecocloud_migrate_round,
)
from savesim.core import NoCapacityError, PmMode, PmSpec, PmState, PolicyConfig, VmRequest

PARAMS = EcoCloudParams(p=2.0, t_upper=0.9, t_l=0.3, t_h=0.8, alpha=2.0, beta=2.0)
CFG = PolicyConfig()


class AlwaysSucceed:
    def random(self):
        return 0.0


class NeverSucceed:
    def random(self):
        return 1.0


def fleet_of(loads, capacity=400, sleeping=()):
    fleet = []
    for i, load in enumerate(loads):
        pm = PmState(spec=PmSpec(id=i, capacity=capacity))
        pm.mode = PmMode.SLEEPING if i in sleeping else PmMode.ACTIVE
        if load:
            pm.host(1000 + i, load)
        fleet.append(pm)
    return fleet


def test_assign_prob_vanishes_at_zero_and_threshold():
    assert ecocloud_assign_prob(0.0, PARAMS) == 0.0
    assert ecocloud_assign_prob(PARAMS.t_upper, PARAMS) == pytest.approx(0.0, abs=1e-15)
    assert ecocloud_assign_prob(0.95, PARAMS) == 0.0


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0, 4.0])
@pytest.mark.parametrize("t", [0.8, 0.9, 1.0])
def test_assign_prob_peaks_at_one_and_stays_in_unit_interval(p, t):
    params = EcoCloudParams(p=p, t_upper=t, t_l=0.3, t_h=0.8, alpha=2, beta=2)
    peak = p * t / (p + 1)
    assert ecocloud_assign_prob(peak, params) == pytest.approx(1.0, abs=1e-12)
    for x in np.linspace(0.0, t, 500):
        assert 0.0 <= ecocloud_assign_prob(float(x), params) <= 1.0


def test_migrate_prob_boundaries():
    assert ecocloud_migrate_prob(0.0, PARAMS) == 1.0
    assert ecocloud_migrate_prob(PARAMS.t_l, PARAMS) == pytest.approx(0.0, abs=1e-15)
    assert ecocloud_migrate_prob(1.0, PARAMS) == pytest.approx(1.0, abs=1e-15)
    for x in np.linspace(PARAMS.t_l + 1e-6, PARAMS.t_h - 1e-6, 100):
        assert ecocloud_migrate_prob(float(x), PARAMS) == 0.0


def test_ecocloud_allocate_accepts_at_peak():
    peak = PARAMS.p * PARAMS.t_upper / (PARAMS.p + 1)
    fleet = fleet_of([int(peak * 400)])
    req = VmRequest(id=1, start=0, end=1, demand=1)
    # prob == 1 at the peak, so even a barely-passing draw accepts
    class Draw:
        def random(self):
            return 1.0 - 1e-12

    assert ecocloud_allocate(req, fleet, PARAMS, Draw()) == 0


def test_ecocloud_allocate_cold_start_fallback():
    fleet = fleet_of([0, 0, 0])  # all active at x=0, no sleeping PM
    req = VmRequest(id=1, start=0, end=1, demand=1)
    assert ecocloud_allocate(req, fleet, PARAMS, AlwaysSucceed()) == 0


def test_ecocloud_allocate_wakes_before_forcing_a_rejecting_pm():
    fleet = fleet_of([40, 0], sleeping=(1,))
    req = VmRequest(id=1, start=0, end=1, demand=1)
    assert ecocloud_allocate(req, fleet, PARAMS, NeverSucceed()) == 1
    assert fleet[1].mode is PmMode.ACTIVE


def test_ecocloud_allocate_no_capacity():
    fleet = fleet_of([400], capacity=400)
    with pytest.raises(NoCapacityError):
        ecocloud_allocate(VmRequest(id=1, start=0, end=1, demand=10), fleet, PARAMS, AlwaysSucceed())


def test_ecocloud_migrate_round_sheds_one_vm_per_violating_pm():
    fleet = fleet_of([0, 200], capacity=400)
    fleet[0].host(1, 10)
    fleet[0].host(2, 30)  # x = 0.1, under-loaded; smallest VM goes first
    out = ecocloud_migrate_round(fleet, PARAMS, AlwaysSucceed())
    assert [(m.vm_id, m.src, m.dst) for m in out.moves] == [(1, 0, 1)]
    assert fleet[0].load == 30


def test_drs_allocate_picks_least_loaded():
    fleet = fleet_of([280, 80])
    req = VmRequest(id=1, start=0, end=1, demand=1)
    assert drs_allocate(req, fleet, CFG) == 1


def test_drs_allocate_wakes_only_when_nothing_fits():
    fleet = fleet_of([390, 0], sleeping=(1,))
    req = VmRequest(id=1, start=0, end=1, demand=10)
    assert drs_allocate(req, fleet, CFG) == 0  # active PM still fits (<= g)
    req2 = VmRequest(id=2, start=0, end=1, demand=10)
    assert drs_allocate(req2, fleet, CFG) == 1  # now only the sleeper fits
    with pytest.raises(NoCapacityError):
        drs_allocate(VmRequest(id=3, start=0, end=1, demand=400), fleet, CFG)


def test_drs_allocate_reduces_load_spread():
    """Min-load placement never widens the utilization spread vs any
    other fitting choice (oracle comparison on random fleets)."""
    rng = random.Random(11)
    for _ in range(200):
        loads = [rng.randint(0, 300) for _ in range(rng.randint(2, 10))]
        demand = rng.randint(1, 50)
        fleet = fleet_of(loads, capacity=400)
        chosen = drs_allocate(VmRequest(id=1, start=0, end=1, demand=demand), fleet, CFG)
        spread_chosen = max(pm.utilization for pm in fleet) - min(pm.utilization for pm in fleet)
        for alt in range(len(loads)):
            if alt == chosen or loads[alt] + demand > 400:
                continue
            alt_utils = [
                (loads[i] + (demand if i == alt else 0)) / 400 for i in range(len(loads))
            ]
            assert spread_chosen <= max(alt_utils) - min(alt_utils) + 1e-12


def test_drs_migrate_round_restores_upper_bound():
    fleet = fleet_of([0, 40], capacity=400)
    for vm_id, d in ((1, 20), (2, 40), (3, 280)):
        fleet[0].host(vm_id, d)  # x = 0.85 > T_h
    out = drs_migrate_round(fleet, CFG)
    assert [(m.vm_id, m.src, m.dst) for m in out.moves] == [(1, 0, 1)]
    assert fleet[0].utilization <= CFG.t_h


def test_drs_migrate_round_quiet_below_threshold():
    fleet = fleet_of([100, 200])
    assert drs_migrate_round(fleet, CFG).moves == []


def test_drs_migrate_round_two_overloaded_pms():
    fleet = fleet_of([0, 0, 40], capacity=400)
    for pm_idx in (0, 1):
        for vm_id, d in ((10 * pm_idx + 1, 20), (10 * pm_idx + 2, 40), (10 * pm_idx + 3, 280)):
            fleet[pm_idx].host(vm_id, d)
    out = drs_migrate_round(fleet, CFG)
    assert [m.src for m in out.moves] == [0, 1]
    for pm in fleet[:2]:
        assert pm.utilization <= CFG.t_h
