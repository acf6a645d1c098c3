"""Domain types: config validation, utilization, capacity invariants."""

import pytest

from savesim.core import (
    CapacityError,
    InvariantError,
    PmSpec,
    PmState,
    Policy,
    PolicyConfig,
    RangeError,
    ShapeError,
    ThresholdOrderError,
    utilization,
    validate_config,
)


def test_valid_config_passes_through():
    cfg = PolicyConfig(t_l=0.3, t_h=0.8, t_a=0.9, alpha=2, beta=2)
    assert validate_config(cfg) is cfg


def test_threshold_order_violation():
    with pytest.raises(ThresholdOrderError):
        validate_config(PolicyConfig(t_l=0.8, t_h=0.3))


def test_save_requires_th_below_ta():
    with pytest.raises(ThresholdOrderError):
        validate_config(PolicyConfig(policy=Policy.SAVE, t_h=0.95, t_a=0.9))
    # non-SAVE policies only need T_l < T_h <= 1
    validate_config(PolicyConfig(policy=Policy.ECOCLOUD, t_h=0.95, t_a=0.9))


def test_shape_error_for_small_alpha():
    with pytest.raises(ShapeError):
        validate_config(PolicyConfig(t_l=0.3, t_h=0.8, alpha=0.5))


@pytest.mark.parametrize("field,value", [("t_l", 0.0), ("t_h", 1.5), ("t_a", -0.1)])
def test_fraction_range_errors(field, value):
    with pytest.raises(RangeError):
        validate_config(PolicyConfig(**{field: value}))


def test_utilization_empty_half_full():
    spec = PmSpec(id=0, capacity=400)
    pm = PmState(spec=spec)
    assert utilization(pm) == 0.0
    for i in range(200):
        pm.host(i, 1)
    assert utilization(pm) == 0.5
    for i in range(200, 400):
        pm.host(i, 1)
    assert utilization(pm) == 1.0


def test_utilization_is_additive():
    pm = PmState(spec=PmSpec(id=0, capacity=250))
    before = pm.utilization
    pm.host(7, 40)
    assert pm.utilization == pytest.approx(before + 40 / 250)
    pm.release(7)
    assert pm.utilization == before


def test_capacity_never_exceeded():
    pm = PmState(spec=PmSpec(id=0, capacity=10))
    pm.host(1, 8)
    with pytest.raises(CapacityError):
        pm.host(2, 3)
    assert pm.load == 8  # failed host leaves state untouched


def test_request_invariants():
    from savesim.core import VmRequest

    with pytest.raises(InvariantError):
        VmRequest(id=0, start=5, end=5, demand=1)
    with pytest.raises(InvariantError):
        VmRequest(id=0, start=-1, end=5, demand=1)
    with pytest.raises(InvariantError):
        VmRequest(id=0, start=0, end=5, demand=0)
    with pytest.raises(InvariantError):
        PmSpec(id=0, capacity=400, p_min=205, p_max=110)
