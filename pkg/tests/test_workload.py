"""Workload generation and request-trace file round-trips."""

import gzip

import pytest

from savesim.core import InvariantError
from savesim.workload import (
    HorizonTooShortError,
    ParseError,
    WorkloadSpec,
    generate,
    ingest,
    write_requests,
)


def test_generation_is_deterministic():
    spec = WorkloadSpec(n_vms=100, seed=123)
    assert generate(spec) == generate(spec)


def test_degenerate_duration_all_at_start():
    spec = WorkloadSpec(n_vms=100, duration_range=(360, 360), arrival="all_at_start", seed=1)
    reqs = generate(spec)
    assert all(r.start == 0 and r.end == 360 for r in reqs)


def test_generated_requests_respect_bounds():
    spec = WorkloadSpec(n_vms=150, seed=77)
    reqs = generate(spec)
    assert len(reqs) == 150
    assert len({r.id for r in reqs}) == 150
    for r in reqs:
        assert 0 <= r.start < spec.horizon
        assert r.start < r.end <= spec.horizon
        # clipped at the horizon, otherwise within the duration range
        span = r.end - r.start
        assert span <= spec.duration_range[1]
        assert span >= spec.duration_range[0] or r.end == spec.horizon
    assert reqs == sorted(reqs, key=lambda r: (r.start, r.id))


@pytest.mark.parametrize("seed", range(20))
def test_random_specs_yield_valid_requests(seed):
    import random

    rng = random.Random(seed)
    horizon = rng.randint(10, 720)
    lo = rng.randint(1, horizon)
    spec = WorkloadSpec(
        n_vms=rng.randint(1, 60),
        horizon=horizon,
        duration_range=(lo, rng.randint(lo, horizon)),
        demand=rng.randint(1, 10),
        arrival=rng.choice(["all_at_start", "uniform_over_horizon"]),
        seed=seed,
    )
    for r in generate(spec):
        assert 0 <= r.start < r.end <= horizon and r.demand == spec.demand


def test_horizon_too_short():
    with pytest.raises(HorizonTooShortError):
        generate(WorkloadSpec(n_vms=1, horizon=30, duration_range=(60, 360)))


def test_roundtrip_plain_and_gzip(tmp_path):
    reqs = generate(WorkloadSpec(n_vms=25, seed=5))
    for name in ("reqs.csv", "reqs.csv.gz"):
        path = tmp_path / name
        write_requests(reqs, str(path))
        assert ingest(str(path)) == reqs
    with gzip.open(tmp_path / "reqs.csv.gz", "rt") as fh:
        assert fh.readline().strip() == "vm_id,start_slot,end_slot,demand"


def test_ingest_empty_file_is_empty_list(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    assert ingest(str(path)) == []


def test_ingest_reports_line_numbers(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("vm_id,start_slot,end_slot,demand\n0,0,60,1\n1,60,60,1\n")
    with pytest.raises(InvariantError, match="line 3"):
        ingest(str(path))
    path.write_text("vm_id,start_slot,end_slot,demand\n0,0,sixty,1\n")
    with pytest.raises(ParseError, match="line 2"):
        ingest(str(path))
    path.write_text("not,a,header\n")
    with pytest.raises(ParseError, match="line 1"):
        ingest(str(path))
