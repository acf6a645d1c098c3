"""Synthetic workload generation and request-trace file I/O."""

from __future__ import annotations

import gzip
import random
from dataclasses import dataclass
from typing import Sequence

from .core import InvariantError, VmRequest

SLOTS_PER_HOUR = 60  # default slot length is 60 s

TRACE_HEADER = "vm_id,start_slot,end_slot,demand"


class HorizonTooShortError(ValueError):
    """Minimum duration exceeds the horizon."""


class ParseError(ValueError):
    """A request-trace line could not be parsed."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


@dataclass(frozen=True)
class WorkloadSpec:
    """Parameters of a synthetic workload, all in slots and CPU units."""

    n_vms: int
    horizon: int = 6 * SLOTS_PER_HOUR
    duration_range: tuple[int, int] = (1 * SLOTS_PER_HOUR, 6 * SLOTS_PER_HOUR)
    demand: int = 1
    arrival: str = "uniform_over_horizon"  # or "all_at_start"
    seed: int = 0


def generate(spec: WorkloadSpec) -> list[VmRequest]:
    """Generate n_vms requests, deterministic in the spec's seed."""
    lo, hi = spec.duration_range
    if lo < 1 or hi < lo:
        raise InvariantError(f"bad duration range [{lo}, {hi}]")
    if lo > spec.horizon:
        raise HorizonTooShortError(
            f"minimum duration {lo} exceeds horizon {spec.horizon}"
        )
    if spec.arrival not in ("uniform_over_horizon", "all_at_start"):
        raise InvariantError(f"unknown arrival pattern {spec.arrival!r}")
    rng = random.Random(spec.seed)
    requests = []
    for i in range(spec.n_vms):
        duration = rng.randint(lo, hi)
        start = 0 if spec.arrival == "all_at_start" else rng.randint(0, spec.horizon - 1)
        end = min(start + duration, spec.horizon)
        requests.append(VmRequest(id=i, start=start, end=end, demand=spec.demand))
    requests.sort(key=lambda r: (r.start, r.id))
    return requests


def _open_text(path: str, mode: str):
    if str(path).endswith(".gz"):
        return gzip.open(path, mode + "t", newline="\n" if "w" in mode else None)
    return open(path, mode, newline="\n" if "w" in mode else None)


def ingest(path: str) -> list[VmRequest]:
    """Parse a request-trace file (gzip allowed by .gz extension)."""
    requests = []
    with _open_text(path, "r") as fh:
        lines = fh.read().splitlines()
    if not lines:
        return []
    if lines[0].strip() != TRACE_HEADER:
        raise ParseError(1, f"expected header {TRACE_HEADER!r}")
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ParseError(line_no, f"expected 4 comma-separated fields, got {len(parts)}")
        try:
            vm_id, start, end, demand = (int(p) for p in parts)
        except ValueError:
            raise ParseError(line_no, f"non-integer field in {line!r}") from None
        try:
            requests.append(VmRequest(id=vm_id, start=start, end=end, demand=demand))
        except InvariantError as exc:
            raise InvariantError(f"line {line_no}: {exc}") from None
    requests.sort(key=lambda r: (r.start, r.id))
    return requests


def write_requests(requests: Sequence[VmRequest], path: str) -> None:
    """Write requests in the trace file format ingest() reads back."""
    with _open_text(path, "w") as fh:
        fh.write(TRACE_HEADER + "\n")
        for r in requests:
            fh.write(f"{r.id},{r.start},{r.end},{r.demand}\n")
