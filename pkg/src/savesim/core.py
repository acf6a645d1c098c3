"""Domain model shared by the simulator: requests, machines, policy config."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum


class ConfigError(ValueError):
    """Base class for configuration problems."""


class ThresholdOrderError(ConfigError):
    """Utilization thresholds are not ordered T_l < T_h (<= T_a)."""


class RangeError(ConfigError):
    """A fraction-valued parameter lies outside (0, 1]."""


class ShapeError(ConfigError):
    """A distribution shape parameter is out of its allowed range."""


class InvariantError(ValueError):
    """A domain-type invariant is violated."""


class NoCapacityError(RuntimeError):
    """No physical machine can host the request."""


class CapacityError(RuntimeError):
    """An operation would push hosted demand past machine capacity."""


class Policy(str, Enum):
    SAVE = "SAVE"
    ECOCLOUD = "EcoCloud"
    DRS_LIKE = "DrsLike"


class PmMode(str, Enum):
    ACTIVE = "active"
    SLEEPING = "sleeping"


@dataclass(frozen=True)
class VmRequest:
    """One VM demand: [start_slot, end_slot) at a constant CPU demand.

    Demands and capacities share one abstract integer CPU unit; a request
    occupies its full demand for its whole lifetime.
    """

    id: int
    start: int
    end: int
    demand: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end <= self.start:
            raise InvariantError(
                f"request {self.id}: need 0 <= start < end, got [{self.start}, {self.end})"
            )
        if self.demand <= 0:
            raise InvariantError(f"request {self.id}: demand must be positive")


@dataclass(frozen=True)
class PmSpec:
    """Static description of a physical machine."""

    id: int
    capacity: int
    p_min: float = 110.0
    p_max: float = 205.0

    def __post_init__(self) -> None:
        if self.capacity <= 0:
            raise InvariantError(f"PM {self.id}: capacity must be positive")
        if not 0 < self.p_min < self.p_max:
            raise InvariantError(f"PM {self.id}: need 0 < p_min < p_max")

    @property
    def idle_fraction(self) -> float:
        """Fraction of full power drawn when idle (p_min / p_max)."""
        return self.p_min / self.p_max


@dataclass
class PmState:
    """Mutable per-run state of one PM: hosted demands and power mode.

    Mutation happens only inside the single-owner simulation kernel;
    policies receive the fleet as a snapshot they may modify in place.
    """

    spec: PmSpec
    mode: PmMode = PmMode.SLEEPING
    hosted: dict[int, int] = field(default_factory=dict)
    load: int = 0

    @property
    def utilization(self) -> float:
        return self.load / self.spec.capacity

    @property
    def free(self) -> int:
        return self.spec.capacity - self.load

    def host(self, vm_id: int, demand: int) -> None:
        if vm_id in self.hosted:
            raise InvariantError(f"VM {vm_id} already hosted on PM {self.spec.id}")
        if self.load + demand > self.spec.capacity:
            raise CapacityError(
                f"PM {self.spec.id}: hosting VM {vm_id} (d={demand}) would exceed "
                f"capacity {self.spec.capacity} (load {self.load})"
            )
        self.hosted[vm_id] = demand
        self.load += demand

    def release(self, vm_id: int) -> int:
        demand = self.hosted.pop(vm_id)
        self.load -= demand
        return demand


@dataclass(frozen=True)
class PolicyConfig:
    """Thresholds, shape parameters and run controls for one policy.

    Defaults: thresholds T_a=0.9, T_l=0.3, T_h=0.8 and Beta shapes
    alpha=beta=2 (the plotted regime of the migration function); the
    scheduler's migration check runs every 15 one-minute slots.
    """

    policy: Policy = Policy.SAVE
    t_a: float = 0.9
    t_l: float = 0.3
    t_h: float = 0.8
    alpha: float = 2.0
    beta: float = 2.0
    p_shape: float = 2.0
    rng_seed: int = 0
    migration_check_period: int = 15
    slot_seconds: float = 60.0
    # Sleeping machines draw p_sleep watts; 0 models a fully parked server.
    p_sleep: float = 0.0
    # Start (and keep) every PM powered on; used for load-balancing baselines.
    all_active: bool = False
    # Experimental variant: per-PM Bernoulli acceptance draws instead of the
    # deterministic argmax over acceptance probabilities.
    bernoulli_allocation: bool = False
    # Restrict each migration round to a seeded uniform sample of this many PMs.
    sample_size: int | None = None
    # Number of top-probability PMs allowed to initiate migration per round.
    migration_batch: int = 1

    def with_seed(self, seed: int) -> PolicyConfig:
        return replace(self, rng_seed=seed)


def validate_config(cfg: PolicyConfig) -> PolicyConfig:
    """Check all PolicyConfig invariants; return cfg unchanged if valid."""
    for name, value in (("T_a", cfg.t_a), ("T_l", cfg.t_l), ("T_h", cfg.t_h)):
        if not 0.0 < value <= 1.0:
            raise RangeError(f"{name}={value} outside (0, 1]")
    if cfg.t_l >= cfg.t_h:
        raise ThresholdOrderError(f"T_l={cfg.t_l} must be < T_h={cfg.t_h}")
    if cfg.policy is Policy.SAVE and cfg.t_h > cfg.t_a:
        raise ThresholdOrderError(f"T_h={cfg.t_h} must be <= T_a={cfg.t_a}")
    if cfg.alpha < 1.0 or cfg.beta < 1.0:
        raise ShapeError(f"alpha={cfg.alpha}, beta={cfg.beta}: both must be >= 1")
    if cfg.p_shape <= 0.0:
        raise ShapeError(f"p_shape={cfg.p_shape} must be positive")
    if cfg.migration_check_period < 1:
        raise RangeError("migration_check_period must be >= 1 slot")
    if cfg.slot_seconds <= 0.0:
        raise RangeError("slot_seconds must be positive")
    if cfg.sample_size is not None and cfg.sample_size < 1:
        raise RangeError("sample_size must be >= 1 when set")
    if cfg.migration_batch < 1:
        raise RangeError("migration_batch must be >= 1")
    return cfg


def utilization(pm: PmState) -> float:
    """CPU utilization of a PM: hosted demand over capacity, in [0, 1]."""
    return pm.utilization
