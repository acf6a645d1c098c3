"""Comparison policies: EcoCloud shape functions and a DRS-like balancer."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import NoCapacityError, PmMode, PmState, PolicyConfig, VmRequest
from .save import MigrationOutcome, Move

_EPS = 1e-9


@dataclass(frozen=True)
class EcoCloudParams:
    """Shape parameters of the EcoCloud assignment/migration functions."""

    p: float
    t_upper: float
    t_l: float
    t_h: float
    alpha: float
    beta: float

    @property
    def m_p(self) -> float:
        """Normalizer making the assignment function peak at exactly 1."""
        return self.p**self.p * self.t_upper ** (self.p + 1) / (self.p + 1) ** (self.p + 1)

    @classmethod
    def from_config(cls, cfg: PolicyConfig) -> EcoCloudParams:
        return cls(
            p=cfg.p_shape,
            t_upper=cfg.t_a,
            t_l=cfg.t_l,
            t_h=cfg.t_h,
            alpha=cfg.alpha,
            beta=cfg.beta,
        )


def ecocloud_assign_prob(x: float, params: EcoCloudParams) -> float:
    """EcoCloud assignment probability: x^p (T - x) / M_p, 0 past T."""
    if x < 0.0:
        raise ValueError(f"utilization {x} is negative")
    if x > params.t_upper:
        return 0.0
    prob = x**params.p * (params.t_upper - x) / params.m_p
    return min(max(prob, 0.0), 1.0)


def ecocloud_migrate_prob(x: float, params: EcoCloudParams) -> float:
    """EcoCloud migration probability: polynomial ramps outside [T_l, T_h]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"utilization {x} outside [0, 1]")
    if x <= params.t_l:
        return (1.0 - x / params.t_l) ** params.alpha
    if x >= params.t_h:
        return (1.0 + (x - 1.0) / (1.0 - params.t_h)) ** params.beta
    return 0.0


def _eco_fits(pm: PmState, demand: int, params: EcoCloudParams) -> bool:
    return pm.load + demand <= params.t_upper * pm.spec.capacity + _EPS


def _eco_choose(
    demand: int,
    fleet: Sequence[PmState],
    params: EcoCloudParams,
    rng,
    exclude: frozenset[int] = frozenset(),
    allow_wake: bool = True,
) -> PmState | None:
    """EcoCloud destination choice for one demand.

    Every eligible active PM draws Bernoulli(assign_prob) in id order; the
    highest-probability acceptor wins. When nobody accepts, a sleeping PM
    is woken (that is how EcoCloud spreads load under low utilization);
    only with no sleeping PM left does the best active PM take the VM so
    the request still lands somewhere.
    """
    by_id = sorted(fleet, key=lambda p: p.spec.id)
    eligible = [
        pm
        for pm in by_id
        if pm.mode is PmMode.ACTIVE and pm.spec.id not in exclude and _eco_fits(pm, demand, params)
    ]
    accepted = []
    for pm in eligible:
        prob = ecocloud_assign_prob(pm.utilization, params)
        if rng.random() < prob:
            accepted.append((prob, pm))
    if accepted:
        best_prob = max(prob for prob, _pm in accepted)
        for prob, pm in accepted:
            if prob == best_prob:
                return pm
    if allow_wake:
        for pm in by_id:
            if pm.mode is PmMode.SLEEPING and pm.spec.id not in exclude and _eco_fits(pm, demand, params):
                return pm
    if eligible:
        best = None
        best_prob = -1.0
        for pm in eligible:
            prob = ecocloud_assign_prob(pm.utilization, params)
            if prob > best_prob:
                best, best_prob = pm, prob
        return best
    return None


def ecocloud_allocate(
    req: VmRequest,
    fleet: Sequence[PmState],
    params: EcoCloudParams,
    rng,
    exclude: frozenset[int] = frozenset(),
    allow_wake: bool = True,
) -> int:
    """Place one request per the EcoCloud assignment rule; returns PM id."""
    pm = _eco_choose(req.demand, fleet, params, rng, exclude, allow_wake)
    if pm is None:
        raise NoCapacityError(f"no PM can host request {req.id} (d={req.demand})")
    pm.mode = PmMode.ACTIVE
    pm.host(req.id, req.demand)
    return pm.spec.id


def ecocloud_migrate_round(
    fleet: Sequence[PmState], params: EcoCloudParams, rng
) -> MigrationOutcome:
    """One EcoCloud migration round: every violating PM acts independently.

    Each active PM outside [T_l, T_h] draws its own Bernoulli gate and, on
    success, sheds a single VM: the smallest hosted one when under-loaded
    (gradually emptying the machine), or the smallest whose removal brings
    utilization back below T_h when over-loaded.
    """
    outcome = MigrationOutcome()
    for src in sorted(fleet, key=lambda p: p.spec.id):
        if src.mode is not PmMode.ACTIVE or not src.hosted:
            continue
        x = src.utilization
        prob = ecocloud_migrate_prob(x, params)
        if prob <= 0.0 or rng.random() >= prob:
            continue
        g = src.spec.capacity
        if x <= params.t_l:
            demand, vm_id = min((d, v) for v, d in src.hosted.items())
        else:
            candidates = [(d, v) for v, d in src.hosted.items() if (src.load - d) / g < params.t_h]
            if not candidates:
                outcome.aborted += 1
                continue
            demand, vm_id = min(candidates)
        dst = _eco_choose(
            demand, fleet, params, rng, exclude=frozenset({src.spec.id}), allow_wake=False
        )
        if dst is None:
            outcome.aborted += 1
            continue
        src.release(vm_id)
        dst.host(vm_id, demand)
        outcome.moves.append(Move(vm_id, src.spec.id, dst.spec.id))
    return outcome


def drs_allocate(req: VmRequest, fleet: Sequence[PmState], cfg: PolicyConfig) -> int:
    """Load-balancing placement: lowest-utilization active PM that fits.

    A sleeping PM is woken only when nothing active fits.
    """
    by_id = sorted(fleet, key=lambda p: p.spec.id)
    best = None
    best_u = 2.0
    for pm in by_id:
        if pm.mode is PmMode.ACTIVE and pm.free >= req.demand and pm.utilization < best_u:
            best, best_u = pm, pm.utilization
    if best is None:
        for pm in by_id:
            if pm.mode is PmMode.SLEEPING and pm.spec.capacity >= req.demand:
                best = pm
                break
    if best is None:
        raise NoCapacityError(f"no PM can host request {req.id} (d={req.demand})")
    best.mode = PmMode.ACTIVE
    best.host(req.id, req.demand)
    return best.spec.id


def drs_migrate_round(fleet: Sequence[PmState], cfg: PolicyConfig) -> MigrationOutcome:
    """Deterministic overload relief: per over-threshold PM, move the
    smallest VM restoring x <= T_h to the least-loaded fitting PM."""
    outcome = MigrationOutcome()
    for src in sorted(fleet, key=lambda p: p.spec.id):
        if src.mode is not PmMode.ACTIVE or not src.hosted:
            continue
        if src.utilization <= cfg.t_h:
            continue
        g = src.spec.capacity
        candidates = [(d, v) for v, d in src.hosted.items() if (src.load - d) / g <= cfg.t_h]
        if not candidates:
            outcome.aborted += 1
            continue
        demand, vm_id = min(candidates)
        dst = None
        dst_u = 2.0
        for pm in sorted(fleet, key=lambda p: p.spec.id):
            if (
                pm.mode is PmMode.ACTIVE
                and pm.spec.id != src.spec.id
                and pm.free >= demand
                and pm.utilization < dst_u
            ):
                dst, dst_u = pm, pm.utilization
        if dst is None:
            outcome.aborted += 1
            continue
        src.release(vm_id)
        dst.host(vm_id, demand)
        outcome.moves.append(Move(vm_id, src.spec.id, dst.spec.id))
    return outcome
