"""SAVE policy: probabilistic allocation / migration functions and rounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .core import NoCapacityError, PmMode, PmState, PolicyConfig, VmRequest

# Normalizer of the allocation function: f_a(1) = 1.
_AP_NORM = 1.0 - math.exp(-1.0)

# Tolerance for integer-load vs float-threshold capacity comparisons.
_EPS = 1e-9


class BetaDomainError(ValueError):
    """Beta density evaluated outside [0, 1]."""


def allocation_probability(x: float, t_a: float = 0.9) -> float:
    """Acceptance probability of a PM at utilization x.

    Strictly increasing in x, 0 at x=0 and 1 at x=1; a PM past the upper
    allocation threshold t_a accepts nothing.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"utilization {x} outside [0, 1]")
    if x > t_a:
        return 0.0
    return (1.0 - math.exp(-x)) / _AP_NORM


def beta_pdf(x: float, alpha: float, beta: float) -> float:
    """Beta(alpha, beta) probability density at x, for alpha, beta >= 1.

    Boundary points are handled by continuity (density 0 where the
    vanishing factor has a positive exponent).
    """
    if not 0.0 <= x <= 1.0:
        raise BetaDomainError(f"x={x} outside [0, 1]")
    if alpha < 1.0 or beta < 1.0:
        raise ValueError("alpha and beta must be >= 1")
    log_norm = math.lgamma(alpha) + math.lgamma(beta) - math.lgamma(alpha + beta)
    # 0.0 ** 0.0 == 1.0 gives the right continuity limit for unit exponents.
    return x ** (alpha - 1.0) * (1.0 - x) ** (beta - 1.0) / math.exp(log_norm)


@dataclass(frozen=True)
class AcceptanceProbability:
    """Per-PM value of the allocation function plus placement eligibility."""

    pm_id: int
    ap: float
    eligible: bool


@dataclass(frozen=True)
class MigrationProbability:
    """Per-PM value of the migration function and the regime that fired."""

    pm_id: int
    mp: float
    regime: str  # "under", "over" or "none"


def migration_probability(x: float, cfg: PolicyConfig, pm_id: int = -1) -> MigrationProbability:
    """Migration probability of a PM at utilization x.

    Nonzero only on the trigger bands (0, T_l] and [T_h, 1]; the value is
    1 - Beta(alpha, beta) density / 3, clamped into [0, 1] for shapes whose
    density exceeds 3.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"utilization {x} outside [0, 1]")
    if 0.0 < x <= cfg.t_l:
        regime = "under"
    elif x >= cfg.t_h:
        regime = "over"
    else:
        return MigrationProbability(pm_id, 0.0, "none")
    mp = -beta_pdf(x, cfg.alpha, cfg.beta) / 3.0 + 1.0
    return MigrationProbability(pm_id, min(max(mp, 0.0), 1.0), regime)


def _fits(pm: PmState, demand: int, t_a: float) -> bool:
    """Placement keeps the PM at or below the allocation threshold."""
    return pm.load + demand <= t_a * pm.spec.capacity + _EPS


def acceptance_probabilities(
    fleet: Sequence[PmState], demand: int, cfg: PolicyConfig, exclude: frozenset[int] = frozenset()
) -> list[AcceptanceProbability]:
    """Evaluate the allocation function for every active PM in the fleet."""
    out = []
    for pm in fleet:
        if pm.mode is not PmMode.ACTIVE or pm.spec.id in exclude:
            continue
        eligible = _fits(pm, demand, cfg.t_a)
        ap = allocation_probability(pm.utilization, cfg.t_a) if eligible else 0.0
        out.append(AcceptanceProbability(pm.spec.id, ap, eligible))
    return out


def choose_pm(
    demand: int,
    fleet: Sequence[PmState],
    cfg: PolicyConfig,
    rng=None,
    exclude: frozenset[int] = frozenset(),
    allow_wake: bool = True,
) -> PmState | None:
    """Pick the hosting PM for one demand, without placing anything.

    Deterministic argmax over acceptance probabilities among eligible
    active PMs (ties to the lowest id); if no active PM is eligible and
    waking is allowed, the lowest-id sleeping PM that fits is chosen.
    """
    by_id = sorted(fleet, key=lambda p: p.spec.id)
    candidates = [
        pm
        for pm in by_id
        if pm.mode is PmMode.ACTIVE and pm.spec.id not in exclude and _fits(pm, demand, cfg.t_a)
    ]
    if candidates:
        if cfg.bernoulli_allocation and rng is not None:
            accepted = [
                pm
                for pm in candidates
                if rng.random() < allocation_probability(pm.utilization, cfg.t_a)
            ]
            if accepted:
                candidates = accepted
        best = None
        best_ap = -1.0
        for pm in candidates:
            ap = allocation_probability(pm.utilization, cfg.t_a)
            if ap > best_ap:
                best, best_ap = pm, ap
        return best
    if allow_wake:
        for pm in by_id:
            if pm.mode is PmMode.SLEEPING and pm.spec.id not in exclude and _fits(pm, demand, cfg.t_a):
                return pm
    return None


def save_allocate(
    req: VmRequest,
    fleet: Sequence[PmState],
    cfg: PolicyConfig,
    rng=None,
    exclude: frozenset[int] = frozenset(),
    allow_wake: bool = True,
) -> int:
    """Place one request per the SAVE allocation rule; returns the PM id.

    The chosen PM's hosted set and mode are updated in place.
    """
    pm = choose_pm(req.demand, fleet, cfg, rng, exclude, allow_wake)
    if pm is None:
        raise NoCapacityError(f"no PM can host request {req.id} (d={req.demand})")
    pm.mode = PmMode.ACTIVE
    pm.host(req.id, req.demand)
    return pm.spec.id


@dataclass(frozen=True)
class Move:
    vm_id: int
    src: int
    dst: int


@dataclass
class MigrationOutcome:
    moves: list[Move] = field(default_factory=list)
    aborted: int = 0


def _overload_victim(pm: PmState, t_h: float) -> tuple[int, int] | None:
    """Smallest-demand VM whose removal lands utilization just below T_h."""
    g = pm.spec.capacity
    candidates = [
        (demand, vm_id)
        for vm_id, demand in pm.hosted.items()
        if (pm.load - demand) / g < t_h
    ]
    if not candidates:
        return None
    demand, vm_id = min(candidates)
    return vm_id, demand


def save_migrate_round(fleet: Sequence[PmState], cfg: PolicyConfig, rng) -> MigrationOutcome:
    """One SAVE migration round over a fleet snapshot.

    At most migration_batch (default 1) PMs initiate migration: the
    highest-probability PM(s) each pass a single Bernoulli gate, then
    either empty themselves (under-load) or shed exactly one VM
    (over-load). Moves that cannot be re-placed are rolled back.
    """
    outcome = MigrationOutcome()
    scope = sorted(fleet, key=lambda p: p.spec.id)
    if cfg.sample_size is not None and cfg.sample_size < len(scope):
        scope = sorted(rng.sample(scope, cfg.sample_size), key=lambda p: p.spec.id)

    probs = [
        migration_probability(pm.utilization, cfg, pm.spec.id)
        for pm in scope
        if pm.mode is PmMode.ACTIVE and pm.hosted
    ]
    probs = [p for p in probs if p.regime != "none" and p.mp > 0.0]
    probs.sort(key=lambda p: (-p.mp, p.pm_id))
    by_id = {pm.spec.id: pm for pm in fleet}

    for prob in probs[: cfg.migration_batch]:
        src = by_id[prob.pm_id]
        if rng.random() >= prob.mp:
            continue
        if prob.regime == "under":
            _drain_underloaded(src, fleet, cfg, outcome)
        else:
            _shed_overloaded(src, fleet, cfg, outcome)
    return outcome


def _drain_underloaded(
    src: PmState, fleet: Sequence[PmState], cfg: PolicyConfig, outcome: MigrationOutcome
) -> None:
    """Empty an under-loaded PM entirely, or not at all.

    Largest demands are re-placed first to fail fast; if any VM cannot go
    to another active PM the whole drain is rolled back (a half-emptied
    PM saves no energy). Waking a PM to receive drained VMs is pointless.
    """
    victims = sorted(src.hosted.items(), key=lambda kv: (-kv[1], kv[0]))
    exclude = frozenset({src.spec.id})
    placed: list[tuple[PmState, int]] = []
    moves = []
    for vm_id, demand in victims:
        dst = choose_pm(demand, fleet, cfg, exclude=exclude, allow_wake=False)
        if dst is None:
            for pm, placed_vm in placed:
                pm.release(placed_vm)
            outcome.aborted += len(victims)
            return
        dst.host(vm_id, demand)
        placed.append((dst, vm_id))
        moves.append(Move(vm_id, src.spec.id, dst.spec.id))
    for vm_id, _demand in victims:
        src.release(vm_id)
    src.mode = PmMode.SLEEPING
    outcome.moves.extend(moves)


def _shed_overloaded(
    src: PmState, fleet: Sequence[PmState], cfg: PolicyConfig, outcome: MigrationOutcome
) -> None:
    victim = _overload_victim(src, cfg.t_h)
    if victim is None:
        outcome.aborted += 1
        return
    vm_id, demand = victim
    dst = choose_pm(demand, fleet, cfg, exclude=frozenset({src.spec.id}), allow_wake=False)
    if dst is None:
        outcome.aborted += 1
        return
    src.release(vm_id)
    dst.host(vm_id, demand)
    outcome.moves.append(Move(vm_id, src.spec.id, dst.spec.id))
