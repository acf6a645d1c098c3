"""Experiment harness: paired policy comparisons and report files."""

from __future__ import annotations

import configparser
import hashlib
import os
import statistics
from dataclasses import dataclass, field, replace

from .core import ConfigError, PmSpec, Policy, PolicyConfig, validate_config
from .energy import joules_to_wh
from .kernel import MetricsReport, metrics_of, run, write_trace, write_utilization
from .workload import SLOTS_PER_HOUR, WorkloadSpec, generate, write_requests

COMPARISON_HEADER = (
    "policy,energy_kwh_mean,energy_kwh_std,migrations_mean,migrations_std,relative_cost_pct"
)


@dataclass(frozen=True)
class ExperimentConfig:
    """A full paired comparison: one fleet, one workload, several policies.

    Within each replication every policy receives the identical request
    list; the first-listed policy is the 100% cost baseline.
    """

    n_pms: int
    pm_capacity: int
    p_min: float
    p_max: float
    workload: WorkloadSpec
    policies: tuple[PolicyConfig, ...]
    reps: int = 20
    base_seed: int = 1

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise ConfigError("reps must be >= 1")
        if not self.policies:
            raise ConfigError("at least one policy is required")
        for p in self.policies:
            validate_config(p)

    def fleet(self) -> list[PmSpec]:
        return [
            PmSpec(id=i, capacity=self.pm_capacity, p_min=self.p_min, p_max=self.p_max)
            for i in range(self.n_pms)
        ]


@dataclass
class PolicyResult:
    policy: str
    energy_kwh: list[float] = field(default_factory=list)
    migrations: list[int] = field(default_factory=list)
    metrics: list[MetricsReport] = field(default_factory=list)

    @property
    def mean_kwh(self) -> float:
        return statistics.fmean(self.energy_kwh)

    @property
    def std_kwh(self) -> float:
        return statistics.stdev(self.energy_kwh) if len(self.energy_kwh) > 1 else 0.0


def _workload_hash(requests) -> str:
    blob = "\n".join(f"{r.id},{r.start},{r.end},{r.demand}" for r in requests)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def run_experiment(cfg: ExperimentConfig, out_dir: str | None = None) -> list[PolicyResult]:
    """Run reps x policies simulations; optionally write all report files."""
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
    fleet = cfg.fleet()
    results = [PolicyResult(policy=p.policy.value) for p in cfg.policies]
    workload_hashes = []

    for rep in range(cfg.reps):
        wl = replace(cfg.workload, seed=cfg.base_seed + rep)
        requests = generate(wl)
        workload_hashes.append(_workload_hash(requests))
        if out_dir is not None:
            write_requests(requests, os.path.join(out_dir, f"workload_rep{rep}.csv"))
        for pcfg, result in zip(cfg.policies, results):
            run_cfg = pcfg.with_seed(cfg.base_seed + rep)
            trace, ledger = run(requests, fleet, run_cfg, horizon=wl.horizon)
            report = metrics_of(trace, ledger)
            result.energy_kwh.append(report.total_kwh)
            result.migrations.append(report.migration_count)
            result.metrics.append(report)
            if out_dir is not None:
                tag = f"{result.policy}_rep{rep}"
                write_trace(trace, os.path.join(out_dir, f"trace_{tag}.csv"))
                write_utilization(trace, os.path.join(out_dir, f"util_{tag}.csv"))
                _write_ledger(ledger, os.path.join(out_dir, f"energy_{tag}.csv"))

    if out_dir is not None:
        _write_comparison(results, os.path.join(out_dir, "comparison.csv"))
        _write_summary(cfg, results, workload_hashes, os.path.join(out_dir, "summary.txt"))
    return results


def _write_ledger(ledger, path: str) -> None:
    lines = ["pm_id,energy_wh,on_energy_wh"]
    for pm_id in sorted(ledger.per_pm_energy):
        total = joules_to_wh(ledger.per_pm_energy[pm_id])
        on = joules_to_wh(ledger.on_energy.get(pm_id, 0.0))
        lines.append(f"{pm_id},{total:.6f},{on:.6f}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def comparison_rows(results: list[PolicyResult]) -> list[str]:
    baseline = results[0].mean_kwh
    rows = []
    for i, r in enumerate(results):
        mig_mean = statistics.fmean(r.migrations)
        mig_std = statistics.stdev(r.migrations) if len(r.migrations) > 1 else 0.0
        if i == 0:
            rel = "100.00"  # the baseline row is exactly 100% by definition
        elif baseline > 0.0:
            rel = f"{r.mean_kwh / baseline * 100.0:.2f}"
        else:
            rel = ""
        rows.append(
            f"{r.policy},{r.mean_kwh:.4f},{r.std_kwh:.4f},{mig_mean:.2f},{mig_std:.2f},{rel}"
        )
    return rows


def _write_comparison(results: list[PolicyResult], path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(COMPARISON_HEADER + "\n")
        fh.write("\n".join(comparison_rows(results)) + "\n")


def _write_summary(cfg, results, workload_hashes, path: str) -> None:
    lines = [
        "policy comparison summary",
        f"fleet: {cfg.n_pms} PMs x capacity {cfg.pm_capacity} "
        f"(p_min={cfg.p_min} W, p_max={cfg.p_max} W)",
        f"workload: {cfg.workload.n_vms} VMs, horizon {cfg.workload.horizon} slots, "
        f"durations {cfg.workload.duration_range} slots, arrival {cfg.workload.arrival}",
        f"replications: {cfg.reps} (paired, seeds {cfg.base_seed}..{cfg.base_seed + cfg.reps - 1})",
        "workload hashes: " + " ".join(workload_hashes),
        "",
        COMPARISON_HEADER,
    ]
    lines.extend(comparison_rows(results))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


_ARRIVALS = ("uniform_over_horizon", "all_at_start")


def load_experiment_config(path: str) -> ExperimentConfig:
    """Parse the INI-style experiment description documented in the README."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    try:
        fleet = parser["fleet"]
        wl = parser["workload"]
        exp = parser["experiment"]
        arrival = wl.get("arrival", "uniform_over_horizon")
        if arrival not in _ARRIVALS:
            raise ConfigError(f"arrival must be one of {_ARRIVALS}, got {arrival!r}")
        workload = WorkloadSpec(
            n_vms=wl.getint("vms"),
            horizon=int(wl.getfloat("horizon_hours", 6.0) * SLOTS_PER_HOUR),
            duration_range=(
                int(wl.getfloat("duration_min_hours", 1.0) * SLOTS_PER_HOUR),
                int(wl.getfloat("duration_max_hours", 6.0) * SLOTS_PER_HOUR),
            ),
            demand=wl.getint("demand", 1),
            arrival=arrival,
        )
        policies = []
        for name in (p.strip() for p in exp.get("policies", "SAVE").split(",")):
            policies.append(_policy_config(parser, name))
        return ExperimentConfig(
            n_pms=fleet.getint("count"),
            pm_capacity=fleet.getint("capacity", 400),
            p_min=fleet.getfloat("p_min", 110.0),
            p_max=fleet.getfloat("p_max", 205.0),
            workload=workload,
            policies=tuple(policies),
            reps=exp.getint("reps", 20),
            base_seed=exp.getint("seed", 1),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad experiment config {path}: {exc}") from None


def _policy_config(parser: configparser.ConfigParser, name: str) -> PolicyConfig:
    try:
        policy = Policy(name)
    except ValueError:
        raise ConfigError(f"unknown policy {name!r}") from None
    # The load-balancing baseline models a fleet that is never powered down.
    cfg = PolicyConfig(policy=policy, all_active=(policy is Policy.DRS_LIKE))
    section = f"policy.{name}"
    if parser.has_section(section):
        sec = parser[section]
        cfg = replace(
            cfg,
            t_a=sec.getfloat("T_a", cfg.t_a),
            t_l=sec.getfloat("T_l", cfg.t_l),
            t_h=sec.getfloat("T_h", cfg.t_h),
            alpha=sec.getfloat("alpha", cfg.alpha),
            beta=sec.getfloat("beta", cfg.beta),
            p_shape=sec.getfloat("p", cfg.p_shape),
            migration_check_period=sec.getint("migration_check_period", cfg.migration_check_period),
            all_active=sec.getboolean("all_active", cfg.all_active),
            p_sleep=sec.getfloat("p_sleep", cfg.p_sleep),
        )
    return validate_config(cfg)
