"""Energy-aware VM consolidation simulator and policy library."""

from .baselines import (
    EcoCloudParams,
    drs_allocate,
    drs_migrate_round,
    ecocloud_allocate,
    ecocloud_assign_prob,
    ecocloud_migrate_prob,
    ecocloud_migrate_round,
)
from .core import (
    NoCapacityError,
    PmMode,
    PmSpec,
    PmState,
    Policy,
    PolicyConfig,
    VmRequest,
    utilization,
    validate_config,
)
from .energy import (
    EnergyLedger,
    datacenter_energy,
    energy_integral,
    joules_to_kwh,
    joules_to_wh,
    power,
    vm_energy_increment,
)
from .kernel import MetricsReport, SimEvent, SimTrace, metrics_of, run, write_trace, write_utilization
from .report import ExperimentConfig, load_experiment_config, run_experiment
from .save import (
    allocation_probability,
    beta_pdf,
    migration_probability,
    save_allocate,
    save_migrate_round,
)
from .workload import WorkloadSpec, generate, ingest, write_requests

__all__ = [
    "EcoCloudParams",
    "EnergyLedger",
    "ExperimentConfig",
    "MetricsReport",
    "NoCapacityError",
    "PmMode",
    "PmSpec",
    "PmState",
    "Policy",
    "PolicyConfig",
    "SimEvent",
    "SimTrace",
    "VmRequest",
    "WorkloadSpec",
    "allocation_probability",
    "beta_pdf",
    "datacenter_energy",
    "drs_allocate",
    "drs_migrate_round",
    "ecocloud_allocate",
    "ecocloud_assign_prob",
    "ecocloud_migrate_prob",
    "ecocloud_migrate_round",
    "energy_integral",
    "generate",
    "ingest",
    "joules_to_kwh",
    "joules_to_wh",
    "load_experiment_config",
    "metrics_of",
    "migration_probability",
    "power",
    "run",
    "run_experiment",
    "save_allocate",
    "save_migrate_round",
    "utilization",
    "validate_config",
    "vm_energy_increment",
    "write_requests",
    "write_trace",
    "write_utilization",
]

__version__ = "0.1.0"
