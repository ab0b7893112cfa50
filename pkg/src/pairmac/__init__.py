"""pairmac: slotted-time simulator for pairwise-link MAC protocols.

Two engines over a shared topology/traffic/metrics core:
  - gsdma: request/grant contention cycles with receiver-side priority
    arbitration and reserved payload periods
  - csmaca: carrier-sense multiple access with collision avoidance
    (DIFS + binary-exponential backoff + ACK)

plus a closed-form access-probability model and a CLI for runs, parameter
sweeps, protocol comparisons, and SVG charts.
"""

from .analytic import (
    ContentionEstimate,
    InsufficientData,
    access_probability,
    estimate_params,
    first_access_pmf,
    ks_distance_geometric,
    mean_access_delay_us,
    sample_first_access,
)
from .channel import (
    FixedError,
    LinkTable,
    LogisticErrorModel,
    NoErrors,
    TableErrorModel,
    build_error_model,
    build_topology,
    fspl_db,
)
from .csmaca import run_csmaca
from .experiments import run_and_aggregate, run_comparison, run_scenario, run_sweep
from .gsdma import run_gsdma
from .metrics import Aggregate, CycleRecord, PairStats, RunResult, aggregate
from .scenario import (
    ParseError,
    Scenario,
    SweepSpec,
    apply_overrides,
    dump_scenario,
    load_scenario,
    load_sweep,
    loads_scenario,
    loads_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Aggregate",
    "ContentionEstimate",
    "CycleRecord",
    "FixedError",
    "InsufficientData",
    "LinkTable",
    "LogisticErrorModel",
    "NoErrors",
    "PairStats",
    "ParseError",
    "RunResult",
    "Scenario",
    "SweepSpec",
    "TableErrorModel",
    "access_probability",
    "aggregate",
    "apply_overrides",
    "build_error_model",
    "build_topology",
    "dump_scenario",
    "estimate_params",
    "first_access_pmf",
    "fspl_db",
    "ks_distance_geometric",
    "load_scenario",
    "load_sweep",
    "loads_scenario",
    "loads_sweep",
    "mean_access_delay_us",
    "run_and_aggregate",
    "run_comparison",
    "run_csmaca",
    "run_gsdma",
    "run_scenario",
    "run_sweep",
    "sample_first_access",
    "__version__",
]
