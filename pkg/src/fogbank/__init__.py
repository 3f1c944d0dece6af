"""Energy-aware task placement for cloud-supported vehicular fog clusters."""

from .bnb import (
    FEASIBLE,
    INFEASIBLE,
    OPTIMAL,
    Solution,
    SolverOptions,
    branch_and_bound,
    greedy_incumbent,
    solve_scenario,
)
from .harness import oracle_check
from .milp import (
    AllocationError,
    MilpInstance,
    PowerBreakdown,
    build_milp,
    evaluate_power,
    export_lp,
)
from .model import (
    ConfigError,
    ModelConfig,
    NetworkDeviceSpec,
    Route,
    Scenario,
    ServerSpec,
    Task,
    Topology,
    ValidationError,
    build_topology,
    default_config,
    derive_routes,
    load_config,
    make_scenario,
    make_tasks,
)
from .oracles import enumerate_distributed, enumerate_single
from .reporting import (
    ValidationReport,
    emit_csv,
    emit_solution_json,
    node_breakdown,
    parse_csv,
    validate,
    vf_breakdown,
)
from .simplex import LpResult, NumericalFailure, solve_lp
from .sweep import SweepRow, run_point, run_sweep

__version__ = "0.1.0"
