"""Matroid oracles and a swap/cascade solver for filling grids of bases
with representatives that keep every column independent and make many
rows into full bases."""

from .brute import brute_kahn_full, brute_max_rows
from .cascade import (
    GrowthParams,
    check_recurrence,
    compute_growth_constant,
    growth_inequality_holds,
    run_cascade,
)
from .errors import (
    BasisfillError,
    InfeasibleError,
    InputError,
    OracleViolationError,
    RejectedMove,
    SchemaError,
    SearchBudgetExceeded,
)
from .instance import (
    Instance,
    gen_graphic,
    gen_linear_random,
    gen_rota,
    gen_uniform,
    load,
    save,
)
from .kernel import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .matroid import (
    ElementSet,
    GraphicOracle,
    LinearOracle,
    MatroidOracle,
    UniformOracle,
    element_set,
)
from .solver import (
    SolverConfig,
    Solution,
    claims_sweep,
    load_solution,
    save_solution,
    solve,
)
from .table import (
    Move,
    PlaceDirect,
    RemovalStep,
    SimpleSwap,
    Table,
    Transfer,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "BasisfillError",
    "ElementSet",
    "GraphicOracle",
    "GrowthParams",
    "InfeasibleError",
    "InputError",
    "Instance",
    "KERNEL_IMPLEMENTATION",
    "LinearOracle",
    "MatroidOracle",
    "Move",
    "OracleViolationError",
    "PlaceDirect",
    "RejectedMove",
    "RemovalStep",
    "SchemaError",
    "SearchBudgetExceeded",
    "SimpleSwap",
    "Solution",
    "SolverConfig",
    "Table",
    "Transfer",
    "UniformOracle",
    "brute_kahn_full",
    "brute_max_rows",
    "check_recurrence",
    "claims_sweep",
    "compute_growth_constant",
    "element_set",
    "gen_graphic",
    "gen_linear_random",
    "gen_rota",
    "gen_uniform",
    "growth_inequality_holds",
    "load",
    "load_solution",
    "run_cascade",
    "save",
    "save_solution",
    "solve",
    "verify",
]
