"""Greedy, mixed-strategy GA and helper-objective GA solvers for the 0-1 knapsack problem."""

from .algorithms import (
    GaConfig,
    GaRunResult,
    diversity_scan,
    make_children,
    multi_criteria_select,
    run_moga,
    run_msga,
)
from .core import (
    Instance,
    InvalidArgument,
    ObjectiveVector,
    Solution,
    evaluate_f,
    evaluate_weight,
    helper_h1,
    helper_h2,
    helper_h3,
    is_feasible,
    make_instance,
    objective_vector,
)
from .greedy import greedy_fill, greedy_solve
from .instances import (
    GeneratorSpec,
    analytic_optimum,
    build_initial_population,
    build_special_I,
    build_special_II,
    gen_average,
    gen_restrictive,
)
from .operators import (
    RepairMethod,
    bitwise_mutation,
    make_rng,
    mixed_repair,
    one_point_crossover,
    repair,
    roulette_select,
)
from .oracle import BudgetError, NotApplicable, OracleResult, solve_dp, solve_exhaustive
from .population import Population

__version__ = "0.1.0"
