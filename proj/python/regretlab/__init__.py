from ._regretlab import (
    DeBruijnGraph,
    ExpertPair,
    LpSolution,
    NumericalError,
    PdeSolution,
    ValidationError,
    classic_solution,
    enumerate_cycles,
    final_data,
    gamma,
    game_value,
    indifference_closed_form,
    pde_solution,
    random_pair,
    simulate,
    solve_lp,
)

__version__ = "0.3.0"
