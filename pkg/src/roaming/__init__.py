"""Incumbent/entrant cellular pricing game with a regulated roaming charge.

Typical use::

    from roaming import GameParams, solve_ne, find_rstar

    params = GameParams(delta=1.0, r=0.8, b1=10.0, b2=1.0)   # phi = 0.9
    solve_ne(params).prices       # ~ (0.3824, 0.3824)
    find_rstar(params).r_star     # ~ 1.30178
"""

from .equilibrium import (
    BestResponseResult,
    EquilibriumResult,
    InteriorityError,
    best_response,
    closed_form_ne,
    fonc_residual,
    is_interior,
    price_cap,
    solve_ne,
)
from .fairness import (
    BracketError,
    DegenerateFairnessError,
    FairnessResult,
    closed_form_rstar,
    fairness_gap,
    find_rstar,
)
from .model import (
    Congestion,
    ConvergenceError,
    DemandPair,
    GameParams,
    PricePair,
    UtilityPair,
    average_price,
    congestion_factor,
    phi,
    solve_demand,
    utilities,
    utilities_full,
    utilities_simplified,
)
from .sweep import (
    SweepTable,
    best_response_crossing,
    default_r_grid,
    export_table,
    read_csv_table,
    sweep_best_response,
    sweep_utilities_vs_r,
)

__version__ = "0.1.0"
