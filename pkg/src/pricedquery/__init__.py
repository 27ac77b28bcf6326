"""Query strategies for Boolean functions whose input coordinates have prices.

The main entry points are :class:`BoolFn` and its constructors, exact and
estimated influences, the budgeted strategy :class:`SStar` with its budget
search :func:`find_budget`, the bias-stopping strategy :class:`SDiamond`, and
an exact oracle for optimal decision trees on small instances.
"""

from types import ModuleType as _ModuleType

from .boolfn import (
    BoolFn,
    CostVector,
    Restriction,
    and_fn,
    cnf,
    constant,
    dictator,
    dnf,
    dump_spec,
    from_callback,
    from_table,
    from_tree,
    halfspace,
    intersection,
    majority,
    or_fn,
    parity,
    parse_spec,
    tribes,
)
from .errors import (
    CapacityError,
    InputError,
    PricedQueryError,
    SpecError,
    StateError,
    UnsupportedRandomnessError,
)
from .influence import (
    InfluenceProfile,
    argmax_cost_weighted_influence,
    bias_exact,
    influence_estimate,
    influence_exact,
    influence_profile_estimate,
    influence_profile_exact,
    total_influence_exact,
)
from .kernels import BACKEND
from .oracle import (
    OptResult,
    brute_force_opt,
    budget_from_expected_opt,
    budget_from_worst_opt,
    errors_allowed,
    opt_expected,
    opt_expected_eps,
    opt_worst,
    opt_worst_eps,
    strategy_stats_exact,
)
from .stats import RunStats
from .strategy import (
    BudgetSearch,
    SDiamond,
    SStar,
    StrategyConfig,
    Transcript,
    TreeStrategy,
    Truncated,
    estimate_strategy_stats,
    find_budget,
    run_s_diamond,
    run_s_star_b,
    simulate,
    truncate_at_cost,
)

__all__ = sorted(k for k, v in globals().items() if not k.startswith("_") and not isinstance(v, _ModuleType))
