"""Solver, synthesizer and verifier for finite-action Blackwell games with
tail objectives."""
from .config import DEFAULT_CONFIG, SolverConfig
from .errors import (
    BlackwellError,
    InfeasibleError,
    InvalidPlayError,
    PreconditionError,
    ResourceError,
    SolverError,
    SpecError,
    UnsupportedObjectiveError,
)
from .model import (
    FiniteHorizon,
    FrequencyCondition,
    GameSpec,
    InfinitelyOften,
    LimsupFrequency,
    MixedProfile,
    PeriodicPlay,
    StrategyAutomaton,
    ThresholdTable,
    evaluate_periodic,
    frequency_vector,
    payoff_vector,
    validate_spec,
)
from .stage import MinmaxCertificate, StageReward, best_response_value, matrix_game_solve, stage_minmax
from .values import (
    blackwell_minmax,
    clopen_truncation,
    closed_block_approximation,
    common_play_search,
    history_independence_report,
    intersection_bound,
    open_superset_schedule,
    stationary_response_value,
)
from .equilibrium import (
    EquilibriumArtifact,
    PayoffPolytope,
    folk_equilibrium,
    grim_trigger,
    jcl_preamble,
    payoff_set,
    synthesize_equilibrium,
)
from .chain import ProductChain, exact_payoffs
from .deviation import DeviationReport, deviation_gain, verify_equilibrium
from .montecarlo import monte_carlo

__version__ = "0.1.0"
