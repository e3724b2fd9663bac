"""Best-response opinion dynamics over directed influence networks, with
reflected-appraisal evolution of social power across issue sequences."""

from .errors import (
    ConfigError,
    ConstraintError,
    DegeneracyError,
    InfluenceDynError,
    InvalidMatrixError,
    InvalidVectorError,
    IsolatedAgentError,
    IterationLimitError,
    SingularMatrixError,
    StructuralError,
)
from .netcore import (
    InteractionMatrix,
    OpinionVector,
    SimplexVector,
    ValidationReport,
    Violation,
    dominant_left_eigenvector,
    solve_linear,
    strongly_connected,
    strongly_connected_components,
    validate_interaction_matrix,
)
from .dynamics import (
    CoefficientMap,
    CoefficientSchedule,
    CostParams,
    IssueTrajectory,
    Regime,
    best_response,
    consensus_anchored,
    consensus_averaging,
    consensus_operator,
    cost_eval,
    from_degroot,
    from_friedkin_johnsen,
    simulate_issue,
    step,
)
from .power import (
    AppraisalMap,
    PowerTrajectory,
    StepMethod,
    check_equilibrium,
    eigen_step_matrix,
    evolve,
    has_star_topology,
    step_anchored_direct,
    step_anchored_eigen,
    step_averaging_direct,
    step_averaging_formula,
)
from .netgen import SplitMix64, generate_random_network
from .config import ExperimentConfig, RunSettings, parse_config, resolve
from .runner import run_experiment

__version__ = "0.1.0"

__all__ = [
    "AppraisalMap",
    "CoefficientMap",
    "CoefficientSchedule",
    "ConfigError",
    "ConstraintError",
    "CostParams",
    "DegeneracyError",
    "ExperimentConfig",
    "InfluenceDynError",
    "InteractionMatrix",
    "InvalidMatrixError",
    "InvalidVectorError",
    "IsolatedAgentError",
    "IssueTrajectory",
    "IterationLimitError",
    "OpinionVector",
    "PowerTrajectory",
    "Regime",
    "RunSettings",
    "SimplexVector",
    "SingularMatrixError",
    "SplitMix64",
    "StepMethod",
    "StructuralError",
    "ValidationReport",
    "Violation",
    "best_response",
    "check_equilibrium",
    "consensus_anchored",
    "consensus_averaging",
    "consensus_operator",
    "cost_eval",
    "dominant_left_eigenvector",
    "eigen_step_matrix",
    "evolve",
    "from_degroot",
    "from_friedkin_johnsen",
    "generate_random_network",
    "has_star_topology",
    "parse_config",
    "resolve",
    "run_experiment",
    "simulate_issue",
    "solve_linear",
    "step",
    "step_anchored_direct",
    "step_anchored_eigen",
    "step_averaging_direct",
    "step_averaging_formula",
    "strongly_connected",
    "strongly_connected_components",
    "validate_interaction_matrix",
]
