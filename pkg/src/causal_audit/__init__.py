"""Discrete causal models, graph-surgery interventions and fairness audits."""

from .errors import (
    CausalAuditError,
    CycleError,
    InfeasibleParameterError,
    ModelError,
    ModelSyntaxError,
    PathExplosionError,
    ZeroConditioningError,
)
from .fairness import (
    CEP,
    COEFFICIENT,
    CRITERIA,
    DIAGNOSTIC,
    PARITY,
    AuditReport,
    AuditSpec,
    NotEvaluable,
    Verdict,
    audit,
    causal_equal_protection,
    classification_parity,
    coefficient_equal_protection,
    diagnostic_fairness,
    monte_carlo_audit,
)
from .interventions import (
    Intervention,
    MechanismIntervention,
    apply_do,
    apply_mechanism_intervention,
    interventional_probability,
    sample,
    sample_indices,
)
from .model import (
    CausalModel,
    Cpt,
    Variable,
    build_model,
    conditional_probability,
    joint_probability,
    marginal_probability,
)
from .model_io import ModelDocument, Role, model_hash, parse_model, serialize_model
from .paths import DirectedPath, PathReport, classify_paths, enumerate_directed_paths
from .scenarios import SCENARIOS, Scenario, get_scenario

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
