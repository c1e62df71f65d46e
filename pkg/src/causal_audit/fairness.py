"""Fairness criteria evaluated on a fully specified causal model.

Roles: ``A`` is the protected variable, ``Y`` the outcome (ground truth) and
``C`` the classification. Four criteria are available:

* classification parity: observational error rates P(C=c1 | A=a, Y=y0), with
  the false-negative mirror P(C!=c1 | A=a, Y=y1) reported alongside;
* causal equal protection: P(C=c1 | do(A=a), do(Y=y0)) must not depend on a;
* coefficient equal protection: the same comparison when the group
  characteristic is a CPT (mechanism) rather than a node;
* diagnostic fairness: every directed A -> C path must run through Y.

For protected variables with more than two states the gap is the largest
pairwise difference and the verdict names the extremal pair.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ModelError, TargetMismatchError, ZeroConditioningError
from .interventions import (
    MechanismIntervention,
    apply_do,
    apply_mechanism_intervention,
    interventional_probability,
    sample_indices,
)
from .model import CausalModel, conditional_probability
from .paths import PATH_CAP, PathReport, classify_paths

DEFAULT_TOLERANCE = 1e-9
REPORT_FORMAT_VERSION = "1"

PARITY = "parity"
CEP = "cep"
DIAGNOSTIC = "diagnostic"
COEFFICIENT = "coefficient_cep"
CRITERIA = (PARITY, CEP, DIAGNOSTIC)


@dataclass(frozen=True)
class AuditSpec:
    """Role bindings for an audit.

    ``None`` state fields are filled by :meth:`resolve`: for a variable with
    states ``(s0, s1, ...)`` the negative default is ``s0`` and the positive
    default is ``s1``.
    """

    protected: str | None
    outcome: str
    classification: str
    protected_positive: str | None = None
    protected_negative: str | None = None
    outcome_negative: str | None = None
    outcome_positive: str | None = None
    positive_class: str | None = None
    tolerance: float = DEFAULT_TOLERANCE

    def resolve(self, model: CausalModel) -> "AuditSpec":
        if not (self.tolerance >= 0 and math.isfinite(self.tolerance)):
            raise ModelError(f"tolerance must be a finite non-negative number, got {self.tolerance!r}")
        roles = [r for r in (self.protected, self.outcome, self.classification) if r is not None]
        if len(set(roles)) != len(roles):
            raise ModelError("protected, outcome and classification must be distinct variables")

        def pick(var, given, default_index, avoid=None):
            states = model.variable(var).states
            if given is not None:
                model.variable(var).index(given)
                return given
            if avoid is not None and states[default_index] == avoid:
                return next(s for s in states if s != avoid)
            return states[default_index]

        y0 = pick(self.outcome, self.outcome_negative, 0, avoid=self.outcome_positive)
        y1 = pick(self.outcome, self.outcome_positive, 1, avoid=y0)
        if y0 == y1:
            raise ModelError("outcome positive and negative states must differ")
        c1 = pick(self.classification, self.positive_class, 1)
        a1 = a0 = None
        if self.protected is not None:
            a0 = pick(self.protected, self.protected_negative, 0, avoid=self.protected_positive)
            a1 = pick(self.protected, self.protected_positive, 1, avoid=a0)
            if a0 == a1:
                raise ModelError("protected positive and negative states must differ")
        return replace(
            self,
            protected_positive=a1,
            protected_negative=a0,
            outcome_negative=y0,
            outcome_positive=y1,
            positive_class=c1,
        )

    def groups(self, model: CausalModel) -> tuple[str, ...]:
        """Protected states to compare: a1, a0, then any remaining states."""
        rest = [
            s
            for s in model.variable(self.protected).states
            if s not in (self.protected_positive, self.protected_negative)
        ]
        return (self.protected_positive, self.protected_negative, *rest)

    def to_dict(self) -> dict:
        return {
            "protected": self.protected,
            "protected_positive": self.protected_positive,
            "protected_negative": self.protected_negative,
            "outcome": self.outcome,
            "outcome_negative": self.outcome_negative,
            "outcome_positive": self.outcome_positive,
            "classification": self.classification,
            "positive_class": self.positive_class,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class Verdict:
    criterion: str
    passed: bool
    tolerance: float | None
    gap: float | None = None
    groups: Mapping[str, float] | None = None
    extremal_pair: tuple[str, str] | None = None
    paths: PathReport | None = None
    auxiliary: Mapping[str, dict] = field(default_factory=dict)
    queries: tuple[str, ...] = ()
    method: str = "exact"

    def to_dict(self) -> dict:
        out = {"criterion": self.criterion, "pass": self.passed}
        if self.gap is not None:
            out["gap"] = self.gap
        if self.groups is not None:
            out["groups"] = dict(self.groups)
        if self.extremal_pair is not None:
            out["extremal_pair"] = list(self.extremal_pair)
        if self.paths is not None:
            out["paths"] = self.paths.to_dict()
        out["tolerance"] = self.tolerance
        out["method"] = self.method
        if self.auxiliary:
            out["auxiliary"] = {k: dict(v) for k, v in self.auxiliary.items()}
        if self.queries:
            out["queries"] = list(self.queries)
        return out


@dataclass(frozen=True)
class NotEvaluable:
    criterion: str
    reason: str

    def to_dict(self) -> dict:
        return {"criterion": self.criterion, "reason": self.reason}


@dataclass(frozen=True)
class AuditReport:
    model_hash: str
    variable_count: int
    spec: AuditSpec
    verdicts: tuple[Verdict, ...]
    not_evaluable: tuple[NotEvaluable, ...] = ()

    def verdict(self, criterion: str) -> Verdict | None:
        for v in self.verdicts:
            if v.criterion == criterion:
                return v
        return None

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_dict(self) -> dict:
        return {
            "format_version": REPORT_FORMAT_VERSION,
            "model_hash": self.model_hash,
            "variable_count": self.variable_count,
            "spec": self.spec.to_dict(),
            "verdicts": [v.to_dict() for v in self.verdicts],
            "not_evaluable": [n.to_dict() for n in self.not_evaluable],
        }


def _spread(values: Mapping[str, float]) -> tuple[float, tuple[str, str]]:
    hi = max(values, key=lambda k: values[k])
    lo = min((k for k in values if k != hi), key=lambda k: values[k])
    return abs(values[hi] - values[lo]), (hi, lo)


def _conditional_rate(model, spec, a, y, *, negate=False) -> float:
    given = {spec.protected: a, spec.outcome: y}
    try:
        p = conditional_probability(model, {spec.classification: spec.positive_class}, given)
    except ZeroConditioningError:
        raise ZeroConditioningError(
            given, f"subgroup {spec.protected}={a} & {spec.outcome}={y} has probability 0"
        ) from None
    return 1.0 - p if negate else p


def classification_parity(
    model: CausalModel, spec: AuditSpec, *, require_both_rates: bool = False
) -> Verdict:
    """Compare false-positive rates across protected groups.

    The false-negative mirror is always computed and reported under
    ``auxiliary["fnr"]``. By default the verdict keys on the false-positive
    comparison only; ``require_both_rates=True`` makes the gap the larger of
    the two differences.
    """
    spec = spec.resolve(model)
    groups = spec.groups(model)
    c, y0, y1 = spec.positive_class, spec.outcome_negative, spec.outcome_positive
    A, Y, C = spec.protected, spec.outcome, spec.classification

    fpr = {a: _conditional_rate(model, spec, a, y0) for a in groups}
    gap, pair = _spread(fpr)
    queries = [f"P({C}={c} | {A}={a} & {Y}={y0})" for a in groups]

    auxiliary = {}
    try:
        fnr = {a: _conditional_rate(model, spec, a, y1, negate=True) for a in groups}
    except ZeroConditioningError as exc:
        if require_both_rates:
            raise
        auxiliary["fnr"] = {"outcome_state": y1, "not_evaluable": str(exc)}
    else:
        fnr_gap, fnr_pair = _spread(fnr)
        auxiliary["fnr"] = {
            "outcome_state": y1,
            "groups": fnr,
            "gap": fnr_gap,
            "extremal_pair": list(fnr_pair),
        }
        queries += [f"P({C}!={c} | {A}={a} & {Y}={y1})" for a in groups]
        if require_both_rates and fnr_gap > gap:
            gap, pair = fnr_gap, fnr_pair

    return Verdict(
        criterion=PARITY,
        passed=gap <= spec.tolerance,
        tolerance=spec.tolerance,
        gap=gap,
        groups=fpr,
        extremal_pair=pair,
        auxiliary=auxiliary,
        queries=tuple(queries),
    )


def _cep_rates(model, spec, groups, y) -> dict[str, float]:
    event = {spec.classification: spec.positive_class}
    return {
        a: interventional_probability(model, event, {spec.protected: a, spec.outcome: y})
        for a in groups
    }


def causal_equal_protection(model: CausalModel, spec: AuditSpec) -> Verdict:
    """P(C=c1 | do(A=a), do(Y=y0)) compared across a; the do(Y=y1) mirror is auxiliary."""
    spec = spec.resolve(model)
    groups = spec.groups(model)
    A, Y, C, c = spec.protected, spec.outcome, spec.classification, spec.positive_class
    y0, y1 = spec.outcome_negative, spec.outcome_positive

    rates = _cep_rates(model, spec, groups, y0)
    gap, pair = _spread(rates)
    mirror = _cep_rates(model, spec, groups, y1)
    mirror_gap, mirror_pair = _spread(mirror)
    return Verdict(
        criterion=CEP,
        passed=gap <= spec.tolerance,
        tolerance=spec.tolerance,
        gap=gap,
        groups=rates,
        extremal_pair=pair,
        auxiliary={
            "outcome_mirror": {
                "outcome_state": y1,
                "groups": mirror,
                "gap": mirror_gap,
                "extremal_pair": list(mirror_pair),
            }
        },
        queries=tuple(
            f"P({C}={c} | do({A}={a}) & do({Y}={y}))" for y in (y0, y1) for a in groups
        ),
    )


def coefficient_equal_protection(
    model: CausalModel,
    mech_x: MechanismIntervention,
    mech_x_prime: MechanismIntervention,
    spec: AuditSpec,
) -> Verdict:
    """Equal protection when the group characteristic is a mechanism, not a node."""
    if mech_x.target != mech_x_prime.target:
        raise TargetMismatchError(
            f"mechanism interventions target {mech_x.target!r} and {mech_x_prime.target!r}"
        )
    spec = replace(spec, protected=None).resolve(model)
    event = {spec.classification: spec.positive_class}
    do_y = {spec.outcome: spec.outcome_negative}
    rates = {}
    for label, mech in (("x", mech_x), ("x_prime", mech_x_prime)):
        variant = apply_mechanism_intervention(model, mech)
        rates[label] = interventional_probability(variant, event, do_y)
    gap, pair = _spread(rates)
    return Verdict(
        criterion=COEFFICIENT,
        passed=gap <= spec.tolerance,
        tolerance=spec.tolerance,
        gap=gap,
        groups=rates,
        extremal_pair=pair,
        auxiliary={"mechanism": {"target": mech_x.target}},
        queries=(
            f"P_mech=x({spec.classification}={spec.positive_class} | do({spec.outcome}={spec.outcome_negative}))",
            f"P_mech=x'({spec.classification}={spec.positive_class} | do({spec.outcome}={spec.outcome_negative}))",
        ),
    )


def diagnostic_fairness(model: CausalModel, spec: AuditSpec, *, cap: int = PATH_CAP) -> Verdict:
    """Structural check: passes iff no directed A -> C path avoids Y."""
    spec = spec.resolve(model)
    report = classify_paths(model, spec.protected, spec.classification, spec.outcome, cap=cap)
    return Verdict(
        criterion=DIAGNOSTIC,
        passed=not report.unmediated,
        tolerance=None,
        paths=report,
    )


_EXACT = {
    PARITY: classification_parity,
    CEP: causal_equal_protection,
    DIAGNOSTIC: diagnostic_fairness,
}


def _collect(results, criteria, model, spec) -> AuditReport:
    verdicts, skipped = [], []
    for name in criteria:
        outcome = results[name]
        if isinstance(outcome, Verdict):
            verdicts.append(outcome)
        else:
            skipped.append(NotEvaluable(name, outcome))
    from .model_io import model_hash

    return AuditReport(
        model_hash=model_hash(model),
        variable_count=len(model.variables),
        spec=spec,
        verdicts=tuple(verdicts),
        not_evaluable=tuple(skipped),
    )


def _normalize_criteria(criteria: Iterable[str]) -> tuple[str, ...]:
    out = []
    for name in criteria:
        if name == "all":
            out.extend(CRITERIA)
        elif name in CRITERIA:
            out.append(name)
        else:
            raise ValueError(f"unknown criterion {name!r}; choose from {', '.join(CRITERIA)}, all")
    return tuple(dict.fromkeys(out))


def audit(
    model: CausalModel,
    spec: AuditSpec,
    criteria: Sequence[str] = CRITERIA,
    *,
    workers: int = 1,
) -> AuditReport:
    """Run the selected criteria and bundle their verdicts.

    A criterion whose conditioning stratum has probability zero is listed in
    ``not_evaluable`` instead of failing the whole audit.
    """
    spec = spec.resolve(model)
    criteria = _normalize_criteria(criteria)

    def run(name):
        try:
            return _EXACT[name](model, spec)
        except ZeroConditioningError as exc:
            return str(exc)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(zip(criteria, pool.map(run, criteria)))
    else:
        results = {name: run(name) for name in criteria}
    return _collect(results, criteria, model, spec)


# -- Monte Carlo -------------------------------------------------------------


def _three_sigma(p: Mapping[str, float], n: Mapping[str, int], pair) -> float:
    hi, lo = pair
    var = p[hi] * (1 - p[hi]) / n[hi] + p[lo] * (1 - p[lo]) / n[lo]
    return 3.0 * math.sqrt(var)


def _mc_parity(model, spec, groups, n, seed) -> Verdict | str:
    draws = sample_indices(model, (seed, 0), n)
    col = {v.name: i for i, v in enumerate(model.variables)}
    a_var, y_var, c_var = (model.variable(x) for x in (spec.protected, spec.outcome, spec.classification))
    a_col, y_col, c_col = draws[:, col[a_var.name]], draws[:, col[y_var.name]], draws[:, col[c_var.name]]
    y0 = y_var.index(spec.outcome_negative)
    c1 = c_var.index(spec.positive_class)
    rates, counts = {}, {}
    for a in groups:
        mask = (a_col == a_var.index(a)) & (y_col == y0)
        counts[a] = int(mask.sum())
        if counts[a] == 0:
            return (
                f"no samples in subgroup {spec.protected}={a} & {spec.outcome}="
                f"{spec.outcome_negative} (n={n})"
            )
        rates[a] = float((c_col[mask] == c1).mean())
    gap, pair = _spread(rates)
    bound = _three_sigma(rates, counts, pair)
    return Verdict(
        criterion=PARITY,
        passed=gap <= bound,
        tolerance=bound,
        gap=gap,
        groups=rates,
        extremal_pair=pair,
        auxiliary={"monte_carlo": {"samples": n, "seed": seed, "stratum_counts": counts}},
        method="monte_carlo",
    )


def _mc_cep(model, spec, groups, n, seed) -> Verdict:
    rates, counts = {}, {}
    for k, a in enumerate(groups, start=1):
        surgered = apply_do(model, {spec.protected: a, spec.outcome: spec.outcome_negative})
        draws = sample_indices(surgered, (seed, k), n)
        c_idx = [v.name for v in surgered.variables].index(spec.classification)
        c1 = surgered.variable(spec.classification).index(spec.positive_class)
        rates[a] = float(np.mean(draws[:, c_idx] == c1))
        counts[a] = n
    gap, pair = _spread(rates)
    bound = _three_sigma(rates, counts, pair)
    return Verdict(
        criterion=CEP,
        passed=gap <= bound,
        tolerance=bound,
        gap=gap,
        groups=rates,
        extremal_pair=pair,
        auxiliary={"monte_carlo": {"samples": n, "seed": seed}},
        method="monte_carlo",
    )


def monte_carlo_audit(
    model: CausalModel,
    spec: AuditSpec,
    n: int,
    seed: int,
    criteria: Sequence[str] = CRITERIA,
) -> AuditReport:
    """Audit from ``n`` seeded samples per query.

    Quantitative criteria pass when the observed gap lies within three
    binomial standard errors of zero; the structural check is exact.
    """
    spec = spec.resolve(model)
    criteria = _normalize_criteria(criteria)
    groups = spec.groups(model)
    results = {}
    for name in criteria:
        if name == PARITY:
            results[name] = _mc_parity(model, spec, groups, n, seed)
        elif name == CEP:
            results[name] = _mc_cep(model, spec, groups, n, seed)
        else:
            results[name] = diagnostic_fairness(model, spec)
    return _collect(results, criteria, model, spec)
