import random
from dataclasses import replace

import pytest

from causal_audit.errors import ModelError, TargetMismatchError, ZeroConditioningError
from causal_audit.fairness import (
    CEP,
    DIAGNOSTIC,
    PARITY,
    AuditSpec,
    audit,
    causal_equal_protection,
    classification_parity,
    coefficient_equal_protection,
    diagnostic_fairness,
    monte_carlo_audit,
)
from causal_audit.interventions import MechanismIntervention
from causal_audit.model import Cpt, build_model
from causal_audit.scenarios import (
    biased_jury_prosecutor,
    hedden_rooms,
    neutralized_witness,
    unadjusted_assessment,
)

from randmodels import random_model, reparameterize

BIN = ("0", "1")


def evidence_common_cause(judgment_rows):
    """Y <- E -> C, where the group characteristic lives in the E -> C coefficient."""
    return build_model(
        [("E", BIN), ("Y", BIN), ("C", BIN)],
        {("E", "Y"), ("E", "C")},
        [
            Cpt("E", (), ((0.4, 0.6),)),
            Cpt("Y", ("E",), ((0.8, 0.2), (0.3, 0.7))),
            Cpt("C", ("E",), judgment_rows),
        ],
    )


class TestParity:
    def test_hedden_groups(self):
        sc = hedden_rooms()
        v = classification_parity(sc.model, sc.spec)
        assert v.groups["room1"] == pytest.approx(0.1, abs=1e-12)
        assert v.groups["room2"] == pytest.approx(0.4, abs=1e-12)
        assert v.extremal_pair == ("room2", "room1")
        assert not v.passed

    def test_false_negative_mirror_reported(self):
        sc = hedden_rooms()
        fnr = classification_parity(sc.model, sc.spec).auxiliary["fnr"]
        # guilty acquittals: room 1 has one .1 group, room 2 one .4 group
        assert fnr["groups"]["room1"] == pytest.approx(0.1, abs=1e-12)
        assert fnr["groups"]["room2"] == pytest.approx(0.4, abs=1e-12)

    def test_jury_fnr_differs_under_k_scaling(self):
        sc = biased_jury_prosecutor(1.2)
        v = classification_parity(sc.model, sc.spec)
        assert v.passed
        assert v.auxiliary["fnr"]["gap"] > 1e-3
        assert not classification_parity(sc.model, sc.spec, require_both_rates=True).passed

    def test_symmetry_under_swapped_groups(self):
        sc = biased_jury_prosecutor(1.5)
        swapped = replace(sc.spec, protected_positive="white", protected_negative="black")
        for fn in (classification_parity, causal_equal_protection):
            assert fn(sc.model, sc.spec).gap == pytest.approx(fn(sc.model, swapped).gap, abs=1e-15)


class TestCep:
    def test_hedden(self):
        sc = hedden_rooms()
        v = causal_equal_protection(sc.model, sc.spec)
        assert v.passed and v.gap <= 1e-12
        assert v.groups == {"room2": pytest.approx(0.5), "room1": pytest.approx(0.5)}

    def test_outcome_mirror(self):
        sc = biased_jury_prosecutor()
        mirror = causal_equal_protection(sc.model, sc.spec).auxiliary["outcome_mirror"]
        assert mirror["outcome_state"] == "guilty"
        assert mirror["gap"] > 0

    def test_jury_gap_closed_form(self):
        for k in (1.1, 1.2, 1.5):
            sc = biased_jury_prosecutor(k)
            v = causal_equal_protection(sc.model, sc.spec)
            # Judgment does not depend on Outcome, so do(Y) is inert: gap = (k - 1) P(C | white)
            assert v.gap == pytest.approx((k - 1) * 0.305, abs=1e-12)

    def test_multivalued_protected_uses_max_pair(self):
        m = build_model(
            [("A", ("a", "b", "c")), ("Y", BIN), ("C", BIN)],
            {("A", "C")},
            [
                Cpt("A", (), ((0.2, 0.3, 0.5),)),
                Cpt("Y", (), ((0.5, 0.5),)),
                Cpt("C", ("A",), ((0.9, 0.1), (0.5, 0.5), (0.7, 0.3))),
            ],
        )
        v = causal_equal_protection(m, AuditSpec("A", "Y", "C"))
        assert v.gap == pytest.approx(0.4, abs=1e-12)
        assert v.extremal_pair == ("b", "a")
        assert set(v.groups) == {"a", "b", "c"}

    def test_relabeling_invariance(self):
        sc = biased_jury_prosecutor()
        m = sc.model
        rename = {v.name: f"x_{i}" for i, v in enumerate(m.variables)}
        states = {v.name: {s: f"{s}_z" for s in v.states} for v in m.variables}
        relabeled = build_model(
            [(rename[v.name], tuple(states[v.name][s] for s in v.states)) for v in m.variables],
            {(rename[a], rename[b]) for a, b in m.edges},
            [Cpt(rename[c.child], tuple(rename[p] for p in c.parents), c.rows) for c in m.cpts],
        )
        spec = AuditSpec(
            rename["Race"], rename["Outcome"], rename["Judgment"],
            protected_positive="black_z", protected_negative="white_z",
            outcome_negative="innocent_z", positive_class="convict_z",
        )
        assert causal_equal_protection(relabeled, spec).gap == pytest.approx(
            causal_equal_protection(m, sc.spec).gap, abs=1e-15
        )


class TestCoefficient:
    def test_equal_mechanisms(self):
        rows = ((0.9, 0.1), (0.4, 0.6))
        m = evidence_common_cause(rows)
        mech = MechanismIntervention("C", Cpt("C", ("E",), rows))
        v = coefficient_equal_protection(m, mech, mech, AuditSpec(None, "Y", "C"))
        assert v.passed and v.gap == 0.0

    def test_different_coefficients_fail(self):
        m = evidence_common_cause(((0.9, 0.1), (0.4, 0.6)))
        x = MechanismIntervention("C", Cpt("C", ("E",), ((0.9, 0.1), (0.4, 0.6))))
        x_prime = MechanismIntervention("C", Cpt("C", ("E",), ((0.9, 0.1), (0.2, 0.8))))
        v = coefficient_equal_protection(m, x, x_prime, AuditSpec(None, "Y", "C"))
        # do(Y) leaves E's marginal alone: 0.6 * (0.8 - 0.6)
        assert v.gap == pytest.approx(0.12, abs=1e-12)
        assert not v.passed

    def test_target_mismatch(self):
        m = evidence_common_cause(((0.9, 0.1), (0.4, 0.6)))
        x = MechanismIntervention("C", m.cpt("C"))
        y = MechanismIntervention("Y", m.cpt("Y"))
        with pytest.raises(TargetMismatchError):
            coefficient_equal_protection(m, x, y, AuditSpec(None, "Y", "C"))

    def test_unadjusted_assessment_breaks_neutralization(self):
        sc = neutralized_witness()
        assert causal_equal_protection(sc.model, sc.spec).passed
        variant = MechanismIntervention("Assessment", unadjusted_assessment(sc.model))
        from causal_audit.interventions import apply_mechanism_intervention

        assert not causal_equal_protection(apply_mechanism_intervention(sc.model, variant), sc.spec).passed


class TestAudit:
    def test_hedden_verdicts(self):
        sc = hedden_rooms()
        r = audit(sc.model, sc.spec)
        assert [v.criterion for v in r.verdicts] == [PARITY, CEP, DIAGNOSTIC]
        assert (r.verdict(PARITY).passed, r.verdict(CEP).passed, r.verdict(DIAGNOSTIC).passed) == (False, True, True)
        assert r.model_hash.startswith("sha256:")

    def test_not_evaluable_stratum(self):
        m = build_model(
            [("A", BIN), ("Y", BIN), ("C", BIN)],
            {("A", "Y"), ("Y", "C")},
            [
                Cpt("A", (), ((0.5, 0.5),)),
                Cpt("Y", ("A",), ((0.5, 0.5), (0.0, 1.0))),
                Cpt("C", ("Y",), ((0.9, 0.1), (0.2, 0.8))),
            ],
        )
        spec = AuditSpec("A", "Y", "C")
        with pytest.raises(ZeroConditioningError):
            classification_parity(m, spec)
        r = audit(m, spec)
        assert [n.criterion for n in r.not_evaluable] == [PARITY]
        assert r.verdict(CEP).passed

    def test_workers_same_report(self):
        sc = biased_jury_prosecutor()
        assert audit(sc.model, sc.spec, workers=3) == audit(sc.model, sc.spec)

    def test_criteria_subset_and_all(self):
        sc = hedden_rooms()
        assert [v.criterion for v in audit(sc.model, sc.spec, ["cep"]).verdicts] == [CEP]
        assert len(audit(sc.model, sc.spec, ["all"]).verdicts) == 3
        with pytest.raises(ValueError):
            audit(sc.model, sc.spec, ["equalized_odds"])

    @pytest.mark.parametrize("tol", [-1.0, float("nan")])
    def test_bad_tolerance(self, tol):
        sc = hedden_rooms()
        with pytest.raises(ModelError):
            audit(sc.model, replace(sc.spec, tolerance=tol))

    def test_roles_must_differ(self):
        sc = hedden_rooms()
        with pytest.raises(ModelError):
            audit(sc.model, replace(sc.spec, classification="Room"))

    def test_default_states(self):
        sc = hedden_rooms()
        spec = AuditSpec("Room", "Outcome", "Judgment").resolve(sc.model)
        assert (spec.protected_positive, spec.protected_negative) == ("room2", "room1")
        assert (spec.outcome_negative, spec.positive_class) == ("innocent", "convict")


class TestMonteCarlo:
    def test_hedden(self):
        sc = hedden_rooms()
        r = monte_carlo_audit(sc.model, sc.spec, 50_000, seed=1)
        assert not r.verdict(PARITY).passed
        assert r.verdict(CEP).passed
        assert r.verdict(PARITY).method == "monte_carlo"

    def test_deterministic(self):
        sc = biased_jury_prosecutor()
        assert monte_carlo_audit(sc.model, sc.spec, 20_000, seed=4) == monte_carlo_audit(
            sc.model, sc.spec, 20_000, seed=4
        )

    def test_empty_stratum(self):
        m = build_model(
            [("A", BIN), ("Y", BIN), ("C", BIN)],
            {("A", "Y")},
            [
                Cpt("A", (), ((0.5, 0.5),)),
                Cpt("Y", ("A",), ((0.5, 0.5), (0.0, 1.0))),
                Cpt("C", (), ((0.5, 0.5),)),
            ],
        )
        r = monte_carlo_audit(m, AuditSpec("A", "Y", "C"), 1000, seed=0)
        assert [n.criterion for n in r.not_evaluable] == [PARITY]


def test_diagnostic_pass_implies_zero_cep_gap():
    rng = random.Random(31)
    hits = 0
    while hits < 40:
        m = random_model(rng, n=rng.randint(3, 6), max_states=2)
        a, y, c = rng.sample(sorted(v.name for v in m.variables), 3)
        spec = AuditSpec(a, y, c)
        if not diagnostic_fairness(m, spec).passed:
            continue
        hits += 1
        for _ in range(3):
            assert causal_equal_protection(reparameterize(rng, m), spec).gap <= 1e-9


def test_root_protected_with_unreachable_classifier_parent():
    rng = random.Random(37)
    hits = 0
    while hits < 40:
        m = random_model(rng, n=rng.randint(3, 6))
        names = sorted(v.name for v in m.variables)
        a, y, c = rng.sample(names, 3)
        parents = m.parents(c)
        if m.parents(a) or len(parents) != 1 or parents[0] in m.descendants(a) or parents[0] == a:
            continue
        hits += 1
        assert causal_equal_protection(m, AuditSpec(a, y, c)).gap <= 1e-9
