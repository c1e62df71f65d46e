"""Stylized fairness scenarios as fully parameterized models.

Each constructor returns a :class:`Scenario`: the model, the audit roles, and
the verdicts the scenario is meant to produce. Scenarios that must satisfy an
exact equality (equal false-positive rates, cancelling influences) solve for
the relevant CPT entries in closed form and then check the equality with the
inference engine before returning.

Group variables that are merely correlated with the classification (rooms,
sections, religion) are attached through an explicit common cause, so they
have no directed path to the classification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import InfeasibleParameterError
from .fairness import CEP, DIAGNOSTIC, PARITY, AuditSpec
from .interventions import interventional_probability
from .model import CausalModel, Cpt, build_model, conditional_probability, marginal_probability

CONSTRAINT_ATOL = 1e-12


@dataclass(frozen=True)
class Expectation:
    passed: bool
    gap: float | None = None
    groups: Mapping[str, float] | None = None


@dataclass(frozen=True)
class Scenario:
    name: str
    model: CausalModel
    spec: AuditSpec
    expected: Mapping[str, Expectation]
    provenance: str
    description: str = ""
    params: Mapping[str, object] = field(default_factory=dict)


def _bern(p: float) -> tuple[float, float]:
    """(P(first state), P(second state)) for a binary variable with P(second) = p.

    The complement is rounded to 15 decimals so 1 - 0.9 is stored as 0.1.
    """
    return (round(1.0 - p, 15), p)


def _onehot(k: int, n: int) -> tuple[float, ...]:
    return tuple(1.0 if i == k else 0.0 for i in range(n))


def _model(variables, cpts) -> CausalModel:
    edges = {(p, c.child) for c in cpts for p in c.parents}
    return build_model(variables, edges, cpts)


def _check(label: str, lhs: float, rhs: float):
    if abs(lhs - rhs) > CONSTRAINT_ATOL:
        raise InfeasibleParameterError(f"{label}: {lhs!r} != {rhs!r}")


TRIAL_OUTCOME = ("Outcome", ("innocent", "guilty"))
TRIAL_JUDGMENT = ("Judgment", ("acquit", "convict"))
RACE = ("Race", ("white", "black"))


def _trial_spec(protected: str, a1: str, a0: str) -> AuditSpec:
    return AuditSpec(
        protected=protected,
        outcome="Outcome",
        classification="Judgment",
        protected_positive=a1,
        protected_negative=a0,
        outcome_negative="innocent",
        outcome_positive="guilty",
        positive_class="convict",
    )


# -- correlated, causally inert groups ----------------------------------------

HEDDEN_SCORES = {"p90": 0.9, "p10": 0.1, "p60": 0.6, "p40": 0.4}
HEDDEN_ROOMS = {"p90": "room1", "p10": "room1", "p60": "room2", "p40": "room2"}
DECISION_THRESHOLD = 0.5


def hedden_rooms() -> Scenario:
    """Two rooms of 20 people; scores .9/.1 in room 1 and .6/.4 in room 2.

    Score is the common cause: it fixes the room, the chance of guilt and the
    thresholded conviction. Room itself has no children.
    """
    scores = tuple(HEDDEN_SCORES)
    rooms = ("room1", "room2")
    cpts = [
        Cpt("Score", (), ((0.25,) * 4,)),
        Cpt("Room", ("Score",), tuple(_onehot(rooms.index(HEDDEN_ROOMS[s]), 2) for s in scores)),
        Cpt("Outcome", ("Score",), tuple(_bern(HEDDEN_SCORES[s]) for s in scores)),
        Cpt(
            "Judgment",
            ("Score",),
            tuple(_onehot(int(HEDDEN_SCORES[s] > DECISION_THRESHOLD), 2) for s in scores),
        ),
    ]
    model = _model(
        [("Score", scores), ("Room", rooms), TRIAL_OUTCOME, TRIAL_JUDGMENT], cpts
    )
    return Scenario(
        name="hedden-rooms",
        model=model,
        spec=_trial_spec("Room", "room2", "room1"),
        expected={
            PARITY: Expectation(False, gap=0.3, groups={"room2": 0.4, "room1": 0.1}),
            CEP: Expectation(True, gap=0.0, groups={"room2": 0.5, "room1": 0.5}),
            DIAGNOSTIC: Expectation(True),
        },
        provenance="Hedden's two-room example with a .5 decision threshold",
        description="Room membership is correlated with scores but has no causal influence.",
    )


LONG_FEATURES = {"f80": 0.8, "f30": 0.3, "f60": 0.6, "f10": 0.1}
LONG_SECTIONS = {"f80": "sec1", "f30": "sec1", "f60": "sec2", "f10": "sec2"}


def long_sections() -> Scenario:
    """Papers graded on the same criteria in both sections; section 1 has more true A papers."""
    feats = tuple(LONG_FEATURES)
    sections = ("sec1", "sec2")
    cpts = [
        Cpt("Features", (), ((0.25,) * 4,)),
        Cpt("Section", ("Features",), tuple(_onehot(sections.index(LONG_SECTIONS[f]), 2) for f in feats)),
        Cpt("Quality", ("Features",), tuple(_bern(LONG_FEATURES[f]) for f in feats)),
        Cpt(
            "Grade",
            ("Features",),
            tuple(_onehot(int(LONG_FEATURES[f] > DECISION_THRESHOLD), 2) for f in feats),
        ),
    ]
    model = _model(
        [("Features", feats), ("Section", sections), ("Quality", ("not_a", "a")), ("Grade", ("not_a", "a"))],
        cpts,
    )
    # false "A" grades among true non-A papers: section 1 has one .8 group, section 2 one .6 group
    fpr1 = 0.2 / (0.2 + 0.7)
    fpr2 = 0.4 / (0.4 + 0.9)
    return Scenario(
        name="long-sections",
        model=model,
        spec=AuditSpec(
            protected="Section",
            outcome="Quality",
            classification="Grade",
            protected_positive="sec2",
            protected_negative="sec1",
            outcome_negative="not_a",
            outcome_positive="a",
            positive_class="a",
        ),
        expected={
            PARITY: Expectation(False, gap=fpr2 - fpr1, groups={"sec2": fpr2, "sec1": fpr1}),
            CEP: Expectation(True, gap=0.0),
            DIAGNOSTIC: Expectation(True),
        },
        provenance="Long's two-section grading example",
        description="Section is correlated with paper quality but grading ignores it.",
    )


BEIGANG_DEMOGRAPHICS = ("christian_young", "christian_old", "muslim_young", "muslim_old")
BEIGANG_PRIORS = {
    # Muslims younger in the first county, older in the second
    "first": (0.15, 0.35, 0.35, 0.15),
    "second": (0.35, 0.15, 0.15, 0.35),
}
GUILT_BY_AGE = {"young": 0.4, "old": 0.2}
INCRIMINATING_BY_AGE = {"young": 0.7, "old": 0.3}
CONVICT_BY_ASSESSMENT = {"exculpatory": 0.05, "incriminating": 0.9}


def beigang_counties(county: str = "first") -> Scenario:
    """Age drives convictions; religion is tied to age only through demographics.

    ``county`` selects the demographic mix, which flips the sign of the
    religion/age correlation.
    """
    if county not in BEIGANG_PRIORS:
        raise ValueError(f"county must be one of {sorted(BEIGANG_PRIORS)}")
    demo = BEIGANG_DEMOGRAPHICS
    religions = ("christian", "muslim")
    ages = ("young", "old")
    cpts = [
        Cpt("Demographics", (), (BEIGANG_PRIORS[county],)),
        Cpt("Religion", ("Demographics",), tuple(_onehot(religions.index(d.split("_")[0]), 2) for d in demo)),
        Cpt("Age", ("Demographics",), tuple(_onehot(ages.index(d.split("_")[1]), 2) for d in demo)),
        Cpt("Outcome", ("Age",), tuple(_bern(GUILT_BY_AGE[a]) for a in ages)),
        Cpt("Assessment", ("Age",), tuple(_bern(INCRIMINATING_BY_AGE[a]) for a in ages)),
        Cpt("Judgment", ("Assessment",), tuple(_bern(CONVICT_BY_ASSESSMENT[e]) for e in CONVICT_BY_ASSESSMENT)),
    ]
    model = _model(
        [
            ("Demographics", demo),
            ("Religion", religions),
            ("Age", ages),
            TRIAL_OUTCOME,
            ("Assessment", tuple(CONVICT_BY_ASSESSMENT)),
            TRIAL_JUDGMENT,
        ],
        cpts,
    )
    return Scenario(
        name=f"beigang-{county}-county",
        model=model,
        spec=_trial_spec("Religion", "muslim", "christian"),
        expected={
            PARITY: Expectation(False),
            CEP: Expectation(True, gap=0.0),
            DIAGNOSTIC: Expectation(True),
        },
        provenance="Beigang's two-county religion/age example, adapted to trials",
        description=f"{county} county: religion correlates with age through demographics only.",
        params={"county": county},
    )


# -- jury and prosecutor biases ------------------------------------------------

EVIDENCE = ("weak", "moderate", "strong")
WHITE_EVIDENCE = (0.1, 0.3, 0.6)
INNOCENCE_BY_EVIDENCE = (0.5, 0.4, 0.05)
WHITE_CONVICTION = (0.05, 0.3, 0.35)
BLACK_SHARE = 0.3


def _dot(a, b) -> float:
    return sum(x * y for x, y in zip(a, b))


def _solve_jury(k: float):
    """Prosecutor mix and jury conviction rates for black defendants.

    The prosecutor shifts a fraction ``t`` of black cases to weak evidence so
    that P(innocent) scales by ``k``. The jury convicts black defendants at
    ``white + alpha + beta * innocence`` in each evidence stratum, with alpha
    and beta fixed by requiring P(convict) and P(convict & innocent) to scale
    by ``k`` as well; then P(innocent | convict) and the false-conviction rate
    are unchanged.
    """
    w0, inn, c0 = WHITE_EVIDENCE, INNOCENCE_BY_EVIDENCE, WHITE_CONVICTION
    p_innocent = _dot(w0, inn)
    p_convict = _dot(w0, c0)
    p_both = _dot(w0, [i * c for i, c in zip(inn, c0)])

    t = (k - 1.0) * p_innocent / (inn[0] - p_innocent)
    if not 0.0 <= t < 1.0:
        raise InfeasibleParameterError(f"no prosecutor mix reaches k={k}")
    w1 = tuple((1 - t) * w + (t if e == 0 else 0.0) for e, w in enumerate(w0))

    # 2x2 linear system in (alpha, beta)
    s0 = sum(w1)
    s1 = _dot(w1, inn)
    s2 = _dot(w1, [i * i for i in inn])
    r0 = k * p_convict - _dot(w1, c0)
    r1 = k * p_both - _dot(w1, [i * c for i, c in zip(inn, c0)])
    det = s0 * s2 - s1 * s1
    alpha = (r0 * s2 - s1 * r1) / det
    beta = (s0 * r1 - s1 * r0) / det
    c1 = tuple(c + alpha + beta * i for c, i in zip(c0, inn))
    return w1, c1


def biased_jury_prosecutor(k: float = 1.2, black_conviction=None) -> Scenario:
    """Jury and prosecutor biases that cancel in the false-conviction rate.

    For black defendants both P(innocent) and P(convict) are ``k`` times the
    white values while P(innocent | convict) is unchanged, so false-conviction
    rates agree across races. Passing ``black_conviction`` fixes the jury's
    rates instead of solving for them; with ``k=1`` that isolates the jury
    bias.
    """
    if k < 1.0:
        raise InfeasibleParameterError("k must be at least 1")
    solved = black_conviction is None
    w1, c1 = _solve_jury(k)
    if not solved:
        c1 = tuple(float(x) for x in black_conviction)
        if len(c1) != len(EVIDENCE):
            raise ValueError("black_conviction needs one rate per evidence level")
    if not all(0.0 < x < 1.0 for x in (*w1, *c1)):
        raise InfeasibleParameterError(f"no interior CPT solution for k={k}")

    races = RACE[1]
    cpts = [
        Cpt("Race", (), (_bern(BLACK_SHARE),)),
        Cpt("Evidence", ("Race",), (WHITE_EVIDENCE, w1)),
        Cpt("Outcome", ("Evidence",), tuple((i, round(1.0 - i, 15)) for i in INNOCENCE_BY_EVIDENCE)),
        Cpt(
            "Judgment",
            ("Race", "Evidence"),
            tuple(_bern(c) for c in WHITE_CONVICTION) + tuple(_bern(c) for c in c1),
        ),
    ]
    model = _model([RACE, ("Evidence", EVIDENCE), TRIAL_OUTCOME, TRIAL_JUDGMENT], cpts)

    white, black = ({"Race": r} for r in races)
    inn, conv = {"Outcome": "innocent"}, {"Judgment": "convict"}
    _check("P(I) scaling", marginal_probability(model, {**inn, **black}) / BLACK_SHARE,
           k * marginal_probability(model, {**inn, **white}) / (1 - BLACK_SHARE))
    if solved:
        pc_white = conditional_probability(model, conv, white)
        _check("P(C) scaling", conditional_probability(model, conv, black), k * pc_white)
        _check(
            "P(I|C) fixed",
            conditional_probability(model, inn, {**conv, **black}),
            conditional_probability(model, inn, {**conv, **white}),
        )
        expected = {
            PARITY: Expectation(True, gap=0.0),
            CEP: Expectation(False, gap=(k - 1.0) * pc_white),
            DIAGNOSTIC: Expectation(False),
        }
    else:
        expected = {
            PARITY: Expectation(False),
            CEP: Expectation(False),
            DIAGNOSTIC: Expectation(False),
        }
    return Scenario(
        name="biased-jury-prosecutor",
        model=model,
        spec=_trial_spec("Race", "black", "white"),
        expected=expected,
        provenance="biased jury and prosecutor; Bayes-rule k-scaling construction",
        description="Prosecutors bring weaker cases against black defendants; juries convict them more easily.",
        params={"k": k, "prosecutor_mix": w1, "black_conviction": c1, "solved": solved},
    )


# -- diagnostic evidence and its biases ------------------------------------------

LOW_INCOME = {"white": 0.3, "black": 0.5}
GUILT_BY_INCOME = {"high": 0.2, "low": 0.35}
TESTIFY = {("innocent", "white"): 0.05, ("innocent", "black"): 0.15,
           ("guilty", "white"): 0.5, ("guilty", "black"): 0.7}
TESTIFY_UNBIASED = {"innocent": 0.05, "guilty": 0.6}
INCRIMINATING_BY_WITNESS = {"none": 0.1, "testifies": 0.85}


def _witness_parts(biased: bool):
    incomes = ("high", "low")
    variables = [
        RACE,
        ("Income", incomes),
        TRIAL_OUTCOME,
        ("Witness", tuple(INCRIMINATING_BY_WITNESS)),
        ("Assessment", tuple(CONVICT_BY_ASSESSMENT)),
        TRIAL_JUDGMENT,
    ]
    if biased:
        witness = Cpt(
            "Witness",
            ("Outcome", "Race"),
            tuple(_bern(TESTIFY[(y, a)]) for y in TRIAL_OUTCOME[1] for a in RACE[1]),
        )
    else:
        witness = Cpt("Witness", ("Outcome",), tuple(_bern(TESTIFY_UNBIASED[y]) for y in TRIAL_OUTCOME[1]))
    cpts = [
        Cpt("Race", (), (_bern(BLACK_SHARE),)),
        Cpt("Income", ("Race",), tuple(_bern(LOW_INCOME[a]) for a in RACE[1])),
        Cpt("Outcome", ("Income",), tuple(_bern(GUILT_BY_INCOME[i]) for i in incomes)),
        witness,
        Cpt("Assessment", ("Witness",), tuple(_bern(INCRIMINATING_BY_WITNESS[w]) for w in INCRIMINATING_BY_WITNESS)),
        Cpt("Judgment", ("Assessment",), tuple(_bern(CONVICT_BY_ASSESSMENT[e]) for e in CONVICT_BY_ASSESSMENT)),
    ]
    return variables, cpts


def diagnostic_evidence() -> Scenario:
    """Classification relies only on evidence caused by the outcome."""
    variables, cpts = _witness_parts(biased=False)
    return Scenario(
        name="diagnostic-evidence",
        model=_model(variables, cpts),
        spec=_trial_spec("Race", "black", "white"),
        expected={
            # Judgment is independent of Race given Outcome
            PARITY: Expectation(True, gap=0.0),
            CEP: Expectation(True, gap=0.0),
            DIAGNOSTIC: Expectation(True),
        },
        provenance="judgment driven only by evidence the outcome causes",
        description="Race affects income and thereby guilt; the witness responds only to guilt.",
    )


def biased_witness() -> Scenario:
    """Witnesses testify more readily against black defendants, truthfully."""
    variables, cpts = _witness_parts(biased=True)
    return Scenario(
        name="biased-witness",
        model=_model(variables, cpts),
        spec=_trial_spec("Race", "black", "white"),
        expected={PARITY: Expectation(False), CEP: Expectation(False), DIAGNOSTIC: Expectation(False)},
        provenance="witness availability depends on guilt and on race",
        description="Availability of eyewitness evidence depends on race as well as guilt.",
    )


def neutralized_witness() -> Scenario:
    """Biased witness plus a race-conscious assessment that cancels the bias.

    The assessment discounts testimony against black defendants. With
    ``g(r) = r * P(convict | incriminating) + (1 - r) * P(convict | exculpatory)``
    linear in the incrimination rate ``r``, equal innocent conviction risk
    needs ``r_black = r_none + (w_white / w_black) * (r_testify - r_none)``,
    where ``w`` is the innocent testimony rate.
    """
    variables, cpts = _witness_parts(biased=True)
    r_none = INCRIMINATING_BY_WITNESS["none"]
    r_testify = INCRIMINATING_BY_WITNESS["testifies"]
    w_white = TESTIFY[("innocent", "white")]
    w_black = TESTIFY[("innocent", "black")]
    r_black = r_none + (w_white / w_black) * (r_testify - r_none)
    if not 0.0 < r_black < 1.0:
        raise InfeasibleParameterError("compensating assessment falls outside (0, 1)")
    assessment = Cpt(
        "Assessment",
        ("Witness", "Race"),
        (_bern(r_none), _bern(r_none), _bern(r_testify), _bern(r_black)),
    )
    cpts = [assessment if c.child == "Assessment" else c for c in cpts]
    model = _model(variables, cpts)

    event = {"Judgment": "convict"}
    _check(
        "neutralized CEP",
        interventional_probability(model, event, {"Race": "black", "Outcome": "innocent"}),
        interventional_probability(model, event, {"Race": "white", "Outcome": "innocent"}),
    )
    return Scenario(
        name="neutralized-witness",
        model=model,
        spec=_trial_spec("Race", "black", "white"),
        # given Outcome, Income is blocked, so the false-conviction rates equal the CEP rates
        expected={PARITY: Expectation(True, gap=0.0), CEP: Expectation(True, gap=0.0), DIAGNOSTIC: Expectation(False)},
        provenance="assessment compensates for witness availability bias",
        description="Two unmediated paths whose effects on innocent conviction risk cancel exactly.",
        params={"black_incrimination_rate": r_black},
    )


def unadjusted_assessment(model: CausalModel) -> Cpt:
    """The neutralized-witness Assessment CPT with the race adjustment removed."""
    cpt = model.cpt("Assessment")
    if cpt.parents != ("Witness", "Race"):
        raise ValueError("expected the neutralized-witness Assessment mechanism")
    white_rows = cpt.rows[0::2]
    return Cpt(cpt.child, cpt.parents, tuple(r for row in white_rows for r in (row, row)))


HIGH_P1 = {"white": 0.6, "black": 0.3}
HIGH_P2_WHITE = 0.3
EVIDENCE_BY_PREDICTORS = {("low", "low"): 0.1, ("low", "high"): 0.5, ("high", "low"): 0.4, ("high", "high"): 0.8}
GUILT_BY_PREDICTORS = {("low", "low"): 0.1, ("low", "high"): 0.3, ("high", "low"): 0.25, ("high", "high"): 0.5}
CONVICT_BY_EVIDENCE = {"absent": 0.05, "present": 0.9}


def canceling_predictors(one_sided: bool = False) -> Scenario:
    """Race lowers one predictor and raises the other; the effects cancel.

    P(Evidence=present) is linear in P(Predictor2=high) given Predictor1, so
    the black rate for Predictor2 has a closed form. ``one_sided=True`` drops
    the Race -> Predictor1 edge (Predictor1 keeps the white rate) and the
    cancellation breaks.
    """
    lv = ("low", "high")
    e = EVIDENCE_BY_PREDICTORS

    def base(h1):
        return (1 - h1) * e[("low", "low")] + h1 * e[("high", "low")]

    def slope(h1):
        return (1 - h1) * (e[("low", "high")] - e[("low", "low")]) + h1 * (e[("high", "high")] - e[("high", "low")])

    h1w, h1b = HIGH_P1["white"], HIGH_P1["black"]
    target = base(h1w) + HIGH_P2_WHITE * slope(h1w)
    h2b = (target - base(h1b)) / slope(h1b)
    if not 0.0 < h2b < 1.0:
        raise InfeasibleParameterError("no cancelling rate for Predictor2")

    if one_sided:
        p1 = Cpt("Predictor1", (), (_bern(h1w),))
    else:
        p1 = Cpt("Predictor1", ("Race",), (_bern(h1w), _bern(h1b)))
    cpts = [
        Cpt("Race", (), (_bern(BLACK_SHARE),)),
        p1,
        Cpt("Predictor2", ("Race",), (_bern(HIGH_P2_WHITE), _bern(h2b))),
        Cpt("Outcome", ("Predictor1", "Predictor2"), tuple(_bern(GUILT_BY_PREDICTORS[(a, b)]) for a in lv for b in lv)),
        Cpt("Evidence", ("Predictor1", "Predictor2"), tuple(_bern(e[(a, b)]) for a in lv for b in lv)),
        Cpt("Judgment", ("Evidence",), tuple(_bern(CONVICT_BY_EVIDENCE[x]) for x in CONVICT_BY_EVIDENCE)),
    ]
    model = _model(
        [RACE, ("Predictor1", lv), ("Predictor2", lv), TRIAL_OUTCOME, ("Evidence", tuple(CONVICT_BY_EVIDENCE)), TRIAL_JUDGMENT],
        cpts,
    )
    if not one_sided:
        event = {"Judgment": "convict"}
        _check(
            "cancelling CEP",
            interventional_probability(model, event, {"Race": "black", "Outcome": "innocent"}),
            interventional_probability(model, event, {"Race": "white", "Outcome": "innocent"}),
        )
    return Scenario(
        name="canceling-predictors" + ("-one-sided" if one_sided else ""),
        model=model,
        spec=_trial_spec("Race", "black", "white"),
        # conditioning on Outcome couples the predictors, so parity fails either way
        expected={PARITY: Expectation(False),
                  CEP: Expectation(one_sided is False, gap=None if one_sided else 0.0),
                  DIAGNOSTIC: Expectation(False)},
        provenance="two unmediated influences of opposite sign",
        description="Two unmediated predictor paths balance each other out."
        if not one_sided else "Only the positive predictor path remains.",
        params={"black_high_predictor2": h2b, "one_sided": one_sided},
    )


# -- predictors, profiles and matches ---------------------------------------------

INCRIMINATING_BY_INCOME = {"high": 0.3, "low": 0.6}


def income_predictor() -> Scenario:
    """Income predicts guilt and feeds the assessment directly."""
    incomes = ("high", "low")
    cpts = [
        Cpt("Race", (), (_bern(BLACK_SHARE),)),
        Cpt("Income", ("Race",), tuple(_bern(LOW_INCOME[a]) for a in RACE[1])),
        Cpt("Outcome", ("Income",), tuple(_bern(GUILT_BY_INCOME[i]) for i in incomes)),
        Cpt("Assessment", ("Income",), tuple(_bern(INCRIMINATING_BY_INCOME[i]) for i in incomes)),
        Cpt("Judgment", ("Assessment",), tuple(_bern(CONVICT_BY_ASSESSMENT[x]) for x in CONVICT_BY_ASSESSMENT)),
    ]
    model = _model(
        [RACE, ("Income", incomes), TRIAL_OUTCOME, ("Assessment", tuple(CONVICT_BY_ASSESSMENT)), TRIAL_JUDGMENT],
        cpts,
    )
    return Scenario(
        name="income-predictor",
        model=model,
        spec=_trial_spec("Race", "black", "white"),
        expected={PARITY: Expectation(False), CEP: Expectation(False), DIAGNOSTIC: Expectation(False)},
        provenance="income used as a predictive feature",
        description="The protected category shifts income, which is used as a predictor.",
    )


HIGH_EXPOSURE = {"wealthy": 0.1, "poor": 0.35}
GUILT_BY_EXPOSURE = {"low": 0.2, "high": 0.3}
FITS_PROFILE = {"low": 0.05, "high": 0.7}
CONVICT_BY_PROFILE = {"no": 0.3, "yes": 0.5}


def exposure_to_violence() -> Scenario:
    """Profiling evidence: early exposure to violence, itself shaped by class."""
    classes = ("wealthy", "poor")
    levels = ("low", "high")
    cpts = [
        Cpt("Class", (), (_bern(0.4),)),
        Cpt("Exposure", ("Class",), tuple(_bern(HIGH_EXPOSURE[c]) for c in classes)),
        Cpt("Outcome", ("Exposure",), tuple(_bern(GUILT_BY_EXPOSURE[x]) for x in levels)),
        Cpt("FitsProfile", ("Exposure",), tuple(_bern(FITS_PROFILE[x]) for x in levels)),
        Cpt("Judgment", ("FitsProfile",), tuple(_bern(CONVICT_BY_PROFILE[f]) for f in ("no", "yes"))),
    ]
    model = _model(
        [("Class", classes), ("Exposure", levels), TRIAL_OUTCOME, ("FitsProfile", ("no", "yes")), TRIAL_JUDGMENT],
        cpts,
    )
    return Scenario(
        name="exposure-to-violence",
        model=model,
        spec=_trial_spec("Class", "poor", "wealthy"),
        expected={PARITY: Expectation(False), CEP: Expectation(False), DIAGNOSTIC: Expectation(False)},
        provenance="profiling evidence via exposure to violence",
        description="Class affects exposure to violence, which is used as incriminating evidence.",
    )


US10_BY_SEX = {"female": 0.05, "male": 0.3}
GUILT_BY_SHOE = {"other": 0.01, "us10": 0.2}
IMPLICATES_BY_OUTCOME = {"innocent": 0.05, "guilty": 0.9}
MATCH_BY_INVESTIGATION = {"inconclusive": 0.02, "implicates": 0.95}
CONVICT_BY_MATCH = {"no": 0.03, "yes": 0.9}


def shoe_size_match() -> Scenario:
    """Shoe-size match evidence that only incriminates through the facts of the crime."""
    sexes = ("female", "male")
    shoes = ("other", "us10")
    cpts = [
        Cpt("Sex", (), (_bern(0.5),)),
        Cpt("ShoeSize", ("Sex",), tuple(_bern(US10_BY_SEX[s]) for s in sexes)),
        Cpt("Outcome", ("ShoeSize",), tuple(_bern(GUILT_BY_SHOE[s]) for s in shoes)),
        Cpt("Investigation", ("Outcome",), tuple(_bern(IMPLICATES_BY_OUTCOME[y]) for y in TRIAL_OUTCOME[1])),
        Cpt("Match", ("Investigation",), tuple(_bern(MATCH_BY_INVESTIGATION[i]) for i in MATCH_BY_INVESTIGATION)),
        Cpt("Judgment", ("Match",), tuple(_bern(CONVICT_BY_MATCH[m]) for m in CONVICT_BY_MATCH)),
    ]
    model = _model(
        [
            ("Sex", sexes),
            ("ShoeSize", shoes),
            TRIAL_OUTCOME,
            ("Investigation", tuple(MATCH_BY_INVESTIGATION)),
            ("Match", tuple(CONVICT_BY_MATCH)),
            TRIAL_JUDGMENT,
        ],
        cpts,
    )
    return Scenario(
        name="shoe-size-match",
        model=model,
        spec=_trial_spec("Sex", "male", "female"),
        expected={
            PARITY: Expectation(True, gap=0.0),
            CEP: Expectation(True, gap=0.0),
            DIAGNOSTIC: Expectation(True),
        },
        provenance="match evidence placed downstream of the outcome",
        description="Sex affects shoe size and thereby guilt for this crime; the match depends only on the facts.",
    )


SCENARIOS: dict[str, Callable[[], Scenario]] = {
    "hedden-rooms": hedden_rooms,
    "long-sections": long_sections,
    "beigang-first-county": lambda: beigang_counties("first"),
    "beigang-second-county": lambda: beigang_counties("second"),
    "biased-jury-prosecutor": biased_jury_prosecutor,
    "diagnostic-evidence": diagnostic_evidence,
    "biased-witness": biased_witness,
    "neutralized-witness": neutralized_witness,
    "canceling-predictors": canceling_predictors,
    "income-predictor": income_predictor,
    "exposure-to-violence": exposure_to_violence,
    "shoe-size-match": shoe_size_match,
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]()
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}") from None


def all_scenarios() -> list[Scenario]:
    return [factory() for factory in SCENARIOS.values()]
