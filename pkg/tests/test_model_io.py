import json
import random
from pathlib import Path

import jsonschema
import pytest

from causal_audit.errors import (
    CausalAuditError,
    CycleError,
    DuplicateSectionError,
    ModelSyntaxError,
    NormalizationError,
)
from causal_audit.fairness import audit
from causal_audit.model import Cpt, build_model
from causal_audit.model_io import (
    REPORT_SCHEMA,
    ModelDocument,
    Role,
    model_hash,
    parse_model,
    report_to_json,
    report_to_text,
    roles_from_spec,
    serialize_model,
)
from causal_audit.scenarios import all_scenarios, hedden_rooms

from randmodels import random_model

GOLDEN = Path(__file__).parent / "golden" / "hedden-rooms.model"

CHAIN = """\
version 1
var A { a0, a1 }
var C { no, yes }
edge A -> C
cpt A :
  () : 0.3, 0.7
cpt C | A :
  (a0) : 0.9, 0.1
  (a1) : 0.2, 0.8
"""


def hedden_doc():
    sc = hedden_rooms()
    return ModelDocument(sc.model, roles_from_spec(sc.spec))


class TestParse:
    def test_minimal_chain(self):
        doc = parse_model(CHAIN)
        assert doc.model.edges == {("A", "C")}
        assert doc.model.cpt("C").rows == ((0.9, 0.1), (0.2, 0.8))
        assert doc.roles == {}

    def test_comments_and_blank_lines(self):
        text = "# header\n\n" + CHAIN.replace("edge A -> C", "edge A -> C   # the only edge\n\n")
        assert parse_model(text).model == parse_model(CHAIN).model

    def test_multi_parent_row_order(self):
        text = """\
version 1
var A { a, b }
var B { x, y, z }
var C { n, p }
edge A -> C
edge B -> C
cpt A :
  () : 0.5, 0.5
cpt B :
  () : 0.2, 0.3, 0.5
cpt C | A, B :
  (a, x) : 1.0, 0.0
  (a, y) : 0.9, 0.1
  (a, z) : 0.8, 0.2
  (b, x) : 0.7, 0.3
  (b, y) : 0.6, 0.4
  (b, z) : 0.5, 0.5
"""
        m = parse_model(text).model
        assert m.cpt("C").rows[4] == (0.6, 0.4)

    def test_row_out_of_order(self):
        text = CHAIN.replace("(a0) : 0.9, 0.1\n  (a1) : 0.2, 0.8", "(a1) : 0.2, 0.8\n  (a0) : 0.9, 0.1")
        with pytest.raises(ModelSyntaxError) as info:
            parse_model(text)
        assert info.value.line == 8

    def test_normalization_names_row(self):
        with pytest.raises(NormalizationError) as info:
            parse_model(CHAIN.replace("(a1) : 0.2, 0.8", "(a1) : 0.2, 0.7"))
        assert "a1" in str(info.value)
        assert info.value.line == 9

    def test_roles(self):
        text = CHAIN + "role protected A positive=a1 negative=a0\nrole outcome C\nrole classification C positive=yes\n"
        roles = parse_model(text).roles
        assert roles["protected"] == Role("A", "a1", "a0")
        assert roles["classification"] == Role("C", "yes", None)

    @pytest.mark.parametrize(
        "text,line",
        [
            ("var A { a, b }\n", 1),
            ("version 2\n", 1),
            (CHAIN + "edge A -> Q\n", 10),
            (CHAIN + "flow A -> C\n", 10),
            (CHAIN.replace("0.3, 0.7", "0.3, 7/10"), 6),
            (CHAIN.replace("0.3, 0.7", "0.3, 0.7, 0.0"), 6),
            (CHAIN + "role classification C negative=no\n", 10),
            (CHAIN + "role protected A positive=a9\n", 10),
            (CHAIN.replace("var A { a0, a1 }", "var A { a0 }"), 2),
            (CHAIN.replace("cpt C | A :\n  (a0) : 0.9, 0.1\n  (a1) : 0.2, 0.8\n", "cpt C | A :\n  (a0) : 0.9, 0.1\n"), 7),
            (CHAIN.replace("var A", "var A$"), 2),
        ],
    )
    def test_syntax_errors_carry_line(self, text, line):
        with pytest.raises(ModelSyntaxError) as info:
            parse_model(text)
        assert info.value.line == line

    @pytest.mark.parametrize(
        "extra",
        ["version 1\n", "var A { a, b }\n", "edge A -> C\n", "cpt A :\n  () : 0.5, 0.5\n", "role outcome C\nrole outcome C\n"],
    )
    def test_duplicate_sections(self, extra):
        with pytest.raises(DuplicateSectionError):
            parse_model(CHAIN + extra)

    def test_semantic_errors_come_from_builder(self):
        text = CHAIN.replace("edge A -> C", "edge A -> C\nedge C -> A").replace(
            "cpt A :\n  () : 0.3, 0.7", "cpt A | C :\n  (no) : 0.3, 0.7\n  (yes) : 0.3, 0.7"
        )
        with pytest.raises(CycleError):
            parse_model(text)


class TestSerialize:
    def test_golden_snapshot(self):
        assert serialize_model(hedden_doc()) == GOLDEN.read_text()

    def test_round_trip_corpus(self):
        for sc in all_scenarios():
            doc = ModelDocument(sc.model, roles_from_spec(sc.spec))
            back = parse_model(serialize_model(doc))
            assert back.model == sc.model
            assert back.roles == doc.roles
            for a, b in zip(sc.model.cpts, (back.model.cpt(c.child) for c in sc.model.cpts)):
                assert a.rows == b.rows  # bit-equal floats

    def test_declaration_order_does_not_matter(self):
        m = parse_model(CHAIN).model
        flipped = build_model(
            [("C", ("no", "yes")), ("A", ("a0", "a1"))],
            [("A", "C")],
            [m.cpt("C"), m.cpt("A")],
        )
        assert serialize_model(flipped) == serialize_model(m)

    def test_awkward_floats_round_trip(self):
        rng = random.Random(41)
        for _ in range(30):
            m = random_model(rng)
            assert parse_model(serialize_model(m)).model == m

    def test_hash_ignores_roles_and_tracks_content(self):
        doc = hedden_doc()
        assert model_hash(doc.model) == model_hash(parse_model(serialize_model(doc)).model)
        other = parse_model(CHAIN).model
        assert model_hash(other) != model_hash(doc.model)


class TestAuditSpecFromDocument:
    def test_file_roles(self):
        spec = hedden_doc().audit_spec()
        assert (spec.protected, spec.protected_positive) == ("Room", "room2")

    def test_flags_override(self):
        spec = hedden_doc().audit_spec(protected="Score")
        assert spec.protected == "Score"
        # state defaults declared for Room no longer apply
        assert spec.protected_positive is None

    def test_missing_roles(self):
        with pytest.raises(ValueError):
            ModelDocument(parse_model(CHAIN).model).audit_spec()


class TestReports:
    def test_json_validates_and_is_deterministic(self):
        for sc in all_scenarios():
            r = audit(sc.model, sc.spec)
            text = report_to_json(r)
            jsonschema.validate(json.loads(text), REPORT_SCHEMA)
            assert text == report_to_json(audit(sc.model, sc.spec))
            assert "generated_at" not in text

    def test_timestamps_opt_in(self):
        sc = hedden_rooms()
        data = json.loads(report_to_json(audit(sc.model, sc.spec), timestamps=True))
        assert "generated_at" in data
        jsonschema.validate(data, REPORT_SCHEMA)

    def test_text_is_tab_delimited(self):
        sc = hedden_rooms()
        lines = report_to_text(audit(sc.model, sc.spec)).splitlines()
        assert lines[1].split("\t") == ["criterion", "result", "gap", "tolerance", "groups"]
        assert lines[2].startswith("parity\tfail\t")


def _mutate(rng: random.Random, text: str) -> str:
    lines = text.splitlines()
    op = rng.randrange(5)
    i = rng.randrange(len(lines))
    if op == 0:
        del lines[i]
    elif op == 1:
        lines.insert(i, lines[rng.randrange(len(lines))])
    elif op == 2:
        j = rng.randrange(len(lines))
        lines[i], lines[j] = lines[j], lines[i]
    elif op == 3 and lines[i]:
        k = rng.randrange(len(lines[i]))
        lines[i] = lines[i][:k] + rng.choice("0123456789.,(){}:|-> abxyz") + lines[i][k + 1:]
    elif lines[i]:
        k = rng.randrange(len(lines[i]))
        lines[i] = lines[i][:k] + lines[i][k + 1:]
    return "\n".join(lines) + "\n"


def test_fuzz_accepted_mutants_are_valid_models():
    rng = random.Random(43)
    source = serialize_model(hedden_doc())
    accepted = 0
    for _ in range(400):
        text = source
        for _ in range(rng.randint(1, 3)):
            text = _mutate(rng, text)
        try:
            doc = parse_model(text)
        except CausalAuditError:
            continue
        accepted += 1
        m = doc.model
        rebuilt = build_model(
            [(v.name, v.states) for v in m.variables],
            m.edges,
            [Cpt(c.child, c.parents, c.rows) for c in m.cpts],
        )
        assert rebuilt == m
    assert accepted > 0
