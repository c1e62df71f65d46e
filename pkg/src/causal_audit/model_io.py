"""Text format for causal models, and audit report rendering.

The format is line oriented::

    version 1
    # comment
    var Room { room1, room2 }
    edge Score -> Room
    cpt Score :
      () : 0.25, 0.25, 0.25, 0.25
    cpt Room | Score :
      (p90) : 1.0, 0.0
      ...
    role protected Room positive=room2 negative=room1

CPT rows follow the parent order given on the ``cpt`` line, in lexicographic
order over parent state indices with the last parent varying fastest. Each
row repeats its parent states in parentheses and the parser checks them.
Probabilities are plain decimal literals. Rows that do not sum to one are an
error; nothing is renormalized.

``serialize_model`` emits the canonical form: variables and CPTs in
topological order (ties broken by name), probabilities as the shortest
decimal that round-trips to the same float.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping

from .errors import (
    DuplicateSectionError,
    ModelSyntaxError,
    NormalizationError,
)
from .fairness import AuditReport, AuditSpec
from .model import ROW_SUM_ATOL, CausalModel, Cpt, Variable, build_model, parent_rows

FORMAT_VERSION = "1"
ROLE_KINDS = ("protected", "outcome", "classification")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<punct>[{}(),:|=])
  | (?P<num>[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?(?![A-Za-z0-9_.]))
  | (?P<ident>[A-Za-z0-9_][A-Za-z0-9_.]*)
    """,
    re.VERBOSE,
)
_IDENT = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.]*\Z")


@dataclass(frozen=True)
class Role:
    variable: str
    positive: str | None = None
    negative: str | None = None


@dataclass(frozen=True)
class ModelDocument:
    model: CausalModel
    roles: Mapping[str, Role] = field(default_factory=dict)
    version: str = FORMAT_VERSION

    def audit_spec(self, **overrides) -> AuditSpec:
        """AuditSpec from the embedded roles; non-None keyword overrides win."""
        roles = self.roles
        fields = {
            "protected": roles.get("protected", Role(None)).variable,
            "protected_positive": roles.get("protected", Role(None)).positive,
            "protected_negative": roles.get("protected", Role(None)).negative,
            "outcome": roles.get("outcome", Role(None)).variable,
            "outcome_positive": roles.get("outcome", Role(None)).positive,
            "outcome_negative": roles.get("outcome", Role(None)).negative,
            "classification": roles.get("classification", Role(None)).variable,
            "positive_class": roles.get("classification", Role(None)).positive,
        }
        for key, value in overrides.items():
            if value is not None:
                fields[key] = value
        # a state default from the file only applies to the variable it was declared for
        for role, keys in (
            ("protected", ("protected_positive", "protected_negative")),
            ("outcome", ("outcome_positive", "outcome_negative")),
            ("classification", ("positive_class",)),
        ):
            declared = roles.get(role)
            if declared is not None and fields[role] != declared.variable:
                for key in keys:
                    if overrides.get(key) is None:
                        fields[key] = None
        missing = [r for r in ROLE_KINDS if fields[r] is None]
        if missing:
            raise ValueError("no variable bound to role(s): " + ", ".join(missing))
        return AuditSpec(**fields)


def roles_from_spec(spec: AuditSpec) -> dict[str, Role]:
    roles = {}
    if spec.protected is not None:
        roles["protected"] = Role(spec.protected, spec.protected_positive, spec.protected_negative)
    roles["outcome"] = Role(spec.outcome, spec.outcome_positive, spec.outcome_negative)
    roles["classification"] = Role(spec.classification, spec.positive_class)
    return roles


# -- parsing -----------------------------------------------------------------


def _tokenize(text: str, lineno: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ModelSyntaxError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return tokens


class _Line:
    def __init__(self, tokens, lineno, raw):
        self.tokens = tokens
        self.lineno = lineno
        self.raw = raw
        self.pos = 0

    def error(self, message, col=None):
        if col is None:
            col = self.tokens[self.pos][2] if self.pos < len(self.tokens) else len(self.raw) + 1
        return ModelSyntaxError(message, self.lineno, col)

    def peek(self):
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else None

    def expect(self, value):
        if self.peek() != value:
            found = self.peek()
            raise self.error(f"expected {value!r}, found {found!r}" if found else f"expected {value!r}")
        self.pos += 1

    def ident(self, what):
        if self.pos >= len(self.tokens):
            raise self.error(f"expected {what}")
        kind, text, col = self.tokens[self.pos]
        if kind not in ("ident", "num") or not _IDENT.match(text):
            raise self.error(f"expected {what}, found {text!r}")
        self.pos += 1
        return text

    def number(self):
        if self.pos >= len(self.tokens):
            raise self.error("expected a probability")
        kind, text, col = self.tokens[self.pos]
        if kind != "num":
            raise self.error(f"expected a decimal probability, found {text!r}")
        self.pos += 1
        return float(text), col

    def comma_list(self, item, closer):
        out = []
        if self.peek() == closer:
            return out
        out.append(item())
        while self.peek() == ",":
            self.pos += 1
            out.append(item())
        return out

    def done(self):
        if self.pos != len(self.tokens):
            raise self.error(f"unexpected {self.peek()!r}")


def parse_model(text: str) -> ModelDocument:
    """Parse a model document; raises ModelSyntaxError with a 1-based line/column."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = _tokenize(body, lineno)
        if tokens:
            lines.append(_Line(tokens, lineno, body))

    version = None
    variables: dict[str, Variable] = {}
    edges: dict[tuple[str, str], int] = {}
    cpts: dict[str, Cpt] = {}
    roles: dict[str, Role] = {}

    i = 0
    while i < len(lines):
        line = lines[i]
        i += 1
        keyword = line.peek()
        if line.tokens[0][0] != "ident":
            raise line.error(f"expected a section keyword, found {keyword!r}")
        line.pos = 1
        if keyword == "version":
            if version is not None:
                raise DuplicateSectionError("duplicate version line", line.lineno, 1)
            if lines[0] is not line:
                raise line.error("version must be the first statement", 1)
            kind, value, col = line.tokens[1] if len(line.tokens) > 1 else (None, None, None)
            if value != FORMAT_VERSION:
                raise line.error(f"unsupported format version {value!r}")
            line.pos = 2
            line.done()
            version = value
        elif version is None:
            raise line.error("document must start with 'version 1'", 1)
        elif keyword == "var":
            col = line.tokens[line.pos][2] if line.pos < len(line.tokens) else None
            name = line.ident("variable name")
            if name in variables:
                raise DuplicateSectionError(f"variable {name!r} declared twice", line.lineno, col)
            line.expect("{")
            states = line.comma_list(lambda: line.ident("state name"), "}")
            line.expect("}")
            line.done()
            if len(states) < 2:
                raise line.error(f"variable {name!r} needs at least two states", col)
            if len(set(states)) != len(states):
                raise line.error(f"variable {name!r} repeats a state name", col)
            variables[name] = Variable(name, tuple(states))
        elif keyword == "edge":
            parent = _declared(line, variables)
            line.expect("->")
            child = _declared(line, variables)
            line.done()
            if (parent, child) in edges:
                raise DuplicateSectionError(f"duplicate edge {parent} -> {child}", line.lineno, 1)
            edges[(parent, child)] = line.lineno
        elif keyword == "cpt":
            child = _declared(line, variables)
            if child in cpts:
                raise DuplicateSectionError(f"duplicate cpt for {child!r}", line.lineno, 1)
            parents = []
            if line.peek() == "|":
                line.pos += 1
                parents = line.comma_list(lambda: _declared(line, variables), ":")
            line.expect(":")
            line.done()
            cpts[child], i = _parse_rows(lines, i, line, variables[child], [variables[p] for p in parents])
        elif keyword == "role":
            col = line.tokens[line.pos][2] if line.pos < len(line.tokens) else None
            kind = line.ident("role kind")
            if kind not in ROLE_KINDS:
                raise line.error(f"unknown role {kind!r}; expected one of {', '.join(ROLE_KINDS)}", col)
            if kind in roles:
                raise DuplicateSectionError(f"duplicate role {kind!r}", line.lineno, 1)
            var = _declared(line, variables)
            opts = {}
            while line.peek() is not None:
                key_col = line.tokens[line.pos][2]
                key = line.ident("positive= or negative=")
                if key not in ("positive", "negative") or (kind == "classification" and key == "negative"):
                    raise line.error(f"unexpected role option {key!r}", key_col)
                if key in opts:
                    raise line.error(f"option {key!r} given twice", key_col)
                line.expect("=")
                state_col = line.tokens[line.pos][2] if line.pos < len(line.tokens) else None
                state = line.ident("state name")
                if state not in variables[var].states:
                    raise line.error(f"variable {var!r} has no state {state!r}", state_col)
                opts[key] = state
            roles[kind] = Role(var, opts.get("positive"), opts.get("negative"))
        else:
            raise line.error(f"unknown section keyword {keyword!r}", 1)

    if version is None:
        raise ModelSyntaxError("empty document; expected 'version 1'", 1, 1)
    model = build_model(variables.values(), edges, cpts.values())
    return ModelDocument(model=model, roles=roles, version=version)


def _declared(line: _Line, variables) -> str:
    col = line.tokens[line.pos][2] if line.pos < len(line.tokens) else None
    name = line.ident("variable name")
    if name not in variables:
        raise line.error(f"variable {name!r} is not declared", col)
    return name


def _parse_rows(lines, i, header, child: Variable, parents: list[Variable]):
    labels = parent_rows(parents)
    rows = []
    for label in labels:
        if i >= len(lines) or lines[i].peek() != "(":
            where = lines[i] if i < len(lines) else header
            raise ModelSyntaxError(
                f"cpt {child.name!r} expects {len(labels)} rows, found {len(rows)}",
                where.lineno,
                1,
            )
        line = lines[i]
        i += 1
        line.pos = 0
        line.expect("(")
        label_col = line.tokens[line.pos][2]
        got = tuple(line.comma_list(lambda: line.ident("parent state"), ")"))
        line.expect(")")
        if got != label:
            raise line.error(
                f"row ({', '.join(got)}) out of order; expected ({', '.join(label)})", label_col
            )
        line.expect(":")
        probs = []
        for k in range(child.cardinality):
            if k:
                line.expect(",")
            p, _ = line.number()
            probs.append(p)
        line.done()
        if not all(0.0 <= p <= 1.0 for p in probs):
            raise line.error(f"probabilities in row ({', '.join(label)}) must lie in [0, 1]", 1)
        total = math.fsum(probs)
        if abs(total - 1.0) > ROW_SUM_ATOL:
            raise NormalizationError(child.name, label, total, line=line.lineno)
        rows.append(tuple(probs))
    return Cpt(child.name, tuple(p.name for p in parents), tuple(rows)), i


# -- serialization -----------------------------------------------------------


def serialize_model(doc: ModelDocument | CausalModel) -> str:
    """Canonical, byte-stable text for a model document."""
    if isinstance(doc, CausalModel):
        doc = ModelDocument(doc)
    model = doc.model
    out = [f"version {doc.version}", ""]
    for name in model.order:
        var = model.variable(name)
        out.append(f"var {name} {{ {', '.join(var.states)} }}")
    out.append("")
    for name in model.order:
        for parent in model.cpt(name).parents:
            out.append(f"edge {parent} -> {name}")
    if model.edges:
        out.append("")
    for name in model.order:
        cpt = model.cpt(name)
        head = f"cpt {name}" + (f" | {', '.join(cpt.parents)}" if cpt.parents else "") + " :"
        out.append(head)
        labels = parent_rows([model.variable(p) for p in cpt.parents])
        for label, row in zip(labels, cpt.rows):
            out.append(f"  ({', '.join(label)}) : {', '.join(repr(p) for p in row)}")
    if doc.roles:
        out.append("")
    for kind in ROLE_KINDS:
        role = doc.roles.get(kind)
        if role is None:
            continue
        line = f"role {kind} {role.variable}"
        if role.positive is not None:
            line += f" positive={role.positive}"
        if role.negative is not None:
            line += f" negative={role.negative}"
        out.append(line)
    return "\n".join(out) + "\n"


def model_hash(model: CausalModel) -> str:
    """SHA-256 of the canonical serialization (roles excluded)."""
    return "sha256:" + hashlib.sha256(serialize_model(model).encode("utf-8")).hexdigest()


# -- reports -----------------------------------------------------------------

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "causal-audit report",
    "type": "object",
    "required": ["format_version", "model_hash", "spec", "verdicts", "not_evaluable"],
    "properties": {
        "format_version": {"const": "1"},
        "model_hash": {"type": "string", "pattern": "^sha256:[0-9a-f]{64}$"},
        "variable_count": {"type": "integer", "minimum": 1},
        "generated_at": {"type": "string"},
        "spec": {
            "type": "object",
            "required": ["protected", "outcome", "classification", "tolerance"],
            "properties": {
                "protected": {"type": ["string", "null"]},
                "outcome": {"type": "string"},
                "classification": {"type": "string"},
                "tolerance": {"type": "number", "minimum": 0},
            },
        },
        "verdicts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["criterion", "pass", "tolerance"],
                "properties": {
                    "criterion": {"enum": ["parity", "cep", "diagnostic", "coefficient_cep"]},
                    "pass": {"type": "boolean"},
                    "gap": {"type": "number", "minimum": 0},
                    "groups": {
                        "type": "object",
                        "additionalProperties": {"type": "number", "minimum": 0, "maximum": 1},
                    },
                    "extremal_pair": {
                        "type": "array",
                        "items": {"type": "string"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                    "paths": {
                        "type": "object",
                        "required": ["source", "sink", "mediator", "mediated", "unmediated", "truncated"],
                        "properties": {
                            "mediated": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
                            "unmediated": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
                            "truncated": {"type": "boolean"},
                        },
                    },
                    "tolerance": {"type": ["number", "null"]},
                    "method": {"enum": ["exact", "monte_carlo"]},
                    "auxiliary": {"type": "object"},
                    "queries": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "not_evaluable": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["criterion", "reason"],
                "properties": {"criterion": {"type": "string"}, "reason": {"type": "string"}},
            },
        },
    },
}


def report_to_json(report: AuditReport, *, timestamps: bool = False) -> str:
    data = report.to_dict()
    if timestamps:
        data["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return json.dumps(data, indent=2) + "\n"


def report_to_text(report: AuditReport) -> str:
    """Tab-delimited summary, one row per criterion."""
    rows = [
        f"# model\t{report.model_hash}\tvariables={report.variable_count}",
        "criterion\tresult\tgap\ttolerance\tgroups",
    ]
    for v in report.verdicts:
        gap = "" if v.gap is None else f"{v.gap:.12g}"
        tol = "" if v.tolerance is None else f"{v.tolerance:.3g}"
        if v.paths is not None:
            detail = "unmediated=" + ("; ".join(str(p) for p in v.paths.unmediated) or "none")
        else:
            detail = ", ".join(f"{k}={p:.12g}" for k, p in (v.groups or {}).items())
        rows.append(f"{v.criterion}\t{'pass' if v.passed else 'fail'}\t{gap}\t{tol}\t{detail}")
    for n in report.not_evaluable:
        rows.append(f"{n.criterion}\tnot-evaluable\t\t\t{n.reason}")
    return "\n".join(rows) + "\n"
