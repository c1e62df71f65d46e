"""Discrete structural causal models and exact inference by enumeration.

A model is a DAG over categorical variables with one conditional probability
table (CPT) per variable. The joint distribution factorizes as the product of
the CPT entries along the graph, so every probability below is obtained by
summing that product over the completions of an event.

CPT rows are stored in lexicographic order over the parent state indices with
the last parent varying fastest; the model file format depends on this order.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CptShapeError,
    CycleError,
    DuplicateStateError,
    DuplicateVariableError,
    MissingCptError,
    ModelError,
    ModelTooLargeError,
    NormalizationError,
    ParentMismatchError,
    PartialAssignmentError,
    ProbabilityRangeError,
    UnknownStateError,
    UnknownVariableError,
    ZeroConditioningError,
)

ROW_SUM_ATOL = 1e-12
MAX_JOINT_STATES = 2**24

Assignment = Mapping[str, str]


@dataclass(frozen=True)
class Variable:
    name: str
    states: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) < 2:
            raise ModelError(f"variable {self.name!r} needs at least two states")
        if len(set(self.states)) != len(self.states):
            raise DuplicateStateError(f"variable {self.name!r} repeats a state name")

    @property
    def cardinality(self) -> int:
        return len(self.states)

    def index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise UnknownStateError(self.name, state) from None


@dataclass(frozen=True)
class Cpt:
    """P(child | parents). ``rows[r]`` is the child distribution for parent row ``r``."""

    child: str
    parents: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(
            self, "rows", tuple(tuple(float(p) for p in row) for row in self.rows)
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)


def parent_rows(parent_vars: Sequence[Variable]) -> list[tuple[str, ...]]:
    """Parent assignments in CPT row order (last parent varies fastest)."""
    return list(itertools.product(*(v.states for v in parent_vars)))


@dataclass(frozen=True, eq=False)
class CausalModel:
    """Validated DAG plus CPTs. Build with :func:`build_model`, never directly."""

    variables: tuple[Variable, ...]
    edges: frozenset[tuple[str, str]]
    cpts: tuple[Cpt, ...]
    order: tuple[str, ...] = field(repr=False)

    # equality is semantic: declaration order (and hence joint axis order) is ignored
    def __eq__(self, other):
        if not isinstance(other, CausalModel):
            return NotImplemented
        return (
            frozenset(self.variables) == frozenset(other.variables)
            and self.edges == other.edges
            and frozenset(self.cpts) == frozenset(other.cpts)
        )

    def __hash__(self):
        return hash((frozenset(self.variables), self.edges, frozenset(self.cpts)))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v.name: i for i, v in enumerate(self.variables)}

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def __contains__(self, name) -> bool:
        return name in self._index

    def variable(self, name: str) -> Variable:
        try:
            return self.variables[self._index[name]]
        except KeyError:
            raise UnknownVariableError(name) from None

    def cpt(self, name: str) -> Cpt:
        self.variable(name)
        return self.cpts[self._index[name]]

    def parents(self, name: str) -> tuple[str, ...]:
        return self.cpt(name).parents

    @cached_property
    def _children(self) -> dict[str, tuple[str, ...]]:
        out = {v.name: [] for v in self.variables}
        for parent, child in self.edges:
            out[parent].append(child)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    def children(self, name: str) -> tuple[str, ...]:
        self.variable(name)
        return self._children[name]

    def descendants(self, name: str) -> frozenset[str]:
        seen: set[str] = set()
        stack = list(self.children(name))
        while stack:
            node = stack.pop()
            if node not in seen:
                seen.add(node)
                stack.extend(self._children[node])
        return frozenset(seen)

    def ancestors(self, name: str) -> frozenset[str]:
        seen: set[str] = set()
        stack = list(self.parents(name))
        while stack:
            node = stack.pop()
            if node not in seen:
                seen.add(node)
                stack.extend(self.parents(node))
        return frozenset(seen)

    @property
    def joint_size(self) -> int:
        return math.prod(v.cardinality for v in self.variables)

    def replace_cpts(self, replacements: Mapping[str, Cpt]) -> "CausalModel":
        """New model with some CPTs swapped; edges are re-derived from parent lists."""
        cpts = [replacements.get(c.child, c) for c in self.cpts]
        edges = {(p, c.child) for c in cpts for p in c.parents}
        return build_model(self.variables, edges, cpts)

    def validate_assignment(self, assignment: Assignment) -> dict[str, int]:
        """Map ``{variable: state}`` to ``{variable: state index}``, checking both exist."""
        out = {}
        for name, state in assignment.items():
            out[name] = self.variable(name).index(state)
        return out

    @cached_property
    def joint(self) -> np.ndarray:
        """Full joint table, one axis per variable in declaration order."""
        size = self.joint_size
        if size > MAX_JOINT_STATES:
            raise ModelTooLargeError(
                f"joint has {size} states; exact inference is capped at {MAX_JOINT_STATES}"
            )
        ndim = len(self.variables)
        table = np.ones([v.cardinality for v in self.variables])
        for cpt in self.cpts:
            axes = [self._index[p] for p in cpt.parents] + [self._index[cpt.child]]
            dims = [self.variable(p).cardinality for p in cpt.parents]
            factor = cpt.as_array().reshape(dims + [-1])
            perm = np.argsort(axes)
            factor = factor.transpose(perm)
            shape = [1] * ndim
            for axis in axes:
                shape[axis] = table.shape[axis]
            table = table * factor.reshape(shape)
        table.setflags(write=False)
        return table


def _as_variable(v) -> Variable:
    if isinstance(v, Variable):
        return v
    name, states = v
    return Variable(name, tuple(states))


def topological_order(names: Iterable[str], edges: Iterable[tuple[str, str]]) -> tuple[str, ...]:
    """Kahn's algorithm with lexicographic tie-breaking; raises CycleError."""
    names = list(names)
    indeg = {n: 0 for n in names}
    children: dict[str, list[str]] = {n: [] for n in names}
    for parent, child in edges:
        children[parent].append(child)
        indeg[child] += 1
    heap = [n for n, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        node = heapq.heappop(heap)
        order.append(node)
        for child in children[node]:
            indeg[child] -= 1
            if indeg[child] == 0:
                heapq.heappush(heap, child)
    if len(order) < len(names):
        raise CycleError(_find_cycle({n for n in names if indeg[n] > 0}, children))
    return tuple(order)


def _find_cycle(remaining: set[str], children: dict[str, list[str]]) -> list[str]:
    # every remaining node has a predecessor inside `remaining`; walk back until a repeat
    parents = {n: [] for n in remaining}
    for node in remaining:
        for child in children[node]:
            if child in remaining:
                parents[child].append(node)
    node = min(remaining)
    seen: dict[str, int] = {}
    walk = []
    while node not in seen:
        seen[node] = len(walk)
        walk.append(node)
        node = min(parents[node])
    cycle = walk[seen[node]:]
    cycle.reverse()
    return cycle + [cycle[0]]


def build_model(variables, edges, cpts, *, atol: float = ROW_SUM_ATOL) -> CausalModel:
    """Validate and assemble a :class:`CausalModel`.

    ``variables`` holds :class:`Variable` objects or ``(name, states)`` pairs,
    ``edges`` holds ``(parent, child)`` pairs and ``cpts`` holds one :class:`Cpt`
    per variable (a mapping keyed by child is also accepted).
    """
    variables = tuple(_as_variable(v) for v in variables)
    by_name: dict[str, Variable] = {}
    for v in variables:
        if v.name in by_name:
            raise DuplicateVariableError(f"variable {v.name!r} declared twice")
        by_name[v.name] = v

    edge_set = set()
    for parent, child in edges:
        for end in (parent, child):
            if end not in by_name:
                raise UnknownVariableError(end, f"edge {parent} -> {child}")
        if parent == child:
            raise CycleError([parent, parent])
        edge_set.add((parent, child))
    order = topological_order(by_name, sorted(edge_set))

    if isinstance(cpts, Mapping):
        cpts = cpts.values()
    by_child: dict[str, Cpt] = {}
    for cpt in cpts:
        if cpt.child not in by_name:
            raise UnknownVariableError(cpt.child, "CPT child")
        if cpt.child in by_child:
            raise ModelError(f"variable {cpt.child!r} has more than one CPT")
        by_child[cpt.child] = cpt

    graph_parents: dict[str, set[str]] = {n: set() for n in by_name}
    for parent, child in edge_set:
        graph_parents[child].add(parent)

    for v in variables:
        cpt = by_child.get(v.name)
        if cpt is None:
            raise MissingCptError(f"variable {v.name!r} has no CPT")
        for p in cpt.parents:
            if p not in by_name:
                raise UnknownVariableError(p, f"parent in CPT of {v.name!r}")
        if len(set(cpt.parents)) != len(cpt.parents) or set(cpt.parents) != graph_parents[v.name]:
            raise ParentMismatchError(
                f"CPT of {v.name!r} lists parents {list(cpt.parents)} but the graph has "
                f"{sorted(graph_parents[v.name])}"
            )
        _check_table(cpt, v, [by_name[p] for p in cpt.parents], atol)

    return CausalModel(
        variables=variables,
        edges=frozenset(edge_set),
        cpts=tuple(by_child[v.name] for v in variables),
        order=order,
    )


def _check_table(cpt: Cpt, child: Variable, parents: list[Variable], atol: float):
    expected_rows = math.prod(p.cardinality for p in parents)
    if len(cpt.rows) != expected_rows:
        raise CptShapeError(
            f"CPT of {child.name!r} has {len(cpt.rows)} rows, expected {expected_rows}"
        )
    labels = parent_rows(parents)
    for r, row in enumerate(cpt.rows):
        if len(row) != child.cardinality:
            raise CptShapeError(
                f"CPT row {labels[r]} of {child.name!r} has {len(row)} entries, "
                f"expected {child.cardinality}"
            )
        for p in row:
            if not (0.0 <= p <= 1.0):
                raise ProbabilityRangeError(
                    f"CPT row {labels[r]} of {child.name!r} has entry {p!r} outside [0, 1]"
                )
        total = math.fsum(row)
        if abs(total - 1.0) > atol:
            raise NormalizationError(child.name, labels[r], total)


def _index_for(model: CausalModel, bound: Mapping[str, int]) -> tuple:
    return tuple(bound.get(v.name, slice(None)) for v in model.variables)


def joint_probability(model: CausalModel, assignment: Assignment) -> float:
    """Product of CPT entries for a full assignment."""
    idx = model.validate_assignment(assignment)
    missing = set(model.names) - set(idx)
    if missing:
        raise PartialAssignmentError(missing)
    prob = 1.0
    for cpt in model.cpts:
        parent_vars = [model.variable(p) for p in cpt.parents]
        row = 0
        for pv in parent_vars:
            row = row * pv.cardinality + idx[pv.name]
        prob *= cpt.rows[row][idx[cpt.child]]
    return prob


def _merge(event: Assignment, given: Assignment):
    merged = dict(given)
    for name, state in event.items():
        if merged.get(name, state) != state:
            return None
        merged[name] = state
    return merged


def marginal_probability(model: CausalModel, event: Assignment) -> float:
    """P(event), summing the joint over every completion of the partial assignment."""
    bound = model.validate_assignment(event)
    return float(model.joint[_index_for(model, bound)].sum())


def conditional_probability(model: CausalModel, event: Assignment, given: Assignment) -> float:
    """P(event | given); raises ZeroConditioningError when P(given) == 0."""
    model.validate_assignment(event)
    denom = marginal_probability(model, given)
    if denom == 0.0:
        raise ZeroConditioningError(given)
    merged = _merge(event, given)
    if merged is None:
        return 0.0
    return marginal_probability(model, merged) / denom
