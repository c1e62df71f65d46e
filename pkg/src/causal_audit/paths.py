"""Directed path enumeration and mediation classification.

A path from the protected variable to the classification is *mediated* when
the outcome variable is one of its interior nodes. The diagnostic fairness
check passes exactly when no unmediated path exists; it looks only at the
graph, never at CPT values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ModelError, PathExplosionError
from .model import CausalModel

PATH_CAP = 10**6


@dataclass(frozen=True)
class DirectedPath:
    nodes: tuple[str, ...]

    def __str__(self):
        return " -> ".join(self.nodes)

    def __contains__(self, node):
        return node in self.nodes

    def interior(self) -> tuple[str, ...]:
        return self.nodes[1:-1]


@dataclass(frozen=True)
class PathReport:
    source: str
    sink: str
    mediator: str
    mediated: tuple[DirectedPath, ...] = ()
    unmediated: tuple[DirectedPath, ...] = ()
    # reserved for an approximate enumeration mode; always False here
    truncated: bool = field(default=False)

    @property
    def all_paths(self) -> tuple[DirectedPath, ...]:
        return self.mediated + self.unmediated

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "sink": self.sink,
            "mediator": self.mediator,
            "mediated": [list(p.nodes) for p in self.mediated],
            "unmediated": [list(p.nodes) for p in self.unmediated],
            "truncated": self.truncated,
        }


def enumerate_directed_paths(
    model: CausalModel, source: str, sink: str, *, cap: int = PATH_CAP
) -> list[DirectedPath]:
    """All simple directed source->sink paths, depth-first with children in sorted order."""
    model.variable(source)
    model.variable(sink)
    if source == sink:
        raise ModelError("path source and sink must differ")
    # prune to nodes that can still reach the sink
    reaches = model.ancestors(sink) | {sink}
    if source not in reaches:
        return []

    found: list[DirectedPath] = []
    stack = [(source, (source,))]
    while stack:
        node, path = stack.pop()
        if node == sink:
            found.append(DirectedPath(path))
            if len(found) > cap:
                raise PathExplosionError(source, sink, cap)
            continue
        # reversed push keeps lexicographic child order on pop
        for child in reversed(model.children(node)):
            if child in reaches:
                stack.append((child, path + (child,)))
    return found


def classify_paths(
    model: CausalModel, source: str, sink: str, mediator: str, *, cap: int = PATH_CAP
) -> PathReport:
    model.variable(mediator)
    if mediator in (source, sink):
        raise ModelError("mediator must differ from source and sink")
    paths = enumerate_directed_paths(model, source, sink, cap=cap)
    return PathReport(
        source=source,
        sink=sink,
        mediator=mediator,
        mediated=tuple(p for p in paths if mediator in p.interior()),
        unmediated=tuple(p for p in paths if mediator not in p.interior()),
    )
