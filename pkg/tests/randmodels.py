"""Random model generators and pure-Python reference oracles for the tests.

The oracles deliberately avoid the library's inference code: they tabulate
the joint as a dict over ``itertools.product`` of state names and apply
interventions by truncated factorization.
"""

from __future__ import annotations

import itertools
import math
import random

from causal_audit.model import Cpt, build_model


def random_dag(rng: random.Random, n: int, edge_prob: float = 0.5):
    """Variable names in a random topological order plus a random edge set."""
    names = [f"V{i}" for i in range(n)]
    rng.shuffle(names)
    edges = {
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < edge_prob
    }
    return names, edges


def random_row(rng: random.Random, k: int) -> tuple[float, ...]:
    w = [rng.random() + 1e-3 for _ in range(k)]
    s = math.fsum(w)
    row = [x / s for x in w]
    row[-1] = 1.0 - math.fsum(row[:-1])
    return tuple(row)


def random_cpts(rng, names, edges, cards):
    cpts = []
    for child in names:
        parents = tuple(p for p in names if (p, child) in edges)
        n_rows = math.prod(cards[p] for p in parents)
        cpts.append(Cpt(child, parents, tuple(random_row(rng, cards[child]) for _ in range(n_rows))))
    return cpts


def random_model(rng: random.Random, n: int | None = None, max_states: int = 3, edge_prob: float = 0.5):
    n = n if n is not None else rng.randint(2, 5)
    names, edges = random_dag(rng, n, edge_prob)
    return model_on(rng, names, edges, max_states)


def model_on(rng: random.Random, names, edges, max_states: int = 3):
    """Random state spaces and CPTs on a fixed DAG (``names`` in topological order)."""
    cards = {v: rng.randint(2, max_states) for v in names}
    variables = [(v, tuple(f"s{k}" for k in range(cards[v]))) for v in sorted(names)]
    return build_model(variables, edges, random_cpts(rng, names, edges, cards))


def reparameterize(rng: random.Random, model):
    """Same graph and state spaces, fresh random CPTs."""
    fresh = {
        c.child: Cpt(c.child, c.parents, tuple(random_row(rng, len(r)) for r in c.rows))
        for c in model.cpts
    }
    return model.replace_cpts(fresh)


# -- oracles -------------------------------------------------------------------


def _entry(model, cpt, assignment):
    child = model.variable(cpt.child)
    row = 0
    for p in cpt.parents:
        pv = model.variable(p)
        row = row * pv.cardinality + pv.states.index(assignment[p])
    return cpt.rows[row][child.states.index(assignment[cpt.child])]


def oracle_joint(model, do=None):
    """Full joint as {tuple of states in declaration order: probability}.

    With ``do``, intervened factors are dropped and inconsistent rows get 0
    (truncated factorization).
    """
    do = dict(do or {})
    names = [v.name for v in model.variables]
    table = {}
    for combo in itertools.product(*(v.states for v in model.variables)):
        a = dict(zip(names, combo))
        if any(a[k] != s for k, s in do.items()):
            table[combo] = 0.0
            continue
        p = 1.0
        for cpt in model.cpts:
            if cpt.child not in do:
                p *= _entry(model, cpt, a)
        table[combo] = p
    return table


def oracle_probability(model, event, do=None) -> float:
    names = [v.name for v in model.variables]
    total = 0.0
    for combo, p in oracle_joint(model, do).items():
        a = dict(zip(names, combo))
        if all(a[k] == s for k, s in event.items()):
            total += p
    return total


def oracle_paths(model, source, sink):
    """Directed simple paths by filtering every ordering of every node subset."""
    return graph_paths([v.name for v in model.variables], model.edges, source, sink)


def graph_paths(names, edges, source, sink):
    others = [n for n in names if n not in (source, sink)]
    found = set()
    for r in range(len(others) + 1):
        for middle in itertools.permutations(others, r):
            nodes = (source, *middle, sink)
            if all((a, b) in edges for a, b in zip(nodes, nodes[1:])):
                found.add(nodes)
    return found
