"""Interventions on causal models.

``apply_do`` performs graph surgery: every intervened variable loses its
incoming edges and its CPT becomes a point mass on the assigned state. Joint
interventions are applied in one surgery, so their order cannot matter.

``apply_mechanism_intervention`` swaps one CPT for another of identical shape,
which models a group characteristic carried by a causal coefficient rather
than by a node.

``sample`` draws ancestral samples. Output is split into fixed-size chunks,
each seeded from ``numpy.random.SeedSequence(seed).spawn``; chunk ``i`` always
receives the same child seed, so results do not depend on how many worker
threads produced them or in which order they finished.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ModelError, ShapeMismatchError
from .model import Assignment, CausalModel, Cpt, marginal_probability

#: Generator used for sampling. Bit streams are stable under numpy's
#: compatibility policy for PCG64 + SeedSequence.
RNG_NAME = "numpy.PCG64/SeedSequence"
RNG_VERSION = 1
DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class Intervention:
    assignments: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "assignments", dict(self.assignments))
        if not self.assignments:
            raise ModelError("an intervention must fix at least one variable")

    def validate(self, model: CausalModel):
        model.validate_assignment(self.assignments)

    def __str__(self):
        return " & ".join(f"do({k}={v})" for k, v in self.assignments.items())


@dataclass(frozen=True)
class MechanismIntervention:
    target: str
    replacement: Cpt


def _as_intervention(intervention) -> Intervention:
    if isinstance(intervention, Intervention):
        return intervention
    return Intervention(intervention)


def point_mass(model: CausalModel, name: str, state: str) -> Cpt:
    var = model.variable(name)
    k = var.index(state)
    return Cpt(name, (), ((tuple(1.0 if i == k else 0.0 for i in range(var.cardinality))),))


def apply_do(model: CausalModel, intervention) -> CausalModel:
    """Surgered copy of ``model`` with each intervened variable cut and fixed."""
    intervention = _as_intervention(intervention)
    intervention.validate(model)
    fixed = {
        name: point_mass(model, name, state)
        for name, state in intervention.assignments.items()
    }
    return model.replace_cpts(fixed)


def interventional_probability(model: CausalModel, event: Assignment, intervention) -> float:
    """P(event | do(intervention)) by enumeration on the surgered model."""
    return marginal_probability(apply_do(model, intervention), event)


def apply_mechanism_intervention(model: CausalModel, mech: MechanismIntervention) -> CausalModel:
    current = model.cpt(mech.target)
    new = mech.replacement
    if new.child != mech.target:
        raise ShapeMismatchError(
            f"replacement CPT is for {new.child!r}, intervention targets {mech.target!r}"
        )
    if new.parents != current.parents:
        raise ShapeMismatchError(
            f"replacement CPT for {mech.target!r} has parents {list(new.parents)}, "
            f"expected {list(current.parents)}"
        )
    if len(new.rows) != len(current.rows) or any(
        len(a) != len(b) for a, b in zip(new.rows, current.rows)
    ):
        raise ShapeMismatchError(f"replacement CPT for {mech.target!r} has the wrong shape")
    return model.replace_cpts({mech.target: new})


def _sample_chunk(model: CausalModel, seed_seq: np.random.SeedSequence, n: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    index = {v.name: i for i, v in enumerate(model.variables)}
    out = np.zeros((n, len(model.variables)), dtype=np.int64)
    for name in model.order:
        cpt = model.cpt(name)
        table = np.cumsum(cpt.as_array(), axis=1)
        row = np.zeros(n, dtype=np.int64)
        for p in cpt.parents:
            row = row * model.variable(p).cardinality + out[:, index[p]]
        u = rng.random(n)
        picked = (u[:, None] >= table[row]).sum(axis=1)
        out[:, index[name]] = np.minimum(picked, table.shape[1] - 1)
    return out


def sample_indices(
    model: CausalModel,
    seed: int,
    n: int,
    *,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> np.ndarray:
    """``(n, len(model.variables))`` array of state indices, columns in declaration order."""
    if n < 1:
        raise ValueError("n must be at least 1")
    sizes = [chunk_size] * (n // chunk_size)
    if n % chunk_size:
        sizes.append(n % chunk_size)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(seeds, sizes))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda job: _sample_chunk(model, *job), jobs))
    else:
        chunks = [_sample_chunk(model, s, k) for s, k in jobs]
    return np.concatenate(chunks, axis=0)


def sample(model: CausalModel, seed: int, n: int, **kwargs) -> list[dict[str, str]]:
    """``n`` ancestral samples as full assignments; bit-identical for equal (seed, model, n)."""
    idx = sample_indices(model, seed, n, **kwargs)
    names = [v.name for v in model.variables]
    states = [v.states for v in model.variables]
    return [
        {name: st[i] for name, st, i in zip(names, states, row)}
        for row in idx.tolist()
    ]


def event_frequency(model: CausalModel, samples: np.ndarray, event: Assignment) -> float:
    """Fraction of rows of a :func:`sample_indices` array that satisfy ``event``."""
    bound = model.validate_assignment(event)
    mask = np.ones(len(samples), dtype=bool)
    for i, v in enumerate(model.variables):
        if v.name in bound:
            mask &= samples[:, i] == bound[v.name]
    return float(mask.mean())

