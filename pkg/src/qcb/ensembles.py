"""Finite ensembles of states, the Holevo quantity, and the classical-register
embedding of an ensemble into a bipartite state."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .entropic import DensityMatrix, entropy, maximally_mixed
from .linalg import Rng, SubsystemShape, tensor, trace_norm

PROB_TOL = 1e-10

_REGISTER_CANDIDATES = "XYZKRSTUVW"


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Probability-weighted list of states on one common shape.

    Zero-probability items are legal and kept, so compared ensembles can
    share a fixed length.
    """

    items: tuple[tuple[float, DensityMatrix], ...]

    def __post_init__(self):
        items = tuple((float(p), s) for p, s in self.items)
        if not items:
            raise ValueError("ensemble must contain at least one item")
        if any(p < -PROB_TOL for p, _ in items):
            raise ValueError("ensemble probabilities must be >= 0")
        total = sum(p for p, _ in items)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"ensemble probabilities sum to {total}, not 1")
        shape = items[0][1].shape
        if any(s.shape != shape for _, s in items):
            raise ValueError("ensemble states must share one shape")
        object.__setattr__(self, "items", items)

    @property
    def m(self) -> int:
        return len(self.items)

    @property
    def shape(self) -> SubsystemShape:
        return self.items[0][1].shape

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(p for p, _ in self.items)

    @property
    def states(self) -> tuple[DensityMatrix, ...]:
        return tuple(s for _, s in self.items)


def ensemble(pairs: Iterable[tuple[float, DensityMatrix]]) -> Ensemble:
    return Ensemble(tuple(pairs))


def uniform_ensemble(states: Sequence[DensityMatrix]) -> Ensemble:
    m = len(states)
    return Ensemble(tuple((1.0 / m, s) for s in states))


def average_state(e: Ensemble) -> DensityMatrix:
    acc = np.zeros((e.shape.dim, e.shape.dim), dtype=complex)
    for p, s in e.items:
        acc += p * s.mat
    return DensityMatrix(acc, e.shape)


def holevo_quantity(e: Ensemble) -> float:
    """H(average) - sum_i p_i H(rho_i), in bits."""
    avg = average_state(e)
    return entropy(avg) - sum(p * entropy(s) for p, s in e.items)


def _register_label(shape: SubsystemShape) -> str:
    for cand in _REGISTER_CANDIDATES:
        if cand not in shape.labels:
            return cand
    i = 0
    while f"reg{i}" in shape.labels:
        i += 1
    return f"reg{i}"


def qc_state(e: Ensemble, register: str | None = None) -> DensityMatrix:
    """Block state sum_i p_i rho_i (x) |i><i| with an m-dimensional classical
    register appended after the ensemble's own labels.

    The register basis is the computational basis in ensemble order, which
    keeps the construction deterministic.
    """
    reg = register or _register_label(e.shape)
    if reg in e.shape.labels:
        raise ValueError(f"register label {reg!r} collides with state labels")
    m = e.m
    d = e.shape.dim
    acc = np.zeros((d * m, d * m), dtype=complex)
    for i, (p, s) in enumerate(e.items):
        flag = np.zeros((m, m))
        flag[i, i] = 1.0
        acc += p * tensor(s.mat, flag)
    shape = SubsystemShape(e.shape.labels + (reg,), e.shape.dims + (m,))
    return DensityMatrix(acc, shape)


def ensemble_distance(e: Ensemble, f: Ensemble) -> float:
    """(1/2) sum_i ||p_i rho_i - q_i sigma_i||_1; the shorter ensemble is
    padded with zero-probability filler states."""
    if e.shape != f.shape:
        raise ValueError("ensembles must share one state shape")
    m = max(e.m, f.m)
    filler = maximally_mixed(e.shape)
    ei = list(e.items) + [(0.0, filler)] * (m - e.m)
    fi = list(f.items) + [(0.0, filler)] * (m - f.m)
    total = 0.0
    for (p, s), (q, t) in zip(ei, fi):
        total += trace_norm(p * s.mat - q * t.mat)
    return 0.5 * total


def random_ensemble(shape: SubsystemShape, m: int, rng: Rng) -> Ensemble:
    """Random ensemble: uniform-simplex probabilities over Ginibre states."""
    from .entropic import random_density

    probs = rng.simplex(m)
    return Ensemble(tuple((float(p), random_density(shape, rng)) for p in probs))
