"""Entropy-family functionals on labelled finite-dimensional states.

All logarithms are base 2; every returned quantity is in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .linalg import (
    ContractError,
    Matrix,
    Rng,
    SubsystemShape,
    normalize_labels,
    partial_trace,
    require_hermitian,
)

#: Absolute eigenvalue floor below which 0*log(0) is taken as 0.
CLIP = 1e-12

#: Trace-norm mass outside the second argument's support that still counts
#: as "supported" in relative entropy.
SUPPORT_TOL = 1e-9

#: Tolerances for state validation.
STATE_HERM_TOL = 1e-10
STATE_EIG_SLACK = 1e-10
STATE_TRACE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive unit-trace Hermitian matrix over a named tensor factorisation."""

    mat: Matrix
    shape: SubsystemShape

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        if m.shape != (self.shape.dim, self.shape.dim):
            raise ValueError(
                f"matrix shape {m.shape} does not match ambient dimension {self.shape.dim}"
            )
        dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if dev > STATE_HERM_TOL:
            raise ContractError(f"state is not Hermitian (deviation {dev:.3e})")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > STATE_TRACE_TOL:
            raise ContractError(f"state trace {tr} is not 1")
        wmin = float(np.linalg.eigvalsh(m)[0])
        if wmin < -STATE_EIG_SLACK:
            raise ContractError(f"state has negative eigenvalue {wmin:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.shape.dim

    def marginal(self, keep: Iterable[str]) -> "DensityMatrix":
        kept = self.shape.require(keep)
        return DensityMatrix(partial_trace(self.mat, self.shape, kept), self.shape.reduced(kept))


def pure_density(vec: np.ndarray, shape: SubsystemShape) -> DensityMatrix:
    """Rank-one state from a unit vector."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector cannot define a state")
    v = v / n
    return DensityMatrix(np.outer(v, v.conj()), shape)


def maximally_mixed(shape: SubsystemShape) -> DensityMatrix:
    return DensityMatrix(np.eye(shape.dim) / shape.dim, shape)


def random_density(shape: SubsystemShape, rng: Rng) -> DensityMatrix:
    from .linalg import random_state

    return DensityMatrix(random_state(shape.dim, rng), shape)


def product_state(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Tensor product of states on disjoint label sets."""
    overlap = set(a.shape.labels) & set(b.shape.labels)
    if overlap:
        raise ValueError(f"label collision {sorted(overlap)} in product state")
    shape = SubsystemShape(a.shape.labels + b.shape.labels, a.shape.dims + b.shape.dims)
    return DensityMatrix(np.kron(a.mat, b.mat), shape)


def mix(states: Iterable[DensityMatrix], weights: Iterable[float]) -> DensityMatrix:
    """Convex combination of states on a common shape."""
    states = list(states)
    weights = [float(w) for w in weights]
    acc = np.zeros((states[0].dim, states[0].dim), dtype=complex)
    for w, s in zip(weights, states):
        if s.shape != states[0].shape:
            raise ValueError("mixed states must share one shape")
        acc += w * s.mat
    return DensityMatrix(acc, states[0].shape)


def _spectrum(mat: Matrix) -> np.ndarray:
    return np.linalg.eigvalsh(require_hermitian(mat, STATE_HERM_TOL))


def entropy_of_matrix(mat: Matrix) -> float:
    """Von Neumann entropy (bits) of a raw density matrix."""
    w = _spectrum(mat)
    w = w[w > CLIP]
    if w.size == 0:
        return 0.0
    return float(-np.sum(w * np.log2(w)))


def entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in bits; 0 for pure states, log2(d) at maximal mixing."""
    return entropy_of_matrix(rho.mat)


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Quantum relative entropy in bits, +inf outside the support condition.

    The support test accepts rho when the trace-norm mass of rho outside
    sigma's support is below ``SUPPORT_TOL``.
    """
    if rho.shape != sigma.shape:
        raise ValueError("relative entropy needs states on one shape")
    wr, ur = np.linalg.eigh(rho.mat)
    ws, us = np.linalg.eigh(sigma.mat)
    outside = us[:, ws <= CLIP]
    if outside.shape[1] > 0:
        block = outside.conj().T @ rho.mat @ outside
        if float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (block + block.conj().T))))) >= SUPPORT_TOL:
            return float("inf")
    keep_r = wr > CLIP
    keep_s = ws > CLIP
    wr_k = wr[keep_r]
    overlap = np.abs(ur[:, keep_r].conj().T @ us[:, keep_s]) ** 2
    h_rho = float(np.sum(wr_k * np.log2(wr_k)))
    cross = float(wr_k @ overlap @ np.log2(ws[keep_s]))
    return h_rho - cross


def mutual_information(omega: DensityMatrix, part_a, part_b) -> float:
    """I(A:B) = H(A) + H(B) - H(AB) for a bipartition of omega's labels."""
    a = omega.shape.require(normalize_labels(part_a))
    b = omega.shape.require(normalize_labels(part_b))
    if set(a) & set(b):
        raise ValueError("parts must be disjoint")
    if set(a) | set(b) != set(omega.shape.labels):
        raise ValueError("parts must cover all labels")
    return (
        entropy(omega.marginal(a))
        + entropy(omega.marginal(b))
        - entropy(omega)
    )


def cmi(omega: DensityMatrix, part_a, part_b, part_c=()) -> float:
    """Conditional mutual information I(A:B|C) = H(AC)+H(BC)-H(ABC)-H(C).

    An empty conditioning part reduces to plain mutual information.
    Nonnegative up to numerical noise by strong subadditivity.
    """
    a = omega.shape.require(normalize_labels(part_a))
    b = omega.shape.require(normalize_labels(part_b))
    c = omega.shape.require(normalize_labels(part_c)) if part_c else ()
    groups = [set(a), set(b), set(c)]
    for i in range(3):
        for j in range(i + 1, 3):
            if groups[i] & groups[j]:
                raise ValueError("parts must be pairwise disjoint")
    if set(a) | set(b) | set(c) != set(omega.shape.labels):
        raise ValueError("parts must cover all labels")
    h_ac = entropy(omega.marginal(a + c))
    h_bc = entropy(omega.marginal(b + c))
    h_abc = entropy(omega)
    h_c = entropy(omega.marginal(c)) if c else 0.0
    return h_ac + h_bc - h_abc - h_c


def h2(t: float) -> float:
    """Binary entropy in bits."""
    t = float(t)
    if t < 0.0 or t > 1.0:
        raise ValueError(f"h2 argument {t} outside [0, 1]")
    out = 0.0
    if t > 0.0:
        out -= t * np.log2(t)
    if t < 1.0:
        out -= (1.0 - t) * np.log2(1.0 - t)
    return float(out)


def g(eps: float) -> float:
    """Calibration term (1+eps)*h2(eps/(1+eps)), nondecreasing in eps."""
    eps = float(eps)
    if eps < 0.0:
        raise ValueError(f"g argument {eps} must be >= 0")
    if eps == 0.0:
        return 0.0
    return float((1.0 + eps) * np.log2(1.0 + eps) - eps * np.log2(eps))
