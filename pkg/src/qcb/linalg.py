"""Dense complex-matrix substrate: named tensor factors, spectral utilities,
and seeded random generators.

All operators are plain ``numpy`` arrays; multipartite structure is carried
separately by :class:`SubsystemShape`.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: Hard ceiling on ambient dimensions produced by tensor growth.
DIM_CAP = 4096

#: Relative eigenvalue cutoff for rank/support decisions.
RANK_TOL = 1e-9

#: Largest entry of |m - m^H| accepted as Hermitian.
HERM_TOL = 1e-10

Matrix = np.ndarray


class ContractError(ValueError):
    """An operator-valued input violates a documented precondition."""


class SizeError(ValueError):
    """An operation would exceed the ambient dimension cap."""


def _as_square(m: Matrix) -> Matrix:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def require_hermitian(m: Matrix, tol: float = HERM_TOL) -> Matrix:
    """Return the Hermitian part of ``m``; reject clearly non-Hermitian input."""
    m = _as_square(m)
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise ContractError(f"matrix is not Hermitian (deviation {dev:.3e} > {tol:.1e})")
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class SubsystemShape:
    """Ordered, named tensor factorisation of an ambient space."""

    labels: tuple[str, ...]
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.labels) != len(self.dims):
            raise ValueError("labels and dims must have equal length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate subsystem labels in {self.labels}")
        if any(d < 1 for d in self.dims):
            raise ValueError("subsystem dimensions must be >= 1")
        if self.dim > DIM_CAP:
            raise SizeError(f"ambient dimension {self.dim} exceeds cap {DIM_CAP}")

    @classmethod
    def of(cls, **dims: int) -> "SubsystemShape":
        """Shorthand: ``SubsystemShape.of(A=2, B=3)``."""
        return cls(tuple(dims.keys()), tuple(dims.values()))

    @property
    def dim(self) -> int:
        out = 1
        for d in self.dims:
            out *= d
        return out

    def require(self, labels: Iterable[str]) -> tuple[str, ...]:
        """Validate a label collection, returning it in canonical shape order."""
        wanted = set(normalize_labels(labels))
        unknown = wanted - set(self.labels)
        if unknown:
            raise ValueError(f"unknown subsystem labels {sorted(unknown)}; have {self.labels}")
        return tuple(l for l in self.labels if l in wanted)

    def dims_of(self, labels: Iterable[str]) -> tuple[int, ...]:
        order = self.require(labels)
        return tuple(self.dims[self.labels.index(l)] for l in order)

    def dim_of(self, labels: Iterable[str]) -> int:
        out = 1
        for d in self.dims_of(labels):
            out *= d
        return out

    def complement(self, labels: Iterable[str]) -> tuple[str, ...]:
        kept = set(self.require(labels))
        return tuple(l for l in self.labels if l not in kept)

    def reduced(self, keep: Iterable[str]) -> "SubsystemShape":
        order = self.require(keep)
        return SubsystemShape(order, self.dims_of(order))


def normalize_labels(labels) -> tuple[str, ...]:
    """Accept a single label or an iterable of labels."""
    if isinstance(labels, str):
        return (labels,)
    return tuple(labels)


def tensor(a: Matrix, b: Matrix, cap: int = DIM_CAP) -> Matrix:
    """Kronecker product with an ambient-size guard."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] * b.shape[0] > cap or a.shape[-1] * b.shape[-1] > cap:
        raise SizeError(
            f"tensor product of {a.shape} and {b.shape} exceeds dimension cap {cap}"
        )
    return np.kron(a, b)


_LETTERS = string.ascii_lowercase + string.ascii_uppercase


def partial_trace(m: Matrix, shape: SubsystemShape, keep: Iterable[str]) -> Matrix:
    """Trace out all factors of ``m`` not listed in ``keep``.

    The result is ordered by the kept labels' positions in ``shape``.
    """
    m = _as_square(m)
    if m.shape[0] != shape.dim:
        raise ValueError(f"matrix dim {m.shape[0]} does not match shape dim {shape.dim}")
    kept = shape.require(keep)
    n = len(shape.labels)
    if 2 * n > len(_LETTERS):
        raise SizeError("too many subsystem factors for partial trace")
    row = list(_LETTERS[:n])
    col = []
    out_row, out_col = [], []
    next_free = n
    for i, label in enumerate(shape.labels):
        if label in kept:
            col.append(_LETTERS[next_free])
            out_row.append(row[i])
            out_col.append(_LETTERS[next_free])
            next_free += 1
        else:
            col.append(row[i])
    t = m.reshape(shape.dims + shape.dims)
    sub = "".join(row) + "".join(col) + "->" + "".join(out_row) + "".join(out_col)
    out = np.einsum(sub, t)
    dk = shape.dim_of(kept)
    return out.reshape(dk, dk)


def reorder(m: Matrix, shape: SubsystemShape, new_labels: Sequence[str]) -> Matrix:
    """Permute tensor factors of ``m`` into the order given by ``new_labels``."""
    m = _as_square(m)
    new_labels = tuple(new_labels)
    if sorted(new_labels) != sorted(shape.labels):
        raise ValueError(f"{new_labels} is not a permutation of {shape.labels}")
    n = len(shape.labels)
    perm = [shape.labels.index(l) for l in new_labels]
    t = m.reshape(shape.dims + shape.dims)
    t = np.transpose(t, perm + [n + p for p in perm])
    return t.reshape(shape.dim, shape.dim)


def hermitian_eig(m: Matrix, tol: float = HERM_TOL) -> tuple[np.ndarray, Matrix]:
    """Spectral decomposition of a Hermitian matrix.

    Returns eigenvalues in descending order and the matching unitary of
    column eigenvectors, so that ``m == u @ diag(w) @ u.conj().T``.
    """
    h = require_hermitian(m, tol)
    w, u = np.linalg.eigh(h)
    return w[::-1].copy(), u[:, ::-1].copy()


def eigvalsh_desc(m: Matrix, tol: float = HERM_TOL) -> np.ndarray:
    """Eigenvalues only, descending."""
    h = require_hermitian(m, tol)
    return np.linalg.eigvalsh(h)[::-1].copy()


def trace_norm(m: Matrix) -> float:
    """Sum of singular values."""
    m = np.asarray(m, dtype=complex)
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def operator_norm(m: Matrix) -> float:
    """Largest singular value."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def positive_part(m: Matrix, tol: float = HERM_TOL) -> Matrix:
    """Spectral positive part [m]_+ of a Hermitian matrix."""
    w, u = hermitian_eig(m, tol)
    wp = np.clip(w, 0.0, None)
    out = (u * wp) @ u.conj().T
    return 0.5 * (out + out.conj().T)


def support_dim(operators: Sequence[Matrix], tol: float = RANK_TOL) -> int:
    """Dimension of the smallest subspace containing every operator's support.

    Computed as the numerical rank of the sum; eigenvalues above
    ``tol * max_eigenvalue`` are counted.
    """
    ops = list(operators)
    if not ops:
        raise ValueError("support_dim needs at least one operator")
    total = require_hermitian(ops[0])
    for op in ops[1:]:
        h = require_hermitian(op)
        if h.shape != total.shape:
            raise ValueError("operators must share one size")
        total = total + h
    w = np.linalg.eigvalsh(total)
    wmax = float(w[-1])
    if wmax <= 0.0:
        return 0
    return int(np.sum(w > tol * wmax))


class Rng:
    """Deterministic random stream with derivable child streams.

    A given ``(seed, key)`` pair always reproduces the same sequence;
    ``child(i)`` yields an independent stream so parallel trials never
    share generator state.
    """

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def child(self, index: int) -> "Rng":
        return Rng(self.seed, self.key + (int(index),))

    def normal(self, size=None) -> np.ndarray:
        return self._gen.standard_normal(size)

    def complex_matrix(self, rows: int, cols: int) -> Matrix:
        re = self._gen.standard_normal((rows, cols))
        im = self._gen.standard_normal((rows, cols))
        return (re + 1j * im) / np.sqrt(2.0)

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in [low, high)."""
        return int(self._gen.integers(low, high))

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        return float(self._gen.uniform(low, high))

    def simplex(self, m: int) -> np.ndarray:
        """Uniform point on the probability simplex."""
        e = -np.log(self._gen.uniform(size=m))
        return e / e.sum()


def random_state(dim: int, rng: Rng) -> Matrix:
    """Random density matrix from the normalized Ginibre ensemble."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    g = rng.complex_matrix(dim, dim)
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def random_pure(dim: int, rng: Rng) -> np.ndarray:
    """Haar-random unit vector."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    v = rng.complex_matrix(dim, 1)[:, 0]
    return v / np.linalg.norm(v)


def random_isometry(din: int, dout: int, rng: Rng) -> Matrix:
    """Random isometry (dout x din) from the QR of a Gaussian matrix."""
    if dout < din:
        raise ValueError(f"isometry needs dout >= din, got {dout} < {din}")
    g = rng.complex_matrix(dout, din)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    phase = d / np.where(np.abs(d) > 0, np.abs(d), 1.0)
    return q * phase.conj()
