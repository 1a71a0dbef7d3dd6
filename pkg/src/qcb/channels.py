"""Completely positive trace-preserving maps in Kraus, Stinespring and Choi
form, complementary channels, the erasure family, and application to
subsystems of multipartite states.

Channel files are JSON with fields ``din``, ``dout`` and ``kraus``, the
latter a list of dout x din matrices whose entries are ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .entropic import DensityMatrix
from .linalg import (
    ContractError,
    Matrix,
    RANK_TOL,
    Rng,
    SubsystemShape,
    partial_trace,
    random_isometry,
    require_hermitian,
)

#: Completeness tolerance for constructed channels.
KRAUS_ATOL = 1e-9

#: Looser completeness tolerance accepted from channel files.
FILE_ATOL = 1e-6


class ChannelFileError(ValueError):
    """Channel file rejected; carries line/column diagnostics when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


def _kraus_to_choi(kraus: Sequence[Matrix], din: int, dout: int) -> Matrix:
    """Choi matrix J = (channel (x) id) applied to the unnormalized maximally
    entangled state, living on the output (x) input product space."""
    j = np.zeros((dout * din, dout * din), dtype=complex)
    for k in kraus:
        v = np.asarray(k, dtype=complex).reshape(-1)
        j += np.outer(v, v.conj())
    return 0.5 * (j + j.conj().T)


def _choi_to_minimal_kraus(choi: Matrix, din: int, dout: int, tol: float = RANK_TOL) -> list[Matrix]:
    w, u = np.linalg.eigh(require_hermitian(choi))
    wmax = max(float(w[-1]), 0.0)
    kraus = []
    for i in range(len(w) - 1, -1, -1):
        if w[i] > tol * wmax and w[i] > 0.0:
            kraus.append(np.sqrt(w[i]) * u[:, i].reshape(dout, din))
    if not kraus:
        raise ContractError("channel has numerically zero Choi matrix")
    return kraus


class Channel:
    """CPTP map stored as a minimal Kraus list with eagerly cached
    Stinespring isometry and Choi matrix. Immutable after construction."""

    def __init__(self, kraus: Sequence[Matrix], *, atol: float = KRAUS_ATOL):
        kraus = [np.asarray(k, dtype=complex) for k in kraus]
        if not kraus:
            raise ValueError("channel needs at least one Kraus operator")
        dout, din = kraus[0].shape
        if any(k.shape != (dout, din) for k in kraus):
            raise ValueError("Kraus operators must share one shape")
        comp = sum(k.conj().T @ k for k in kraus)
        dev = float(np.max(np.abs(comp - np.eye(din))))
        if dev > atol:
            raise ContractError(
                f"Kraus list is not trace preserving (completeness residual {dev:.3e})"
            )
        self.din = din
        self.dout = dout
        self.choi = _kraus_to_choi(kraus, din, dout)
        self.kraus = tuple(_choi_to_minimal_kraus(self.choi, din, dout))
        self.denv = len(self.kraus)
        # V = sum_i K_i (x) |i>_E, rows indexed by (output, environment).
        t = np.stack(self.kraus, axis=1)  # (dout, denv, din)
        self.stinespring = t.reshape(dout * self.denv, din)
        self.choi.setflags(write=False)
        self.stinespring.setflags(write=False)

    def apply_matrix(self, mat: Matrix) -> Matrix:
        out = np.zeros((self.dout, self.dout), dtype=complex)
        m = np.asarray(mat, dtype=complex)
        for k in self.kraus:
            out += k @ m @ k.conj().T
        return out

    def adjoint_apply(self, mat: Matrix) -> Matrix:
        """Heisenberg-picture action sum_i K_i^H Y K_i."""
        out = np.zeros((self.din, self.din), dtype=complex)
        m = np.asarray(mat, dtype=complex)
        for k in self.kraus:
            out += k.conj().T @ m @ k
        return out

    def __repr__(self) -> str:
        return f"Channel(din={self.din}, dout={self.dout}, denv={self.denv})"


def from_kraus(kraus: Sequence[Matrix], *, atol: float = KRAUS_ATOL) -> Channel:
    return Channel(kraus, atol=atol)


def identity_channel(d: int) -> Channel:
    return Channel([np.eye(d)])


def unitary_channel(u: Matrix) -> Channel:
    return Channel([np.asarray(u, dtype=complex)])


def completely_depolarizing(d: int) -> Channel:
    """rho -> Tr(rho) I/d."""
    kraus = []
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[i, j] = 1.0 / np.sqrt(d)
            kraus.append(k)
    return Channel(kraus)


def stinespring(ch: Channel) -> Matrix:
    """Isometry V with channel(rho) = Tr_env V rho V^H."""
    return ch.stinespring


def choi(ch: Channel) -> Matrix:
    return ch.choi


def stinespring_apply(v: Matrix, dout: int, denv: int, mat: Matrix) -> Matrix:
    """Tr_env of V mat V^H for an isometry with (output, env) row blocks."""
    big = v @ np.asarray(mat, dtype=complex) @ v.conj().T
    t = big.reshape(dout, denv, dout, denv)
    return np.einsum("aebe->ab", t)


def stinespring_env_apply(v: Matrix, dout: int, denv: int, mat: Matrix) -> Matrix:
    """Environment marginal Tr_out of V mat V^H."""
    big = v @ np.asarray(mat, dtype=complex) @ v.conj().T
    t = big.reshape(dout, denv, dout, denv)
    return np.einsum("aeaf->ef", t)


def complementary(ch: Channel) -> Channel:
    """Environment-side channel of the same dilation."""
    t = np.stack(ch.kraus, axis=1)  # (dout, denv, din)
    return Channel([t[b] for b in range(ch.dout)])


def complementary_pair(phi: "Channel", psi: "Channel") -> tuple["Channel", "Channel"]:
    """Complementary channels taken from one common dilation pair.

    A complement is only fixed up to a rotation of its environment output;
    distance statements about complementary pairs need both outputs in one
    shared basis, which this construction provides.
    """
    rep = pair_common_rep(phi, psi)
    ta = rep.vphi.reshape(rep.dout, rep.denv, rep.din)
    tb = rep.vpsi.reshape(rep.dout, rep.denv, rep.din)
    return (
        Channel([ta[b] for b in range(rep.dout)]),
        Channel([tb[b] for b in range(rep.dout)]),
    )


def apply(ch: Channel, rho: DensityMatrix, out_label: str | None = None) -> DensityMatrix:
    """Apply the channel to a whole state; the output carries a single label."""
    if rho.dim != ch.din:
        raise ValueError(f"state dim {rho.dim} does not match channel input {ch.din}")
    if out_label is None:
        out_label = rho.shape.labels[0] if len(rho.shape.labels) == 1 else "B"
    out = ch.apply_matrix(rho.mat)
    return DensityMatrix(out, SubsystemShape((out_label,), (ch.dout,)))


def apply_on(ch: Channel, rho: DensityMatrix, target: str) -> DensityMatrix:
    """Apply the channel to one named factor, acting as identity elsewhere."""
    labels = rho.shape.labels
    if target not in labels:
        raise ValueError(f"unknown target label {target!r}")
    pos = labels.index(target)
    if rho.shape.dims[pos] != ch.din:
        raise ValueError(
            f"target {target!r} has dim {rho.shape.dims[pos]}, channel input is {ch.din}"
        )
    dpre = 1
    for d in rho.shape.dims[:pos]:
        dpre *= d
    dpost = 1
    for d in rho.shape.dims[pos + 1:]:
        dpost *= d
    ipre = np.eye(dpre)
    ipost = np.eye(dpost)
    out_dim = dpre * ch.dout * dpost
    out = np.zeros((out_dim, out_dim), dtype=complex)
    for k in ch.kraus:
        lifted = np.kron(ipre, np.kron(k, ipost))
        out += lifted @ rho.mat @ lifted.conj().T
    dims = list(rho.shape.dims)
    dims[pos] = ch.dout
    return DensityMatrix(out, SubsystemShape(labels, tuple(dims)))


@dataclass(frozen=True, eq=False)
class ChannelPairRep:
    """Two Stinespring isometries into one common output (x) environment space."""

    vphi: Matrix
    vpsi: Matrix
    din: int
    dout: int
    denv: int


def _pad_env(ch: Channel, denv: int) -> Matrix:
    """Embed the environment into a larger one by appending zero Kraus slots."""
    t = np.stack(ch.kraus, axis=1)  # (dout, denv_old, din)
    if denv < ch.denv:
        raise ValueError("cannot shrink environment")
    padded = np.zeros((ch.dout, denv, ch.din), dtype=complex)
    padded[:, : ch.denv, :] = t
    return padded.reshape(ch.dout * denv, ch.din)


def pair_common_rep(phi: Channel, psi: Channel) -> ChannelPairRep:
    """Common-environment Stinespring pair; the smaller environment is
    zero-padded, which leaves both channel actions untouched."""
    if (phi.din, phi.dout) != (psi.din, psi.dout):
        raise ValueError("channels must share input and output dimensions")
    denv = max(phi.denv, psi.denv)
    return ChannelPairRep(
        vphi=_pad_env(phi, denv),
        vpsi=_pad_env(psi, denv),
        din=phi.din,
        dout=phi.dout,
        denv=denv,
    )


def erasure_channel(d: int, p: float) -> Channel:
    """Erasure family: keeps the input with probability 1-p, otherwise emits
    an orthogonal flag state; output dimension is d+1."""
    if d < 1:
        raise ValueError("input dimension must be >= 1")
    p = float(p)
    if p < 0.0 or p > 1.0:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    kraus = []
    keep = np.zeros((d + 1, d), dtype=complex)
    keep[:d, :] = np.eye(d)
    if 1.0 - p > 0.0:
        kraus.append(np.sqrt(1.0 - p) * keep)
    for i in range(d):
        if p > 0.0:
            k = np.zeros((d + 1, d), dtype=complex)
            k[d, i] = np.sqrt(p)
            kraus.append(k)
    return Channel(kraus)


def erasure_stinespring(d: int, p: float) -> Matrix:
    """Explicit dilation isometry for the erasure channel with output and
    environment both of dimension d+1 (input space plus flag)."""
    if d < 1:
        raise ValueError("input dimension must be >= 1")
    p = float(p)
    if p < 0.0 or p > 1.0:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    db = d + 1
    v = np.zeros((db * db, d), dtype=complex)
    for a in range(d):
        v[a * db + d, a] = np.sqrt(1.0 - p)   # |a>_B (x) |flag>_E
        v[d * db + a, a] = np.sqrt(p)         # |flag>_B (x) |a>_E
    return v


def random_channel(din: int, dout: int, denv: int, rng: Rng) -> Channel:
    """Random channel from a Haar-ish isometry into output (x) environment."""
    v = random_isometry(din, dout * denv, rng)
    t = v.reshape(dout, denv, din)
    return Channel([t[:, e, :] for e in range(denv)])


def choi_trace_input(ch: Channel) -> Matrix:
    """Partial trace of the Choi matrix over the output; equals the identity
    exactly when the channel is trace preserving."""
    shape = SubsystemShape(("out", "in"), (ch.dout, ch.din))
    return partial_trace(ch.choi, shape, ("in",))


def save_channel(ch: Channel, path: str) -> None:
    data = {
        "din": ch.din,
        "dout": ch.dout,
        "kraus": [
            [[[float(z.real), float(z.imag)] for z in row] for row in k]
            for k in ch.kraus
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def parse_channel(text: str) -> Channel:
    """Parse the JSON channel format, rejecting files whose Kraus list has a
    completeness residual above ``FILE_ATOL``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelFileError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(data, dict):
        raise ChannelFileError("channel file must contain a JSON object")
    for field in ("din", "dout", "kraus"):
        if field not in data:
            raise ChannelFileError(f"missing field {field!r}")
    din, dout = int(data["din"]), int(data["dout"])
    if din < 1 or dout < 1:
        raise ChannelFileError("din and dout must be >= 1")
    raw = data["kraus"]
    if not isinstance(raw, list) or not raw:
        raise ChannelFileError("kraus must be a non-empty list")
    kraus = []
    for idx, mat in enumerate(raw):
        arr = np.asarray(mat, dtype=float)
        if arr.shape != (dout, din, 2):
            raise ChannelFileError(
                f"kraus[{idx}] has shape {arr.shape}, expected ({dout}, {din}, 2)"
            )
        kraus.append(arr[..., 0] + 1j * arr[..., 1])
    comp = sum(k.conj().T @ k for k in kraus)
    dev = float(np.max(np.abs(comp - np.eye(din))))
    if dev > FILE_ATOL:
        raise ChannelFileError(f"completeness residual {dev:.3e} exceeds {FILE_ATOL:.1e}")
    return Channel(kraus, atol=max(FILE_ATOL, KRAUS_ATOL))


def load_channel(path: str) -> Channel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_channel(fh.read())
