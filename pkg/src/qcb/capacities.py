"""One-shot information quantities of channels and the erasure family's
closed-form capacities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import Channel, apply, apply_on, complementary
from .ensembles import Ensemble, ensemble, holevo_quantity
from .entropic import CLIP, DensityMatrix, entropy, mutual_information
from .linalg import Rng, SubsystemShape, hermitian_eig

CAPACITY_KINDS = ("holevo-cap", "classical", "quantum", "private-oneshot", "private")

CLOSED_FORM = "closed-form"
CONCAVE_CERTIFIED = "concave-certified"
HEURISTIC = "heuristic-lower-bound"


@dataclass(frozen=True)
class CapacityValue:
    kind: str
    value: float
    exactness: str


def purify(rho: DensityMatrix, ref_label: str = "R") -> DensityMatrix:
    """Minimal purification: reference dimension equals the state's rank."""
    w, u = hermitian_eig(rho.mat)
    keep = w > CLIP
    lam = w[keep]
    vecs = u[:, keep]
    rank = int(lam.size)
    vec = np.zeros(rho.dim * rank, dtype=complex)
    for i in range(rank):
        vec += np.sqrt(lam[i]) * np.kron(vecs[:, i], np.eye(rank)[:, i])
    vec /= np.linalg.norm(vec)
    shape = SubsystemShape(("A", ref_label), (rho.dim, rank))
    return DensityMatrix(np.outer(vec, vec.conj()), shape)


def mutual_info_of_channel(ch: Channel, rho: DensityMatrix) -> float:
    """Mutual information between channel output and a reference holding a
    purification of the input; independent of which purification is used."""
    if rho.dim != ch.din:
        raise ValueError(f"state dim {rho.dim} does not match channel input {ch.din}")
    pure = purify(rho)
    omega = apply_on(ch, pure, "A")
    return mutual_information(omega, ("A",), ("R",))


def coherent_info(ch: Channel, rho: DensityMatrix) -> float:
    """H(output) - H(environment output), in bits."""
    if rho.dim != ch.din:
        raise ValueError(f"state dim {rho.dim} does not match channel input {ch.din}")
    return entropy(apply(ch, rho)) - entropy(apply(complementary(ch), rho))


def _log2_clipped(mat: np.ndarray, floor: float = 1e-14) -> np.ndarray:
    w, u = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    w = np.clip(w, floor, None)
    return (u * np.log2(w)) @ u.conj().T


def _channel_mi_value(ch: Channel, comp: Channel, mat: np.ndarray, shape: SubsystemShape) -> float:
    rho = DensityMatrix(mat, shape)
    return (
        entropy(rho)
        + entropy(apply(ch, rho))
        - entropy(apply(comp, rho))
    )


def ea_capacity(ch: Channel, tol: float = 1e-7, max_iters: int = 2000) -> CapacityValue:
    """Entanglement-assisted capacity by concave maximisation over inputs.

    Projected gradient ascent with backtracking; the run is certified once
    the linear-maximisation (Frank-Wolfe) gap drops to ``tol`` bits, which
    bounds the remaining suboptimality of a concave objective.  If the cap
    is hit first the best value is returned with a heuristic tag.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    d = ch.din
    shape = SubsystemShape(("A",), (d,))
    comp = complementary(ch)
    rho = np.eye(d, dtype=complex) / d
    value = _channel_mi_value(ch, comp, rho, shape)

    for _ in range(max_iters):
        grad = (
            -_log2_clipped(rho)
            - ch.adjoint_apply(_log2_clipped(ch.apply_matrix(rho)))
            + comp.adjoint_apply(_log2_clipped(comp.apply_matrix(rho)))
        )
        grad = 0.5 * (grad + grad.conj().T)
        wg = np.linalg.eigvalsh(grad)
        gap = float(wg[-1]) - float(np.trace(grad @ rho).real)
        if gap <= tol:
            return CapacityValue("entanglement-assisted", value, CONCAVE_CERTIFIED)
        accepted = False
        t = 0.5
        from .distances import _proj_density  # shared simplex projection

        while t > 1e-12:
            cand = _proj_density(rho + t * grad)
            cand_val = _channel_mi_value(ch, comp, cand, shape)
            if cand_val > value + 1e-14:
                rho, value = cand, cand_val
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
    return CapacityValue("entanglement-assisted", value, HEURISTIC)


def _output_holevo(ch: Channel, probs: np.ndarray, pures: list[np.ndarray]) -> float:
    outs = [ch.apply_matrix(np.outer(v, v.conj())) for v in pures]
    avg = sum(p * o for p, o in zip(probs, outs))
    from .entropic import entropy_of_matrix

    return entropy_of_matrix(avg) - float(
        sum(p * entropy_of_matrix(o) for p, o in zip(probs, outs))
    )


def _relative_entropy_matrix(a: np.ndarray, b: np.ndarray, cap: float = 60.0) -> float:
    wa, ua = np.linalg.eigh(0.5 * (a + a.conj().T))
    wb, ub = np.linalg.eigh(0.5 * (b + b.conj().T))
    keep_a = wa > CLIP
    keep_b = wb > CLIP
    outside = ub[:, ~keep_b]
    if outside.shape[1] > 0:
        mass = float(np.trace(outside.conj().T @ a @ outside).real)
        if mass > 1e-9:
            return cap
    la = wa[keep_a]
    overlap = np.abs(ua[:, keep_a].conj().T @ ub[:, keep_b]) ** 2
    val = float(np.sum(la * np.log2(la))) - float(la @ overlap @ np.log2(wb[keep_b]))
    return min(max(val, 0.0), cap)


def holevo_cap_heuristic(
    ch: Channel,
    restarts: int = 8,
    m_max: int | None = None,
    sweeps: int = 40,
    seed: int = 0,
) -> CapacityValue:
    """Multi-start lower bound on the one-shot Holevo capacity.

    Alternates a Blahut-Arimoto probability update (monotone for fixed
    states) with per-state ascent moves accepted only when the objective
    improves.  Restart 0 is the computational basis, restarts beyond use a
    random orthonormal basis padded with random pure states.
    """
    d = ch.din
    if m_max is None:
        m_max = d * d
    if m_max < d * d:
        raise ValueError(f"m_max must be at least din^2 = {d * d}")
    rng = Rng(seed)
    best = 0.0
    for r in range(max(restarts, 1)):
        sub = rng.child(r)
        if r == 0:
            basis = np.eye(d, dtype=complex)
        else:
            q, _ = np.linalg.qr(sub.complex_matrix(d, d))
            basis = q
        pures = [basis[:, i].copy() for i in range(d)]
        pures += [sub.complex_matrix(d, 1)[:, 0] for _ in range(m_max - d)]
        pures = [v / np.linalg.norm(v) for v in pures]
        probs = np.full(len(pures), 1.0 / len(pures))
        from .entropic import entropy_of_matrix

        outs = [ch.apply_matrix(np.outer(v, v.conj())) for v in pures]
        ents = np.array([entropy_of_matrix(o) for o in outs])

        def chi(p_vec) -> float:
            avg = sum(p * o for p, o in zip(p_vec, outs))
            return entropy_of_matrix(avg) - float(p_vec @ ents)

        value = chi(probs)
        for _ in range(sweeps):
            avg = sum(p * o for p, o in zip(probs, outs))
            dists = np.array([_relative_entropy_matrix(o, avg) for o in outs])
            new_p = probs * np.exp2(dists - np.max(dists))
            total = new_p.sum()
            stable = total > 0 and np.max(np.abs(new_p / total - probs)) < 1e-12
            if total > 0:
                probs = new_p / total
            value = max(value, chi(probs))
            improved = False
            log_avg = _log2_clipped(sum(p * o for p, o in zip(probs, outs)))
            for i, v in enumerate(pures):
                if probs[i] <= 1e-12:
                    direction = ch.adjoint_apply(-log_avg)
                else:
                    direction = ch.adjoint_apply(_log2_clipped(outs[i]) - log_avg)
                wd, ud = np.linalg.eigh(0.5 * (direction + direction.conj().T))
                cand = ud[:, -1]
                cand_out = ch.apply_matrix(np.outer(cand, cand.conj()))
                old_out, old_ent = outs[i], ents[i]
                outs[i] = cand_out
                ents[i] = entropy_of_matrix(cand_out)
                trial_val = chi(probs)
                if trial_val > value + 1e-12:
                    pures[i], value, improved = cand, trial_val, True
                else:
                    outs[i], ents[i] = old_out, old_ent
            if not improved and stable:
                break
        # probability-only polish: the multiplicative update converges fast
        # once the states have settled
        for _ in range(400):
            avg = sum(p * o for p, o in zip(probs, outs))
            dists = np.array([_relative_entropy_matrix(o, avg) for o in outs])
            new_p = probs * np.exp2(dists - np.max(dists))
            total = new_p.sum()
            if total <= 0:
                break
            probs = new_p / total
            new_val = chi(probs)
            gain = new_val - value
            value = max(value, new_val)
            if gain < 1e-13:
                break
        best = max(best, value)
    return CapacityValue("holevo-cap", best, HEURISTIC)


def private_oneshot_objective(ch: Channel, e: Ensemble) -> float:
    """Output Holevo quantity minus the complementary channel's; may be
    negative."""
    comp = complementary(ch)
    out_e = ensemble((p, apply(ch, s)) for p, s in e.items)
    out_c = ensemble((p, apply(comp, s)) for p, s in e.items)
    return holevo_quantity(out_e) - holevo_quantity(out_c)


def erasure_capacities(d: int, p: float) -> dict[str, CapacityValue]:
    """Closed-form capacities of the erasure family, in bits."""
    if d < 2:
        raise ValueError("erasure capacities need input dimension >= 2")
    p = float(p)
    if p < 0.0 or p > 1.0:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    logd = math.log2(d)
    classical = (1.0 - p) * logd
    quantum = max((1.0 - 2.0 * p) * logd, 0.0)
    return {
        "holevo-cap": CapacityValue("holevo-cap", classical, CLOSED_FORM),
        "classical": CapacityValue("classical", classical, CLOSED_FORM),
        "quantum": CapacityValue("quantum", quantum, CLOSED_FORM),
        "private-oneshot": CapacityValue("private-oneshot", quantum, CLOSED_FORM),
        "private": CapacityValue("private", quantum, CLOSED_FORM),
    }
