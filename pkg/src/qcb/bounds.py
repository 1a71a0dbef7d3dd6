"""Right-hand-side evaluators for every continuity bound, and instance
checkers that compute both sides on concrete states or channels and report
margins.

Whenever a checker consumes a distance it may substitute a certified upper
endpoint for the true value; every right-hand side here is nondecreasing in
its distance argument, so such substitutions can only enlarge the right side
and the checks stay sound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import capacities
from .channels import Channel, apply, apply_on, erasure_channel
from .distances import bures_distance, erasure_bures_upper
from .ensembles import Ensemble, ensemble, ensemble_distance, holevo_quantity, random_ensemble
from .entropic import (
    DensityMatrix,
    cmi,
    entropy,
    g,
    h2,
    mutual_information,
    random_density,
)
from .linalg import (
    ContractError,
    Rng,
    SizeError,
    SubsystemShape,
    DIM_CAP,
    normalize_labels,
    reorder,
    support_dim,
    trace_norm,
)

#: Margin below which a report counts as a genuine violation, in bits.
SLACK = 1e-7

EPS_EXACT = "exact"
EPS_INTERVAL = "interval-upper"
EPS_ANALYTIC = "analytic"


@dataclass(frozen=True)
class BoundReport:
    """One checked instance of a continuity bound."""

    bound: str
    trial: int
    seed: int
    d_a: int
    d: int
    eps: float
    eps_provenance: str
    lhs: float
    rhs: float
    margin: float
    violated: bool
    slack: float = SLACK


def _report(bound, trial, seed, d_a, d, eps, prov, lhs, rhs, slack=SLACK) -> BoundReport:
    margin = rhs - lhs
    return BoundReport(
        bound=bound,
        trial=int(trial),
        seed=int(seed),
        d_a=int(d_a),
        d=int(d),
        eps=float(eps),
        eps_provenance=prov,
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        violated=bool(margin < -slack),
        slack=float(slack),
    )


# ---------------------------------------------------------------------------
# right-hand sides (bits)
# ---------------------------------------------------------------------------

def rhs_prop1(d: int, eps: float, qc: bool = False, concave: bool = False) -> float:
    """Extended-state bound on a conditional-mutual-information difference.

    ``qc`` halves the dimension term (block-classical extensions);
    ``concave`` halves the calibration term (caller asserts concavity or
    convexity on the relevant hull).
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    log_term = (1.0 if qc else 2.0) * eps * math.log2(d)
    g_term = (1.0 if concave else 2.0) * g(eps)
    return log_term + g_term


def rhs_prop2(d_a: int, eps: float, same_channel: bool = False, same_outputs: bool = False) -> float:
    """Output-Holevo-quantity bound under joint channel/ensemble variation."""
    if d_a < 1:
        raise ValueError("dimension must be >= 1")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    out = eps * math.log2(d_a) + (2.0 if not same_outputs else 1.0) * g(eps)
    if not same_channel:
        out += eps  # eps * log2(2)
    return out


def rhs_prop3(d_a: int, eps: float, same_channel: bool = False) -> float:
    """Output conditional-mutual-information bound, single channel copy."""
    if d_a < 1:
        raise ValueError("dimension must be >= 1")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    out = 2.0 * eps * math.log2(d_a) + 2.0 * g(eps)
    if not same_channel:
        out += 2.0 * eps
    return out


def rhs_prop4(n: int, d_a: float, eps: float) -> float:
    """n-copy output conditional-mutual-information bound; ``d_a`` is the
    geometric mean of the per-copy input ranks."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if d_a < 1:
        raise ValueError("dimension must be >= 1")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    return 2.0 * n * (eps * math.log2(2.0 * d_a) + g(eps))


def rhs_prop5_log(kind: str, log2_d_a: float, eps: float) -> float:
    """Capacity continuity bound with the input dimension given in qubits
    (log2), so arbitrarily large dimensions stay representable."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if log2_d_a < 0:
        raise ValueError("log2 dimension must be >= 0")
    if kind == "holevo-cap":
        return eps * log2_d_a + eps + 2.0 * g(eps)
    if kind in ("classical", "quantum", "private-oneshot"):
        return 2.0 * eps * log2_d_a + 2.0 * eps + 2.0 * g(eps)
    if kind == "private":
        return 4.0 * eps * log2_d_a + 4.0 * eps + 4.0 * g(eps)
    raise ValueError(f"unknown capacity kind {kind!r}")


def rhs_prop5(kind: str, d_a: int, eps: float) -> float:
    if d_a < 1:
        raise ValueError("dimension must be >= 1")
    return rhs_prop5_log(kind, math.log2(d_a), eps)


def rhs_ea_capacity(d_a: int, eps: float) -> float:
    """Entanglement-assisted capacity bound (prior work, evaluator only;
    ``eps`` is half the diamond distance)."""
    if d_a < 1:
        raise ValueError("dimension must be >= 1")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    return 2.0 * eps * math.log2(d_a) + 2.0 * g(eps)


# ---------------------------------------------------------------------------
# structure checks
# ---------------------------------------------------------------------------

def qc_block_deviation(state: DensityMatrix, quantum, classical) -> float:
    """Trace-norm mass of the blocks that couple distinct classical indices.

    Zero exactly when the state is block diagonal over the computational
    basis of the ``classical`` factors.
    """
    q = state.shape.require(normalize_labels(quantum))
    c = state.shape.require(normalize_labels(classical))
    if set(q) | set(c) != set(state.shape.labels) or set(q) & set(c):
        raise ValueError("quantum/classical parts must partition the labels")
    mat = reorder(state.mat, state.shape, q + c)
    dq = state.shape.dim_of(q)
    dc = state.shape.dim_of(c)
    t = mat.reshape(dq, dc, dq, dc)
    pinched = np.zeros_like(t)
    for i in range(dc):
        pinched[:, i, :, i] = t[:, i, :, i]
    return trace_norm((t - pinched).reshape(dq * dc, dq * dc))


def is_qc_state(state: DensityMatrix, quantum, classical, tol: float = 1e-9) -> bool:
    return qc_block_deviation(state, quantum, classical) <= tol


# ---------------------------------------------------------------------------
# checkers
# ---------------------------------------------------------------------------

def check_prop1(
    rho_ext: DensityMatrix,
    sigma_ext: DensityMatrix,
    parts,
    qc: bool = False,
    *,
    trial: int = 0,
    seed: int = 0,
    slack: float = SLACK,
) -> BoundReport:
    """Both sides of the extended-state bound for one pair of extensions.

    ``parts`` lists the label groups playing the A, B, C and E roles.  The
    distance is exact (half trace norm of the extension difference); the
    dimension is the joint support of the two AE marginals.
    """
    a, b, c, e = (normalize_labels(p) for p in parts)
    if rho_ext.shape != sigma_ext.shape:
        raise ValueError("extensions must share one shape")
    if qc:
        for state in (rho_ext, sigma_ext):
            dev = qc_block_deviation(state, a + e, b + c)
            if dev > 1e-9:
                raise ContractError(
                    f"qc flag requested but off-block mass is {dev:.3e}"
                )
    eps = 0.5 * trace_norm(rho_ext.mat - sigma_ext.mat)
    d = support_dim([rho_ext.marginal(a + e).mat, sigma_ext.marginal(a + e).mat])
    rho = rho_ext.marginal(a + b + c)
    sigma = sigma_ext.marginal(a + b + c)
    lhs = abs(cmi(rho, a, b, c) - cmi(sigma, a, b, c))
    rhs = rhs_prop1(d, eps, qc=qc)
    return _report("prop1qc" if qc else "prop1", trial, seed,
                   rho_ext.shape.dim_of(a), d, eps, EPS_EXACT, lhs, rhs, slack=slack)


def check_prop2(
    phi: Channel,
    psi: Channel,
    e: Ensemble,
    f: Ensemble,
    *,
    same_channel: bool = False,
    same_outputs: bool = False,
    restarts: int = 16,
    seed: int = 0,
    trial: int = 0,
    slack: float = SLACK,
) -> BoundReport:
    """Output-Holevo-quantity deviation against its bound.

    The channel part of the distance is a certified Bures upper endpoint
    (skipped when ``same_channel``); the ensemble part is exact.
    """
    if e.shape != f.shape:
        raise ValueError("ensembles must live on one input space")
    if same_outputs:
        for (p_, s), (q_, t) in zip(e.items, f.items):
            if trace_norm(apply(phi, s).mat - apply(psi, t).mat) > 1e-9:
                raise ContractError("same_outputs flag requested but outputs differ")
    eps_ens = ensemble_distance(e, f)
    if same_channel:
        eps, prov = eps_ens, EPS_EXACT
    else:
        interval = bures_distance(phi, psi, restarts=restarts, seed=seed)
        eps, prov = eps_ens + interval.upper, EPS_INTERVAL
    spanning = [s.mat for p, s in list(e.items) + list(f.items) if p > 1e-12]
    d_a = support_dim(spanning) if spanning else 1
    chi_e = holevo_quantity(ensemble((p, apply(phi, s)) for p, s in e.items))
    chi_f = holevo_quantity(ensemble((p, apply(psi, s)) for p, s in f.items))
    lhs = abs(chi_e - chi_f)
    rhs = rhs_prop2(d_a, eps, same_channel=same_channel, same_outputs=same_outputs)
    return _report("prop2", trial, seed, d_a, e.shape.dim, eps, prov, lhs, rhs, slack=slack)


def check_prop3(
    phi: Channel,
    psi: Channel,
    rho: DensityMatrix,
    sigma: DensityMatrix,
    parts,
    *,
    same_channel: bool = False,
    restarts: int = 16,
    seed: int = 0,
    trial: int = 0,
    slack: float = SLACK,
) -> BoundReport:
    """Output conditional-mutual-information deviation for states on the
    (channel input, conditioner, witness) label groups in ``parts``."""
    a, c, dpart = (normalize_labels(p) for p in parts)
    if rho.shape != sigma.shape:
        raise ValueError("states must share one shape")
    (a_label,) = a
    eps_state = 0.5 * trace_norm(rho.mat - sigma.mat)
    if same_channel:
        eps, prov = eps_state, EPS_EXACT
    else:
        interval = bures_distance(phi, psi, restarts=restarts, seed=seed)
        eps, prov = eps_state + interval.upper, EPS_INTERVAL
    d_a = support_dim([rho.marginal(a).mat, sigma.marginal(a).mat])
    out_rho = apply_on(phi, rho, a_label)
    out_sigma = apply_on(psi, sigma, a_label)
    lhs = abs(cmi(out_rho, a, dpart, c) - cmi(out_sigma, a, dpart, c))
    rhs = rhs_prop3(d_a, eps, same_channel=same_channel)
    return _report("prop3", trial, seed, d_a, rho.shape.dim_of(a), eps, prov, lhs, rhs, slack=slack)


def check_prop4(
    phi: Channel,
    psi: Channel,
    rho: DensityMatrix,
    n: int,
    parts,
    *,
    restarts: int = 16,
    seed: int = 0,
    trial: int = 0,
    slack: float = SLACK,
) -> BoundReport:
    """n-copy output conditional-mutual-information deviation on one shared
    input state; ``parts`` is (per-copy input labels, conditioner, witness)."""
    a_labels, c, dpart = parts
    a_labels = tuple(normalize_labels(a_labels))
    c = normalize_labels(c)
    dpart = normalize_labels(dpart)
    if len(a_labels) != n:
        raise ValueError(f"expected {n} input labels, got {len(a_labels)}")
    out_dim = rho.shape.dim
    for label in a_labels:
        out_dim = out_dim // rho.shape.dim_of((label,)) * phi.dout
    if out_dim > DIM_CAP:
        raise SizeError(f"output dimension {out_dim} exceeds cap {DIM_CAP}")
    interval = bures_distance(phi, psi, restarts=restarts, seed=seed)
    eps = interval.upper
    ranks = [support_dim([rho.marginal((l,)).mat]) for l in a_labels]
    full = all(r == rho.shape.dim_of((l,)) for r, l in zip(ranks, a_labels))
    if full:
        d_geo = float(rho.shape.dim_of((a_labels[0],)))
    else:
        d_geo = float(np.prod([float(r) for r in ranks]) ** (1.0 / n))
    out_phi = rho
    out_psi = rho
    for label in a_labels:
        out_phi = apply_on(phi, out_phi, label)
        out_psi = apply_on(psi, out_psi, label)
    lhs = abs(cmi(out_phi, a_labels, dpart, c) - cmi(out_psi, a_labels, dpart, c))
    rhs = rhs_prop4(n, d_geo, eps)
    return _report("prop4", trial, seed, int(round(d_geo)), rho.shape.dim, eps,
                   EPS_INTERVAL, lhs, rhs, slack=slack)


def check_prop5_erasure(
    d: int,
    p: float,
    q: float,
    *,
    restarts: int = 16,
    seed: int = 0,
    trial: int = 0,
    eps_source: str = EPS_ANALYTIC,
    slack: float = SLACK,
) -> list[BoundReport]:
    """Capacity continuity bounds on the erasure family, every kind.

    Left sides come from the closed forms.  The distance is the closed-form
    dilation bound when {p, q} = {1/2 - x, 1/2} and ``eps_source`` allows it,
    otherwise a numerically certified Bures upper endpoint.
    """
    caps_p = capacities.erasure_capacities(d, p)
    caps_q = capacities.erasure_capacities(d, q)
    analytic = math.isclose(max(p, q), 0.5, abs_tol=1e-12) and min(p, q) <= 0.5
    if analytic and eps_source == EPS_ANALYTIC:
        eps = erasure_bures_upper(d, abs(0.5 - min(p, q)))
        prov = EPS_ANALYTIC
    else:
        interval = bures_distance(
            erasure_channel(d, p), erasure_channel(d, q), restarts=restarts, seed=seed
        )
        eps, prov = interval.upper, EPS_INTERVAL
    out = []
    for kind in capacities.CAPACITY_KINDS:
        lhs = abs(caps_p[kind].value - caps_q[kind].value)
        rhs = rhs_prop5(kind, d, eps)
        out.append(_report(f"prop5-{kind}", trial, seed, d, d, eps, prov, lhs, rhs, slack=slack))
    return out


def check_auxiliary(
    omega: DensityMatrix,
    part_a,
    part_b,
    part_c=(),
    *,
    trial: int = 0,
    seed: int = 0,
    slack: float = SLACK,
) -> list[BoundReport]:
    """Dimension-free sanity inequalities on one state: the mutual-information
    cap, its tightening for block-classical states when detected, and the
    conditional version when a conditioner is given."""
    a = normalize_labels(part_a)
    b = normalize_labels(part_b)
    c = normalize_labels(part_c) if part_c else ()
    reports = []
    ab = omega.marginal(a + b) if c else omega
    h_a = entropy(ab.marginal(a))
    h_b = entropy(ab.marginal(b))
    mi = mutual_information(ab, a, b)
    reports.append(
        _report("mi-ub", trial, seed, ab.shape.dim_of(a), ab.shape.dim,
                0.0, EPS_EXACT, mi, 2.0 * min(h_a, h_b), slack=slack)
    )
    if is_qc_state(ab, a, b) or is_qc_state(ab, b, a):
        reports.append(
            _report("mi-ub-qc", trial, seed, ab.shape.dim_of(a), ab.shape.dim,
                    0.0, EPS_EXACT, mi, min(h_a, h_b), slack=slack)
        )
    if c:
        h_ac = entropy(omega.marginal(a + c))
        h_bc = entropy(omega.marginal(b + c))
        ha = entropy(omega.marginal(a))
        hb = entropy(omega.marginal(b))
        val = cmi(omega, a, b, c)
        reports.append(
            _report("cmi-ub", trial, seed, omega.shape.dim_of(a), omega.shape.dim,
                    0.0, EPS_EXACT, val, 2.0 * min(ha, hb, h_ac, h_bc), slack=slack)
        )
    return reports


def check_almost_convexity(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    lam: float,
    parts,
    *,
    trial: int = 0,
    seed: int = 0,
    slack: float = 1e-9,
) -> BoundReport:
    """Mixing defect of conditional mutual information against h2(lambda)."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("mixing weight must lie in [0, 1]")
    a, b, c = (normalize_labels(p) for p in parts)
    from .entropic import mix

    mixed = mix([rho, sigma], [lam, 1.0 - lam])
    lhs = abs(
        lam * cmi(rho, a, b, c)
        + (1.0 - lam) * cmi(sigma, a, b, c)
        - cmi(mixed, a, b, c)
    )
    return _report("fcb", trial, seed, rho.shape.dim_of(a), rho.shape.dim,
                   lam, EPS_EXACT, lhs, h2(lam), slack=slack)


def check_ensemble_continuity(
    e: Ensemble, f: Ensemble, *, trial: int = 0, seed: int = 0, slack: float = SLACK
) -> BoundReport:
    """Holevo-quantity continuity in the ensemble distance."""
    eps = ensemble_distance(e, f)
    m = max(e.m, f.m)
    dim = e.shape.dim
    lhs = abs(holevo_quantity(e) - holevo_quantity(f))
    rhs = eps * math.log2(min(dim, m)) + 2.0 * g(eps)
    return _report("chicb", trial, seed, dim, m, eps, EPS_EXACT, lhs, rhs, slack=slack)


def tightness_ratio(x: float, log2_d: float, kind: str = "quantum") -> float:
    """Closed-form tightness ratio of the erasure construction: achieved
    capacity jump over the bound's right side, with the dilation distance
    substituted for the true channel distance.  Returns 1 at x = 0."""
    if x < 0.0 or x > 0.5:
        raise ValueError(f"offset {x} outside [0, 1/2]")
    if x == 0.0:
        return 1.0
    beta = erasure_bures_upper(2, x)
    lhs = 2.0 * x * log2_d
    return lhs / rhs_prop5_log(kind, log2_d, beta)


def tightness_rows(x_values, log2_d_values, kind: str = "quantum") -> list[dict]:
    rows = []
    for x in x_values:
        for log2_d in log2_d_values:
            beta = erasure_bures_upper(2, x) if x > 0 else 0.0
            lhs = 2.0 * x * log2_d
            rhs = rhs_prop5_log(kind, log2_d, beta) if x > 0 else 0.0
            ratio = tightness_ratio(x, log2_d, kind)
            rows.append(
                {
                    "x": float(x),
                    "log2_d": float(log2_d),
                    "beta_upper": float(beta),
                    "lhs_Q": float(lhs),
                    "rhs_QC": float(rhs),
                    "ratio": float(ratio),
                }
            )
    return rows


# ---------------------------------------------------------------------------
# fuzz drivers (used by both the CLI and the acceptance suite)
# ---------------------------------------------------------------------------

def _qc_extension(shape: SubsystemShape, quantum, classical, rng: Rng) -> DensityMatrix:
    """Random block-classical state: classical factors carry a computational
    basis index, each block holding an independent random state."""
    quantum = shape.require(normalize_labels(quantum))
    classical = shape.require(normalize_labels(classical))
    dq = shape.dim_of(quantum)
    dc = shape.dim_of(classical)
    probs = rng.simplex(dc)
    from .linalg import random_state

    mat = np.zeros((dq * dc, dq * dc), dtype=complex)
    for i in range(dc):
        block = random_state(dq, rng)
        t = mat.reshape(dq, dc, dq, dc)
        t[:, i, :, i] += probs[i] * block
    grouped = SubsystemShape(
        tuple(quantum) + tuple(classical),
        shape.dims_of(quantum) + shape.dims_of(classical),
    )
    back = reorder(mat, grouped, shape.labels)
    return DensityMatrix(back, shape)


def fuzz_prop1(
    trials: int, dims=(2, 2, 2, 2), seed: int = 0, qc: bool = False, slack: float = SLACK
) -> list[BoundReport]:
    labels = ("A", "B", "C", "E")
    shape = SubsystemShape(labels, dims)
    parts = (("A",), ("B",), ("C",), ("E",))
    out = []
    for t in range(trials):
        rng = Rng(seed).child(t)
        if qc:
            rho = _qc_extension(shape, ("A", "E"), ("B", "C"), rng)
            sigma = _qc_extension(shape, ("A", "E"), ("B", "C"), rng)
        else:
            rho = random_density(shape, rng)
            sigma = random_density(shape, rng)
        out.append(check_prop1(rho, sigma, parts, qc=qc, trial=t, seed=seed, slack=slack))
    return out


def _random_channel_pair(rng: Rng, din: int, dout: int, max_kraus: int):
    from .channels import random_channel

    kmin = max(1, -(-din // dout))  # dilation needs dout * denv >= din
    kmax = max(kmin, max_kraus)
    k1 = rng.integers(kmin, kmax + 1)
    k2 = rng.integers(kmin, kmax + 1)
    return random_channel(din, dout, k1, rng), random_channel(din, dout, k2, rng)


def fuzz_prop2(
    trials: int,
    seed: int = 0,
    din_choices=(2, 3),
    dout_choices=(2, 3),
    max_kraus: int = 4,
    max_m: int = 4,
    same_channel: bool = False,
    same_outputs: bool = False,
    restarts: int = 16,
    slack: float = SLACK,
) -> list[BoundReport]:
    out = []
    for t in range(trials):
        rng = Rng(seed).child(t)
        din = din_choices[rng.integers(0, len(din_choices))]
        dout = dout_choices[rng.integers(0, len(dout_choices))]
        m = rng.integers(1, max_m + 1)
        shape = SubsystemShape(("A",), (din,))
        phi, psi = _random_channel_pair(rng, din, dout, max_kraus)
        if same_channel:
            psi = phi
        e = random_ensemble(shape, m, rng)
        if same_outputs:
            psi = phi
            probs = rng.simplex(m)
            f = ensemble(zip(probs, e.states))
        else:
            f = random_ensemble(shape, m, rng)
        out.append(
            check_prop2(
                phi, psi, e, f,
                same_channel=same_channel, same_outputs=same_outputs,
                restarts=restarts, seed=seed, trial=t, slack=slack,
            )
        )
    return out


def fuzz_prop3(
    trials: int,
    seed: int = 0,
    d_a: int = 2,
    d_c: int = 2,
    d_d: int = 2,
    dout_choices=(2, 3),
    max_kraus: int = 4,
    same_channel: bool = False,
    same_state: bool = False,
    restarts: int = 16,
    slack: float = SLACK,
) -> list[BoundReport]:
    shape = SubsystemShape(("A", "C", "D"), (d_a, d_c, d_d))
    parts = (("A",), ("C",), ("D",))
    out = []
    for t in range(trials):
        rng = Rng(seed).child(t)
        dout = dout_choices[rng.integers(0, len(dout_choices))]
        phi, psi = _random_channel_pair(rng, d_a, dout, max_kraus)
        if same_channel:
            psi = phi
        rho = random_density(shape, rng)
        sigma = rho if same_state else random_density(shape, rng)
        out.append(
            check_prop3(
                phi, psi, rho, sigma, parts,
                same_channel=same_channel, restarts=restarts, seed=seed, trial=t,
                slack=slack,
            )
        )
    return out


def fuzz_prop4(
    trials: int,
    seed: int = 0,
    n: int = 2,
    d_a: int = 2,
    d_c: int = 2,
    d_d: int = 2,
    dout: int = 2,
    max_kraus: int = 4,
    restarts: int = 16,
    slack: float = SLACK,
) -> list[BoundReport]:
    a_labels = tuple(f"A{k}" for k in range(1, n + 1))
    shape = SubsystemShape(a_labels + ("C", "D"), (d_a,) * n + (d_c, d_d))
    parts = (a_labels, ("C",), ("D",))
    out = []
    for t in range(trials):
        rng = Rng(seed).child(t)
        phi, psi = _random_channel_pair(rng, d_a, dout, max_kraus)
        rho = random_density(shape, rng)
        out.append(
            check_prop4(phi, psi, rho, n, parts, restarts=restarts, seed=seed, trial=t,
                        slack=slack)
        )
    return out


def fuzz_auxiliary(
    trials: int, seed: int = 0, dims=(2, 2, 2), slack: float = SLACK
) -> list[BoundReport]:
    shape = SubsystemShape(("A", "B", "C"), dims)
    out = []
    for t in range(trials):
        rng = Rng(seed).child(t)
        omega = random_density(shape, rng)
        out.extend(check_auxiliary(omega, ("A",), ("B",), ("C",), trial=t, seed=seed,
                                   slack=slack))
        qc = _qc_extension(SubsystemShape(("A", "B"), dims[:2]), ("A",), ("B",), rng)
        out.extend(check_auxiliary(qc, ("A",), ("B",), trial=t, seed=seed, slack=slack))
    return out


def fuzz_fcb(
    trials: int, seed: int = 0, dims=(2, 2, 2), slack: float = 1e-9
) -> list[BoundReport]:
    shape = SubsystemShape(("A", "B", "C"), dims)
    parts = (("A",), ("B",), ("C",))
    out = []
    for t in range(trials):
        rng = Rng(seed).child(t)
        rho = random_density(shape, rng)
        sigma = random_density(shape, rng)
        lam = rng.uniform(0.0, 1.0)
        out.append(check_almost_convexity(rho, sigma, lam, parts, trial=t, seed=seed,
                                          slack=slack))
    return out


def fuzz_chicb(
    trials: int, seed: int = 0, max_d: int = 4, max_m: int = 4, slack: float = SLACK
) -> list[BoundReport]:
    out = []
    for t in range(trials):
        rng = Rng(seed).child(t)
        d = rng.integers(2, max_d + 1)
        m = rng.integers(1, max_m + 1)
        shape = SubsystemShape(("A",), (d,))
        e = random_ensemble(shape, m, rng)
        f = random_ensemble(shape, m, rng)
        out.append(check_ensemble_continuity(e, f, trial=t, seed=seed, slack=slack))
    return out
