"""Joint hypothesis-outcome statistics and entropy/MI computations.

The production path is entirely classical: the joint table p(f, a) =
w_f * p_f(a) carries everything the optimizer needs.  The dense
classical-quantum density-matrix path (`mi_via_density_matrices`) computes
the same mutual information through von Neumann entropies and a
basis-dependent discord; it exists as an independent cross-check and is
kept at oracle scale (N * d <= 64).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import shannon_entropy, von_neumann_entropy
from .model import (
    ControlParams,
    HypothesisSet,
    initial_state,
    mat_exp_hamiltonian_cached,
    outcome_probs_all,
    w_matrix,
)

_DENSE_CAP = 64


def joint_distribution(
    hset: HypothesisSet, weights, params: ControlParams
) -> np.ndarray:
    """Joint table p(f, a) = weights[f] * P(outcome a | H_f, params)."""
    w = np.asarray(weights, dtype=float).ravel()
    if len(w) != len(hset):
        raise ValueError("weights length must match hypothesis count")
    if np.any(w < -1e-12) or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be on the probability simplex")
    return w[:, None] * outcome_probs_all(hset, params)


def _entropy_of_positive(x: np.ndarray) -> float:
    nz = x[x > 0]
    return float(-(nz * np.log2(nz)).sum())


def conditional_entropy_cost(table: np.ndarray) -> float:
    """H(F|Y) in bits of a joint table; zero-probability outcomes contribute 0.

    This is the quantity the per-iteration optimizer minimizes; it differs
    from the mutual information only by the constant H(F).
    """
    t = np.asarray(table, dtype=float)
    q = t.sum(axis=0)
    # H(F|Y) = H(F,Y) - H(Y), with 0 log 0 = 0 throughout
    h_fy = _entropy_of_positive(t.ravel())
    h_y = _entropy_of_positive(q)
    return max(0.0, h_fy - h_y)


def mutual_information(table: np.ndarray) -> float:
    """I(F;Y) = H(F) - H(F|Y) in bits, from the joint table."""
    t = np.asarray(table, dtype=float)
    h_f = _entropy_of_positive(t.sum(axis=1))
    return max(0.0, h_f - conditional_entropy_cost(t))


@dataclass(frozen=True)
class CqState:
    """Classical-quantum state: prior p_f and the pure conditional states
    W e^{-i H_f t} |psi_1> (the block-diagonal form of the joint state)."""

    prior: np.ndarray  # (N,)
    conditional_states: np.ndarray  # (N, d) complex


def build_cq_state(hset: HypothesisSet, weights, params: ControlParams) -> CqState:
    w = np.asarray(weights, dtype=float).ravel()
    if len(w) != len(hset) or np.any(w < -1e-12) or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be a simplex vector of matching length")
    psi = initial_state(params.alpha, params.beta)
    rot = w_matrix(params.theta, params.phi)
    states = np.stack(
        [rot @ (mat_exp_hamiltonian_cached(hset, f, params.t) @ psi) for f in range(len(hset))]
    )
    return CqState(prior=w, conditional_states=states)


@dataclass(frozen=True)
class CqEntropyReport:
    """Entropies of the dense classical-quantum state (all in bits)."""

    s_joint: float  # S(rho_FY)
    s_marginal: float  # S(rho_Y)
    s_conditional: float  # ensemble-averaged post-measurement entropy
    discord: float  # basis-dependent discord in the computational basis
    mutual_information: float


def cq_entropy_report(cq: CqState) -> CqEntropyReport:
    """Materialize rho_FY densely and compute its entropy decomposition.

    rho_FY = sum_f p_f |f><f| (x) |phi_f><phi_f|, an (N*d) x (N*d) matrix.
    The conditional term is the ensemble average sum_a q_a S(rho_{F|a})
    over computational-basis outcomes on the Y register, so the returned
    mutual information S(rho_Y) - D_Y reproduces the classical I(F;Y).
    """
    n, d = cq.conditional_states.shape
    if n * d > _DENSE_CAP:
        raise ValueError(f"dense oracle capped at dimension {_DENSE_CAP}")
    projectors = np.einsum(
        "ni,nj->nij", cq.conditional_states, cq.conditional_states.conj()
    )
    rho_fy = np.zeros((n * d, n * d), dtype=np.complex128)
    for f in range(n):
        block = cq.prior[f] * projectors[f]
        rho_fy[f * d : (f + 1) * d, f * d : (f + 1) * d] = block
    rho_y = np.einsum("n,nij->ij", cq.prior, projectors)

    s_joint = von_neumann_entropy(rho_fy)
    s_marginal = von_neumann_entropy(rho_y)

    # Project Y onto each computational-basis outcome; the unnormalized
    # F-register state is diagonal with entries p_f |<a|phi_f>|^2.
    s_conditional = 0.0
    amp2 = np.abs(cq.conditional_states) ** 2  # (N, d)
    for a in range(d):
        cond = cq.prior * amp2[:, a]
        q_a = float(cond.sum())
        if q_a <= 0:
            continue
        s_conditional += q_a * shannon_entropy(cond / q_a)

    discord = s_marginal - s_joint + s_conditional
    return CqEntropyReport(
        s_joint=s_joint,
        s_marginal=s_marginal,
        s_conditional=s_conditional,
        discord=discord,
        mutual_information=s_marginal - discord,
    )


def mi_via_density_matrices(cq: CqState) -> float:
    """Mutual information from the dense density-matrix route."""
    return cq_entropy_report(cq).mutual_information
