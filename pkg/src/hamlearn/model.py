"""Parameterized states, measurement rotations, and hypothesis sets.

The experiment control knobs are the five-tuple (alpha, beta, theta, phi, t):
alpha/beta orient the initial qubit state on the Bloch sphere, theta/phi set
the pre-measurement rotation, and t is the evolution time.  A hypothesis set
holds the labeled candidate Hamiltonians plus a prior and caches their
eigendecompositions so per-iteration likelihoods are cheap.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .linalg import hermitian, hermitian_eig, spectral_norm
from .rng import RandomStream

PI = math.pi
TWO_PI = 2 * math.pi

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)

DEGENERACY_TOL = 1e-8  # looser than linalg tolerances: catch bad input early


class DegenerateHypothesesError(ValueError):
    """Two candidate Hamiltonians differ by a multiple of the identity."""

    def __init__(self, pairs):
        self.pairs = pairs  # list of (label_i, label_j, c)
        detail = "; ".join(f"{a} = {b} + {c:.6g}*I" for a, b, c in pairs)
        super().__init__(f"indistinguishable hypothesis pairs: {detail}")


def wrap_angle(value: float, width: float) -> float:
    """Wrap into [0, width) by modular arithmetic; width may be inf."""
    if not math.isfinite(value):
        raise ValueError(f"parameter must be finite, got {value!r}")
    if math.isinf(width):
        if value < 0:
            raise ValueError(f"negative time {value!r} with unbounded range")
        return value
    v = math.fmod(value, width)
    if v < 0:
        v += width
    if v >= width:  # fmod roundoff at the boundary
        v = 0.0
    return v


@dataclass(frozen=True)
class ControlParams:
    """Experiment settings: initial state (alpha, beta), measurement basis
    (theta, phi), evolution time t.  Angles live in half-open canonical
    ranges; t in [0, t_max) for whatever t_max produced the instance."""

    alpha: float
    beta: float
    theta: float
    phi: float
    t: float

    def __post_init__(self):
        for name in ("alpha", "beta", "theta", "phi", "t"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if not (0 <= self.alpha < PI and 0 <= self.theta < PI):
            raise ValueError("alpha and theta must lie in [0, pi)")
        if not (0 <= self.beta < TWO_PI and 0 <= self.phi < TWO_PI):
            raise ValueError("beta and phi must lie in [0, 2*pi)")
        if self.t < 0:
            raise ValueError("t must be non-negative")

    @classmethod
    def wrapped(cls, alpha, beta, theta, phi, t, t_max: float = TWO_PI) -> "ControlParams":
        """Canonicalize raw values into their half-open ranges."""
        return cls(
            alpha=wrap_angle(alpha, PI),
            beta=wrap_angle(beta, TWO_PI),
            theta=wrap_angle(theta, PI),
            phi=wrap_angle(phi, TWO_PI),
            t=wrap_angle(t, t_max),
        )


def initial_state(alpha: float, beta: float) -> np.ndarray:
    """|psi_1> = cos(alpha)|0> + e^{i beta} sin(alpha)|1>."""
    a = wrap_angle(alpha, PI)
    b = wrap_angle(beta, TWO_PI)
    return np.array([math.cos(a), np.exp(1j * b) * math.sin(a)], dtype=np.complex128)


def w_matrix(theta: float, phi: float) -> np.ndarray:
    """Measurement-basis rotation; unitary and self-adjoint (W^2 = I)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    ph = phi
    return np.array(
        [[c, np.exp(-1j * ph) * s], [np.exp(1j * ph) * s, -c]],
        dtype=np.complex128,
    )


def outcome_probs(h, params: ControlParams) -> np.ndarray:
    """Computational-basis outcome probabilities |<a| W e^{-iHt} |psi_1>|^2."""
    hm = hermitian(h)
    vals, vecs = hermitian_eig(hm)
    psi = initial_state(params.alpha, params.beta)
    evolved = (vecs * np.exp(-1j * vals * params.t)) @ (vecs.conj().T @ psi)
    amp = w_matrix(params.theta, params.phi) @ evolved
    return np.abs(amp) ** 2


def sample_outcome(probs, rng: RandomStream) -> int:
    """Inverse-CDF draw over the stored index order (bit-reproducible)."""
    p = np.asarray(probs, dtype=float).ravel()
    if abs(p.sum() - 1.0) > 1e-10 or np.any(p < -1e-12):
        raise ValueError("outcome distribution is not on the simplex")
    u = rng.random()
    acc = 0.0
    for a, pa in enumerate(p):
        acc += pa
        if u < acc:
            return a
    return len(p) - 1


def find_degenerate_pairs(matrices: Sequence[np.ndarray], tol: float = DEGENERACY_TOL):
    """All pairs (i, j, c) with H_i - H_j within ``tol`` of c*I.

    Such a pair generates identical dynamics up to a global phase, so no
    measurement statistics can tell them apart.
    """
    pairs = []
    n = len(matrices)
    dim = matrices[0].shape[0]
    eye = np.eye(dim)
    for i in range(n):
        for j in range(i + 1, n):
            diff = matrices[i] - matrices[j]
            c = float(np.trace(diff).real) / dim
            if np.max(np.abs(diff - c * eye)) <= tol:
                pairs.append((i, j, c))
    return pairs


class HypothesisSet:
    """Labeled candidate Hamiltonians with a prior (the oracle alphabet).

    Construction validates Hermiticity, the prior simplex, and rejects
    shift-degenerate pairs.  Eigendecompositions, pairwise spectral norms
    and the PGH/time-range constants are cached.
    """

    def __init__(self, hypotheses: Sequence[tuple[str, np.ndarray]], prior=None):
        if len(hypotheses) < 2:
            raise ValueError("a hypothesis set needs at least two candidates")
        self.labels = [str(lab) for lab, _ in hypotheses]
        mats = [hermitian(m) for _, m in hypotheses]
        dim = mats[0].shape[0]
        if any(m.shape[0] != dim for m in mats):
            raise ValueError("all hypotheses must share one dimension")
        self.matrices = np.stack(mats)
        n = len(mats)
        if prior is None:
            self.prior = np.full(n, 1.0 / n)
        else:
            p = np.asarray(prior, dtype=float).ravel()
            if len(p) != n:
                raise ValueError("prior length must match hypothesis count")
            if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
                raise ValueError("prior must be on the probability simplex")
            self.prior = p / p.sum()
        bad = find_degenerate_pairs(self.matrices)
        if bad:
            raise DegenerateHypothesesError(
                [(self.labels[i], self.labels[j], c) for i, j, c in bad]
            )

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return int(self.matrices.shape[1])

    @cached_property
    def eigs(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-hypothesis (eigenvalues (N, d), eigenvectors (N, d, d))."""
        decs = [hermitian_eig(m) for m in self.matrices]
        return (
            np.stack([d.eigenvalues for d in decs]),
            np.stack([d.eigenvectors for d in decs]),
        )

    @cached_property
    def pair_norms(self) -> np.ndarray:
        """Spectral norms ||H_i - H_j||_2, used by the PGH time rule."""
        n = len(self)
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                out[i, j] = out[j, i] = spectral_norm(self.matrices[i] - self.matrices[j])
        return out

    @cached_property
    def delta_min(self) -> float:
        """Minimal nonzero spectral gap over the candidate Hamiltonians.

        Hypotheses with a fully degenerate spectrum contribute no gap; if
        none has one, fall back to 1 (t range then defaults to [0, 2*pi)).
        """
        gaps = []
        vals = self.eigs[0]
        for row in vals:
            diffs = np.diff(np.sort(row))
            diffs = diffs[diffs > 1e-9]
            if diffs.size:
                gaps.append(float(diffs.min()))
        return min(gaps) if gaps else 1.0

    @cached_property
    def t_max(self) -> float:
        """Evolution-time range bound 2*pi / delta_min."""
        return TWO_PI / self.delta_min

    @classmethod
    def from_dict(cls, payload: dict) -> "HypothesisSet":
        """Build from the hypothesis-set JSON schema.

        ``{"hypotheses": [{"label": str, "matrix": [[[re, im], ...], ...]},
        ...], "prior": [...]}`` with row-major matrices; prior optional.
        """
        try:
            entries = payload["hypotheses"]
        except KeyError as exc:
            raise ValueError("missing 'hypotheses' key") from exc
        hyps = []
        for e in entries:
            rows = e["matrix"]
            mat = np.array(
                [[complex(cell[0], cell[1]) for cell in row] for row in rows],
                dtype=np.complex128,
            )
            hyps.append((e["label"], mat))
        return cls(hyps, prior=payload.get("prior"))

    @classmethod
    def from_json(cls, path) -> "HypothesisSet":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def mat_exp_hamiltonian_cached(hset: HypothesisSet, f: int, t: float) -> np.ndarray:
    """exp(-i H_f t) from the set's cached eigendecomposition."""
    vals, vecs = hset.eigs
    return (vecs[f] * np.exp(-1j * vals[f] * t)) @ vecs[f].conj().T


def outcome_probs_all(hset: HypothesisSet, params: ControlParams) -> np.ndarray:
    """Outcome probabilities for every hypothesis at once, shape (N, d).

    Uses the set's cached eigendecompositions; equivalent to calling
    ``outcome_probs`` per hypothesis.
    """
    vals, vecs = hset.eigs
    psi = initial_state(params.alpha, params.beta)
    coeffs = vecs.conj().transpose(0, 2, 1) @ psi  # (N, d)
    evolved = np.einsum(
        "nij,nj->ni", vecs, np.exp(-1j * vals * params.t) * coeffs
    )
    amp = evolved @ w_matrix(params.theta, params.phi).T
    return np.abs(amp) ** 2
