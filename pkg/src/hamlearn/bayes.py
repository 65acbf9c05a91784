"""Weight-vector maintenance, the PGH time rule, and run termination."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import HypothesisSet
from .rng import RandomStream

PGH_NORM_FLOOR = 1e-9
PGH_MAX_ATTEMPTS = 1000
EVIDENCE_FLOOR = 1e-300


class DegenerateEvidenceError(RuntimeError):
    """The observed outcome has zero likelihood under every live hypothesis."""


class PghFailureError(RuntimeError):
    """No distinct hypothesis pair with a nonzero spectral-norm difference."""


class Status(enum.Enum):
    RUNNING = "running"
    SUCCESS = "success"
    WRONG_CONVERGENCE = "wrong_convergence"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class RunStatus:
    kind: Status
    iterations: Optional[int] = None
    wrong_index: Optional[int] = None


def init_weights(hset: HypothesisSet) -> np.ndarray:
    """Initial weights: the set's prior (uniform 1/N unless one was given)."""
    return hset.prior.copy()


def bayes_update(w: np.ndarray, likelihoods) -> np.ndarray:
    """Posterior w_j * L_j / sum_i w_i L_i, renormalized onto the simplex."""
    lk = np.asarray(likelihoods, dtype=float).ravel()
    if lk.shape != np.shape(w):
        raise ValueError("likelihood length must match weight length")
    if np.any(lk < 0):
        raise ValueError("likelihoods must be non-negative")
    post = np.asarray(w, dtype=float) * lk
    z = float(post.sum())
    if z <= EVIDENCE_FLOOR:
        raise DegenerateEvidenceError(
            "posterior mass underflow: outcome impossible under every hypothesis"
        )
    post /= z
    return post / post.sum()


def _sample_index(w: np.ndarray, rng: RandomStream) -> int:
    u = rng.random()
    acc = 0.0
    for i, wi in enumerate(w):
        acc += wi
        if u < acc:
            return i
    return len(w) - 1


def pgh_pair(
    hset: HypothesisSet,
    w: np.ndarray,
    rng: RandomStream,
    max_attempts: int = PGH_MAX_ATTEMPTS,
) -> tuple[int, int]:
    """Draw the PGH pair: i, j independent from w, rejecting i = j and
    pairs whose difference has negligible spectral norm.

    If the weights are so concentrated that ``max_attempts`` rejections are
    exhausted, fall back to a deterministic scan over all distinct pairs
    (keeping the last valid one); only a set with no valid pair at all
    raises PghFailureError.
    """
    norms = hset.pair_norms
    for _ in range(max_attempts):
        i = _sample_index(w, rng)
        j = _sample_index(w, rng)
        if i != j and norms[i, j] > PGH_NORM_FLOOR:
            return i, j
    fallback = None
    for i in range(len(hset)):
        for j in range(i + 1, len(hset)):
            if norms[i, j] > PGH_NORM_FLOOR:
                fallback = (i, j)
    if fallback is None:
        raise PghFailureError("no hypothesis pair with distinct dynamics")
    return fallback


def pgh_time(hset: HypothesisSet, w: np.ndarray, rng: RandomStream) -> float:
    """Evolution time t = 1 / ||H_i - H_j||_2 for a sampled pair."""
    i, j = pgh_pair(hset, w, rng)
    return 1.0 / float(hset.pair_norms[i, j])


def check_status(
    w: np.ndarray, true_index: int, threshold: float, iteration: int, cap: int
) -> RunStatus:
    """Decide whether a run has terminated after ``iteration`` updates."""
    if not 0.5 < threshold < 1:
        raise ValueError("threshold must lie in (0.5, 1)")
    top = int(np.argmax(w))
    if w[top] > threshold:
        if top == true_index:
            return RunStatus(Status.SUCCESS, iterations=iteration)
        return RunStatus(Status.WRONG_CONVERGENCE, iterations=iteration, wrong_index=top)
    if iteration >= cap:
        return RunStatus(Status.EXHAUSTED, iterations=iteration)
    return RunStatus(Status.RUNNING)
