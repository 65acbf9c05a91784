"""Compiled runner for baseline (static-configuration) suites.

A static-grid scan multiplies configurations x hypotheses x trials x up to
1000 iterations, which a pure-Python loop cannot sustain on one core.  The
baseline iterate only ever needs outcome probabilities at the finitely many
PGH times 1/||H_i - H_j||_2, so the driver precomputes that table with the
exact same `outcome_probs_all` call the reference path uses and the kernel
reduces to float arithmetic plus the shared SplitMix64 stream.

For N < 8 hypotheses the kernel is bit-identical to `run_single` in
baseline mode (same draw order, same sequential summation as numpy uses at
these sizes); the test suite asserts this equivalence.
"""

from __future__ import annotations

import time

import numpy as np

try:
    from numba import njit, uint64

    AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    AVAILABLE = False

    def njit(*args, **kwargs):
        def deco(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return deco

    uint64 = int

from .bayes import PGH_NORM_FLOOR, Status
from .rng import seed_split

_STATUS_CODES = {
    1: Status.SUCCESS.value,
    2: Status.WRONG_CONVERGENCE.value,
    3: Status.EXHAUSTED.value,
}


@njit(cache=True)
def _run_trial(seed, prior, pair_probs, valid, fb_i, fb_j, true_index, threshold, cap):
    """One baseline run; returns (status_code, iteration_count).

    Codes: 1 success, 2 wrong convergence, 3 cap exhausted.
    """
    state = uint64(seed)
    n = prior.shape[0]
    m = pair_probs.shape[3]
    w = prior.copy()
    for k in range(1, cap + 1):
        # PGH pair: i, j independent from w, reject i == j / degenerate pairs
        i = fb_i
        j = fb_j
        found = False
        for _ in range(1000):
            state = state + uint64(0x9E3779B97F4A7C15)
            z = state
            z = (z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)
            z = z ^ (z >> uint64(31))
            u = (z >> uint64(11)) * 2.0**-53
            ci = n - 1
            acc = 0.0
            for idx in range(n):
                acc += w[idx]
                if u < acc:
                    ci = idx
                    break
            state = state + uint64(0x9E3779B97F4A7C15)
            z = state
            z = (z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)
            z = z ^ (z >> uint64(31))
            u = (z >> uint64(11)) * 2.0**-53
            cj = n - 1
            acc = 0.0
            for idx in range(n):
                acc += w[idx]
                if u < acc:
                    cj = idx
                    break
            if ci != cj and valid[ci, cj]:
                i = ci
                j = cj
                found = True
                break
        if not found and fb_i < 0:
            return 2, k  # no usable pair; abort like degenerate evidence

        # sample the measurement outcome for the true Hamiltonian
        state = state + uint64(0x9E3779B97F4A7C15)
        z = state
        z = (z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)
        z = z ^ (z >> uint64(31))
        u = (z >> uint64(11)) * 2.0**-53
        a = m - 1
        acc = 0.0
        for idx in range(m):
            acc += pair_probs[i, j, true_index, idx]
            if u < acc:
                a = idx
                break

        # Bayes update (same sequential summation order as the reference)
        zsum = 0.0
        for f in range(n):
            w[f] = w[f] * pair_probs[i, j, f, a]
        for f in range(n):
            zsum += w[f]
        if zsum <= 1e-300:
            return 2, k
        for f in range(n):
            w[f] = w[f] / zsum
        s2 = 0.0
        for f in range(n):
            s2 += w[f]
        for f in range(n):
            w[f] = w[f] / s2

        top = 0
        for f in range(1, n):
            if w[f] > w[top]:
                top = f
        if w[top] > threshold:
            if top == true_index:
                return 1, k
            return 2, k
    return 3, cap


def _pair_probability_table(hset, static_angles):
    """outcome_probs_all at every PGH pair time, plus validity/fallback."""
    from .model import outcome_probs_all  # local import avoids a cycle

    n = len(hset)
    m = hset.dim
    norms = hset.pair_norms
    pair_probs = np.zeros((n, n, n, m))
    valid = np.zeros((n, n), dtype=np.bool_)
    fb = (-1, -1)
    for i in range(n):
        for j in range(i + 1, n):
            if norms[i, j] > PGH_NORM_FLOOR:
                t = 1.0 / float(norms[i, j])
                probs = outcome_probs_all(hset, static_angles.with_time(t))
                pair_probs[i, j] = probs
                pair_probs[j, i] = probs
                valid[i, j] = valid[j, i] = True
                fb = (i, j)
    return pair_probs, valid, fb


def run_baseline_suite(
    hset,
    static_angles,
    trials,
    base_seed,
    *,
    set_name,
    threshold,
    cap,
):
    """All (hypothesis, trial) baseline runs for one static configuration."""
    from .harness import MODE_BASELINE, RunRecord  # local import avoids a cycle

    if static_angles is None:
        raise ValueError("baseline mode requires static_angles")
    if not 0.5 < threshold < 1:
        raise ValueError("threshold must lie in (0.5, 1)")
    pair_probs, valid, (fb_i, fb_j) = _pair_probability_table(hset, static_angles)
    records = []
    for f in range(len(hset)):
        for k in range(trials):
            seed = seed_split(base_seed, f, k)
            started = time.perf_counter()
            code, iterations = _run_trial(
                np.uint64(seed),
                hset.prior,
                pair_probs,
                valid,
                fb_i,
                fb_j,
                f,
                threshold,
                cap,
            )
            wall_ms = int(round((time.perf_counter() - started) * 1000))
            records.append(
                RunRecord(
                    mode=MODE_BASELINE,
                    set_name=set_name,
                    true_index=f,
                    true_label=hset.labels[f],
                    trial=k,
                    seed=seed,
                    threshold=threshold,
                    iterations=int(iterations) if code == 1 else None,
                    status=_STATUS_CODES[int(code)],
                    wall_time_ms=wall_ms,
                )
            )
    return records
