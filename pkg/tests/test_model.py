"""Tests for states, measurement rotations, outcome statistics and sets."""

import json

import numpy as np
import pytest

from hamlearn.model import (
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    ControlParams,
    DegenerateHypothesesError,
    HypothesisSet,
    find_degenerate_pairs,
    initial_state,
    outcome_probs,
    outcome_probs_all,
    sample_outcome,
    w_matrix,
    wrap_angle,
)
from hamlearn.rng import RandomStream

from conftest import random_hermitian

SQRT2 = np.sqrt(2.0)


def params(alpha=0.0, beta=0.0, theta=0.0, phi=0.0, t=0.0) -> ControlParams:
    return ControlParams(alpha=alpha, beta=beta, theta=theta, phi=phi, t=t)


# -------------------------------------------------------------- initial state


def test_initial_state_examples():
    assert np.allclose(initial_state(0.0, 1.23), [1.0, 0.0], atol=1e-12)
    assert np.allclose(initial_state(np.pi / 2, 0.0), [0.0, 1.0], atol=1e-12)
    assert np.allclose(
        initial_state(np.pi / 4, np.pi / 2), [1 / SQRT2, 1j / SQRT2], atol=1e-12
    )


def test_initial_state_unit_norm():
    rng = RandomStream(23)
    for _ in range(200):
        psi = initial_state(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        assert abs(np.linalg.norm(psi) - 1.0) <= 1e-12


# --------------------------------------------------------- measurement matrix


def test_w_matrix_examples():
    assert np.allclose(w_matrix(0.0, 0.7), SIGMA_Z, atol=1e-12)
    assert np.allclose(w_matrix(np.pi, 0.0), SIGMA_X, atol=1e-12)
    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / SQRT2
    assert np.allclose(w_matrix(np.pi / 2, 0.0), hadamard, atol=1e-12)


def test_w_matrix_unitary_and_self_adjoint():
    rng = RandomStream(29)
    for _ in range(200):
        w = w_matrix(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        assert np.max(np.abs(w @ w.conj().T - IDENTITY_2)) <= 1e-10
        assert np.max(np.abs(w @ w - IDENTITY_2)) <= 1e-10
        assert np.max(np.abs(w - w.conj().T)) <= 1e-10


# ------------------------------------------------------------- outcome probs


def test_outcome_probs_sigma_x():
    for t in (0.3, 1.0, 2.2):
        p = outcome_probs(SIGMA_X, params(t=t))
        assert np.allclose(p, [np.cos(t) ** 2, np.sin(t) ** 2], atol=1e-12)


def test_outcome_probs_sigma_z_eigenstate():
    for t in (0.0, 0.7, 3.0):
        p = outcome_probs(SIGMA_Z, params(t=t))
        assert np.allclose(p, [1.0, 0.0], atol=1e-12)


def test_outcome_probs_no_evolution():
    rng = RandomStream(31)
    for _ in range(10):
        p = outcome_probs(random_hermitian(rng, 2), params(t=0.0))
        assert np.allclose(p, [1.0, 0.0], atol=1e-12)


def test_outcome_probs_shift_invariance():
    rng = RandomStream(37)
    for _ in range(50):
        h = random_hermitian(rng, 2)
        c = rng.uniform(-3.0, 3.0)
        pr = params(
            alpha=rng.uniform(0, np.pi),
            beta=rng.uniform(0, 2 * np.pi),
            theta=rng.uniform(0, np.pi),
            phi=rng.uniform(0, 2 * np.pi),
            t=rng.uniform(0, 5.0),
        )
        a = outcome_probs(h, pr)
        b = outcome_probs(h + c * IDENTITY_2, pr)
        assert np.max(np.abs(a - b)) <= 1e-10


def test_outcome_probs_time_scale_consistency():
    rng = RandomStream(41)
    for _ in range(50):
        h = random_hermitian(rng, 2)
        t = rng.uniform(0, 3.0)
        pr = params(alpha=0.4, beta=1.1, theta=2.2, phi=0.3, t=t)
        pr2 = params(alpha=0.4, beta=1.1, theta=2.2, phi=0.3, t=2 * t)
        assert np.max(np.abs(outcome_probs(2 * h, pr) - outcome_probs(h, pr2))) <= 1e-10


def test_outcome_probs_all_matches_single(xz_set):
    rng = RandomStream(43)
    for _ in range(25):
        pr = params(
            alpha=rng.uniform(0, np.pi),
            beta=rng.uniform(0, 2 * np.pi),
            theta=rng.uniform(0, np.pi),
            phi=rng.uniform(0, 2 * np.pi),
            t=rng.uniform(0, 4.0),
        )
        stacked = outcome_probs_all(xz_set, pr)
        for f in range(len(xz_set)):
            assert np.max(np.abs(stacked[f] - outcome_probs(xz_set.matrices[f], pr))) <= 1e-12


# ------------------------------------------------------------------ sampling


def test_sample_outcome_degenerate_distributions():
    rng = RandomStream(47)
    assert all(sample_outcome(np.array([1.0, 0.0]), rng) == 0 for _ in range(20))
    assert all(sample_outcome(np.array([0.0, 1.0]), rng) == 1 for _ in range(20))


def test_sample_outcome_law_of_large_numbers():
    rng = RandomStream(53)
    p = np.array([0.5, 0.5])
    zeros = sum(1 for _ in range(100_000) if sample_outcome(p, rng) == 0)
    assert 0.49 <= zeros / 100_000 <= 0.51


# ------------------------------------------------------------ ControlParams


def test_wrap_angle_basics():
    assert wrap_angle(3.5 * np.pi, 2 * np.pi) == pytest.approx(1.5 * np.pi)
    assert wrap_angle(-0.1, np.pi) == pytest.approx(np.pi - 0.1)
    assert wrap_angle(0.0, np.pi) == 0.0


def test_control_params_wrapped_lands_in_ranges():
    p = ControlParams.wrapped(
        alpha=np.pi + 0.2, beta=-0.3, theta=5 * np.pi, phi=7.0, t=-1.0, t_max=2 * np.pi
    )
    assert 0 <= p.alpha < np.pi
    assert 0 <= p.beta < 2 * np.pi
    assert 0 <= p.theta < np.pi
    assert 0 <= p.phi < 2 * np.pi
    assert 0 <= p.t < 2 * np.pi


def test_control_params_rejects_out_of_range():
    with pytest.raises(ValueError):
        ControlParams(alpha=np.pi, beta=0, theta=0, phi=0, t=0)
    with pytest.raises(ValueError):
        ControlParams(alpha=0, beta=0, theta=0, phi=0, t=-0.5)


# ------------------------------------------------------------ hypothesis sets


def test_degeneracy_detects_identity_shift():
    pairs = find_degenerate_pairs([SIGMA_X, SIGMA_X + 3 * IDENTITY_2])
    assert len(pairs) == 1
    i, j, c = pairs[0]
    assert (i, j) == (0, 1)
    assert c == pytest.approx(-3.0, abs=1e-12)
    with pytest.raises(DegenerateHypothesesError):
        HypothesisSet([("a", SIGMA_X), ("b", SIGMA_X + 3 * IDENTITY_2)])


def test_degeneracy_accepts_distinct_set():
    assert find_degenerate_pairs([SIGMA_X, SIGMA_Z]) == []
    HypothesisSet([("x", SIGMA_X), ("z", SIGMA_Z)])  # must not raise


def test_hypothesis_set_requires_two_hypotheses():
    with pytest.raises(ValueError):
        HypothesisSet([("only", SIGMA_X)])


def test_hypothesis_set_prior_validation():
    with pytest.raises(ValueError):
        HypothesisSet([("x", SIGMA_X), ("z", SIGMA_Z)], prior=[0.9, 0.2])
    hs = HypothesisSet([("x", SIGMA_X), ("z", SIGMA_Z)], prior=[0.7, 0.3])
    assert np.allclose(hs.prior, [0.7, 0.3])


def test_hypothesis_set_json_round_trip(tmp_path):
    def entries(m):
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]

    payload = {
        "hypotheses": [
            {"label": "x", "matrix": entries(SIGMA_X)},
            {"label": "y", "matrix": entries(SIGMA_Y)},
        ],
        "prior": [0.25, 0.75],
    }
    path = tmp_path / "set.json"
    path.write_text(json.dumps(payload))
    hs = HypothesisSet.from_json(str(path))
    assert hs.labels == ["x", "y"]
    assert np.allclose(hs.matrices[0], SIGMA_X)
    assert np.allclose(hs.matrices[1], SIGMA_Y)
    assert np.allclose(hs.prior, [0.25, 0.75])


def test_hypothesis_set_json_validates_hermiticity(tmp_path):
    payload = {
        "hypotheses": [
            {"label": "bad", "matrix": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]},
            {"label": "z", "matrix": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]},
        ]
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(ValueError):
        HypothesisSet.from_json(str(path))


def test_t_max_from_minimal_gap(xz_set):
    # both sigma_x and sigma_z have eigenvalue gap 2, so t_max = 2*pi/2
    assert xz_set.delta_min == pytest.approx(2.0, abs=1e-12)
    assert xz_set.t_max == pytest.approx(np.pi, abs=1e-12)
