"""Per-iteration parameter selection: simulated annealing and grid search.

Internally both optimizers work on 5-vectors in the order [t, theta, phi,
alpha, beta]; public cost functions receive ControlParams.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import optimize as _sciopt

from .model import PI, TWO_PI, ControlParams
from .rng import RandomStream

VEC_ORDER = ("t", "theta", "phi", "alpha", "beta")

CostFn = Callable[[ControlParams], float]


@dataclass(frozen=True)
class AnnealConfig:
    initial_temperature: float = 1.0
    cooling_rate: float = 0.9  # geometric schedule T <- rate * T
    outer_iterations: int = 200
    neighbors_per_step: int = 8
    polish_budget: int = 2000  # cost evaluations for the final local refinement

    def __post_init__(self):
        if self.initial_temperature <= 0:
            raise ValueError("initial_temperature must be positive")
        if not 0 < self.cooling_rate < 1:
            raise ValueError("cooling_rate must lie in (0, 1)")
        if self.outer_iterations < 1 or self.neighbors_per_step < 1:
            raise ValueError("iteration counts must be positive")
        if self.polish_budget < 0:
            raise ValueError("polish_budget must be non-negative")


@dataclass(frozen=True)
class GridSpec:
    points_per_angle: int = 5
    time_points: int = 8  # only used when the time axis is swept

    def __post_init__(self):
        if self.points_per_angle < 1 or self.time_points < 1:
            raise ValueError("grid needs at least one point per dimension")


@dataclass(frozen=True)
class ParamRanges:
    """Half-open parameter ranges, all starting at 0, order [t, theta, phi,
    alpha, beta].  Only the time width varies (2*pi / delta_min)."""

    t_max: float

    @property
    def widths(self) -> np.ndarray:
        return np.array([self.t_max, PI, TWO_PI, PI, TWO_PI])

    def wrap(self, x: np.ndarray) -> np.ndarray:
        w = np.mod(x, self.widths)
        # np.mod on a tiny negative can round up to the width itself; keep
        # the range half-open
        w[w >= self.widths] = 0.0
        return w

    def random_point(self, rng: RandomStream) -> np.ndarray:
        u = np.array([rng.random() for _ in range(5)])
        return u * self.widths


def params_from_vector(x: np.ndarray) -> ControlParams:
    t, theta, phi, alpha, beta = (float(v) for v in x)
    return ControlParams(alpha=alpha, beta=beta, theta=theta, phi=phi, t=t)


def vector_from_params(p: ControlParams) -> np.ndarray:
    return np.array([p.t, p.theta, p.phi, p.alpha, p.beta])


def _neighbor_vec(
    x: np.ndarray, temperature: float, ranges: ParamRanges, rng: RandomStream
) -> np.ndarray:
    u = np.array([2.0 * rng.random() - 1.0 for _ in range(5)])
    return ranges.wrap(x + temperature * u * (ranges.widths / 2.0))


def neighbor(
    x: ControlParams, temperature: float, ranges: ParamRanges, rng: RandomStream
) -> ControlParams:
    """Perturb every coordinate by T * uniform[-1,1] * (range/2), wrapped."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    return params_from_vector(_neighbor_vec(vector_from_params(x), temperature, ranges, rng))


def anneal(
    cost: CostFn,
    ranges: ParamRanges,
    config: AnnealConfig = AnnealConfig(),
    rng: Optional[RandomStream] = None,
    on_step: Optional[Callable[[int, float, float, float], None]] = None,
) -> tuple[ControlParams, float]:
    """Simulated annealing with geometric cooling.

    Each outer step draws ``neighbors_per_step`` candidates around the
    current point, takes the cheapest, accepts downhill moves always and
    uphill moves with probability exp((old - new) / T).  Returns the best
    point ever evaluated, not the final point.  ``on_step(step, T,
    current_cost, best_cost)`` is invoked after every step when given.

    Because the perturbation magnitude is tied linearly to the cooling
    temperature, the annealing loop alone locates the right basin but
    stalls around cost ~1e-4 instead of descending to the bottom.  The
    best point is therefore refined by a deterministic local search
    (Powell, capped at ``polish_budget`` cost evaluations) before
    returning; set ``polish_budget=0`` for the bare loop.
    """
    if rng is None:
        rng = RandomStream(0)
    x = ranges.random_point(rng)
    cx = cost(params_from_vector(x))
    best_x, best_c = x.copy(), cx
    temperature = config.initial_temperature
    for step in range(config.outer_iterations):
        cand_best_x = None
        cand_best_c = math.inf
        for _ in range(config.neighbors_per_step):
            y = _neighbor_vec(x, temperature, ranges, rng)
            cy = cost(params_from_vector(y))
            if cy < best_c:
                best_x, best_c = y.copy(), cy
            if cy < cand_best_c:
                cand_best_x, cand_best_c = y, cy
        if cand_best_c < cx or rng.random() < math.exp(
            min(0.0, (cx - cand_best_c) / temperature)
        ):
            x, cx = cand_best_x, cand_best_c
        temperature *= config.cooling_rate
        if on_step is not None:
            on_step(step, temperature, cx, best_c)
    if config.polish_budget > 0:
        best_x, best_c = _polish(cost, ranges, best_x, best_c, config.polish_budget)
    return params_from_vector(best_x), best_c


def _polish(
    cost: CostFn, ranges: ParamRanges, x: np.ndarray, cx: float, budget: int
) -> tuple[np.ndarray, float]:
    """Deterministic Powell refinement of the annealer's best point."""

    def vec_cost(v: np.ndarray) -> float:
        return cost(params_from_vector(ranges.wrap(np.asarray(v, dtype=float))))

    res = _sciopt.minimize(
        vec_cost,
        x,
        method="Powell",
        options={"xtol": 1e-10, "ftol": 1e-14, "maxfev": budget},
    )
    if res.fun < cx:
        return ranges.wrap(np.asarray(res.x, dtype=float)), float(res.fun)
    return x, cx


def _axis(width: float, points: int) -> np.ndarray:
    # half-open range: the wrapped endpoint is excluded
    return np.linspace(0.0, width, points, endpoint=False)


def grid_search(
    cost: CostFn,
    grid: GridSpec,
    ranges: ParamRanges,
    sweep_time: bool = True,
) -> tuple[ControlParams, float]:
    """Exhaustive minimization over the Cartesian parameter grid.

    Angles get ``points_per_angle`` points each; the time axis gets
    ``time_points`` when swept, else t is pinned to 0 (callers that supply
    t separately, e.g. via PGH, ignore it).  Ties keep the first point in
    (alpha, beta, theta, phi, t) iteration order.
    """
    alphas = _axis(PI, grid.points_per_angle)
    betas = _axis(TWO_PI, grid.points_per_angle)
    thetas = _axis(PI, grid.points_per_angle)
    phis = _axis(TWO_PI, grid.points_per_angle)
    times = _axis(ranges.t_max, grid.time_points) if sweep_time else np.array([0.0])

    best_p: Optional[ControlParams] = None
    best_c = math.inf
    for alpha, beta, theta, phi, t in itertools.product(alphas, betas, thetas, phis, times):
        p = ControlParams(alpha=alpha, beta=beta, theta=theta, phi=phi, t=float(t))
        c = cost(p)
        if c < best_c:
            best_p, best_c = p, c
    assert best_p is not None
    return best_p, best_c
