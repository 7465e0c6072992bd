"""Maximization of Lagrange polynomials over the probability simplex.

Multi-start projected gradient ascent provides certified lower bounds on
the maximum.  A first-order residual quantifies stationarity of the best
point, and a simplex-grid sweep provides a rigorous upper bound in small
dimension, so lower and upper routes can be cross-checked.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence
import warnings

import numpy as np

from .patterns import (
    LagrangePolynomial,
    Pattern,
    evaluate,
    evaluate_batch,
    lagrange_polynomial,
    pattern_to_dict,
)

SUPPORT_EPS = 1e-14

WORKERS_ENV = "TURANGAP_WORKERS"


def worker_count() -> int:
    """Worker pool size, from TURANGAP_WORKERS; default is all available."""
    raw = os.environ.get(WORKERS_ENV, "")
    if raw.strip():
        n = int(raw)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def project_to_simplex(v: Sequence[float]) -> np.ndarray:
    """Euclidean projection onto the standard simplex (sort-based)."""
    vv = np.asarray(v, dtype=np.float64)
    if vv.ndim != 1 or vv.size < 1:
        raise ValueError("expected a non-empty 1-d vector")
    u = np.sort(vv)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, vv.size + 1)
    rho = np.nonzero(u - css / ks > 0)[0][-1]
    tau = css[rho] / (rho + 1.0)
    return np.maximum(vv - tau, 0.0)


def gradient(poly: LagrangePolynomial, x: Sequence[float]) -> np.ndarray:
    """Gradient of the polynomial at x, exact handling of zero coordinates."""
    xv = np.asarray(x, dtype=np.float64)
    if xv.shape != (poly.m,):
        raise ValueError(f"point has shape {xv.shape}, expected ({poly.m},)")
    g = np.zeros(poly.m)
    exp = poly._exp  # type: ignore[attr-defined]
    coef = poly._coef  # type: ignore[attr-defined]
    if exp.shape[0] == 0:
        return g
    powers = xv[None, :] ** exp
    mono = coef * powers.prod(axis=1)
    pos = xv > 0.0
    if pos.any():
        g[pos] = (exp[:, pos] * mono[:, None]).sum(axis=0) / xv[pos]
    for i in np.nonzero(~pos)[0]:
        # at x_i = 0 only monomials linear in x_i survive differentiation
        rows = exp[:, i] == 1
        if not rows.any():
            continue
        cols = np.arange(poly.m) != i
        others = powers[rows][:, cols].prod(axis=1)
        g[i] = float(coef[rows] @ others)
    return g


def kkt_residual(poly: LagrangePolynomial, x: Sequence[float]) -> float:
    """First-order stationarity residual at a simplex point.

    By homogeneity the common on-support partial value is r * lambda(x); the
    residual adds the worst on-support deviation from it and the worst
    off-support overshoot above it.
    """
    xv = np.asarray(x, dtype=np.float64)
    g = gradient(poly, xv)
    target = poly.r * evaluate(poly, xv)
    supp = xv > 0.0
    on = float(np.max(np.abs(g[supp] - target))) if supp.any() else 0.0
    off = float(np.max(np.maximum(g[~supp] - target, 0.0))) if (~supp).any() else 0.0
    return on + off


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 50
    max_iterations: int = 5000
    step_rule: str = "backtracking"
    tolerance: float = 1e-12
    seed: int = 0

    def __post_init__(self) -> None:
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.step_rule != "backtracking":
            raise ValueError(f"unknown step rule {self.step_rule!r}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass(frozen=True)
class OptResult:
    value: float
    point: np.ndarray
    kkt_residual: float
    starts_used: int
    seed: int


def _ascend(
    poly: LagrangePolynomial, x0: np.ndarray, max_iterations: int, tolerance: float
) -> tuple[np.ndarray, float]:
    """Projected gradient ascent with backtracking from a single start."""
    x = project_to_simplex(x0)
    f = evaluate(poly, x)
    eta = 1.0
    for _ in range(max_iterations):
        g = gradient(poly, x)
        accepted = False
        move = 0.0
        while eta >= 1e-16:
            y = project_to_simplex(x + eta * g)
            step = y - x
            move = float(np.max(np.abs(step)))
            if move == 0.0:
                # projection fixed point: first-order stationary
                break
            fy = evaluate(poly, y)
            # Armijo condition on the projection arc; the inner product is
            # positive whenever the projected step moves
            if fy - f >= 1e-4 * float(g @ step):
                accepted = True
                break
            eta *= 0.5
        if not accepted:
            break
        x, f = y, fy
        if move < tolerance:
            break
        eta = min(eta * 2.0, 1e6)
    x = x.copy()
    x[x < SUPPORT_EPS] = 0.0
    supp = x > 0.0
    # re-project inside the support face: a full-simplex projection would
    # smear the removed mass back onto the zeroed coordinates
    x[supp] = project_to_simplex(x[supp])
    return x, evaluate(poly, x)


def _start_points(
    m: int, config: OptimizerConfig, extra_starts: Sequence[Sequence[float]]
) -> list[np.ndarray]:
    """Uniform point, vertices, then seeded random draws; warm starts last.

    The uniform point is always kept.  Random start i draws from its own
    generator seeded seed XOR i, so results do not depend on scheduling.
    """
    starts: list[np.ndarray] = [np.full(m, 1.0 / m)]
    for i in range(m):
        e = np.zeros(m)
        e[i] = 1.0
        starts.append(e)
    starts = starts[: max(config.starts, 1)]
    while len(starts) < config.starts:
        rng = np.random.default_rng(config.seed ^ len(starts))
        draw = rng.exponential(1.0, m)
        starts.append(draw / draw.sum())
    for w in extra_starts:
        starts.append(project_to_simplex(np.asarray(w, dtype=np.float64)))
    return starts


def maximize(
    p: Pattern,
    config: OptimizerConfig | None = None,
    extra_starts: Sequence[Sequence[float]] = (),
) -> OptResult:
    """Best simplex point over all starts; ties go to the lowest start index."""
    config = config or OptimizerConfig()
    poly = lagrange_polynomial(p)
    starts = _start_points(p.m, config, extra_starts)

    def run(idx: int) -> tuple[float, int, np.ndarray]:
        x, f = _ascend(poly, starts[idx], config.max_iterations, config.tolerance)
        return f, idx, x

    workers = worker_count()
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(len(starts))))
    else:
        results = [run(i) for i in range(len(starts))]
    best = max(results, key=lambda t: (t[0], -t[1]))
    value, _, point = best
    return OptResult(
        value=value,
        point=point,
        kkt_residual=kkt_residual(poly, point),
        starts_used=len(starts),
        seed=config.seed,
    )


def certificate(p: Pattern, result: OptResult) -> dict:
    """JSON-ready maximization certificate."""
    return {
        "pattern": pattern_to_dict(p),
        "value": result.value,
        "point": [float(v) for v in result.point],
        "kkt_residual": result.kkt_residual,
        "starts": result.starts_used,
        "seed": result.seed,
    }


def _grid_points(resolution: int, m: int) -> Iterable[np.ndarray]:
    """Simplex grid {k / resolution} in batches, stars-and-bars order."""
    batch: list[tuple[int, ...]] = []
    for bars in combinations(range(resolution + m - 1), m - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(resolution + m - 2 - prev)
        batch.append(tuple(parts))
        if len(batch) == 8192:
            yield np.asarray(batch, dtype=np.float64) / resolution
            batch = []
    if batch:
        yield np.asarray(batch, dtype=np.float64) / resolution


def certify_max_upper(p: Pattern, resolution: int) -> float:
    """Rigorous upper bound on the simplex maximum via a grid sweep.

    On the simplex the partials are non-negative and sum to r * lambda(x)
    <= r * coefficient_sum =: L (each monomial is at most 1 there), so the
    gradient has l1 norm at most L.  Largest-remainder rounding moves any
    point to a grid point changing each coordinate by at most 1/resolution,
    hence lambda drops by at most L/resolution: grid max + L/resolution is
    an upper bound on the true maximum.
    """
    if p.m > 6:
        raise ValueError(f"grid certification supports m <= 6, got m={p.m}")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    poly = lagrange_polynomial(p)
    grid_max = 0.0
    if len(poly.monomials) > 0:
        for xs in _grid_points(resolution, p.m):
            grid_max = max(grid_max, float(evaluate_batch(poly, xs).max()))
    lip = poly.r * float(poly.coefficient_sum())
    bound = grid_max + lip / resolution
    if bound > 1.25:
        # every Lagrange polynomial is at most (sum x_i)^r = 1 on the simplex
        warnings.warn(
            f"grid resolution {resolution} too coarse: bound {bound:.4f} "
            "far exceeds the trivial bound 1",
            stacklevel=2,
        )
    return bound
