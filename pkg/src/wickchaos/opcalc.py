"""White noise on a time grid, Skorohod integrals and Wick equations.

The horizon [0, T] is cut into M cells and chaos coordinate i is the
Gaussian ``<x, e_i>`` with ``e_i = 1_[t_i, t_{i+1}) / sqrt(dt)``.  With this
normalization the continuum Hida derivative at a time in cell i corresponds to
``annihilate(i, .) / sqrt(dt)`` and the white noise at that time to
``white_noise(i) / sqrt(dt)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .ccr import create
from .chaos import (
    ChaosExpansion,
    MultiIndex,
    l2_norm_sq,
    wick_exp,
    wick_inverse,
    wick_product,
    wick_unit,
)
from .errors import ConsistencyError, DegreeOverflow, DimensionMismatch, IndexOutOfRange
from .exchangeable import ExchangeableChaos, euler_exchangeable, wick_exp_linear
from .transforms import chaos_eval

MC_BLOCK = 8192


@dataclass(frozen=True)
class TimeGrid:
    T: float
    M: int

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("horizon T must be positive")
        if self.M < 1:
            raise ValueError("cell count M must be >= 1")

    @property
    def dt(self) -> float:
        return self.T / self.M

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.M + 1)

    def cell_of(self, t: float) -> int:
        """Grid index k with ``t == k * dt``; raises for unaligned times."""
        k = round(t / self.dt)
        if not 0 <= k <= self.M or abs(k * self.dt - t) > 1e-9 * self.dt:
            raise ValueError(f"time {t} is not on the grid (dt = {self.dt}, T = {self.T})")
        return k


def brownian(grid: TimeGrid, t: float, max_degree: int) -> ChaosExpansion:
    """``B_t = <x, 1_[0,t]>``: coefficient sqrt(dt) on every cell before t."""
    k = grid.cell_of(t)
    s = math.sqrt(grid.dt)
    return ChaosExpansion(grid.M, max_degree, {MultiIndex.unit(i): s for i in range(k)})


def white_noise(grid: TimeGrid, i: int, max_degree: int) -> ChaosExpansion:
    """``create(i, 1)``; the Brownian increment over cell i is ``sqrt(dt)`` times this."""
    if not 0 <= i < grid.M:
        raise IndexOutOfRange(f"cell {i} out of range for M = {grid.M}", index=i, M=grid.M)
    return create(i, wick_unit(grid.M, max_degree))


def hs_integral(grid: TimeGrid, integrand) -> ChaosExpansion:
    """Hitsuda-Skorohod integral ``sum_i sqrt(dt) * create(i, f_i)``.

    The same sum is formed a second time as ``sum_i sqrt(dt) * (x_i <> f_i)``
    and the two routes must agree exactly.
    """
    integrand = list(integrand)
    if len(integrand) != grid.M:
        raise DimensionMismatch(f"need {grid.M} integrand values, got {len(integrand)}")
    dims = {f.dim for f in integrand}
    degrees = {f.max_degree for f in integrand}
    if dims != {grid.M} or len(degrees) != 1:
        raise DimensionMismatch("integrands must all have dim M and a common max_degree", dims=sorted(dims))
    D = degrees.pop()
    for i, f in enumerate(integrand):
        if not f.is_zero and f.degree >= D:
            raise DegreeOverflow(
                f"integrand {i} has degree {f.degree}; integrating would exceed max_degree {D}",
                cell=i,
                degree=f.degree,
            )
    s = math.sqrt(grid.dt)
    via_create = ChaosExpansion.zero(grid.M, D)
    via_wick = ChaosExpansion.zero(grid.M, D)
    for i, f in enumerate(integrand):
        via_create = via_create + create(i, f) * s
        via_wick = via_wick + wick_product(white_noise(grid, i, D), f, "capped") * s
    if via_create != via_wick:
        raise ConsistencyError("creation and Wick routes of the Skorohod integral disagree")
    return via_create


def wick_solve_linear(a: ChaosExpansion, b: ChaosExpansion) -> ChaosExpansion:
    """Solve ``a <> X = b`` in the degree-``min(a.D, b.D)`` quotient."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")
    return wick_product(wick_inverse(a), b, "capped")


# ---------------------------------------------------------------------------
# Wick geometric Brownian motion dX = X <> dB, X_0 = 1

METHODS = ("closed_form", "wick_euler")


def solve_gbm(grid: TimeGrid, max_degree: int, method: str = "closed_form") -> ChaosExpansion:
    """Sparse solution; feasible only for small grids (the term count grows like C(M+D, D))."""
    if max_degree < 1:
        raise ValueError("degree must be >= 1")
    if method == "closed_form":
        return wick_exp(brownian(grid, grid.T, max_degree))
    if method == "wick_euler":
        s = math.sqrt(grid.dt)
        X = wick_unit(grid.M, max_degree)
        for k in range(grid.M):
            X = X + wick_product(white_noise(grid, k, max_degree), X, "capped") * s
        return X
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def solve_gbm_exchangeable(grid: TimeGrid, max_degree: int, method: str = "closed_form") -> ExchangeableChaos:
    """Same solutions as :func:`solve_gbm`, stored by exponent type; scales to large M."""
    if max_degree < 1:
        raise ValueError("degree must be >= 1")
    s = math.sqrt(grid.dt)
    if method == "closed_form":
        return wick_exp_linear(grid.M, max_degree, s)
    if method == "wick_euler":
        return euler_exchangeable(grid.M, max_degree, s)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


# ---------------------------------------------------------------------------
# moments


@dataclass(frozen=True)
class MomentReport:
    mean: float
    second_moment: float
    variance: float
    mc_mean: float | None
    mc_stderr: float | None
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def _block_sums(a, seed: int, block: int, n: int):
    rng = np.random.Generator(np.random.Philox(key=seed).jumped(block))
    x = rng.standard_normal((n, a.dim))
    if isinstance(a, ExchangeableChaos):
        values = a.evaluate(x).real
    else:
        # keep the (n, terms, dim) gather below ~4M entries
        step = max(1, 4_000_000 // max(1, len(a) * a.dim))
        values = np.concatenate([np.real(chaos_eval(a, x[k : k + step])) for k in range(0, n, step)])
    return float(np.sum(values)), float(np.sum(values * values))


def moments(a, mc_samples: int = 0, seed: int = 0, threads: int = 1) -> MomentReport:
    """Exact mean and second moment from the coefficients, optional Monte Carlo check.

    Samples are drawn in fixed blocks of ``MC_BLOCK`` from a Philox stream
    keyed by ``seed`` and jumped by the block index, so the numbers do not
    depend on ``threads``.
    """
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    coeffs = list(a.terms.values())
    if any(abs(c.imag) > 1e-12 for c in coeffs):
        raise ValueError("moments need real coefficients")
    mean = a.constant_term.real
    second = a.l2_norm_sq() if isinstance(a, ExchangeableChaos) else l2_norm_sq(a)
    variance = second - mean * mean
    if mc_samples <= 0:
        return MomentReport(mean, second, variance, None, None, 0, seed)

    sizes = [min(MC_BLOCK, mc_samples - start) for start in range(0, mc_samples, MC_BLOCK)]
    jobs = [(a, seed, b, n) for b, n in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: _block_sums(*job), jobs))
    else:
        parts = [_block_sums(*job) for job in jobs]
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mc_mean = total / mc_samples
    if mc_samples > 1:
        sample_var = max(total_sq - mc_samples * mc_mean**2, 0.0) / (mc_samples - 1)
        stderr = math.sqrt(sample_var / mc_samples)
    else:
        stderr = 0.0
    return MomentReport(mean, second, variance, mc_mean, stderr, mc_samples, seed)
