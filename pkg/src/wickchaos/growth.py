"""Numerical consistency checks for the U-functional conditions.

A functional F on test functions is sampled along rays ``z * xi`` with the
test function given by its coordinates in the Hermite-function basis of
L2(R).  Growth is compared against ``K * exp(a |z|^2 ||H^p xi||^2)`` where H
is the harmonic-oscillator Hamiltonian with eigenvalues ``2k + 2``.  None of
this decides U-functional-hood; it reports whether the sampled range is
consistent with the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .chaos import ChaosExpansion, gaussian_kernel
from .transforms import s_transform_eval

VERDICT_TOLERANCE = 0.5  # log-units on the top quartile of radii
DEFAULT_RADII = tuple(0.5 * 2**k for k in range(6))
DEFAULT_PHASES = 32


def osc_norm(xi, p: int) -> float:
    """``||H^p xi||_2`` for Hermite-basis coordinates ``xi``."""
    xi = np.asarray(xi, dtype=float)
    eigen = 2.0 * np.arange(len(xi)) + 2.0
    return float(np.sqrt(np.sum(eigen ** (2 * p) * xi**2)))


@dataclass(frozen=True)
class Functional:
    """A complex functional of Hermite coordinates.

    ``polynomial`` marks chaos-backed functionals, which are entire by
    construction.
    """

    name: str
    func: Callable
    polynomial: bool = False
    expansion: ChaosExpansion | None = field(default=None, repr=False)

    def __call__(self, zeta) -> complex:
        return self.func(np.asarray(zeta, dtype=complex))


def chaos_functional(a: ChaosExpansion, name: str = "chaos") -> Functional:
    return Functional(name, lambda zeta: s_transform_eval(a, zeta), polynomial=True, expansion=a)


def _exp_linear(zeta):
    return np.exp(zeta[0])


def _exp_cubic(zeta):
    return np.exp(zeta[0] ** 3)


def _abs_z(zeta):
    return complex(abs(zeta[0]))


def _gaussian_kernel_s(zeta):
    return np.exp(0.5 * np.sum(zeta * zeta))


REGISTRY = {
    "exp_linear": Functional("exp_linear", _exp_linear),
    "exp_cubic": Functional("exp_cubic", _exp_cubic),
    "abs_z": Functional("abs_z", _abs_z),
    "gaussian_kernel_s": Functional("gaussian_kernel_s", _gaussian_kernel_s),
}


def registered(name: str) -> Functional:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown closed form {name!r}; choose from {sorted(REGISTRY)}") from None


def gaussian_kernel_functional(dim: int, max_degree: int) -> Functional:
    """Chaos-backed truncation of the S-transform ``exp(<xi, xi>/2)``."""
    return chaos_functional(gaussian_kernel(dim, max_degree, 1), "gaussian_kernel_trunc")


@dataclass(frozen=True)
class GrowthReport:
    fitted_log_K: float
    fitted_a: float
    p_used: int
    max_residual: float
    samples: tuple
    verdict: str
    witness_radius: float | None = None

    def to_dict(self) -> dict:
        return {
            "fitted_log_K": self.fitted_log_K,
            "fitted_a": self.fitted_a,
            "p_used": self.p_used,
            "max_residual": self.max_residual,
            "samples": [list(s) for s in self.samples],
            "verdict": self.verdict,
            "witness_radius": self.witness_radius,
        }


def _ray_max_log(F: Functional, xi: np.ndarray, r: float, phases: int) -> float:
    best = -math.inf
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(phases):
            z = r * np.exp(2j * math.pi * k / phases)
            try:
                value = complex(F(z * xi))
            except OverflowError:
                return math.inf
            mag = abs(value)
            if not math.isfinite(mag):
                return math.inf
            if mag > 0:
                best = max(best, math.log(mag))
    return best


def _line_fit(x: np.ndarray, y: np.ndarray):
    """Least-squares slope (clipped at 0) and the intercept making it an upper envelope."""
    if len(x) >= 2 and np.ptp(x) > 0:
        slope = float(np.polyfit(x, y, 1)[0])
    else:
        slope = 0.0
    slope = max(slope, 0.0)
    return slope, float(np.max(y - slope * x))


def ray_growth_fit(
    F: Functional,
    xi,
    p: int = 0,
    radii=DEFAULT_RADII,
    phases: int = DEFAULT_PHASES,
    tolerance: float = VERDICT_TOLERANCE,
) -> GrowthReport:
    """Fit ``max_theta log|F(r e^{i theta} xi)| <= log K + a r^2 ||H^p xi||^2``.

    The slope ``a`` comes from least squares on ``(r^2 ||H^p xi||^2, M_r)``
    and ``log K`` is lifted so the bound covers every sample.  The verdict
    looks at the top quartile of radii: a bound fitted on the smaller radii
    must still hold there to within ``tolerance`` log-units.
    """
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be a nonempty increasing list of positive reals")
    xi = np.asarray(xi, dtype=float)
    norm_sq = osc_norm(xi, p) ** 2

    samples = []
    for r in radii:
        m = _ray_max_log(F, xi, r, phases)
        if m == math.inf:
            return GrowthReport(math.nan, math.nan, p, math.inf, tuple(samples), "super-quadratic", witness_radius=r)
        samples.append((r, m))

    finite = [(r, m) for r, m in samples if m > -math.inf]
    if not finite:
        # F vanishes on every sample: any K, a work
        return GrowthReport(-math.inf, 0.0, p, 0.0, tuple(samples), "bounded")
    x = np.array([r * r * norm_sq for r, _ in finite])
    y = np.array([m for _, m in finite])
    slope, log_k = _line_fit(x, y)

    n_top = max(1, math.ceil(len(finite) / 4))
    max_residual = 0.0
    witness = None
    if len(finite) - n_top >= 2:
        cal_slope, cal_log_k = _line_fit(x[:-n_top], y[:-n_top])
        excess = y[-n_top:] - (cal_log_k + cal_slope * x[-n_top:])
        max_residual = float(max(np.max(excess), 0.0))
        if max_residual > tolerance:
            witness = finite[len(finite) - n_top + int(np.argmax(excess))][0]
    verdict = "super-quadratic" if witness is not None else "bounded"
    return GrowthReport(log_k, slope, p, max_residual, tuple(samples), verdict, witness_radius=witness)


def entirety_check(F: Functional, xi, eta, radius: float = 2.0, grid: int = 16, h: float = 1e-5) -> bool:
    """Is ``z -> F(z xi + eta)`` complex-differentiable on the disc ``|z| <= radius``?

    Chaos-backed functionals are polynomials and pass structurally.  Closed
    forms are checked with the Cauchy-Riemann residual ``|dF/d z-bar|`` from
    central differences on a ``grid x grid`` lattice clipped to the disc.
    """
    if F.polynomial:
        return True
    xi = np.asarray(xi, dtype=complex)
    eta = np.asarray(eta, dtype=complex)

    def g(z):
        return complex(F(z * xi + eta))

    axis = np.linspace(-radius, radius, grid)
    worst = 0.0
    for u in axis:
        for v in axis:
            z = complex(u, v)
            if abs(z) > radius:
                continue
            dx = (g(z + h) - g(z - h)) / (2 * h)
            dy = (g(z + 1j * h) - g(z - 1j * h)) / (2 * h)
            dzbar = 0.5 * (dx + 1j * dy)
            dz = 0.5 * (dx - 1j * dy)
            worst = max(worst, abs(dzbar) / (1.0 + abs(dz)))
    return worst < 1e-6
