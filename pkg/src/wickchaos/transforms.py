"""S- and T-transforms: fast polynomial evaluation plus Gaussian-integral oracles.

The polynomial path uses ``S(H_alpha)(xi) = xi**alpha`` and
``T(phi)(xi) = exp(-<xi, xi>/2) * S(phi)(i xi)``.  The quadrature path
integrates the defining formulas directly against the standard Gaussian
measure with a tensor-product Gauss-Hermite rule; it is an independent
check on the polynomial path, not a production route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from numpy.polynomial import hermite_e

from .chaos import ChaosExpansion
from .errors import DimensionMismatch, QuadratureError

MAX_QUADRATURE_DIM = 3
MAX_HERMITE_ORDER = 30


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss-Hermite rule for the weight ``exp(-x^2/2)/sqrt(2 pi)``; weights sum to 1."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        if abs(self.weights.sum() - 1.0) > 1e-14:
            raise QuadratureError("weights do not sum to one", total=float(self.weights.sum()))
        for k in range(2 * self.order):
            moment = float(np.sum(self.weights * self.nodes**k))
            if k % 2:
                # odd moments vanish; judge against the size of the even neighbour
                scale = math.sqrt(_double_factorial(2 * k - 1))
                if abs(moment) > 1e-12 * scale:
                    raise QuadratureError(f"odd moment {k} not reproduced", moment=moment)
            else:
                exact = _double_factorial(k - 1)
                if abs(moment - exact) > 1e-12 * exact:
                    raise QuadratureError(f"even moment {k} not reproduced", moment=moment, exact=exact)

    def integrate(self, f) -> complex:
        return np.sum(self.weights * f(self.nodes))


def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


@lru_cache(maxsize=None)
def gauss_hermite(order: int) -> QuadratureRule:
    if order < 1:
        raise QuadratureError("quadrature order must be positive", order=order)
    nodes, weights = hermite_e.hermegauss(order)
    weights = weights / weights.sum()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, order)


def default_rule(a: ChaosExpansion, oscillatory: bool = False) -> QuadratureRule:
    # exp(i x xi) is not a polynomial: at |xi| = 2 the D + 8 rule is only good
    # to ~5e-5 for D = 0, while D + 16 reaches rounding level
    return gauss_hermite(a.max_degree + (16 if oscillatory else 8))


# ---------------------------------------------------------------------------
# pointwise realisation


def hermite_eval(n: int, x):
    """Probabilists' Hermite polynomial He_n(x); works on scalars and arrays."""
    if not 0 <= n <= MAX_HERMITE_ORDER:
        raise ValueError(f"hermite order must lie in [0, {MAX_HERMITE_ORDER}], got {n}")
    prev, cur = np.ones_like(x), x
    if n == 0:
        return prev if isinstance(x, np.ndarray) else 1 + 0 * x
    for k in range(1, n):
        prev, cur = cur, x * cur - k * prev
    return cur


def hermite_table(x: np.ndarray, max_degree: int) -> np.ndarray:
    """``out[..., n] = He_n(x)`` for n = 0..max_degree."""
    x = np.asarray(x)
    out = np.empty(x.shape + (max_degree + 1,), dtype=np.result_type(x, float))
    out[..., 0] = 1.0
    if max_degree >= 1:
        out[..., 1] = x
    for k in range(1, max_degree):
        out[..., k + 1] = x * out[..., k] - k * out[..., k - 1]
    return out


def _monomial_sum(a: ChaosExpansion, table: np.ndarray):
    """``sum_alpha c_alpha prod_i table[..., i, alpha_i]`` in canonical term order."""
    exps, coeffs = a.arrays
    if not len(coeffs):
        return np.zeros(table.shape[:-2], dtype=complex)
    cols = np.arange(a.dim)
    vals = table[..., cols, exps]  # (..., n_terms, dim)
    return np.sum(np.prod(vals, axis=-1) * coeffs, axis=-1)


def _as_point(a: ChaosExpansion, x, what="x") -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape[-1:] != (a.dim,):
        raise DimensionMismatch(
            f"{what} has length {x.shape[-1] if x.ndim else 0}, expansion has dim {a.dim}",
            expected=a.dim,
        )
    return x


def chaos_eval(a: ChaosExpansion, x):
    """Evaluate ``sum c_alpha prod He_{alpha_i}(x_i)`` at one point or a batch ``(n, dim)``."""
    x = _as_point(a, x)
    value = _monomial_sum(a, hermite_table(x, a.max_degree))
    return complex(value) if x.ndim == 1 else value


def s_transform_eval(a: ChaosExpansion, xi) -> complex:
    """Polynomial S-transform ``sum c_alpha xi**alpha``."""
    xi = _as_point(a, xi, "xi")
    powers = xi[..., None] ** np.arange(a.max_degree + 1)
    value = _monomial_sum(a, powers)
    return complex(value) if xi.ndim == 1 else value


def t_transform_eval(a: ChaosExpansion, xi) -> complex:
    xi = _as_point(a, xi, "xi")
    damping = np.exp(-0.5 * np.sum(xi * xi, axis=-1))
    value = damping * s_transform_eval(a, 1j * xi)
    return complex(value) if xi.ndim == 1 else value


# ---------------------------------------------------------------------------
# quadrature oracles


def _tensor_grid(rule: QuadratureRule, dim: int):
    pts = np.array(list(product(rule.nodes, repeat=dim)))
    wts = np.prod(np.array(list(product(rule.weights, repeat=dim))), axis=1)
    return pts, wts


def _real_point(a, xi):
    xi = np.asarray(xi)
    if np.iscomplexobj(xi):
        if np.any(xi.imag != 0):
            raise ValueError("quadrature oracles take real test-function coordinates")
        xi = xi.real
    xi = xi.astype(float)
    if xi.shape != (a.dim,):
        raise DimensionMismatch(f"xi has shape {xi.shape}, expansion has dim {a.dim}", expected=a.dim)
    return xi


def s_transform_quadrature(a: ChaosExpansion, xi, rule: QuadratureRule | None = None) -> complex:
    """``int Phi(x + xi) dmu(x)`` by tensor-product Gauss-Hermite."""
    if a.dim > MAX_QUADRATURE_DIM:
        raise QuadratureError(f"quadrature oracle limited to dim <= {MAX_QUADRATURE_DIM}", dim=a.dim)
    rule = rule or default_rule(a)
    if rule.order < a.max_degree + 4:
        raise QuadratureError("rule too coarse for this degree", order=rule.order, needed=a.max_degree + 4)
    xi = _real_point(a, xi)
    pts, wts = _tensor_grid(rule, a.dim)
    return complex(np.sum(wts * chaos_eval(a, pts + xi)))


def t_transform_quadrature(a: ChaosExpansion, xi, rule: QuadratureRule | None = None) -> complex:
    """``int Phi(x) exp(i <x, xi>) dmu(x)`` by tensor-product Gauss-Hermite."""
    if a.dim > MAX_QUADRATURE_DIM:
        raise QuadratureError(f"quadrature oracle limited to dim <= {MAX_QUADRATURE_DIM}", dim=a.dim)
    rule = rule or default_rule(a, oscillatory=True)
    if rule.order < a.max_degree + 8:
        raise QuadratureError("rule too coarse for this degree", order=rule.order, needed=a.max_degree + 8)
    xi = _real_point(a, xi)
    pts, wts = _tensor_grid(rule, a.dim)
    return complex(np.sum(wts * chaos_eval(a, pts) * np.exp(1j * (pts @ xi))))
