"""Annihilation/creation operators on chaos expansions and the 1-D Gaussian analogy.

``annihilate(i, .)`` is the Hida derivative along basis direction ``i``
(``d/dxi_i`` on the S-transform side); ``create(i, .)`` is its adjoint
(multiplication by ``xi_i``).  Multiplication by the coordinate ``x_i``
splits as ``annihilate + create``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .chaos import MAX_DEGREE, ChaosExpansion, MultiIndex
from .errors import DegreeOverflow, DimensionMismatch, IndexOutOfRange, QuadratureError
from .transforms import MAX_HERMITE_ORDER, QuadratureRule


def _check_index(i: int, a: ChaosExpansion):
    if not 0 <= i < a.dim:
        raise IndexOutOfRange(f"index {i} out of range for dim {a.dim}", index=i, dim=a.dim)


def annihilate(i: int, a: ChaosExpansion) -> ChaosExpansion:
    _check_index(i, a)
    out = {}
    for alpha, c in a.terms.items():
        e = alpha.get(i)
        if e:
            out[alpha.shift(i, -1)] = e * c
    return ChaosExpansion(a.dim, a.max_degree, out)


def create(i: int, a: ChaosExpansion) -> ChaosExpansion:
    """Adjoint of :func:`annihilate`; terms pushed past ``a.max_degree`` are dropped."""
    _check_index(i, a)
    out = {}
    for alpha, c in a.terms.items():
        if alpha.degree < a.max_degree:
            out[alpha.shift(i, 1)] = c
    return ChaosExpansion(a.dim, a.max_degree, out)


def _require_headroom(a: ChaosExpansion, what: str):
    if a.terms and a.degree >= a.max_degree:
        raise DegreeOverflow(
            f"{what} needs deg(a) < max_degree ({a.degree} >= {a.max_degree}); creation would be clipped",
            degree=a.degree,
            max_degree=a.max_degree,
        )


def ccr_commutator(i: int, j: int, a: ChaosExpansion) -> ChaosExpansion:
    """``(d_i d_j^* - d_j^* d_i)(a)``; equals ``delta_ij * a``.

    Both compositions are applied to each basis term with unit coefficient
    and their integer weights are combined before scaling by the term's
    coefficient, so ``(k + 1) c - k c`` never goes through floating point.
    """
    _check_index(i, a)
    _check_index(j, a)
    _require_headroom(a, "ccr_commutator")
    out = {}
    for alpha, c in a.terms.items():
        weights = {}
        up = alpha.shift(j, 1)  # d_j^* then d_i
        if up.get(i):
            target = up.shift(i, -1)
            weights[target] = weights.get(target, 0) + up.get(i)
        if alpha.get(i):  # d_i then d_j^*
            target = alpha.shift(i, -1).shift(j, 1)
            weights[target] = weights.get(target, 0) - alpha.get(i)
        for target, w in weights.items():
            if w:
                out[target] = out.get(target, 0j) + w * c
    return ChaosExpansion(a.dim, a.max_degree, out)


# ---------------------------------------------------------------------------
# pointwise products


def _linearization(m: int, n: int):
    """He_m He_n = sum_k C(m,k) C(n,k) k! He_{m+n-2k}."""
    return [(m + n - 2 * k, math.comb(m, k) * math.comb(n, k) * math.factorial(k)) for k in range(min(m, n) + 1)]


def pointwise_product(a: ChaosExpansion, b: ChaosExpansion, headroom: int | None = None) -> ChaosExpansion:
    """Chaos expansion of the ordinary product of the two random variables.

    The result is truncated at ``max(a.D, b.D) + headroom``; the default
    headroom keeps every term, which is what makes the linearization exact.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}", left=a.dim, right=b.dim)
    base = max(a.max_degree, b.max_degree)
    if headroom is None:
        cap = max(base, a.degree + b.degree)
    else:
        cap = base + headroom
    if cap > MAX_DEGREE:
        raise DegreeOverflow(f"pointwise product degree {cap} exceeds cap {MAX_DEGREE}", degree=cap)
    out = {}
    for alpha, ca in a.terms.items():
        ea = dict(alpha.pairs)
        for beta, cb in b.terms.items():
            eb = dict(beta.pairs)
            dims = sorted(set(ea) | set(eb))
            factors = [_linearization(ea.get(d, 0), eb.get(d, 0)) for d in dims]
            cab = ca * cb
            for choice in product(*factors):
                if sum(e for e, _ in choice) > cap:
                    continue
                weight = math.prod(w for _, w in choice)
                gamma = MultiIndex(tuple((d, e) for d, (e, _) in zip(dims, choice) if e))
                out[gamma] = out.get(gamma, 0j) + cab * weight
    return ChaosExpansion(a.dim, cap, out)


def multiply_coordinate(i: int, a: ChaosExpansion) -> ChaosExpansion:
    """Pointwise multiplication by ``x_i``; equals ``annihilate(i, a) + create(i, a)``."""
    _check_index(i, a)
    _require_headroom(a, "multiply_coordinate")
    x = ChaosExpansion.variable(i, a.dim, a.max_degree)
    prod_ = pointwise_product(x, a)
    return ChaosExpansion(a.dim, a.max_degree, dict(prod_.terms))


def pairing(a: ChaosExpansion, b: ChaosExpansion) -> complex:
    """Bilinear duality ``<<a, b>> = sum alpha! a_alpha b_alpha`` (no conjugation)."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}", left=a.dim, right=b.dim)
    total = 0j
    for alpha, c in a.terms.items():
        other = b.terms.get(alpha)
        if other is not None:
            total += alpha.factorial * c * other
    return total


# ---------------------------------------------------------------------------
# one-variable symbolic polynomials


@dataclass(frozen=True)
class Polynomial1D:
    """Dense polynomial in one variable, ``coefficients[k]`` multiplies ``x**k``.

    Coefficients may be ints, Fractions or complex numbers; trailing zeros are
    stripped so the zero polynomial is ``()``.
    """

    coefficients: tuple = ()

    def __post_init__(self):
        coeffs = list(self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def constant(cls, c=1) -> "Polynomial1D":
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __add__(self, other: "Polynomial1D") -> "Polynomial1D":
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0,) * (n - len(self.coefficients))
        b = other.coefficients + (0,) * (n - len(other.coefficients))
        return Polynomial1D(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Polynomial1D":
        return Polynomial1D(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "Polynomial1D") -> "Polynomial1D":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial1D":
        if not isinstance(other, Polynomial1D):
            return Polynomial1D(tuple(c * other for c in self.coefficients))
        if not self.coefficients or not other.coefficients:
            return Polynomial1D()
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial1D(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> "Polynomial1D":
        return Polynomial1D(tuple(k * c for k, c in enumerate(self.coefficients) if k))

    def times_x(self) -> "Polynomial1D":
        return Polynomial1D((0,) + self.coefficients) if self.coefficients else self

    def gaussian_adjoint(self) -> "Polynomial1D":
        """``(x - d/dx) f``: the adjoint of d/dx under the standard Gaussian measure."""
        return self.times_x() - self.derivative()

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coefficients):
            acc = acc * x + complex(c)
        return acc

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            sign = "-" if _is_negative(c) else "+"
            mag = -c if sign == "-" else c
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _is_negative(c) -> bool:
    try:
        return c < 0
    except TypeError:
        return False


def hermite_generate(n: int) -> Polynomial1D:
    """Apply ``(x - d/dx)`` n times to the constant 1, in exact integer arithmetic."""
    if not 0 <= n <= MAX_HERMITE_ORDER:
        raise ValueError(f"hermite order must lie in [0, {MAX_HERMITE_ORDER}], got {n}")
    poly = Polynomial1D.constant(1)
    for _ in range(n):
        poly = poly.gaussian_adjoint()
    return poly


def adjointness_check(f: Polynomial1D, g: Polynomial1D, rule: QuadratureRule) -> tuple:
    """Both sides of ``E[((x - d/dx) f) g] = E[f g']`` under the Gaussian measure."""
    needed = (max(f.degree, 0) + max(g.degree, 0) + 2) / 2 + 1
    if rule.order < needed:
        raise QuadratureError("rule too coarse for these polynomials", order=rule.order, needed=needed)
    x = rule.nodes
    lhs = complex(np.sum(rule.weights * f.gaussian_adjoint()(x) * g(x)))
    rhs = complex(np.sum(rule.weights * f(x) * g.derivative()(x)))
    return lhs, rhs


def gaussian_moment(k: int) -> int:
    """``E[X^k]`` for standard normal X."""
    return 0 if k % 2 else math.prod(range(k - 1, 0, -2))


def s1_polynomial(f: Polynomial1D) -> Polynomial1D:
    """One-variable S-transform ``xi -> E[f(X + xi)]`` computed exactly.

    Uses the binomial expansion of ``(X + xi)^n`` and Gaussian moments.
    """
    out = Polynomial1D()
    for n, c in enumerate(f.coefficients):
        if c == 0:
            continue
        coeffs = [0] * (n + 1)
        for k in range(n + 1):
            coeffs[n - k] = math.comb(n, k) * gaussian_moment(k)
        out = out + Polynomial1D(tuple(coeffs)) * c
    return out


def s1_quadrature(f: Polynomial1D, xi: float, rule: QuadratureRule) -> complex:
    """One-variable S-transform by Gauss-Hermite quadrature."""
    return complex(np.sum(rule.weights * f(rule.nodes + xi)))
