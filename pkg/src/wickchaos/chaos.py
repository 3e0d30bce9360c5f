"""Truncated Wiener-chaos expansions and their Wick algebra.

A :class:`ChaosExpansion` stores ``Phi = sum_alpha c_alpha H_alpha`` where
``H_alpha = prod_i He_{alpha_i}(x_i)`` is a product of probabilists' Hermite
polynomials.  With this basis the S-transform sends ``H_alpha`` to the
monomial ``xi**alpha``, so the Wick product is plain coefficient convolution
of multivariate polynomials.

Dimension indices are 0-based throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    ConsistencyError,
    DegreeOverflow,
    DimensionMismatch,
    IndexOutOfRange,
    NonInvertible,
    SchemaError,
    ZeroExpansion,
)

MAX_DEGREE = 20
INVERTIBILITY_EPS = 1e-12


class MultiIndex:
    """Sparse exponent vector: sorted ``(dim, exponent)`` pairs, exponents > 0.

    Immutable and hashable; ``degree`` is computed once at construction.
    """

    __slots__ = ("pairs", "degree", "_hash")

    def __init__(self, pairs: tuple = ()):
        pairs = tuple((int(d), int(e)) for d, e in pairs)
        prev = -1
        for dim, exp in pairs:
            if dim <= prev:
                raise ValueError(f"multi-index dims must be strictly increasing: {pairs!r}")
            if exp <= 0:
                raise ValueError(f"multi-index exponents must be positive: {pairs!r}")
            prev = dim
        self._set(pairs)

    def _set(self, pairs):
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "degree", sum(e for _, e in pairs))
        object.__setattr__(self, "_hash", hash(pairs))

    def __setattr__(self, name, value):
        raise AttributeError("MultiIndex is immutable")

    @classmethod
    def _trusted(cls, pairs: tuple) -> "MultiIndex":
        obj = object.__new__(cls)
        obj._set(pairs)
        return obj

    def __eq__(self, other):
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return self.pairs == other.pairs

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"MultiIndex({self.pairs!r})"

    @classmethod
    def from_dense(cls, exponents: Iterable[int]) -> "MultiIndex":
        return cls(tuple((i, int(e)) for i, e in enumerate(exponents) if e))

    @classmethod
    def from_dict(cls, entries: Mapping[int, int]) -> "MultiIndex":
        return cls(tuple(sorted((int(i), int(e)) for i, e in entries.items() if e)))

    @classmethod
    def unit(cls, i: int, power: int = 1) -> "MultiIndex":
        return cls(((i, power),)) if power else cls()

    @property
    def factorial(self) -> int:
        return math.prod(math.factorial(e) for _, e in self.pairs)

    @property
    def max_dim(self) -> int:
        return self.pairs[-1][0] if self.pairs else -1

    def get(self, i: int) -> int:
        for dim, exp in self.pairs:
            if dim == i:
                return exp
        return 0

    def dense(self, n: int) -> tuple:
        out = [0] * n
        for dim, exp in self.pairs:
            out[dim] = exp
        return tuple(out)

    def shift(self, i: int, delta: int) -> "MultiIndex | None":
        """Exponent of dim ``i`` changed by ``delta``; None if it would go negative."""
        entries = dict(self.pairs)
        new = entries.get(i, 0) + delta
        if new < 0:
            return None
        entries[i] = new
        return MultiIndex.from_dict(entries)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        entries = dict(self.pairs)
        for dim, exp in other.pairs:
            entries[dim] = entries.get(dim, 0) + exp
        return MultiIndex.from_dict(entries)

    def sort_key(self) -> tuple:
        # graded lexicographic: lower degree first, then larger leading exponents first
        return (self.degree, tuple((d, -e) for d, e in self.pairs))

    def __str__(self) -> str:
        if not self.pairs:
            return "1"
        return "*".join(f"x{d}" if e == 1 else f"x{d}^{e}" for d, e in self.pairs)


EMPTY = MultiIndex()


def multi_indices(dim: int, max_degree: int, min_degree: int = 0) -> Iterator[MultiIndex]:
    """All multi-indices over ``dim`` variables, graded lexicographic order."""

    def compositions(total, n):
        if n == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(total - first, n - 1):
                yield (first,) + rest

    for deg in range(min_degree, max_degree + 1):
        for exps in compositions(deg, dim):
            yield MultiIndex.from_dense(exps)


@lru_cache(maxsize=64)
def basis_exponents(dim: int, max_degree: int) -> np.ndarray:
    """Dense exponent rows of every multi-index up to ``max_degree``, canonical order."""
    rows = np.array([m.dense(dim) for m in multi_indices(dim, max_degree)], dtype=np.int64).reshape(-1, dim)
    rows.setflags(write=False)
    return rows


def _canonical_order(exps: np.ndarray) -> np.ndarray:
    degrees = exps.sum(axis=1)
    keys = [-exps[:, j] for j in range(exps.shape[1] - 1, -1, -1)] + [degrees]
    return np.lexsort(keys)


class ChaosExpansion:
    """Immutable truncated chaos expansion over ``dim`` Gaussian coordinates.

    Terms are kept in canonical (graded lexicographic) order.  Results of the
    Wick algebra are held as exponent/coefficient arrays and the term mapping
    is only materialized on first access.
    """

    __slots__ = ("dim", "max_degree", "_terms", "_arrays")

    def __init__(self, dim: int, max_degree: int, terms: Mapping | None = None):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        if not 0 <= max_degree <= MAX_DEGREE:
            raise DegreeOverflow(
                f"max_degree must lie in [0, {MAX_DEGREE}], got {max_degree}",
                max_degree=max_degree,
            )
        clean = {}
        for alpha, c in (terms or {}).items():
            if not isinstance(alpha, MultiIndex):
                alpha = MultiIndex.from_dict(alpha) if isinstance(alpha, Mapping) else MultiIndex(tuple(alpha))
            if alpha.max_dim >= dim:
                raise IndexOutOfRange(f"term {alpha} uses a dim >= {dim}", term=str(alpha))
            if alpha.degree > max_degree:
                raise DegreeOverflow(
                    f"term {alpha} has degree {alpha.degree} > max_degree {max_degree}",
                    term=str(alpha),
                )
            c = complex(c)
            if c != 0:
                clean[alpha] = c
        ordered = dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key()))
        self._init(dim, max_degree, MappingProxyType(ordered), None)

    def _init(self, dim, max_degree, terms, arrays):
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "max_degree", max_degree)
        object.__setattr__(self, "_terms", terms)
        object.__setattr__(self, "_arrays", arrays)

    def __setattr__(self, name, value):
        raise AttributeError("ChaosExpansion is immutable")

    @classmethod
    def _from_arrays(cls, dim, max_degree, exps, coeffs) -> "ChaosExpansion":
        """Trusted constructor for rows already within dim and max_degree."""
        keep = coeffs != 0
        exps, coeffs = exps[keep], coeffs[keep]
        order = _canonical_order(exps) if len(exps) else np.arange(0)
        exps = np.ascontiguousarray(exps[order])
        coeffs = np.ascontiguousarray(coeffs[order])
        exps.setflags(write=False)
        coeffs.setflags(write=False)
        obj = object.__new__(cls)
        obj._init(dim, max_degree, None, (exps, coeffs))
        return obj

    @property
    def terms(self) -> Mapping:
        if self._terms is None:
            exps, coeffs = self._arrays
            terms = {
                MultiIndex._trusted(tuple((i, e) for i, e in enumerate(row) if e)): c
                for row, c in zip(exps.tolist(), coeffs.tolist())
            }
            object.__setattr__(self, "_terms", MappingProxyType(terms))
        return self._terms

    @property
    def arrays(self) -> tuple:
        """Dense ``(exponents[n, dim], coefficients[n])`` view in canonical order."""
        if self._arrays is None:
            exps = np.zeros((len(self._terms), self.dim), dtype=np.int64)
            coeffs = np.empty(len(self._terms), dtype=complex)
            for k, (alpha, c) in enumerate(self._terms.items()):
                for d, e in alpha.pairs:
                    exps[k, d] = e
                coeffs[k] = c
            exps.setflags(write=False)
            coeffs.setflags(write=False)
            object.__setattr__(self, "_arrays", (exps, coeffs))
        return self._arrays

    @property
    def degrees(self) -> np.ndarray:
        return self.arrays[0].sum(axis=1)

    # constructors
    @classmethod
    def zero(cls, dim: int, max_degree: int) -> "ChaosExpansion":
        return cls(dim, max_degree, {})

    @classmethod
    def constant(cls, value: complex, dim: int, max_degree: int) -> "ChaosExpansion":
        return cls(dim, max_degree, {EMPTY: value})

    @classmethod
    def variable(cls, i: int, dim: int, max_degree: int, coeff: complex = 1.0) -> "ChaosExpansion":
        """The coordinate ``x_i`` (first-order chaos term)."""
        if not 0 <= i < dim:
            raise IndexOutOfRange(f"index {i} out of range for dim {dim}", index=i, dim=dim)
        return cls(dim, max_degree, {MultiIndex.unit(i): coeff})

    # basic inspection
    def __len__(self) -> int:
        return len(self._terms) if self._terms is not None else len(self._arrays[1])

    def __iter__(self):
        return iter(self.terms.items())

    def __getitem__(self, alpha) -> complex:
        if not isinstance(alpha, MultiIndex):
            alpha = MultiIndex(tuple(alpha))
        return self.terms.get(alpha, 0j)

    @property
    def is_zero(self) -> bool:
        return len(self) == 0

    @property
    def constant_term(self) -> complex:
        return self.terms.get(EMPTY, 0j)

    @property
    def degree(self) -> int:
        """Largest degree carrying a nonzero coefficient (0 for the zero expansion)."""
        return int(self.degrees.max()) if len(self) else 0

    @property
    def min_degree(self) -> int:
        if self.is_zero:
            raise ZeroExpansion("the zero expansion has no lowest degree")
        return int(self.degrees.min())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChaosExpansion):
            return NotImplemented
        if self.dim != other.dim or self.max_degree != other.max_degree:
            return False
        (ea, ca), (eb, cb) = self.arrays, other.arrays
        # both sides are in canonical order, so termwise comparison suffices
        return ea.shape == eb.shape and bool(np.array_equal(ea, eb) and np.array_equal(ca, cb))

    __hash__ = None

    def allclose(self, other: "ChaosExpansion", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        if self.dim != other.dim:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(
            abs(self[k] - other[k]) <= atol + rtol * max(abs(self[k]), abs(other[k])) for k in keys
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{alpha}: {c:.6g}" for alpha, c in list(self.terms.items())[:8])
        more = ", ..." if len(self.terms) > 8 else ""
        return f"ChaosExpansion(dim={self.dim}, D={self.max_degree}, {{{body}{more}}})"

    # term-wise linear structure
    def _check_dim(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch(
                f"dimension mismatch: {self.dim} vs {other.dim}", left=self.dim, right=other.dim
            )

    def __add__(self, other: "ChaosExpansion") -> "ChaosExpansion":
        self._check_dim(other)
        out = dict(self.terms)
        for alpha, c in other.terms.items():
            out[alpha] = out.get(alpha, 0j) + c
        return ChaosExpansion(self.dim, max(self.max_degree, other.max_degree), out)

    def __neg__(self) -> "ChaosExpansion":
        return ChaosExpansion(self.dim, self.max_degree, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "ChaosExpansion") -> "ChaosExpansion":
        return self + (-other)

    def __mul__(self, scalar) -> "ChaosExpansion":
        if isinstance(scalar, ChaosExpansion):
            raise TypeError("use wick_product, convolution or pointwise_product for expansions")
        return ChaosExpansion(self.dim, self.max_degree, {a: c * scalar for a, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "ChaosExpansion":
        return ChaosExpansion(self.dim, self.max_degree, {a: c / scalar for a, c in self.terms.items()})

    def with_max_degree(self, max_degree: int) -> "ChaosExpansion":
        return truncate(self, max_degree)

    # serialization
    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "max_degree": self.max_degree,
            "terms": [
                {"alpha": [list(p) for p in alpha.pairs], "re": c.real, "im": c.imag}
                for alpha, c in self.terms.items()
            ],
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: Mapping) -> "ChaosExpansion":
        try:
            dim = data["dim"]
            max_degree = data["max_degree"]
            raw_terms = data["terms"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"missing field {exc}", field=str(exc)) from None
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise SchemaError(f"dim must be a positive integer, got {dim!r}", field="dim")
        if not isinstance(max_degree, int) or isinstance(max_degree, bool) or not 0 <= max_degree <= MAX_DEGREE:
            raise SchemaError(
                f"max_degree must be an integer in [0, {MAX_DEGREE}], got {max_degree!r}",
                field="max_degree",
            )
        if not isinstance(raw_terms, list):
            raise SchemaError("terms must be a list", field="terms")
        terms = {}
        for k, term in enumerate(raw_terms):
            try:
                pairs = tuple((int(i), int(e)) for i, e in term["alpha"])
                if any(isinstance(x, bool) or not isinstance(x, int) for p in term["alpha"] for x in p):
                    raise ValueError("alpha entries must be integers")
                alpha = MultiIndex(pairs)
                value = complex(float(term["re"]), float(term["im"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"term {k}: malformed ({exc})", term_index=k) from None
            if alpha.max_dim >= dim:
                raise SchemaError(f"term {k}: alpha {alpha} uses a dim >= {dim}", term_index=k, alpha=str(alpha))
            if alpha.degree > max_degree:
                raise SchemaError(
                    f"term {k}: alpha {alpha} has degree {alpha.degree} > max_degree {max_degree}",
                    term_index=k,
                    alpha=str(alpha),
                )
            if alpha in terms:
                raise SchemaError(f"term {k}: duplicate alpha {alpha}", term_index=k, alpha=str(alpha))
            terms[alpha] = value
        return cls(dim, max_degree, terms)

    @classmethod
    def from_json(cls, text: str) -> "ChaosExpansion":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)


# ---------------------------------------------------------------------------
# Wick algebra


def _unique_rows(rows: np.ndarray, cap: int):
    """``np.unique(rows, axis=0, return_inverse=True)``, via integer codes when they fit."""
    base = cap + 1
    if rows.shape[1] * math.log2(base) < 62:
        codes = rows @ (base ** np.arange(rows.shape[1], dtype=np.int64))
        _, first, inverse = np.unique(codes, return_index=True, return_inverse=True)
        return rows[first], inverse.reshape(-1)
    uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
    return uniq, inverse.reshape(-1)


def _convolve(a: ChaosExpansion, b: ChaosExpansion, cap: int, result_degree: int) -> ChaosExpansion:
    """Coefficient convolution, dropping output degrees above ``cap``.

    Pairs are accumulated with ``a`` outer and ``b`` inner, both in canonical
    order, so any subset of the pairs keeps its relative summation order.
    """
    a._check_dim(b)
    ea, ca = a.arrays
    eb, cb = b.arrays
    if not len(ca) or not len(cb):
        return ChaosExpansion.zero(a.dim, result_degree)
    sums = (ea[:, None, :] + eb[None, :, :]).reshape(-1, a.dim)
    prods = np.multiply.outer(ca, cb).reshape(-1)
    keep = sums.sum(axis=1) <= cap
    if not keep.all():
        sums, prods = sums[keep], prods[keep]
        if not len(prods):
            return ChaosExpansion.zero(a.dim, result_degree)
    uniq, inverse = _unique_rows(sums, cap)
    re = np.bincount(inverse, weights=prods.real, minlength=len(uniq))
    im = np.bincount(inverse, weights=prods.imag, minlength=len(uniq))
    return ChaosExpansion._from_arrays(a.dim, result_degree, uniq, re + 1j * im)


def wick_unit(dim: int, max_degree: int) -> ChaosExpansion:
    return ChaosExpansion.constant(1.0, dim, max_degree)


def wick_product(a: ChaosExpansion, b: ChaosExpansion, mode: str = "exact") -> ChaosExpansion:
    """Wick product: the chaos expansion whose S-transform is ``Sa * Sb``.

    ``exact`` keeps every term (result degree ``a.D + b.D``); ``capped``
    works in the quotient ring truncated at ``min(a.D, b.D)``.
    """
    a._check_dim(b)
    if mode == "exact":
        d = a.max_degree + b.max_degree
        if d > MAX_DEGREE:
            raise DegreeOverflow(
                f"exact product degree {d} exceeds cap {MAX_DEGREE}; use mode='capped'",
                degree=d,
            )
        return _convolve(a, b, d, d)
    if mode == "capped":
        d = min(a.max_degree, b.max_degree)
        return _convolve(a, b, d, d)
    raise ValueError(f"unknown product mode {mode!r}")


def wick_power(a: ChaosExpansion, k: int, mode: str = "exact") -> ChaosExpansion:
    if k < 0:
        raise ValueError("wick_power needs k >= 0")
    if k == 0:
        return wick_unit(a.dim, a.max_degree if mode == "capped" else 0)
    out = a
    for _ in range(k - 1):
        out = wick_product(out, a, mode)
    return out


def wick_exp(a: ChaosExpansion) -> ChaosExpansion:
    """Wick exponential ``e^{c0} * sum_k (a - c0)^{<>k} / k!`` in the degree-D quotient."""
    c0 = a.constant_term
    u = a - ChaosExpansion.constant(c0, a.dim, a.max_degree)
    term = wick_unit(a.dim, a.max_degree)
    total = term
    for k in range(1, a.max_degree + 1):
        term = wick_product(term, u, "capped") / k
        if term.is_zero:
            break
        total = total + term
    return total * np.exp(c0) if c0 != 0 else total


def wick_inverse(a: ChaosExpansion) -> ChaosExpansion:
    """Inverse under the capped Wick product, via the geometric series in ``u = a/a0 - 1``."""
    a0 = a.constant_term
    if abs(a0) <= INVERTIBILITY_EPS:
        raise NonInvertible(
            "constant term is (numerically) zero; the element lies in the maximal graded ideal",
            constant_term=[a0.real, a0.imag],
        )
    unit = wick_unit(a.dim, a.max_degree)
    v = unit - a / a0
    power = unit
    total = unit
    for _ in range(a.max_degree):
        power = wick_product(power, v, "capped")
        if power.is_zero:
            break
        total = total + power
    return total / a0


def truncate(a: ChaosExpansion, max_degree: int) -> ChaosExpansion:
    return ChaosExpansion(
        a.dim, max_degree, {alpha: c for alpha, c in a.terms.items() if alpha.degree <= max_degree}
    )


def lowest_part(a: ChaosExpansion) -> ChaosExpansion:
    """Homogeneous component of minimal degree."""
    d = a.min_degree
    exps, coeffs = a.arrays
    keep = a.degrees == d
    return ChaosExpansion._from_arrays(a.dim, a.max_degree, exps[keep], coeffs[keep])


def l2_norm_sq(a: ChaosExpansion) -> float:
    """``E|Phi|^2 = sum alpha! |c_alpha|^2`` (chaos terms are orthogonal)."""
    return float(sum(alpha.factorial * abs(c) ** 2 for alpha, c in a.terms.items()))


def degree_mass(a: ChaosExpansion) -> list:
    """L2 mass carried by each homogeneous chaos layer, index = degree."""
    mass = [0.0] * (a.max_degree + 1)
    for alpha, c in a.terms.items():
        mass[alpha.degree] += alpha.factorial * abs(c) ** 2
    return mass


def gaussian_kernel(dim: int, max_degree: int, sign: int = 1) -> ChaosExpansion:
    """Truncation of ``S^{-1} exp(+-1/2 <eta, eta>)``.

    The coefficient on ``alpha = 2k`` is ``(+-1/2)^{|k|} / prod k_i!``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    half = 0.5 * sign
    terms = {}
    for k in multi_indices(dim, max_degree // 2):
        alpha = MultiIndex(tuple((d, 2 * e) for d, e in k.pairs))
        terms[alpha] = half ** k.degree / k.factorial
    return ChaosExpansion(dim, max_degree, terms)


def delta0(dim: int, max_degree: int) -> ChaosExpansion:
    """White-noise delta functional, the unit of :func:`convolution`."""
    return gaussian_kernel(dim, max_degree, -1)


def convolution(a: ChaosExpansion, b: ChaosExpansion, max_degree: int | None = None) -> ChaosExpansion:
    """T-transform product ``a * b = a <> b <> exp<>(1/2 sum x_i^{<>2})``.

    Truncated at ``min(a.D, b.D)`` unless ``max_degree`` is given.
    """
    a._check_dim(b)
    d = min(a.max_degree, b.max_degree) if max_degree is None else max_degree
    ab = _convolve(a, b, d, d)
    return _convolve(ab, gaussian_kernel(a.dim, d, 1), d, d)


# ---------------------------------------------------------------------------
# zero-divisor probe


@dataclass(frozen=True)
class ProbeReport:
    product_is_zero: bool
    lowest_degree_a: int | None
    lowest_degree_b: int | None
    vanishing_factor: str | None = None
    witness: MultiIndex | None = None
    witness_point: tuple | None = None
    witness_value: complex | None = None

    def to_dict(self) -> dict:
        out = {
            "product_is_zero": self.product_is_zero,
            "lowest_degree_a": self.lowest_degree_a,
            "lowest_degree_b": self.lowest_degree_b,
            "vanishing_factor": self.vanishing_factor,
            "witness": None if self.witness is None else [list(p) for p in self.witness.pairs],
        }
        if self.witness_point is not None:
            out["witness_point"] = [[z.real, z.imag] for z in self.witness_point]
            out["witness_value"] = [self.witness_value.real, self.witness_value.imag]
        return out


def nonvanishing_point(a: ChaosExpansion, b: ChaosExpansion, max_halvings: int = 40):
    """Find xi with ``Sa(xi) * Sb(xi) != 0`` by perturbing a base point.

    Starting from ``f`` we try ``f + lam * g`` along coordinate directions with
    shrinking ``lam``; a nonzero polynomial cannot vanish on all of them.
    """
    from .transforms import s_transform_eval

    n = a.dim
    base = np.array([(0.6 + 0.3j) / (k + 1) for k in range(n)])
    candidates = [base]
    for k in range(n):
        g = np.zeros(n, dtype=complex)
        g[k] = 1.0
        lam = 1.0
        for _ in range(max_halvings):
            candidates.append(base + lam * g)
            lam *= 0.5
    for xi in candidates:
        if s_transform_eval(a, xi) * s_transform_eval(b, xi) != 0:
            return tuple(complex(z) for z in xi)
    return None


def zero_divisor_probe(a: ChaosExpansion, b: ChaosExpansion) -> ProbeReport:
    """Exact-mode Wick product plus diagnostics on why it is (non)zero."""
    from .transforms import s_transform_eval

    a._check_dim(b)
    product = wick_product(a, b, "exact")
    low_a = None if a.is_zero else a.min_degree
    low_b = None if b.is_zero else b.min_degree
    if product.is_zero:
        if a.is_zero and b.is_zero:
            factor = "both"
        elif a.is_zero:
            factor = "first"
        elif b.is_zero:
            factor = "second"
        else:
            raise ConsistencyError(
                "product of two nonzero expansions came out zero (floating-point underflow?)",
                lowest_degree_a=low_a,
                lowest_degree_b=low_b,
            )
        return ProbeReport(True, low_a, low_b, vanishing_factor=factor)
    witness = next(iter(lowest_part(product).terms))
    point = nonvanishing_point(a, b)
    value = None if point is None else s_transform_eval(product, np.array(point))
    return ProbeReport(False, low_a, low_b, witness=witness, witness_point=point, witness_value=value)
