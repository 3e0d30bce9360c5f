"""Seeded random expansions for property runs, demos and tests."""

from __future__ import annotations

import numpy as np

from .chaos import ChaosExpansion, basis_exponents


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream: Philox keyed by ``seed``, jumped by ``trial``."""
    return np.random.Generator(np.random.Philox(key=seed).jumped(trial))


def random_expansion(
    rng: np.random.Generator,
    dim: int,
    max_degree: int,
    density: float | None = None,
    min_degree: int = 0,
    complex_coeffs: bool = False,
    dyadic: bool = False,
) -> ChaosExpansion:
    """Random nonzero expansion with terms of degree in ``[min_degree, max_degree]``.

    ``dyadic`` draws coefficients k/8 with small integers k so that sums and
    products stay exact in double precision.
    """
    basis = basis_exponents(dim, max_degree)
    basis = basis[basis.sum(axis=1) >= min_degree]
    if density is None:
        density = rng.uniform(0.1, 1.0)
    while True:
        mask = rng.random(len(basis)) < density
        if not mask.any():
            mask[rng.integers(len(basis))] = True
        n = int(mask.sum())
        if dyadic:
            coeffs = rng.integers(-8, 9, size=n) / 8.0
        else:
            coeffs = rng.standard_normal(n)
        if complex_coeffs:
            coeffs = coeffs + 1j * (rng.integers(-8, 9, size=n) / 8.0 if dyadic else rng.standard_normal(n))
        out = ChaosExpansion._from_arrays(dim, max_degree, basis[mask], np.asarray(coeffs, dtype=complex))
        if not out.is_zero:
            return out


def random_invertible(rng: np.random.Generator, dim: int, max_degree: int, dyadic: bool = False) -> ChaosExpansion:
    """Random expansion whose constant term is bounded away from zero."""
    a = random_expansion(rng, dim, max_degree, dyadic=dyadic)
    if dyadic:
        c0 = float(rng.choice([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0]))
    else:
        c0 = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0))
    rest = {alpha: c for alpha, c in a.terms.items() if alpha.degree}
    return ChaosExpansion(dim, max_degree, {**{(): c0}, **rest})
