"""Command-line front end.

Structured results go out as JSON (to ``--out`` or stdout); sample tables as
CSV.  Exit codes: 0 success, 1 validation or invariant failure (error JSON on
stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import ccr
from .chaos import (
    MAX_DEGREE,
    ChaosExpansion,
    lowest_part,
    multi_indices,
    wick_product,
    l2_norm_sq,
    zero_divisor_probe,
)
from .errors import WickError
from .growth import (
    DEFAULT_PHASES,
    DEFAULT_RADII,
    REGISTRY,
    chaos_functional,
    entirety_check,
    ray_growth_fit,
    registered,
)
from .opcalc import METHODS, TimeGrid, brownian, hs_integral, moments, solve_gbm_exchangeable
from .sampling import random_expansion, trial_rng
from .transforms import s_transform_eval, t_transform_eval

MAX_CLI_DIM = 12
MAX_GRID_CELLS = 256


class ValidationError(WickError):
    code = "invalid_argument"


@dataclass
class RunConfig:
    command: str
    N: int | None = None
    D: int | None = None
    T: float | None = None
    M: int | None = None
    p: int | None = None
    seed: int | None = None
    radii: list = field(default_factory=list)
    mc_samples: int = 0
    threads: int = 1
    out: str | None = None

    def validate(self):
        if self.N is not None and not 1 <= self.N <= MAX_CLI_DIM:
            raise ValidationError(f"N must lie in [1, {MAX_CLI_DIM}]", N=self.N)
        if self.D is not None and not 0 <= self.D <= MAX_DEGREE:
            raise ValidationError(f"degree must lie in [0, {MAX_DEGREE}]", D=self.D)
        if self.M is not None and not 1 <= self.M <= MAX_GRID_CELLS:
            raise ValidationError(f"M must lie in [1, {MAX_GRID_CELLS}]", M=self.M)
        if self.T is not None and not self.T > 0:
            raise ValidationError("T must be positive", T=self.T)
        if self.seed is not None and self.seed < 0:
            raise ValidationError("seed must be non-negative", seed=self.seed)
        if self.threads < 1:
            raise ValidationError("threads must be >= 1", threads=self.threads)
        if self.mc_samples < 0:
            raise ValidationError("mc-samples must be >= 0", mc_samples=self.mc_samples)
        return self


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _emit(text: str, path: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, path):
    _emit(json.dumps(obj, indent=2), path)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _complex_list(values) -> np.ndarray:
    try:
        return np.array([complex(v.replace(" ", "")) for v in values], dtype=complex)
    except ValueError as exc:
        raise ValidationError(f"cannot parse complex coordinate: {exc}") from None


def _load_expansion(path: str) -> ChaosExpansion:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}", path=path) from None
    return ChaosExpansion.from_json(text)


# ---------------------------------------------------------------------------
# subcommands


def _probe_trial(N, D, seed, trial):
    rng = trial_rng(seed, trial)
    low_a, low_b = rng.integers(0, D + 1, size=2)
    a = random_expansion(rng, N, D, min_degree=int(low_a))
    b = random_expansion(rng, N, D, min_degree=int(low_b))
    report = zero_divisor_probe(a, b)
    graded = lowest_part(wick_product(a, b, "exact")) == wick_product(lowest_part(a), lowest_part(b), "exact")
    return report.product_is_zero, graded, report.witness.degree if report.witness else None


def cmd_probe(args, cfg: RunConfig):
    if 2 * cfg.D > MAX_DEGREE:
        raise ValidationError(f"exact products need 2*D <= {MAX_DEGREE}", D=cfg.D)
    if args.trials < 0:
        raise ValidationError("trials must be >= 0", trials=args.trials)
    jobs = range(args.trials)
    run = lambda t: _probe_trial(cfg.N, cfg.D, cfg.seed, t)  # noqa: E731
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(t) for t in jobs]
    hist = {}
    for _, _, deg in results:
        if deg is not None:
            hist[str(deg)] = hist.get(str(deg), 0) + 1
    summary = {
        "N": cfg.N,
        "D": cfg.D,
        "trials": args.trials,
        "seed": cfg.seed,
        "zero_products_found": sum(1 for z, _, _ in results if z),
        "lowest_part_mismatches": sum(1 for _, g, _ in results if not g),
        "witness_degree_counts": dict(sorted(hist.items(), key=lambda kv: int(kv[0]))),
    }
    _emit_json(summary, cfg.out)
    return 0 if summary["zero_products_found"] == 0 and summary["lowest_part_mismatches"] == 0 else 1


def cmd_solve_gbm(args, cfg: RunConfig):
    if cfg.D < 1:
        raise ValidationError("degree must be >= 1", D=cfg.D)
    grid = TimeGrid(cfg.T, cfg.M)
    X = solve_gbm_exchangeable(grid, cfg.D, args.method)
    report = moments(X, cfg.mc_samples, cfg.seed, cfg.threads)
    out = {"T": cfg.T, "M": cfg.M, "degree": cfg.D, "method": args.method, **report.to_dict()}
    _emit_json(out, cfg.out)
    csv_path = args.csv or (str(Path(cfg.out).with_suffix(".csv")) if cfg.out else None)
    if csv_path:
        rows = [(k, float(m)) for k, m in enumerate(X.degree_mass())]
        Path(csv_path).write_text(_csv_text(["degree", "l2_mass"], rows))
    return 0


def cmd_check_growth(args, cfg: RunConfig):
    if (args.input is None) == (args.form is None):
        raise ValidationError("give exactly one of --input or --form")
    if args.input:
        a = _load_expansion(args.input)
        F = chaos_functional(a, Path(args.input).name)
        dim = a.dim
    else:
        F = registered(args.form)
        dim = 1
    xi = np.array(args.xi, dtype=float) if args.xi else np.eye(1, dim).ravel()
    if args.input and len(xi) != dim:
        raise ValidationError(f"--xi needs {dim} coordinates", got=len(xi))
    if args.phases < 1:
        raise ValidationError("phases must be >= 1", phases=args.phases)
    radii = cfg.radii or list(DEFAULT_RADII)
    report = ray_growth_fit(F, xi, cfg.p, radii, args.phases)
    out = {"functional": F.name, "xi": xi.tolist(), **report.to_dict(), "entire": entirety_check(F, xi, 0.1 * xi)}
    _emit_json(_finite(out), cfg.out)
    if args.csv:
        Path(args.csv).write_text(_csv_text(["r", "max_log_abs_F"], [(float(r), float(m)) for r, m in report.samples]))
    return 0


def _finite(obj):
    """Replace non-finite floats by strings so the output stays strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def cmd_ccr_check(args, cfg: RunConfig):
    N, D = cfg.N, cfg.D
    if D < 1:
        raise ValidationError("ccr-check needs D >= 1", D=D)
    basis = list(multi_indices(N, D - 1))
    counts = {"ccr": 0, "commuting_annihilators": 0, "commuting_creators": 0, "quantum_decomposition": 0, "skorohod": 0}
    failures = []
    for alpha in basis:
        e = ChaosExpansion(N, D, {alpha: 1.0})
        for i in range(N):
            x_i = ChaosExpansion.variable(i, N, D)
            if ccr.multiply_coordinate(i, e) != ccr.annihilate(i, e) + ccr.create(i, e):
                failures.append({"check": "quantum_decomposition", "alpha": str(alpha), "i": i})
            counts["quantum_decomposition"] += 1
            if ccr.create(i, e) != wick_product(x_i, e, "capped"):
                failures.append({"check": "skorohod", "alpha": str(alpha), "i": i})
            counts["skorohod"] += 1
            for j in range(N):
                expected = e if i == j else ChaosExpansion.zero(N, D)
                if ccr.ccr_commutator(i, j, e) != expected:
                    failures.append({"check": "ccr", "alpha": str(alpha), "i": i, "j": j})
                counts["ccr"] += 1
                if ccr.annihilate(i, ccr.annihilate(j, e)) != ccr.annihilate(j, ccr.annihilate(i, e)):
                    failures.append({"check": "commuting_annihilators", "alpha": str(alpha), "i": i, "j": j})
                counts["commuting_annihilators"] += 1
                if ccr.create(i, ccr.create(j, e)) != ccr.create(j, ccr.create(i, e)):
                    failures.append({"check": "commuting_creators", "alpha": str(alpha), "i": i, "j": j})
                counts["commuting_creators"] += 1
    _emit_json({"N": N, "D": D, "basis_terms": len(basis), "checks": counts, "failures": failures}, cfg.out)
    return 1 if failures else 0


def _cmd_transform(args, cfg: RunConfig, transform):
    a = _load_expansion(args.input)
    xi = _complex_list(args.xi)
    value = transform(a, xi)
    _emit_json({"value": [value.real, value.imag]}, cfg.out)
    return 0


def cmd_hermite(args, cfg: RunConfig):
    if not 0 <= args.n <= 30:
        raise ValidationError("n must lie in [0, 30]", n=args.n)
    _emit(str(ccr.hermite_generate(args.n)), cfg.out)
    return 0


def cmd_hs_demo(args, cfg: RunConfig):
    rows = []
    for M in args.M:
        RunConfig("hs-demo", M=M).validate()
        grid = TimeGrid(cfg.T, M)
        D = cfg.D
        integrand = [brownian(grid, k * grid.dt, D) for k in range(M)]
        integral = hs_integral(grid, integrand)
        lhs = l2_norm_sq(integral)
        rhs = sum(l2_norm_sq(f) * grid.dt for f in integrand)
        rows.append({"M": M, "dt": grid.dt, "l2_integral": lhs, "isometry_sum": rhs, "continuum": cfg.T**2 / 2})
    _emit_json({"T": cfg.T, "degree": cfg.D, "rows": rows}, cfg.out)
    if args.csv:
        header = ["M", "dt", "l2_integral", "isometry_sum", "continuum"]
        Path(args.csv).write_text(_csv_text(header, [[r[h] for h in header] for r in rows]))
    return 0


def cmd_convert(args, cfg: RunConfig):
    a = _load_expansion(args.input)
    _emit(a.to_json(indent=2), cfg.out)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--threads", type=int, default=1, help="worker threads (output does not depend on it)")

    parser = argparse.ArgumentParser(prog="wickchaos", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("probe-zero-divisor", parents=[common], help="random search for Wick zero divisors")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("solve-gbm", parents=[common], help="Wick GBM dX = X <> dB on a time grid")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--method", choices=METHODS, default="closed_form")
    p.add_argument("--mc-samples", type=int, default=0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--csv", help="per-degree L2 mass table (default: --out with .csv suffix)")
    p.set_defaults(func=cmd_solve_gbm)

    p = sub.add_parser("check-growth", parents=[common], help="ray growth fit for a functional")
    p.add_argument("--input", help="chaos expansion JSON; its S-transform is checked")
    p.add_argument("--form", choices=sorted(REGISTRY), help="registered closed form")
    p.add_argument("--xi", type=float, nargs="+", help="Hermite coordinates of the direction")
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--radii", type=float, nargs="+")
    p.add_argument("--phases", type=int, default=DEFAULT_PHASES)
    p.add_argument("--csv", help="write (r, max log|F|) samples here")
    p.set_defaults(func=cmd_check_growth)

    p = sub.add_parser("ccr-check", parents=[common], help="exhaustive CCR / decomposition checks")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.set_defaults(func=cmd_ccr_check)

    for name, fn, help_ in (
        ("s-eval", s_transform_eval, "evaluate the S-transform"),
        ("t-eval", t_transform_eval, "evaluate the T-transform"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--input", required=True)
        p.add_argument("--xi", nargs="+", required=True, help="coordinates, complex allowed (e.g. 1+2j)")
        p.set_defaults(func=lambda a, c, fn=fn: _cmd_transform(a, c, fn))

    p = sub.add_parser("hermite", parents=[common], help="symbolic (x - d/dx)^n 1")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_hermite)

    p = sub.add_parser("hs-demo", parents=[common], help="Ito isometry table for int B dB")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--M", type=int, nargs="+", default=[4, 8, 16, 32])
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_hs_demo)

    p = sub.add_parser("convert", parents=[common], help="canonicalize a chaos expansion JSON file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_convert)
    return parser


def _config(args) -> RunConfig:
    D = getattr(args, "D", None)
    if D is None:
        D = getattr(args, "degree", None)
    M = getattr(args, "M", None)
    return RunConfig(
        command=args.command,
        N=getattr(args, "N", None),
        D=D,
        T=getattr(args, "T", None),
        M=M if isinstance(M, int) else None,
        p=getattr(args, "p", None),
        seed=getattr(args, "seed", None),
        radii=getattr(args, "radii", None) or [],
        mc_samples=getattr(args, "mc_samples", 0) or 0,
        threads=args.threads,
        out=args.out,
    ).validate()


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except WickError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), default=str) + "\n")
        return 1
    except (ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        sys.stderr.write(json.dumps({"code": "invalid_value", "message": str(msg), "context": {}}) + "\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
