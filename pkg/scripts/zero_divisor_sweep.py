"""Sweep the zero-divisor probe over (N, D) and report counts and timings."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from wickchaos.chaos import lowest_part, wick_product, zero_divisor_probe
from wickchaos.sampling import random_expansion, trial_rng


@dataclass
class Config:
    dims: tuple = (1, 2, 3, 4)
    degrees: tuple = (1, 2, 4, 6)
    trials: int = 500
    seed: int = 0
    density: float | None = None


def sweep(cfg: Config):
    out = []
    for N in cfg.dims:
        for D in cfg.degrees:
            start = time.perf_counter()
            zeros = mismatches = 0
            for t in range(cfg.trials):
                rng = trial_rng(cfg.seed, t)
                lo = rng.integers(0, D + 1, size=2)
                a = random_expansion(rng, N, D, density=cfg.density, min_degree=int(lo[0]))
                b = random_expansion(rng, N, D, density=cfg.density, min_degree=int(lo[1]))
                zeros += zero_divisor_probe(a, b).product_is_zero
                mismatches += lowest_part(wick_product(a, b)) != wick_product(lowest_part(a), lowest_part(b))
            out.append({
                "N": N, "D": D, "trials": cfg.trials, "zero_products": zeros,
                "graded_mismatches": mismatches, "seconds": round(time.perf_counter() - start, 3),
            })
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[1, 2, 3, 4])
    ap.add_argument("--degrees", type=int, nargs="+", default=[1, 2, 4, 6])
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--density", type=float, help="term density (default: random per trial)")
    args = ap.parse_args(argv)
    cfg = Config(tuple(args.dims), tuple(args.degrees), args.trials, args.seed, args.density)
    print(json.dumps({"config": asdict(cfg), "rows": sweep(cfg)}, indent=2))


if __name__ == "__main__":
    main()
