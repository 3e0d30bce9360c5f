"""Wick-Euler vs closed form for dX = X <> dB, X_0 = 1, on refining grids.

Prints one row per grid size: squared L2 distance, L2 distance and the
local orders of both.  ``--csv`` writes the same table.
"""

import argparse
import csv
import math
import sys
from dataclasses import dataclass

from wickchaos.opcalc import TimeGrid, solve_gbm_exchangeable


@dataclass
class Config:
    T: float = 1.0
    degree: int = 10
    grids: tuple = (8, 16, 32, 64, 128)
    csv: str | None = None


def run(cfg: Config):
    rows = []
    prev = None
    for M in cfg.grids:
        g = TimeGrid(cfg.T, M)
        exact = solve_gbm_exchangeable(g, cfg.degree, "closed_form")
        euler = solve_gbm_exchangeable(g, cfg.degree, "wick_euler")
        err2 = (exact - euler).l2_norm_sq()
        row = {"M": M, "dt": g.dt, "err_sq": err2, "err": math.sqrt(err2), "order_sq": None, "order": None}
        if prev is not None:
            row["order_sq"] = math.log(prev["err_sq"] / err2) / math.log(M / prev["M"])
            row["order"] = row["order_sq"] / 2
        rows.append(row)
        prev = row
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=1.0)
    ap.add_argument("--degree", type=int, default=10)
    ap.add_argument("--grids", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    ap.add_argument("--csv")
    args = ap.parse_args(argv)
    cfg = Config(args.T, args.degree, tuple(args.grids), args.csv)
    rows = run(cfg)
    fmt = lambda v: "" if v is None else f"{v:.6g}"  # noqa: E731
    print(f"{'M':>5} {'dt':>10} {'|e|^2':>12} {'|e|':>12} {'order(|e|^2)':>13} {'order(|e|)':>11}")
    for r in rows:
        print(f"{r['M']:>5} {fmt(r['dt']):>10} {fmt(r['err_sq']):>12} {fmt(r['err']):>12} {fmt(r['order_sq']):>13} {fmt(r['order']):>11}")
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    sys.exit(main())
