"""Most significant exact transition of the kicked two-level system over (delta, epsilon).

    python3 scripts/kicked_scan.py --n 61 --out out/kicked_map.csv
"""

import argparse
import math
from pathlib import Path

import numpy as np

from exactpop.cli import write_csv
from exactpop.hammod import KickedTLS
from exactpop.sigmax import significance_scan
from exactpop.xtrans import ExchangeSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=61)
    ap.add_argument("--tau", type=float, default=math.pi)
    ap.add_argument("--out", type=Path, default=Path("out/kicked_map.csv"))
    args = ap.parse_args()

    exch = ExchangeSpec(2, 0, 1)
    rows = []
    for eps in np.linspace(0, math.pi, args.n):
        scan = significance_scan(lambda d: KickedTLS(1.0, d, eps, 1.0), np.linspace(0, args.tau, args.n), args.tau, exch)
        rows += [[eps, r.param, r.best_P_I0, r.best_significance] for r in scan]
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(args.out, ["epsilon", "delta", "best_P_I0", "best_significance"], rows)
    top = max(rows, key=lambda r: r[2])
    print(f"{len(rows)} points; best P_I0={top[2]:.12f} at epsilon={top[0]:.4f}, delta={top[1]:.4f} -> {args.out}")


if __name__ == "__main__":
    main()
