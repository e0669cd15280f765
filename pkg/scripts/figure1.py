"""Population curves P_I(t), P_F(t) for the weakly driven two-level system.

    python3 scripts/figure1.py --variant a --out out/figure1a.csv
"""

import argparse
from pathlib import Path

from exactpop.cli import write_csv
from exactpop.paperlab import figure1


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--variant", choices=["a", "b"], default="a")
    ap.add_argument("--frame", choices=["interaction", "lab"], default=None)
    ap.add_argument("--points", type=int, default=1201)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()

    res = figure1(args.variant, points=args.points, frame=args.frame)
    out = args.out or Path(f"out/figure1{args.variant}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, ["t", "P_I", "P_F"], res.rows)
    print(f"tau={res.tau:.6g} P_I(0)={res.P_I0:.6f} P_F(0)={res.P_F0:.6f} |P_F(tau)-P_I(0)|={res.residual:.2e} -> {out}")


if __name__ == "__main__":
    main()
