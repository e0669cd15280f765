"""Adiabatic spin flip |-J> -> |J> under a Zeeman sweep, over a ladder of sweep times.

    python3 scripts/zeeman_sweep.py --j 1 --doublings 4
"""

import argparse
from pathlib import Path

from exactpop.cli import write_csv
from exactpop.paperlab import zeeman_adiabatic_run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--j", type=float, default=0.5)
    ap.add_argument("--B0", type=float, default=1.0)
    ap.add_argument("--T0", type=float, default=0.2)
    ap.add_argument("--tau", type=float, default=None, help="shortest sweep time (default 200*2j)")
    ap.add_argument("--doublings", type=int, default=3)
    ap.add_argument("--steps-per-time", type=float, default=32.0)
    ap.add_argument("--schedule", choices=["smooth", "sine"], default="smooth")
    ap.add_argument("--out", type=Path, default=Path("out/zeeman_sweep.csv"))
    args = ap.parse_args()

    tau0 = args.tau or 200.0 * 2 * args.j
    rows = []
    for d in range(args.doublings + 1):
        tau = tau0 * 2**d
        res = zeeman_adiabatic_run(args.j, args.B0, args.T0, tau, int(args.steps_per_time * tau), args.schedule)
        rows.append([tau, res.p_complete, 1 - res.p_complete, res.endpoint_overlap, res.error_estimate])
        print(f"tau={tau:8.1f}  p_complete={res.p_complete:.14f}  overlap={res.endpoint_overlap:.10f}")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(args.out, ["tau", "p_complete", "one_minus_p", "endpoint_overlap", "error_estimate"], rows)


if __name__ == "__main__":
    main()
