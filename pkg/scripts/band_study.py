#!/usr/bin/env python3
"""Map the indeterminate multiplier band of the borderline catalog entries
against the log-domain horizon.

For each horizon s_max, every multiplier on a grid around the 1/4 threshold
is reported as feasible / infeasible / indeterminate; the indeterminate
stretch shrinks as the horizon grows because the Euler-comparison window
needs ln-length pi/sqrt(gamma - 1/4).

Run:  python scripts/band_study.py [--family adimurthi_log|filippas_tertikas_x]
"""
import argparse

import numpy as np

from hardy_optim import RadialPotential, SolverSettings, feasible
from hardy_optim.errors import IndeterminateAtHorizon


def verdict(p, c, s_max):
    try:
        return "feasible" if feasible(p, c, 1.0, SolverSettings(s_max=s_max)).feasible \
            else "infeasible"
    except IndeterminateAtHorizon:
        return "indeterminate"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--family", default="adimurthi_log",
                        choices=("adimurthi_log", "filippas_tertikas_x"))
    args = parser.parse_args()
    maker = RadialPotential.adimurthi_log if args.family == "adimurthi_log" \
        else RadialPotential.filippas_tertikas
    p = maker(1)
    multipliers = np.round(np.arange(0.20, 0.46, 0.025), 3)
    horizons = (1e4, 1e5, 1e6)

    header = "c      " + "".join(f"s_max={h:<12.0e}" for h in horizons)
    print(f"# indeterminate band vs horizon, {args.family} (m = 1, threshold 1/4)")
    print(header)
    bands = {h: [] for h in horizons}
    for c in multipliers:
        row = [f"{c:<7.3f}"]
        for h in horizons:
            v = verdict(p, float(c), h)
            row.append(f"{v:<18}")
            if v == "indeterminate":
                bands[h].append(float(c))
        print("".join(row))
    print()
    for h in horizons:
        if bands[h]:
            print(f"s_max = {h:.0e}: indeterminate on [{min(bands[h])}, {max(bands[h])}] "
                  f"({len(bands[h])} grid points)")
        else:
            print(f"s_max = {h:.0e}: no indeterminate grid point")


if __name__ == "__main__":
    main()
