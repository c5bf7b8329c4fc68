#!/usr/bin/env python3
"""Integrate a fan of origin geodesics for one profile and dump CSV traces.

Each trace is screened for self-intersections and energy drift; one summary
line is printed per direction.  Useful for plotting the geodesic picture of
a domain with external tools.
"""

import argparse
import csv
import math
import os

import numpy as np

from hartogs import (
    SlicePoint,
    integrate_geodesic,
    parse_profile,
    self_intersection_check,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--F", required=True, help="profile expression in t")
    parser.add_argument("--b", required=True, help="domain bound (or 'inf')")
    parser.add_argument("--rays", type=int, default=16)
    parser.add_argument("--length", type=float, default=6.0)
    parser.add_argument("--out-dir", default="traces")
    args = parser.parse_args()

    b = math.inf if args.b.lower() in ("inf", "+inf", "infinity") else float(args.b)
    profile = parse_profile(args.F, b, 2)
    os.makedirs(args.out_dir, exist_ok=True)

    print(f"{'angle':>8s} {'arc':>8s} {'boundary':>9s} {'drift':>10s} {'screen':>7s}")
    for i in range(args.rays):
        angle = 2.0 * math.pi * i / args.rays
        trace = integrate_geodesic(
            profile,
            SlicePoint(0.0, 0.0),
            (math.cos(angle), math.sin(angle)),
            args.length,
        )
        screen = self_intersection_check(trace)
        drift = float(np.max(np.abs(trace.energies - trace.energy)))
        path = os.path.join(args.out_dir, f"ray_{i:03d}.csv")
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(("s", "u", "v", "du", "dv", "energy"))
            for j in range(len(trace)):
                writer.writerow(
                    [
                        repr(float(x))
                        for x in (
                            trace.s[j],
                            trace.points[j, 0],
                            trace.points[j, 1],
                            trace.tangents[j, 0],
                            trace.tangents[j, 1],
                            trace.energies[j],
                        )
                    ]
                )
        print(
            f"{math.degrees(angle):8.2f} {trace.s[-1]:8.3f} "
            f"{str(trace.boundary_hit):>9s} {drift:10.2e} {str(screen.passed):>7s}"
        )
    print(f"\ntraces written to {args.out_dir}/")


if __name__ == "__main__":
    main()
