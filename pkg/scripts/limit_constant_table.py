#!/usr/bin/env python3
"""Limit constant C for power laws, untruncated and with a finite support cap."""
import argparse

from minbucket.bounds import limit_constant
from minbucket.degrees import DivergenceError, ReferenceDistribution


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", default="2.35,2.4,2.5,2.75,3.0")
    ap.add_argument("--caps", default="100,1000,50000,none")
    ap.add_argument("--tol", type=float, default=1e-9)
    args = ap.parse_args()

    caps = [None if c == "none" else int(c) for c in args.caps.split(",")]
    print("alpha," + ",".join(str(c or "inf") for c in caps))
    for a in (float(x) for x in args.alphas.split(",")):
        row = []
        for c in caps:
            try:
                row.append(f"{limit_constant(ReferenceDistribution.power_law(a, c), args.tol).value:.9f}")
            except DivergenceError:
                row.append("divergent")
        print(f"{a}," + ",".join(row))


if __name__ == "__main__":
    main()
