"""Deviation of the Katugampola integral from its rho -> 1 and rho -> 0+ limits.

For every smooth corpus member on [1, 2] and each alpha, walks
rho = 1 + 2^-k (Riemann-Liouville target) and rho = 2^-k (Hadamard target)
and prints the final deviation and the fitted convergence order.

    python scripts/limit_study.py [--k-max 14] [--csv limits.csv]
"""

import argparse
import csv
import math

from fracineq.core import Certificate, Interval
from fracineq.corpus import CorpusSpec, generate_convex, select
from fracineq.limits import limit_corollary_hh_hadamard, limit_to_hadamard, limit_to_rl


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-max", type=int, default=14)
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.25, 0.5, 1.0, 1.5, 2.0, 3.0])
    ap.add_argument("--count", type=int, default=1, help="functions per family")
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    iv = Interval(1.0, 2.0)
    ks = range(1, args.k_max + 1)
    fs = select(generate_convex(CorpusSpec(count_per_family=args.count)), Certificate.CONVEX)
    out = []
    print(f"{'function':28s} {'alpha':>5s} {'target':>18s} {'final':>10s} {'order':>6s} note")
    for f in fs:
        for alpha in args.alphas:
            studies = [limit_to_rl(f, iv, alpha, ks), limit_to_hadamard(f, iv, alpha, ks)]
            if f.deriv1 is not None:
                studies.append(limit_corollary_hh_hadamard(f, iv, alpha, ks))
            for kind, s in zip(("riemann-liouville", "hadamard", "hadamard-mean"), studies):
                note = ""
                if s.truncated_at is not None:
                    note = f"alarm at k={s.truncated_at}"
                if s.orderings and not all(s.orderings):
                    note += " ordering violated"
                print(f"{f.name:28s} {alpha:5g} {kind:>18s} {s.final_deviation:10.2e} "
                      f"{s.estimated_order:6.2f} {note}")
                for k, rho, dev in s.rows():
                    out.append((f.name, alpha, kind, k, rho, dev))
    worst = max((r[-1] for r in out if not math.isnan(r[-1])), default=math.nan)
    print(f"largest deviation anywhere in the sequences: {worst:.3e}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("function", "alpha", "target", "k", "rho", "deviation"))
            w.writerows(out)


if __name__ == "__main__":
    main()
