"""Run the verification sweep and print a per-label summary.

    python scripts/run_sweep.py [--config configs/default.json] [--jobs N] [--out report.csv]
"""

import argparse
import collections
import math
import os
import time

from fracineq.cli import RunConfig, render, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=None)
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    t0 = time.perf_counter()
    variant, rows = run_sweep(cfg, args.jobs)
    elapsed = time.perf_counter() - t0
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(render(cfg, variant, rows))

    stats = collections.defaultdict(lambda: collections.Counter())
    worst = collections.defaultdict(lambda: math.inf)
    for r in rows:
        stats[r.label][r.status] += 1
        for v in (r.margin_left, r.margin_right, r.slack):
            if not math.isnan(v):
                worst[r.label] = min(worst[r.label], v)

    print(f"constant: {variant}; {len(rows)} rows in {elapsed:.1f}s")
    print(f"{'label':32s} {'pass':>6s} {'fail':>6s} {'skip':>6s} {'min margin/slack':>18s}")
    for label in sorted(stats):
        c = stats[label]
        print(f"{label:32s} {c['pass']:6d} {c['fail']:6d} {c['skip']:6d} {worst[label]:18.3e}")
    return 1 if any(c["fail"] for c in stats.values()) else 0


if __name__ == "__main__":
    raise SystemExit(main())
