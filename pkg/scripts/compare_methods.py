"""Mean accuracy/ARI of every method on generated benchmark presets over several seeds."""

import argparse
import csv
import sys
import time
from collections import defaultdict

from tastic import METHODS, compare_methods, generate, preset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--presets", default="G3_1,G3_2,G3_3")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--methods", default=",".join(METHODS))
    ap.add_argument("--linkage", default="average")
    args = ap.parse_args()

    methods = tuple(args.methods.split(","))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["preset", "method", "mean_accuracy", "mean_ari", "seeds"])
    for name in args.presets.split(","):
        acc, ar = defaultdict(float), defaultdict(float)
        start = time.perf_counter()
        for seed in range(args.seeds):
            series, truth = generate(preset(name, seed))
            for row in compare_methods(series, truth, methods, linkage=args.linkage, seed=seed):
                acc[row.method] += row.accuracy / args.seeds
                ar[row.method] += row.ari / args.seeds
        for m in methods:
            w.writerow([name, m, f"{acc[m]:.3f}", f"{ar[m]:.3f}", args.seeds])
        print(f"# {name}: {time.perf_counter() - start:.1f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
