"""Cluster the five-series toy dataset with and without trend tilts."""

import argparse

import numpy as np

from tastic import TravelParams, default_alpha, dissim_matrix, hierarchical

TOY = np.array([
    [7.59, 7.72, 6.27, 6.07, 8.51],
    [7.78, 7.76, 6.93, 6.04, 8.37],
    [7.63, 7.79, 7.39, 6.58, 5.79],
    [7.96, 8.65, 9.10, 9.42, 8.25],
    [8.18, 9.19, 9.01, 9.47, 9.20],
])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.0, help="percentile order for alpha")
    ap.add_argument("--L", type=int, default=0)
    ap.add_argument("--linkage", default="average")
    args = ap.parse_args()

    alpha = default_alpha(TOY, args.p)
    print(f"alpha = {alpha:.6f}")
    for E in [(-0.4, 0.0, 0.4), (0.0,)]:
        D = dissim_matrix(TOY, TravelParams(L=args.L, E=E, C=0.0, alpha=alpha))
        labels = hierarchical(D, 2, args.linkage)
        print(f"E = {E}: labels {labels.assignments}")
        print(np.array2string(D.entries, precision=4))


if __name__ == "__main__":
    main()
