"""Elbow curve, clustering and group profiles for the twelve-visit cohort preset."""

import argparse
import json

from tastic import dissim_matrix, elbow_curve, generate, hierarchical, preset, profile
from tastic.dissimilarity import TravelParams, default_alpha


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--k", type=int, default=7)
    args = ap.parse_args()

    series, truth = generate(preset("APP", args.seed))
    alpha = default_alpha(series, 0.09)
    D = dissim_matrix(series, TravelParams(L=3, E=(-0.075, 0.0, 0.075), alpha=alpha))
    print(f"alpha = {alpha:.5f}")
    print("k,wcd,drop")
    prev = None
    for k, v in elbow_curve(D, "average", 2, 10).points:
        print(f"{k},{v:.3f},{'' if prev is None else f'{prev - v:.3f}'}")
        prev = v
    labels = hierarchical(D, args.k, "average")
    for g in profile(series, labels):
        print(json.dumps(g.to_dict()))


if __name__ == "__main__":
    main()
