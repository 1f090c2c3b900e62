"""ARI of the blended measure on one preset while sweeping p, epsilon and C."""

import argparse
import itertools

from tastic import AlphaSpec, TravelParams, compare_methods, generate, preset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="G3_2")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--L", type=int, default=3)
    args = ap.parse_args()

    ps = (0.0, 0.05, 0.09, 0.2, 0.5)
    epsilons = (0.0, 0.025, 0.075, 0.15)
    Cs = (0.0, 1.0, 5.0)
    data = [generate(preset(args.preset, s)) for s in range(args.seeds)]
    print("p,epsilon,C,mean_ari")
    for p, eps, C in itertools.product(ps, epsilons, Cs):
        params = TravelParams.with_epsilon(eps, L=args.L, C=C)
        total = 0.0
        for series, truth in data:
            (row,) = compare_methods(series, truth, ("tastic",), params, AlphaSpec(p=p))
            total += row.ari
        print(f"{p},{eps},{C},{total / len(data):.3f}")


if __name__ == "__main__":
    main()
