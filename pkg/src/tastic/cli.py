"""Command-line entry point: ``tastic <command> ...``.

Exit codes: 0 success, 1 runtime/numeric failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import io as tio
from .clustering import LINKAGES, agglomerate, cut
from .datagen import PRESETS, GeneratorSpec, generate, preset
from .dissimilarity import MEASURES, AlphaSpec, TravelParams, dissim_matrix
from .evaluation import (
    DEFAULT_BINS,
    DEFAULT_THRESHOLDS,
    METHODS,
    accuracy,
    ari,
    compare_methods,
    elbow_curve,
    profile,
    wcd,
)

log = logging.getLogger("tastic")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    measure: str = "tastic"
    L: int = 3
    epsilon: float | None = None
    E: tuple = (-0.075, 0.0, 0.075)
    C: float = 0.0
    alpha: float | None = None
    p: float = 0.09
    symmetric: bool = True
    linkage: str = "average"
    k: int | None = None
    kmin: int = 2
    kmax: int = 10
    seed: int = 0
    threads: int | None = None

    @classmethod
    def build(cls, args) -> "RunConfig":
        cfg = cls()
        known = {f.name for f in fields(cls)}
        if getattr(args, "config", None):
            try:
                data = tio.load_config(args.config)
            except (OSError, ValueError) as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}") from None
            unknown = set(data) - known
            if unknown:
                raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
            for key, value in data.items():
                setattr(cfg, key, value)
        for name in known:
            value = getattr(args, name, None)
            if value is not None:
                setattr(cfg, name, value)
        if getattr(args, "asymmetric", False):
            cfg.symmetric = False
        # --epsilon expands to {-eps, 0, eps} unless --E was given explicitly
        if cfg.epsilon is not None and getattr(args, "E", None) is None:
            eps = abs(float(cfg.epsilon))
            cfg.E = (0.0,) if eps == 0 else (-eps, 0.0, eps)
        if isinstance(cfg.E, str):
            cfg.E = _floats(cfg.E)
        cfg.E = tuple(float(e) for e in cfg.E)
        if cfg.measure not in MEASURES:
            raise ConfigError(f"unknown measure {cfg.measure!r}; choose from {', '.join(MEASURES)}")
        if cfg.linkage not in LINKAGES:
            raise ConfigError(f"unknown linkage {cfg.linkage!r}; choose from {', '.join(LINKAGES)}")
        return cfg

    def params(self, alpha: float = 1.0) -> TravelParams:
        return TravelParams(L=self.L, E=self.E, C=self.C, alpha=alpha, symmetric=self.symmetric)

    def alpha_spec(self) -> AlphaSpec:
        return AlphaSpec(value=self.alpha, p=self.p)

    def resolve(self, series) -> tuple[TravelParams, dict]:
        """Travel params with alpha filled in, plus a record of where alpha came from."""
        info = {"measure": self.measure, "L": self.L, "E": list(self.E), "C": self.C,
                "symmetric": self.symmetric}
        if self.measure == "tastic":
            a = self.alpha_spec().resolve(series)
            info["alpha"] = a
            info["alpha_source"] = "explicit" if self.alpha is not None else f"default(p={self.p})"
        else:
            a = 1.0
            info["alpha"] = None
        return self.params(a), info


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _bins(text: str) -> tuple:
    edges = [float(v) for v in _floats(text)]
    if len(edges) < 2:
        raise ConfigError("--bins needs at least two edges")
    return tuple(zip(edges[:-1], edges[1:]))


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load_series(path):
    series, truth = tio.load_dataset(path)
    return series, truth


# --------------------------------------------------------------------------
# commands


def cmd_gen(args) -> int:
    target = args.spec
    if target in PRESETS:
        spec = preset(target, seed=args.seed if args.seed is not None else 0)
    elif Path(target).is_file():
        try:
            spec = GeneratorSpec.from_dict(json.loads(Path(target).read_text(encoding="utf-8")))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ConfigError(f"bad generator spec {target}: {exc}") from None
        if args.seed is not None:
            spec = spec.with_seed(args.seed)
    else:
        raise ConfigError(f"unknown preset or missing spec file {target!r}; presets: {', '.join(PRESETS)}")
    series, truth = generate(spec)
    _emit(tio.dataset_csv(series, truth), args.out)
    log.info("generated %s: n=%d, clusters=%d, seed=%d", spec.name, spec.n, spec.n_clusters, spec.seed)
    return 0


def cmd_distmat(args) -> int:
    cfg = RunConfig.build(args)
    series, _ = _load_series(args.input)
    params, _ = cfg.resolve(series)
    D = dissim_matrix(series, params, cfg.measure, threads=cfg.threads)
    _emit(tio.matrix_csv(D), args.out)
    return 0


def cmd_cluster(args) -> int:
    cfg = RunConfig.build(args)
    if cfg.k is None:
        raise ConfigError("--k is required")
    series, _ = _load_series(args.input)
    if not 1 <= cfg.k <= len(series):
        raise ConfigError(f"k={cfg.k} out of range for n={len(series)}")
    params, info = cfg.resolve(series)
    D = dissim_matrix(series, params, cfg.measure, threads=cfg.threads)
    labels = cut(agglomerate(D, cfg.linkage), cfg.k)
    _emit(tio.labels_csv(D.ids, labels), args.out)
    sizes = [labels.assignments.count(g) for g in range(1, labels.k + 1)]
    summary = {"k": labels.k, **info, "linkage": cfg.linkage, "wcd": wcd(D, labels), "sizes": sizes}
    if args.summary:
        Path(args.summary).write_text(tio.dump_json(summary), encoding="utf-8")
    else:
        sys.stderr.write(tio.dump_json(summary))
    return 0


def cmd_elbow(args) -> int:
    cfg = RunConfig.build(args)
    series, _ = _load_series(args.input)
    if not 1 <= cfg.kmin <= cfg.kmax <= len(series):
        raise ConfigError(f"need 1 <= kmin <= kmax <= n={len(series)}")
    params, info = cfg.resolve(series)
    D = dissim_matrix(series, params, cfg.measure, threads=cfg.threads)
    curve = elbow_curve(D, cfg.linkage, cfg.kmin, cfg.kmax)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "wcd"])
    for k, v in curve.points:
        w.writerow([k, tio.fmt_float(v)])
    _emit(buf.getvalue(), args.out)
    if info.get("alpha") is not None:
        log.info("alpha=%r (%s)", info["alpha"], info["alpha_source"])
    return 0


def cmd_eval(args) -> int:
    pred_ids, pred = tio.load_labels(args.pred)
    truth_ids, truth = tio.load_labels(args.truth)
    if len(pred) != len(truth):
        raise ConfigError(f"label files differ in length: {len(pred)} != {len(truth)}")
    if pred_ids != truth_ids:
        order = {i: j for j, i in enumerate(truth_ids)}
        if set(order) != set(pred_ids):
            raise ConfigError("label files cover different ids")
        perm = [order[i] for i in pred_ids]
        truth = type(truth).from_any([truth.assignments[j] for j in perm])
    result = {"accuracy": accuracy(pred, truth), "ari": ari(pred, truth)}
    _emit(tio.dump_json(result), args.out)
    return 0


def cmd_profile(args) -> int:
    series, _ = _load_series(args.input)
    ids, labels = tio.load_labels(args.labels)
    if len(labels) != len(series):
        raise ConfigError(f"{len(labels)} labels for {len(series)} series")
    if ids != [s.id for s in series]:
        raise ConfigError("label ids do not match dataset ids (order matters)")
    thresholds = DEFAULT_THRESHOLDS if args.thresholds is None else _floats(args.thresholds)
    bins = DEFAULT_BINS if args.bins is None else _bins(args.bins)
    E = _floats(args.E) if args.E else (-0.075, 0.0, 0.075)
    groups = profile(series, labels, thresholds, bins, E=E, symmetric=not args.asymmetric)
    out = {"thresholds": list(thresholds), "groups": [g.to_dict(bins) for g in groups]}
    _emit(tio.dump_json(out), args.out)
    return 0


def cmd_compare(args) -> int:
    cfg = RunConfig.build(args)
    series, truth = _load_series(args.input)
    if args.truth:
        _, truth = tio.load_labels(args.truth)
    if truth is None:
        raise ConfigError("no truth labels: pass --truth or use a dataset with a label column")
    methods = METHODS if not args.methods else tuple(m.strip() for m in args.methods.split(","))
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise ConfigError(f"unknown methods {bad}; choose from {', '.join(METHODS)}")
    rows = compare_methods(series, truth, methods, cfg.params(), cfg.alpha_spec(),
                           cfg.linkage, cfg.seed, cfg.threads)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "accuracy", "ari", "alpha"])
    for r in rows:
        w.writerow([r.method, tio.fmt_float(r.accuracy), tio.fmt_float(r.ari),
                    "" if r.alpha is None else tio.fmt_float(r.alpha)])
    _emit(buf.getvalue(), args.out)
    return 0


# --------------------------------------------------------------------------
# parser


def _travel_args(p):
    g = p.add_argument_group("dissimilarity")
    g.add_argument("--config", help="JSON or key=value file with run settings")
    g.add_argument("--measure", choices=MEASURES)
    g.add_argument("--L", type=int, help="largest time shift")
    g.add_argument("--epsilon", type=float, help="tilt angle; expands to {-eps, 0, eps}")
    g.add_argument("--E", help="explicit comma-separated tilt set (overrides --epsilon)")
    g.add_argument("--C", type=float, help="tilt penalty coefficient")
    g.add_argument("--alpha", type=float, help="correlation weight (default: data-driven from --p)")
    g.add_argument("--p", type=float, help="percentile order for the default alpha")
    g.add_argument("--asymmetric", action="store_true", help="tilt only the second series of a pair")
    g.add_argument("--threads", type=int, help="worker threads (env TASTIC_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tastic", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic dataset")
    p.add_argument("spec", help=f"preset name ({', '.join(PRESETS)}) or JSON spec file")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("distmat", help="pairwise dissimilarity matrix")
    p.add_argument("input")
    p.add_argument("--out", "-o")
    _travel_args(p)
    p.set_defaults(func=cmd_distmat)

    p = sub.add_parser("cluster", help="hierarchical clustering into k groups")
    p.add_argument("input")
    p.add_argument("--k", type=int)
    p.add_argument("--linkage", choices=LINKAGES)
    p.add_argument("--out", "-o", help="labels CSV")
    p.add_argument("--summary", help="summary JSON (default: stderr)")
    _travel_args(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("elbow", help="within-cluster dissimilarity for k in [kmin, kmax]")
    p.add_argument("input")
    p.add_argument("--kmin", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--linkage", choices=LINKAGES)
    p.add_argument("--out", "-o")
    _travel_args(p)
    p.set_defaults(func=cmd_elbow)

    p = sub.add_parser("eval", help="accuracy and ARI of predicted labels")
    p.add_argument("pred")
    p.add_argument("truth")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("profile", help="per-group summary statistics")
    p.add_argument("input")
    p.add_argument("labels")
    p.add_argument("--thresholds", help="comma-separated; empty string drops the counts")
    p.add_argument("--bins", help="comma-separated bin edges, e.g. 0,6.5,7,8,9,10,inf")
    p.add_argument("--E", help="tilt set for the within-group correlation")
    p.add_argument("--asymmetric", action="store_true")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("compare", help="accuracy/ARI of several methods at the true k")
    p.add_argument("input")
    p.add_argument("--truth", help="labels CSV (default: the dataset's label column)")
    p.add_argument("--methods", help=f"comma-separated subset of {', '.join(METHODS)}")
    p.add_argument("--linkage", choices=LINKAGES)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", "-o")
    _travel_args(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        # bad input, parameters or files
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"tastic {args.command}: error: {msg}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"tastic {args.command}: runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
