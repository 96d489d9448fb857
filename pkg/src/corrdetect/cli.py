"""Command-line front end.

Subcommands: gen (sample a correlated pair), motifs (enumerate a family),
detect (test two edge lists), experiment (run a config grid), snr (low-degree
diagnostics), roc (per-cell curves from a finished run). Exit codes: 0 on
success, 2 on a parameter error, 3 on a capacity error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import CapacityError, ParameterError
from .graphs import (ModelParams, SimpleGraph, center, read_edge_list,
                     sample_correlated_pair, sample_er,
                     sample_induced_subgraph, write_edge_list)
from .harness import (ExperimentConfig, read_scores_csv, run_experiment,
                      write_roc_outputs)
from .lowdegree import low_degree_snr, snr_closed_form_bound
from .motifs import parse_family_spec
from .rng import derive_rng
from .stats import (WeightedFamily, default_m, it_statistic_exhaustive,
                    it_threshold, run_test)


def _cmd_gen(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    rng = derive_rng(args.seed, "gen")
    if args.rho is None:
        g1 = sample_er(args.n, args.p, rng)
        g2 = sample_er(args.n, args.p, rng)
        truth = {"n": args.n, "p": args.p, "rho": None, "seed": args.seed}
    else:
        g1, g2, pi = sample_correlated_pair(args.n, args.p, args.rho, rng)
        truth = {"n": args.n, "p": args.p, "rho": args.rho, "seed": args.seed,
                 "alignment": list(pi.images)}
    names = ["g1.txt", "g2.txt"]
    graphs = [g1, g2]
    if args.s is not None:
        w1, v1 = sample_induced_subgraph(g1, args.s, rng)
        w2, v2 = sample_induced_subgraph(g2, args.s, rng)
        names += ["w1.txt", "w2.txt"]
        graphs += [w1, w2]
        truth["s"] = args.s
        truth["window1"] = list(v1.chosen)
        truth["window2"] = list(v2.chosen)
    for name, g in zip(names, graphs):
        write_edge_list(os.path.join(args.out_dir, name), g)
    with open(os.path.join(args.out_dir, "truth.json"), "w",
              encoding="utf-8") as fh:
        json.dump(truth, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps({"out_dir": args.out_dir, "files": names,
                      "edges": [g.edge_count for g in graphs]}))
    return 0


def _cmd_motifs(args) -> int:
    family = parse_family_spec(args.family)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(family.to_json())
            fh.write("\n")
    summary = {
        "kind": family.kind,
        "count": len(family),
        "members": [{"v": m.v, "e": m.edge_count, "aut": m.aut}
                    for m in family],
    }
    print(json.dumps(summary, indent=2))
    return 0


def _pad_vertices(graph, s: int):
    # edge lists cannot carry isolated vertices; --s restores them
    if graph.n > s:
        raise ParameterError(f"observation has {graph.n} vertices, "
                             f"more than the declared window size {s}")
    if graph.n == s:
        return graph
    return SimpleGraph(s, list(graph.edges()))


def _cmd_detect(args) -> int:
    g1, _ = read_edge_list(args.g1, m0=args.m0)
    g2, _ = read_edge_list(args.g2, m0=args.m0)
    if args.s is not None:
        g1 = _pad_vertices(g1, args.s)
        g2 = _pad_vertices(g2, args.s)
    if g1.n != g2.n:
        raise ParameterError(f"the two observations must have equal vertex "
                             f"counts, got {g1.n} and {g2.n}; pass --s if "
                             f"isolated vertices were dropped by the format")
    params = ModelParams(n=args.n, s=g1.n, p=args.p, rho=args.rho)
    if args.statistic == "motif":
        wf = WeightedFamily.build(parse_family_spec(args.family), params)
        out = run_test(wf, center(g1, args.p), center(g2, args.p))
        result = {"statistic": out.statistic, "threshold": out.threshold,
                  "correlated": out.correlated, "route": "motif",
                  "family": args.family}
    else:
        m = args.m if args.m is not None else default_m(args.n, g1.n, args.eps)
        stat = it_statistic_exhaustive(g1, g2, m)
        tau = it_threshold(m, args.p, params.gamma, args.eps)
        result = {"statistic": stat, "threshold": tau,
                  "correlated": stat >= tau, "route": "it-exhaustive", "m": m}
    print(json.dumps(result, indent=2))
    return 0


def _cmd_experiment(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = ExperimentConfig.from_json(fh.read())
    if args.seed is not None:
        data = config.to_dict()
        data["master_seed"] = args.seed
        config = ExperimentConfig.from_dict(data)
    meta = run_experiment(config, args.out_dir, workers=args.workers)
    print(json.dumps({"out_dir": args.out_dir,
                      "config_hash": meta["config_hash"],
                      "records": meta["records"],
                      "total_wall_time_s": meta["total_wall_time_s"]}))
    return 0


def _cmd_snr(args) -> int:
    report = low_degree_snr(args.n, args.s, args.rho, args.D)
    payload = report.to_dict()
    if args.s < args.n:
        payload["closed_form_bound"] = snr_closed_form_bound(
            args.n, args.s, args.rho, args.D)
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_roc(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = ExperimentConfig.from_json(fh.read())
    scores = args.scores or os.path.join(args.out_dir, "scores.csv")
    records = read_scores_csv(scores)
    os.makedirs(args.out_dir, exist_ok=True)
    written = write_roc_outputs(args.out_dir, records, config)
    print(json.dumps({"out_dir": args.out_dir, "curves": len(written)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrdetect",
        description="Correlation detection between induced subgraph samples.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a graph pair (and windows)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--rho", type=float, default=None,
                   help="omit for an independent pair")
    p.add_argument("--s", type=int, default=None,
                   help="also draw induced windows of this size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("motifs", help="enumerate a motif family")
    p.add_argument("--family", required=True,
                   help="trees:Ne | bd:Ne,d | structured:ell,d | simple:maxE")
    p.add_argument("--out", default=None, help="write the family as JSON")
    p.set_defaults(func=_cmd_motifs)

    p = sub.add_parser("detect", help="test two edge-list observations")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--n", type=int, required=True,
                   help="population size the windows were drawn from")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--family", default="bd:4,4")
    p.add_argument("--s", type=int, default=None,
                   help="window size; pads vertices the format dropped")
    p.add_argument("--statistic", choices=["motif", "it-exhaustive"],
                   default="motif")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--m0", type=float, default=1.0)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("experiment", help="run a config-driven grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=None,
                   help="override the config's master_seed")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("snr", help="low-degree SNR report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--D", type=int, required=True)
    p.set_defaults(func=_cmd_snr)

    p = sub.add_parser("roc", help="per-cell ROC curves from a finished run")
    p.add_argument("--config", required=True)
    p.add_argument("--scores", default=None,
                   help="defaults to OUT_DIR/scores.csv")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_roc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
