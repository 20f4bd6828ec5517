"""Command line entry point: ``smartselect <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import active, bench, centrality, gcn
from .graph import normalized_adjacency, read_edge_list, read_features, read_int_column
from .selection import SelectionPlan, random_select, smart_select, select_all_at_once


def _dump(obj, path=None):
    text = json.dumps(obj, indent=2) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8")) if path else {}


def _load_inputs(args):
    y = read_int_column(args.labels, "label")
    x = read_features(args.features)
    if x.shape[0] != len(y):
        raise SystemExit(f"error: {x.shape[0]} feature rows but {len(y)} labels")
    g = read_edge_list(args.graph, len(y))
    return g, y, x


def cmd_centrality(args):
    g = read_edge_list(args.graph, args.nodes)
    opts = {}
    m = centrality.Measure.parse(args.measure)
    if m is centrality.Measure.PAGERANK:
        opts = {"alpha": args.alpha, "tol": args.tol}
    elif m is centrality.Measure.VOTERANK and args.top:
        opts = {"r": min(args.top, g.n)}
    sc = centrality.compute(g, m, **opts)
    order = sc.ranking()
    if args.top:
        order = order[:args.top]
    _dump([{"node": int(v), "score": float(sc.scores[v])} for v in order], args.out)


def cmd_select(args):
    g = read_edge_list(args.graph, args.nodes)
    if args.strategy == "random":
        plan = random_select(g.n, args.budget, args.seed)
    elif args.strategy == "all":
        m = centrality.Measure.parse(args.measure)
        opts = {"r": args.budget} if m is centrality.Measure.VOTERANK else {}
        if m is centrality.Measure.PAGERANK:
            opts = {"alpha": args.alpha}
        plan = select_all_at_once(centrality.compute(g, m, **opts), args.budget)
    else:
        opts = {"alpha": args.alpha} if centrality.Measure.parse(args.measure) is centrality.Measure.PAGERANK else {}
        plan = smart_select(g, args.measure, args.budget, args.per_round, **opts)
    _dump(plan.to_json(), args.out)


def cmd_train(args):
    g, y, x = _load_inputs(args)
    plan = SelectionPlan.from_json(_read_json(args.train_mask))
    hyper = gcn.Hyper.from_dict(_read_json(args.hyper))
    train_mask = plan.mask(g.n)
    test_mask = None
    if args.test_mask:
        test_mask = read_int_column(args.test_mask, "mask flag").astype(bool) & ~train_mask
    m0 = gcn.init_model(x.shape[1], hyper.hidden_dim, int(y.max()) + 1, hyper.seed, hyper)
    model, report = gcn.train(m0, normalized_adjacency(g), x, y, train_mask, test_mask)
    gcn.save_model(model, args.out_model)
    out = report.to_json()
    out["hyper"] = hyper.to_dict()
    _dump(out, args.report)


def cmd_al_run(args):
    g, y, x = _load_inputs(args)
    conf = _read_json(args.config)
    conf["measure"] = args.measure
    cfg = active.AlConfig.from_dict(conf)
    test_mask = None
    if args.test_mask:
        test_mask = read_int_column(args.test_mask, "mask flag").astype(bool)
    elif args.eval_rest:
        test_mask = np.ones(g.n, dtype=bool)
    res = active.al_loop(g, x, active.Oracle(y), cfg, n_classes=int(y.max()) + 1,
                         test_mask=test_mask, labels_for_eval=y)
    _dump(res.plan.to_json(), args.out_plan)
    _dump({"config": cfg.to_dict(), "iterations": res.iterations, "wall_time": res.wall_time,
           "trace": res.trace}, args.out_trace)


def cmd_benchmark(args):
    suite = _read_json(args.suite)
    out = bench.benchmark(suite, args.out)
    sys.stdout.write((out / "summary.csv").read_text(encoding="utf-8"))


def build_parser():
    p = argparse.ArgumentParser(prog="smartselect", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    measures = [m.value for m in centrality.Measure]

    c = sub.add_parser("centrality", help="score nodes of an edge-list graph")
    c.add_argument("--measure", required=True, choices=measures)
    c.add_argument("--graph", required=True)
    c.add_argument("--nodes", type=int, help="node count (default: max id + 1)")
    c.add_argument("--alpha", type=float, default=0.15, help="PageRank teleport weight")
    c.add_argument("--tol", type=float, default=1e-10)
    c.add_argument("--top", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_centrality)

    s = sub.add_parser("select", help="choose training nodes")
    s.add_argument("--strategy", required=True, choices=["smart", "all", "random"])
    s.add_argument("--measure", choices=measures, default="degree")
    s.add_argument("--budget", type=int, default=140)
    s.add_argument("--per-round", type=int, default=10)
    s.add_argument("--graph", required=True)
    s.add_argument("--nodes", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--alpha", type=float, default=0.15)
    s.add_argument("--out")
    s.set_defaults(func=cmd_select)

    t = sub.add_parser("train", help="train the GCN on a selection plan")
    for name in ("--graph", "--features", "--labels", "--train-mask"):
        t.add_argument(name, required=True)
    t.add_argument("--hyper")
    t.add_argument("--test-mask")
    t.add_argument("--out-model", default="model.bin")
    t.add_argument("--report")
    t.set_defaults(func=cmd_train)

    a = sub.add_parser("al-run", help="centrality-driven active learning loop")
    a.add_argument("--measure", required=True, choices=measures)
    for name in ("--graph", "--features", "--labels"):
        a.add_argument(name, required=True)
    a.add_argument("--config")
    a.add_argument("--test-mask")
    a.add_argument("--eval-rest", action="store_true",
                   help="trace accuracy on all unlabeled nodes when no test mask is given")
    a.add_argument("--out-plan", default="plan.json")
    a.add_argument("--out-trace", default="trace.json")
    a.set_defaults(func=cmd_al_run)

    b = sub.add_parser("benchmark", help="run a suite of methods and rank them")
    b.add_argument("--suite", required=True)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_benchmark)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
