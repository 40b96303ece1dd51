"""diffuse command line: cluster, compare, verify, eval-truth.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import evaluation as ev
from ._jit import backend
from .graph import CsrGraph, load_graph
from .hk import HkParams, hk_relax
from .oracle import DEFAULT_MAX_NODES, OracleCapError, exact_hk
from .ppr import PprParams, ppr_push
from .sweep import sweep_cut

fmt = ev.fmt_float


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _graph(args) -> CsrGraph:
    path = Path(args.graph)
    if not path.is_file():
        raise UsageError(f"graph file not found: {path}")
    return load_graph(path, use_cache=args.cache)


def _seeds(g: CsrGraph, labels) -> np.ndarray:
    try:
        return g.internal_ids(labels)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _labels(g: CsrGraph, nodes) -> str:
    return " ".join(str(int(g.original_ids[v])) for v in sorted(nodes))


def cmd_cluster(args, out) -> int:
    g = _graph(args)
    seeds = _seeds(g, args.seed)
    if args.method == "hk":
        params = HkParams(args.t, 1e-4 if args.eps is None else args.eps)
        res = hk_relax(g, seeds, params)
        vec, work = res.x, res.work
        desc = f"t={fmt(params.t)} eps={fmt(params.eps)} N={res.N_used}"
    else:
        grid = ev.PPR_EPS_GRID if args.eps is None else (args.eps,)
        best = None
        for eps in grid:
            res = ppr_push(g, seeds, PprParams(args.alpha, eps))
            if res.p.support_size == 0:
                continue
            sw = sweep_cut(res.p, g)
            if best is None or (sw.best_conductance, eps) < (best[0].best_conductance, best[1].params.eps):
                best = (sw, res)
        if best is None:
            raise UsageError("ppr produced an empty vector for every eps; lower --eps")
        vec, work = best[1].p, best[1].work
        desc = f"alpha={fmt(args.alpha)} eps={fmt(best[1].params.eps)}"
    if vec.support_size == 0:
        raise UsageError("diffusion vector is empty at this eps; lower --eps")
    sw = sweep_cut(vec, g)

    print(f"method: {args.method}", file=out)
    print(f"params: {desc}", file=out)
    print(f"conductance: {fmt(sw.best_conductance)}", file=out)
    print(f"size: {len(sw.best_set)}", file=out)
    print(f"work: {work}", file=out)
    print(f"support: {sw.support_size}", file=out)
    print(f"set: {_labels(g, sw.best_set.members)}", file=out)
    if args.dump_vector:
        print("vector:", file=out)
        for v, val in zip(vec.nodes, vec.values):
            print(f"{int(g.original_ids[v])} {fmt(val)}", file=out)
    return 0


def cmd_compare(args, out) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    g = _graph(args)
    cap = None if args.no_volume_cap else "auto"
    records = ev.random_seed_trials(g, args.trials, args.rng_seed, volume_cap=cap)
    out_path = Path(args.out)
    with open(out_path, "w", newline="") as fh:
        ev.write_trials_csv(records, fh, g, timings=args.timings)
    summary = {
        "graph": str(args.graph),
        "nodes": g.num_nodes,
        "edges": g.num_edges,
        "trials": args.trials,
        "rng": {"algorithm": ev.RNG_ALGORITHM, "seed": args.rng_seed},
        "backend": backend(),
        "percentiles": ev.summarize_trials(records),
    }
    summary_path = Path(args.summary) if args.summary else out_path.with_suffix(".json")
    summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    print(f"wrote {len(records)} records to {out_path} and summary to {summary_path}", file=out)
    return 0


def cmd_verify(args, out) -> int:
    g = _graph(args)
    params = HkParams(args.t, args.eps)
    sampled = args.samples is not None
    k = min(args.samples if sampled else 10, g.num_nodes)
    if k < 1:
        raise UsageError("--samples must be at least 1")
    if not sampled and g.num_nodes > args.oracle_cap:
        raise OracleCapError(
            f"graph has {g.num_nodes} nodes, above the oracle cap of {args.oracle_cap}; "
            "pass --samples K to verify K random seeds against the full-graph oracle"
        )
    rng = np.random.Generator(np.random.PCG64(args.rng_seed))
    seeds = rng.choice(g.num_nodes, size=k, replace=False)

    print("seed,N,max_weighted_error,eps,work,work_bound,status", file=out)
    ok = True
    for s in seeds:
        res = hk_relax(g, [int(s)], params)
        h = exact_hk(g, [int(s)], params.t, max_nodes=None)
        err = float(np.max(np.abs(h - res.x.to_dense(g.num_nodes)) / g.degrees))
        passed = err < params.eps and res.work <= res.work_bound
        ok &= passed
        print(",".join([str(int(g.original_ids[s])), str(res.N_used), fmt(err), fmt(params.eps),
                        str(res.work), fmt(res.work_bound), "PASS" if passed else "FAIL"]), file=out)
    print("PASS" if ok else "FAIL", file=out)
    return 0 if ok else 2


def cmd_eval_truth(args, out) -> int:
    g = _graph(args)
    path = Path(args.truth)
    if not path.is_file():
        raise UsageError(f"ground-truth file not found: {path}")
    with open(path) as fh:
        truth = ev.read_ground_truth(fh)
    methods = ("hk", "ppr") if args.method == "both" else (args.method,)
    HkParams(args.t, args.eps)  # validate before the long run
    print("method,f1,conductance,setsize", file=out)
    for m in methods:
        s = ev.ground_truth_eval(g, truth, m, t=args.t, eps=args.eps, alpha=args.alpha,
                                 min_size=args.min_size, limit=args.limit)
        print(f"{m},{fmt(s.f1)},{fmt(s.conductance)},{fmt(s.set_size)}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diffuse", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_cmd(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("graph", help="edge-list file")
        sp.add_argument("--cache", action="store_true", help="reuse/write a binary CSR cache next to the file")
        return sp

    c = graph_cmd("cluster", "find the community around one or more seeds")
    c.add_argument("--seed", type=int, nargs="+", required=True)
    c.add_argument("--method", choices=("hk", "ppr"), default="hk")
    c.add_argument("--t", type=float, default=ev.TRUTH_HK[0])
    c.add_argument("--eps", type=float, default=None,
                   help="hk default 1e-4; ppr default: best over 1e-2..1e-5")
    c.add_argument("--alpha", type=float, default=ev.PPR_ALPHA)
    c.add_argument("--dump-vector", action="store_true", help="also print the diffusion vector")
    c.set_defaults(func=cmd_cluster)

    c = graph_cmd("compare", "random-seed trials of hk vs ppr")
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--rng-seed", type=int, default=ev.DEFAULT_RNG_SEED)
    c.add_argument("--out", required=True, help="CSV output path")
    c.add_argument("--summary", help="JSON percentile summary (default: --out with .json suffix)")
    c.add_argument("--timings", action="store_true", help="add a wall-clock seconds column")
    c.add_argument("--no-volume-cap", action="store_true", help="disable the n^1.5 hk work cap")
    c.set_defaults(func=cmd_compare)

    c = graph_cmd("verify", "check hk-relax error and work bounds against the exact oracle")
    c.add_argument("--t", type=float, default=ev.TRUTH_HK[0])
    c.add_argument("--eps", type=float, default=ev.TRUTH_HK[1])
    c.add_argument("--samples", type=int, default=None,
                   help="number of random seeds; lifts the oracle size cap")
    c.add_argument("--rng-seed", type=int, default=ev.DEFAULT_RNG_SEED)
    c.add_argument("--oracle-cap", type=int, default=DEFAULT_MAX_NODES)
    c.set_defaults(func=cmd_verify)

    c = graph_cmd("eval-truth", "ground-truth community recovery (mean F1)")
    c.add_argument("truth", help="community file, one community per line")
    c.add_argument("--method", choices=("hk", "ppr", "both"), default="both")
    c.add_argument("--t", type=float, default=ev.TRUTH_HK[0])
    c.add_argument("--eps", type=float, default=ev.TRUTH_HK[1])
    c.add_argument("--alpha", type=float, default=ev.PPR_ALPHA)
    c.add_argument("--min-size", type=int, default=10, help="use communities larger than this")
    c.add_argument("--limit", type=int, default=100)
    c.set_defaults(func=cmd_eval_truth)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, ValueError, OSError) as exc:
        # GraphFormatError, EmptyGraphError and OracleCapError are ValueErrors
        print(f"diffuse {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
