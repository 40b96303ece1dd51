"""Experiment harness: random-seed hk vs ppr trials and ground-truth F1 recovery."""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .graph import CsrGraph, NodeSet, conductance
from .hk import HkParams, choose_N, hk_relax
from .ppr import PprParams, ppr_push
from .sweep import sweep_cut

HK_GRID = ((10.0, 1e-4), (20.0, 1e-3), (40.0, 5e-3), (80.0, 1e-2))
PPR_ALPHA = 0.99
PPR_EPS_GRID = (1e-2, 1e-3, 1e-4, 1e-5)
TRUTH_HK = (5.0, 1e-4)
RNG_ALGORITHM = "numpy.random.PCG64"
DEFAULT_RNG_SEED = 0


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get("DIFFUSE_THREADS", os.cpu_count() or 1))
    return max(1, threads)


def _ordered_map(fn, items: Sequence, threads: int | None):
    # executor.map yields in submission order, so output is schedule independent
    n = thread_count(threads)
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


@dataclass
class Community:
    id: int
    labels: tuple[int, ...]


@dataclass
class Detection:
    """Best community found by one method from one seed over its parameter grid."""

    method: str
    t: float | None
    alpha: float | None
    eps: float
    best_set: NodeSet
    conductance: float
    work: int
    work_bound: float | None
    support_size: int
    terminated_early: bool
    elapsed: float = 0.0


def _pick(best: Detection | None, cand: Detection) -> Detection:
    if best is None or cand.conductance < best.conductance:
        return cand
    if cand.conductance == best.conductance and cand.eps < best.eps:
        return cand
    return best


def _singleton(g: CsrGraph, seed: int, method: str, eps: float) -> Detection:
    s = g.node_set([seed])
    return Detection(method, None, None, eps, s, conductance(s, g), 0, None, 1, False)


def auto_volume_cap(g: CsrGraph, N: int) -> float:
    """Early-termination cap on relaxed volume: n^1.5, but never below N vol(G).

    N vol(G) is what evaluating the Taylor polynomial globally would cost; on
    small graphs n^1.5 falls below it and would cut off ordinary runs.
    """
    return max(g.num_nodes ** 1.5, float(N) * g.total_volume)


def detect_hk(g: CsrGraph, seed: int, grid=HK_GRID, volume_cap: float | None | str = None) -> Detection:
    """Run hk-relax for each (t, eps) and keep the lowest-conductance sweep set.

    ``volume_cap="auto"`` applies :func:`auto_volume_cap` per grid point.
    """
    start = time.perf_counter()
    best = None
    for t, eps in grid:
        cap = volume_cap
        if cap == "auto":
            cap = auto_volume_cap(g, choose_N(t, eps))
        res = hk_relax(g, [seed], HkParams(t, eps, cap))
        if res.x.support_size == 0:
            continue
        sw = sweep_cut(res.x, g)
        best = _pick(best, Detection(
            "hk", t, None, eps, sw.best_set, sw.best_conductance,
            res.work, res.work_bound, sw.support_size, res.terminated_early,
        ))
    if best is None:
        best = _singleton(g, seed, "hk", min(e for _, e in grid))
    best.elapsed = time.perf_counter() - start
    return best


def detect_ppr(g: CsrGraph, seed: int, alpha: float = PPR_ALPHA, grid=PPR_EPS_GRID) -> Detection:
    start = time.perf_counter()
    best = None
    for eps in grid:
        res = ppr_push(g, [seed], PprParams(alpha, eps))
        if res.p.support_size == 0:
            continue
        sw = sweep_cut(res.p, g)
        best = _pick(best, Detection(
            "ppr", None, alpha, eps, sw.best_set, sw.best_conductance,
            res.work, None, sw.support_size, False,
        ))
    if best is None:
        best = _singleton(g, seed, "ppr", min(grid))
    best.elapsed = time.perf_counter() - start
    return best


@dataclass
class TrialRecord:
    trial: int
    seed: int
    method: str
    t: float | None
    alpha: float | None
    eps: float
    conductance: float
    set_size: int
    work: int
    work_bound: float | None
    support_size: int
    terminated_early: bool
    elapsed: float = field(default=0.0, compare=False)

    @classmethod
    def from_detection(cls, trial: int, seed: int, d: Detection) -> "TrialRecord":
        return cls(trial, seed, d.method, d.t, d.alpha, d.eps, d.conductance, len(d.best_set),
                   d.work, d.work_bound, d.support_size, d.terminated_early, d.elapsed)


def random_seed_trials(
    g: CsrGraph,
    n_trials: int,
    rng_seed: int = DEFAULT_RNG_SEED,
    hk_grid=HK_GRID,
    ppr_alpha: float = PPR_ALPHA,
    ppr_grid=PPR_EPS_GRID,
    volume_cap: float | None | str = "auto",
    threads: int | None = None,
) -> list[TrialRecord]:
    """Seed each trial at a uniformly random node and run both methods.

    ``volume_cap="auto"`` stops hk-relax early once the relaxed volume passes
    :func:`auto_volume_cap`.
    Records come back in trial order: hk then ppr for each trial.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    seeds = rng.integers(0, g.num_nodes, size=n_trials)

    def one(item):
        trial, seed = item
        seed = int(seed)
        return [
            TrialRecord.from_detection(trial, seed, detect_hk(g, seed, hk_grid, volume_cap)),
            TrialRecord.from_detection(trial, seed, detect_ppr(g, seed, ppr_alpha, ppr_grid)),
        ]

    out = _ordered_map(one, list(enumerate(seeds)), threads)
    return [rec for pair in out for rec in pair]


def summarize_trials(records: Iterable[TrialRecord]) -> dict:
    """25/50/75 percentiles of conductance, set size, work and runtime per method."""
    by_method: dict[str, list[TrialRecord]] = {}
    for r in records:
        by_method.setdefault(r.method, []).append(r)
    summary = {}
    for method, recs in by_method.items():
        cols = {
            "conductance": [r.conductance for r in recs],
            "set_size": [r.set_size for r in recs],
            "work": [r.work for r in recs],
            "seconds": [r.elapsed for r in recs],
        }
        summary[method] = {
            "trials": len(recs),
            **{
                name: {str(q): float(np.percentile(vals, q)) for q in (25, 50, 75)}
                for name, vals in cols.items()
            },
        }
    return summary


def fmt_float(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.9g}"


TRIAL_COLUMNS = ("trial", "seed", "method", "t", "alpha", "eps", "conductance",
                 "setsize", "work", "work_bound", "support", "terminated_early")


def write_trials_csv(records: Iterable[TrialRecord], stream: IO[str], g: CsrGraph,
                     timings: bool = False) -> None:
    """One row per record; seeds in original labels, floats at 9 significant digits."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(TRIAL_COLUMNS + (("seconds",) if timings else ()))
    for r in records:
        row = [r.trial, int(g.original_ids[r.seed]), r.method, fmt_float(r.t), fmt_float(r.alpha),
               fmt_float(r.eps), fmt_float(r.conductance), r.set_size, r.work,
               fmt_float(r.work_bound), r.support_size, int(r.terminated_early)]
        if timings:
            row.append(fmt_float(r.elapsed))
        w.writerow(row)


# -- ground truth


def f1(found, truth) -> float:
    """Harmonic mean of precision |F & T|/|F| and recall |F & T|/|T|."""
    found = set(found.members if isinstance(found, NodeSet) else found)
    truth = set(truth.members if isinstance(truth, NodeSet) else truth)
    if not found or not truth:
        raise ValueError("f1 needs two nonempty sets")
    overlap = len(found & truth)
    if overlap == 0:
        return 0.0
    precision = overlap / len(found)
    recall = overlap / len(truth)
    return 2 * precision * recall / (precision + recall)


def read_ground_truth(stream: IO[str]) -> list[Community]:
    """One community per line of whitespace-separated labels; IDs follow file order."""
    out = []
    for line in stream:
        text = line.strip()
        if not text or text[0] in "#%":
            continue
        try:
            labels = tuple(int(tok) for tok in text.split())
        except ValueError:
            raise ValueError(f"community {len(out)}: non-integer node ID") from None
        out.append(Community(len(out), labels))
    return out


@dataclass
class TruthSummary:
    method: str
    f1: float
    conductance: float
    set_size: float
    communities: list[int]
    skipped_missing: int


def qualifying_communities(g: CsrGraph, truth: Sequence[Community], min_size: int = 10,
                           limit: int = 100) -> tuple[list[tuple[int, np.ndarray]], int]:
    """First ``limit`` communities (file order) of size > min_size lying inside g.

    Returns ``[(community id, internal node IDs)]`` and how many were skipped
    for naming nodes outside the graph.
    """
    lookup = g._label_index()
    chosen = []
    missing = 0
    for c in truth:
        members = sorted(set(c.labels))
        if len(members) <= min_size:
            continue
        if any(lab not in lookup for lab in members):
            missing += 1
            continue
        chosen.append((c.id, np.asarray([lookup[lab] for lab in members], dtype=np.int64)))
        if len(chosen) == limit:
            break
    return chosen, missing


def ground_truth_eval(
    g: CsrGraph,
    truth: Sequence[Community],
    method: str,
    t: float = TRUTH_HK[0],
    eps: float = TRUTH_HK[1],
    alpha: float = PPR_ALPHA,
    ppr_grid=PPR_EPS_GRID,
    min_size: int = 10,
    limit: int = 100,
    threads: int | None = None,
) -> TruthSummary:
    """Seed from every member of each community and keep the highest-F1 set.

    hk uses the single (t, eps); ppr uses the usual best-conductance eps grid.
    Averages F1, conductance and set size over the communities.
    """
    if method not in ("hk", "ppr"):
        raise ValueError(f"unknown method {method!r}")
    chosen, missing = qualifying_communities(g, truth, min_size, limit)
    if not chosen:
        raise ValueError(f"no ground-truth community of size > {min_size} lies inside the graph")

    def run(seed: int) -> Detection:
        if method == "hk":
            return detect_hk(g, seed, ((t, eps),))
        return detect_ppr(g, seed, alpha, ppr_grid)

    def best_for(item):
        _, members = item
        target = set(int(v) for v in members)
        best = None
        for seed in members:
            d = run(int(seed))
            score = f1(d.best_set, target)
            if best is None or score > best[0]:
                best = (score, d)
        return best

    picks = _ordered_map(best_for, chosen, threads)
    return TruthSummary(
        method=method,
        f1=float(np.mean([p[0] for p in picks])),
        conductance=float(np.mean([p[1].conductance for p in picks])),
        set_size=float(np.mean([len(p[1].best_set) for p in picks])),
        communities=[cid for cid, _ in chosen],
        skipped_missing=missing,
    )
