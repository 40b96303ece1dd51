#!/usr/bin/env python3
"""Benchmark: numba kernels vs the plain-Python fallback.

Each backend runs in its own interpreter since the switch is read at import.

Usage:
    python benchmarks/bench_kernels.py [--nodes N] [--degree D] [--repeats R]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from diffuse._jit import backend
from diffuse.generators import random_sparse
from diffuse.hk import HkParams, hk_relax
from diffuse.ppr import PprParams, ppr_push
from diffuse.sweep import sweep_cut

nodes, degree, repeats = int(sys.argv[1]), float(sys.argv[2]), int(sys.argv[3])
g = random_sparse(nodes, degree, np.random.default_rng(0))
seeds = np.random.default_rng(1).integers(0, g.num_nodes, repeats)

def timed(fn):
    fn(int(seeds[0]))  # warm-up, includes JIT compile or cache load
    start = time.perf_counter()
    for s in seeds:
        out = fn(int(s))
    return (time.perf_counter() - start) / repeats, out

hk_t, hk = timed(lambda s: hk_relax(g, [s], HkParams(5.0, 1e-4)))
pr_t, pr = timed(lambda s: ppr_push(g, [s], PprParams(0.99, 1e-4)))
sw_t, _ = timed(lambda s: sweep_cut(hk.x, g))
json.dump({"backend": backend(), "n": g.num_nodes, "hk_relax": hk_t, "hk_work": hk.work,
           "ppr_push": pr_t, "ppr_work": pr.work, "sweep": sw_t}, sys.stdout)
"""


def run(disable_jit: bool, args) -> dict:
    env = dict(os.environ, DIFFUSE_DISABLE_JIT="1" if disable_jit else "0")
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(args.nodes), str(args.degree), str(args.repeats)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=100_000)
    parser.add_argument("--degree", type=float, default=10.0)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    jit = run(False, args)
    py = run(True, args)
    print(f"graph: {jit['n']} nodes, avg degree ~{args.degree:g}; "
          f"hk work {jit['hk_work']}, ppr work {jit['ppr_work']}")
    print(f"{'kernel':<10} {'numba (s)':>12} {'python (s)':>12} {'speedup':>9}")
    for key in ("hk_relax", "ppr_push", "sweep"):
        print(f"{key:<10} {jit[key]:>12.5f} {py[key]:>12.5f} {py[key] / jit[key]:>8.1f}x")


if __name__ == "__main__":
    main()
