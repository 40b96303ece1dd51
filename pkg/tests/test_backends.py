"""The numba kernels and the plain-Python fallback must agree bit for bit."""

import json
import os
import subprocess
import sys

import pytest

SCRIPT = r"""
import json, sys
import numpy as np
from diffuse._jit import backend
from diffuse.generators import barbell, random_connected
from diffuse.hk import HkParams, hk_relax
from diffuse.ppr import PprParams, ppr_push
from diffuse.sweep import sweep_cut

out = {"backend": backend(), "runs": []}
graphs = [barbell(5)] + [random_connected(40, 0.1, np.random.default_rng(i)) for i in range(3)]
for g in graphs:
    h = hk_relax(g, [0, 3], HkParams(5.0, 1e-4))
    p = ppr_push(g, [1], PprParams(0.85, 1e-5))
    sw = sweep_cut(h.x, g)
    out["runs"].append({
        "hk": [h.steps, h.work, h.x.nodes.tolist(), [v.hex() for v in h.x.values.tolist()]],
        "ppr": [p.steps, p.work, p.p.nodes.tolist(), [v.hex() for v in p.p.values.tolist()]],
        "sweep": [sw.order.tolist(), [v.hex() for v in sw.curve.tolist()]],
    })
json.dump(out, sys.stdout)
"""


def run_backend(disable: bool):
    env = dict(os.environ, DIFFUSE_DISABLE_JIT="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def test_python_and_numba_paths_agree():
    pytest.importorskip("numba")
    jit = run_backend(False)
    py = run_backend(True)
    assert jit["backend"] == "numba" and py["backend"] == "python"
    assert jit["runs"] == py["runs"]
