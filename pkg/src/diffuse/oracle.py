"""Slow reference diffusions used to check the local solvers.

Both work on dense length-n vectors and refuse graphs above ``max_nodes``
unless the caller lifts the cap explicitly.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve
from scipy.stats import poisson

from .graph import CsrGraph, check_seeds

DEFAULT_MAX_NODES = 10_000
TAIL_TOL = 1e-14
SOLVE_TOL = 1e-12


class OracleCapError(ValueError):
    pass


def _guard(g: CsrGraph, max_nodes: int | None) -> None:
    if max_nodes is not None and g.num_nodes > max_nodes:
        raise OracleCapError(
            f"graph has {g.num_nodes} nodes, above the oracle cap of {max_nodes}; "
            "use sampled verification (verify --samples K) instead"
        )


def seed_vector(g: CsrGraph, seeds) -> np.ndarray:
    seeds = check_seeds(g, seeds)
    s = np.zeros(g.num_nodes)
    s[seeds] = 1.0 / seeds.size
    return s


def walk_matrix(g: CsrGraph) -> sp.csr_matrix:
    """Column-stochastic P = A D^-1."""
    a = sp.csr_matrix(
        (np.ones(g.neighbors.size), g.neighbors, g.row_offsets),
        shape=(g.num_nodes, g.num_nodes),
    )
    return (a @ sp.diags(1.0 / g.degrees)).tocsr()


def taylor_terms_needed(t: float, tol: float = TAIL_TOL) -> int:
    """Smallest M with e^-t sum_{k>M} t^k/k! < tol."""
    M = int(t)
    while poisson.sf(M, t) >= tol:
        M += 1
    return M


def heat_kernel_action(g: CsrGraph, v: np.ndarray, t: float, M: int | None = None) -> np.ndarray:
    """exp(-t (I - P)) v as sum_k Poisson(k; t) P^k v."""
    if M is None:
        M = taylor_terms_needed(t)
    P = walk_matrix(g)
    weights = poisson.pmf(np.arange(M + 1), t)
    term = np.asarray(v, dtype=np.float64).copy()
    h = weights[0] * term
    for k in range(1, M + 1):
        term = P @ term
        h += weights[k] * term
    return h


def exact_hk(g: CsrGraph, seeds, t: float, max_nodes: int | None = DEFAULT_MAX_NODES) -> np.ndarray:
    if not t > 0:
        raise ValueError("t must be positive")
    _guard(g, max_nodes)
    return heat_kernel_action(g, seed_vector(g, seeds), t)


def exact_ppr(g: CsrGraph, seeds, alpha: float, max_nodes: int | None = DEFAULT_MAX_NODES) -> np.ndarray:
    """Direct sparse solve of (I - alpha P) p = (1 - alpha) s."""
    if not (0 <= alpha < 1):
        raise ValueError("alpha must be in [0, 1)")
    _guard(g, max_nodes)
    s = seed_vector(g, seeds)
    M = (sp.identity(g.num_nodes, format="csc") - alpha * walk_matrix(g)).tocsc()
    rhs = (1 - alpha) * s
    p = spsolve(M, rhs)
    for _ in range(3):
        resid = rhs - M @ p
        if np.abs(resid).max() < SOLVE_TOL:
            break
        p += spsolve(M, resid)
    return p
