"""Small synthetic graphs for tests, benchmarks and demos."""

from __future__ import annotations

import numpy as np

from .graph import CsrGraph


def clique_edges(k: int, offset: int = 0) -> list[tuple[int, int]]:
    return [(offset + a, offset + b) for a in range(k) for b in range(a + 1, k)]


def clique(k: int) -> CsrGraph:
    return from_pairs(clique_edges(k))


def barbell(k: int = 5) -> CsrGraph:
    """Two k-cliques {0..k-1} and {k..2k-1} joined by the edge (k-1, k)."""
    return from_pairs(clique_edges(k) + clique_edges(k, k) + [(k - 1, k)])


def star(leaves: int) -> CsrGraph:
    return from_pairs([(0, i) for i in range(1, leaves + 1)])


def from_pairs(pairs) -> CsrGraph:
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return CsrGraph.from_edges(arr[:, 0], arr[:, 1])


def random_connected(n: int, p: float, rng: np.random.Generator) -> CsrGraph:
    """Random spanning tree plus independent G(n, p) edges; always connected."""
    tree = [(i, int(rng.integers(0, i))) for i in range(1, n)]
    a, b = np.triu_indices(n, k=1)
    keep = rng.random(a.size) < p
    pairs = tree + list(zip(a[keep].tolist(), b[keep].tolist()))
    return from_pairs(pairs)


def random_sparse(n: int, avg_degree: float, rng: np.random.Generator) -> CsrGraph:
    """Largest component of n * avg_degree / 2 uniform random pairs."""
    m = int(n * avg_degree / 2)
    return CsrGraph.from_edges(rng.integers(0, n, m), rng.integers(0, n, m))
