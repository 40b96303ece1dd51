from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import sweep_kernel
from .graph import CsrGraph, NodeSet
from .vector import DiffusionVector


@dataclass(frozen=True, eq=False)
class SweepResult:
    best_set: NodeSet
    best_conductance: float
    # curve[k] is the conductance of the first k + 1 nodes of ``order``
    curve: np.ndarray
    order: np.ndarray = field(repr=False)
    support_size: int = 0

    def curve_points(self) -> list[tuple[int, float]]:
        return [(k + 1, float(c)) for k, c in enumerate(self.curve)]


def sweep_order(f: DiffusionVector, g: CsrGraph) -> np.ndarray:
    """Support of f sorted by f_i / d_i descending, ties to the smaller node ID."""
    mask = f.values != 0
    nodes = f.nodes[mask]
    ratio = f.values[mask] / g.degrees[nodes]
    return nodes[np.lexsort((nodes, -ratio))]


def sweep_cut(f: DiffusionVector, g: CsrGraph) -> SweepResult:
    """Minimum-conductance prefix of the degree-normalized ordering of f."""
    order = sweep_order(f, g)
    if order.size == 0:
        raise ValueError("sweep needs a diffusion vector with at least one nonzero entry")
    curve, vols, bnds = sweep_kernel(g.row_offsets, g.neighbors, g.degrees, order, g.total_volume)
    best = int(np.argmin(curve))
    members = frozenset(int(v) for v in order[: best + 1])
    return SweepResult(
        best_set=NodeSet(members, int(vols[best]), int(bnds[best])),
        best_conductance=float(curve[best]),
        curve=curve,
        order=order,
        support_size=int(order.size),
    )
