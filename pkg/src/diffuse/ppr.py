"""Personalized PageRank by the Andersen-Chung-Lang push procedure."""

from __future__ import annotations

from dataclasses import dataclass, field


from ._kernels import ppr_push_kernel
from .graph import CsrGraph, check_seeds
from .vector import DiffusionVector


@dataclass(frozen=True)
class PprParams:
    alpha: float
    eps: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")


@dataclass(frozen=True, eq=False)
class PprResult:
    p: DiffusionVector
    steps: int
    work: int
    pushed_mass: float
    params: PprParams
    residual: DiffusionVector = field(repr=False)


def ppr_push(g: CsrGraph, seeds, params: PprParams) -> PprResult:
    """Approximate (1 - alpha) sum_k alpha^k P^k s to within eps * d_u per node.

    A node is pushed while r_u >= eps * d_u: (1 - alpha) r_u moves into p_u
    and alpha r_u / d_u goes to each neighbor's residual.
    """
    seeds = check_seeds(g, seeds)
    pk, pv, rk, rv, steps, work, pushed = ppr_push_kernel(
        g.row_offsets, g.neighbors, g.degrees, seeds, float(params.alpha), float(params.eps)
    )
    keep = rv > 0
    return PprResult(
        p=DiffusionVector.from_arrays(pk, pv),
        steps=int(steps),
        work=int(work),
        pushed_mass=float(pushed),
        params=params,
        residual=DiffusionVector.from_arrays(rk[keep], rv[keep]),
    )
