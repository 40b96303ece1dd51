"""Heat-kernel diffusion by coordinate relaxation (hk-relax).

Approximates ``h = exp(-t (I - P)) s`` with ``P = A D^-1`` so that
``max_i |h_i - x_i| / d_i < eps``, touching only a local region of the graph.
The Taylor polynomial of degree N is expanded into an implicit block system
whose blocks are relaxed through a FIFO queue; see :func:`hk_relax`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import hk_relax_kernel
from .graph import CsrGraph, check_seeds
from .vector import DiffusionVector

log = logging.getLogger(__name__)

# exp(t) must stay finite in double precision
MAX_T = 700.0


@dataclass(frozen=True)
class HkParams:
    t: float
    eps: float
    volume_cap: float | None = None

    def __post_init__(self):
        if not (0.0 < self.t <= MAX_T) or not math.isfinite(self.t):
            raise ValueError(f"t must be in (0, {MAX_T:g}], got {self.t}")
        if not (0.0 < self.eps < 1.0):
            raise ValueError(f"eps must be in (0, 1), got {self.eps}")
        if self.volume_cap is not None and not self.volume_cap > 0:
            raise ValueError(f"volume_cap must be positive, got {self.volume_cap}")


def choose_N(t: float, eps: float) -> int:
    """Smallest N >= 1 with t^(N+1)/(N+1)! * (N+2)/(N+2-t) < eps/2 and N+2 > t."""
    if not t > 0 or not (0 < eps < 1):
        raise ValueError("need t > 0 and 0 < eps < 1")
    N = 1
    term = t * t / 2.0  # t^(N+1) / (N+1)!
    while True:
        if N + 2 > t and term * (N + 2) / (N + 2 - t) < eps / 2:
            break
        N += 1
        term *= t / (N + 1)
    soft = math.ceil(2 * t * math.log(1 / eps)) + 3
    if N > soft:
        log.warning("choose_N(t=%g, eps=%g) = %d exceeds 2 t log(1/eps) + 3 = %d", t, eps, N, soft)
    return N


@dataclass(frozen=True, eq=False)
class PsiTable:
    t: float
    N: int
    psi: np.ndarray

    @property
    def taylor_sum(self) -> float:
        """T_N(t), which equals psi[0]."""
        return float(self.psi[0])


def psi_table(t: float, N: int) -> PsiTable:
    """Error weights psi_k(t) = sum_{m=0}^{N-k} k! t^m / (m+k)!, k = 0..N.

    Uses psi_N = 1, psi_k = 1 + t/(k+1) psi_{k+1}; every term is positive so
    there is no cancellation.
    """
    if N < 1 or not t > 0:
        raise ValueError("need N >= 1 and t > 0")
    psi = np.empty(N + 1, dtype=np.float64)
    psi[N] = 1.0
    for k in range(N - 1, -1, -1):
        psi[k] = 1.0 + t / (k + 1) * psi[k + 1]
    assert np.all(psi[:-1] >= psi[1:]), "psi weights must be nonincreasing"
    return PsiTable(t, N, psi)


def work_bound(table: PsiTable, eps: float) -> float:
    """Upper bound 2 N psi_1(t) / eps on the sum of relaxed degrees."""
    return 2.0 * table.N * float(table.psi[1]) / eps


@dataclass(frozen=True, eq=False)
class HkResult:
    x: DiffusionVector
    steps: int
    work: int
    N_used: int
    terminated_early: bool
    params: HkParams
    psi: PsiTable
    # leftover residual entries r(i, j) in the e^t-scaled system
    residual_nodes: np.ndarray = field(repr=False)
    residual_blocks: np.ndarray = field(repr=False)
    residual_mass: np.ndarray = field(repr=False)

    @property
    def work_bound(self) -> float:
        return work_bound(self.psi, self.params.eps)

    def unscaled(self) -> DiffusionVector:
        """The relaxation's own solution y = e^t x."""
        return self.x.scaled(math.exp(self.psi.t))


def hk_relax(g: CsrGraph, seeds, params: HkParams, N: int | None = None) -> HkResult:
    """Approximate the heat kernel diffusion from the uniform seed vector.

    Entry (i, j) of the block residual is queued once its mass reaches
    ``e^t eps d_i / (2 N psi_j)``; relaxing it moves the mass into y_i and
    spreads ``r t/(j+1) / d_i`` to each neighbor in block j+1. On exit every
    residual entry is below its threshold, which guarantees the
    degree-weighted accuracy ``eps`` for ``x = e^-t y``.
    """
    seeds = check_seeds(g, seeds)
    if N is None:
        N = choose_N(params.t, params.eps)
    table = psi_table(params.t, N)
    et = math.exp(params.t)
    thresh_mult = et * params.eps / (2.0 * N * table.psi)
    cap = math.inf if params.volume_cap is None else float(params.volume_cap)

    yk, yv, rk, rv, steps, work, early = hk_relax_kernel(
        g.row_offsets, g.neighbors, g.degrees, seeds,
        float(params.t), int(N), thresh_mult, cap,
    )
    keep = rv > 0
    rk, rv = rk[keep], rv[keep]
    return HkResult(
        x=DiffusionVector.from_arrays(yk, yv / et),
        steps=int(steps),
        work=int(work),
        N_used=int(N),
        terminated_early=bool(early),
        params=params,
        psi=table,
        residual_nodes=rk // (N + 1),
        residual_blocks=rk % (N + 1),
        residual_mass=rv,
    )
