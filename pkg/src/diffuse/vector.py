from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class DiffusionVector:
    """Sparse nonnegative node -> value map, stored as parallel arrays sorted by node."""

    nodes: np.ndarray
    values: np.ndarray

    @classmethod
    def from_arrays(cls, nodes, values) -> "DiffusionVector":
        nodes = np.asarray(nodes, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        order = np.argsort(nodes, kind="stable")
        return cls(nodes[order], values[order])

    @classmethod
    def from_dense(cls, dense) -> "DiffusionVector":
        dense = np.asarray(dense, dtype=np.float64)
        nz = np.flatnonzero(dense)
        return cls(nz.astype(np.int64), dense[nz])

    def __len__(self) -> int:
        return int(self.nodes.size)

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.values))

    def l1(self) -> float:
        return float(np.abs(self.values).sum())

    def to_dense(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=np.float64)
        out[self.nodes] = self.values
        return out

    def as_dict(self) -> dict[int, float]:
        return {int(k): float(v) for k, v in zip(self.nodes, self.values)}

    def scaled(self, factor: float) -> "DiffusionVector":
        return DiffusionVector(self.nodes, self.values * factor)
