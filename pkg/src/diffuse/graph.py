"""Undirected simple graphs in CSR form, edge-list ingestion and conductance."""

from __future__ import annotations

import hashlib
import os
import struct
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


class GraphFormatError(ValueError):
    """Malformed edge-list input."""


class EmptyGraphError(ValueError):
    pass


class DegenerateSetError(ValueError):
    """Conductance requested for the empty set or the whole vertex set."""


@dataclass(frozen=True, eq=False)
class CsrGraph:
    """Immutable undirected simple graph.

    ``original_ids[i]`` is the input label of internal node ``i``. Every
    library call speaks internal IDs; translate at the boundary.
    """

    row_offsets: np.ndarray
    neighbors: np.ndarray
    degrees: np.ndarray
    original_ids: np.ndarray

    @property
    def num_nodes(self) -> int:
        return int(self.degrees.shape[0])

    @property
    def num_edges(self) -> int:
        return int(self.neighbors.shape[0] // 2)

    @property
    def total_volume(self) -> int:
        return int(self.neighbors.shape[0])

    def neighbors_of(self, i: int) -> np.ndarray:
        return self.neighbors[self.row_offsets[i]:self.row_offsets[i + 1]]

    def internal_ids(self, labels: Iterable[int]) -> np.ndarray:
        """Map original labels to internal IDs; unknown labels raise KeyError."""
        lookup = self._label_index()
        out = []
        for lab in labels:
            try:
                out.append(lookup[int(lab)])
            except KeyError:
                raise KeyError(f"node {lab} is not in the graph") from None
        return np.asarray(out, dtype=np.int64)

    def _label_index(self) -> dict[int, int]:
        cached = self.__dict__.get("_lookup")
        if cached is None:
            cached = {int(lab): i for i, lab in enumerate(self.original_ids)}
            object.__setattr__(self, "_lookup", cached)
        return cached

    def node_set(self, members: Iterable[int]) -> "NodeSet":
        idx = np.unique(np.asarray(list(members), dtype=np.int64))
        vol, bnd = _volume_boundary(self, idx)
        return NodeSet(frozenset(int(i) for i in idx), vol, bnd)

    def same_as(self, other: "CsrGraph") -> bool:
        return all(
            np.array_equal(a, b)
            for a, b in zip(
                (self.row_offsets, self.neighbors, self.degrees, self.original_ids),
                (other.row_offsets, other.neighbors, other.degrees, other.original_ids),
            )
        )

    @classmethod
    def from_edges(cls, src, dst) -> "CsrGraph":
        """Build the largest connected component of the symmetrized simple graph.

        Node order follows first appearance in the interleaved (src, dst)
        stream. Among equally large components the one holding the smallest
        original label wins.
        """
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise ValueError("src and dst must have the same length")
        if src.size == 0:
            raise EmptyGraphError("empty graph: no edges")
        if src.min() < 0 or dst.min() < 0:
            raise GraphFormatError("node IDs must be non-negative")

        stream = np.column_stack((src, dst)).ravel()
        labels, first, inverse = np.unique(stream, return_index=True, return_inverse=True)
        appearance = np.argsort(first, kind="stable")
        position = np.empty_like(appearance)
        position[appearance] = np.arange(appearance.size)
        compact = position[inverse.ravel()].reshape(-1, 2)
        labels = labels[appearance]
        n = labels.size

        u, v = compact[:, 0], compact[:, 1]
        keep = u != v
        u, v = u[keep], v[keep]
        if u.size == 0:
            raise EmptyGraphError("empty graph: no edges after removing self-loops")

        lo, hi = np.minimum(u, v), np.maximum(u, v)
        pairs = np.unique(lo * n + hi)
        lo, hi = pairs // n, pairs % n

        adj = coo_matrix((np.ones(lo.size, dtype=np.int8), (lo, hi)), shape=(n, n))
        ncomp, comp = connected_components(adj, directed=False)
        sizes = np.bincount(comp, minlength=ncomp)
        min_label = np.full(ncomp, np.iinfo(np.int64).max)
        np.minimum.at(min_label, comp, labels)
        best = np.lexsort((min_label, -sizes))[0]

        keep_nodes = np.flatnonzero(comp == best)
        relabel = np.full(n, -1, dtype=np.int64)
        relabel[keep_nodes] = np.arange(keep_nodes.size)
        inside = comp[lo] == best
        a, b = relabel[lo[inside]], relabel[hi[inside]]
        return _build_csr(np.concatenate((a, b)), np.concatenate((b, a)), labels[keep_nodes])


def check_seeds(g: CsrGraph, seeds) -> np.ndarray:
    """Validate seed IDs; duplicates collapse, first-occurrence order kept."""
    arr = np.atleast_1d(np.asarray(seeds, dtype=np.int64))
    if arr.size == 0:
        raise ValueError("at least one seed is required")
    bad = arr[(arr < 0) | (arr >= g.num_nodes)]
    if bad.size:
        raise ValueError(f"invalid seed node ID {int(bad[0])} (graph has {g.num_nodes} nodes)")
    _, first = np.unique(arr, return_index=True)
    return arr[np.sort(first)]


def _build_csr(rows: np.ndarray, cols: np.ndarray, labels: np.ndarray) -> CsrGraph:
    n = labels.size
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    degrees = np.bincount(rows, minlength=n).astype(np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=offsets[1:])
    return CsrGraph(offsets, cols.astype(np.int64), degrees, labels.astype(np.int64))


@dataclass(frozen=True)
class NodeSet:
    members: frozenset
    volume: int
    boundary: int

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)


def _volume_boundary(g: CsrGraph, idx: np.ndarray) -> tuple[int, int]:
    if idx.size and (idx[0] < 0 or idx[-1] >= g.num_nodes):
        raise KeyError("node ID out of range")
    mask = np.zeros(g.num_nodes, dtype=bool)
    mask[idx] = True
    vol = int(g.degrees[idx].sum())
    starts, stops = g.row_offsets[idx], g.row_offsets[idx + 1]
    if idx.size == 0:
        return 0, 0
    nbr_idx = np.concatenate([np.arange(a, b) for a, b in zip(starts, stops)])
    bnd = int(np.count_nonzero(~mask[g.neighbors[nbr_idx]]))
    return vol, bnd


def conductance(s, g: CsrGraph) -> float:
    """boundary(S) / min(vol(S), vol(V - S)) for a NodeSet or iterable of node IDs."""
    if not isinstance(s, NodeSet):
        s = g.node_set(s)
    denom = min(s.volume, g.total_volume - s.volume)
    if len(s) == 0 or denom <= 0:
        raise DegenerateSetError("conductance undefined for the empty set or the whole graph")
    return s.boundary / denom


# -- edge-list text format


def parse_edge_list(stream: IO[str]) -> tuple[np.ndarray, np.ndarray]:
    src: list[int] = []
    dst: list[int] = []
    for lineno, line in enumerate(stream, start=1):
        text = line.strip()
        if not text or text[0] in "#%":
            continue
        parts = text.split()
        if len(parts) != 2:
            what = "weighted edges are not supported" if len(parts) > 2 else "expected two node IDs"
            raise GraphFormatError(f"line {lineno}: {what}: {text!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer node ID: {text!r}") from None
        if a < 0 or b < 0:
            raise GraphFormatError(f"line {lineno}: negative node ID: {text!r}")
        src.append(a)
        dst.append(b)
    return np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)


def load_edge_list(source) -> CsrGraph:
    """Load an edge list from an open text stream or a file path."""
    if isinstance(source, (str, os.PathLike)):
        with open(source) as fh:
            src, dst = parse_edge_list(fh)
    else:
        src, dst = parse_edge_list(source)
    if src.size == 0:
        raise EmptyGraphError("empty graph: no edges in input")
    return CsrGraph.from_edges(src, dst)


def write_edge_list(g: CsrGraph, stream: IO[str]) -> None:
    """Write each edge once, in original labels, so reloading reproduces ``g`` exactly.

    Edges are ordered so that nodes first appear in internal-ID order; a
    self-loop line is emitted where no edge can introduce the next node.
    """
    labels = g.original_ids
    emitted: set[tuple[int, int]] = set()
    lines = []

    def emit(a: int, b: int) -> None:
        emitted.add((min(a, b), max(a, b)))
        lines.append(f"{labels[a]} {labels[b]}\n")

    seen = 0
    for k in range(g.num_nodes):
        if k < seen:
            continue
        nbrs = g.neighbors_of(k)
        if nbrs[0] < k:
            emit(int(nbrs[0]), k)
            seen = k + 1
        elif k + 1 < g.num_nodes and k + 1 in nbrs:
            emit(k, k + 1)
            seen = k + 2
        else:
            # a self-loop introduces k without adding an edge
            lines.append(f"{labels[k]} {labels[k]}\n")
            seen = k + 1
    for i in range(g.num_nodes):
        for j in g.neighbors_of(i):
            if i < j and (i, int(j)) not in emitted:
                lines.append(f"{labels[i]} {labels[j]}\n")
    stream.writelines(lines)


# -- binary CSR cache

_MAGIC = b"DFCSR\x00\x00\x00"
_VERSION = 1
_HEADER = struct.Struct("<8sI32sQQ")


def file_checksum(path) -> bytes:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.digest()


def save_cache(g: CsrGraph, path, checksum: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _VERSION, checksum, g.num_nodes, g.neighbors.size))
        for arr in (g.row_offsets, g.neighbors, g.degrees, g.original_ids):
            fh.write(np.ascontiguousarray(arr, dtype="<i8").tobytes())


def load_cache(path, checksum: bytes) -> CsrGraph | None:
    """Return the cached graph, or None if missing, foreign or stale."""
    try:
        with open(path, "rb") as fh:
            header = fh.read(_HEADER.size)
            if len(header) != _HEADER.size:
                return None
            magic, version, digest, n, m = _HEADER.unpack(header)
            if magic != _MAGIC or version != _VERSION or digest != checksum:
                return None
            arrays = []
            for count in (n + 1, m, n, n):
                arr = np.frombuffer(fh.read(8 * count), dtype="<i8")
                if arr.size != count:
                    return None
                arrays.append(arr.astype(np.int64))
    except FileNotFoundError:
        return None
    return CsrGraph(*arrays)


def load_graph(path, use_cache: bool = False) -> CsrGraph:
    """Load an edge-list file, optionally through a ``<path>.csr`` binary cache."""
    if not use_cache:
        return load_edge_list(path)
    checksum = file_checksum(path)
    cache_path = f"{path}.csr"
    g = load_cache(cache_path, checksum)
    if g is None:
        g = load_edge_list(path)
        save_cache(g, cache_path, checksum)
    return g
