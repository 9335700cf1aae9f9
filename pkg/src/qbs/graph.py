"""Immutable undirected graph in compressed adjacency (CSR) form.

Vertices are dense internal ids ``0..n-1``; the external ids read from an
edge list are kept alongside so answers can be reported in the caller's
vocabulary.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, TextIO

import numpy as np

from . import _backend

#: Sentinel hop count meaning "unreachable".
INF = 65535


class EdgeListError(ValueError):
    """Raised for a malformed edge-list line."""

    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


@dataclass
class IngestReport:
    lines: int = 0
    comments: int = 0
    self_loops: int = 0
    duplicates: int = 0


@dataclass(eq=False)
class Graph:
    offsets: np.ndarray
    adjacency: np.ndarray
    external_ids: np.ndarray
    id_map: dict = field(repr=False)
    report: IngestReport = field(default_factory=IngestReport, repr=False)

    def __post_init__(self):
        self.offsets = np.ascontiguousarray(self.offsets, dtype=np.int64)
        self.adjacency = np.ascontiguousarray(self.adjacency, dtype=np.int32)
        self.offsets.flags.writeable = False
        self.adjacency.flags.writeable = False
        self._twin = None
        self._adj_lists = None

    @property
    def vertex_count(self) -> int:
        return len(self.offsets) - 1

    @property
    def edge_count(self) -> int:
        return len(self.adjacency) // 2

    def __len__(self) -> int:
        return self.vertex_count

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted adjacency slice of ``v`` (a read-only view)."""
        if not 0 <= v < self.vertex_count:
            raise IndexError(f"vertex {v} out of range [0, {self.vertex_count})")
        return self.adjacency[self.offsets[v]:self.offsets[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < len(nbrs) and nbrs[i] == v)

    def edges(self) -> np.ndarray:
        """All undirected edges as an ``(m, 2)`` array with ``x < y``."""
        src = np.repeat(np.arange(self.vertex_count, dtype=np.int32), self.degrees())
        mask = src < self.adjacency
        return np.column_stack([src[mask], self.adjacency[mask]])

    @property
    def twin(self) -> np.ndarray:
        """``twin[a]`` is the arc index of the reverse of arc ``a``."""
        if self._twin is None:
            n = self.vertex_count
            src = np.repeat(np.arange(n, dtype=np.int64), self.degrees())
            dst = self.adjacency.astype(np.int64)
            # arcs are sorted by (src, dst); the reverse arc (dst, src) sits at
            # the position of key dst*n+src in that order
            keys = src * n + dst
            self._twin = np.searchsorted(keys, dst * n + src).astype(np.int64)
        return self._twin

    def adj_lists(self) -> list[list[int]]:
        """Adjacency as Python lists; used by the pure-Python paths."""
        if self._adj_lists is None:
            adj = self.adjacency.tolist()
            off = self.offsets.tolist()
            self._adj_lists = [adj[off[i]:off[i + 1]] for i in range(self.vertex_count)]
        return self._adj_lists

    def external(self, v: int) -> int:
        return int(self.external_ids[v])

    def internal(self, ext: int) -> int:
        try:
            return self.id_map[int(ext)]
        except KeyError:
            raise KeyError(f"unknown vertex id {ext}") from None

    @classmethod
    def from_edges(cls, pairs, external_ids=None, n: int | None = None) -> "Graph":
        """Build from internal-id pairs; direction, loops and duplicates collapse."""
        arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if n is None:
            n = int(arr.max()) + 1 if arr.size else 0
        if external_ids is None:
            external_ids = np.arange(n, dtype=np.int64)
        report = IngestReport(lines=len(arr))
        loops = arr[:, 0] == arr[:, 1]
        report.self_loops = int(loops.sum())
        arr = arr[~loops]
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        keys = np.unique(lo * n + hi) if len(arr) else np.empty(0, np.int64)
        report.duplicates = len(arr) - len(keys)
        lo, hi = keys // max(n, 1), keys % max(n, 1)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=offsets[1:])
        ext = np.asarray(external_ids, dtype=np.int64)
        id_map = {int(e): i for i, e in enumerate(ext.tolist())}
        return cls(offsets, dst.astype(np.int32), ext, id_map, report)


def load_edge_list(reader: BinaryIO | TextIO | str | bytes) -> Graph:
    """Parse a whitespace-separated edge list.

    Lines starting with ``#`` or ``%`` are comments; blank lines are skipped.
    Only the first two columns are read. External ids are remapped to dense
    internal ids in first-appearance order.
    """
    if isinstance(reader, (str, bytes)):
        data = reader
    else:
        data = reader.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    report = IngestReport()
    tokens: list[str] = []
    for lineno, line in enumerate(data.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        report.lines += 1
        if s[0] in "#%":
            report.comments += 1
            continue
        parts = s.split()
        if len(parts) < 2:
            raise EdgeListError(lineno, line, "expected two vertex ids")
        a, b = parts[0], parts[1]
        if not (a.isdigit() and b.isdigit()):
            raise EdgeListError(lineno, line, "vertex ids must be non-negative integers")
        tokens.append(a)
        tokens.append(b)

    flat = np.array(tokens, dtype=np.int64) if tokens else np.empty(0, np.int64)
    ext, first, inverse = np.unique(flat, return_index=True, return_inverse=True)
    # relabel so that internal ids follow first appearance
    by_appearance = np.argsort(first, kind="stable")
    rank = np.empty_like(by_appearance)
    rank[by_appearance] = np.arange(len(by_appearance))
    internal = rank[inverse].reshape(-1, 2)
    g = Graph.from_edges(internal, external_ids=ext[by_appearance], n=len(ext))
    g.report.lines = report.lines
    g.report.comments = report.comments
    return g


def load_edge_file(path) -> Graph:
    with open(path, "rb") as fh:
        return load_edge_list(fh)


def export_edge_list(g: Graph, writer: TextIO | None = None) -> str:
    """Canonical form: one ``u v`` per edge, ``u < v`` in external ids, ascending."""
    e = g.external_ids[g.edges()] if g.edge_count else np.empty((0, 2), np.int64)
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    order = np.lexsort((hi, lo))
    buf = io.StringIO()
    for a, b in zip(lo[order].tolist(), hi[order].tolist()):
        buf.write(f"{a} {b}\n")
    text = buf.getvalue()
    if writer is not None:
        writer.write(text)
    return text


def neighbors(g: Graph, v: int) -> np.ndarray:
    return g.neighbors(v)


def bfs_distances(g: Graph, source: int, excluded: Iterable[int] | np.ndarray | None = None) -> np.ndarray:
    """Hop distances from ``source`` with ``excluded`` vertices removed.

    Returns a ``uint16`` array with :data:`INF` for unreachable vertices.
    """
    n = g.vertex_count
    if not 0 <= source < n:
        raise IndexError(f"vertex {source} out of range [0, {n})")
    blocked = np.zeros(n, dtype=np.uint8)
    if excluded is not None:
        ex = np.asarray(list(excluded) if not isinstance(excluded, np.ndarray) else excluded)
        if ex.dtype == bool:
            blocked[ex] = 1
        elif ex.size:
            blocked[ex.astype(np.int64)] = 1
    if blocked[source]:
        raise ValueError("source vertex is excluded")
    dist = _backend.kernels.bfs(g.offsets, g.adjacency, int(source), blocked)
    out = np.full(n, INF, dtype=np.uint16)
    reached = dist >= 0
    if reached.any() and dist.max() >= INF:
        raise OverflowError("graph diameter exceeds 16-bit distance range")
    out[reached] = dist[reached]
    return out


def degree_descending(g: Graph) -> np.ndarray:
    """Vertices by degree descending, ties by ascending internal id."""
    deg = g.degrees()
    return np.lexsort((np.arange(g.vertex_count), -deg)).astype(np.int64)
