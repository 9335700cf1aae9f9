"""Deterministic synthetic graphs (edge arrays over ids ``0..n-1``)."""
from __future__ import annotations

import random

import numpy as np

from .graph import Graph


def erdos_renyi(n: int, p: float, seed: int = 0) -> np.ndarray:
    """G(n, p) via geometric edge skipping (Batagelj-Brandes)."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 0 and 0 <= p <= 1")
    if p == 0.0 or n < 2:
        return np.empty((0, 2), dtype=np.int64)
    if p == 1.0:
        iu = np.triu_indices(n, 1)
        return np.column_stack(iu).astype(np.int64)
    rng = random.Random(seed)
    lp = np.log1p(-p)
    out = []
    v, w = 1, -1
    while v < n:
        w += 1 + int(np.log1p(-rng.random()) / lp)
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            out.append((w, v))
    return np.array(out, dtype=np.int64).reshape(-1, 2)


def barabasi_albert(n: int, m: int, seed: int = 0) -> np.ndarray:
    """Preferential attachment: each new vertex links to ``m`` distinct
    earlier vertices chosen proportionally to degree."""
    if m < 1 or n <= m:
        raise ValueError("need 1 <= m < n")
    rng = random.Random(seed)
    src = np.empty((n - m) * m, dtype=np.int64)
    dst = np.empty((n - m) * m, dtype=np.int64)
    repeated: list[int] = []
    targets = list(range(m))
    pos = 0
    for s in range(m, n):
        src[pos:pos + m] = s
        dst[pos:pos + m] = targets
        pos += m
        repeated.extend(targets)
        repeated.extend([s] * m)
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(repeated[int(rng.random() * len(repeated))])
        targets = sorted(chosen)
    return np.column_stack([src, dst])


def grid(rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    ids = np.arange(rows * cols, dtype=np.int64).reshape(rows, cols)
    horiz = np.column_stack([ids[:, :-1].ravel(), ids[:, 1:].ravel()])
    vert = np.column_stack([ids[:-1, :].ravel(), ids[1:, :].ravel()])
    return np.concatenate([horiz, vert])


def as_graph(edges: np.ndarray, n: int) -> Graph:
    return Graph.from_edges(edges, n=n)


def generate(model: str, n: int, param: float, seed: int = 0) -> Graph:
    if model == "er":
        return as_graph(erdos_renyi(n, float(param), seed), n)
    if model == "ba":
        return as_graph(barabasi_albert(n, int(param), seed), n)
    if model == "grid":
        cols = int(param) if param else n
        return as_graph(grid(n, cols), n * cols)
    raise ValueError(f"unknown model {model!r}")
