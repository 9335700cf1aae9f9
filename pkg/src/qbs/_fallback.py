"""Pure-Python versions of the compiled kernels in ``_core.pyx``."""
from collections import deque

import numpy as np

INF16 = 65535


def _lists(offsets, adj):
    off = offsets.tolist()
    a = adj.tolist()
    return [a[off[i]:off[i + 1]] for i in range(len(off) - 1)]


def bfs(offsets, adj, source, blocked):
    n = len(offsets) - 1
    nbrs = _lists(offsets, adj)
    blk = blocked.tolist()
    dist = [-1] * n
    dist[source] = 0
    q = deque([source])
    while q:
        x = q.popleft()
        dx = dist[x] + 1
        for y in nbrs[x]:
            if dist[y] < 0 and not blk[y]:
                dist[y] = dx
                q.append(y)
    return np.array(dist, dtype=np.int32)


def landmark_bfs(offsets, adj, lm_index, root):
    n = len(offsets) - 1
    nbrs = _lists(offsets, adj)
    is_lm = (np.asarray(lm_index) >= 0).tolist()
    labels = [INF16] * n
    depth = [-1] * n
    depth[root] = 0
    cur_l, cur_n = [root], []
    meta = []
    level = 0
    while cur_l:
        if level + 1 >= INF16:
            raise OverflowError("graph diameter exceeds 16-bit distance range")
        nxt_l, nxt_n = [], []
        for x in cur_l:
            for y in nbrs[x]:
                if depth[y] >= 0:
                    continue
                depth[y] = level + 1
                if is_lm[y]:
                    nxt_n.append(y)
                    meta.append((y, level + 1))
                else:
                    nxt_l.append(y)
                    labels[y] = level + 1
        for x in cur_n:
            for y in nbrs[x]:
                if depth[y] < 0:
                    depth[y] = level + 1
                    nxt_n.append(y)
        cur_l, cur_n = nxt_l, nxt_n
        level += 1
    return np.array(labels, dtype=np.uint16), meta


class BiBfsEngine:
    """Unbounded bidirectional BFS on the full graph plus reverse search."""

    def __init__(self, offsets, adj, twin, blocked):
        self.nbrs = _lists(offsets, adj)
        self.blocked = blocked.tolist()

    def query(self, u, v):
        if u == v:
            return 0, np.empty((0, 2), dtype=np.int32)
        nbrs, blocked = self.nbrs, self.blocked
        depth = ({u: 0}, {v: 0})
        frontier = ([u], [v])
        size = [0, 0]
        level = [0, 0]
        meet = []
        while True:
            t = 0 if size[0] <= size[1] else 1
            seen, other = depth[t], depth[1 - t]
            d = level[t] + 1
            new = []
            for x in frontier[t]:
                for y in nbrs[x]:
                    if blocked[y] or y in seen:
                        continue
                    seen[y] = d
                    new.append(y)
                    if y in other:
                        meet.append(y)
            level[t] = d
            size[t] += len(new)
            frontier = (new, frontier[1]) if t == 0 else (frontier[0], new)
            if meet:
                break
            if not new:
                return INF16, np.empty((0, 2), dtype=np.int32)
        edges = set()
        for side in (0, 1):
            dep = depth[side]
            stack = list(meet)
            done = set(meet)
            while stack:
                x = stack.pop()
                dx = dep[x]
                for y in nbrs[x]:
                    if dep.get(y, -2) == dx - 1:
                        edges.add((x, y) if x < y else (y, x))
                        if y not in done:
                            done.add(y)
                            stack.append(y)
        arr = np.array(sorted(edges), dtype=np.int32).reshape(-1, 2)
        return level[0] + level[1], arr
