# distutils: language = c++
"""Compiled kernels: plain BFS, landmark BFS, and the two query engines.

Every function here has a pure-Python twin (``_fallback`` for the kernels,
``search.PyQueryEngine`` for the guided query) with the same signature.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint8_t, uint16_t, uint32_t
from libcpp.vector cimport vector

cnp.import_array()

cdef int BIG = 1 << 29
cdef int INF16 = 65535

cdef enum Status:
    MET = 0
    BOUND = 1
    EXHAUSTED = 2
    SKIPPED = 3


def bfs(const int64_t[::1] offsets, const int32_t[::1] adj, int source,
        const uint8_t[::1] blocked):
    cdef Py_ssize_t n = offsets.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int32)
    cdef int32_t[::1] d = dist
    cdef vector[int32_t] q
    cdef size_t head = 0
    cdef int32_t x, y
    cdef int64_t a
    with nogil:
        d[source] = 0
        q.push_back(source)
        while head < q.size():
            x = q[head]
            head += 1
            for a in range(offsets[x], offsets[x + 1]):
                y = adj[a]
                if d[y] < 0 and not blocked[y]:
                    d[y] = d[x] + 1
                    q.push_back(y)
    return dist


def landmark_bfs(const int64_t[::1] offsets, const int32_t[::1] adj,
                 const int32_t[::1] lm_index, int root):
    """Two-queue BFS from landmark ``root``.

    Returns ``(labels, meta)`` where ``labels[v]`` is the label distance to
    ``root`` (65535 when ``v`` gets no entry) and ``meta`` lists
    ``(landmark_vertex, depth)`` for landmarks reached from the labelled
    frontier.
    """
    cdef Py_ssize_t n = offsets.shape[0] - 1
    labels_arr = np.full(n, INF16, dtype=np.uint16)
    depth_arr = np.full(n, -1, dtype=np.int32)
    cdef uint16_t[::1] labels = labels_arr
    cdef int32_t[::1] depth = depth_arr
    cdef vector[int32_t] cur_l, cur_n, nxt_l, nxt_n, meta_v, meta_d
    cdef int32_t x, y, level = 0
    cdef int64_t a
    cdef size_t i
    cdef bint overflow = False
    with nogil:
        depth[root] = 0
        cur_l.push_back(root)
        # once the labelled frontier is empty nothing further can be labelled
        while cur_l.size() > 0:
            if level + 1 >= INF16:
                overflow = True
                break
            nxt_l.clear()
            nxt_n.clear()
            for i in range(cur_l.size()):
                x = cur_l[i]
                for a in range(offsets[x], offsets[x + 1]):
                    y = adj[a]
                    if depth[y] >= 0:
                        continue
                    depth[y] = level + 1
                    if lm_index[y] >= 0:
                        nxt_n.push_back(y)
                        meta_v.push_back(y)
                        meta_d.push_back(level + 1)
                    else:
                        nxt_l.push_back(y)
                        labels[y] = level + 1
            for i in range(cur_n.size()):
                x = cur_n[i]
                for a in range(offsets[x], offsets[x + 1]):
                    y = adj[a]
                    if depth[y] < 0:
                        depth[y] = level + 1
                        nxt_n.push_back(y)
            cur_l.swap(nxt_l)
            cur_n.swap(nxt_n)
            level += 1
    if overflow:
        raise OverflowError("graph diameter exceeds 16-bit distance range")
    meta = [(meta_v[i], meta_d[i]) for i in range(meta_v.size())]
    return labels_arr, meta


cdef class _Searcher:
    """Scratch space shared by the bidirectional engines.

    All per-vertex state is generation-stamped so a query never pays an
    O(|V|) reset.
    """
    cdef const int64_t[::1] offsets
    cdef const int32_t[::1] adj
    cdef const int64_t[::1] twin
    cdef const uint8_t[::1] blocked
    cdef Py_ssize_t n
    cdef uint32_t gen
    cdef uint32_t[::1] seen_u, seen_v, back_u, back_v, arc_mark
    cdef int32_t[::1] depth_u, depth_v
    cdef vector[int32_t] order_u, order_v, meet, out, stack
    cdef vector[size_t] lvl_u, lvl_v
    cdef public int du, dv
    cdef object _keep

    def __init__(self, offsets, adj, twin, blocked):
        self._keep = (offsets, adj, twin, blocked)
        self.offsets = offsets
        self.adj = adj
        self.twin = twin
        self.blocked = blocked
        self.n = offsets.shape[0] - 1
        self.gen = 0
        self.seen_u = np.zeros(self.n, dtype=np.uint32)
        self.seen_v = np.zeros(self.n, dtype=np.uint32)
        self.back_u = np.zeros(self.n, dtype=np.uint32)
        self.back_v = np.zeros(self.n, dtype=np.uint32)
        self.depth_u = np.zeros(self.n, dtype=np.int32)
        self.depth_v = np.zeros(self.n, dtype=np.int32)
        self.arc_mark = np.zeros(adj.shape[0], dtype=np.uint32)

    cdef void _next_gen(self) noexcept nogil:
        if self.gen == 0xFFFFFFF0u:
            self.seen_u[:] = 0
            self.seen_v[:] = 0
            self.back_u[:] = 0
            self.back_v[:] = 0
            self.arc_mark[:] = 0
            self.gen = 0
        self.gen += 1
        self.out.clear()
        self.meet.clear()

    cdef inline void _emit(self, int64_t a, int32_t x, int32_t y) noexcept nogil:
        cdef int64_t c = a if x < y else self.twin[a]
        if self.arc_mark[c] != self.gen:
            self.arc_mark[c] = self.gen
            if x < y:
                self.out.push_back(x)
                self.out.push_back(y)
            else:
                self.out.push_back(y)
                self.out.push_back(x)

    cdef bint _adjacent(self, int32_t u, int32_t v) noexcept nogil:
        cdef int64_t lo = self.offsets[u], hi = self.offsets[u + 1], mid
        while lo < hi:
            mid = (lo + hi) >> 1
            if self.adj[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        if lo < self.offsets[u + 1] and self.adj[lo] == v:
            self._emit(lo, u, v)
            return True
        return False

    cdef void _init_side(self, int side, int32_t s) noexcept nogil:
        if side == 0:
            self.seen_u[s] = self.gen
            self.depth_u[s] = 0
            self.order_u.clear()
            self.order_u.push_back(s)
            self.lvl_u.clear()
            self.lvl_u.push_back(0)
            self.lvl_u.push_back(1)
            self.du = 0
        else:
            self.seen_v[s] = self.gen
            self.depth_v[s] = 0
            self.order_v.clear()
            self.order_v.push_back(s)
            self.lvl_v.clear()
            self.lvl_v.push_back(0)
            self.lvl_v.push_back(1)
            self.dv = 0

    cdef Py_ssize_t _expand(self, int side) noexcept nogil:
        """Expand one level on ``side``; returns the new frontier size."""
        cdef uint32_t[::1] seen_t = self.seen_u if side == 0 else self.seen_v
        cdef uint32_t[::1] seen_o = self.seen_v if side == 0 else self.seen_u
        cdef int32_t[::1] depth_t = self.depth_u if side == 0 else self.depth_v
        cdef vector[int32_t]* order = &self.order_u if side == 0 else &self.order_v
        cdef vector[size_t]* lvl = &self.lvl_u if side == 0 else &self.lvl_v
        cdef int d = self.du if side == 0 else self.dv
        cdef size_t start = lvl[0][d], end = lvl[0][d + 1], i
        cdef int32_t x, y
        cdef int64_t a
        cdef uint32_t g = self.gen
        for i in range(start, end):
            x = order[0][i]
            for a in range(self.offsets[x], self.offsets[x + 1]):
                y = self.adj[a]
                if self.blocked[y] or seen_t[y] == g:
                    continue
                seen_t[y] = g
                depth_t[y] = d + 1
                order[0].push_back(y)
                if seen_o[y] == g:
                    self.meet.push_back(y)
        lvl[0].push_back(order[0].size())
        if side == 0:
            self.du += 1
        else:
            self.dv += 1
        return order[0].size() - end

    cdef int _bidir(self, int32_t u, int32_t v, int bound, int ustar, int vstar) noexcept nogil:
        cdef Py_ssize_t pu = 0, pv = 0, grown
        cdef bint cu, cv
        cdef int side
        self._init_side(0, u)
        self._init_side(1, v)
        while self.du + self.dv < bound:
            cu = self.du < ustar
            cv = self.dv < vstar
            if cu != cv:
                side = 0 if cu else 1
            else:
                side = 0 if pu <= pv else 1
            grown = self._expand(side)
            if side == 0:
                pu += grown
            else:
                pv += grown
            if self.meet.size() > 0:
                return MET
            if grown == 0:
                return EXHAUSTED
        return BOUND

    cdef void _back_walk(self, int32_t s, int side) noexcept nogil:
        """Emit every edge on shortest side-source -> ``s`` paths in the search."""
        cdef uint32_t[::1] seen_t = self.seen_u if side == 0 else self.seen_v
        cdef uint32_t[::1] back_t = self.back_u if side == 0 else self.back_v
        cdef int32_t[::1] depth_t = self.depth_u if side == 0 else self.depth_v
        cdef uint32_t g = self.gen
        cdef int32_t x, y, dx
        cdef int64_t a
        if back_t[s] == g:
            return
        back_t[s] = g
        self.stack.clear()
        self.stack.push_back(s)
        while self.stack.size() > 0:
            x = self.stack.back()
            self.stack.pop_back()
            dx = depth_t[x]
            if dx == 0:
                continue
            for a in range(self.offsets[x], self.offsets[x + 1]):
                y = self.adj[a]
                if self.blocked[y] or seen_t[y] != g or depth_t[y] != dx - 1:
                    continue
                self._emit(a, x, y)
                if back_t[y] != g:
                    back_t[y] = g
                    self.stack.push_back(y)

    cdef object _edges(self):
        cdef Py_ssize_t m = self.out.size() // 2, i
        arr = np.empty((m, 2), dtype=np.int32)
        cdef int32_t[:, ::1] view = arr
        for i in range(m):
            view[i, 0] = self.out[2 * i]
            view[i, 1] = self.out[2 * i + 1]
        return arr

    def frontier(self, int side, int level):
        """Vertices at ``level`` of the last query's search on ``side``."""
        cdef vector[int32_t]* order = &self.order_u if side == 0 else &self.order_v
        cdef vector[size_t]* lvl = &self.lvl_u if side == 0 else &self.lvl_v
        if level + 1 >= <int>lvl[0].size():
            return []
        return [order[0][i] for i in range(lvl[0][level], lvl[0][level + 1])]


cdef class BiBfsEngine(_Searcher):
    """Unbounded bidirectional BFS on the full graph plus reverse search."""

    def query(self, int u, int v):
        cdef int status
        cdef size_t i
        if u == v:
            return 0, np.empty((0, 2), dtype=np.int32)
        with nogil:
            self._next_gen()
            status = self._bidir(u, v, BIG, 0, 0)
            if status == MET:
                for i in range(self.meet.size()):
                    self._back_walk(self.meet[i], 0)
                    self._back_walk(self.meet[i], 1)
        if status != MET:
            return INF16, np.empty((0, 2), dtype=np.int32)
        return self.du + self.dv, self._edges()


cdef class QueryEngine(_Searcher):
    """Fused sketch + guided search + reverse/recover search."""
    cdef const uint16_t[:, ::1] lab
    cdef const int32_t[::1] lm_index
    cdef const int32_t[::1] landmarks
    cdef const int32_t[:, ::1] dmeta
    cdef const int64_t[::1] spg_off
    cdef const int32_t[::1] spg_edge
    cdef const int64_t[::1] delta_off
    cdef const int32_t[::1] delta_x, delta_y
    cdef const int64_t[::1] delta_arc
    cdef uint32_t[::1] meta_mark, lm_mark, vmark
    cdef uint32_t vgen
    cdef int k
    cdef vector[int32_t] lu_i, lu_d, lv_i, lv_d, pair_i, pair_j
    cdef vector[int32_t] wstack
    cdef object _keep2
    cdef public int last_dtop, last_dminus, last_ustar, last_vstar

    def __init__(self, offsets, adj, twin, lm_blocked, lab, lm_index, landmarks,
                 dmeta, spg_off, spg_edge, delta_off, delta_x, delta_y, delta_arc):
        super().__init__(offsets, adj, twin, lm_blocked)
        self._keep2 = (lab, lm_index, landmarks, dmeta, spg_off, spg_edge,
                       delta_off, delta_x, delta_y, delta_arc)
        self.lab = lab
        self.lm_index = lm_index
        self.landmarks = landmarks
        self.dmeta = dmeta
        self.spg_off = spg_off
        self.spg_edge = spg_edge
        self.delta_off = delta_off
        self.delta_x = delta_x
        self.delta_y = delta_y
        self.delta_arc = delta_arc
        self.k = landmarks.shape[0]
        self.meta_mark = np.zeros(max(delta_off.shape[0] - 1, 1), dtype=np.uint32)
        self.lm_mark = np.zeros(max(self.k, 1), dtype=np.uint32)
        self.vmark = np.zeros(self.n, dtype=np.uint32)
        self.vgen = 0

    cdef void _labels_of(self, int32_t t, vector[int32_t]* idx, vector[int32_t]* dist) noexcept nogil:
        cdef int i
        idx.clear()
        dist.clear()
        if self.lm_index[t] >= 0:
            idx.push_back(self.lm_index[t])
            dist.push_back(0)
            return
        for i in range(self.k):
            if self.lab[t, i] != INF16:
                idx.push_back(i)
                dist.push_back(self.lab[t, i])

    cdef int _sketch(self, int32_t u, int32_t v) noexcept nogil:
        cdef size_t a, b
        cdef int s, m, dtop = BIG, i, j
        self._labels_of(u, &self.lu_i, &self.lu_d)
        self._labels_of(v, &self.lv_i, &self.lv_d)
        self.pair_i.clear()
        self.pair_j.clear()
        for a in range(self.lu_i.size()):
            i = self.lu_i[a]
            for b in range(self.lv_i.size()):
                j = self.lv_i[b]
                m = self.dmeta[i, j]
                if m >= BIG:
                    continue
                s = self.lu_d[a] + m + self.lv_d[b]
                if s < dtop:
                    dtop = s
                    self.pair_i.clear()
                    self.pair_j.clear()
                if s == dtop:
                    self.pair_i.push_back(i)
                    self.pair_j.push_back(j)
        self.last_ustar = 0
        self.last_vstar = 0
        for a in range(self.pair_i.size()):
            if self.lm_index[u] < 0 and self.lab[u, self.pair_i[a]] - 1 > self.last_ustar:
                self.last_ustar = self.lab[u, self.pair_i[a]] - 1
            if self.lm_index[v] < 0 and self.lab[v, self.pair_j[a]] - 1 > self.last_vstar:
                self.last_vstar = self.lab[v, self.pair_j[a]] - 1
        return dtop

    cdef void _descend(self, int32_t w, int i) noexcept nogil:
        """Label-guided walk from ``w`` down to landmark ``i``."""
        cdef int32_t x, y, r = self.landmarks[i]
        cdef int dx
        cdef int64_t a
        if self.vmark[w] == self.vgen:
            return
        self.vmark[w] = self.vgen
        self.wstack.clear()
        self.wstack.push_back(w)
        while self.wstack.size() > 0:
            x = self.wstack.back()
            self.wstack.pop_back()
            dx = self.lab[x, i]
            for a in range(self.offsets[x], self.offsets[x + 1]):
                y = self.adj[a]
                if dx == 1:
                    if y == r:
                        self._emit(a, x, y)
                elif self.lab[y, i] == dx - 1:
                    self._emit(a, x, y)
                    if self.vmark[y] != self.vgen:
                        self.vmark[y] = self.vgen
                        self.wstack.push_back(y)

    cdef void _recover_side(self, int side, int32_t t) noexcept nogil:
        cdef vector[int32_t]* pairs = &self.pair_i if side == 0 else &self.pair_j
        cdef vector[int32_t]* order = &self.order_u if side == 0 else &self.order_v
        cdef vector[size_t]* lvl = &self.lvl_u if side == 0 else &self.lvl_v
        cdef int d_t = self.du if side == 0 else self.dv
        cdef size_t p, q
        cdef int i, sigma, dm
        cdef int32_t w
        for p in range(pairs[0].size()):
            i = pairs[0][p]
            if self.lm_mark[i] == self.gen:
                continue
            self.lm_mark[i] = self.gen
            sigma = self.lab[t, i]
            dm = sigma - 1 if sigma - 1 < d_t else d_t
            if self.vgen == 0xFFFFFFF0u:
                self.vmark[:] = 0
                self.vgen = 0
            self.vgen += 1
            for q in range(lvl[0][dm], lvl[0][dm + 1]):
                w = order[0][q]
                if self.lab[w, i] != INF16 and self.lab[w, i] + dm == sigma:
                    self._back_walk(w, side)
                    self._descend(w, i)
        # clear landmark marks for the other side
        for p in range(pairs[0].size()):
            self.lm_mark[pairs[0][p]] = 0

    cdef void _recover(self, int32_t u, int32_t v) noexcept nogil:
        cdef size_t p
        cdef int i, j, kk = self.k
        cdef int64_t e, c, s
        if self.lm_index[u] < 0:
            self._recover_side(0, u)
        if self.lm_index[v] < 0:
            self._recover_side(1, v)
        for p in range(self.pair_i.size()):
            i = self.pair_i[p]
            j = self.pair_j[p]
            if i == j:
                continue
            for s in range(self.spg_off[i * kk + j], self.spg_off[i * kk + j + 1]):
                e = self.spg_edge[s]
                if self.meta_mark[e] == self.gen:
                    continue
                self.meta_mark[e] = self.gen
                for c in range(self.delta_off[e], self.delta_off[e + 1]):
                    if self.arc_mark[self.delta_arc[c]] != self.gen:
                        self.arc_mark[self.delta_arc[c]] = self.gen
                        self.out.push_back(self.delta_x[c])
                        self.out.push_back(self.delta_y[c])

    def query(self, int u, int v):
        """Return ``(distance, edges)``; see :meth:`query_full`."""
        res = self.query_full(u, v)
        return res[0], res[3]

    def query_full(self, int u, int v):
        """Return ``(distance, d_top, d_minus, edges)``.

        ``d_minus`` is the sparsified-graph distance when the bidirectional
        stage met, else 65535 (larger than ``d_top`` or unreachable).
        """
        cdef int dtop, status = SKIPPED, dminus = BIG, dist
        cdef size_t i
        cdef bint u_free, v_free, adjacent
        if u == v:
            self.last_dtop = 0
            self.last_dminus = 0
            return 0, 0, 0, np.empty((0, 2), dtype=np.int32)
        u_free = self.lm_index[u] < 0
        v_free = self.lm_index[v] < 0
        with nogil:
            self._next_gen()
            dtop = self._sketch(u, v)
            adjacent = self._adjacent(u, v)
            if adjacent:
                dist = 1
                dminus = 1 if (u_free and v_free) else BIG
            else:
                if u_free and v_free:
                    status = self._bidir(u, v, dtop, self.last_ustar, self.last_vstar)
                else:
                    if u_free:
                        self._init_side(0, u)
                    if v_free:
                        self._init_side(1, v)
                if status == MET:
                    dminus = self.du + self.dv
                dist = dminus if dminus < dtop else dtop
                if dist < BIG:
                    if dminus <= dtop:
                        for i in range(self.meet.size()):
                            self._back_walk(self.meet[i], 0)
                            self._back_walk(self.meet[i], 1)
                    if dtop < BIG and dminus >= dtop:
                        self._recover(u, v)
        self.last_dtop = dtop if dtop < BIG else INF16
        self.last_dminus = dminus if dminus < BIG else INF16
        if dist >= BIG:
            return INF16, self.last_dtop, self.last_dminus, np.empty((0, 2), dtype=np.int32)
        return dist, self.last_dtop, self.last_dminus, self._edges()
