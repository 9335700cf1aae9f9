"""Per-query sketch over {u, v} and the landmarks."""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import INF
from .labelling import LabellingScheme


@dataclass
class Sketch:
    u: int
    v: int
    d_top: int
    # (landmark_index_u_side, landmark_index_v_side) pairs attaining d_top
    pairs: list = field(default_factory=list)
    # vertex-level edges {(a, b): weight} with a < b
    edges: dict = field(default_factory=dict)
    terminal_edges_u: dict = field(default_factory=dict)   # landmark vertex -> weight
    terminal_edges_v: dict = field(default_factory=dict)
    d_u_star: int = 0
    d_v_star: int = 0

    @property
    def vertices(self) -> set:
        return {x for e in self.edges for x in e}

    def star(self, side: int) -> int:
        return self.d_u_star if side == 0 else self.d_v_star

    def terminals(self, side: int) -> dict:
        return self.terminal_edges_u if side == 0 else self.terminal_edges_v


def endpoint_labels(scheme: LabellingScheme, t: int) -> list[tuple[int, int]]:
    """``L(t)``, or the virtual ``[(index(t), 0)]`` for a landmark endpoint."""
    i = int(scheme.landmark_set.index[t])
    if i >= 0:
        return [(i, 0)]
    return scheme.labels_of(t)


def compute_sketch(scheme: LabellingScheme, u: int, v: int) -> Sketch:
    if u == v:
        raise ValueError("sketch requires two distinct vertices")
    lu = endpoint_labels(scheme, u)
    lv = endpoint_labels(scheme, v)
    dm = scheme.dmeta
    best = INF
    pairs = []
    for i, a in lu:
        for j, b in lv:
            m = int(dm[i, j])
            if m >= INF:
                continue
            s = a + m + b
            if s < best:
                best, pairs = s, []
            if s == best:
                pairs.append((i, j))
    sk = Sketch(u, v, best, pairs)
    if best >= INF:
        return sk

    lm = scheme.landmarks
    du, dv = dict(lu), dict(lv)
    for i, j in pairs:
        ri, rj = int(lm[i]), int(lm[j])
        if ri != u:
            sk.terminal_edges_u[ri] = du[i]
            sk.edges[(min(u, ri), max(u, ri))] = du[i]
        if rj != v:
            sk.terminal_edges_v[rj] = dv[j]
            sk.edges[(min(v, rj), max(v, rj))] = dv[j]
        for e in scheme.meta_spg.get((i, j), ()):
            a, b, w = scheme.meta_edges[e].tolist()
            ra, rb = int(lm[a]), int(lm[b])
            sk.edges[(min(ra, rb), max(ra, rb))] = w
    sk.d_u_star = max([w - 1 for w in sk.terminal_edges_u.values()] + [0])
    sk.d_v_star = max([w - 1 for w in sk.terminal_edges_v.values()] + [0])
    return sk
