"""Connectivity gates: internal 3-connectivity, separation-pair
classification, and convex-drawability of plane graphs.

three_connected works on abstract adjacency maps; everything else takes a
PlaneGraph. Flow-based checks are O(n*m) style by construction; asymptotic
speed is a non-goal here.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Set, Tuple

from .plane_graph import PlaneGraph


class Not2Connected(ValueError):
    """Operation requires a 2-connected input graph."""


class PairClass(Enum):
    EXTERNAL = "external"
    NON_EXTERNAL = "non_external"


class Drawability(Enum):
    STRICTLY_CONVEX_OK = "strictly_convex_ok"
    CONVEX_ONLY = "convex_only"
    NONE = "none"


@dataclass(frozen=True)
class SeparationPair:
    u: int
    v: int
    components: Tuple[frozenset, ...]
    classification: PairClass


def _components(adj: Dict[int, Iterable[int]], removed: Set[int]) -> List[Set[int]]:
    seen = set(removed)
    comps = []
    for s in adj:
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def _three_vertex_disjoint_paths(adj_sets: Dict[int, Set[int]],
                                 s: int, t: int) -> bool:
    """At least three internally vertex-disjoint s-t paths (s,t non-adjacent),
    via unit-capacity max flow on the vertex-split network."""
    idx = {v: i for i, v in enumerate(adj_sets)}
    n = len(idx)
    # node 2i = in-copy, 2i+1 = out-copy
    cap = {}
    arcs = {i: [] for i in range(2 * n)}

    def add_arc(a, b, c):
        if (a, b) not in cap:
            cap[(a, b)] = 0
            cap[(b, a)] = cap.get((b, a), 0)
            arcs[a].append(b)
            arcs[b].append(a)
        cap[(a, b)] += c

    for v, i in idx.items():
        add_arc(2 * i, 2 * i + 1, 3 if v in (s, t) else 1)
        for w in adj_sets[v]:
            add_arc(2 * i + 1, 2 * idx[w], 1)
    source, sink = 2 * idx[s] + 1, 2 * idx[t]
    flow = 0
    while flow < 3:
        # BFS for an augmenting path
        parent = {source: None}
        queue = [source]
        while queue and sink not in parent:
            nxt = []
            for a in queue:
                for b in arcs[a]:
                    if b not in parent and cap.get((a, b), 0) > 0:
                        parent[b] = a
                        nxt.append(b)
            queue = nxt
        if sink not in parent:
            return False
        b = sink
        while parent[b] is not None:
            a = parent[b]
            cap[(a, b)] -= 1
            cap[(b, a)] = cap.get((b, a), 0) + 1
            b = a
        flow += 1
    return True


def three_connected(adj: Dict[int, Iterable[int]]) -> bool:
    """Whether the abstract graph has no vertex cut of size at most 2.

    Any cut of size <= 2 misses one of three fixed probe vertices w, and every
    vertex of a component not containing w is non-adjacent to w; so testing
    local connectivity from three probes to all their non-neighbors suffices.
    """
    adj_sets = {v: set(ws) for v, ws in adj.items()}
    if len(adj_sets) < 4:
        return False
    if any(len(ws) < 3 for ws in adj_sets.values()):
        return False
    probes = sorted(adj_sets)[:3]
    for w in probes:
        for t in adj_sets:
            if t == w or t in adj_sets[w]:
                continue
            if not _three_vertex_disjoint_paths(adj_sets, w, t):
                return False
    return True


def is_internally_3connected(g: PlaneGraph) -> bool:
    """Apex test: join a new vertex to all outer-face vertices and require the
    augmented abstract graph to be 3-connected."""
    adj = {v: set(ws) for v, ws in g.rotation.items()}
    outer = set(g.outer_walk())
    apex = max(adj) + 1
    adj[apex] = set(outer)
    for v in outer:
        adj[v].add(apex)
    return three_connected(adj)


def _is_two_connected(g: PlaneGraph) -> bool:
    adj = g.adjacency()
    if g.n < 3:
        return False
    for v in adj:
        if len(_components(adj, {v})) != 1:
            return False
    return True


def classify_separation_pairs(g: PlaneGraph) -> List[SeparationPair]:
    """All separation pairs of g, each labeled external or non-external.

    External means: both vertices on the outer face, the outer cycle splits at
    them into two arcs with at least one interior vertex each, each arc lies
    in one component of G-u-v, and those two components are distinct and the
    only ones."""
    if not _is_two_connected(g):
        raise Not2Connected("separation pairs are defined for 2-connected graphs")
    adj = g.adjacency()
    cycle = list(g.outer_walk())
    pos = {v: i for i, v in enumerate(cycle)}
    out = []
    ids = sorted(adj)
    for i, u in enumerate(ids):
        for v in ids[i + 1:]:
            comps = _components(adj, {u, v})
            if len(comps) < 2:
                continue
            comps_t = tuple(sorted((frozenset(c) for c in comps), key=min))
            cls = PairClass.NON_EXTERNAL
            if u in pos and v in pos:
                iu, iv = pos[u], pos[v]
                k = len(cycle)
                arc1 = [cycle[j % k] for j in range(iu + 1, iu + ((iv - iu) % k))]
                arc2 = [cycle[j % k] for j in range(iv + 1, iv + ((iu - iv) % k))]
                if arc1 and arc2:
                    c1 = next(c for c in comps if arc1[0] in c)
                    c2 = next(c for c in comps if arc2[0] in c)
                    if (all(w in c1 for w in arc1)
                            and all(w in c2 for w in arc2)
                            and c1 is not c2 and len(comps) == 2):
                        cls = PairClass.EXTERNAL
            out.append(SeparationPair(u, v, comps_t, cls))
    return out


def _smooth_internal_degree_two(g: PlaneGraph):
    """Repeatedly replace internal degree-2 vertices by an edge between their
    neighbors; None if that would ever create a parallel edge."""
    rot = {v: list(ws) for v, ws in g.rotation.items()}
    outer = set(g.outer_walk())
    while True:
        v = min((w for w in rot if w not in outer and len(rot[w]) == 2),
                default=None)
        if v is None:
            break
        a, b = rot[v]
        if b in rot[a]:
            return None
        rot[a][rot[a].index(v)] = b
        rot[b][rot[b].index(v)] = a
        del rot[v]
    return PlaneGraph({v: tuple(ws) for v, ws in rot.items()}, g.outer_dart)


def convex_drawability(g: PlaneGraph) -> Drawability:
    """Whether g admits a strictly convex drawing, only a convex one, or none."""
    if is_internally_3connected(g):
        return Drawability.STRICTLY_CONVEX_OK
    outer = set(g.outer_walk())
    if not any(v not in outer and g.degree(v) == 2 for v in g.rotation):
        return Drawability.NONE
    smoothed = _smooth_internal_degree_two(g)
    if smoothed is not None and is_internally_3connected(smoothed):
        return Drawability.CONVEX_ONLY
    return Drawability.NONE
