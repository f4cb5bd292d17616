"""Independent certification of unidirectional morphs.

check_unidirectional_planar decides planarity of a whole one-axis step
exactly, from its two endpoints alone: with the fixed-axis values pinned,
every gap between two drawn features varies linearly in time, so the
interpolation is planar iff both endpoints are planar and every vertex
level and every open strip between levels carries the same left-to-right
sequence of vertices and edges in both endpoint drawings.

check_planarity_sampled spot-checks interior drawings of a step by exact
segment intersection, check_convexity_increasing tracks angle statuses
along a whole sequence, and check_step_bounds compares a sequence against
the guaranteed step-count budget for how it was produced.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

from .plane_graph import (
    AngleKind,
    DegenerateAngle,
    Drawing,
    PlaneGraph,
    PreconditionViolated,
    angle_status_points,
    drawing_is_planar,
    internal_reflex_count,
)
from .steps import Direction, MorphSequence, MorphStep

BOUND_MODES = ("general", "3conn", "convex_outer")


def _sweep_records(d: Drawing, direction: Direction):
    """Left-to-right feature order on every vertex level and every open
    strip between consecutive levels, read along the fixed axis."""
    fa = direction.fixed_axis
    ma = direction.moving_axis
    coords = d.coords
    levels = sorted({p[fa] for p in coords.values()})
    index = {lv: i for i, lv in enumerate(levels)}
    level_items: List[list] = [[] for _ in levels]
    strip_items: List[list] = [[] for _ in range(max(len(levels) - 1, 0))]
    for v, p in coords.items():
        level_items[index[p[fa]]].append((p[ma], 0, ("v", v)))
    for u, v in d.graph.edges():
        pu, pv = coords[u], coords[v]
        if pu[fa] == pv[fa]:
            # lies on a level; keyed by its low end, after that vertex
            level_items[index[pu[fa]]].append(
                (min(pu[ma], pv[ma]), 1, ("h", u, v)))
            continue
        if pu[fa] > pv[fa]:
            pu, pv = pv, pu
        lo, hi = index[pu[fa]], index[pv[fa]]
        run = pv[ma] - pu[ma]
        rise = pv[fa] - pu[fa]
        for li in range(lo + 1, hi):
            t = (levels[li] - pu[fa]) / rise
            level_items[li].append((pu[ma] + t * run, 2, ("e", u, v)))
        for si in range(lo, hi):
            mid = (levels[si] + levels[si + 1]) / 2
            t = (mid - pu[fa]) / rise
            strip_items[si].append((pu[ma] + t * run, ("e", u, v)))
    for items in level_items:
        items.sort()
    for items in strip_items:
        items.sort()
    return ([tuple(it[-1] for it in items) for items in level_items],
            [tuple(it[-1] for it in items) for items in strip_items])


def check_unidirectional_planar(step: MorphStep) -> bool:
    """Exact planarity of the full interpolation of a one-axis step."""
    if not drawing_is_planar(step.start.graph, step.start.coords):
        return False
    if not drawing_is_planar(step.end.graph, step.end.coords):
        return False
    return (_sweep_records(step.start, step.direction)
            == _sweep_records(step.end, step.direction))


def check_planarity_sampled(step: MorphStep, samples: int = 9) -> bool:
    """Exact planarity of the interpolated drawing at interior samples
    t = i/(samples+1). The order check is authoritative; this guards the
    interpolation itself."""
    g = step.start.graph
    for i in range(1, samples + 1):
        d = step.at(Fraction(i, samples + 1))
        if not drawing_is_planar(g, d.coords):
            return False
    return True


def _inner_angle_triples(g: PlaneGraph) -> List[Tuple[int, int, int]]:
    triples = []
    for fi in g.inner_face_indices():
        walk = g.face_vertices(fi)
        k = len(walk)
        for pos in range(k):
            triples.append((walk[(pos - 1) % k], walk[pos],
                            walk[(pos + 1) % k]))
    return triples


def _convex_here(d: Drawing, triple: Tuple[int, int, int]) -> bool:
    a, v, b = triple
    for w in triple:
        if w not in d.coords:
            raise PreconditionViolated(
                f"graph-of-record vertex {w} missing from a drawing")
    try:
        st = angle_status_points(d.point(a), d.point(v), d.point(b))
    except DegenerateAngle:
        return False
    return st.kind is not AngleKind.REFLEX


def check_convexity_increasing(seq: MorphSequence,
                               graph_of_record: Optional[PlaneGraph] = None,
                               ) -> bool:
    """Once an internal angle of the graph of record is convex or straight
    at an event endpoint, it must stay so at every later step midpoint and
    endpoint. Angles are read off the drawings by apex and face neighbors,
    so later graph edits may split them without ending the tracking."""
    g = graph_of_record if graph_of_record is not None else seq.initial.graph
    triples = _inner_angle_triples(g)
    settled = {tri for tri in triples if _convex_here(seq.initial, tri)}
    for ev in seq.events:
        if isinstance(ev, MorphStep):
            for d in (ev.at(Fraction(1, 2)), ev.end):
                for tri in settled:
                    if not _convex_here(d, tri):
                        return False
        for tri in triples:
            if tri not in settled and _convex_here(ev.end, tri):
                settled.add(tri)
    return True


def check_step_bounds(seq: MorphSequence, mode: str,
                      n: Optional[int] = None,
                      r: Optional[int] = None) -> bool:
    """Step count within the budget for how the sequence was produced:
    3.5n+2 in general, 1.5n+2 from a 3-connected input, max{2, r+1} from
    a convex-outer input with r internal reflex angles."""
    if mode not in BOUND_MODES:
        raise ValueError(f"unknown bound mode {mode!r}")
    if n is None:
        n = seq.initial.graph.n
    if mode == "convex_outer":
        if r is None:
            r = internal_reflex_count(seq.initial)
        bound = max(2, r + 1)
    elif mode == "3conn":
        bound = Fraction(3, 2) * n + 2
    else:
        bound = Fraction(7, 2) * n + 2
    return seq.step_count <= bound
