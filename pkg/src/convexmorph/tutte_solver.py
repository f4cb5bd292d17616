"""Generalized Tutte machinery: barycentric weights chosen from y-coordinates,
exact sparse solving of the resulting linear systems, and construction of
strictly convex boundary polygons compatible with fixed y (or fixed x).

The horizontal direction is primary; vertical variants transpose coordinates,
run the horizontal code, and transpose back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .plane_graph import (
    Drawing,
    PlaneGraph,
    PreconditionViolated,
    orientation,
    rat,
    sign_of,
)


class NoNeighborAbove(ValueError):
    """Internal vertex has no neighbor strictly above it."""


class NoNeighborBelow(ValueError):
    """Internal vertex has no neighbor strictly below it."""


class SingularSystem(ArithmeticError):
    """Tutte system unsolvable; indicates an invariant violation upstream."""


class NotYMonotoneCycle(ValueError):
    """Cycle has no unique top/bottom or a non-monotone chain."""


class ConstraintInfeasible(ValueError):
    """No polygon satisfies the requested pin constraints."""


class WrongChain(ValueError):
    """Pinned vertex sits on the chain that cannot contain that extreme."""


@dataclass(frozen=True)
class WeightAssignment:
    """Positive weights per directed edge (u, v) with internal u, unit row sums."""

    weights: Dict[Tuple[int, int], object]

    def __post_init__(self):
        rows = {}
        for (u, v), w in self.weights.items():
            if sign_of(w) <= 0:
                raise ValueError(f"weight for ({u},{v}) not positive")
            rows.setdefault(u, []).append(w)
        for u, ws in rows.items():
            if sign_of(sum(ws) - 1) != 0:
                raise ValueError(f"weights of {u} do not sum to 1")

    def row(self, u: int) -> Dict[int, object]:
        return {v: w for (x, v), w in self.weights.items() if x == u}

    def internal_vertices(self):
        return {u for (u, _) in self.weights}

    def consistent_with_y(self, y: Dict[int, object]) -> bool:
        """Check that the weighted neighbor average reproduces y exactly."""
        acc = {}
        for (u, v), w in self.weights.items():
            acc[u] = acc.get(u, 0) + w * y[v]
        return all(sign_of(acc[u] - y[u]) == 0 for u in acc)


@dataclass(frozen=True)
class BoundaryPolygon:
    """Outer-face vertices in walk order (clockwise) with fixed coordinates."""

    cycle: Tuple[int, ...]
    coords: Dict[int, Tuple]

    def validate(self):
        k = len(self.cycle)
        if k < 3:
            raise ValueError("polygon needs at least 3 vertices")
        pts = [self.coords[v] for v in self.cycle]
        minima = 0
        for i in range(k):
            p, c, n = pts[(i - 1) % k], pts[i], pts[(i + 1) % k]
            if orientation(p, c, n) != -1:
                raise ValueError(f"not strictly convex at {self.cycle[i]}")
            key_p = (p[1], p[0])
            key_c = (c[1], c[0])
            key_n = (n[1], n[0])
            if key_c < key_p and key_c < key_n:
                minima += 1
        # a locally convex closed walk winds once iff it has one lowest corner
        if minima != 1:
            raise ValueError("walk winds more than once")

    def matches_outer_walk(self, g: PlaneGraph) -> bool:
        walk = g.outer_walk()
        k = len(walk)
        if k != len(self.cycle) or set(walk) != set(self.cycle):
            return False
        shift = walk.index(self.cycle[0])
        return all(self.cycle[i] == walk[(shift + i) % k] for i in range(k))


def weights_from_y(g: PlaneGraph, y: Dict[int, object]) -> WeightAssignment:
    """Height-derived weights: t_u interpolates y_u between the averages of
    the neighbors strictly above and strictly below, then each side splits
    its share uniformly.  The resulting weighted neighbor average of y is
    exactly y_u again, so a redraw keeps every height."""
    outer = set(g.outer_walk())
    weights = {}
    for u in g.rotation:
        if u in outer:
            continue
        up = [v for v in g.rotation[u] if sign_of(y[v] - y[u]) > 0]
        down = [v for v in g.rotation[u] if sign_of(y[v] - y[u]) < 0]
        if len(up) + len(down) != g.degree(u):
            raise PreconditionViolated(f"horizontal edge at {u}")
        if not up:
            raise NoNeighborAbove(f"vertex {u}")
        if not down:
            raise NoNeighborBelow(f"vertex {u}")
        y_plus = sum(y[v] for v in up) / len(up)
        y_minus = sum(y[v] for v in down) / len(down)
        t = (y[u] - y_minus) / (y_plus - y_minus)
        for v in up:
            weights[(u, v)] = t / len(up)
        for v in down:
            weights[(u, v)] = (1 - t) / len(down)
    return WeightAssignment(weights)


# -- sparse exact linear solving --------------------------------------------


def solve_rows(rows: Dict[int, Dict[int, object]],
               rhs: Dict[int, List],
               float_mode: bool = False) -> Dict[int, List]:
    """Solve a square sparse system for several right-hand sides at once.

    rows maps equation id to {variable id: coefficient}; rhs maps equation id
    to a list of right-hand-side values. Exact mode uses Markowitz-pivoted
    elimination over rationals; float mode delegates to scipy's sparse LU.
    """
    if not rows:
        return {}
    if float_mode:
        return _solve_rows_float(rows, rhs)
    eqs = {e: dict(r) for e, r in rows.items()}
    b = {e: list(v) for e, v in rhs.items()}
    col_index: Dict[int, set] = {}
    for e, r in eqs.items():
        for v in r:
            col_index.setdefault(v, set()).add(e)
    if len(col_index) != len(eqs):
        raise SingularSystem("system is not square")
    solved_order = []
    remaining = set(eqs)
    while remaining:
        # Markowitz: cheapest fill-in estimate, deterministic tie-break
        best = None
        for e in remaining:
            re = eqs[e]
            if not re:
                raise SingularSystem("zero row")
            rlen = len(re)
            for v, c in re.items():
                if sign_of(c) == 0:
                    continue
                cost = (rlen - 1) * (len(col_index[v]) - 1)
                key = (cost, e, v)
                if best is None or key < best[0]:
                    best = (key, e, v)
        if best is None:
            raise SingularSystem("no usable pivot")
        _, pe, pv = best
        prow = eqs[pe]
        piv = prow[pv]
        inv = 1 / piv
        for v in list(prow):
            prow[v] *= inv
        b[pe] = [x * inv for x in b[pe]]
        prow[pv] = rat(1)
        for e in list(col_index[pv]):
            if e == pe:
                continue
            r = eqs[e]
            f = r.pop(pv)
            col_index[pv].discard(e)
            if sign_of(f) == 0:
                continue
            for v, c in prow.items():
                if v == pv:
                    continue
                nc = r.get(v, rat(0)) - f * c
                if sign_of(nc) == 0:
                    if v in r:
                        del r[v]
                        col_index[v].discard(e)
                else:
                    if v not in r:
                        col_index[v].add(e)
                    r[v] = nc
            b[e] = [x - f * y for x, y in zip(b[e], b[pe])]
        remaining.discard(pe)
        solved_order.append((pe, pv))
    # each pivot was eliminated from every other row, so this just reads off
    # the values; kept as a loop so partial reductions would still resolve
    values: Dict[int, List] = {}
    for pe, pv in reversed(solved_order):
        acc = list(b[pe])
        for v, c in eqs[pe].items():
            if v == pv:
                continue
            vv = values[v]
            acc = [x - c * y for x, y in zip(acc, vv)]
        values[pv] = acc
    return values


def _solve_rows_float(rows, rhs):
    import numpy as np
    from scipy.sparse import csr_matrix
    from scipy.sparse.linalg import splu

    eq_ids = sorted(rows)
    var_ids = sorted({v for r in rows.values() for v in r})
    if len(eq_ids) != len(var_ids):
        raise SingularSystem("system is not square")
    vidx = {v: i for i, v in enumerate(var_ids)}
    data, ri, ci = [], [], []
    for i, e in enumerate(eq_ids):
        for v, c in rows[e].items():
            ri.append(i)
            ci.append(vidx[v])
            data.append(float(c))
    n = len(eq_ids)
    mat = csr_matrix((data, (ri, ci)), shape=(n, n)).tocsc()
    k = len(next(iter(rhs.values())))
    bmat = np.zeros((n, k))
    for i, e in enumerate(eq_ids):
        bmat[i] = [float(x) for x in rhs[e]]
    try:
        lu = splu(mat)
        sol = lu.solve(bmat)
    except RuntimeError as exc:
        raise SingularSystem(str(exc))
    return {v: [float(sol[vidx[v], j]) for j in range(k)] for v in var_ids}


def tutte_rows(g: PlaneGraph, weights: WeightAssignment,
               boundary_coords: Dict[int, Tuple]):
    """Rows and right-hand sides of the pinned barycentric system (x and y)."""
    internal = weights.internal_vertices()
    rows = {}
    rhs = {}
    for u in internal:
        row = {u: rat(1) if not _is_float(boundary_coords) else 1.0}
        bx = 0
        by = 0
        for v in g.rotation[u]:
            w = weights.weights[(u, v)]
            if v in internal:
                row[v] = row.get(v, 0) - w
            else:
                bx = bx + w * boundary_coords[v][0]
                by = by + w * boundary_coords[v][1]
        rows[u] = row
        rhs[u] = [bx, by]
    return rows, rhs


def _is_float(coords) -> bool:
    p = next(iter(coords.values()))
    return isinstance(p[0], float)


def solve_tutte(g: PlaneGraph, boundary: BoundaryPolygon,
                weights: WeightAssignment) -> Drawing:
    """Solve the pinned barycentric system for both coordinates."""
    boundary.validate()
    if not boundary.matches_outer_walk(g):
        raise ValueError("boundary cycle does not match the outer walk")
    internal = weights.internal_vertices()
    expected = set(g.rotation) - set(boundary.cycle)
    if internal != expected:
        raise ValueError("weights do not cover exactly the internal vertices")
    rows, rhs = tutte_rows(g, weights, boundary.coords)
    sol = solve_rows(rows, rhs, float_mode=_is_float(boundary.coords))
    coords = dict(boundary.coords)
    for u, vals in sol.items():
        coords[u] = (vals[0], vals[1])
    return Drawing(g, coords)


def redraw_preserving_y(d: Drawing, boundary: BoundaryPolygon) -> Drawing:
    """Redraw onto a new boundary polygon without changing any y coordinate."""
    y = {v: p[1] for v, p in d.coords.items()}
    for v in boundary.cycle:
        if sign_of(boundary.coords[v][1] - y[v]) != 0:
            raise PreconditionViolated(f"boundary changes y of {v}")
    w = weights_from_y(d.graph, y)
    out = solve_tutte(d.graph, boundary, w)
    # the y system reproduces its own input; keep the bits identical anyway
    coords = {v: (out.coords[v][0], y[v]) for v in out.coords}
    return Drawing(d.graph, coords)


def redraw_preserving_x(d: Drawing, boundary: BoundaryPolygon) -> Drawing:
    """Vertical variant of redraw_preserving_y via coordinate transposition."""
    td = d.transposed()
    tb = BoundaryPolygon(tuple(reversed(boundary.cycle)),
                         {v: (p[1], p[0]) for v, p in boundary.coords.items()})
    out = redraw_preserving_y(td, tb)
    return out.transposed()


# -- boundary polygon construction -------------------------------------------


@dataclass(frozen=True)
class PolygonOptions:
    """scale stretches x; pins lists (vertex, 'left'|'right') uniqueness
    constraints, at most one per side."""
    scale: object = 1
    pins: Tuple = ()


def _split_chains(cycle: Sequence[int], y: Dict[int, object]):
    """Split a clockwise outer cycle at its unique bottom and top vertex.

    Returns (left, right), both ordered bottom to top; the clockwise walk
    ascends the left chain first."""
    k = len(cycle)
    bot = min(range(k), key=lambda i: (y[cycle[i]], i))
    top = max(range(k), key=lambda i: (y[cycle[i]], -i))
    for i in range(k):
        if i != bot and sign_of(y[cycle[i]] - y[cycle[bot]]) == 0:
            raise NotYMonotoneCycle("bottom vertex not unique")
        if i != top and sign_of(y[cycle[i]] - y[cycle[top]]) == 0:
            raise NotYMonotoneCycle("top vertex not unique")
    left = [cycle[(bot + i) % k] for i in range(((top - bot) % k) + 1)]
    right = [cycle[(top + i) % k] for i in range(((bot - top) % k) + 1)]
    right.reverse()
    for chain in (left, right):
        for a, b in zip(chain, chain[1:]):
            if sign_of(y[b] - y[a]) <= 0:
                raise NotYMonotoneCycle("chain not strictly increasing")
    return left, right


def _chain_slopes(incr: List, flip: Optional[int], target, eta, rising: bool):
    """Slopes for one chain: strictly monotone, optional sign pattern, and
    weighted sum exactly equal to target.

    incr: positive y-increments. flip: edges 1..flip get the 'before' sign.
    rising=True builds an increasing sequence (left chain), else decreasing.
    Returns None when the knob adjustment would break the sign pattern."""
    p = len(incr)
    sgn = 1 if rising else -1
    if p == 1:
        s = [target / incr[0]]
    else:
        center = rat(flip) if flip is not None else rat(p, 2)
        s = [sgn * eta * (rat(i) - center - rat(1, 2)) for i in range(1, p + 1)]
        delta = target - sum(si * ai for si, ai in zip(s, incr))
        if sign_of(delta) > 0:
            hi = p - 1 if rising else 0
            s[hi] = s[hi] + delta / incr[hi]
        elif sign_of(delta) < 0:
            lo = 0 if rising else p - 1
            s[lo] = s[lo] + delta / incr[lo]
    seq = s if rising else [-v for v in s]
    if any(sign_of(b - a) <= 0 for a, b in zip(seq, seq[1:])):
        return None
    if flip is not None:
        before = -1 if rising else 1
        for i, v in enumerate(s, start=1):
            want = before if i <= flip else -before
            if sign_of(v) != want:
                return None
    return s


def convex_polygon_for_y(cycle: Sequence[int], y: Dict[int, object],
                         options: Optional[PolygonOptions] = None
                         ) -> BoundaryPolygon:
    """Strictly convex polygon on the given clockwise cycle preserving y.

    Default shape is the parabola pair x = -+ s(y - ymin)(ymax - y). Pins make
    a vertex the unique leftmost or rightmost; a pinned vertex must lie on the
    matching chain (or be the bottom/top vertex)."""
    options = options or PolygonOptions()
    if sign_of(options.scale) <= 0:
        raise ValueError("scale must be positive")
    left, right = _split_chains(cycle, y)
    bot, top = left[0], left[-1]

    # construct x exactly even for float inputs, emit in the input's mode
    float_mode = any(isinstance(y[v], float) for v in cycle)
    ey = {v: rat(y[v]) for v in cycle} if float_mode else y
    sc = rat(options.scale) if float_mode else options.scale

    def emit_x(x):
        return float(x) if float_mode else x

    if not options.pins:
        y0, yT = ey[bot], ey[top]
        coords = {}
        for v in left:
            coords[v] = (emit_x(-sc * (ey[v] - y0) * (yT - ey[v])), y[v])
        for v in right[1:-1]:
            coords[v] = (emit_x(sc * (ey[v] - y0) * (yT - ey[v])), y[v])
        poly = BoundaryPolygon(tuple(cycle), coords)
        poly.validate()
        return poly

    flips = {}
    for v, side in options.pins:
        if side not in ("left", "right"):
            raise ValueError(f"pin side {side!r}")
        if side in flips:
            raise ConstraintInfeasible("two pins on the same side")
        if v == bot:
            flips[side] = 0
        elif v == top:
            flips[side] = len(left) - 1 if side == "left" else len(right) - 1
        elif side == "left":
            if v not in left:
                raise WrongChain(f"{v} is not on the left chain")
            flips[side] = left.index(v)
        else:
            if v not in right:
                raise WrongChain(f"{v} is not on the right chain")
            flips[side] = right.index(v)
    if len(options.pins) == 2 and options.pins[0][0] == options.pins[1][0]:
        raise ConstraintInfeasible("same vertex pinned to both sides")

    p, q = len(left) - 1, len(right) - 1
    a = [ey[left[i]] - ey[left[i - 1]] for i in range(1, p + 1)]
    h = [ey[right[j]] - ey[right[j - 1]] for j in range(1, q + 1)]

    def interval(flip, edges, left_side):
        if flip is None:
            return None
        if flip == 0:
            return 1 if left_side else -1   # all slopes point away from bottom
        if flip == edges:
            return -1 if left_side else 1
        return None

    want = {s for s in (interval(flips.get("left"), p, True),
                        interval(flips.get("right"), q, False)) if s}
    if len(want) > 1:
        raise ConstraintInfeasible("pins force contradictory widths")
    target = rat(next(iter(want), 0))

    for attempt in range(60):
        eta = rat(1, 4 ** attempt)
        s = _chain_slopes(a, flips.get("left"), target, eta, rising=True)
        t = _chain_slopes(h, flips.get("right"), target, eta, rising=False)
        if s is None or t is None:
            continue
        if p > 1 or q > 1:
            if sign_of(t[0] - s[0]) <= 0 or sign_of(s[-1] - t[-1]) <= 0:
                continue
        coords = {bot: (rat(0), y[bot])}
        acc = rat(0)
        for i, v in enumerate(left[1:], start=1):
            acc = acc + s[i - 1] * a[i - 1]
            coords[v] = (acc, y[v])
        acc = rat(0)
        for j, v in enumerate(right[1:-1], start=1):
            acc = acc + t[j - 1] * h[j - 1]
            coords[v] = (acc, y[v])
        coords = {v: (emit_x(sc * x), yy) for v, (x, yy) in coords.items()}
        poly = BoundaryPolygon(tuple(cycle), coords)
        try:
            poly.validate()
        except ValueError:
            continue
        if all(_is_unique_extreme(coords, v, side) for v, side in options.pins):
            return poly
    raise ConstraintInfeasible("no polygon found for the requested pins")


def _is_unique_extreme(coords, v, side) -> bool:
    if side in ("left", "right"):
        axis, want = 0, (-1 if side == "left" else 1)
    else:
        axis, want = 1, (-1 if side == "bottom" else 1)
    pv = coords[v][axis]
    return all(w == v or sign_of(pv - p[axis]) == want
               for w, p in coords.items())


def convex_polygon_for_x(cycle: Sequence[int], x: Dict[int, object],
                         extreme_vertex: int, side: str,
                         scale=1) -> BoundaryPolygon:
    """Strictly convex polygon preserving x, making one vertex the unique
    topmost or bottommost. Transposed call into convex_polygon_for_y."""
    if side not in ("top", "bottom"):
        raise ValueError(f"side {side!r}")
    pin = (extreme_vertex, "right" if side == "top" else "left")
    tcycle = tuple(reversed(cycle))
    poly = convex_polygon_for_y(tcycle, x, PolygonOptions(scale=scale,
                                                          pins=(pin,)))
    coords = {v: (p[1], p[0]) for v, p in poly.coords.items()}
    out = BoundaryPolygon(tuple(cycle), coords)
    out.validate()
    return out
