import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexmorph import (
    Drawing,
    PreconditionViolated,
    is_strictly_convex,
    rat,
)
from convexmorph.connectivity import is_internally_3connected, three_connected
from convexmorph.plane_graph import build_plane_graph_from_points, drawing_is_planar
from convexmorph.tutte_solver import (
    BoundaryPolygon,
    ConstraintInfeasible,
    NoNeighborAbove,
    NoNeighborBelow,
    NotYMonotoneCycle,
    PolygonOptions,
    SingularSystem,
    WeightAssignment,
    WrongChain,
    convex_polygon_for_x,
    convex_polygon_for_y,
    redraw_preserving_x,
    redraw_preserving_y,
    solve_rows,
    solve_tutte,
    tutte_rows,
    weights_from_y,
)

from _instances import random_triangulation
from _oracles import solve_dense_fraction


# -- fixtures ----------------------------------------------------------------


def k4_drawing():
    coords = {1: (0, 0), 2: (4, 0), 3: (2, 3), 4: (2, 1)}
    edges = {(1, 2), (2, 3), (1, 3), (1, 4), (2, 4), (3, 4)}
    g = build_plane_graph_from_points(coords, edges)
    return Drawing(g, coords)


def wheel_drawing(rim_pts):
    k = len(rim_pts)
    coords = {i + 1: p for i, p in enumerate(rim_pts)}
    coords[k + 1] = (0, 0)
    edges = {(i + 1, (i + 1) % k + 1) for i in range(k)}
    edges |= {(i + 1, k + 1) for i in range(k)}
    g = build_plane_graph_from_points(coords, edges)
    return Drawing(g, coords)


def hull_polygon(d):
    walk = tuple(d.graph.outer_walk())
    return BoundaryPolygon(walk, {v: d.coords[v] for v in walk})


def uniform_weights(g):
    outer = set(g.outer_walk())
    return WeightAssignment({(u, v): rat(1, g.degree(u))
                             for u in g.rotation if u not in outer
                             for v in g.rotation[u]})


def assert_rows_satisfied_exactly(g, weights, d):
    outer = set(g.outer_walk())
    for u in g.rotation:
        if u in outer:
            continue
        sx = sum(weights.weights[(u, v)] * d.x(v) for v in g.rotation[u])
        sy = sum(weights.weights[(u, v)] * d.y(v) for v in g.rotation[u])
        assert d.x(u) == sx
        assert d.y(u) == sy


# -- weights -----------------------------------------------------------------


def test_weights_one_above_one_below():
    # internal degree-2 vertex: t = (1-0)/(3-0), so 1/3 up and 2/3 down
    coords = {1: (0, 0), 2: (4, 0), 3: (4, 4), 4: (0, 4), 5: (2, 2)}
    edges = {(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 3)}
    g = build_plane_graph_from_points(coords, edges)
    y = {1: rat(0), 2: rat(2), 3: rat(3), 4: rat(5), 5: rat(1)}
    w = weights_from_y(g, y)
    assert w.weights == {(5, 3): rat(1, 3), (5, 1): rat(2, 3)}
    assert w.consistent_with_y(y)


def test_weights_two_above_one_below():
    d = k4_drawing()
    y = {1: rat(0), 2: rat(2), 3: rat(2), 4: rat(1)}
    w = weights_from_y(d.graph, y)
    assert w.weights[(4, 2)] == rat(1, 4)
    assert w.weights[(4, 3)] == rat(1, 4)
    assert w.weights[(4, 1)] == rat(1, 2)
    assert w.consistent_with_y(y)


def test_weights_error_cases():
    g = k4_drawing().graph
    with pytest.raises(NoNeighborAbove):
        weights_from_y(g, {1: rat(0), 2: rat(1), 3: rat(2), 4: rat(3)})
    with pytest.raises(NoNeighborBelow):
        weights_from_y(g, {1: rat(0), 2: rat(1), 3: rat(2), 4: rat(-1)})
    with pytest.raises(PreconditionViolated):
        weights_from_y(g, {1: rat(0), 2: rat(1), 3: rat(2), 4: rat(1)})


def test_weight_assignment_validation():
    with pytest.raises(ValueError):
        WeightAssignment({(1, 2): rat(-1, 2), (1, 3): rat(3, 2)})
    with pytest.raises(ValueError):
        WeightAssignment({(1, 2): rat(1, 2), (1, 3): rat(1, 3)})
    w = WeightAssignment({(1, 2): rat(1, 2), (1, 3): rat(1, 2)})
    assert w.internal_vertices() == {1}
    assert w.row(1) == {2: rat(1, 2), 3: rat(1, 2)}


def test_weights_random_instances_exact():
    rng = random.Random(1101)
    for _ in range(15):
        d = random_triangulation(rng, 5, 16)
        g = d.graph
        y = {v: d.y(v) for v in g.rotation}
        if len(g.rotation) == len(g.outer_walk()):
            continue
        w = weights_from_y(g, y)
        assert w.consistent_with_y(y)
        for u in w.internal_vertices():
            assert sum(w.row(u).values()) == 1


# -- sparse solver -----------------------------------------------------------


def test_solve_rows_matches_dense_oracle():
    rng = random.Random(2202)
    for _ in range(30):
        ids = rng.sample(range(100), rng.randrange(1, 9))
        rows = {}
        rhs = {}
        for e in ids:
            row = {e: rat(10)}
            for v in ids:
                if v != e and rng.random() < 0.5:
                    row[v] = rat(rng.randrange(-4, 5))
            rows[e] = row
            rhs[e] = [rat(rng.randrange(-9, 10)), rat(rng.randrange(-9, 10))]
        got = solve_rows(rows, rhs)
        want = solve_dense_fraction(
            {e: {v: Fraction(c) for v, c in r.items()} for e, r in rows.items()},
            {e: [Fraction(x) for x in vals] for e, vals in rhs.items()})
        assert set(got) == set(want)
        for v in got:
            assert [Fraction(x) for x in got[v]] == want[v]


def test_solve_rows_singular_cases():
    with pytest.raises(SingularSystem):
        solve_rows({1: {1: rat(1), 2: rat(1)}}, {1: [rat(0)]})
    with pytest.raises(SingularSystem):
        solve_rows({1: {1: rat(1), 2: rat(1)}, 2: {1: rat(2), 2: rat(2)}},
                   {1: [rat(0)], 2: [rat(1)]})
    assert solve_rows({}, {}) == {}


# -- solve_tutte -------------------------------------------------------------


def test_solve_tutte_triangle_barycenter():
    d = k4_drawing()
    boundary = hull_polygon(d)
    out = solve_tutte(d.graph, boundary, uniform_weights(d.graph))
    assert out.coords[4] == (rat(2), rat(1))
    assert is_strictly_convex(out)


def test_solve_tutte_square_symmetry():
    d = wheel_drawing([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    out = solve_tutte(d.graph, hull_polygon(d), uniform_weights(d.graph))
    assert out.coords[5] == (rat(0), rat(0))


def test_solve_tutte_five_wheel_matches_dense_oracle():
    rng = random.Random(3303)
    d = wheel_drawing([(4, 0), (1, 4), (-4, 2), (-3, -3), (2, -4)])
    g = d.graph
    hub = 6
    for _ in range(10):
        raw = [rat(rng.randrange(1, 10)) for _ in range(5)]
        total = sum(raw)
        w = WeightAssignment({(hub, v): raw[i] / total
                              for i, v in enumerate(g.rotation[hub])})
        boundary = hull_polygon(d)
        out = solve_tutte(g, boundary, w)
        rows, rhs = tutte_rows(g, w, boundary.coords)
        want = solve_dense_fraction(rows, rhs)
        assert [Fraction(c) for c in out.coords[hub]] == want[hub]
        assert_rows_satisfied_exactly(g, w, out)
        assert is_strictly_convex(out)


def test_solve_tutte_random_instances():
    rng = random.Random(4404)
    seen_internal = 0
    for _ in range(25):
        d = random_triangulation(rng, 4, 14)
        g = d.graph
        assert is_internally_3connected(g)
        y = {v: d.y(v) for v in g.rotation}
        boundary = hull_polygon(d)
        internal = set(g.rotation) - set(boundary.cycle)
        if not internal:
            out = solve_tutte(g, boundary, WeightAssignment({}))
            assert out.coords == d.coords
            continue
        seen_internal += 1
        w = weights_from_y(g, y)
        out = solve_tutte(g, boundary, w)
        assert_rows_satisfied_exactly(g, w, out)
        assert is_strictly_convex(out)
        # the y system reproduces the y the weights came from
        for v in g.rotation:
            assert out.y(v) == d.y(v)
        rows, rhs = tutte_rows(g, w, boundary.coords)
        want = solve_dense_fraction(rows, rhs)
        for v in internal:
            assert [Fraction(c) for c in out.coords[v]] == want[v]
    assert seen_internal >= 10


def test_solve_tutte_uniform_weights_agree_with_dense():
    rng = random.Random(5505)
    for _ in range(10):
        d = random_triangulation(rng, 5, 12)
        g = d.graph
        boundary = hull_polygon(d)
        internal = set(g.rotation) - set(boundary.cycle)
        if not internal:
            continue
        w = uniform_weights(g)
        out = solve_tutte(g, boundary, w)
        rows, rhs = tutte_rows(g, w, boundary.coords)
        want = solve_dense_fraction(rows, rhs)
        for v in internal:
            assert [Fraction(c) for c in out.coords[v]] == want[v]
        assert is_strictly_convex(out)


def test_solve_tutte_externally_separable_instance():
    # internally 3-connected but not 3-connected: two pockets hanging off
    # the separation pair {1, 4}; one solve still convexifies everything
    coords = {1: (-4, 0), 2: (-2, 4), 3: (2, 4), 4: (4, 0),
              5: (2, -4), 6: (-2, -4), 7: (0, 2), 8: (0, -2)}
    edges = {(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1),
             (7, 1), (7, 2), (7, 3), (7, 4), (8, 4), (8, 5), (8, 6), (8, 1)}
    g = build_plane_graph_from_points(coords, edges)
    assert drawing_is_planar(g, coords)
    assert not three_connected(g.adjacency())
    assert is_internally_3connected(g)
    out = solve_tutte(g, hull_polygon(Drawing(g, coords)), uniform_weights(g))
    assert is_strictly_convex(out)


def test_solve_tutte_input_validation():
    d = k4_drawing()
    boundary = hull_polygon(d)
    with pytest.raises(ValueError):
        solve_tutte(d.graph, boundary, WeightAssignment({}))
    bad_cycle = BoundaryPolygon(tuple(reversed(boundary.cycle)),
                                boundary.coords)
    with pytest.raises(ValueError):
        solve_tutte(d.graph, bad_cycle, uniform_weights(d.graph))


# -- redraws -----------------------------------------------------------------


def test_redraw_preserving_y_same_boundary():
    rng = random.Random(6606)
    for _ in range(8):
        d = random_triangulation(rng, 6, 14)
        if len(d.graph.rotation) == len(d.graph.outer_walk()):
            continue
        out = redraw_preserving_y(d, hull_polygon(d))
        assert is_strictly_convex(out)
        for v in d.graph.rotation:
            assert out.y(v) == d.y(v)


def test_redraw_preserving_y_new_polygon():
    rng = random.Random(7707)
    for _ in range(8):
        d = random_triangulation(rng, 6, 14)
        g = d.graph
        if len(g.rotation) == len(g.outer_walk()):
            continue
        y = {v: d.y(v) for v in g.rotation}
        poly = convex_polygon_for_y(tuple(g.outer_walk()), y)
        out = redraw_preserving_y(d, poly)
        assert is_strictly_convex(out)
        for v in g.rotation:
            assert out.y(v) == d.y(v)
        for v in poly.cycle:
            assert out.coords[v] == poly.coords[v]


def test_redraw_preserving_y_rejects_changed_heights():
    d = k4_drawing()
    poly = hull_polygon(d)
    shifted = BoundaryPolygon(poly.cycle, {
        v: (x, y + 1) for v, (x, y) in poly.coords.items()})
    with pytest.raises(PreconditionViolated):
        redraw_preserving_y(d, shifted)


def test_redraw_preserving_x_contract():
    rng = random.Random(8808)
    for _ in range(5):
        d = random_triangulation(rng, 6, 12)
        g = d.graph
        if len(g.rotation) == len(g.outer_walk()):
            continue
        td = d.transposed()
        tb = hull_polygon(td)
        out = redraw_preserving_x(td, tb)
        assert is_strictly_convex(out)
        for v in td.graph.rotation:
            assert out.x(v) == td.x(v)


# -- boundary polygon type ---------------------------------------------------


def test_boundary_polygon_validate():
    ok = BoundaryPolygon((1, 2, 3, 4), {1: (0, 0), 2: (0, 2),
                                        3: (2, 2), 4: (2, 0)})
    ok.validate()
    with pytest.raises(ValueError):
        BoundaryPolygon((1, 2), {1: (0, 0), 2: (1, 1)}).validate()
    with pytest.raises(ValueError):
        BoundaryPolygon((1, 2, 3, 4, 5), {1: (0, 0), 2: (0, 1), 3: (0, 2),
                                          4: (2, 2), 5: (2, 0)}).validate()
    with pytest.raises(ValueError):
        BoundaryPolygon((4, 3, 2, 1), {1: (0, 0), 2: (0, 2),
                                       3: (2, 2), 4: (2, 0)}).validate()


def test_boundary_polygon_rejects_double_winding():
    # two laps around a clockwise triangle: locally convex at every corner
    # but two lexicographic minima
    pts = {1: (0, 0), 2: (2, 3), 3: (4, 0),
           4: (0, 0), 5: (2, 3), 6: (4, 0)}
    with pytest.raises(ValueError):
        BoundaryPolygon((1, 2, 3, 4, 5, 6), pts).validate()


def test_boundary_polygon_matches_outer_walk():
    coords = {1: (0, 0), 2: (0, 2), 3: (2, 2), 4: (2, 0)}
    g = build_plane_graph_from_points(coords,
                                      {(1, 2), (2, 3), (3, 4), (4, 1)})
    walk = g.outer_walk()
    rotated = tuple(walk[2:] + walk[:2])
    assert BoundaryPolygon(rotated, coords).matches_outer_walk(g)
    reflected = tuple(reversed(walk))
    assert not BoundaryPolygon(reflected, coords).matches_outer_walk(g)
    assert not BoundaryPolygon((1, 2, 3), coords).matches_outer_walk(g)


# -- convex_polygon_for_y ----------------------------------------------------


def test_polygon_for_y_triangle_parabola():
    poly = convex_polygon_for_y((1, 2, 3), {1: rat(0), 2: rat(2), 3: rat(1)})
    assert poly.coords == {1: (rat(0), rat(0)), 2: (rat(0), rat(2)),
                           3: (rat(1), rat(1))}


def test_polygon_for_y_square_chain():
    y = {1: rat(0), 2: rat(1), 3: rat(2), 4: rat(1)}
    poly = convex_polygon_for_y((1, 2, 3, 4), y)
    assert poly.coords[2] == (rat(-1), rat(1))
    assert poly.coords[4] == (rat(1), rat(1))
    assert poly.coords[1] == (rat(0), rat(0))
    assert poly.coords[3] == (rat(0), rat(2))


def test_polygon_for_y_scale():
    y = {1: rat(0), 2: rat(1), 3: rat(2), 4: rat(1)}
    poly = convex_polygon_for_y((1, 2, 3, 4), y, PolygonOptions(scale=rat(3)))
    assert poly.coords[2][0] == rat(-3)
    assert poly.coords[4][0] == rat(3)
    with pytest.raises(ValueError):
        convex_polygon_for_y((1, 2, 3, 4), y, PolygonOptions(scale=0))


def test_polygon_for_y_monotonicity_errors():
    with pytest.raises(NotYMonotoneCycle):
        convex_polygon_for_y((1, 2, 3), {1: rat(0), 2: rat(2), 3: rat(2)})
    with pytest.raises(NotYMonotoneCycle):
        convex_polygon_for_y((1, 2, 3, 4),
                             {1: rat(0), 2: rat(1), 3: rat(1), 4: rat(2)})
    with pytest.raises(NotYMonotoneCycle):
        convex_polygon_for_y((1, 2, 3, 4, 5),
                             {1: rat(0), 2: rat(3), 3: rat(1),
                              4: rat(4), 5: rat(2)})


HEX_Y = {1: rat(0), 2: rat(1), 3: rat(3), 4: rat(5), 5: rat(4), 6: rat(2)}
HEX_CYCLE = (1, 2, 3, 4, 5, 6)


def assert_unique_pin(poly, v, side):
    xs = {w: p[0] for w, p in poly.coords.items()}
    if side == "left":
        assert all(w == v or xs[v] < xs[w] for w in xs)
    else:
        assert all(w == v or xs[v] > xs[w] for w in xs)


@pytest.mark.parametrize("pins", [
    ((3, "left"),),
    ((5, "right"),),
    ((1, "left"),),
    ((4, "right"),),
    ((1, "right"),),
    ((4, "left"),),
    ((3, "left"), (5, "right")),
    ((1, "left"), (4, "right")),
    ((4, "left"), (1, "right")),
    ((2, "left"), (5, "right")),
])
def test_polygon_for_y_pins(pins):
    poly = convex_polygon_for_y(HEX_CYCLE, HEX_Y, PolygonOptions(pins=pins))
    poly.validate()
    for v in HEX_CYCLE:
        assert poly.coords[v][1] == HEX_Y[v]
    for v, side in pins:
        assert_unique_pin(poly, v, side)


def test_polygon_for_y_pins_with_scale():
    poly = convex_polygon_for_y(
        HEX_CYCLE, HEX_Y, PolygonOptions(scale=rat(1, 2), pins=((3, "left"),)))
    assert_unique_pin(poly, 3, "left")
    for v in HEX_CYCLE:
        assert poly.coords[v][1] == HEX_Y[v]


def test_polygon_for_y_wrong_chain():
    with pytest.raises(WrongChain):
        convex_polygon_for_y(HEX_CYCLE, HEX_Y,
                             PolygonOptions(pins=((5, "left"),)))
    with pytest.raises(WrongChain):
        convex_polygon_for_y(HEX_CYCLE, HEX_Y,
                             PolygonOptions(pins=((2, "right"),)))


def test_polygon_for_y_pin_conflicts():
    with pytest.raises(ConstraintInfeasible):
        convex_polygon_for_y(HEX_CYCLE, HEX_Y,
                             PolygonOptions(pins=((1, "left"), (1, "right"))))
    with pytest.raises(ConstraintInfeasible):
        convex_polygon_for_y(HEX_CYCLE, HEX_Y,
                             PolygonOptions(pins=((2, "left"), (3, "left"))))


@settings(max_examples=120, deadline=None)
@given(data=st.data())
def test_polygon_for_y_random_cycles(data):
    k = data.draw(st.integers(min_value=3, max_value=9))
    ys = sorted(data.draw(st.lists(st.integers(-40, 40), min_size=k,
                                   max_size=k, unique=True)))
    flags = data.draw(st.lists(st.booleans(), min_size=k - 2, max_size=k - 2))
    y = {i + 1: rat(v) for i, v in enumerate(ys)}
    left_int = [i + 1 for i in range(1, k - 1) if flags[i - 1]]
    right_int = [i + 1 for i in range(1, k - 1) if not flags[i - 1]]
    cycle = tuple([1] + left_int + [k] + list(reversed(right_int)))

    left_opts = [None, 1, k] + left_int
    right_opts = [None, 1, k] + right_int
    pin_left = data.draw(st.sampled_from(left_opts))
    pin_right = data.draw(st.sampled_from(right_opts))
    pins = tuple((v, s) for v, s in ((pin_left, "left"), (pin_right, "right"))
                 if v is not None)
    scale = data.draw(st.sampled_from([1, rat(2), rat(1, 3)]))
    options = PolygonOptions(scale=scale, pins=pins)

    if pin_left is not None and pin_left == pin_right:
        with pytest.raises(ConstraintInfeasible):
            convex_polygon_for_y(cycle, y, options)
        return

    poly = convex_polygon_for_y(cycle, y, options)
    poly.validate()
    assert poly.cycle == cycle
    for v in cycle:
        assert poly.coords[v][1] == y[v]
    for v, side in pins:
        assert_unique_pin(poly, v, side)
    ring = {(cycle[i], cycle[(i + 1) % k]) for i in range(k)}
    g = build_plane_graph_from_points(poly.coords, ring)
    assert poly.matches_outer_walk(g)
    assert is_strictly_convex(Drawing(g, poly.coords))


# -- convex_polygon_for_x ----------------------------------------------------


def assert_unique_vertical_extreme(poly, v, side):
    ys = {w: p[1] for w, p in poly.coords.items()}
    if side == "top":
        assert all(w == v or ys[v] > ys[w] for w in ys)
    else:
        assert all(w == v or ys[v] < ys[w] for w in ys)


def test_polygon_for_x_triangle_top():
    x = {1: rat(0), 2: rat(2), 3: rat(4)}
    poly = convex_polygon_for_x((1, 2, 3), x, 2, "top")
    poly.validate()
    for v in (1, 2, 3):
        assert poly.coords[v][0] == x[v]
    assert_unique_vertical_extreme(poly, 2, "top")


def test_polygon_for_x_endpoint_rule():
    x = {1: rat(0), 2: rat(2), 3: rat(4)}
    poly = convex_polygon_for_x((1, 2, 3), x, 1, "top")
    assert_unique_vertical_extreme(poly, 1, "top")
    poly = convex_polygon_for_x((1, 2, 3), x, 3, "bottom")
    assert_unique_vertical_extreme(poly, 3, "bottom")


QUAD_X = {1: rat(0), 2: rat(1), 3: rat(3), 4: rat(2)}
QUAD_CYCLE = (1, 4, 3, 2)   # 4 on the upper chain, 2 on the lower chain


def test_polygon_for_x_quad_sides():
    poly = convex_polygon_for_x(QUAD_CYCLE, QUAD_X, 4, "top")
    assert_unique_vertical_extreme(poly, 4, "top")
    for v in QUAD_CYCLE:
        assert poly.coords[v][0] == QUAD_X[v]
    poly = convex_polygon_for_x(QUAD_CYCLE, QUAD_X, 2, "bottom")
    assert_unique_vertical_extreme(poly, 2, "bottom")


def test_polygon_for_x_wrong_chain():
    with pytest.raises(WrongChain):
        convex_polygon_for_x(QUAD_CYCLE, QUAD_X, 2, "top")
    with pytest.raises(WrongChain):
        convex_polygon_for_x(QUAD_CYCLE, QUAD_X, 4, "bottom")
    with pytest.raises(ValueError):
        convex_polygon_for_x(QUAD_CYCLE, QUAD_X, 4, "sideways")
