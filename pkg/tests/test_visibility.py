"""Shortest-path oracle: exactness on hand-checked scenes, two-sided wall
semantics, confinement, and randomized self-consistency properties."""
import math
import random

import pytest

from relmetric.errors import (
    MissingHint,
    SceneInvalid,
    TerminalInsideFloor,
)
from relmetric.geom import PlanarDomain, Point2, Segment2
from relmetric.visibility import (
    ObstacleScene,
    PreparedScene,
    build_visibility_graph,
    shortest_path,
    shortest_path_confined,
)

P = Point2
SQ = [P(0, 0), P(2, 0), P(2, 2), P(0, 2)]


def seg(ax, ay, bx, by):
    return Segment2(P(ax, ay), P(bx, by))


@pytest.fixture(scope="module")
def slit_square():
    dom = PlanarDomain(SQ, slits=(seg(1.0, 0.5, 1.0, 1.5),))
    return PreparedScene(ObstacleScene.from_domain(dom))


def test_free_plane_straight_line():
    scene = ObstacleScene(segments=(seg(5, 5, 6, 6),))
    res = shortest_path(scene, P(0, 0), P(3, 4))
    assert res.reached
    assert res.length == pytest.approx(5.0, abs=1e-12)
    assert len(res.path.vertices) == 2


def test_single_wall_detour_exact():
    # wall of height 2 centered on the straight line; detour via a tip
    scene = ObstacleScene(segments=(seg(1, -1, 1, 1),))
    res = shortest_path(scene, P(0, 0), P(2, 0))
    expect = 2 * math.hypot(1, 1)
    assert res.length == pytest.approx(expect, abs=1e-12)


def test_crossing_obstacles_rejected():
    with pytest.raises(SceneInvalid):
        ObstacleScene(segments=(seg(0, 0, 2, 2), seg(0, 2, 2, 0)))


def test_visibility_graph_direct_edge():
    scene = ObstacleScene(segments=(seg(0, 1, 1, 1),))
    g = build_visibility_graph(scene)
    pos = {p.as_tuple(): i for i, p in enumerate(g.nodes)}
    i, j = pos[(0.0, 1.0)], pos[(1.0, 1.0)]
    assert any({u, v} == {i, j} for u, v, _ in g.edges)


def test_slit_blocks_straight_crossing(slit_square):
    res = slit_square.shortest_path(P(0.5, 1.0), P(1.5, 1.0))
    # around the upper tip (1, 1.5): two hypotenuses of 0.5 x 0.5
    assert res.length == pytest.approx(2 * math.hypot(0.5, 0.5), abs=1e-12)


def test_slit_terminal_needs_hint(slit_square):
    with pytest.raises(MissingHint):
        slit_square.shortest_path(P(1.0, 1.0), P(1.5, 1.0))


def test_slit_terminal_hint_sides(slit_square):
    # from the slit point to a target on its right: right side is direct,
    # left side must round the tip
    right = slit_square.shortest_path(P(1.0, 1.0), P(1.5, 1.0), hint_a="right")
    left = slit_square.shortest_path(P(1.0, 1.0), P(1.5, 1.0), hint_a="left")
    assert right.length == pytest.approx(0.5, abs=1e-12)
    # left side rounds the nearer tip first: 0.5 up, then the hypotenuse
    assert left.length == pytest.approx(0.5 + math.hypot(0.5, 0.5), abs=1e-9)


def test_same_point_opposite_sides(slit_square):
    res = slit_square.shortest_path(
        P(1.0, 1.0), P(1.0, 1.0), hint_a="left", hint_b="right"
    )
    # must round a tip: twice the distance to the nearer end
    assert res.length == pytest.approx(1.0, abs=1e-12)


def test_wall_touching_slit_corner_detour():
    # slit from the bottom wall up to (1, 1.5): no gap underneath
    dom = PlanarDomain(SQ, slits=(seg(1.0, 0.0, 1.0, 1.5),))
    eng = PreparedScene(ObstacleScene.from_domain(dom))
    res = eng.shortest_path(P(0.5, 0.25), P(1.5, 0.25))
    # bottom passage is sealed; both legs reach over the top tip (1, 1.5)
    assert res.length == pytest.approx(2 * math.hypot(0.5, 1.25), abs=1e-12)
    assert res.length > 1.0


def test_boundary_walls_block_outside_shortcuts():
    # L-shaped domain: the reflex corner forces a bend
    dom = PlanarDomain(
        [P(0, 0), P(2, 0), P(2, 1), P(1, 1), P(1, 2), P(0, 2)]
    )
    eng = PreparedScene(ObstacleScene.from_domain(dom))
    a, b = P(1.75, 0.75), P(0.75, 1.75)
    res = eng.shortest_path(a, b)
    via_corner = a.distance_to(P(1, 1)) + P(1, 1).distance_to(b)
    assert res.length == pytest.approx(via_corner, abs=1e-12)
    assert res.length > a.distance_to(b)


def test_path_rounds_closed_hole():
    dom = PlanarDomain(
        SQ,
        holes=(
            tuple(
                reversed(
                    [P(0.5, 0.5), P(1.5, 0.5), P(1.5, 1.5), P(0.5, 1.5)]
                )
            ),
        ),
    )
    eng = PreparedScene(ObstacleScene.from_domain(dom))
    outside = eng.shortest_path(P(0.25, 0.25), P(1.75, 1.75))
    assert outside.reached  # around the hole
    assert outside.length > P(0.25, 0.25).distance_to(P(1.75, 1.75))


# -- confinement -------------------------------------------------------------


def test_confined_straight_chord_when_floor_below():
    scene = ObstacleScene(segments=())
    a, b = P(2, 0), P(0, 2)
    res = shortest_path_confined(scene, a, b, r_min=1.0, m_circle=256)
    # chord from (2,0) to (0,2) dips to distance sqrt(2) > 1: stays legal
    assert res.length == pytest.approx(a.distance_to(b), abs=1e-12)


def test_confined_wraps_the_rim():
    scene = ObstacleScene(segments=())
    a, b = P(1.0, 0.0), P(-1.0, 0.0)
    res = shortest_path_confined(scene, a, b, r_min=1.0, m_circle=256)
    # straight line passes the origin; path must wrap the circumscribed rim
    assert res.length >= math.pi - 1e-3
    assert res.length == pytest.approx(math.pi, rel=1e-3)


def test_confined_terminal_inside_floor_raises():
    scene = ObstacleScene(segments=())
    with pytest.raises(TerminalInsideFloor):
        shortest_path_confined(scene, P(0.1, 0.0), P(2.0, 0.0), r_min=1.0)


# -- randomized self-consistency ---------------------------------------------


def _random_scene(rng):
    for _ in range(50):
        segs = []
        for _ in range(rng.randint(3, 6)):
            a = P(rng.uniform(0, 1), rng.uniform(0, 1))
            b = P(a.x + rng.uniform(-0.4, 0.4), a.y + rng.uniform(-0.4, 0.4))
            if a.distance_to(b) < 1e-3:
                continue
            segs.append(Segment2(a, b))
        try:
            return ObstacleScene(segments=tuple(segs))
        except SceneInvalid:
            continue
    raise AssertionError("could not build a random scene")


def _free_point(rng, scene):
    from relmetric.geom import point_segment_distance

    while True:
        p = P(rng.uniform(-0.3, 1.3), rng.uniform(-0.3, 1.3))
        if all(
            point_segment_distance(p, s.a, s.b) > 1e-3 for s in scene.segments
        ):
            return p


def test_oracle_symmetry_and_triangle_small_batch():
    # the acceptance suite runs 1000 instances; keep a quick smoke here
    rng = random.Random(7)
    for _ in range(40):
        scene = _random_scene(rng)
        eng = PreparedScene(scene)
        a, b, c = (_free_point(rng, scene) for _ in range(3))
        dab = eng.shortest_path(a, b).length
        dba = eng.shortest_path(b, a).length
        assert abs(dab - dba) <= 1e-12
        dac = eng.shortest_path(a, c).length
        dcb = eng.shortest_path(c, b).length
        assert dab <= dac + dcb + 1e-9


def test_obstacle_monotonicity_small_batch():
    rng = random.Random(11)
    for _ in range(25):
        scene = _random_scene(rng)
        if len(scene.segments) < 2:
            continue
        sub = ObstacleScene(segments=scene.segments[:-1])
        a, b = (_free_point(rng, scene) for _ in range(2))
        d_full = PreparedScene(scene).shortest_path(a, b).length
        d_sub = PreparedScene(sub).shortest_path(a, b).length
        assert d_full >= d_sub - 1e-9
