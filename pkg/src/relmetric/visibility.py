"""Shortest paths amid segment obstacles via visibility graphs.

Two engines live here.  :func:`build_visibility_graph` is the plain textbook
construction (edge iff the open segment crosses no obstacle and stays in the
allowed region); it is eager, easy to inspect, and used by the contract tests
and the CLI.  :class:`PreparedScene` is the production engine used by the
metric layer: it runs Dijkstra lazily from the source, splits nodes that sit
on obstacle junctions into angular wedge copies, and rejects candidate edges
that pass through another node, so that walls made of chained segments are
genuinely impassable at their joints while still allowing paths to ride along
walls.  Both agree on scenes without junctions.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from . import _batch
from .errors import MissingHint, SceneInvalid, TerminalInsideFloor
from .geom import (
    EPS_GEOM,
    PlanarDomain,
    Point2,
    Polyline,
    Region,
    Segment2,
    collinear_overlap,
    contains,
    properly_cross,
)

ANG_TOL = 1e-9
PROBE_DELTA = 1e-7
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ObstacleScene:
    """Segment obstacles, optionally confined to a planar domain.

    With ``boundary=None`` the ambient space is the whole plane and only the
    listed segments block.  With a boundary domain, its outer walls, holes and
    slits block as well and paths must stay in the closure.
    """

    segments: tuple[Segment2, ...] = ()
    boundary: PlanarDomain | None = None

    def __post_init__(self) -> None:
        self._validate()

    def _validate(self) -> None:
        segs = self.segments
        n = len(segs)
        if n > 1:
            A = np.array([s.a.as_tuple() for s in segs])
            B = np.array([s.b.as_tuple() for s in segs])
            for i in range(n - 1):
                Q = B[i + 1 :]
                crossing = _batch.cross_matrix(A[i], np.array([B[i]]), A[i + 1 :], B[i + 1 :], EPS_GEOM)[0]
                hits = np.nonzero(crossing)[0]
                if hits.size:
                    j = int(hits[0]) + i + 1
                    raise SceneInvalid(f"obstacle segments {i} and {j} cross")
            # collinear overlap is rare; screen candidates cheaply first
            for i in range(n - 1):
                for j in range(i + 1, n):
                    if collinear_overlap(segs[i], segs[j]):
                        raise SceneInvalid(f"obstacle segments {i} and {j} overlap")
        if self.boundary is not None:
            feats = self.boundary.boundary_features()
            for i, s in enumerate(segs):
                for p in (s.a, s.b):
                    if contains(self.boundary, p) is Region.EXTERIOR:
                        raise SceneInvalid(f"obstacle segment {i} leaves the domain")
                for f in feats:
                    if properly_cross(s, f):
                        raise SceneInvalid(f"obstacle segment {i} crosses the domain boundary")
                    if collinear_overlap(s, f):
                        raise SceneInvalid(f"obstacle segment {i} overlaps the domain boundary")

    @classmethod
    def from_domain(cls, domain: PlanarDomain) -> "ObstacleScene":
        return cls(segments=(), boundary=domain)

    def all_features(self) -> tuple[Segment2, ...]:
        if self.boundary is None:
            return self.segments
        return self.segments + self.boundary.boundary_features()


@dataclass(frozen=True)
class VisibilityGraph:
    nodes: tuple[Point2, ...]
    edges: tuple[tuple[int, int, float], ...]

    def neighbors(self, i: int) -> list[tuple[int, float]]:
        out = []
        for u, v, w in self.edges:
            if u == i:
                out.append((v, w))
            elif v == i:
                out.append((u, w))
        return out


@dataclass(frozen=True)
class PathResult:
    reached: bool
    length: float
    path: Polyline | None


@dataclass(frozen=True)
class ConfinedPathResult:
    reached: bool
    length: float
    path: Polyline | None
    floor: tuple[Point2, ...]
    start_snap: float
    end_snap: float


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def wedges_from_rays(angles: list[float]) -> list[tuple[float, float]]:
    """Angular wedges (start, span) between consecutive blocked directions.

    Zero or one blocked ray leaves the full turn as a single wedge, so the
    node needs no splitting.
    """
    uniq: list[float] = []
    for a in sorted(a % TWO_PI for a in angles):
        if not uniq or a - uniq[-1] > ANG_TOL:
            uniq.append(a)
    if len(uniq) >= 2 and (uniq[0] + TWO_PI) - uniq[-1] <= ANG_TOL:
        uniq.pop()
    if not uniq:
        return [(0.0, TWO_PI)]
    if len(uniq) == 1:
        return [(uniq[0], TWO_PI)]
    out = []
    for i, a in enumerate(uniq):
        nxt = uniq[(i + 1) % len(uniq)]
        span = (nxt - a) % TWO_PI
        if span > ANG_TOL:
            out.append((a, span))
    return out


def _in_wedge(theta: float, wedge: tuple[float, float]) -> bool:
    d = (theta - wedge[0]) % TWO_PI
    return d <= wedge[1] + ANG_TOL or d >= TWO_PI - ANG_TOL


def _ang_on(a: float, b: float) -> bool:
    d = (a - b) % TWO_PI
    return d <= ANG_TOL or TWO_PI - d <= ANG_TOL


def _ray_adjacency(ray: float, wedge: tuple[float, float]) -> tuple[bool, bool]:
    """Sides of the line through `ray` that the wedge touches at the ray
    itself: (counterclockwise of the ray, clockwise of the ray).

    A wedge whose boundary is the ray is adjacent from exactly one side,
    the one its interior starts on; a full-turn wedge, or one holding the
    ray strictly inside, is open on both sides.  An edge that rides a wall
    lies on a boundary ray at both of its endpoints, so tracking the
    adjacent side keeps such an edge on one face of the wall; without this
    a path could slip to the far face at the next wall vertex."""
    start, extent = wedge
    if extent >= TWO_PI - ANG_TOL:
        return True, True
    on_start = _ang_on(ray, start)
    on_end = _ang_on(ray, start + extent)
    if on_start and on_end:
        return True, True
    if on_start:
        return True, False
    if on_end:
        return False, True
    return True, True


def _wedges_share_interior(
    ws1: list[tuple[float, float]], ws2: list[tuple[float, float]]
) -> bool:
    """True when some wedge of ws1 overlaps some wedge of ws2 on more than
    a single ray.  Grazing contact along a shared boundary direction does
    not count: from a point on a wall, the two faces meet only at the wall's
    ends, even though both wedges contain the along-wall directions."""
    for a1, s1 in ws1:
        for a2, s2 in ws2:
            if s1 >= TWO_PI - ANG_TOL or s2 >= TWO_PI - ANG_TOL:
                return True
            d = (a2 - a1) % TWO_PI
            for off in (d - TWO_PI, d):
                lo = max(0.0, off)
                hi = min(s1, off + s2)
                if hi - lo > ANG_TOL:
                    return True
    return False


def _dedup_positions(points: list[Point2]) -> tuple[list[Point2], dict[tuple[float, float], int]]:
    index: dict[tuple[float, float], int] = {}
    out: list[Point2] = []
    for p in points:
        key = p.as_tuple()
        if key not in index:
            index[key] = len(out)
            out.append(p)
    return out, index


def circumscribed_polygon(r_min: float, m: int) -> tuple[Point2, ...]:
    """Regular m-gon circumscribed about the circle of radius r_min, with an
    edge tangent at angle zero.  The polygon contains the disk, so keeping
    paths outside the polygon keeps them outside the disk."""
    if m < 3:
        raise SceneInvalid(f"floor polygon needs at least 3 vertices, got {m}")
    R = r_min / math.cos(math.pi / m)
    verts = []
    for k in range(m):
        th = (2 * k + 1) * math.pi / m
        verts.append(Point2(R * math.cos(th), R * math.sin(th)))
    return tuple(verts)


def _floor_radius_at(theta: float, r_min: float, m: int) -> float:
    """Radial extent of the circumscribed m-gon in direction theta.

    Edge normals sit at angles 2*pi*k/m (tangency at angle zero), so the local
    angle is measured from the nearest edge normal."""
    sector = TWO_PI / m
    local = ((theta + sector / 2.0) % sector) - sector / 2.0
    return r_min / math.cos(local)


# ---------------------------------------------------------------------------
# eager graph (contract form)
# ---------------------------------------------------------------------------


def build_visibility_graph(
    scene: ObstacleScene,
    extra_points: tuple[Point2, ...] = (),
) -> VisibilityGraph:
    """Eager visibility graph over obstacle endpoints plus extra points.

    Edge rule: the open segment between two nodes crosses no feature
    transversally, and its midpoint stays in the scene's allowed region.
    Grazing contact (riding along a wall, passing exactly through a third
    node) does not block here; use :class:`PreparedScene` when junction
    semantics matter.  Quadratic; intended for small scenes.
    """
    feats = scene.all_features()
    pts: list[Point2] = []
    for f in feats:
        pts.append(f.a)
        pts.append(f.b)
    pts.extend(extra_points)
    nodes, _ = _dedup_positions(pts)
    n = len(nodes)
    if n == 0:
        return VisibilityGraph((), ())
    FA = np.array([f.a.as_tuple() for f in feats]) if feats else np.zeros((0, 2))
    FB = np.array([f.b.as_tuple() for f in feats]) if feats else np.zeros((0, 2))
    P = np.array([p.as_tuple() for p in nodes])
    edges: list[tuple[int, int, float]] = []
    for i in range(n - 1):
        Q = P[i + 1 :]
        if len(feats):
            blocked = _batch.cross_matrix(P[i], Q, FA, FB, EPS_GEOM).any(axis=1)
        else:
            blocked = np.zeros(len(Q), dtype=bool)
        mids = 0.5 * (P[i][None, :] + Q)
        allowed = _region_mask(scene.boundary, None, feats, mids)
        for jj in np.nonzero(~blocked & allowed)[0]:
            j = int(jj) + i + 1
            w = nodes[i].distance_to(nodes[j])
            if w > EPS_GEOM:
                edges.append((i, j, w))
    return VisibilityGraph(tuple(nodes), tuple(edges))


def _region_mask(
    domain: PlanarDomain | None,
    floor: tuple[Point2, ...] | None,
    feats: tuple[Segment2, ...],
    pts: np.ndarray,
) -> np.ndarray:
    """Which of the points may lie on a path: inside the domain closure (wall
    contact allowed) and not strictly inside the floor polygon."""
    k = len(pts)
    ok = np.ones(k, dtype=bool)
    if domain is not None:
        outer = np.array([p.as_tuple() for p in domain.outer])
        inside = _batch.points_in_polygon(pts, outer)
        for hole in domain.holes:
            hv = np.array([p.as_tuple() for p in hole])
            inside &= ~_batch.points_in_polygon(pts, hv)
        if len(feats):
            FA = np.array([f.a.as_tuple() for f in feats])
            FB = np.array([f.b.as_tuple() for f in feats])
            on_b = _batch.point_seg_dists(pts, FA, FB).min(axis=1) <= EPS_GEOM
        else:
            on_b = np.zeros(k, dtype=bool)
        ok &= inside | on_b
    if floor is not None:
        fv = np.array([p.as_tuple() for p in floor])
        fa = fv
        fb = np.roll(fv, -1, axis=0)
        strictly_in = _batch.points_in_polygon(pts, fv)
        on_floor = _batch.point_seg_dists(pts, fa, fb).min(axis=1) <= EPS_GEOM
        ok &= ~(strictly_in & ~on_floor)
    return ok


# ---------------------------------------------------------------------------
# lazy wedge engine
# ---------------------------------------------------------------------------


class PreparedScene:
    """Query engine for repeated shortest-path calls on one scene.

    Node copies: every obstacle endpoint (deduplicated) becomes a base node.
    A node where two or more blocked directions meet (segment joints, slit
    tips against walls, T-contacts) is split into one copy per free angular
    wedge; edges attach to the copy whose wedge contains their direction, and
    copies of the same base are never linked.  Paths therefore cannot slip
    through a joint between two walls, but may still ride along a wall,
    because directions on a wedge border belong to both neighboring wedges.

    Candidate edges are rejected when they properly cross a feature, when
    their open segment passes through another base node (the path must
    decompose there instead), or when their midpoint leaves the allowed
    region.
    """

    def __init__(
        self,
        scene: ObstacleScene,
        floor: tuple[Point2, ...] | None = None,
    ) -> None:
        self.scene = scene
        self.floor = floor
        feats = list(scene.all_features())
        if floor is not None:
            fv = list(floor)
            feats.extend(Segment2(fv[i], fv[(i + 1) % len(fv)]) for i in range(len(fv)))
        self.features: tuple[Segment2, ...] = tuple(feats)
        endpoint_list: list[Point2] = []
        for f in self.features:
            endpoint_list.append(f.a)
            endpoint_list.append(f.b)
        self.base_points, self._pos_index = _dedup_positions(endpoint_list)
        self._n = len(self.base_points)
        if self.features:
            self._FA = np.array([f.a.as_tuple() for f in self.features])
            self._FB = np.array([f.b.as_tuple() for f in self.features])
        else:
            self._FA = np.zeros((0, 2))
            self._FB = np.zeros((0, 2))
        self._P = (
            np.array([p.as_tuple() for p in self.base_points])
            if self._n
            else np.zeros((0, 2))
        )
        self._node_wedges: list[list[tuple[float, float]]] = self._compute_wedges()
        self._nbrs: dict[int, np.ndarray] = {}

    # -- static structure --------------------------------------------------

    def _compute_wedges(self) -> list[list[tuple[float, float]]]:
        rays: list[list[float]] = [[] for _ in range(self._n)]
        for f in self.features:
            ia = self._pos_index[f.a.as_tuple()]
            ib = self._pos_index[f.b.as_tuple()]
            d = f.direction()
            rays[ia].append(math.atan2(d.y, d.x))
            rays[ib].append(math.atan2(-d.y, -d.x))
        if self._n and len(self.features):
            dists = _batch.point_seg_dists(self._P, self._FA, self._FB)
            near = dists <= EPS_GEOM
            for i in range(self._n):
                p = self.base_points[i]
                for k in np.nonzero(near[i])[0]:
                    f = self.features[int(k)]
                    if p.distance_to(f.a) <= EPS_GEOM or p.distance_to(f.b) <= EPS_GEOM:
                        continue
                    d = f.direction()
                    th = math.atan2(d.y, d.x)
                    rays[i].append(th)
                    rays[i].append(th + math.pi)
        out: list[list[tuple[float, float]]] = []
        for i in range(self._n):
            wedges = wedges_from_rays(rays[i])
            if len(wedges) > 1:
                wedges = self._viable_wedges(self.base_points[i], wedges)
            out.append(wedges)
        return out

    def _viable_wedges(
        self, p: Point2, wedges: list[tuple[float, float]]
    ) -> list[tuple[float, float]]:
        """Drop wedge copies whose interior lies outside the allowed region
        (the solid side of a wall, the inside of the floor polygon).  Without
        this, a path could ride a wall straight through a slit junction."""
        keep = []
        for w in wedges:
            th = w[0] + 0.5 * w[1]
            q = np.array(
                [[p.x + PROBE_DELTA * math.cos(th), p.y + PROBE_DELTA * math.sin(th)]]
            )
            if _region_mask(self.scene.boundary, self.floor, self.scene.all_features(), q)[0]:
                keep.append(w)
        return keep

    # -- lazy visibility ----------------------------------------------------

    def _vis_row(self, i: int) -> np.ndarray:
        """Indices of base nodes visible from base node i (cached)."""
        cached = self._nbrs.get(i)
        if cached is not None:
            return cached
        row = np.nonzero(self._visibility(self._P[i], skip_base=i))[0]
        self._nbrs[i] = row
        return row

    def _visibility(self, p: np.ndarray, skip_base: int | None) -> np.ndarray:
        if self._n == 0:
            return np.zeros(0, dtype=bool)
        Q = self._P
        ok = np.linalg.norm(Q - p[None, :], axis=1) > EPS_GEOM
        if skip_base is not None:
            ok[skip_base] = False
        if len(self.features) and ok.any():
            crossing = _batch.cross_matrix(p, Q, self._FA, self._FB, EPS_GEOM).any(axis=1)
            ok &= ~crossing
        if ok.any():
            nd = _batch.seg_point_dists(p, Q, self._P)
            near = nd <= EPS_GEOM
            near[np.arange(self._n), np.arange(self._n)] = False
            if skip_base is not None:
                near[:, skip_base] = False
            else:
                at_p = np.linalg.norm(self._P - p[None, :], axis=1) <= EPS_GEOM
                near[:, at_p] = False
            ok &= ~near.any(axis=1)
        if ok.any():
            mids = 0.5 * (p[None, :] + Q)
            region = _region_mask(
                self.scene.boundary, self.floor, self.scene.all_features(), mids
            )
            ok &= region
        return ok

    def _pair_free(self, p: Point2, q: Point2) -> bool:
        """Visibility between two off-node positions (the direct a-b edge)."""
        if p.distance_to(q) <= EPS_GEOM:
            return False
        seg = Segment2(p, q)
        for f in self.features:
            if properly_cross(seg, f):
                return False
        if self._n:
            nd = _batch.seg_point_dists(
                np.array(p.as_tuple()), np.array([q.as_tuple()]), self._P
            )[0]
            if (nd <= EPS_GEOM).any():
                return False
        mid = np.array([seg.midpoint().as_tuple()])
        return bool(
            _region_mask(self.scene.boundary, self.floor, self.scene.all_features(), mid)[0]
        )

    # -- terminals -----------------------------------------------------------

    def _terminal_rays(self, p: Point2) -> tuple[list[float], Segment2 | None]:
        rays: list[float] = []
        host: Segment2 | None = None
        for f in self.features:
            da = p.distance_to(f.a)
            db = p.distance_to(f.b)
            d = f.direction()
            if da <= EPS_GEOM:
                rays.append(math.atan2(d.y, d.x))
            elif db <= EPS_GEOM:
                rays.append(math.atan2(-d.y, -d.x))
            elif _seg_dist(p, f) <= EPS_GEOM:
                th = math.atan2(d.y, d.x)
                rays.append(th)
                rays.append(th + math.pi)
                if host is None:
                    host = f
        return rays, host

    def _terminal_wedges(self, p: Point2, hint: str | None, label: str) -> list[tuple[float, float]]:
        rays, host = self._terminal_rays(p)
        wedges = wedges_from_rays(rays)
        if host is None or len(wedges) < 2:
            return wedges
        if hint is not None:
            n = host.direction().perp()
            if hint == "right":
                n = Point2(-n.x, -n.y)
            elif hint != "left":
                raise MissingHint(f"unknown hint {hint!r} for terminal {label}")
            th = math.atan2(n.y, n.x)
            chosen = [w for w in wedges if _in_wedge(th, w)]
            return chosen or wedges
        # no hint: keep only wedges whose probe stays in the allowed region
        viable = []
        for w in wedges:
            th = w[0] + 0.5 * w[1]
            q = np.array(
                [[p.x + PROBE_DELTA * math.cos(th), p.y + PROBE_DELTA * math.sin(th)]]
            )
            if _region_mask(self.scene.boundary, self.floor, self.scene.all_features(), q)[0]:
                viable.append(w)
        if len(viable) == 1:
            return viable
        if len(viable) == 0:
            return wedges
        raise MissingHint(
            f"terminal {label} at ({p.x}, {p.y}) lies on a two-sided wall; "
            "pass hint='left' or hint='right'"
        )

    # -- queries --------------------------------------------------------------

    def shortest_path(
        self,
        a: Point2,
        b: Point2,
        hint_a: str | None = None,
        hint_b: str | None = None,
    ) -> PathResult:
        if self.scene.boundary is not None:
            for label, t in (("a", a), ("b", b)):
                if contains(self.scene.boundary, t) is Region.EXTERIOR:
                    raise SceneInvalid(f"terminal {label} lies outside the domain")
        coincident = a.distance_to(b) <= EPS_GEOM

        terminals: list[dict] = []
        for label, t, hint in (("a", a, hint_a), ("b", b, hint_b)):
            base_idx = None
            key = t.as_tuple()
            if key in self._pos_index:
                base_idx = self._pos_index[key]
            else:
                for i, bp in enumerate(self.base_points):
                    if bp.distance_to(t) <= EPS_GEOM:
                        base_idx = i
                        break
            if base_idx is not None:
                terminals.append(
                    {
                        "pos": self.base_points[base_idx],
                        "base": base_idx,
                        "wedges": self._node_wedges[base_idx],
                        "vis": None,
                    }
                )
            else:
                wedges = self._terminal_wedges(t, hint, label)
                vis = self._visibility(np.array(t.as_tuple()), skip_base=None)
                terminals.append({"pos": t, "base": None, "wedges": wedges, "vis": vis})
        ta, tb = terminals

        if coincident:
            # a graph node (wall vertex or segment end) is one point; two
            # mid-wall terminals coincide only when their sides overlap
            if ta["base"] is not None or _wedges_share_interior(
                ta["wedges"], tb["wedges"]
            ):
                return PathResult(True, 0.0, Polyline((a,)))

        direct = False
        if not coincident and ta["base"] is None and tb["base"] is None:
            direct = self._pair_free(ta["pos"], tb["pos"])

        # node ids: 0.._n-1 bases, _n = terminal a, _n+1 = terminal b
        A_ID, B_ID = self._n, self._n + 1

        def node_pos(idx: int) -> Point2:
            if idx == A_ID:
                return ta["pos"]
            if idx == B_ID:
                return tb["pos"]
            return self.base_points[idx]

        def node_wedges(idx: int) -> list[tuple[float, float]]:
            if idx == A_ID:
                return ta["wedges"]
            if idx == B_ID:
                return tb["wedges"]
            return self._node_wedges[idx]

        start_id = A_ID if ta["base"] is None else ta["base"]
        goal_id = B_ID if tb["base"] is None else tb["base"]
        goal_wedges = set(range(len(node_wedges(goal_id))))

        dist: dict[tuple[int, int], float] = {}
        parent: dict[tuple[int, int], tuple[int, int] | None] = {}
        heap: list[tuple[float, int, int]] = []
        for w_idx in range(len(node_wedges(start_id))):
            dist[(start_id, w_idx)] = 0.0
            parent[(start_id, w_idx)] = None
            heapq.heappush(heap, (0.0, start_id, w_idx))

        def neighbors(idx: int) -> list[int]:
            out: list[int]
            if idx == A_ID:
                out = [int(j) for j in np.nonzero(ta["vis"])[0]]
                if direct:
                    out.append(B_ID)
            elif idx == B_ID:
                out = [int(j) for j in np.nonzero(tb["vis"])[0]]
                if direct:
                    out.append(A_ID)
            else:
                out = [int(j) for j in self._vis_row(idx)]
                if ta["base"] is None and bool(ta["vis"][idx]):
                    out.append(A_ID)
                if tb["base"] is None and bool(tb["vis"][idx]):
                    out.append(B_ID)
            return out

        found: tuple[int, int] | None = None
        while heap:
            d, idx, w_idx = heapq.heappop(heap)
            if d > dist.get((idx, w_idx), math.inf):
                continue
            if idx == goal_id and w_idx in goal_wedges:
                found = (idx, w_idx)
                break
            p = node_pos(idx)
            wedge = node_wedges(idx)[w_idx]
            for j in neighbors(idx):
                if j == idx:
                    continue
                q = node_pos(j)
                theta = math.atan2(q.y - p.y, q.x - p.x)
                if not _in_wedge(theta, wedge):
                    continue
                left_src, right_src = _ray_adjacency(theta, wedge)
                back = (theta + math.pi) % TWO_PI
                step = p.distance_to(q)
                for w2, wd in enumerate(node_wedges(j)):
                    if not _in_wedge(back, wd):
                        continue
                    # at the target the edge arrives along `back`; a wedge
                    # counterclockwise of `back` lies clockwise of `theta`
                    ccw_t, cw_t = _ray_adjacency(back, wd)
                    if not ((left_src and cw_t) or (right_src and ccw_t)):
                        continue
                    nd = d + step
                    key2 = (j, w2)
                    if nd < dist.get(key2, math.inf):
                        dist[key2] = nd
                        parent[key2] = (idx, w_idx)
                        heapq.heappush(heap, (nd, j, w2))
        if found is None:
            return PathResult(False, math.inf, None)

        chain: list[Point2] = []
        cur: tuple[int, int] | None = found
        while cur is not None:
            chain.append(node_pos(cur[0]))
            cur = parent[cur]
        chain.reverse()
        verts: list[Point2] = [chain[0]]
        for p in chain[1:]:
            if p.distance_to(verts[-1]) > EPS_GEOM:
                verts.append(p)
        poly = Polyline(tuple(verts))
        return PathResult(True, poly.length(), poly)


def _seg_dist(p: Point2, f: Segment2) -> float:
    from .geom import point_segment_distance

    return point_segment_distance(p, f.a, f.b)


def shortest_path(
    scene: ObstacleScene,
    a: Point2,
    b: Point2,
    hint_a: str | None = None,
    hint_b: str | None = None,
) -> PathResult:
    """Shortest obstacle-avoiding path between a and b in the scene."""
    return PreparedScene(scene).shortest_path(a, b, hint_a=hint_a, hint_b=hint_b)


def shortest_path_confined(
    scene: ObstacleScene,
    a: Point2,
    b: Point2,
    r_min: float,
    m_circle: int = 256,
    hint_a: str | None = None,
    hint_b: str | None = None,
) -> ConfinedPathResult:
    """Shortest path that additionally keeps distance >= r_min from the origin.

    The exclusion disk is realized as a circumscribed regular polygon with
    ``m_circle`` edges (tangent to the disk at angle zero), so reported
    lengths are exact for the polygonal relaxation and can only underestimate
    the true confined length by the chord defect, which shrinks like m^-2.
    Terminals strictly inside the disk raise; terminals inside the sliver
    between disk and polygon are snapped radially outward onto the polygon
    and the snap distances are reported.
    """
    if r_min <= 0.0:
        res = shortest_path(scene, a, b, hint_a=hint_a, hint_b=hint_b)
        return ConfinedPathResult(res.reached, res.length, res.path, (), 0.0, 0.0)
    floor = circumscribed_polygon(r_min, m_circle)
    used = []
    snaps = []
    for label, t in (("a", a), ("b", b)):
        r = t.norm()
        if r < r_min * (1.0 - 1e-12):
            raise TerminalInsideFloor(
                f"terminal {label} at radius {r} violates the floor radius {r_min}"
            )
        theta = math.atan2(t.y, t.x)
        rim = _floor_radius_at(theta, r_min, m_circle)
        if r < rim:
            scale = rim / r if r > 0 else 0.0
            used.append(Point2(t.x * scale, t.y * scale))
            snaps.append(rim - r)
        else:
            used.append(t)
            snaps.append(0.0)
    engine = PreparedScene(scene, floor=floor)
    res = engine.shortest_path(used[0], used[1], hint_a=hint_a, hint_b=hint_b)
    return ConfinedPathResult(res.reached, res.length, res.path, floor, snaps[0], snaps[1])
