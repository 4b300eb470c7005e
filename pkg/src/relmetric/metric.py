"""Boundary-relative intrinsic metric on slit domains.

The distance between two points of the closed domain is the limiting length
of shortest interior paths whose endpoints approach the given points from the
open interior.  Interior points need no limit; boundary points are offset
inward by a decreasing schedule of distances and the lengths extrapolated.
For polygonal domains the limit equals the closure shortest-path length with
junction-aware semantics, which is what :func:`closure_distance` evaluates
directly; exactness-sensitive checks (geodesic identity, ambient comparison)
use that form.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import SceneInvalid, SpecInvalid, UnreachableError
from .geom import (
    EPS_GEOM,
    PlanarDomain,
    Point2,
    Polyline,
    Region,
    contains,
    inward_offset,
    point_segment_distance,
)
from .visibility import ObstacleScene, PathResult, PreparedScene

EXTRAPOLATIONS = ("last-value", "richardson")


@dataclass(frozen=True)
class MetricConfig:
    offsets: tuple[float, ...] = (1e-2, 1e-3, 1e-4)
    tol_metric: float = 1e-6
    extrapolation: str = "richardson"

    def __post_init__(self) -> None:
        if not self.offsets:
            raise SpecInvalid("offset schedule must be non-empty")
        if any(d <= 0 for d in self.offsets):
            raise SpecInvalid("offsets must be positive")
        if any(b >= a for a, b in zip(self.offsets, self.offsets[1:])):
            raise SpecInvalid("offsets must be strictly decreasing")
        if self.extrapolation.lower() not in EXTRAPOLATIONS:
            raise SpecInvalid(f"unknown extrapolation {self.extrapolation!r}")
        if self.tol_metric <= 0:
            raise SpecInvalid("tol_metric must be positive")


@dataclass(frozen=True)
class DistanceEstimate:
    value: float
    per_offset: tuple[tuple[float, float], ...]
    converged: bool

    def __post_init__(self) -> None:
        if not math.isinf(self.value) and self.value < -EPS_GEOM:
            raise SpecInvalid("distance estimate cannot be negative")


@dataclass(frozen=True)
class GeodesicCheck:
    path: Polyline
    max_deviation: float
    one_sided_max: float
    length: float


@lru_cache(maxsize=32)
def _scene_of(domain: PlanarDomain) -> ObstacleScene:
    return ObstacleScene.from_domain(domain)


@lru_cache(maxsize=32)
def _engine_of(scene: ObstacleScene) -> PreparedScene:
    return PreparedScene(scene)


def _engine(domain: PlanarDomain) -> PreparedScene:
    return _engine_of(_scene_of(domain))


def closure_distance(
    domain: PlanarDomain,
    x: Point2,
    y: Point2,
    hint_x: str | None = None,
    hint_y: str | None = None,
) -> PathResult:
    """Shortest-path length between closure points, terminals evaluated in
    place (no inward offsets).  For polygonal domains this equals the inward
    offset limit, so it serves as the exact small-offset reference."""
    return _engine(domain).shortest_path(x, y, hint_a=hint_x, hint_b=hint_y)


def _representatives(
    domain: PlanarDomain,
    t: Point2,
    hint: str | None,
    offsets: Sequence[float],
) -> tuple[Point2, ...]:
    region = contains(domain, t)
    if region is Region.EXTERIOR:
        raise SceneInvalid(f"point ({t.x}, {t.y}) lies outside the domain closure")
    if region is Region.INTERIOR:
        return tuple(t for _ in offsets)
    return tuple(inward_offset(domain, t, d, hint) for d in offsets)


def _pair_lengths(
    engine: PreparedScene,
    reps_x: Sequence[Point2],
    reps_y: Sequence[Point2],
) -> list[float]:
    # interior points repeat the same representative at every offset; skip
    # re-solving identical pairs
    cache: dict[tuple, float] = {}
    lengths = []
    for rx, ry in zip(reps_x, reps_y):
        key = (rx.as_tuple(), ry.as_tuple())
        if key not in cache:
            cache[key] = engine.shortest_path(rx, ry).length
        lengths.append(cache[key])
    return lengths


def _extrapolate(lengths: Sequence[float], cfg: MetricConfig) -> float:
    finite = [v for v in lengths if not math.isinf(v)]
    if not finite:
        return math.inf
    if len(finite) < len(lengths):
        # mixed reachability across offsets: trust the smallest offset
        return lengths[-1]
    if cfg.extrapolation.lower() == "richardson" and len(lengths) >= 2:
        d_prev, d_last = cfg.offsets[-2], cfg.offsets[-1]
        v_prev, v_last = lengths[-2], lengths[-1]
        # linear-in-delta model; clamp because a distance cannot go negative
        return max(0.0, v_last + (v_last - v_prev) * d_last / (d_prev - d_last))
    return lengths[-1]


def _converged(lengths: Sequence[float], cfg: MetricConfig) -> bool:
    if len(lengths) == 1:
        return True
    infs = [math.isinf(v) for v in lengths]
    if any(infs):
        return all(infs)
    diffs = [abs(b - a) for a, b in zip(lengths, lengths[1:])]
    if len(diffs) == 1:
        return diffs[0] <= cfg.tol_metric
    return all(d2 <= d1 + 1e-12 for d1, d2 in zip(diffs, diffs[1:]))


def rho(
    domain: PlanarDomain,
    x: Point2,
    y: Point2,
    cfg: MetricConfig | None = None,
    hint_x: str | None = None,
    hint_y: str | None = None,
    warn: bool = True,
) -> DistanceEstimate:
    """Boundary-relative distance via the inward-offset schedule.

    Interior terminals are used as-is; boundary terminals are replaced by
    interior representatives at each offset delta.  A point on a slit needs a
    side hint because the two faces genuinely differ.  Unreachable pairs give
    value ``inf`` (a result, not an error)."""
    cfg = cfg or MetricConfig()
    reps_x = _representatives(domain, x, hint_x, cfg.offsets)
    reps_y = _representatives(domain, y, hint_y, cfg.offsets)
    engine = _engine(domain)
    lengths = _pair_lengths(engine, reps_x, reps_y)
    value = _extrapolate(lengths, cfg)
    converged = _converged(lengths, cfg)
    if warn and not converged:
        warnings.warn(
            f"offset schedule did not converge for ({x.x}, {x.y})-({y.x}, {y.y}): "
            f"lengths {lengths}",
            RuntimeWarning,
            stacklevel=2,
        )
    return DistanceEstimate(value, tuple(zip(cfg.offsets, lengths)), converged)


def distance_matrix(
    domain: PlanarDomain,
    points: Sequence[Point2],
    cfg: MetricConfig | None = None,
    hints: Sequence[str | None] | None = None,
) -> list[list[DistanceEstimate]]:
    """Pairwise rho over the points; symmetric by construction (each
    unordered pair is evaluated once, with shared offset representatives)."""
    cfg = cfg or MetricConfig()
    if hints is None:
        hints = [None] * len(points)
    if len(hints) != len(points):
        raise SpecInvalid("hints must parallel points")
    reps = [
        _representatives(domain, p, h, cfg.offsets) for p, h in zip(points, hints)
    ]
    engine = _engine(domain)
    n = len(points)
    zero = DistanceEstimate(0.0, tuple((d, 0.0) for d in cfg.offsets), True)
    out: list[list[DistanceEstimate]] = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lengths = _pair_lengths(engine, reps[i], reps[j])
            est = DistanceEstimate(
                _extrapolate(lengths, cfg),
                tuple(zip(cfg.offsets, lengths)),
                _converged(lengths, cfg),
            )
            out[i][j] = est
            out[j][i] = est
    return out


def matrix_values(matrix) -> np.ndarray:
    """Float matrix from distance_matrix output (or pass an array through)."""
    if isinstance(matrix, np.ndarray):
        return matrix.astype(float)
    rows = []
    for row in matrix:
        rows.append(
            [cell.value if isinstance(cell, DistanceEstimate) else float(cell) for cell in row]
        )
    return np.array(rows, dtype=float)


@dataclass(frozen=True)
class MetricAxiomReport:
    symmetry_violations: tuple[tuple[int, int, float], ...]
    triangle_violations: tuple[tuple[int, int, int, float], ...]
    identity_violations: tuple[tuple[int, int, float], ...]

    @property
    def ok(self) -> bool:
        return not (
            self.symmetry_violations
            or self.triangle_violations
            or self.identity_violations
        )


def check_metric_axioms(matrix, tol: float = 1e-6) -> MetricAxiomReport:
    """Symmetry, identity/nonnegativity and triangle checks on a distance
    matrix; lists every violating index pair or triple."""
    M = matrix_values(matrix)
    n, m = M.shape
    if n != m:
        raise SpecInvalid(f"matrix must be square, got {n}x{m}")
    sym = []
    with np.errstate(invalid="ignore"):
        gap = np.abs(M - M.T)
    gap = np.nan_to_num(gap, nan=0.0)
    for i, j in zip(*np.nonzero(np.triu(gap > tol, k=1))):
        sym.append((int(i), int(j), float(gap[i, j])))
    ident = []
    for i in range(n):
        if abs(M[i, i]) > tol:
            ident.append((i, i, float(M[i, i])))
    for i, j in zip(*np.nonzero(M < -tol)):
        ident.append((int(i), int(j), float(M[i, j])))
    tri = []
    with np.errstate(invalid="ignore"):
        excess = M[:, None, :] - M[:, :, None] - M[None, :, :]
    excess = np.nan_to_num(excess, nan=0.0)
    for i, j, k in zip(*np.nonzero(excess > tol)):
        tri.append((int(i), int(j), int(k), float(excess[i, j, k])))
    return MetricAxiomReport(tuple(sym), tuple(tri), tuple(ident))


def _arc_positions(path: Polyline, count: int) -> list[float]:
    total = path.length()
    return [total * i / (count - 1) for i in range(count)]


def _subpath_length(path: Polyline, s: float, t: float) -> float:
    cum = path.cumulative_lengths()
    lo, hi = min(s, t), max(s, t)
    acc = 0.0
    for i in range(len(cum) - 1):
        a, b = cum[i], cum[i + 1]
        left = max(a, lo)
        right = min(b, hi)
        if right > left:
            acc += right - left
    return acc


def extract_geodesic(
    domain: PlanarDomain,
    x: Point2,
    y: Point2,
    cfg: MetricConfig | None = None,
    hint_x: str | None = None,
    hint_y: str | None = None,
    grid: int = 12,
) -> GeodesicCheck:
    """Smallest-offset shortest path, arc-length parametrized, with the
    restriction identity checked on a parameter grid: the distance between
    two path points equals their parameter difference, and no subpath is
    longer than its parameter span."""
    cfg = cfg or MetricConfig()
    grid = max(grid, 10)
    d_min = cfg.offsets[-1]
    rx = _representatives(domain, x, hint_x, (d_min,))[0]
    ry = _representatives(domain, y, hint_y, (d_min,))[0]
    engine = _engine(domain)
    res = engine.shortest_path(rx, ry)
    if not res.reached or res.path is None:
        raise UnreachableError(
            f"no finite distance between ({x.x}, {x.y}) and ({y.x}, {y.y})"
        )
    path = res.path
    total = path.length()
    if total <= EPS_GEOM:
        return GeodesicCheck(path, 0.0, 0.0, total)
    params = _arc_positions(path, grid)
    pts = [path.point_at(s) for s in params]
    max_dev = 0.0
    one_sided = 0.0
    for i in range(len(params)):
        for j in range(i + 1, len(params)):
            s, t = params[i], params[j]
            span = t - s
            d = engine.shortest_path(pts[i], pts[j]).length
            max_dev = max(max_dev, abs(d - span))
            one_sided = max(one_sided, _subpath_length(path, s, t) - span)
    return GeodesicCheck(path, max_dev, one_sided, total)


@dataclass(frozen=True)
class ConvexityReport:
    strictly_convex: bool
    witnesses: tuple[tuple[int, int, Point2, float], ...]
    resolution: tuple[int, float]


def _min_clearance_section(
    domain: PlanarDomain, path: Polyline, eta: float
) -> tuple[float, Point2]:
    """Minimum distance from the eta-trimmed path section to the boundary,
    with the closest path point."""
    total = path.length()
    lo, hi = eta, total - eta
    cum = path.cumulative_lengths()
    feats = domain.boundary_features()
    best = math.inf
    best_pt = path.vertices[0]
    for i in range(len(cum) - 1):
        a, b = cum[i], cum[i + 1]
        left = max(a, lo)
        right = min(b, hi)
        if right <= left:
            continue
        p = path.point_at(left)
        q = path.point_at(right)
        # sample the clipped sub-segment densely enough for a polyline vs
        # polygon clearance check; distance along a segment to a segment is
        # piecewise smooth with one interior minimum, so endpoint+midpoint
        # sampling with refinement is reliable here
        for f in feats:
            d_end = min(
                point_segment_distance(p, f.a, f.b),
                point_segment_distance(q, f.a, f.b),
            )
            steps = 8
            d_seg = d_end
            for k in range(steps + 1):
                tpar = k / steps
                m = Point2(p.x + tpar * (q.x - p.x), p.y + tpar * (q.y - p.y))
                d_seg = min(d_seg, point_segment_distance(m, f.a, f.b))
            if d_seg < best:
                best = d_seg
                best_pt = path.point_at(0.5 * (left + right))
    return best, best_pt


def check_strict_convexity(
    domain: PlanarDomain,
    boundary_samples: Sequence[Point2],
    eta: float,
    cfg: MetricConfig | None = None,
) -> ConvexityReport:
    """Every sample pair's geodesic must stay clear of the boundary except
    within eta of its endpoints.  The verdict is relative to the sampling
    resolution; polygonal domains legitimately fail on same-edge pairs."""
    cfg = cfg or MetricConfig()
    engine = _engine(domain)
    witnesses = []
    for i in range(len(boundary_samples)):
        for j in range(i + 1, len(boundary_samples)):
            res = engine.shortest_path(boundary_samples[i], boundary_samples[j])
            if not res.reached or res.path is None:
                witnesses.append((i, j, boundary_samples[i], math.inf))
                continue
            if res.length <= 2 * eta + EPS_GEOM:
                continue
            clearance, where = _min_clearance_section(domain, res.path, eta)
            if clearance <= EPS_GEOM:
                witnesses.append((i, j, where, clearance))
    return ConvexityReport(not witnesses, tuple(witnesses), (len(boundary_samples), eta))


def check_property_circ(
    domain: PlanarDomain,
    boundary_samples: Sequence[Point2],
    eta: float,
    cfg: MetricConfig | None = None,
) -> tuple[bool, tuple[tuple[int, int, Point2, float], ...]]:
    """Strict-convexity test restricted to boundary point pairs."""
    for p in boundary_samples:
        if contains(domain, p) is not Region.BOUNDARY:
            raise SpecInvalid(f"sample ({p.x}, {p.y}) is not a boundary point")
    report = check_strict_convexity(domain, boundary_samples, eta, cfg)
    return report.strictly_convex, report.witnesses


def check_rho_equals_ambient(
    domain: PlanarDomain,
    pairs: Sequence[tuple[Point2, Point2]],
    cfg: MetricConfig | None = None,
    tol: float = 1e-9,
) -> float:
    """Max over pairs of |relative distance - Euclidean distance|.

    Uses the closure evaluation so convex domains report zero up to float
    rounding rather than offset-schedule error."""
    worst = 0.0
    engine = _engine(domain)
    for x, y in pairs:
        res = engine.shortest_path(x, y)
        if not res.reached:
            raise UnreachableError(f"pair ({x.x},{x.y})-({y.x},{y.y}) unreachable")
        worst = max(worst, abs(res.length - x.distance_to(y)))
    return worst
