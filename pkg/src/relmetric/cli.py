"""Command-line front end.

Subcommands: gen (construction scenes), dist / matrix (distances), check
(metric, geodesic, convexity, circ, ambient), repro (one-shot reproduction
of the package's headline bounds with pass/fail verdicts) and compare
(boundary profiles, alignment, congruence).

Exit codes: 0 pass, 1 usage or spec error, 2 unreachable distance,
3 property violation.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import random
import sys
from pathlib import Path

import numpy as np

from .constructions import (
    LEG_A,
    LEG_D,
    CombSpec,
    SegmentFamilySpec,
    SpiralSpec,
    build_strips,
    clipped_family_scene,
    comb_divergence,
    comb_domain,
    labyrinth_min_coils,
    max_corner_detour_ratio,
    spiral_labyrinth,
    triangle_defect_report,
    verify_length_bound,
)
from .errors import (
    GeometryError,
    NotReachedWithinBound,
    SceneInvalid,
    SpecInvalid,
    TerminalInsideFloor,
    UnreachableError,
)
from .geom import Point2, Region, contains, point_segment_distance
from .metric import (
    EXTRAPOLATIONS,
    MetricConfig,
    check_metric_axioms,
    check_property_circ,
    check_rho_equals_ambient,
    check_strict_convexity,
    distance_matrix,
    extract_geodesic,
    matrix_values,
    rho,
)
from .rigidity import (
    boundary_arc_points,
    boundary_profile,
    compare_profiles,
    convexity_transfer_test,
    euclidean_congruence,
)
from .sceneio import (
    Scene,
    fmt12,
    load_scene,
    matrix_csv,
    render_svg,
    save_scene,
    scene_to_json,
)
from .visibility import PreparedScene

EXIT_OK = 0
EXIT_SPEC = 1
EXIT_UNREACHABLE = 2
EXIT_VIOLATION = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here reserves 2 for
    unreachable distances, so usage errors exit 1."""

    def error(self, message):
        self.exit(EXIT_SPEC, f"{self.prog}: error: {message}\n")


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _cfg_from(scene: Scene | None, args) -> MetricConfig:
    cfg = scene.config if scene else MetricConfig()
    updates = {}
    if getattr(args, "offsets", None):
        updates["offsets"] = tuple(
            float(d) for d in args.offsets.split(",") if d
        )
    if getattr(args, "extrapolation", None):
        updates["extrapolation"] = args.extrapolation
    return dataclasses.replace(cfg, **updates) if updates else cfg


def _named_point(scene: Scene, name: str) -> Point2:
    try:
        return scene.points[name]
    except KeyError:
        raise SceneInvalid(f"no point named {name!r} in the scene") from None


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def _gen_scene(args) -> Scene:
    if args.kind == "comb":
        spec = CombSpec(args.depth, args.cap_width)
        c = spec.cap
        return Scene(
            domain=comb_domain(spec),
            points={"probe": Point2(1.0, 1.5), "target": Point2(c, c)},
            generator={
                "kind": "comb",
                "depth": spec.depth,
                "cap_width": spec.cap,
            },
        )
    if args.kind == "family":
        if args.levels < 1:
            raise SpecInvalid("family needs at least one level")
        obs = clipped_family_scene(range(1, args.levels + 1))
        return Scene(
            domain=obs.boundary,
            points={"A": LEG_A, "D": LEG_D},
            segments=obs.segments,
            generator={
                "kind": "family",
                "levels": args.levels,
                "r_min": 4.0 * 2.0**-args.levels,
            },
        )
    if args.kind == "spiral":
        spec = SpiralSpec(args.radius, args.coils, args.pitch, args.samples_per_coil)
        lab = spiral_labyrinth(spec)
        return Scene(
            points={"entrance": lab.entrance, "exit": lab.exit},
            segments=lab.scene.segments,
            generator={
                "kind": "spiral",
                "start_radius": spec.start_radius,
                "coils": spec.coils,
                "pitch": spec.pitch,
                "samples_per_coil": spec.samples_per_coil,
            },
        )
    if args.kind == "strips":
        report = build_strips(
            SegmentFamilySpec(args.levels),
            coils=args.coils,
            samples_per_coil=args.samples_per_coil,
        )
        segs = tuple(s for t in report.trapezia for s in t.sides())
        return Scene(
            segments=segs,
            generator={
                "kind": "strips",
                "levels": args.levels,
                "coils": args.coils,
                "samples_per_coil": args.samples_per_coil,
                "strip_count": len(report.strips),
                "note": "segments are the meridian-plane strip footprints",
            },
        )
    raise SceneInvalid(f"unknown generator kind {args.kind!r}")


def cmd_gen(args) -> int:
    scene = _gen_scene(args)
    text = scene_to_json(scene)
    if args.out:
        save_scene(scene, args.out)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    if args.svg:
        Path(args.svg).write_text(render_svg(scene))
        print(f"wrote {args.svg}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# dist / matrix
# ---------------------------------------------------------------------------


def cmd_dist(args) -> int:
    scene = load_scene(args.scene)
    p = _named_point(scene, args.p)
    q = _named_point(scene, args.q)
    if scene.segments:
        engine = PreparedScene(scene.obstacle_scene())
        res = engine.shortest_path(p, q)
        if not res.reached:
            print("value inf")
            return EXIT_UNREACHABLE
        print(f"value {fmt12(res.length)}")
        print("evaluation oracle-exact")
        return EXIT_OK
    if scene.domain is None:
        raise SceneInvalid("scene has neither a domain nor segments")
    cfg = _cfg_from(scene, args)
    est = rho(
        scene.domain, p, q, cfg,
        hint_x=scene.hints.get(args.p),
        hint_y=scene.hints.get(args.q),
    )
    print(f"value {fmt12(est.value)}")
    print(f"converged {'true' if est.converged else 'false'}")
    print("offset length")
    for delta, length in est.per_offset:
        print(f"{fmt12(delta)} {fmt12(length)}")
    return EXIT_UNREACHABLE if math.isinf(est.value) else EXIT_OK


def cmd_matrix(args) -> int:
    scene = load_scene(args.scene)
    if scene.domain is None:
        raise SceneInvalid("matrix needs a scene with a domain")
    names = (
        [n for n in args.points.split(",") if n]
        if args.points
        else sorted(scene.points)
    )
    if len(names) < 2:
        raise SceneInvalid("need at least two points")
    pts = [_named_point(scene, n) for n in names]
    cfg = _cfg_from(scene, args)
    hints = [scene.hints.get(n) for n in names]
    matrix = distance_matrix(scene.domain, pts, cfg, hints)
    values = matrix_values(matrix)
    _emit(matrix_csv(names, values), args.csv)
    if args.csv:
        print(f"wrote {args.csv}")
    return EXIT_UNREACHABLE if bool(np.isinf(values).any()) else EXIT_OK


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def _random_interior_points(
    domain, n: int, seed: int, clearance: float
) -> list[Point2]:
    rng = random.Random(seed)
    xs = [p.x for p in domain.outer]
    ys = [p.y for p in domain.outer]
    feats = domain.boundary_features()
    out: list[Point2] = []
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 20000:
            raise SceneInvalid(
                "could not place interior sample points; domain too thin "
                "for the requested clearance"
            )
        p = Point2(
            rng.uniform(min(xs), max(xs)), rng.uniform(min(ys), max(ys))
        )
        if contains(domain, p) is not Region.INTERIOR:
            continue
        if min(point_segment_distance(p, f.a, f.b) for f in feats) < clearance:
            continue
        out.append(p)
    return out


def cmd_check(args) -> int:
    scene = load_scene(args.scene)
    if scene.domain is None:
        raise SceneInvalid("check needs a scene with a domain")
    domain = scene.domain
    cfg = _cfg_from(scene, args)

    if args.points:
        selected = [n for n in args.points.split(",") if n]
    else:
        selected = sorted(scene.points)

    if args.what == "metric":
        tol = args.tol if args.tol is not None else cfg.tol_metric
        if len(selected) >= 3:
            names = selected
            pts = [_named_point(scene, n) for n in names]
            hints = [scene.hints.get(n) for n in names]
        else:
            pts = _random_interior_points(
                domain, args.samples, args.seed, max(cfg.offsets)
            )
            hints = None
        matrix = distance_matrix(domain, pts, cfg, hints)
        rep = check_metric_axioms(matrix, tol)
        print(f"points {len(pts)}")
        print(f"symmetry_violations {len(rep.symmetry_violations)}")
        print(f"triangle_violations {len(rep.triangle_violations)}")
        print(f"identity_violations {len(rep.identity_violations)}")
        print(f"verdict {'PASS' if rep.ok else 'FAIL'}")
        return EXIT_OK if rep.ok else EXIT_VIOLATION

    if args.what == "geodesic":
        names = sorted(scene.points)
        if args.p or args.q:
            if not (args.p and args.q):
                raise SceneInvalid("--p and --q go together")
            pair = (args.p, args.q)
        elif len(names) >= 2:
            pair = (names[0], names[1])
        else:
            raise SceneInvalid("geodesic check needs two named points")
        p = _named_point(scene, pair[0])
        q = _named_point(scene, pair[1])
        tol = args.tol if args.tol is not None else 1e-6
        gc = extract_geodesic(
            domain, p, q, cfg,
            hint_x=scene.hints.get(pair[0]),
            hint_y=scene.hints.get(pair[1]),
            grid=args.grid,
        )
        print(f"length {fmt12(gc.length)}")
        print(f"max_deviation {fmt12(gc.max_deviation)}")
        print(f"one_sided_max {fmt12(gc.one_sided_max)}")
        ok = gc.max_deviation <= tol and gc.one_sided_max <= args.one_sided_tol
        print(f"verdict {'PASS' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_VIOLATION

    if args.what in ("convexity", "circ"):
        samples = boundary_arc_points(domain, args.samples)
        if args.what == "convexity":
            rep = check_strict_convexity(domain, samples, args.eta, cfg)
            ok, witnesses = rep.strictly_convex, rep.witnesses
        else:
            ok, witnesses = check_property_circ(domain, samples, args.eta, cfg)
        print(f"samples {len(samples)} eta {fmt12(args.eta)}")
        print(f"witnesses {len(witnesses)}")
        for i, j, where, clear in witnesses[:5]:
            print(
                f"witness pair ({i},{j}) touches near "
                f"({fmt12(where.x)}, {fmt12(where.y)}) clearance {fmt12(clear)}"
            )
        print(f"verdict {'PASS' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_VIOLATION

    if args.what == "ambient":
        names = selected
        if len(names) < 2:
            raise SceneInvalid("ambient check needs at least two named points")
        pts = [_named_point(scene, n) for n in names]
        pairs = [
            (pts[i], pts[j])
            for i in range(len(pts))
            for j in range(i + 1, len(pts))
        ]
        tol = args.tol if args.tol is not None else 1e-9
        gap = check_rho_equals_ambient(domain, pairs, cfg, tol)
        print(f"pairs {len(pairs)}")
        print(f"max_gap {fmt12(gap)}")
        ok = gap <= tol
        print(f"verdict {'PASS' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_VIOLATION

    raise SceneInvalid(f"unknown check {args.what!r}")


# ---------------------------------------------------------------------------
# repro
# ---------------------------------------------------------------------------


def cmd_repro(args) -> int:
    if args.target == "labyrinth":
        try:
            coils, trace = labyrinth_min_coils(
                args.radius,
                args.pitch,
                m_max=args.m_max,
                samples_per_coil=args.samples_per_coil,
                threshold=args.threshold,
            )
        except NotReachedWithinBound as exc:
            print(f"search failed: {exc}")
            print("verdict FAIL")
            return EXIT_VIOLATION
        print("coils length")
        for m, length in trace:
            print(f"{m} {fmt12(length)}")
        print(f"min_coils {coils}")
        print(f"threshold {fmt12(args.threshold)}")
        print("verdict PASS")
        return EXIT_OK

    if args.target == "bound":
        spec = SegmentFamilySpec(args.levels)
        floor = 6.0 * (1.0 - args.tol_floor)
        try:
            _, length = verify_length_bound(spec, tol_floor=args.tol_floor)
        except (SpecInvalid, TerminalInsideFloor):
            raise
        except GeometryError as exc:
            print(f"bound violated: {exc}")
            print("verdict FAIL")
            return EXIT_VIOLATION
        _, control = verify_length_bound(spec, include_obstacles=False)
        print(f"levels {args.levels}")
        print(f"length {fmt12(length)}")
        print(f"floor {fmt12(floor)}")
        print(f"control {fmt12(control)}")
        ok = length >= floor and control < 2.1
        print(f"verdict {'PASS' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_VIOLATION

    if args.target == "defect":
        rep = triangle_defect_report(args.levels)
        print(f"levels {rep.levels}")
        print(f"confined_length {fmt12(rep.confined_length)}")
        print(f"detour_ratio_bound {fmt12(rep.detour_ratio_bound)}")
        print(f"projected_lower_bound {fmt12(rep.projected_lower_bound)}")
        print(f"legs_total {fmt12(rep.legs_total)}")
        print(f"escape_length {fmt12(rep.escape_length)}")
        print(f"verdict {'PASS' if rep.defect_confirmed else 'FAIL'}")
        return EXIT_OK if rep.defect_confirmed else EXIT_VIOLATION

    if args.target == "comb":
        depths = [int(d) for d in args.depths.split(",") if d]
        div = comb_divergence(depths)
        print("depth distance")
        for n, v in div.values:
            print(f"{n} {fmt12(v)}")
        print(f"verdict {'PASS' if div.strictly_increasing else 'FAIL'}")
        return EXIT_OK if div.strictly_increasing else EXIT_VIOLATION

    if args.target == "detour":
        report = build_strips(
            SegmentFamilySpec(args.levels),
            coils=args.coils,
            samples_per_coil=args.samples_per_coil,
        )
        worst = max(
            max_corner_detour_ratio(t, args.samples) for t in report.trapezia
        )
        const_ok = math.sqrt(3.0) / 4.0 > 2.0 / 5.0
        print(f"trapezia {len(report.trapezia)}")
        print(f"max_ratio {fmt12(worst)}")
        print(f"ratio_bound {fmt12(2.5)}")
        print(f"constant_check {'PASS' if const_ok else 'FAIL'}")
        ok = worst <= 2.5 and const_ok
        print(f"verdict {'PASS' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_VIOLATION

    if args.target == "strips":
        report = build_strips(
            SegmentFamilySpec(args.levels),
            coils=args.coils,
            samples_per_coil=args.samples_per_coil,
        )
        print(f"strips {len(report.strips)}")
        print(f"min_distance {fmt12(report.min_distance)}")
        if report.closest_pair:
            (j1, k1), (j2, k2) = report.closest_pair
            print(f"closest_pair ({j1},{k1})-({j2},{k2})")
        print(f"ray_residual {fmt12(report.ray_residual)}")
        print(f"fallback_pairs {report.fallback_pairs}")
        ok = report.disjoint and report.ray_residual <= 1e-9
        print(f"verdict {'PASS' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_VIOLATION

    raise SceneInvalid(f"unknown repro target {args.target!r}")


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def cmd_compare(args) -> int:
    scene_a = load_scene(args.scene_a)
    scene_b = load_scene(args.scene_b)
    if scene_a.domain is None or scene_b.domain is None:
        raise SceneInvalid("compare needs two scenes with domains")
    cfg = _cfg_from(scene_a, args)
    tol = args.tol if args.tol is not None else 1e-9
    prof_a = boundary_profile(scene_a.domain, args.samples, cfg)
    prof_b = boundary_profile(scene_b.domain, args.samples, cfg)
    align = compare_profiles(prof_a, prof_b, tol)
    print(f"samples {args.samples}")
    print(f"alignment shift {align.shift} reflected "
          f"{'true' if align.reflected else 'false'}")
    print(f"profile_residual {fmt12(align.residual)}")
    isometric = align.residual <= tol
    print(f"isometric {'true' if isometric else 'false'}")
    congruent = False
    if isometric:
        cong = euclidean_congruence(prof_a, prof_b, align, tol)
        congruent = cong.congruent
        print(f"congruence_gap {fmt12(cong.max_gap)}")
        print(f"congruent {'true' if congruent else 'false'}")
    if args.eta is not None:
        rep = convexity_transfer_test(
            scene_a.domain, scene_b.domain, args.samples, args.eta, cfg, tol
        )
        print(f"transfer applicable {'true' if rep.applicable else 'false'}")
        print(f"transfer agrees {'true' if rep.agrees else 'false'}")
        print(
            "transfer falsification_candidate "
            f"{'true' if rep.falsification_candidate else 'false'}"
        )
        print(f"transfer note: {rep.note}")
    if args.csv:
        names = [f"s{i}" for i in range(prof_a.size)]
        Path(args.csv).write_text(matrix_csv(names, prof_a.matrix))
        print(f"wrote {args.csv}")
    if args.svg:
        sigma = align.permutation(prof_b.size)
        fig = Scene(
            domain=scene_a.domain,
            points={f"a{i}": p for i, p in enumerate(prof_a.samples)},
            segments=tuple(scene_b.domain.boundary_features()),
        )
        extra = {
            f"b{i}": prof_b.samples[int(k)] for i, k in enumerate(sigma)
        }
        Path(args.svg).write_text(render_svg(fig, extra_points=extra))
        print(f"wrote {args.svg}")
    ok = isometric and congruent
    print(f"verdict {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relmetric", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_cfg(p):
        p.add_argument("--offsets", help="comma-separated inward offsets")
        p.add_argument("--extrapolation", choices=sorted(EXTRAPOLATIONS))

    g = sub.add_parser("gen", help="generate a construction scene")
    gs = g.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    g_comb = gs.add_parser("comb", help="comb domain")
    g_comb.add_argument("--depth", type=int, default=4)
    g_comb.add_argument("--cap-width", type=float, default=None, dest="cap_width")
    g_family = gs.add_parser("family", help="radial segment family in its wedge triangle")
    g_family.add_argument("--levels", type=int, default=2)
    g_spiral = gs.add_parser("spiral", help="spiral labyrinth obstacle scene")
    g_spiral.add_argument("--radius", type=float, default=1.0)
    g_spiral.add_argument("--coils", type=int, default=2)
    g_spiral.add_argument("--pitch", type=float, default=1e-3)
    g_spiral.add_argument(
        "--samples-per-coil", type=int, default=64, dest="samples_per_coil"
    )
    g_strips = gs.add_parser("strips", help="ruled strips, meridian footprints")
    g_strips.add_argument("--levels", type=int, default=2)
    g_strips.add_argument("--coils", type=int, default=2)
    g_strips.add_argument(
        "--samples-per-coil", type=int, default=24, dest="samples_per_coil"
    )
    for p in (g_comb, g_family, g_spiral, g_strips):
        p.add_argument("--out", help="write the scene file here (default stdout)")
        p.add_argument("--svg", help="also render an SVG figure")
        p.set_defaults(func=cmd_gen)

    d = sub.add_parser("dist", help="distance between two named points")
    d.add_argument("scene")
    d.add_argument("p")
    d.add_argument("q")
    add_cfg(d)
    d.set_defaults(func=cmd_dist)

    mx = sub.add_parser("matrix", help="pairwise distance matrix as CSV")
    mx.add_argument("scene")
    mx.add_argument("--points", help="comma-separated point names (default: all)")
    mx.add_argument("--csv", help="write CSV here (default stdout)")
    add_cfg(mx)
    mx.set_defaults(func=cmd_matrix)

    c = sub.add_parser("check", help="metric and convexity property checks")
    c.add_argument(
        "what", choices=["metric", "geodesic", "convexity", "circ", "ambient"]
    )
    c.add_argument("scene")
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--points", help="comma-separated point names (default: all)")
    c.add_argument("--samples", type=int, default=12)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--eta", type=float, default=0.05)
    c.add_argument("--grid", type=int, default=12)
    c.add_argument("--one-sided-tol", type=float, default=1e-9, dest="one_sided_tol")
    c.add_argument("--p", default=None)
    c.add_argument("--q", default=None)
    add_cfg(c)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("repro", help="reproduce a headline bound with a verdict")
    rs = r.add_subparsers(dest="target", required=True, parser_class=_Parser)
    r_lab = rs.add_parser("labyrinth", help="spiral labyrinth length threshold")
    r_lab.add_argument("--radius", type=float, default=1.0)
    r_lab.add_argument("--pitch", type=float, default=1e-3)
    r_lab.add_argument("--threshold", type=float, default=10.0)
    r_lab.add_argument("--m-max", type=int, default=16, dest="m_max")
    r_lab.add_argument(
        "--samples-per-coil", type=int, default=64, dest="samples_per_coil"
    )
    r_bound = rs.add_parser("bound", help="confined length bound for the family")
    r_bound.add_argument("--levels", type=int, default=2)
    r_bound.add_argument("--tol-floor", type=float, default=0.01, dest="tol_floor")
    r_defect = rs.add_parser("defect", help="triangle inequality defect chain")
    r_defect.add_argument("--levels", type=int, default=2)
    r_comb = rs.add_parser("comb", help="comb distance growth table")
    r_comb.add_argument("--depths", default="4,8,16,32")
    r_detour = rs.add_parser("detour", help="trapezium corner detour ratio")
    r_detour.add_argument("--levels", type=int, default=2)
    r_detour.add_argument("--samples", type=int, default=1024)
    r_detour.add_argument("--coils", type=int, default=2)
    r_detour.add_argument(
        "--samples-per-coil", type=int, default=24, dest="samples_per_coil"
    )
    r_strips = rs.add_parser("strips", help="strip disjointness certificate")
    r_strips.add_argument("--levels", type=int, default=3)
    r_strips.add_argument("--coils", type=int, default=2)
    r_strips.add_argument(
        "--samples-per-coil", type=int, default=24, dest="samples_per_coil"
    )
    for p in (r_lab, r_bound, r_defect, r_comb, r_detour, r_strips):
        p.set_defaults(func=cmd_repro)

    cp = sub.add_parser("compare", help="boundary profile comparison")
    cp.add_argument("scene_a")
    cp.add_argument("scene_b")
    cp.add_argument("--samples", type=int, default=12)
    cp.add_argument("--tol", type=float, default=None)
    cp.add_argument("--eta", type=float, default=None,
                    help="also run the convexity transfer test at this eta")
    cp.add_argument("--csv", help="write the first profile matrix here")
    cp.add_argument("--svg", help="overlay figure of aligned samples")
    add_cfg(cp)
    cp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnreachableError as exc:
        print(f"unreachable: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
