"""Boundary distance profiles: alignment, congruence, and the convexity
transfer protocol."""
import math

import numpy as np
import pytest

from relmetric.errors import (
    MultipleBoundaryComponents,
    NotAligned,
    SizeMismatch,
    SpecInvalid,
)
from relmetric.geom import PlanarDomain, Point2, Region, Segment2, contains
from relmetric.rigidity import (
    boundary_arc_points,
    boundary_profile,
    compare_profiles,
    convexity_transfer_test,
    domain_digest,
    euclidean_congruence,
)

P = Point2


def rotated(verts, angle, offset=P(0.0, 0.0)):
    c, s = math.cos(angle), math.sin(angle)
    return [P(c * v.x - s * v.y + offset.x, s * v.x + c * v.y + offset.y) for v in verts]


def reflected_copy(verts):
    """Mirror about the y-axis, keeping vertex 0 first and the walk CCW."""
    ref = [P(-v.x, v.y) for v in verts]
    return [ref[0]] + list(reversed(ref[1:]))


PENTA = [P(0, 0), P(2, 0), P(2.6, 1.2), P(1.1, 2.3), P(-0.4, 1.0)]


def regular_ngon(n, r=1.0, phase=0.0):
    return [
        P(r * math.cos(phase + 2 * math.pi * k / n), r * math.sin(phase + 2 * math.pi * k / n))
        for k in range(n)
    ]


# -- sampling helpers -----------------------------------------------------------


def test_arc_points_on_boundary():
    dom = PlanarDomain(regular_ngon(6))
    pts = boundary_arc_points(dom, 9)
    assert len(pts) == 9
    for p in pts:
        assert contains(dom, p) is Region.BOUNDARY


def test_digest_stable_and_discriminating():
    sq = PlanarDomain([P(0, 0), P(1, 0), P(1, 1), P(0, 1)])
    rect = PlanarDomain([P(0, 0), P(2, 0), P(2, 1), P(0, 1)])
    assert domain_digest(sq) == domain_digest(sq)
    assert domain_digest(sq) != domain_digest(rect)
    assert len(domain_digest(sq)) == 16


# -- profiles ---------------------------------------------------------------------


def test_square_vertex_profile():
    dom = PlanarDomain([P(0, 0), P(1, 0), P(1, 1), P(0, 1)])
    prof = boundary_profile(dom, 4)
    assert prof.size == 4
    assert prof.samples[0] == P(0, 0)
    d = math.sqrt(2)
    expect = np.array(
        [[0, 1, d, 1], [1, 0, 1, d], [d, 1, 0, 1], [1, d, 1, 0]]
    )
    assert np.allclose(prof.matrix, expect, atol=1e-9)


def test_profile_gaps_equalize():
    dom = PlanarDomain(PENTA)
    prof = boundary_profile(dom, 10)
    gaps = [
        prof.matrix[i, (i + 1) % 10] for i in range(10)
    ]
    mean = sum(gaps) / len(gaps)
    spread = max(abs(g - mean) for g in gaps) / mean
    assert spread <= 0.01 + 1e-12


def test_profile_needs_three_samples():
    dom = PlanarDomain(PENTA)
    with pytest.raises(SpecInvalid):
        boundary_profile(dom, 2)


def test_profile_rejects_extra_components():
    square = [P(0, 0), P(3, 0), P(3, 3), P(0, 3)]
    hole = tuple(reversed([P(1, 1), P(2, 1), P(2, 2), P(1, 2)]))
    with pytest.raises(MultipleBoundaryComponents):
        boundary_profile(PlanarDomain(square, holes=(hole,)), 6)
    slit = Segment2(P(1, 1), P(2, 2))
    with pytest.raises(MultipleBoundaryComponents):
        boundary_profile(PlanarDomain(square, slits=(slit,)), 6)


# -- alignment and congruence --------------------------------------------------------


def test_rotated_copy_aligns_and_is_congruent():
    m = 8
    first = boundary_profile(PlanarDomain(PENTA), m)
    moved = PlanarDomain(rotated(PENTA, 0.7, offset=P(3.0, -1.0)))
    second = boundary_profile(moved, m)
    align = compare_profiles(first, second)
    assert align.residual <= 1e-9
    assert not align.reflected
    cong = euclidean_congruence(first, second, align)
    assert cong.congruent
    assert cong.max_gap <= 1e-9
    perm = align.permutation(m)
    assert sorted(perm) == list(range(m))


def test_reflected_copy_detected():
    m = 8
    first = boundary_profile(PlanarDomain(PENTA), m)
    second = boundary_profile(PlanarDomain(reflected_copy(PENTA)), m)
    align = compare_profiles(first, second)
    assert align.reflected
    assert align.residual <= 1e-9
    cong = euclidean_congruence(first, second, align)
    assert cong.congruent and cong.max_gap <= 1e-9


def test_distinct_shapes_do_not_align():
    sq = boundary_profile(PlanarDomain([P(0, 0), P(1, 0), P(1, 1), P(0, 1)]), 8)
    rect = boundary_profile(PlanarDomain([P(0, 0), P(2, 0), P(2, 1), P(0, 1)]), 8)
    align = compare_profiles(sq, rect)
    assert align.residual > 0.1
    with pytest.raises(NotAligned):
        euclidean_congruence(sq, rect, align)


def test_small_perturbation_is_visible():
    base = [P(0, 0), P(1, 0), P(1, 1), P(0, 1)]
    bent = [P(0, 0), P(1, 0), P(1 + 1e-3, 1), P(0, 1)]
    m = 12
    align = compare_profiles(
        boundary_profile(PlanarDomain(base), m),
        boundary_profile(PlanarDomain(bent), m),
    )
    assert align.residual > 1e-4


def test_size_mismatch_rejected():
    dom = PlanarDomain(PENTA)
    with pytest.raises(SizeMismatch):
        compare_profiles(boundary_profile(dom, 6), boundary_profile(dom, 8))


# -- convexity transfer ------------------------------------------------------------


def test_transfer_on_matching_round_bodies():
    first = PlanarDomain(regular_ngon(24))
    second = PlanarDomain(rotated(regular_ngon(24), 0.3, offset=P(1.5, 0.5)))
    rep = convexity_transfer_test(first, second, m=8, eta=0.05)
    assert rep.applicable
    assert rep.first_strictly_convex
    assert rep.profile_residual <= 1e-9
    assert rep.second_strictly_convex
    assert rep.agrees
    assert not rep.falsification_candidate
    assert rep.resolution == (8, 0.05)


def test_transfer_not_applicable_without_profile_match():
    first = PlanarDomain(regular_ngon(24))
    second = PlanarDomain(regular_ngon(24, r=1.4))
    rep = convexity_transfer_test(first, second, m=8, eta=0.05)
    assert not rep.applicable
    assert rep.note
