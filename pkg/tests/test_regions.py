"""Region machinery tests: facet curves, polytope, classifier, scans."""

import numpy as np
import pytest

from magicsimplex.family import (
    FamilyPoint,
    horodecki_b_from_gamma,
    horodecki_point,
    pt_min_eigenvalue,
)
from magicsimplex.regions import (
    CSV_HEADER,
    Classification,
    boundary_plane_region,
    build_polygon,
    classify,
    grid_points,
    l_a,
    l_b,
    mirrored_polygon_report,
    parse_grid,
    plane_grid_points,
    scan,
    trapezoid_vertices,
)
from magicsimplex.verdicts import Verdict


# ---------------------------------------------------------------------------
# Facet curves
# ---------------------------------------------------------------------------


def test_curve_values():
    assert l_a(0.0) == pytest.approx(-2.0 / 9.0, abs=1e-15)
    assert l_a(1.0) == pytest.approx(0.0, abs=1e-15)
    assert l_b(0.0) == pytest.approx(-2.0 / 9.0, abs=1e-15)
    assert l_b(1.0) == pytest.approx(0.0, abs=1e-15)


def test_curve_crossings_are_exact():
    assert abs(l_a(0.0) - l_b(0.0)) <= 1e-12
    assert abs(l_a(1.0) - l_b(1.0)) <= 1e-12


def test_strip_orientation():
    for g in np.linspace(0.05, 0.95, 19):
        assert l_a(g) < l_b(g)


def test_cone_trace_domain():
    limit = 2.0 / np.sqrt(3.0)
    l_b(limit - 1e-12)  # fine
    with pytest.raises(ValueError, match="undefined"):
        l_b(limit + 1e-9)


# ---------------------------------------------------------------------------
# Separable polytope
# ---------------------------------------------------------------------------


def test_trapezoid_corners_match_closed_forms():
    want = {
        (-1.0 / 6.0, -1.0 / 3.0),
        (2.0 / 9.0, -2.0 / 9.0),
        (1.0 / 3.0, 2.0 / 3.0),
        (-1.0 / 12.0, 1.0 / 3.0),
    }
    got = trapezoid_vertices()
    assert len(got) == 4
    for a, b in got:
        assert any(
            abs(a - wa) <= 1e-6 and abs(b - wb) <= 1e-6 for wa, wb in want
        ), (a, b)


def test_polygon_membership_examples():
    poly = build_polygon()
    assert poly.certified
    assert poly.contains(FamilyPoint(0.0, 0.0, 0.0))
    assert poly.contains(FamilyPoint(0.0, 0.0, 1.0))  # a vertex
    assert not poly.contains(FamilyPoint(1.0, 0.0, 0.0))  # NPT point


def test_polygon_vertices_are_ppt_states():
    poly = build_polygon()
    for v in poly.vertices:
        assert pt_min_eigenvalue(v.point) >= -1e-6


def test_polygon_subset_of_ppt():
    # random convex combinations of the vertices must pass the PT oracle
    poly = build_polygon()
    pts = np.array([v.point.as_tuple() for v in poly.vertices])
    rng = np.random.default_rng(23)
    weights = rng.dirichlet(np.ones(len(pts)), size=2000)
    worst = 0.0
    for wvec in weights:
        a, b, g = wvec @ pts
        worst = min(worst, pt_min_eigenvalue(FamilyPoint(a, b, g)))
    assert worst >= -1e-8


def test_membership_residual_scales():
    poly = build_polygon()
    inside = poly.membership_residual(FamilyPoint(0.01, -0.01, 0.05))
    outside = poly.membership_residual(FamilyPoint(1.0, 0.0, 0.0))
    assert inside <= 1e-9
    assert outside > 1e-3


def test_mirrored_polygon_is_reported_not_certified():
    report = mirrored_polygon_report()
    assert report["certified"] is False
    assert len(report["vertices"]) == 5


# ---------------------------------------------------------------------------
# Classifier
# ---------------------------------------------------------------------------


def test_classify_examples():
    assert classify((0.0, 0.0, 0.0)).verdict is Verdict.SEPARABLE
    assert classify((1.0, 0.0, 0.0)).verdict is Verdict.NPT_ENTANGLED
    assert classify((2.0, 0.0, 0.0)).verdict is Verdict.NOT_A_STATE
    assert classify(horodecki_point(1.5)).verdict is Verdict.BOUND_ENTANGLED


def test_classify_records_evidence():
    row = classify(horodecki_point(1.5))
    assert row.pt_min_eig >= -1e-10
    assert row.witness_value < -1e-10
    assert row.witness_name in {"Pl1", "Pl1m", "Pl2", "Pl2m", "Pl3", "Pl3m"}
    assert row.polygon_member is None  # pipeline stopped at the witness stage


def test_classify_soundness_layers():
    rng = np.random.default_rng(29)
    for _ in range(200):
        p = FamilyPoint(*rng.uniform((-0.5, -1, -1), (1.5, 1, 1.2)))
        row = classify(p)
        if row.verdict is Verdict.BOUND_ENTANGLED:
            assert row.pt_min_eig >= -1e-10
        if row.verdict is Verdict.SEPARABLE:
            assert row.polygon_member is True
            assert row.pt_min_eig >= -1e-8
        if row.verdict is Verdict.NOT_A_STATE:
            assert row.pt_min_eig is None


def test_csv_row_shapes():
    full = classify(horodecki_point(2.5)).csv_row()
    assert full.count(",") == CSV_HEADER.count(",")
    empty_tail = classify((2.0, 0.0, 0.0)).csv_row()
    assert empty_tail.endswith(",NotAState,,,,")


# ---------------------------------------------------------------------------
# Closed-form facet region vs pipeline
# ---------------------------------------------------------------------------


def test_boundary_plane_region_examples():
    g = 0.5
    mid = 0.5 * (l_a(g) + l_b(g))
    assert boundary_plane_region(g, mid).verdict is Verdict.BOUND_ENTANGLED
    g = 2.0 / 7.0
    assert boundary_plane_region(g, l_a(g) - 0.02).verdict is Verdict.SEPARABLE
    horo = horodecki_point(horodecki_b_from_gamma(0.5))
    assert boundary_plane_region(0.5, horo.beta).verdict is Verdict.NPT_ENTANGLED


def test_facet_agreement_with_pipeline():
    # on a seeded facet sample, the closed-form region and the matrix
    # pipeline must agree wherever both commit to a verdict; points
    # strictly between the curves must come out BoundEntangled
    rng = np.random.default_rng(37)
    strict_checked = 0
    for _ in range(1000):
        g = float(rng.uniform(0.0, 1.0))
        b = float(rng.uniform(-1.0 / 3.0, 0.1))
        analytic = boundary_plane_region(g, b)
        piped = classify(analytic.point)
        if analytic.verdict is Verdict.UNDETERMINED:
            continue
        assert piped.verdict is analytic.verdict, (g, b)
        if l_a(g) + 1e-6 < b < l_b(g) - 1e-6:
            strict_checked += 1
            assert piped.verdict is Verdict.BOUND_ENTANGLED
    assert strict_checked >= 30  # the strip was actually sampled


def test_horodecki_segments_are_contiguous():
    # walk the gamma >= 0 half of the line; verdicts must change exactly
    # twice: NPT -> Bound at gamma = 3/7, Bound -> Separable at 1/7
    gammas = np.arange(0.0, 5.0 / 7.0, 0.005)
    verdicts = [
        classify(horodecki_point(horodecki_b_from_gamma(g))).verdict for g in gammas
    ]
    changes = [
        (gammas[i], verdicts[i - 1], verdicts[i])
        for i in range(1, len(verdicts))
        if verdicts[i] != verdicts[i - 1]
    ]
    assert len(changes) == 2
    first, second = changes
    assert first[1] is Verdict.SEPARABLE and first[2] is Verdict.BOUND_ENTANGLED
    assert abs(first[0] - 1.0 / 7.0) <= 0.005 + 1e-3
    assert second[1] is Verdict.BOUND_ENTANGLED and second[2] is Verdict.NPT_ENTANGLED
    assert abs(second[0] - 3.0 / 7.0) <= 0.005 + 1e-3


# ---------------------------------------------------------------------------
# Scanning
# ---------------------------------------------------------------------------


def test_parse_grid():
    assert parse_grid("0:1:0.25") == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
    assert parse_grid("0.3") == [0.3]
    with pytest.raises(ValueError):
        parse_grid("1:0:0.1")
    with pytest.raises(ValueError):
        parse_grid("0:1:0")
    with pytest.raises(ValueError):
        parse_grid("0:1")


def test_grid_points_order():
    pts = grid_points("0:1:1", "0:0:1", "0:1:1")
    assert [p.as_tuple() for p in pts] == [
        (0.0, 0.0, 0.0),
        (0.0, 0.0, 1.0),
        (1.0, 0.0, 0.0),
        (1.0, 0.0, 1.0),
    ]


def test_scan_rejects_empty():
    with pytest.raises(ValueError, match="empty"):
        scan([])


def test_scan_threads_agree():
    pts = plane_grid_points("0:1:0.1", "-0.3:0.1:0.1")
    serial = scan(pts, threads=1)
    threaded = scan(pts, threads=4)
    assert list(serial.csv_lines()) == list(threaded.csv_lines())
    assert serial.counts() == threaded.counts()


def test_scan_counts():
    result = scan([FamilyPoint(0, 0, 0), FamilyPoint(2, 0, 0)])
    assert result.counts() == {"Separable": 1, "NotAState": 1}
    lines = list(result.csv_lines())
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
