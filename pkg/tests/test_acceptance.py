"""End-to-end verification battery, one test per deliverable guarantee.

Each test runs one entry of :func:`magicsimplex.checks.run_all` (computed
once per session) and prints a single ``[PASS]``/``[FAIL]`` line carrying
the expected value, the computed value, and the tolerance it was held to.
"""

import pytest

from magicsimplex.checks import CHECK_NAMES, run_all


@pytest.fixture(scope="module")
def battery():
    results = run_all()
    return {res.index: res for res in results}


def _report(battery, index):
    res = battery[index]
    status = "PASS" if res.passed else "FAIL"
    line = (
        f"[{status}] {res.index:2d} {res.name}: expected={res.expected:.12g} "
        f"computed={res.computed:.12g} tol={res.tolerance:.1e}"
    )
    print(line)
    if res.detail:
        print(f"          {res.detail}")
    assert res.passed, line + (f" | {res.detail}" if res.detail else "")
    assert res.name == CHECK_NAMES[index - 1]


def test_deepest_line_crossing(battery):
    _report(battery, 1)


def test_cone_edge_line_crossing(battery):
    _report(battery, 2)


def test_horodecki_line_boundaries(battery):
    _report(battery, 3)


def test_facet_curve_crossings(battery):
    _report(battery, 4)


def test_flat_face_functional(battery):
    _report(battery, 5)


def test_line_operator_identities(battery):
    _report(battery, 6)


def test_spectrum_pyramid_agreement(battery):
    _report(battery, 7)


def test_endpoint_limit_law(battery):
    _report(battery, 8)


def test_product_state_safety(battery):
    _report(battery, 9)


def test_mirror_coefficient_conjugation(battery):
    _report(battery, 10)


def test_facet_region_layout(battery):
    _report(battery, 11)


def test_gamma_zero_no_bound(battery):
    _report(battery, 12)
