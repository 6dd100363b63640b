"""Region geometry and the classification pipeline.

The classifier stacks four certificates, cheapest arguments first:

1. positivity (closed-form facet slacks) -- else ``NotAState``;
2. the partial-transpose oracle -- negative eigenvalue means
   ``NptEntangled``;
3. the deployed witness battery -- a negative expectation on a PPT state
   certifies ``BoundEntangled``;
4. membership in an inner polytope of known separable states (convex hull
   of probed extreme points, tested by non-negative least squares) --
   membership certifies ``Separable``.

Anything that survives all four is reported ``Undetermined``: the
certificates are sound but not complete.

On the positivity facet ``alpha = 7 beta / 2 + 1 - gamma`` everything is
available in closed form.  Two curves organize that facet in the
``(gamma, beta)`` coordinates: the trace of the flat-face witness plane

    l_a(gamma) = 2 (gamma - 1) / 9

and the trace of the PPT cone edge

    l_b(gamma) = (3 gamma - 4 + sqrt(4 - 3 gamma^2)) / 9.

They cross exactly at ``gamma = 0`` and ``gamma = 1``; for ``gamma``
between the crossings every facet state strictly between the curves is
PPT yet detected by the battery (bound entangled), everything at or below
``l_a`` with ``gamma in [0, 1]`` is separable, and everything above
``l_b`` is NPT.  :func:`boundary_plane_region` packages that trichotomy;
it must and does agree with the matrix pipeline pointwise.

The separable polytope is built by probing rays from the maximally mixed
state inside the ``gamma = 0`` slice against the PPT oracle (the slice's
PPT region is a convex quadrilateral, recovered edge by edge), plus the
single off-slice extreme point ``(0, 0, 1)`` where the facet triangle
closes.  The build restricted to non-negative ``gamma`` is the certified
default; the mirrored variant exists for reporting only (one of its
reflected corners is not even a state, so it certifies nothing).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np
from scipy.optimize import nnls

from .family import (
    PPT_TOL,
    STATE_TOL,
    FamilyPoint,
    family_state,
    pt_min_eigenvalue,
    pyramid_margin,
)
from .verdicts import Verdict
from .witness import witness_values

__all__ = [
    "DETECTION_TOL",
    "MEMBERSHIP_TOL",
    "Classification",
    "ScanResult",
    "SeparablePolygon",
    "boundary_plane_region",
    "build_polygon",
    "classify",
    "grid_points",
    "l_a",
    "l_b",
    "mirrored_polygon_report",
    "parse_grid",
    "plane_grid_points",
    "scan",
    "trapezoid_vertices",
]

logger = logging.getLogger(__name__)

#: A witness expectation below this fires the bound-entanglement certificate.
DETECTION_TOL = -1e-10

#: Hull-membership residual accepted by the separability certificate.
MEMBERSHIP_TOL = 1e-9

_FACET_DOMAIN = 2.0 / math.sqrt(3.0)


def l_a(gamma: float) -> float:
    """Facet trace of the flat-face witness plane (separability ceiling)."""
    return 2.0 * (gamma - 1.0) / 9.0


def l_b(gamma: float) -> float:
    """Facet trace of the PPT cone edge.  Defined for ``|gamma| <= 2/sqrt(3)``."""
    disc = 4.0 - 3.0 * gamma * gamma
    if disc < 0.0:
        raise ValueError(
            f"cone trace undefined at gamma={gamma} (|gamma| <= 2/sqrt(3) required)"
        )
    return (3.0 * gamma - 4.0 + math.sqrt(disc)) / 9.0


def _facet_point(gamma: float, beta: float) -> FamilyPoint:
    return FamilyPoint(7.0 * beta / 2.0 + 1.0 - gamma, beta, gamma)


# ---------------------------------------------------------------------------
# Classification records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    """Verdict for one point plus the evidence that produced it.

    Stages the pipeline never reached stay ``None`` (e.g. no witness data
    for an NPT point -- the battery was never consulted).
    """

    point: FamilyPoint
    verdict: Verdict
    pyramid_margin: float
    pt_min_eig: float | None = None
    witness_name: str | None = None
    witness_value: float | None = None
    polygon_member: bool | None = None
    detail: str = ""

    def csv_row(self) -> str:
        def num(x: float | None) -> str:
            return "" if x is None else f"{x + 0.0:.12g}"  # + 0.0 drops -0.0

        member = "" if self.polygon_member is None else str(self.polygon_member).lower()
        return ",".join(
            [
                num(self.point.alpha),
                num(self.point.beta),
                num(self.point.gamma),
                self.verdict.value,
                num(self.pt_min_eig),
                self.witness_name or "",
                num(self.witness_value),
                member,
            ]
        )


CSV_HEADER = "alpha,beta,gamma,verdict,pt_min_eig,witness_name,witness_value,polygon_member"


def classify(p: FamilyPoint | tuple[float, float, float]) -> Classification:
    """Run the four-certificate pipeline on one family point."""
    pt = p if isinstance(p, FamilyPoint) else FamilyPoint(*p)
    margin = pyramid_margin(pt)
    if margin < STATE_TOL:
        return Classification(pt, Verdict.NOT_A_STATE, margin)
    pt_eig = pt_min_eigenvalue(pt)
    if pt_eig < PPT_TOL:
        return Classification(pt, Verdict.NPT_ENTANGLED, margin, pt_eig)
    rho = family_state(pt)
    name, value = min(witness_values(rho), key=lambda nv: nv[1])
    if value < DETECTION_TOL:
        return Classification(
            pt,
            Verdict.BOUND_ENTANGLED,
            margin,
            pt_eig,
            witness_name=name,
            witness_value=value,
        )
    member = build_polygon().contains(pt)
    verdict = Verdict.SEPARABLE if member else Verdict.UNDETERMINED
    return Classification(
        pt,
        verdict,
        margin,
        pt_eig,
        witness_name=name,
        witness_value=value,
        polygon_member=member,
    )


def boundary_plane_region(gamma: float, beta: float) -> Classification:
    """Closed-form classification of a point on the positivity facet.

    Equivalent to :func:`classify` at ``alpha = 7 beta / 2 + 1 - gamma``
    but with every decision taken from the two facet curves instead of
    matrices.  Points the curves don't cover (mirrored side below the
    cone) are honestly ``Undetermined``, exactly like the pipeline.
    """
    pt = _facet_point(gamma, beta)
    margin = pyramid_margin(pt)
    if margin < STATE_TOL:
        return Classification(pt, Verdict.NOT_A_STATE, margin)
    ceiling = l_a(gamma)
    cone = l_b(gamma) if abs(gamma) <= _FACET_DOMAIN else None
    if 0.0 <= gamma <= 1.0 and beta <= ceiling:
        return Classification(
            pt,
            Verdict.SEPARABLE,
            margin,
            detail="at or below the facet separability ceiling",
        )
    if cone is not None and beta > cone:
        return Classification(
            pt, Verdict.NPT_ENTANGLED, margin, detail="above the facet cone trace"
        )
    if 0.0 < gamma < 1.0 and cone is not None and ceiling < beta <= cone:
        return Classification(
            pt,
            Verdict.BOUND_ENTANGLED,
            margin,
            detail="strictly between the facet curves",
        )
    return Classification(pt, Verdict.UNDETERMINED, margin)


# ---------------------------------------------------------------------------
# The separable polytope
# ---------------------------------------------------------------------------


def _slice_feasible(alpha: float, beta: float) -> bool:
    p = FamilyPoint(alpha, beta, 0.0)
    if pyramid_margin(p) < 0.0:
        return False
    return pt_min_eigenvalue(p) >= PPT_TOL


@lru_cache(maxsize=1)
def trapezoid_vertices(
    n_rays: int = 96, radial_tol: float = 1e-9
) -> tuple[tuple[float, float], ...]:
    """Corners of the PPT region in the ``gamma = 0`` slice, probed blind.

    Rays from the maximally mixed state are bisected against the combined
    positivity + PPT oracle; maximal collinear runs of boundary hits are
    fitted as edges and consecutive edge lines intersected.  No closed-form
    geometry enters: this is the independent construction the analytic
    slice facts are tested against.
    """
    thetas = np.linspace(0.0, 2.0 * math.pi, n_rays, endpoint=False)
    hits = np.empty((n_rays, 2))
    for i, theta in enumerate(thetas):
        d = np.array([math.cos(theta), math.sin(theta)])
        lo, hi = 0.0, 3.0
        if _slice_feasible(*(hi * d)):
            raise ArithmeticError("probe ray failed to exit the PPT region")
        while hi - lo > radial_tol:
            mid = 0.5 * (lo + hi)
            if _slice_feasible(*(mid * d)):
                lo = mid
            else:
                hi = mid
        hits[i] = 0.5 * (lo + hi) * d

    segs = np.roll(hits, -1, axis=0) - hits
    dirs = segs / np.linalg.norm(segs, axis=1, keepdims=True)
    prev = np.roll(dirs, 1, axis=0)
    turning = np.abs(prev[:, 0] * dirs[:, 1] - prev[:, 1] * dirs[:, 0]) > 5e-5

    corner_idx = [i for i in range(n_rays) if turning[i]]
    if len(corner_idx) < 3:
        raise ArithmeticError("fewer than three edges found in the slice probe")

    lines: list[tuple[np.ndarray, np.ndarray]] = []  # (point, direction)
    for k, start in enumerate(corner_idx):
        stop = corner_idx[(k + 1) % len(corner_idx)]
        run_len = (stop - start) % n_rays
        if run_len < 2:
            continue  # a lone corner-straddling segment, not a real edge
        first = hits[start]
        last = hits[(start + run_len) % n_rays]
        direction = last - first
        lines.append((first, direction / np.linalg.norm(direction)))

    vertices: list[tuple[float, float]] = []
    for k, (p1, d1) in enumerate(lines):
        p2, d2 = lines[(k + 1) % len(lines)]
        det = d1[0] * (-d2[1]) - (-d2[0]) * d1[1]
        if abs(det) < 1e-8:
            raise ArithmeticError("adjacent probe edges are parallel")
        rhs = p2 - p1
        t = (rhs[0] * (-d2[1]) - (-d2[0]) * rhs[1]) / det
        v = p1 + t * d1
        vertices.append((float(v[0]), float(v[1])))

    for v in vertices:
        closeness = min(
            abs(pyramid_margin(FamilyPoint(v[0], v[1], 0.0))),
            abs(pt_min_eigenvalue(FamilyPoint(v[0], v[1], 0.0))),
        )
        if closeness > 1e-6:
            raise ArithmeticError(
                f"probed corner {v} is {closeness:.2e} away from the boundary"
            )
    vertices.sort(key=lambda v: math.atan2(v[1], v[0]))
    return tuple(vertices)


@dataclass(frozen=True)
class PolygonVertex:
    point: FamilyPoint
    provenance: str


@dataclass(frozen=True)
class SeparablePolygon:
    """Convex hull of known-separable extreme points, queried via NNLS."""

    vertices: tuple[PolygonVertex, ...]
    mirrored: bool
    certified: bool

    def vertex_array(self) -> np.ndarray:
        return np.array([v.point.as_tuple() for v in self.vertices])

    def membership_residual(self, p: FamilyPoint | tuple[float, float, float]) -> float:
        if not isinstance(p, FamilyPoint):
            p = FamilyPoint(*p)
        pts = self.vertex_array()
        a = np.vstack([pts.T, np.ones((1, len(self.vertices)))])
        b = np.array([p.alpha, p.beta, p.gamma, 1.0])
        _, rnorm = nnls(a, b)
        return float(rnorm)

    def contains(
        self,
        p: FamilyPoint | tuple[float, float, float],
        tol: float = MEMBERSHIP_TOL,
    ) -> bool:
        return self.membership_residual(p) <= tol


@lru_cache(maxsize=2)
def build_polygon(mirrored: bool = False) -> SeparablePolygon:
    """Assemble the separable polytope (five vertices, built once).

    Four corners come from the ``gamma = 0`` slice probe; the fifth closes
    the facet triangle at ``(0, 0, 1)``, where the separability ceiling
    meets the cone trace.  Every vertex of the default build is verified
    to be a PPT state; the mirrored build skips that check and is marked
    uncertified (reporting only).
    """
    sign = -1.0 if mirrored else 1.0
    verts = [
        PolygonVertex(FamilyPoint(a, b, 0.0), "gamma=0 slice probe")
        for (a, b) in trapezoid_vertices()
    ]
    verts.append(
        PolygonVertex(
            FamilyPoint(0.0, 0.0, sign * 1.0), "facet curve crossing at gamma=1"
        )
    )
    if mirrored:
        verts = [
            PolygonVertex(v.point.mirrored(), v.provenance + " (mirrored)")
            for v in verts
        ]
    certified = not mirrored
    if certified:
        for v in verts:
            margin = pyramid_margin(v.point)
            if margin < -1e-9:
                raise ArithmeticError(
                    f"polytope vertex {v.point.as_tuple()} is not a state"
                )
            eig = pt_min_eigenvalue(v.point)
            if eig < -1e-6:
                raise ArithmeticError(
                    f"polytope vertex {v.point.as_tuple()} is NPT ({eig:.2e})"
                )
    logger.info(
        "separable polytope built: %d vertices, mirrored=%s", len(verts), mirrored
    )
    return SeparablePolygon(
        vertices=tuple(verts), mirrored=mirrored, certified=certified
    )


def mirrored_polygon_report() -> dict:
    """Validity report for the mirrored polytope (never used as evidence)."""
    poly = build_polygon(mirrored=True)
    entries = []
    for v in poly.vertices:
        margin = pyramid_margin(v.point)
        entry: dict = {
            "point": v.point.as_tuple(),
            "provenance": v.provenance,
            "pyramid_margin": margin,
            "is_state": margin >= STATE_TOL,
        }
        if entry["is_state"]:
            eig = pt_min_eigenvalue(v.point)
            entry["pt_min_eig"] = eig
            entry["is_ppt"] = eig >= PPT_TOL
        entries.append(entry)
    return {
        "certified": poly.certified,
        "all_vertices_states": all(e["is_state"] for e in entries),
        "vertices": entries,
    }


# ---------------------------------------------------------------------------
# Scanning
# ---------------------------------------------------------------------------


@dataclass
class ScanResult:
    rows: list[Classification] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        tally: dict[str, int] = {}
        for row in self.rows:
            tally[row.verdict.value] = tally.get(row.verdict.value, 0) + 1
        return tally

    def csv_lines(self) -> Iterator[str]:
        yield CSV_HEADER
        for row in self.rows:
            yield row.csv_row()


def scan(
    points: Iterable[FamilyPoint | tuple[float, float, float]],
    *,
    threads: int = 1,
) -> ScanResult:
    """Classify every point, preserving input order.

    With ``threads > 1`` the battery and polytope caches are warmed first
    so worker threads only read them; the row order (and hence any CSV
    output) is identical regardless of thread count.
    """
    pts = [p if isinstance(p, FamilyPoint) else FamilyPoint(*p) for p in points]
    if not pts:
        raise ValueError("scan called with an empty grid")
    if threads > 1:
        witness_values(family_state(FamilyPoint(0.0, 0.0, 0.0)))
        build_polygon()
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(classify, pts))
    else:
        rows = [classify(p) for p in pts]
    return ScanResult(rows=rows)


def parse_grid(spec: str) -> list[float]:
    """``"lo:hi:step"`` (inclusive ends) or a single value ``"x"``."""
    parts = spec.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ValueError(f"grid spec must be 'lo:hi:step' or 'x', got {spec!r}")
    lo, hi, step = (float(v) for v in parts)
    if step <= 0.0:
        raise ValueError(f"grid step must be positive, got {step}")
    if hi < lo:
        raise ValueError(f"grid range is empty: {spec!r}")
    n = int(round((hi - lo) / step))
    if abs(lo + n * step - hi) > 1e-9 * max(1.0, abs(hi)):
        n = int(math.floor((hi - lo) / step + 1e-12))
    return [lo + k * step for k in range(n + 1)]


def grid_points(
    alpha_spec: str, beta_spec: str, gamma_spec: str
) -> list[FamilyPoint]:
    """Row-major grid: alpha outermost, gamma innermost."""
    return [
        FamilyPoint(a, b, g)
        for a in parse_grid(alpha_spec)
        for b in parse_grid(beta_spec)
        for g in parse_grid(gamma_spec)
    ]


def plane_grid_points(gamma_spec: str, beta_spec: str) -> list[FamilyPoint]:
    """Facet grid: gamma outermost, beta innermost, alpha pinned by the facet."""
    return [
        _facet_point(g, b)
        for g in parse_grid(gamma_spec)
        for b in parse_grid(beta_spec)
    ]
