"""The three-parameter simplex family of two-qutrit Bell-diagonal states.

A point ``(alpha, beta, gamma)`` labels the mixture

    rho = w * 1/9 * 9 + alpha * P[0,0]
        + (beta / 2) * (P[1,0] + P[2,0])
        + (gamma / 3) * (P[0,1] + P[1,1] + P[2,1])

with ``w = (1 - alpha - beta - gamma) / 9`` so the trace is one.  The
``P[n, m]`` are the nine entangled-basis projectors from :mod:`.weyl`, so
every family member is Bell-diagonal and its spectrum is available in
closed form (:func:`bell_spectrum`).  Positivity of that spectrum carves a
four-facet region out of parameter space; :func:`pyramid_margin` returns
the signed distance-like slack to the nearest facet.

Closed-form partial-transpose data is available too: the partial transpose
splits into three 3x3 blocks with a shared spectrum, giving three
eigenvalues each of multiplicity three (:func:`pt_block_eigenvalues`).
These are diagnostics; the authoritative PPT decision in this package is
always the numeric eigensolver on the full partial transpose.

The module also carries two distinguished one- and two-parameter slices:
the classic Horodecki line of states (:func:`horodecki_point`, parameter
``b`` in ``[0, 5]``) and the boundary-plane patch through it
(:func:`plane_point`), both of which sit exactly on the positivity facet
``alpha = 7 beta / 2 + 1 - gamma``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .qmat import Array, hermitian_eigenvalues, partial_transpose
from .verdicts import Verdict
from .weyl import bell_projector

logger = logging.getLogger(__name__)

__all__ = [
    "PPT_TOL",
    "STATE_TOL",
    "FamilyPoint",
    "PptResult",
    "bell_spectrum",
    "family_state",
    "horodecki_b_from_gamma",
    "horodecki_classification",
    "horodecki_gamma_from_b",
    "horodecki_point",
    "is_ppt",
    "plane_point",
    "pt_block_eigenvalues",
    "pt_min_eigenvalue",
    "pyramid_margin",
    "pyramid_slacks",
]

#: A point is accepted as a state when the positivity margin clears this.
STATE_TOL = -1e-12

#: A state is PPT when the smallest partial-transpose eigenvalue clears this.
PPT_TOL = -1e-10


@dataclass(frozen=True)
class FamilyPoint:
    """Coordinates of one member of the three-parameter family."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def mirrored(self) -> "FamilyPoint":
        """Same point with the third coordinate negated."""
        return FamilyPoint(self.alpha, self.beta, -self.gamma)


def _point(p: FamilyPoint | tuple[float, float, float]) -> FamilyPoint:
    if isinstance(p, FamilyPoint):
        return p
    return FamilyPoint(*p)


@lru_cache(maxsize=1)
def _building_blocks() -> tuple[Array, Array, Array, Array]:
    ident = np.eye(9, dtype=complex)
    block_a = bell_projector(0, 0)
    block_b = 0.5 * (bell_projector(1, 0) + bell_projector(2, 0))
    block_c = (
        bell_projector(0, 1) + bell_projector(1, 1) + bell_projector(2, 1)
    ) / 3.0
    for m in (ident, block_a, block_b, block_c):
        m.setflags(write=False)
    return ident, block_a, block_b, block_c


def family_state(p: FamilyPoint | tuple[float, float, float]) -> Array:
    """Density-like matrix of the family member at ``p``.

    The matrix always has unit trace; it is a physical state only when
    :func:`pyramid_margin` is non-negative.  Callers probing outside the
    positivity region (witness scans do) still get the matrix.
    """
    pt = _point(p)
    ident, block_a, block_b, block_c = _building_blocks()
    w = (1.0 - pt.alpha - pt.beta - pt.gamma) / 9.0
    return (
        w * ident
        + pt.alpha * block_a
        + pt.beta * block_b
        + pt.gamma * block_c
    )


class BellSpectrum(NamedTuple):
    """Eigenvalues of a family member, keyed by entangled-basis index."""

    weights: dict[tuple[int, int], float]

    def min_weight(self) -> float:
        return min(self.weights.values())

    def sorted_values(self) -> list[float]:
        return sorted(self.weights.values())


def bell_spectrum(p: FamilyPoint | tuple[float, float, float]) -> BellSpectrum:
    """Closed-form spectrum: the mixture is diagonal in the entangled basis.

    Index ``(0, 0)`` carries ``w + alpha``; ``(1, 0)`` and ``(2, 0)`` carry
    ``w + beta/2``; the three ``(n, 1)`` carry ``w + gamma/3``; the three
    ``(n, 2)`` carry the bare ``w``.
    """
    pt = _point(p)
    w = (1.0 - pt.alpha - pt.beta - pt.gamma) / 9.0
    weights: dict[tuple[int, int], float] = {}
    for n in range(3):
        for m in range(3):
            if (n, m) == (0, 0):
                weights[(n, m)] = w + pt.alpha
            elif m == 0:
                weights[(n, m)] = w + pt.beta / 2.0
            elif m == 1:
                weights[(n, m)] = w + pt.gamma / 3.0
            else:
                weights[(n, m)] = w
    return BellSpectrum(weights)


def pyramid_slacks(
    p: FamilyPoint | tuple[float, float, float],
) -> tuple[float, float, float, float]:
    """Slack of the four positivity facets, each vanishing on its facet.

    The four values are positive rescalings of the distinct entangled-basis
    weights (by 9, 9, 9 and 9/8 respectively), so their joint sign pattern
    matches the spectrum's exactly.
    """
    pt = _point(p)
    a, b, g = pt.alpha, pt.beta, pt.gamma
    s1 = 7.0 * b / 2.0 + 1.0 - g - a
    s2 = -b + 1.0 - g - a
    s3 = -b + 1.0 + 2.0 * g - a
    s4 = a - (b / 8.0 - 1.0 / 8.0 + g / 8.0)
    return (s1, s2, s3, s4)


def pyramid_margin(p: FamilyPoint | tuple[float, float, float]) -> float:
    """Smallest facet slack; non-negative iff ``p`` labels a state.

    Zero on the boundary of the positivity region, ``1/8`` at the origin
    (the maximally mixed state).
    """
    return min(pyramid_slacks(p))


def pt_min_eigenvalue(p: FamilyPoint | tuple[float, float, float]) -> float:
    """Numeric oracle: smallest eigenvalue of the partial transpose."""
    rho = family_state(p)
    return float(hermitian_eigenvalues(partial_transpose(rho, 3, 3))[0])


def pt_block_eigenvalues(
    p: FamilyPoint | tuple[float, float, float],
) -> tuple[float, float, float]:
    """Closed-form partial-transpose spectrum ``(e0, e_minus, e_plus)``.

    The partial transpose is block-diagonal in the three index sectors
    ``(j + k) mod 3`` and every sector carries the same 3x3 spectrum, so
    each returned value has multiplicity three.  With ``y = alpha - beta/2``
    and ``w`` the uniform weight:

        e0      = w + (alpha + beta) / 3
        e_pm    = w + gamma/6 +- sqrt(gamma^2/36 + y^2/9)

    Diagnostic companion to :func:`pt_min_eigenvalue`; the numeric oracle
    stays authoritative for classification.
    """
    pt = _point(p)
    a, b, g = pt.alpha, pt.beta, pt.gamma
    w = (1.0 - a - b - g) / 9.0
    y = a - b / 2.0
    e0 = w + (a + b) / 3.0
    half = g / 6.0
    root = math.sqrt(g * g / 36.0 + y * y / 9.0)
    return (e0, w + half - root, w + half + root)


def cone_surface_values(
    p: FamilyPoint | tuple[float, float, float],
) -> dict[str, float]:
    """Signed slacks of the three algebraic surfaces bounding the PPT cone.

    The surfaces are the flat face ``alpha = gamma/2 - beta - 1/2``, the
    ceiling ``alpha = 1 - beta + gamma/2`` and the two sheets
    ``alpha = (-2 + 11 beta - gamma)/16 +- (3/16) sqrt(disc)`` with
    ``disc = 9 b^2 - 6 b g - 7 g^2 - 12 b + 4 g + 4``.  The PPT region of
    the family is exactly the set where ``flat``, ``ceiling``, ``disc``,
    ``lower_sheet`` and ``upper_sheet`` are all non-negative (the sheet
    slacks are ``nan`` when ``disc < 0``); see
    :func:`cone_characterization` for the sampled cross-check against the
    eigenvalue oracle.

    The widely reproduced rendering of these surfaces orients the flat
    face the other way, which would exclude the maximally mixed state;
    the orientation used here is the one the oracle confirms.
    """
    pt = _point(p)
    a, b, g = pt.alpha, pt.beta, pt.gamma
    disc = 9.0 * b * b - 6.0 * b * g - 7.0 * g * g - 12.0 * b + 4.0 * g + 4.0
    center = (-2.0 + 11.0 * b - g) / 16.0
    if disc >= 0.0:
        half_width = 3.0 * math.sqrt(disc) / 16.0
        lower = a - (center - half_width)
        upper = (center + half_width) - a
    else:
        lower = math.nan
        upper = math.nan
    return {
        "flat": a - (g / 2.0 - b - 0.5),
        "ceiling": (1.0 - b + g / 2.0) - a,
        "disc": disc,
        "lower_sheet": lower,
        "upper_sheet": upper,
    }


def cone_characterization(
    samples: int = 4000, seed: int = 7321, *, boundary_band: float = 1e-9
) -> dict[str, int]:
    """Sampled comparison of the surface description with the PT oracle.

    Draws points from the box ``[-0.5, 1.5] x [-1, 1] x [-1, 1.2]``,
    evaluates both the closed-form membership of
    :func:`cone_surface_values` and the eigenvalue oracle, and counts the
    outcomes.  Points whose oracle eigenvalue sits within
    ``boundary_band`` of zero are skipped (either call could legitimately
    tie-break them differently).
    """
    rng = np.random.default_rng(seed)
    pts = rng.uniform((-0.5, -1.0, -1.0), (1.5, 1.0, 1.2), size=(samples, 3))
    agree = disagree = skipped = 0
    for a, b, g in pts:
        smallest = pt_min_eigenvalue(FamilyPoint(a, b, g))
        if abs(smallest) <= boundary_band:
            skipped += 1
            continue
        vals = cone_surface_values(FamilyPoint(a, b, g))
        analytic = (
            vals["flat"] >= 0.0
            and vals["ceiling"] >= 0.0
            and vals["disc"] >= 0.0
            and vals["lower_sheet"] >= 0.0
            and vals["upper_sheet"] >= 0.0
        )
        if analytic == (smallest >= 0.0):
            agree += 1
        else:
            disagree += 1
    return {"agree": agree, "disagree": disagree, "skipped": skipped}


class PptResult(NamedTuple):
    """Outcome of the PPT test with its numeric evidence."""

    is_ppt: bool
    pt_min_eigenvalue: float


def is_ppt(
    p: FamilyPoint | tuple[float, float, float], *, tol: float = PPT_TOL
) -> PptResult:
    """PPT decision for a family *state* (raises if ``p`` is not a state).

    The numeric eigenvalue oracle decides; the closed-form block spectrum
    is logged at DEBUG level for cross-reference.
    """
    pt = _point(p)
    margin = pyramid_margin(pt)
    if margin < STATE_TOL:
        raise ValueError(
            f"point {pt.as_tuple()} is not a state (positivity margin "
            f"{margin:.3e})"
        )
    smallest = pt_min_eigenvalue(pt)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(
            "is_ppt%s: oracle %.3e, block spectrum %s",
            pt.as_tuple(),
            smallest,
            pt_block_eigenvalues(pt),
        )
    return PptResult(smallest >= tol, smallest)


# ---------------------------------------------------------------------------
# Distinguished slices
# ---------------------------------------------------------------------------


def horodecki_gamma_from_b(b: float) -> float:
    """Line parameter ``b in [0, 5]`` to the third family coordinate."""
    return (5.0 - 2.0 * b) / 7.0


def horodecki_b_from_gamma(gamma: float) -> float:
    return (5.0 - 7.0 * gamma) / 2.0


def horodecki_point(b: float) -> FamilyPoint:
    """Family coordinates of the Horodecki one-parameter state.

    The image lies exactly on the positivity facet
    ``alpha = 7 beta / 2 + 1 - gamma`` for every ``b`` in ``[0, 5]``.
    """
    if not 0.0 <= b <= 5.0:
        raise ValueError(f"line parameter must lie in [0, 5], got {b}")
    return FamilyPoint((6.0 - b) / 21.0, -2.0 * b / 21.0, (5.0 - 2.0 * b) / 7.0)


def horodecki_classification(b: float) -> Verdict:
    """Published separability classification along the Horodecki line."""
    if not 0.0 <= b <= 5.0:
        raise ValueError(f"line parameter must lie in [0, 5], got {b}")
    if b < 1.0:
        return Verdict.NPT_ENTANGLED
    if b < 2.0:
        return Verdict.BOUND_ENTANGLED
    if b <= 3.0:
        return Verdict.SEPARABLE
    if b <= 4.0:
        return Verdict.BOUND_ENTANGLED
    return Verdict.NPT_ENTANGLED


def plane_point(epsilon: float, gamma: float) -> FamilyPoint:
    """Two-parameter patch of the positivity facet through the line above.

    ``plane_point(0, gamma)`` reproduces the Horodecki line; the extra
    coordinate ``epsilon`` moves along the facet transversally to it.
    """
    alpha = (1.0 + gamma + epsilon) / 6.0
    beta = (-5.0 + 7.0 * gamma + epsilon) / 21.0
    return FamilyPoint(alpha, beta, gamma)
