"""Entanglement witnesses from lines between a PPT state and the center.

Given a PPT entangled family member ``rho``, the segment

    rho_l = l * rho + (1 - l) * 1/9,   l in [0, 1]

runs from the maximally mixed state to ``rho``.  For each ``l`` the
operator

    C_l = rho_l - rho - <rho_l, rho_l - rho> * 1

is orthogonal to ``rho_l`` and strictly negative on ``rho`` whenever
``rho_l != rho``, so it separates the two ends of the segment.  It becomes
an entanglement witness once it is provably non-negative on every product
state; the sufficient criterion used here works coefficient-wise in the
two-sided operator basis of :mod:`.weyl`:

    C is product-safe if  t[0,0] > 0  and  max |t[n,m]| <= t[0,0] / 2
                          over (n, m) != (0, 0).

(Equivalently: C rescales to ``a * (2 * 1 + sum c[n,m] B[n,m])`` with every
``|c[n,m]| <= 1`` and an identity surplus ``c[0,0]`` in ``[0, 1]``; on a
product state the identity term dominates the other eight coefficients by
the Cauchy-Schwarz bound.  The criterion is sufficient, not necessary --
e.g. an entangled-basis projector is positive yet fails it.)

Along a fixed line, feasibility of ``C_l`` is monotone in ``l`` (the
identity coefficient grows affinely while the off-identity table is
``l``-independent up to a common positive factor), so the smallest
witness-yielding parameter ``lambda_min`` is found by bisection and has a
closed form used as a cross-check.  The ``l -> 1`` limit of
``C_l / (l (1 - l))`` is the tangent-plane witness ``purity * 1 - rho``.

Geometrically each witness is an affine functional of the family
coordinates, i.e. a plane ``alpha = b * beta + g * gamma + c``;
:func:`witness_plane` extracts the normalized coefficients.  The deployed
battery (:func:`deployed_witnesses`) carries three constructed witnesses
-- ``Pl1`` (tangent at the flat face), ``Pl2`` (from the deepest
detectable start), ``Pl3`` (from where ``Pl1`` meets the PPT cone edge) --
plus their three mirror images under coefficient conjugation, which cover
the region with negated third coordinate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .family import (
    FamilyPoint,
    family_state,
    is_ppt,
    plane_point,
    pt_min_eigenvalue,
    pyramid_margin,
)
from .qmat import Array, hs_inner
from .weyl import WeylCoefficients, weyl_tensor_decompose, weyl_tensor_reconstruct

__all__ = [
    "DEFAULT_SEED",
    "FEASIBLE",
    "INFEASIBLE",
    "NOT_IN_SPAN",
    "DeployedWitness",
    "LineSpec",
    "PlaneCoefficients",
    "WitnessCandidate",
    "c_lambda",
    "c_limit",
    "deployed_witnesses",
    "lambda_min",
    "lambda_min_closed_form",
    "lemma_feasible",
    "line_state",
    "min_product_expectation",
    "optimal_plane_start",
    "pl1_cone_start",
    "plane_tip_start",
    "product_state_vectors",
    "random_product_state",
    "witness_candidate",
    "witness_plane",
]

logger = logging.getLogger(__name__)

#: Default RNG seed for anything sampled in this package.
DEFAULT_SEED = 20101

#: Operators further than this (Frobenius) from the basis span are rejected.
SPAN_TOL = 1e-10

#: Relative slack in the coefficient comparison of the product-safety test.
FEASIBLE_SLACK = 1e-12

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
NOT_IN_SPAN = "not-in-span"

_MAX_ENTANGLED_PURITY_GAP = 1.0 / 9.0  # purity of the maximally mixed state


@dataclass(frozen=True)
class WitnessCandidate:
    """An operator submitted to the product-safety criterion.

    ``status`` is one of :data:`FEASIBLE`, :data:`INFEASIBLE`,
    :data:`NOT_IN_SPAN`; ``a_interval`` is the (closed) range of admissible
    normalization constants when feasible, else ``None``.
    """

    matrix: Array
    coeffs: WeylCoefficients
    status: str
    a_interval: tuple[float, float] | None

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def _analyze_coefficients(
    coeffs: WeylCoefficients,
) -> tuple[str, tuple[float, float] | None]:
    t00 = coeffs.identity_coefficient()
    if abs(t00.imag) > 1e-9 * max(1.0, abs(t00)):
        raise ValueError(
            f"identity coefficient is not real ({t00!r}); "
            "the product-safety test needs a Hermitian operator"
        )
    t00_re = t00.real
    t_max = coeffs.max_off_identity()
    if t00_re <= 0.0:
        return INFEASIBLE, None
    if t_max > (t00_re / 2.0) * (1.0 + FEASIBLE_SLACK):
        return INFEASIBLE, None
    return FEASIBLE, (max(t_max, t00_re / 3.0), t00_re / 2.0)


def witness_candidate(matrix: Array) -> WitnessCandidate:
    """Decompose ``matrix`` and run the product-safety criterion on it.

    Scaling the input by any positive factor scales the coefficient table
    and the ``a_interval`` by the same factor and leaves the verdict
    unchanged.
    """
    coeffs = weyl_tensor_decompose(np.asarray(matrix, dtype=complex))
    scale = max(1.0, float(np.linalg.norm(matrix)))
    if coeffs.residual > SPAN_TOL * scale:
        return WitnessCandidate(
            matrix=np.asarray(matrix, dtype=complex),
            coeffs=coeffs,
            status=NOT_IN_SPAN,
            a_interval=None,
        )
    status, interval = _analyze_coefficients(coeffs)
    return WitnessCandidate(
        matrix=np.asarray(matrix, dtype=complex),
        coeffs=coeffs,
        status=status,
        a_interval=interval,
    )


def lemma_feasible(matrix: Array) -> tuple[bool, tuple[float, float] | None]:
    """Product-safety verdict plus admissible normalization interval."""
    cand = witness_candidate(matrix)
    return cand.feasible, cand.a_interval


def _candidate_from_coefficients(coeffs: WeylCoefficients) -> WitnessCandidate:
    matrix = weyl_tensor_reconstruct(coeffs)
    status, interval = _analyze_coefficients(coeffs)
    return WitnessCandidate(
        matrix=matrix, coeffs=coeffs, status=status, a_interval=interval
    )


# ---------------------------------------------------------------------------
# The line construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LineSpec:
    """A point on the segment from the maximally mixed state to ``start``.

    Construction validates that ``start`` is a PPT state (the construction
    is designed to hunt entanglement the partial transpose cannot see) and
    that the parameter lies in ``[0, 1]``.
    """

    start: FamilyPoint
    lam: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"line parameter must lie in [0, 1], got {self.lam}")
        result = is_ppt(self.start)
        if not result.is_ppt:
            raise ValueError(
                f"line start {self.start.as_tuple()} is NPT (smallest partial-"
                f"transpose eigenvalue {result.pt_min_eigenvalue:.3e}); "
                "use a PPT start"
            )


def _mixed_with_center(rho: Array, lam: float) -> Array:
    return lam * rho + (1.0 - lam) * np.eye(9, dtype=complex) / 9.0


def line_state(spec: LineSpec) -> Array:
    """The interpolated state ``l * rho + (1 - l) * 1/9``."""
    return _mixed_with_center(family_state(spec.start), spec.lam)


def _c_lambda_matrix(rho: Array, lam: float) -> Array:
    rho_l = _mixed_with_center(rho, lam)
    diff = rho_l - rho
    shift = hs_inner(rho_l, diff).real
    return diff - shift * np.eye(9, dtype=complex)


def c_lambda(spec: LineSpec) -> WitnessCandidate:
    """The separating operator at ``spec.lam``, with its safety verdict.

    By construction ``Tr(C_l rho_l) = 0`` and ``Tr(C_l rho)`` equals minus
    the squared distance between the line point and the start.  At the far
    endpoint the operator vanishes identically, so ``lam == 1`` is rejected;
    use :func:`c_limit` for the rescaled endpoint operator.
    """
    if spec.lam == 1.0:
        raise ValueError(
            "the separating operator vanishes at the endpoint lam=1; "
            "call c_limit(start) for the rescaled limit instead"
        )
    return witness_candidate(_c_lambda_matrix(family_state(spec.start), spec.lam))


def c_limit(start: FamilyPoint) -> WitnessCandidate:
    """Rescaled endpoint limit of the line construction: ``purity*1 - rho``.

    Tangent to the line at its far end: ``Tr(C rho) = 0`` exactly.
    """
    result = is_ppt(start)
    if not result.is_ppt:
        raise ValueError(
            f"start {start.as_tuple()} is NPT "
            f"({result.pt_min_eigenvalue:.3e}); use a PPT start"
        )
    rho = family_state(start)
    purity = hs_inner(rho, rho).real
    return witness_candidate(purity * np.eye(9, dtype=complex) - rho)


def lambda_min_closed_form(start: FamilyPoint) -> float | None:
    """Smallest feasible line parameter, via the coefficient algebra.

    Along the line the identity coefficient of ``C_l / (1 - l)`` is
    ``l * (purity - 1/9)`` while every off-identity coefficient is the
    negated table of ``rho``; the safety threshold is therefore crossed at
    ``l = 2 * max|t| / (purity - 1/9)``.  Returns ``None`` when this
    exceeds one (no point of the segment yields a witness).
    """
    rho = family_state(start)
    slope = hs_inner(rho, rho).real - _MAX_ENTANGLED_PURITY_GAP
    if slope <= 1e-15:
        return None
    t_max = weyl_tensor_decompose(rho).max_off_identity()
    lam = 2.0 * t_max / slope
    if lam > 1.0 + 1e-9:
        return None
    return min(lam, 1.0)


def lambda_min(start: FamilyPoint, tol: float = 1e-9) -> float | None:
    """Smallest ``l`` in ``[0, 1]`` whose line operator is product-safe.

    Bisection against the actual candidate pipeline (matrix build plus
    decomposition each probe), validated two ways: spot checks that
    feasibility is monotone across the final bracket, and agreement with
    :func:`lambda_min_closed_form` to within the bisection tolerance.
    Returns ``None`` when even the endpoint limit is unsafe.  Raises
    ``ValueError`` for a non-positive tolerance or an NPT start.
    """
    if tol <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    result = is_ppt(start)
    if not result.is_ppt:
        raise ValueError(
            f"start {start.as_tuple()} is NPT "
            f"({result.pt_min_eigenvalue:.3e}); use a PPT start"
        )
    rho = family_state(start)

    def feasible_at(lam: float) -> bool:
        if lam >= 1.0:
            purity = hs_inner(rho, rho).real
            mat = purity * np.eye(9, dtype=complex) - rho
        else:
            mat = _c_lambda_matrix(rho, lam)
        return witness_candidate(mat).feasible

    if not feasible_at(1.0):
        return None
    lo, hi = 0.0, 1.0  # lo is always infeasible: C_0 has zero identity part
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible_at(mid):
            hi = mid
        else:
            lo = mid

    # Monotonicity spot checks on both sides of the bracket.
    if not feasible_at(0.5 * (hi + 1.0)):
        raise ArithmeticError(
            "feasibility is not monotone along the line (upper spot check)"
        )
    if lo > 0.0 and feasible_at(0.5 * lo):
        raise ArithmeticError(
            "feasibility is not monotone along the line (lower spot check)"
        )
    closed = lambda_min_closed_form(start)
    if closed is not None and abs(hi - closed) > max(10.0 * tol, 1e-8):
        raise ArithmeticError(
            f"bisection ({hi!r}) disagrees with the closed form ({closed!r})"
        )
    return hi


# ---------------------------------------------------------------------------
# Distinguished starts
# ---------------------------------------------------------------------------

#: Transversal coordinate of the start whose line detects entanglement the
#: earliest (smallest lambda_min over the whole plane patch): the unique
#: positive root of  e^2 + 25 e - 3 = 0.
OPTIMAL_EPSILON = (-25.0 + 7.0 * math.sqrt(13.0)) / 2.0

#: Third family coordinate of that start.  Two independent tangency
#: conditions pin it: all eight off-identity coefficient magnitudes of the
#: start coincide there, and the start sits on the PPT cone boundary.  Both
#: reduce to the same quadratic in OPTIMAL_EPSILON, whose root satisfies
#: gamma = sqrt(epsilon).
OPTIMAL_GAMMA = math.sqrt(OPTIMAL_EPSILON)

#: lambda_min at the optimal start, in closed form.
OPTIMAL_LAMBDA = (3.0 + math.sqrt(13.0)) / 8.0


def optimal_plane_start() -> FamilyPoint:
    """The plane-patch start minimizing ``lambda_min``."""
    return plane_point(OPTIMAL_EPSILON, OPTIMAL_GAMMA)


def plane_tip_start() -> FamilyPoint:
    """Corner of the plane patch where the line barely succeeds.

    At this start the endpoint witness is exactly marginal
    (``lambda_min == 1``): all eight off-identity coefficient magnitudes
    equal half the identity coefficient.
    """
    return plane_point(-0.25, 0.25)


def pl1_cone_start(
    gamma: float = 2.0 / 7.0,
    *,
    beta_bracket: tuple[float, float] = (-0.3, 0.1),
    tol: float = 1e-12,
) -> FamilyPoint:
    """Where the ``Pl1`` witness plane meets the PPT cone at fixed ``gamma``.

    Walks the plane ``alpha = (4 beta + 2 (1 - gamma)) / 5`` in ``beta``,
    brackets the sign change of the smallest partial-transpose eigenvalue
    among valid states, and bisects it to ``tol``.  The returned point lies
    on the PPT side of the crossing to within the oracle's tolerance.
    """

    def on_plane(beta: float) -> FamilyPoint:
        return FamilyPoint(
            (4.0 * beta + 2.0 * (1.0 - gamma)) / 5.0, beta, gamma
        )

    lo = hi = None
    prev: tuple[float, float] | None = None
    for beta in np.linspace(beta_bracket[0], beta_bracket[1], 41):
        p = on_plane(float(beta))
        if pyramid_margin(p) < 0.0:
            prev = None
            continue
        eig = pt_min_eigenvalue(p)
        if prev is not None and prev[1] >= 0.0 > eig:
            lo, hi = prev[0], float(beta)
            break
        prev = (float(beta), eig)
    if lo is None or hi is None:
        raise ValueError(
            f"no PPT-to-NPT crossing on the plane at gamma={gamma} within "
            f"beta bracket {beta_bracket}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pt_min_eigenvalue(on_plane(mid)) >= 0.0:
            lo = mid
        else:
            hi = mid
    return on_plane(0.5 * (lo + hi))


# ---------------------------------------------------------------------------
# Witness planes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlaneCoefficients:
    """Normalized plane ``alpha = b * beta + g * gamma + c`` of a witness.

    ``trace_scale`` is the factor ``k`` in ``Tr(W rho_p) = k * residual(p)``
    -- negative for the deployed witnesses, so detected points have
    *positive* residual (they lie above the plane in ``alpha``).
    """

    beta_coeff: float
    gamma_coeff: float
    offset: float
    trace_scale: float

    def residual(self, p: FamilyPoint | tuple[float, float, float]) -> float:
        if not isinstance(p, FamilyPoint):
            p = FamilyPoint(*p)
        return p.alpha - (
            self.beta_coeff * p.beta
            + self.gamma_coeff * p.gamma
            + self.offset
        )

    def as_dict(self) -> dict[str, float]:
        return {
            "beta_coeff": self.beta_coeff,
            "gamma_coeff": self.gamma_coeff,
            "offset": self.offset,
            "trace_scale": self.trace_scale,
        }


def witness_plane(w: Array | WitnessCandidate) -> PlaneCoefficients:
    """Extract the plane a witness cuts through the family coordinates.

    ``Tr(W rho_p)`` is affine in ``(alpha, beta, gamma)``, so four probe
    evaluations determine it; the result is normalized to unit ``alpha``
    coefficient.  Raises if the functional does not depend on ``alpha`` or
    if the orientation convention (negative residual at the origin) fails.
    """
    mat = w.matrix if isinstance(w, WitnessCandidate) else np.asarray(w, dtype=complex)

    def f(alpha: float, beta: float, gamma: float) -> float:
        return hs_inner(mat, family_state((alpha, beta, gamma))).real

    f0 = f(0.0, 0.0, 0.0)
    fa = f(1.0, 0.0, 0.0) - f0
    fb = f(0.0, 1.0, 0.0) - f0
    fg = f(0.0, 0.0, 1.0) - f0
    if abs(fa) < 1e-13 * max(1.0, float(np.linalg.norm(mat))):
        raise ValueError("witness functional does not depend on alpha")
    plane = PlaneCoefficients(
        beta_coeff=-fb / fa,
        gamma_coeff=-fg / fa,
        offset=-f0 / fa,
        trace_scale=fa,
    )
    if plane.residual((0.0, 0.0, 0.0)) >= 0.0:
        raise ValueError(
            "witness plane violates the orientation convention "
            "(residual at the origin must be negative)"
        )
    return plane


# ---------------------------------------------------------------------------
# The deployed battery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeployedWitness:
    name: str
    candidate: WitnessCandidate
    plane: PlaneCoefficients


#: Reference plane coefficients used as a regression pin at build time;
#: independently re-derivable from the tangency identities in the tests.
_REFERENCE_PLANES = {
    "Pl1": (0.8, -0.4, 0.4),
    "Pl2": (0.579716618, -0.327084851, 0.351048137),
    "Pl3": (0.377892215, -0.198722555, 0.306198270),
}

_BUILD_CHECK_SAMPLES = 2000


def _mirror(name: str, base: DeployedWitness) -> DeployedWitness:
    cand = _candidate_from_coefficients(base.candidate.coeffs.conjugated())
    if not cand.feasible:
        raise ArithmeticError(f"mirror of {base.name} lost product safety")
    return DeployedWitness(name=name, candidate=cand, plane=witness_plane(cand))


@lru_cache(maxsize=1)
def deployed_witnesses() -> tuple[DeployedWitness, ...]:
    """The six-witness battery used by the classifier, built once.

    Three constructions -- the flat-face tangent ``Pl1``, the deepest-start
    line witness ``Pl2``, the cone-edge line witness ``Pl3`` -- plus their
    coefficient-conjugated mirrors ``Pl1m``/``Pl2m``/``Pl3m``.  Every
    member is re-validated at build time: the safety criterion must hold
    and a seeded product-state sweep must stay non-negative.
    """
    tip = c_limit(plane_tip_start())

    start2 = optimal_plane_start()
    lam2 = lambda_min(start2, tol=1e-10)
    if lam2 is None:
        raise ArithmeticError("the optimal start unexpectedly yields no witness")
    deep = c_lambda(LineSpec(start2, lam2))

    start3 = pl1_cone_start()
    lam3 = lambda_min(start3, tol=1e-10)
    if lam3 is None:
        raise ArithmeticError("the cone-edge start unexpectedly yields no witness")
    edge = c_lambda(LineSpec(start3, lam3))

    battery: list[DeployedWitness] = []
    for name, cand in (("Pl1", tip), ("Pl2", deep), ("Pl3", edge)):
        if not cand.feasible:
            raise ArithmeticError(f"witness {name} failed the safety criterion")
        base = DeployedWitness(name=name, candidate=cand, plane=witness_plane(cand))
        battery.append(base)
        battery.append(_mirror(name + "m", base))

    for w in battery:
        worst = min_product_expectation(
            w.candidate.matrix, count=_BUILD_CHECK_SAMPLES, seed=DEFAULT_SEED
        )
        if worst < -1e-10:
            raise ArithmeticError(
                f"witness {w.name} went negative on a product state ({worst:.3e})"
            )

    for w in battery[::2]:  # the three unmirrored members
        ref = _REFERENCE_PLANES[w.name]
        drift = max(
            abs(w.plane.beta_coeff - ref[0]),
            abs(w.plane.gamma_coeff - ref[1]),
            abs(w.plane.offset - ref[2]),
        )
        if drift > 1e-5:
            logger.warning(
                "constructed plane %s drifted %.2e from its regression pin",
                w.name,
                drift,
            )
        logger.info(
            "witness %s: alpha = %.9f beta + %.9f gamma + %.9f (k=%.6f)",
            w.name,
            w.plane.beta_coeff,
            w.plane.gamma_coeff,
            w.plane.offset,
            w.plane.trace_scale,
        )
    return tuple(battery)


def witness_values(rho: Array) -> list[tuple[str, float]]:
    """Expectation of every deployed witness on ``rho`` (detection: < 0)."""
    return [
        (w.name, hs_inner(w.candidate.matrix, rho).real)
        for w in deployed_witnesses()
    ]


def plane_residual(name: str, p: FamilyPoint) -> float:
    """Signed distance of ``p`` from the named witness plane.

    Positive residual means the point lies on the detected side of the
    plane (``alpha`` above the plane); the witness expectation on the
    corresponding family state is ``trace_scale`` times this residual,
    and ``trace_scale`` is negative.
    """
    for w in deployed_witnesses():
        if w.name == name:
            return w.plane.residual(p)
    known = ", ".join(w.name for w in deployed_witnesses())
    raise ValueError(f"unknown witness name {name!r} (known: {known})")


# ---------------------------------------------------------------------------
# Product-state sampling
# ---------------------------------------------------------------------------


def product_state_vectors(
    count: int, seed: int | np.random.Generator = DEFAULT_SEED
) -> Array:
    """``count`` Haar-random product vectors on C^3 (x) C^3, one per row."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    raw = rng.standard_normal((count, 2, 3)) + 1j * rng.standard_normal((count, 2, 3))
    raw /= np.linalg.norm(raw, axis=2, keepdims=True)
    return np.einsum("ni,nj->nij", raw[:, 0, :], raw[:, 1, :]).reshape(count, 9)


def random_product_state(seed: int | np.random.Generator = DEFAULT_SEED) -> Array:
    """One Haar-random product state as a 9x9 projector."""
    v = product_state_vectors(1, seed)[0]
    return np.outer(v, v.conj())


def min_product_expectation(
    w: Array, count: int = 100_000, seed: int = DEFAULT_SEED
) -> float:
    """Smallest ``<v| W |v>`` over ``count`` seeded product vectors."""
    mat = np.asarray(w, dtype=complex)
    rng = np.random.default_rng(seed)
    worst = math.inf
    chunk = 20_000
    remaining = count
    while remaining > 0:
        take = min(chunk, remaining)
        v = product_state_vectors(take, rng)
        vals = np.einsum("ni,ij,nj->n", v.conj(), mat, v).real
        worst = min(worst, float(vals.min()))
        remaining -= take
    return worst
