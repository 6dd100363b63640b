"""Shift-and-phase unitaries and the maximally-entangled basis they generate.

For dimension ``d`` the operators ``W(n, m) = sum_k w^(kn) |k><k+m|`` (with
``w = exp(2 pi i / d)`` and the ket index mod ``d``) form a unitary operator
basis: they are pairwise orthogonal in the Hilbert-Schmidt inner product
with norm ``sqrt(d)``.  Applying ``W(n, m) (x) 1`` to the maximally
entangled state yields ``d^2`` orthonormal entangled vectors; their
projectors span the simplex of states this package studies.

The two-sided basis used for decompositions is ``W(n, m) (x) W(-n, m)``,
which is closed under Hermitian conjugation: an operator is Hermitian iff
its coefficient table satisfies ``t[-n, -m] == conj(t[n, m])``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .qmat import Array, frobenius_norm, kron

__all__ = [
    "WeylCoefficients",
    "bell_projector",
    "max_entangled_state",
    "minus_index",
    "tensor_basis_element",
    "weyl_operator",
    "weyl_tensor_decompose",
    "weyl_tensor_reconstruct",
]


def _check_indices(n: int, m: int, d: int) -> None:
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    if not (0 <= n < d and 0 <= m < d):
        raise ValueError(f"indices ({n}, {m}) outside range [0, {d})")


def minus_index(n: int, d: int = 3) -> int:
    """Additive inverse mod ``d`` mapped back into ``[0, d)``."""
    return (d - n) % d


@lru_cache(maxsize=None)
def _weyl_cached(n: int, m: int, d: int) -> Array:
    w = np.exp(2j * np.pi / d)
    op = np.zeros((d, d), dtype=complex)
    for k in range(d):
        op[k, (k + m) % d] = w ** (k * n)
    op.setflags(write=False)
    return op


def weyl_operator(n: int, m: int, d: int = 3) -> Array:
    """The unitary ``sum_k w^(kn) |k><(k+m) mod d|``."""
    _check_indices(n, m, d)
    return _weyl_cached(n, m, d).copy()


@lru_cache(maxsize=None)
def _max_entangled_cached(d: int) -> Array:
    v = np.zeros(d * d, dtype=complex)
    for j in range(d):
        v[j * d + j] = 1.0 / np.sqrt(d)
    proj = np.outer(v, v.conj())
    proj.setflags(write=False)
    return proj


def max_entangled_state(d: int = 3) -> Array:
    """Projector onto ``(1/sqrt d) sum_j |jj>``."""
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    return _max_entangled_cached(d).copy()


@lru_cache(maxsize=None)
def _bell_cached(n: int, m: int, d: int) -> Array:
    u = kron(_weyl_cached(n, m, d), np.eye(d))
    proj = u @ _max_entangled_cached(d) @ u.conj().T
    proj = 0.5 * (proj + proj.conj().T)
    proj.setflags(write=False)
    return proj


def bell_projector(n: int, m: int, d: int = 3) -> Array:
    """Projector onto ``(W(n, m) (x) 1)`` applied to the entangled vector."""
    _check_indices(n, m, d)
    return _bell_cached(n, m, d).copy()


def tensor_basis_element(n: int, m: int, d: int = 3) -> Array:
    """``W(n, m) (x) W(-n, m)`` -- one element of the two-sided basis."""
    _check_indices(n, m, d)
    return kron(_weyl_cached(n, m, d), _weyl_cached(minus_index(n, d), m, d))


@lru_cache(maxsize=None)
def _stacked_basis(d: int) -> tuple[Array, tuple[tuple[int, int], ...]]:
    """All d^2 two-sided basis elements flattened into a (d^2, d^4) stack."""
    index = tuple((n, m) for n in range(d) for m in range(d))
    rows = np.stack(
        [tensor_basis_element(n, m, d).reshape(d**4) for n, m in index]
    )
    rows.setflags(write=False)
    return rows, index


@dataclass(frozen=True)
class WeylCoefficients:
    """Coefficient table of an operator over the two-sided basis.

    ``coeffs[(n, m)]`` multiplies ``W(n, m) (x) W(-n, m)``; ``residual`` is
    the Frobenius norm of whatever part of the operator lies outside the
    basis span (zero, up to rounding, for every operator this package
    constructs internally).
    """

    d: int
    coeffs: dict[tuple[int, int], complex]
    residual: float

    def coefficient(self, n: int, m: int) -> complex:
        return self.coeffs[(n, m)]

    def identity_coefficient(self) -> complex:
        return self.coeffs[(0, 0)]

    def max_off_identity(self) -> float:
        return max(
            abs(v) for k, v in self.coeffs.items() if k != (0, 0)
        )

    def conjugated(self) -> "WeylCoefficients":
        """Table with every coefficient conjugated, keys untouched.

        This is the package's mirror operation: witnesses constructed from
        a family start inherit conjugated tables when the start's third
        parameter is negated, so conjugating a deployed witness's table
        yields the witness adapted to the mirrored region.  Coefficient
        magnitudes -- hence product-state safety -- are unchanged, and
        Hermiticity of the table symmetry is preserved.
        """
        flipped = {key: complex(np.conj(v)) for key, v in self.coeffs.items()}
        return WeylCoefficients(d=self.d, coeffs=flipped, residual=self.residual)


def weyl_tensor_decompose(c: Array, d: int = 3) -> WeylCoefficients:
    """Expand an operator over ``W(n, m) (x) W(-n, m)``.

    Coefficients are Hilbert-Schmidt projections ``<B_nm, C> / d^2``; the
    reported residual measures the component of ``C`` outside the span (for
    ``d = 3`` the span is 9-dimensional inside an 81-dimensional space, so a
    generic two-qutrit operator has a large residual).
    """
    a = np.asarray(c, dtype=complex)
    if a.shape != (d * d, d * d):
        raise ValueError(f"expected shape {(d * d, d * d)}, got {a.shape}")
    rows, index = _stacked_basis(d)
    flat = a.reshape(d**4)
    t = (rows.conj() @ flat) / (d * d)
    resid = float(np.linalg.norm(flat - rows.T @ t))
    coeffs = {key: complex(t[i]) for i, key in enumerate(index)}
    return WeylCoefficients(d=d, coeffs=coeffs, residual=resid)


def weyl_tensor_reconstruct(wc: WeylCoefficients) -> Array:
    """Rebuild the (in-span part of the) operator from its coefficients."""
    d = wc.d
    rows, index = _stacked_basis(d)
    t = np.array([wc.coeffs[key] for key in index])
    return (rows.T @ t).reshape(d * d, d * d)


def span_distance(c: Array, d: int = 3) -> float:
    """Frobenius distance from ``C`` to the span of the two-sided basis."""
    return weyl_tensor_decompose(c, d).residual


def hermitian_coefficient_defect(wc: WeylCoefficients) -> float:
    """Max violation of ``t[-n, -m] == conj(t[n, m])`` over the table."""
    d = wc.d
    worst = 0.0
    for (n, m), v in wc.coeffs.items():
        partner = wc.coeffs[(minus_index(n, d), minus_index(m, d))]
        worst = max(worst, abs(np.conj(v) - partner))
    return worst
