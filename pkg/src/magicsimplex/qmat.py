"""Small dense complex-matrix kernel.

Everything in this package acts on Hilbert spaces of dimension at most nine
(two qutrits), so the kernel favours determinism and transparency over
asymptotic speed: the eigensolver is a hand-rolled cyclic Jacobi iteration,
partial transposition is a pure index reshuffle, and the JSON wire format
stores entries verbatim.

Conventions
-----------
* Matrices are ``numpy`` arrays of ``complex128``.
* ``hs_inner(a, b)`` is the Hilbert-Schmidt inner product ``Tr(a^H b)``,
  conjugate-linear in the first argument.
* ``partial_transpose`` transposes the *second* tensor factor.
* JSON format: ``{"dim": n, "entries": [[re, im], ...]}`` with ``entries``
  in row-major order, ``dim * dim`` of them.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

Array = np.ndarray

__all__ = [
    "Array",
    "HERMITICITY_TOL",
    "OFFDIAG_TARGET",
    "frobenius_norm",
    "hermitian_eigenvalues",
    "hermiticity_defect",
    "hs_inner",
    "kron",
    "matrix_from_json",
    "matrix_to_json",
    "partial_transpose",
    "smallest_eigenvalue",
    "trace",
]

#: Max tolerated entry-wise asymmetry ``|M - M^H|`` for eigensolver input.
HERMITICITY_TOL = 1e-10

#: The Jacobi sweep stops once the off-diagonal Frobenius mass is below this.
OFFDIAG_TARGET = 1e-13

_MAX_SWEEPS = 64


def _as_matrix(m: Any) -> Array:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def trace(m: Array) -> complex:
    return complex(np.trace(_as_matrix(m)))


def frobenius_norm(m: Array) -> float:
    return float(np.linalg.norm(np.asarray(m)))


def hermiticity_defect(m: Array) -> float:
    """Largest entry of ``|M - M^H|`` -- zero iff ``M`` is Hermitian."""
    a = _as_matrix(m)
    return float(np.max(np.abs(a - a.conj().T)))


def hs_inner(a: Array, b: Array) -> complex:
    """Hilbert-Schmidt inner product ``Tr(a^H b)``."""
    return complex(np.vdot(np.asarray(a), np.asarray(b)))


def kron(a: Array, b: Array) -> Array:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_transpose(m: Array, dim_a: int = 3, dim_b: int = 3) -> Array:
    """Transpose the second tensor factor of an operator on C^a (x) C^b.

    Entry-exact: the output is a pure reindexing of the input, no arithmetic
    is performed, so applying it twice returns the original bit for bit.
    """
    a = _as_matrix(m)
    n = dim_a * dim_b
    if a.shape != (n, n):
        raise ValueError(
            f"matrix shape {a.shape} does not match factors {dim_a}x{dim_b}"
        )
    return (
        a.reshape(dim_a, dim_b, dim_a, dim_b)
        .transpose(0, 3, 2, 1)
        .reshape(n, n)
    )


def _offdiag_norm_sq(a: Array) -> float:
    # Summed directly with the diagonal masked out: subtracting the diagonal
    # mass from the total cancels catastrophically near convergence.
    sq = np.abs(a) ** 2
    np.fill_diagonal(sq, 0.0)
    return float(np.sum(sq))


def _jacobi_diagonalize(a: Array, scale: float) -> Array:
    """Cyclic Jacobi sweep on an exactly-Hermitian matrix; returns the diag."""
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real])
    target_sq = (OFFDIAG_TARGET * max(scale, 1.0)) ** 2
    # Rotations on pivots below this leave the off-diagonal mass within
    # target even if every pair is skipped: n^2 * skip^2 <= target^2 / 4.
    skip = OFFDIAG_TARGET * max(scale, 1.0) / (2.0 * n)

    for _ in range(_MAX_SWEEPS):
        if _offdiag_norm_sq(a) < target_sq:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                absq = abs(apq)
                if absq <= skip:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                phase = apq / absq
                tau = (aqq - app) / (2.0 * absq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                cp = c * phase
                sp = s * phase
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = cp * col_p - s * col_q
                a[:, q] = sp * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(cp) * row_p - s * row_q
                a[q, :] = np.conj(sp) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        raise ArithmeticError(
            f"Jacobi iteration did not converge in {_MAX_SWEEPS} sweeps"
        )
    return np.diagonal(a).real.copy()


def _zero_pattern_blocks(a: Array) -> list[np.ndarray]:
    """Index groups connected through *exactly* non-zero entries.

    Splitting on exact zeros is always sound: the discarded couplings are
    identically zero, so the spectrum is the union of the block spectra.
    Operators assembled from the tensor constructions in this package
    (and their partial transposes) carry exact zero patterns that cut the
    9x9 problem into 3x3 pieces.
    """
    n = a.shape[0]
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in np.argwhere(a != 0):
        if i != j:
            ri, rj = find(int(i)), find(int(j))
            if ri != rj:
                parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g) for g in groups.values()]


def hermitian_eigenvalues(m: Array, *, hermiticity_tol: float = HERMITICITY_TOL) -> Array:
    """All eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi.

    Each sweep visits every upper-triangle pair (p, q) once and applies a
    complex Jacobi rotation: the phase of the pivot entry is absorbed into a
    diagonal unitary so the remaining 2x2 problem is real symmetric, then
    the rotation angle follows the usual stable half-angle formula.
    Convergence is quadratic; nine-dimensional inputs settle in a handful of
    sweeps.  Exactly-zero sparsity is exploited by splitting into
    disconnected blocks first.

    Raises ``ValueError`` for non-Hermitian input (with the max asymmetry in
    the message) and ``ArithmeticError`` if the sweep fails to converge or
    the eigenvalue sums fail to reproduce the trace moments of the input.
    """
    a = _as_matrix(m).copy()
    n = a.shape[0]
    defect = float(np.max(np.abs(a - a.conj().T))) if n else 0.0
    if defect > hermiticity_tol:
        raise ValueError(f"matrix is not Hermitian: max asymmetry {defect:.3e}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")

    tr_in = float(np.trace(a).real)
    tr2_in = float(np.sum(np.abs(a) ** 2))  # Tr M^2 for Hermitian M

    # Symmetrise once so the iteration below may assume exact Hermiticity.
    a = 0.5 * (a + a.conj().T)
    scale = math.sqrt(tr2_in) if tr2_in > 0 else 1.0

    blocks = _zero_pattern_blocks(a)
    if len(blocks) == 1:
        eigs = _jacobi_diagonalize(a, scale)
    else:
        pieces = [
            _jacobi_diagonalize(a[np.ix_(idx, idx)].copy(), scale)
            for idx in blocks
        ]
        eigs = np.concatenate(pieces)
    eigs = np.sort(eigs)

    # Consistency posts: eigenvalues must reproduce Tr M and Tr M^2.
    tol = 1e-9 * max(1.0, scale)
    if abs(float(np.sum(eigs)) - tr_in) > tol:
        raise ArithmeticError("eigenvalue sum does not match the input trace")
    if abs(float(np.sum(eigs**2)) - tr2_in) > tol:
        raise ArithmeticError("eigenvalue square-sum does not match Tr M^2")
    return eigs


def smallest_eigenvalue(m: Array, *, hermiticity_tol: float = HERMITICITY_TOL) -> float:
    return float(hermitian_eigenvalues(m, hermiticity_tol=hermiticity_tol)[0])


def matrix_to_json(m: Array) -> dict:
    """Serialize to ``{"dim": n, "entries": [[re, im], ...]}`` (row-major)."""
    a = _as_matrix(m)
    n = a.shape[0]
    entries = [[float(z.real), float(z.imag)] for z in a.reshape(-1)]
    return {"dim": n, "entries": entries}


def matrix_from_json(obj: dict) -> Array:
    """Inverse of :func:`matrix_to_json`, with shape and finiteness checks."""
    try:
        n = int(obj["dim"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError("matrix JSON needs 'dim' and 'entries' keys") from exc
    if n <= 0:
        raise ValueError(f"matrix dimension must be positive, got {n}")
    if len(entries) != n * n:
        raise ValueError(
            f"expected {n * n} entries for dim {n}, got {len(entries)}"
        )
    flat = np.empty(n * n, dtype=complex)
    for i, pair in enumerate(entries):
        re, im = pair
        flat[i] = complex(float(re), float(im))
    if not np.all(np.isfinite(flat)):
        raise ValueError("matrix JSON has non-finite entries")
    return flat.reshape(n, n)
