"""Wootters concurrence and the small complex-Hermitian eigensolver it uses."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import TwoQubitState
from .errors import IntegrityError

HERMITICITY_TOL = 1e-10
OFFDIAG_STOP = 1e-14
# Eigenvalues of a density matrix above this are treated as genuinely
# negative (integrity error); between here and zero they are numerical
# dust and clamp to zero.
NEGATIVE_EIGENVALUE_LIMIT = -1e-8

_MAX_SWEEPS = 60

# sigma_y (x) sigma_y in the (+1,+1), (+1,-1), (-1,+1), (-1,-1) basis
_SYSY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order with matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eigen(matrix) -> SpectralDecomposition:
    """Diagonalize a small complex Hermitian matrix by cyclic Jacobi sweeps.

    The input is symmetrized internally after a Hermiticity check; sweeps
    run in a fixed (p, q) order until the off-diagonal Frobenius norm
    drops below OFFDIAG_STOP times the matrix norm, so the decomposition
    is deterministic.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    herm_defect = np.max(np.abs(a - a.conj().T))
    if herm_defect > HERMITICITY_TOL:
        raise ValueError(f"matrix not Hermitian: max |A - A^dag| = {herm_defect:.3e}")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return SpectralDecomposition(np.zeros(n), v)

    for _ in range(_MAX_SWEEPS):
        off_part = a - np.diag(np.diag(a))
        off2 = float(np.sum(np.abs(off_part) ** 2))
        if off2 <= (OFFDIAG_STOP * norm) ** 2:
            break
        # elements this small cannot push off2 above the stopping threshold
        skip = OFFDIAG_STOP * norm / (10.0 * n * n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                tan_t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau else 1.0
                c = 1.0 / np.hypot(1.0, tan_t)
                s = tan_t * c
                # columns: [p, q] <- [c*p - s*conj(phase)*q, s*phase*p + c*q]
                col_p = c * a[:, p] - s * np.conj(phase) * a[:, q]
                col_q = s * phase * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = col_p, col_q
                row_p = c * a[p, :] - s * phase * a[q, :]
                row_q = s * np.conj(phase) * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = row_p, row_q
                vol_p = c * v[:, p] - s * np.conj(phase) * v[:, q]
                vol_q = s * phase * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vol_p, vol_q
    else:
        raise IntegrityError("Jacobi eigensolver failed to converge")

    values = np.diag(a).real.copy()
    order = np.argsort(-values, kind="stable")
    return SpectralDecomposition(values[order], v[:, order])


def _psd_sqrt(state: TwoQubitState) -> np.ndarray:
    decomp = hermitian_eigen(state.matrix)
    vals = decomp.eigenvalues
    if vals.min() < NEGATIVE_EIGENVALUE_LIMIT:
        raise IntegrityError(
            f"density matrix has negative eigenvalue {vals.min():.3e}"
        )
    vals = np.clip(vals, 0.0, None)
    vecs = decomp.eigenvectors
    return (vecs * np.sqrt(vals)[None, :]) @ vecs.conj().T


def concurrence(state: TwoQubitState) -> float:
    """Concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit state.

    The l_i are the descending square roots of the eigenvalues of
    W = sqrt(rho) rho~ sqrt(rho) with rho~ the spin-flipped conjugate
    (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y).  W factors as
    A A^dag with A = sqrt(rho) (sigma_y (x) sigma_y) sqrt(rho)*, so the
    l_i are the singular values of A; they are extracted from the
    Hermitian embedding [[0, A], [A^dag, 0]], which avoids squaring and
    keeps rounding dust at machine scale instead of its square root.
    """
    if isinstance(state, np.ndarray):
        state = TwoQubitState(state)
    root = _psd_sqrt(state)
    a = root @ _SYSY @ root.conj()
    embed = np.zeros((8, 8), dtype=complex)
    embed[:4, 4:] = a
    embed[4:, :4] = a.conj().T
    lam = hermitian_eigen(embed).eigenvalues[:4]  # +singular values, descending
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))
