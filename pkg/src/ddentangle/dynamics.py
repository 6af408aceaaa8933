"""Exact reduced dynamics of the two dephasing qubits.

States live in the sigma_z product basis ordered (+1,+1), (+1,-1),
(-1,+1), (-1,-1).  Each density-matrix element is multiplied by a closed
form in the kernels; populations are untouched and coherences pick up
phases and decay factors.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import IntegrityError
from .kernels import KernelSet, Mode

BASIS_LABELS: tuple[tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = -1e-10


@dataclass(frozen=True)
class TwoQubitState:
    """4x4 density matrix with validated quantum-state invariants."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise IntegrityError(f"state must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def validate(self) -> "TwoQubitState":
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITICITY_TOL:
            raise IntegrityError(f"state not Hermitian: max |A - A^dag| = {herm:.3e}")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise IntegrityError(f"state trace {tr} differs from 1")
        lo = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())
        if lo < POSITIVITY_TOL:
            raise IntegrityError(f"state not positive semidefinite: min eigenvalue {lo:.3e}")
        return self


def plus_plus_state() -> TwoQubitState:
    """Product state |+,+><+,+| with every entry 1/4."""
    return TwoQubitState(np.full((4, 4), 0.25, dtype=complex))


def _multiplier(k: int, l: int, kp: int, lp: int, ks: KernelSet, mode: Mode, omega0: float) -> complex:
    dz = kp + lp - k - l
    dphase = kp * lp - k * l
    out = cmath.exp(-0.5j * omega0 * ks.Z * dz + 1j * ks.Phi * dphase)
    if mode is Mode.COMMON_BATH:
        return out * cmath.exp(-0.25 * ks.gamma * dz * dz)
    dk, dl = kp - k, lp - l
    out *= cmath.exp(-0.5 * ks.mu * dphase * dphase)
    out *= cmath.exp(-0.25 * ks.gamma * (dk * dk + dl * dl))
    out *= cmath.exp(-0.5 * dk * dl * (2.0 * ks.p + ks.q))
    # The cross phase r enters antisymmetrically in (k l' - k' l); this is
    # the operator-ordering phase of the bath trace and the only index
    # structure compatible with Hermiticity.  Pinned by the discrete-mode
    # oracle at nonzero shift.
    out *= cmath.exp(-0.5j * (k * lp - kp * l) * ks.r)
    return out


def evolve_element(
    element: complex,
    k: int,
    l: int,
    kp: int,
    lp: int,
    kernels: KernelSet,
    mode: Mode,
    omega0: float = 1.0,
) -> complex:
    """Evolved value of the matrix element <k', l'| rho |k, l>.

    Diagonal elements are fixed points; coherences acquire the phase
    exp[-i omega0 Z (k'+l'-k-l)/2 + i Phi (k'l'-kl)] and mode-dependent
    decay exponents in gamma, mu and the cross kernels.
    """
    for value in (k, l, kp, lp):
        if value not in (1, -1):
            raise ValueError(f"quantum numbers must be +1 or -1, got {value}")
    return element * _multiplier(k, l, kp, lp, kernels, mode, omega0)


def evolve_state(
    rho0: TwoQubitState,
    kernels: KernelSet,
    mode: Mode,
    omega0: float = 1.0,
) -> TwoQubitState:
    """Apply the element-wise map to a full state and revalidate it."""
    out = np.empty((4, 4), dtype=complex)
    for i, (kp, lp) in enumerate(BASIS_LABELS):
        for j, (k, l) in enumerate(BASIS_LABELS):
            out[i, j] = rho0.matrix[i, j] * _multiplier(k, l, kp, lp, kernels, mode, omega0)
    return TwoQubitState(out).validate()
