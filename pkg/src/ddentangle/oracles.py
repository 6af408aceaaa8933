"""Independent ground-truth generators backing the test suite.

Three oracles validate the production pipeline from unrelated directions:
stationary Gaussian noise paths synthesized from the spectrum (checks mu
via ensemble statistics), exact Hilbert-space propagation of qubits
coupled to a small number of truncated bosonic modes (checks every sign
and factor of the density-matrix map), and discrete-mode kernel sums that
bridge the formula side to that propagation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import BASIS_LABELS, TwoQubitState
from .errors import ConfigurationError, NonConvergedError
from .filters import dn_pair, filter_weight
from .kernels import KernelSet
from .pulses import PulseSequence, combine, h_integral, switching_profile, z_integral
from .spectra import NoiseSpectrum, bose_n, noise_S, thermal_coth

# Per-sector population allowed at the top Fock level before the
# truncation is declared too small.
FOCK_TOP_LEVEL_LIMIT = 1e-8
THERMAL_TAIL_LIMIT = 1e-10

DEFAULT_MODES = 2048


@dataclass(frozen=True)
class NoiseRealization:
    """One synthesized stationary Gaussian path on a uniform grid."""

    times: np.ndarray
    values: np.ndarray
    seed: int
    mode_freqs: np.ndarray
    amplitudes: np.ndarray


@dataclass(frozen=True)
class MCNoiseStats:
    """Ensemble statistics of the accumulated noise phase."""

    mean: float
    variance: float
    se_mean: float
    se_variance: float
    samples: np.ndarray


@dataclass(frozen=True)
class DiscreteModeBath:
    """A handful of discrete bosonic modes with a shared Fock cutoff."""

    modes: tuple[tuple[float, complex], ...]
    fock_cutoff: int
    beta: float

    def __post_init__(self):
        if self.fock_cutoff < 2:
            raise ConfigurationError("Fock cutoff must be at least 2")
        if self.beta <= 0:
            raise ConfigurationError("inverse temperature must be positive")
        for omega, _ in self.modes:
            if omega <= 0:
                raise ConfigurationError("mode frequencies must be positive")
            tail = np.exp(-self.beta * omega * (self.fock_cutoff + 1))
            if tail > THERMAL_TAIL_LIMIT:
                raise ConfigurationError(
                    f"thermal tail {tail:.2e} beyond level {self.fock_cutoff} "
                    f"exceeds {THERMAL_TAIL_LIMIT}; raise the cutoff"
                )


def _mode_grid(spec: NoiseSpectrum, n_modes: int, spacing: str):
    if spacing == "log":
        freqs = np.geomspace(spec.omega_ir, spec.omega_uv, n_modes)
    elif spacing == "linear":
        freqs = np.linspace(spec.omega_ir, spec.omega_uv, n_modes)
    else:
        raise ConfigurationError(f"unknown mode spacing {spacing!r}")
    widths = np.empty(n_modes)
    widths[1:-1] = 0.5 * (freqs[2:] - freqs[:-2])
    widths[0] = 0.5 * (freqs[1] - freqs[0])
    widths[-1] = 0.5 * (freqs[-1] - freqs[-2])
    return freqs, widths


def sample_noise(
    spec: NoiseSpectrum,
    grid,
    seed: int,
    n_modes: int = DEFAULT_MODES,
    spacing: str = "log",
) -> NoiseRealization:
    """Synthesize one stationary Gaussian path with spectrum S(omega).

    xi(t) = sum_j amp_j (a_j cos(w_j t) + b_j sin(w_j t)) with standard
    normal a_j, b_j and amp_j = sqrt(S(w_j) dw_j / pi), which reproduces
    the autocorrelation (1/2pi) integral of e^{-i w tau} S(omega).
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ConfigurationError("noise grid needs at least two points")
    steps = np.diff(grid)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ConfigurationError("noise grid must be uniform and increasing")
    if steps[0] * spec.omega_uv > np.pi:
        raise ConfigurationError(
            f"grid step {steps[0]:.3e} cannot resolve omega_uv = {spec.omega_uv:.3e}"
        )
    freqs, widths = _mode_grid(spec, n_modes, spacing)
    amps = np.sqrt(noise_S(spec, freqs) * widths / np.pi)
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(n_modes)
    b = rng.standard_normal(n_modes)
    phases = np.outer(grid, freqs)
    values = np.cos(phases) @ (amps * a) + np.sin(phases) @ (amps * b)
    return NoiseRealization(grid, values, seed, freqs, amps)


def _segmented_trapezoid_weights(seq1, seq2, t: float, dt: float):
    """Time points and signed trapezoid weights for integrating xi * s1 * s2.

    The base grid is refined with every sign flip of the combined
    switching function so each trapezoid panel carries one sign.
    """
    comb = combine(seq1, seq2)
    flips, sign, _ = switching_profile(comb)
    base = np.linspace(0.0, t, max(3, int(np.ceil(t / dt)) + 1))
    points = np.unique(np.concatenate((base, flips[flips < t])))
    signs = sign * (-1.0) ** np.searchsorted(flips, points[:-1], side="right")
    weights = np.zeros(len(points))
    half = 0.5 * np.diff(points)
    np.add.at(weights, np.arange(len(half)), signs * half)
    np.add.at(weights, np.arange(1, len(points)), signs * half)
    return points, weights


def mc_gamma_variance(
    noise: NoiseSpectrum,
    seq1: PulseSequence,
    seq2: PulseSequence,
    t: float,
    n_realizations: int,
    seed: int,
    dt: float | None = None,
    n_modes: int = DEFAULT_MODES,
    spacing: str = "log",
) -> MCNoiseStats:
    """Ensemble statistics of Gamma(t) = integral of xi s1 s2 over [0, t].

    Each realization integrates its sampled path by the segment-aware
    trapezoid rule; the variance estimates the decoherence exponent mu(t).
    """
    if dt is None:
        dt = 0.25 * np.pi / noise.omega_uv
    if dt * noise.omega_uv > np.pi:
        raise ConfigurationError("dt too coarse for the ultraviolet cutoff")
    points, weights = _segmented_trapezoid_weights(seq1, seq2, t, dt)
    freqs, widths = _mode_grid(noise, n_modes, spacing)
    amps = np.sqrt(noise_S(noise, freqs) * widths / np.pi)
    phases = np.outer(freqs, points)
    # Gamma = a . (amp * cos W) + b . (amp * sin W): the path contraction
    # against the trapezoid weights, grouped per mode.
    cw = amps * (np.cos(phases) @ weights)
    sw = amps * (np.sin(phases) @ weights)
    rng = np.random.default_rng(seed)
    samples = np.empty(n_realizations)
    block = max(1, 4_000_000 // n_modes)
    for start in range(0, n_realizations, block):
        m = min(block, n_realizations - start)
        a = rng.standard_normal((m, n_modes))
        b = rng.standard_normal((m, n_modes))
        samples[start : start + m] = a @ cw + b @ sw
    mean = float(samples.mean())
    var = float(samples.var(ddof=1))
    se_mean = float(np.sqrt(var / n_realizations))
    se_var = float(var * np.sqrt(2.0 / (n_realizations - 1)))
    return MCNoiseStats(mean, var, se_mean, se_var, samples)


def _lowering(dim: int) -> np.ndarray:
    out = np.zeros((dim, dim))
    idx = np.arange(1, dim)
    out[idx - 1, idx] = np.sqrt(idx)
    return out


def _thermal_diag(omega: float, beta: float, dim: int) -> np.ndarray:
    weights = np.exp(-beta * omega * np.arange(dim))
    return weights / weights.sum()


def _segment_grid(seq1, seq2, t: float):
    f1, _, _ = switching_profile(seq1)
    f2, _, _ = switching_profile(seq2)
    flips = np.unique(np.concatenate((f1[f1 < t], f2[f2 < t])))
    return np.concatenate(([0.0], flips, [t]))


def single_mode_evolve(
    bath: DiscreteModeBath,
    seq1: PulseSequence,
    seq2: PulseSequence,
    omega0: float,
    t: float,
    rho0: TwoQubitState,
) -> TwoQubitState:
    """Exact propagation with a discrete bosonic environment.

    Pulses enter as instantaneous sign flips of the conditional
    Hamiltonian between pulse times (the toggling frame), so within each
    segment every sigma_z sector evolves under a displaced-oscillator
    generator diagonalized exactly in the truncated Fock space.
    """
    dims = [bath.fock_cutoff + 1 for _ in bath.modes]
    dim = int(np.prod(dims))
    lowers = []
    numbers = []
    for r, d in enumerate(dims):
        ops_low = [np.eye(dd) for dd in dims]
        ops_low[r] = _lowering(d)
        low = ops_low[0]
        for op in ops_low[1:]:
            low = np.kron(low, op)
        lowers.append(low)
        numbers.append(low.conj().T @ low)

    # thermal state as its diagonal weight vector in the Fock basis
    rho_bath = _thermal_diag(bath.modes[0][0], bath.beta, dims[0])
    for (omega_r, _), d in zip(bath.modes[1:], dims[1:]):
        rho_bath = np.kron(rho_bath, _thermal_diag(omega_r, bath.beta, d))

    grid = _segment_grid(seq1, seq2, t)
    h_free = sum(
        omega_r * num for (omega_r, _), num in zip(bath.modes, numbers)
    )
    coupling = sum(
        np.conj(g_r) * low + g_r * low.conj().T
        for (_, g_r), low in zip(bath.modes, lowers)
    )

    sector_unitaries = []
    for k, l in BASIS_LABELS:
        u = np.eye(dim, dtype=complex)
        for a, b in zip(grid[:-1], grid[1:]):
            mid = 0.5 * (a + b)
            s1 = _sign_at(seq1, mid)
            s2 = _sign_at(seq2, mid)
            c = s1 * k + s2 * l
            h = 0.5 * omega0 * c * np.eye(dim) + h_free + c * coupling
            vals, vecs = np.linalg.eigh(h)
            u = (vecs * np.exp(-1j * vals * (b - a))[None, :]) @ vecs.conj().T @ u
        sector_unitaries.append(u)

    for u in sector_unitaries:
        evolved = (u * rho_bath[None, :]) @ u.conj().T
        pops = np.real(np.diag(evolved)).reshape(dims)
        for axis in range(len(dims)):
            top = float(np.moveaxis(pops, axis, 0)[-1].sum())
            if top > FOCK_TOP_LEVEL_LIMIT:
                raise NonConvergedError(
                    f"population {top:.2e} at the top Fock level; rerun with a "
                    f"larger cutoff than {bath.fock_cutoff}"
                )

    out = np.empty((4, 4), dtype=complex)
    for i, ui in enumerate(sector_unitaries):
        for j, uj in enumerate(sector_unitaries):
            out[i, j] = rho0.matrix[i, j] * np.sum(
                (ui * rho_bath[None, :]) * uj.conj()
            )
    return TwoQubitState(out).validate()


def _sign_at(seq, time: float) -> float:
    flips, sign, _ = switching_profile(seq)
    return float(sign * (-1.0) ** np.searchsorted(flips, time, side="right"))


def discrete_kernel_set(
    bath: DiscreteModeBath,
    seq1: PulseSequence,
    seq2: PulseSequence,
    t: float,
    lambda0: float = 0.0,
) -> KernelSet:
    """Kernels for a discrete bath: 4 |g_r|^2 sums replace the J integral."""
    z = z_integral(seq1, t)
    h = h_integral(seq1, seq2, t)
    alpha = seq2.shift - seq1.shift
    gamma = d_big = p = q = r = 0.0
    for omega_r, g_r in bath.modes:
        strength = 4.0 * abs(g_r) ** 2
        w = filter_weight(seq1, omega_r, t)
        gamma += strength * w * thermal_coth(bath.beta, omega_r)
        d_big += strength * dn_pair(seq1, seq2, omega_r, t)
        p += strength * w * np.cos(omega_r * alpha) * bose_n(bath.beta, omega_r)
        q += strength * w * np.cos(omega_r * alpha)
        r += strength * w * np.sin(omega_r * alpha)
    return KernelSet(t, z, gamma, d_big, h, 0.0, p, q, r, d_big / 2.0 - lambda0 * h)
