"""Time-dependent scalar kernels entering the reduced density matrix.

For one evaluation time t the bath contributes the decoherence exponent
gamma(t), the mediated-phase kernel D(t), and (when the second qubit's
sequence is time-shifted by alpha) the cross kernels p(t), q(t), r(t).
Classical noise on a direct qubit-qubit coupling adds mu(t).  Together
with the switching integrals Z(t) and h(t) these feed the per-element
multipliers in the dynamics module; the off-diagonal phase per unit of
k'l' - kl is Phi(t) = D(t)/2 - lambda0 * h(t).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigurationError, NonConvergedError
from .filters import PairIntegrandWorkspace, filter_weight
from .pulses import PulseSequence, combine, h_integral, z_integral
from .quad import QuadResult, QuadSpec, integrate, integrate_many
from .spectra import BathSpectrum, NoiseSpectrum, bath_J, bose_n, noise_S, thermal_coth


class Mode(str, Enum):
    COMMON_BATH = "common_bath"
    INTERACTION_NOISE = "interaction_noise"


@dataclass(frozen=True)
class KernelSet:
    """Every scalar factor of the density-matrix map at one time."""

    t: float
    Z: float
    gamma: float
    D: float
    h: float
    mu: float
    p: float
    q: float
    r: float
    Phi: float

    @property
    def R(self) -> float:
        """Cross-decoherence combination 2p + q (equals gamma at alpha = 0)."""
        return 2.0 * self.p + self.q


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one simulated experiment."""

    bath: BathSpectrum
    seq1: PulseSequence
    seq2: PulseSequence | None = None
    noise: NoiseSpectrum | None = None
    beta: float = 1.0
    omega0: float = 1.0
    lambda0: float = 0.0
    mode: Mode = Mode.COMMON_BATH
    time_grid: tuple[float, ...] = ()
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    omega_max_factor: float = 50.0

    def __post_init__(self):
        if self.beta <= 0:
            raise ConfigurationError("inverse temperature beta must be positive")
        if self.omega_max_factor <= 0:
            raise ConfigurationError("omega_max_factor must be positive")
        if self.seq2 is None:
            object.__setattr__(self, "seq2", self.seq1)
        if self.seq1.window != self.seq2.window:
            raise ConfigurationError("both sequences must share one window")
        if self.mode is Mode.INTERACTION_NOISE:
            if self.noise is None:
                raise ConfigurationError(
                    "interaction-noise mode needs a noise spectrum"
                )
        else:
            if self.lambda0 != 0.0:
                raise ConfigurationError(
                    "the common-bath model carries no direct coupling; set lambda0 = 0"
                )
            if not self.sequences_identical:
                raise ConfigurationError(
                    "the common-bath model drives both qubits with one sequence"
                )
        for t in self.time_grid:
            if not 0.0 <= t <= self.seq1.window:
                raise ConfigurationError(
                    f"grid time {t} falls outside the sequence window"
                )

    @property
    def sequences_identical(self) -> bool:
        s1, s2 = self.seq1, self.seq2
        return s1.times == s2.times and s1.shift == s2.shift

    @property
    def alpha(self) -> float:
        return self.seq2.shift - self.seq1.shift

    @property
    def omega_max(self) -> float:
        return self.omega_max_factor * self.bath.omega_c


def _bath_quad_spec(cfg: ScenarioConfig, t: float, alpha: float) -> QuadSpec:
    return QuadSpec(
        0.0,
        cfg.omega_max,
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        oscillation_period_hint=2.0 * math.pi / (t + alpha),
    )


def _check(results: list[QuadResult], names: list[str], t: float) -> None:
    for res, name in zip(results, names):
        if not res.converged:
            raise NonConvergedError(
                f"{name}(t={t}) did not converge: value {res.value}, "
                f"error estimate {res.error_estimate} with {res.panels_used} panels"
            )


def _bath_pass(cfg: ScenarioConfig, t: float, with_pqr: bool) -> dict[str, float]:
    """gamma, D and optionally p, q, r from one shared quadrature pass.

    All five integrands share the filter weight F(omega t)/omega^2 and the
    pair kernel, whose complex exponentials dominate the cost, so they are
    evaluated on one panel set.
    """
    alpha = cfg.alpha
    workspace = PairIntegrandWorkspace(
        cfg.seq1, cfg.seq2, t, identical=cfg.sequences_identical
    )
    names = ["gamma", "D"] + (["p", "q", "r"] if with_pqr else [])

    def integrand(omega):
        weight, dpair = workspace.evaluate(omega)
        j = bath_J(cfg.bath, omega)
        coth = thermal_coth(cfg.beta, omega)
        cols = [j * weight * coth, j * dpair]
        if with_pqr:
            jw = j * weight
            cos_a = np.cos(omega * alpha)
            cols.append(jw * cos_a * bose_n(cfg.beta, omega))
            cols.append(jw * cos_a)
            cols.append(jw * np.sin(omega * alpha))
        return np.stack(cols, axis=1)

    results = integrate_many(integrand, _bath_quad_spec(cfg, t, alpha), len(names))
    _check(results, names, t)
    return {name: res.value for name, res in zip(names, results)}


def gamma_kernel(cfg: ScenarioConfig, t: float) -> float:
    """Decoherence exponent: integral of J * F(omega t)/omega^2 * coth(beta omega/2)."""
    if t == 0.0:
        return 0.0
    return _bath_pass(cfg, t, with_pqr=False)["gamma"]


def D_kernel(cfg: ScenarioConfig, t: float) -> float:
    """Bath-mediated phase kernel: integral of J(omega) * d_n(omega, t)."""
    if t == 0.0:
        return 0.0
    return _bath_pass(cfg, t, with_pqr=False)["D"]


def pqr_kernels(cfg: ScenarioConfig, t: float) -> tuple[float, float, float]:
    """Cross kernels weighting cos/sin(omega alpha); 2p + q = gamma, r = 0 at alpha = 0."""
    if t == 0.0:
        return 0.0, 0.0, 0.0
    out = _bath_pass(cfg, t, with_pqr=True)
    return out["p"], out["q"], out["r"]


def mu_kernel(cfg: ScenarioConfig, t: float) -> float:
    """Interaction-noise decoherence exponent <Gamma(t)^2>.

    (1/pi) * integral over both signs of omega of F_c(omega t)/omega^2 * S(omega),
    evaluated as twice the positive half-line by evenness.  F_c belongs to
    the product of the two switching functions.
    """
    if cfg.mode is not Mode.INTERACTION_NOISE:
        raise ConfigurationError("mu is defined only in interaction-noise mode")
    noise = cfg.noise
    if t == 0.0 or noise.A0 == 0.0:
        return 0.0
    comb = combine(cfg.seq1, cfg.seq2)

    def integrand(omega):
        return noise_S(noise, omega) * filter_weight(comb, omega, t)

    spec = QuadSpec(
        noise.omega_ir,
        noise.omega_uv,
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        oscillation_period_hint=2.0 * math.pi / t,
    )
    res = integrate(integrand, spec)
    _check([res], ["mu"], t)
    return 2.0 / math.pi * res.value


def compute_kernels(cfg: ScenarioConfig, t: float) -> KernelSet:
    """Evaluate every kernel at one time; all-zero at t = 0."""
    if t == 0.0:
        return KernelSet(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    z = z_integral(cfg.seq1, t)
    if cfg.mode is Mode.COMMON_BATH:
        out = _bath_pass(cfg, t, with_pqr=False)
        return KernelSet(
            t, z, out["gamma"], out["D"], t, 0.0, 0.0, 0.0, 0.0, out["D"] / 2.0
        )
    h = h_integral(cfg.seq1, cfg.seq2, t)
    out = _bath_pass(cfg, t, with_pqr=True)
    mu = mu_kernel(cfg, t)
    phi_phase = out["D"] / 2.0 - cfg.lambda0 * h
    return KernelSet(
        t, z, out["gamma"], out["D"], h, mu, out["p"], out["q"], out["r"], phi_phase
    )


def kernel_series(cfg: ScenarioConfig, workers: int | None = None) -> list[KernelSet]:
    """Kernels over the configured time grid.

    Grid points are independent pure computations; they may run on a small
    thread pool (numpy releases the GIL) without affecting the result.
    """
    times = cfg.time_grid
    if workers is None:
        workers = min(4, os.cpu_count() or 1)
    if workers <= 1 or len(times) <= 1:
        return [compute_kernels(cfg, t) for t in times]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: compute_kernels(cfg, t), times))
