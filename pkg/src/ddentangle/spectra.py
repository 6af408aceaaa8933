"""Bath spectral density, classical noise spectrum and thermal factors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

# Beyond this value of beta*omega the Bose occupation underflows double
# precision anyway; short-circuit to avoid overflow warnings in expm1.
_BOSE_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class BathSpectrum:
    """Power-law spectral density with an exponential cutoff.

    J(w) = g * w^s / w_c^(s-1) * exp(-w / w_c)
    """

    g: float
    s: float = 1.0
    omega_c: float = 20.0
    cutoff: str = "exponential"

    def __post_init__(self):
        if self.g < 0:
            raise ConfigurationError("coupling strength g must be non-negative")
        if self.s <= 0:
            raise ConfigurationError("Ohmicity exponent must be positive")
        if self.omega_c <= 0:
            raise ConfigurationError("cutoff frequency must be positive")
        if self.cutoff != "exponential":
            raise ConfigurationError(f"unsupported cutoff kind {self.cutoff!r}")


@dataclass(frozen=True)
class NoiseSpectrum:
    """1/f^a spectrum A0^(1+a) / |w|^a, supported on omega_ir <= |w| <= omega_uv."""

    A0: float
    a: float = 1.0
    omega_ir: float = 2 * np.pi
    # The infrared cutoff is physical; the ultraviolet one bounds quadrature
    # domains.  It must sit below the passband of the combined filter for a
    # time-shifted pulse pair to suppress the noise (see mu_kernel).
    omega_uv: float | None = None

    def __post_init__(self):
        if self.A0 < 0:
            raise ConfigurationError("noise amplitude A0 must be non-negative")
        if not 0.5 <= self.a <= 1.5:
            raise ConfigurationError("noise exponent a must lie in [0.5, 1.5]")
        if self.omega_ir <= 0:
            raise ConfigurationError("infrared cutoff must be positive")
        if self.omega_uv is None:
            object.__setattr__(self, "omega_uv", 10.0 * self.omega_ir)
        if self.omega_uv <= self.omega_ir:
            raise ConfigurationError("ultraviolet cutoff must exceed the infrared one")


def bath_J(spec: BathSpectrum, omega):
    """Spectral density J(omega) for omega >= 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("bath spectral density is defined for omega >= 0")
    out = spec.g * omega**spec.s / spec.omega_c ** (spec.s - 1.0) * np.exp(
        -omega / spec.omega_c
    )
    return out if out.ndim else float(out)


def noise_S(spec: NoiseSpectrum, omega):
    """Even noise spectrum S(omega); zero outside the supported band."""
    omega = np.asarray(omega, dtype=float)
    mag = np.abs(omega)
    inside = (mag >= spec.omega_ir) & (mag <= spec.omega_uv)
    safe = np.where(inside, mag, 1.0)
    out = np.where(inside, spec.A0 ** (1.0 + spec.a) / safe**spec.a, 0.0)
    return out if out.ndim else float(out)


def thermal_coth(beta: float, omega):
    """coth(beta * omega / 2) for omega > 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("thermal_coth requires omega > 0")
    out = 1.0 / np.tanh(0.5 * beta * omega)
    return out if out.ndim else float(out)


def bose_n(beta: float, omega):
    """Bose-Einstein occupation 1 / (exp(beta * omega) - 1) for omega > 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("bose_n requires omega > 0")
    x = beta * omega
    out = np.where(x < _BOSE_EXP_LIMIT, 1.0 / np.expm1(np.minimum(x, _BOSE_EXP_LIMIT)), 0.0)
    return out if out.ndim else float(out)
