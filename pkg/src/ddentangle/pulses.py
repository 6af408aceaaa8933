"""Pulse sequences and their switching functions.

A train of instantaneous pi pulses applied inside a window [0, T] turns
sigma_z into s(t)*sigma_z with s(t) = +/-1 flipping sign at every pulse
instant.  This module generates the standard pulse-timing families
(PDD, CPMG, UDD), evaluates switching functions including a time shift
between the sequences on the two qubits, and forms the product switching
function of two sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigurationError

# Two flips closer than this fraction of the window cancel exactly when
# sequences are combined.
COINCIDENCE_RTOL = 1e-12


class SequenceKind(str, Enum):
    FREE = "free"
    PDD = "pdd"
    CPMG = "cpmg"
    UDD = "udd"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PulseSequence:
    """Pulse instants inside (0, window), plus an optional time shift.

    A shifted sequence evaluates the base switching pattern at t + shift:
    flip instants translate to t_k - shift, instants that leave the window
    are discarded, and the initial sign absorbs the discarded flips.
    """

    kind: SequenceKind
    n: int
    window: float
    times: tuple[float, ...] = ()
    shift: float = 0.0

    def __post_init__(self):
        if self.window <= 0:
            raise ConfigurationError("sequence window must be positive")
        if self.n < 0:
            raise ConfigurationError("pulse count must be non-negative")
        if self.shift < 0:
            raise ConfigurationError("time shift must be non-negative")
        if self.kind is SequenceKind.FREE:
            if self.times:
                raise ConfigurationError("a free sequence carries no pulses")
        elif len(self.times) != self.n:
            raise ConfigurationError(
                f"{self.kind.value} sequence needs {self.n} pulse times, "
                f"got {len(self.times)}"
            )
        prev = 0.0
        for tk in self.times:
            if not prev < tk < self.window:
                raise ConfigurationError(
                    "pulse times must be strictly increasing and interior "
                    f"to (0, {self.window}); offending time {tk}"
                )
            prev = tk


@dataclass(frozen=True)
class CombinedSwitching:
    """Sign-flip instants of the product s1(t) * s2(t) on [0, window]."""

    window: float
    merged_times: tuple[float, ...] = ()
    initial_sign: int = 1

    def __post_init__(self):
        if self.initial_sign not in (1, -1):
            raise ConfigurationError("initial sign must be +1 or -1")


def make_sequence(kind, n: int, window: float, shift: float = 0.0) -> PulseSequence:
    """Build a PDD, CPMG, UDD or free sequence with n pulses in (0, window).

    PDD:  t_j = j * window / (n + 1)
    CPMG: t_j = (j - 1/2) * window / n
    UDD:  t_j = window * sin^2(j*pi / (2n + 2))
    """
    kind = SequenceKind(kind)
    if kind is SequenceKind.FREE or n == 0:
        if kind is SequenceKind.CPMG and n == 0:
            raise ConfigurationError("CPMG needs at least one pulse")
        if kind is SequenceKind.CUSTOM:
            raise ConfigurationError("custom sequences take explicit times")
        return PulseSequence(SequenceKind.FREE if n == 0 else kind, 0, window, (), shift)
    j = np.arange(1, n + 1)
    if kind is SequenceKind.PDD:
        times = j * window / (n + 1)
    elif kind is SequenceKind.CPMG:
        times = (j - 0.5) * window / n
    elif kind is SequenceKind.UDD:
        times = window * np.sin(j * np.pi / (2 * n + 2)) ** 2
    else:
        raise ConfigurationError("custom sequences take explicit times")
    return PulseSequence(kind, n, window, tuple(float(x) for x in times), shift)


def custom_sequence(times, window: float, shift: float = 0.0) -> PulseSequence:
    """Wrap a user-supplied sorted list of pulse instants."""
    times = tuple(float(x) for x in times)
    return PulseSequence(SequenceKind.CUSTOM, len(times), window, times, shift)


def effective_flips(seq: PulseSequence) -> tuple[np.ndarray, int]:
    """Flip instants and the sign at t = 0+ after applying the shift."""
    times = np.asarray(seq.times, dtype=float)
    if seq.shift == 0.0:
        return times, 1
    shifted = times - seq.shift
    keep = shifted > 0.0
    initial_sign = -1 if (np.count_nonzero(~keep) % 2) else 1
    return shifted[keep], initial_sign


def switching_profile(obj) -> tuple[np.ndarray, int, float]:
    """Normalize a PulseSequence or CombinedSwitching to (flips, sign, window)."""
    if isinstance(obj, PulseSequence):
        flips, sign = effective_flips(obj)
        return flips, sign, obj.window
    if isinstance(obj, CombinedSwitching):
        return np.asarray(obj.merged_times, dtype=float), obj.initial_sign, obj.window
    raise TypeError(f"expected a switching function carrier, got {type(obj)!r}")


def segment_breakpoints(obj, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Breakpoints [0, ..., t] and the constant sign on each segment.

    Flips at instants >= t do not contribute; a flip exactly at t would
    bound a zero-length segment and is dropped.
    """
    flips, sign, window = switching_profile(obj)
    if not 0.0 <= t <= window:
        raise ValueError(f"time {t} outside the sequence window [0, {window}]")
    inside = flips[flips < t]
    breaks = np.concatenate(([0.0], inside, [t]))
    signs = sign * (-1.0) ** np.arange(len(breaks) - 1)
    return breaks, signs


def switching_value(seq, t_prime: float) -> int:
    """Sign s(t') of the switching function, +1 before the first pulse.

    The flip at a pulse instant is counted at the instant itself, so the
    returned value is the post-flip sign when t' coincides with a pulse.
    """
    flips, sign, window = switching_profile(seq)
    if not 0.0 <= t_prime <= window:
        raise ValueError(f"time {t_prime} outside the sequence window [0, {window}]")
    count = int(np.searchsorted(flips, t_prime, side="right"))
    return sign * (-1 if count % 2 else 1)


def z_integral(seq, t: float) -> float:
    """Exact integral of the switching sign from 0 to t."""
    breaks, signs = segment_breakpoints(seq, t)
    return float(np.dot(signs, np.diff(breaks)))


def combine(seq1: PulseSequence, seq2: PulseSequence) -> CombinedSwitching:
    """Switching function of the product s1(t) * s2(t).

    The flip set is the symmetric difference of the two flip sets:
    coincident flips cancel pairwise, and the initial sign is the product
    of the two initial signs.
    """
    f1, s1, w1 = switching_profile(seq1)
    f2, s2, w2 = switching_profile(seq2)
    if w1 != w2:
        raise ConfigurationError(
            f"cannot combine sequences with windows {w1} and {w2}"
        )
    merged = np.sort(np.concatenate((f1, f2)))
    tol = COINCIDENCE_RTOL * w1
    kept: list[float] = []
    i = 0
    while i < len(merged):
        if i + 1 < len(merged) and merged[i + 1] - merged[i] <= tol:
            i += 2  # a double flip is no flip
        else:
            kept.append(float(merged[i]))
            i += 1
    return CombinedSwitching(w1, tuple(kept), int(s1 * s2))


def h_integral(seq1: PulseSequence, seq2: PulseSequence, t: float) -> float:
    """Exact integral of s1(t') * s2(t') from 0 to t."""
    return z_integral(combine(seq1, seq2), t)
