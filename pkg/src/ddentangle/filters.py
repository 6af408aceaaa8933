"""Filter functions and the double-integral kernel d_n(omega, t).

phi(omega, t) is the finite-time Fourier transform of the switching
function; the filter F(omega t) = omega^2/2 |phi|^2 weights the bath
spectrum in every decoherence integral.  d_n is the twice-integrated
sine kernel behind the bath-mediated qubit-qubit phase; it comes in a
closed form (fast, used in production) and as an exact cell-sum over
sign-constant rectangles (the oracle both tests and the sign convention
are calibrated against).
"""

from __future__ import annotations

import numpy as np

from .pulses import segment_breakpoints, switching_profile

# |omega| * t below this value switches phi to a 4-term Taylor series to
# avoid catastrophic cancellation in the phase sum.
SMALL_PHASE = 1e-4

# The closed form theta + nu - t/omega evaluates to the negative of the
# direct double integral; calibrated once against dn_direct on free
# evolution at omega = 1, t = 1 and pinned by a test.
DN_CLOSED_SIGN = -1.0

# Complex work matrices are chunked to roughly this many entries.
_CHUNK_ENTRIES = 4_000_000


def _phase_coefficients(breaks: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Per-breakpoint coefficients c_b with i*omega*phi = sum c_b e^{i omega b}."""
    c = np.empty(len(breaks))
    c[0] = -signs[0]
    c[1:-1] = signs[:-1] - signs[1:]  # sign step at each interior boundary
    c[-1] = signs[-1]
    return c


def _sign_moments(breaks: np.ndarray, signs: np.ndarray, order: int = 4) -> np.ndarray:
    """Moments integral of s(u) * u^m du for m < order, exact per segment."""
    powers = np.arange(1, order + 1)
    upper = breaks[1:, None] ** powers[None, :]
    lower = breaks[:-1, None] ** powers[None, :]
    return np.einsum("k,km->m", signs, (upper - lower) / powers[None, :])


def _phi_chunked(breaks, signs, omega, t):
    """phi on an omega array, Taylor-protected near omega = 0."""
    coeffs = _phase_coefficients(breaks, signs)
    out = np.empty(omega.shape, dtype=complex)
    step = max(1, _CHUNK_ENTRIES // max(1, len(breaks)))
    moments = None
    for start in range(0, omega.size, step):
        w = omega[start : start + step]
        small = np.abs(w) * t < SMALL_PHASE
        phase_sum = np.exp(1j * np.outer(w, breaks)) @ coeffs
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = phase_sum / (1j * w)
        if small.any():
            if moments is None:
                moments = _sign_moments(breaks, signs)
            iw = 1j * w[small]
            vals[small] = (
                moments[0]
                + iw * (moments[1] + iw * (moments[2] / 2.0 + iw * moments[3] / 6.0))
            )
        out[start : start + step] = vals
    return out


def phi(seq, omega, t: float):
    """Integral of s(u) e^{i omega u} du from 0 to t.

    Accepts a PulseSequence or CombinedSwitching and scalar or array
    omega; tends to the switching integral Z(t) as omega -> 0.
    """
    breaks, signs = segment_breakpoints(seq, t)
    omega_arr = np.atleast_1d(np.asarray(omega, dtype=float))
    out = _phi_chunked(breaks, signs, omega_arr, t)
    return out if np.ndim(omega) else complex(out[0])


def filter_F(seq, omega, t: float):
    """Filter function F(omega t) = omega^2 / 2 * |phi|^2, non-negative."""
    omega_arr = np.asarray(omega, dtype=float)
    out = 0.5 * omega_arr**2 * np.abs(phi(seq, omega_arr, t)) ** 2
    return out if np.ndim(omega) else float(out)


def filter_weight(seq, omega, t: float):
    """Spectral weight F(omega t) / omega^2 = |phi|^2 / 2, finite at omega = 0."""
    out = 0.5 * np.abs(phi(seq, np.asarray(omega, dtype=float), t)) ** 2
    return out if np.ndim(omega) else float(out)


def filter_combined(comb, omega, t: float):
    """Filter function of a combined switching function (same closed form)."""
    return filter_F(comb, omega, t)


def _pulse_times_below(seq, t: float) -> np.ndarray:
    flips, _, window = switching_profile(seq)
    if not 0.0 < t <= window:
        raise ValueError(f"time {t} outside the sequence window (0, {window}]")
    return flips[flips < t]


def _dn_closed_terms(times: np.ndarray, w: np.ndarray, t: float) -> np.ndarray:
    """theta + nu - t/omega on one omega chunk, O(n) per abscissa.

    theta = [2 sum_m (-1)^(m-1) sin(w t_m) + (-1)^n sin(w t)] / w^2 and
    nu = (2/w^2) sum_{k=1..n} sum_{j<=k} (-1)^(k+j) {sin[w(t_{k+1}-t_j)]
    - sin[w(t_k-t_j)]}; the triangular double sum is evaluated through
    running partial sums S_k = sum_{j<=k} (-1)^(j-1) e^{i w t_j}.
    """
    n = len(times)
    e_t = np.exp(1j * w * t)
    term_a = (-1.0) ** (n + 1) * e_t.imag
    term_b = np.zeros_like(term_a)
    if n:
        ecols = np.exp(1j * np.outer(w, times))  # E_1..E_n
        alt = (-1.0) ** np.arange(n)  # (-1)^(j-1) for j = 1..n
        term_a += 2.0 * (ecols.imag @ -alt)
        s_run = np.cumsum(ecols * alt[None, :], axis=1)
        e_next = np.concatenate((ecols[:, 1:], e_t[:, None]), axis=1)
        delta_e = e_next - ecols
        k_sign = -alt  # (-1)^k for k = 1..n
        term_b = 2.0 * ((np.conj(s_run) * delta_e).imag @ k_sign)
    # raw = theta + nu - t/w is the negative of the direct double integral
    return -(t / w + (term_a + term_b) / w**2)


def dn_closed(seq, omega, t: float):
    """Closed form of the nested switching-sine double integral.

    Implements the theta + nu - t/omega structure for the pulse times
    below t, multiplied by DN_CLOSED_SIGN so that the result equals
    dn_direct.  A test checks the factorized triangular sum inside nu
    against its literal double-loop form.
    """
    times = _pulse_times_below(seq, t)
    omega_arr = np.atleast_1d(np.asarray(omega, dtype=float))
    if np.any(omega_arr <= 0):
        raise ValueError("dn kernels require omega > 0")
    out = np.empty(omega_arr.shape)
    step = max(1, _CHUNK_ENTRIES // max(1, len(times) + 1))
    for start in range(0, omega_arr.size, step):
        w = omega_arr[start : start + step]
        out[start : start + step] = DN_CLOSED_SIGN * _dn_closed_terms(times, w, t)
    return out if np.ndim(omega) else float(out[0])


def _merged_cells(seq1, seq2, t: float):
    """Common refinement of both sequences' segment partitions on [0, t]."""
    b1, s1 = segment_breakpoints(seq1, t)
    b2, s2 = segment_breakpoints(seq2, t)
    breaks = np.union1d(b1, b2)
    idx1 = np.clip(np.searchsorted(b1, breaks[:-1], side="right") - 1, 0, len(s1) - 1)
    idx2 = np.clip(np.searchsorted(b2, breaks[:-1], side="right") - 1, 0, len(s2) - 1)
    return breaks, s1[idx1], s2[idx2]


def dn_direct(seq1, seq2, omega: float, t: float) -> float:
    """Exact cell-sum of the double integral
    int_0^t dt1 int_0^t1 dt2 s1(t1) s2(t2) sin[omega (t1 - t2)].

    Every sign-constant rectangle and diagonal triangle has an elementary
    antiderivative, so the sum is exact to rounding.  This is the oracle
    the closed form is calibrated against; omega must be a positive scalar.
    """
    if omega <= 0:
        raise ValueError("dn kernels require omega > 0")
    breaks, sa, sb = _merged_cells(seq1, seq2, t)
    lo, hi = breaks[:-1], breaks[1:]
    # rectangles: cell i on the t1 axis, cell j < i on the t2 axis
    sin_hh = np.sin(omega * (hi[:, None] - hi[None, :]))
    sin_hl = np.sin(omega * (hi[:, None] - lo[None, :]))
    sin_lh = np.sin(omega * (lo[:, None] - hi[None, :]))
    sin_ll = np.sin(omega * (lo[:, None] - lo[None, :]))
    rect = (sin_hh - sin_hl - sin_lh + sin_ll) / omega**2
    mask = np.tril(np.ones_like(rect, dtype=bool), k=-1)
    total = float(np.einsum("i,j,ij->", sa, sb, rect * mask))
    # diagonal triangles t2 in [lo_i, t1], t1 in [lo_i, hi_i]
    dp = hi - lo
    total += float(np.dot(sa * sb, dp / omega - np.sin(omega * dp) / omega**2))
    return total


def _dn_ordered(breaks, signs_a, signs_b, omega: np.ndarray) -> np.ndarray:
    """Vectorized cell-sum of the ordered double integral, O(cells) per omega."""
    out = np.empty(omega.shape)
    cells = len(breaks) - 1
    step = max(1, _CHUNK_ENTRIES // max(1, cells + 1))
    dp = np.diff(breaks)
    diag_sign = signs_a * signs_b
    for start in range(0, omega.size, step):
        w = omega[start : start + step][:, None]
        e = np.exp(1j * w * breaks[None, :])
        de = e[:, 1:] - e[:, :-1]
        iw = 1j * w
        i1 = de / iw
        partial = np.cumsum(signs_b[None, :] * i1, axis=1)
        phi_b_start = np.concatenate(
            (np.zeros((len(w), 1), dtype=complex), partial[:, :-1]), axis=1
        )
        term1 = ((np.conj(phi_b_start) * i1) @ signs_a).imag
        e_dp = (e[:, 1:] * np.conj(e[:, :-1])).imag  # sin(omega * dp)
        wflat = w[:, 0]
        term2 = (dp[None, :] / wflat[:, None] - e_dp / wflat[:, None] ** 2) @ diag_sign
        out[start : start + step] = term1 + term2
    return out


def dn_pair(seq1, seq2, omega, t: float):
    """Symmetrized double-integral kernel (d12 + d21)/2 for a sequence pair.

    Reduces to dn_closed when both sequences share one switching function;
    this is the kernel the bath-mediated phase integrates against.
    """
    omega_arr = np.atleast_1d(np.asarray(omega, dtype=float))
    if np.any(omega_arr <= 0):
        raise ValueError("dn kernels require omega > 0")
    breaks, sa, sb = _merged_cells(seq1, seq2, t)
    d12 = _dn_ordered(breaks, sa, sb, omega_arr)
    d21 = _dn_ordered(breaks, sb, sa, omega_arr)
    out = 0.5 * (d12 + d21)
    return out if np.ndim(omega) else float(out[0])


class PairIntegrandWorkspace:
    """Shared evaluation of the first qubit's filter weight and the pair
    kernel d_pair on one omega batch.

    Both quantities need the same complex exponentials over the merged
    segment partition, which dominate the cost for hundreds of pulses, so
    the kernels module evaluates them together.
    """

    def __init__(self, seq1, seq2, t: float, identical: bool):
        self.t = t
        self.identical = identical
        if identical:
            self.breaks, self.signs = segment_breakpoints(seq1, t)
            self.coeffs = _phase_coefficients(self.breaks, self.signs)
            self.moments = _sign_moments(self.breaks, self.signs)
        else:
            self.breaks, self.sa, self.sb = _merged_cells(seq1, seq2, t)
            self.coeffs = _phase_coefficients(self.breaks, self.sa)
            self.moments = _sign_moments(self.breaks, self.sa)
        self.dp = np.diff(self.breaks)

    def _weight_from(self, e, w):
        phase_sum = e @ self.coeffs.astype(complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            phi_vals = phase_sum / (1j * w)
        small = np.abs(w) * self.t < SMALL_PHASE
        if small.any():
            iw = 1j * w[small]
            m = self.moments
            phi_vals[small] = m[0] + iw * (m[1] + iw * (m[2] / 2.0 + iw * m[3] / 6.0))
        return 0.5 * np.abs(phi_vals) ** 2

    def evaluate(self, omega: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (F1(omega t)/omega^2, d_pair(omega, t)) on the batch."""
        weight = np.empty(omega.shape)
        dpair = np.empty(omega.shape)
        cells = len(self.breaks)
        step = max(1, _CHUNK_ENTRIES // max(1, cells))
        for start in range(0, omega.size, step):
            w = omega[start : start + step]
            e = np.exp(1j * np.outer(w, self.breaks))
            weight[start : start + step] = self._weight_from(e, w)
            if self.identical:
                dpair[start : start + step] = self._dn_closed_from(e, w)
            else:
                d12 = self._ordered_from(e, w, self.sa, self.sb)
                d21 = self._ordered_from(e, w, self.sb, self.sa)
                dpair[start : start + step] = 0.5 * (d12 + d21)
        return weight, dpair

    def _dn_closed_from(self, e, w):
        n = len(self.breaks) - 2
        e_t = e[:, -1]
        term_a = (-1.0) ** (n + 1) * e_t.imag
        term_b = np.zeros_like(term_a)
        if n:
            ecols = e[:, 1:-1]
            alt = (-1.0) ** np.arange(n)
            term_a += 2.0 * (ecols.imag @ -alt)
            s_run = np.cumsum(ecols * alt[None, :], axis=1)
            e_next = np.concatenate((ecols[:, 1:], e_t[:, None]), axis=1)
            delta_e = e_next - ecols
            term_b = 2.0 * ((np.conj(s_run) * delta_e).imag @ -alt)
        return DN_CLOSED_SIGN * -(self.t / w + (term_a + term_b) / w**2)

    def _ordered_from(self, e, w, signs_a, signs_b):
        iw = 1j * w[:, None]
        de = e[:, 1:] - e[:, :-1]
        i1 = de / iw
        partial = np.cumsum(signs_b[None, :] * i1, axis=1)
        phi_b_start = np.concatenate(
            (np.zeros((len(w), 1), dtype=complex), partial[:, :-1]), axis=1
        )
        term1 = ((np.conj(phi_b_start) * i1) @ signs_a).imag
        sin_dp = (e[:, 1:] * np.conj(e[:, :-1])).imag
        term2 = (self.dp[None, :] / w[:, None] - sin_dp / w[:, None] ** 2) @ (
            signs_a * signs_b
        )
        return term1 + term2
