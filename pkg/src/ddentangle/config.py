"""Scenario configuration: flat key = value text with [curve] sections.

Global keys set shared parameters; every [curve] section inherits them
and may override any key.  A file without [curve] sections describes a
single unnamed curve.  The format is deliberately flat so golden files
diff cleanly.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigurationError
from .kernels import Mode, ScenarioConfig
from .pulses import SequenceKind, custom_sequence, make_sequence
from .spectra import BathSpectrum, NoiseSpectrum

DEFAULTS: dict[str, str] = {
    "name": "curve",
    "mode": "common_bath",
    "g": "0.1",
    "ohmicity": "1.0",
    "omega_c": "20.0",
    "beta": "1.0",
    "omega0": "1.0",
    "lambda0": "0.0",
    "sequence": "free",
    "n": "0",
    "alpha": "0.0",
    "custom_times": "",
    "window": "",
    "A0": "0.0",
    "noise_a": "1.0",
    "omega_ir": "",
    "omega_uv": "",
    "t_max": "10.0",
    "points": "400",
    "rel_tol": "1e-8",
    "abs_tol": "1e-12",
    "omega_max_factor": "50.0",
}

_FLOAT_KEYS = {
    "g", "ohmicity", "omega_c", "beta", "omega0", "lambda0", "alpha", "window",
    "A0", "noise_a", "omega_ir", "omega_uv", "t_max", "rel_tol", "abs_tol",
    "omega_max_factor",
}
_INT_KEYS = {"n", "points"}


def parse_config(text: str) -> list[dict[str, str]]:
    """Parse the flat format into one dict per curve (globals applied)."""
    base = dict(DEFAULTS)
    curves: list[dict[str, str]] = []
    current: dict[str, str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section != "curve":
                raise ConfigurationError(
                    f"line {lineno}: unknown section [{section}]; only [curve] exists"
                )
            current = {}
            curves.append(current)
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        if current is None:
            base[key] = value
        else:
            current[key] = value
    if not curves:
        curves = [{}]
    return [dict(base, **overrides) for overrides in curves]


def _to_float(entry: dict[str, str], key: str) -> float:
    try:
        return float(entry[key])
    except ValueError as exc:
        raise ConfigurationError(f"key {key!r}: {entry[key]!r} is not a number") from exc


def _to_int(entry: dict[str, str], key: str) -> int:
    try:
        return int(entry[key])
    except ValueError as exc:
        raise ConfigurationError(f"key {key!r}: {entry[key]!r} is not an integer") from exc


def build_scenario(entry: dict[str, str]) -> tuple[str, ScenarioConfig]:
    """Turn one parsed curve dict into a named ScenarioConfig."""
    for key in entry:
        if key not in DEFAULTS:
            raise ConfigurationError(f"unknown key {key!r}")
    merged = dict(DEFAULTS, **entry)
    t_max = _to_float(merged, "t_max")
    points = _to_int(merged, "points")
    if t_max <= 0 or points < 2:
        raise ConfigurationError("time grid needs t_max > 0 and points >= 2")
    window = _to_float(merged, "window") if merged["window"] else t_max
    alpha = _to_float(merged, "alpha")

    kind = merged["sequence"].lower()
    try:
        kind = SequenceKind(kind)
    except ValueError as exc:
        raise ConfigurationError(f"unknown sequence kind {merged['sequence']!r}") from exc
    if kind is SequenceKind.CUSTOM:
        if not merged["custom_times"]:
            raise ConfigurationError("custom sequences need custom_times")
        times = [float(x) for x in merged["custom_times"].split(",") if x.strip()]
        seq1 = custom_sequence(times, window)
        seq2 = custom_sequence(times, window, shift=alpha) if alpha else None
    else:
        n = _to_int(merged, "n")
        seq1 = make_sequence(kind, n, window)
        seq2 = make_sequence(kind, n, window, shift=alpha) if alpha else None

    bath = BathSpectrum(
        g=_to_float(merged, "g"),
        s=_to_float(merged, "ohmicity"),
        omega_c=_to_float(merged, "omega_c"),
    )
    mode = Mode(merged["mode"].lower())
    noise = None
    if mode is Mode.INTERACTION_NOISE:
        omega_ir = _to_float(merged, "omega_ir") if merged["omega_ir"] else 2 * math.pi
        noise = NoiseSpectrum(
            A0=_to_float(merged, "A0"),
            a=_to_float(merged, "noise_a"),
            omega_ir=omega_ir,
            omega_uv=_to_float(merged, "omega_uv") if merged["omega_uv"] else None,
        )
    grid = tuple(float(x) for x in np.linspace(0.0, t_max, points))
    cfg = ScenarioConfig(
        bath=bath,
        seq1=seq1,
        seq2=seq2,
        noise=noise,
        beta=_to_float(merged, "beta"),
        omega0=_to_float(merged, "omega0"),
        lambda0=_to_float(merged, "lambda0"),
        mode=mode,
        time_grid=grid,
        rel_tol=_to_float(merged, "rel_tol"),
        abs_tol=_to_float(merged, "abs_tol"),
        omega_max_factor=_to_float(merged, "omega_max_factor"),
    )
    return merged["name"], cfg


def load_scenarios(text: str) -> list[tuple[str, ScenarioConfig]]:
    return [build_scenario(entry) for entry in parse_config(text)]
