"""Command-line interface.

Subcommands: figure (built-in publication scenarios), run (scenario
config file), sweep-alpha, kernels, filter, and the oracle group
(single-mode, mc-noise, dn).  Exit codes: 0 success, 2 configuration
error, 3 numerical non-convergence, 4 integrity violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .config import load_scenarios
from .dynamics import evolve_state, plus_plus_state
from .errors import ConfigurationError, DdentangleError
from .figures import (
    FIGURES,
    kernels_csv,
    run_figure,
    run_scenario,
    scenario_csv,
    state_csv,
    sweep_csv,
    sweep_alpha,
)
from .filters import dn_closed, dn_direct, filter_F
from .kernels import Mode, kernel_series, mu_kernel
from .oracles import DiscreteModeBath, discrete_kernel_set, mc_gamma_variance, single_mode_evolve
from .pulses import make_sequence


def _fmt(value: float) -> str:
    out = format(float(value), ".12g")
    return "0" if out == "-0" else out


def _write(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _parse_grid(spec: str, name: str) -> np.ndarray:
    try:
        start, stop, count = spec.split(":")
        return np.linspace(float(start), float(stop), int(count))
    except ValueError as exc:
        raise ConfigurationError(
            f"{name} must look like start:stop:count, got {spec!r}"
        ) from exc


def _load_with_overrides(args) -> list:
    with open(args.config, "r", encoding="utf-8") as handle:
        text = handle.read()
    scenarios = load_scenarios(text)
    if args.rel_tol is not None:
        scenarios = [
            (name, dataclasses.replace(cfg, rel_tol=args.rel_tol))
            for name, cfg in scenarios
        ]
    return scenarios


def _cmd_figure(args) -> int:
    written = run_figure(args.figure_id, args.out, workers=args.workers)
    for path in written:
        print(path)
    return 0


def _cmd_run(args) -> int:
    for name, cfg in _load_with_overrides(args):
        result = run_scenario(cfg, name, workers=args.workers)
        slug = name.replace(" ", "_")
        _write(scenario_csv(result), f"{args.out}/{slug}.csv" if args.out else None)
        if args.out:
            print(f"{args.out}/{slug}.csv")
    return 0


def _cmd_sweep_alpha(args) -> int:
    with open(args.config, "r", encoding="utf-8") as handle:
        text = handle.read()
    from .config import parse_config

    entries = parse_config(text)
    if len(entries) != 1:
        raise ConfigurationError("sweep-alpha expects a single-curve config")
    alphas = np.linspace(args.alpha_min, args.alpha_max, args.steps)
    rows = sweep_alpha(entries[0], alphas, workers=args.workers)
    _write(sweep_csv(rows), args.out)
    return 0


def _cmd_kernels(args) -> int:
    for name, cfg in _load_with_overrides(args):
        series = kernel_series(cfg, workers=args.workers)
        slug = name.replace(" ", "_")
        _write(kernels_csv(series), f"{args.out}/{slug}_kernels.csv" if args.out else None)
        if args.out:
            print(f"{args.out}/{slug}_kernels.csv")
    return 0


def _cmd_filter(args) -> int:
    seq = make_sequence(args.sequence, args.n, args.window, shift=args.alpha)
    omegas = _parse_grid(args.omega_grid, "--omega-grid")
    t = args.t if args.t is not None else args.window
    values = filter_F(seq, omegas, t)
    lines = ["omega,F"]
    lines += [f"{_fmt(w)},{_fmt(v)}" for w, v in zip(omegas, values)]
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_oracle_single_mode(args) -> int:
    seq1 = make_sequence(args.sequence, args.n, args.window)
    seq2 = make_sequence(args.sequence, args.n, args.window, shift=args.alpha)
    bath = DiscreteModeBath(
        modes=((args.omega1, complex(args.g1)),),
        fock_cutoff=args.fock,
        beta=args.beta,
    )
    rho0 = plus_plus_state()
    exact = single_mode_evolve(bath, seq1, seq2, args.omega0, args.t, rho0)
    ks = discrete_kernel_set(bath, seq1, seq2, args.t)
    mode = Mode.COMMON_BATH if args.alpha == 0.0 else Mode.INTERACTION_NOISE
    formula = evolve_state(rho0, ks, mode, args.omega0)
    lines = ["row,col,formula_re,formula_im,oracle_re,oracle_im,abs_resid,rel_resid"]
    for i in range(4):
        for j in range(4):
            f, e = formula.matrix[i, j], exact.matrix[i, j]
            resid = abs(f - e)
            lines.append(
                ",".join(
                    [str(i), str(j)]
                    + [_fmt(v) for v in (f.real, f.imag, e.real, e.imag)]
                    + [_fmt(resid), _fmt(resid / max(abs(e), 1e-300))]
                )
            )
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_oracle_mc_noise(args) -> int:
    scenarios = _load_with_overrides(args)
    name, cfg = scenarios[0]
    if cfg.mode is not Mode.INTERACTION_NOISE:
        raise ConfigurationError("mc-noise needs an interaction_noise scenario")
    lines = ["t,mc_mean,mc_variance,se_variance,mu,z_score"]
    for t in args.t:
        stats = mc_gamma_variance(
            cfg.noise, cfg.seq1, cfg.seq2, t, args.realizations, args.seed
        )
        mu = mu_kernel(cfg, t)
        z = (stats.variance - mu) / stats.se_variance
        lines.append(
            ",".join(
                _fmt(v)
                for v in (t, stats.mean, stats.variance, stats.se_variance, mu, z)
            )
        )
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_oracle_dn(args) -> int:
    seq = make_sequence(args.sequence, args.n, args.window)
    omegas = _parse_grid(args.omega_grid, "--omega-grid")
    times = _parse_grid(args.t_grid, "--t-grid")
    lines = ["omega,t,closed,direct,abs_resid,rel_resid"]
    for t in times:
        for w in omegas:
            closed = dn_closed(seq, float(w), float(t))
            direct = dn_direct(seq, seq, float(w), float(t))
            resid = abs(closed - direct)
            lines.append(
                ",".join(
                    _fmt(v)
                    for v in (w, t, closed, direct, resid, resid / max(abs(direct), 1e-300))
                )
            )
    _write("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddentangle",
        description="Bath-induced two-qubit entanglement under pulse sequences",
    )
    parser.add_argument("--rel-tol", type=float, default=None, help="override quadrature rel_tol")
    parser.add_argument("--seed", type=int, default=12345, help="seed for stochastic oracles")
    parser.add_argument("--workers", type=int, default=None, help="thread count for time grids")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figure", help="run a built-in figure scenario")
    p.add_argument("figure_id", choices=sorted(FIGURES))
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("run", help="run scenarios from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="output directory (default stdout)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep-alpha", help="sweep the pulse time shift")
    p.add_argument("--config", required=True)
    p.add_argument("--alpha-min", type=float, required=True)
    p.add_argument("--alpha-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sweep_alpha)

    p = sub.add_parser("kernels", help="emit kernel time series as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_kernels)

    p = sub.add_parser("filter", help="emit the filter function F(omega t) as CSV")
    p.add_argument("--sequence", default="pdd", choices=["free", "pdd", "cpmg", "udd"])
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--window", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--t", type=float, default=None, help="evaluation time (default window)")
    p.add_argument("--omega-grid", required=True, help="start:stop:count")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_filter)

    oracle = sub.add_parser("oracle", help="independent ground-truth comparisons")
    osub = oracle.add_subparsers(dest="oracle_command", required=True)

    p = osub.add_parser("single-mode", help="formula vs exact Hilbert-space propagation")
    p.add_argument("--sequence", default="pdd", choices=["free", "pdd", "cpmg", "udd"])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--window", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--omega1", type=float, default=1.0)
    p.add_argument("--g1", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--omega0", type=float, default=1.0)
    p.add_argument("--fock", type=int, default=40)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle_single_mode)

    p = osub.add_parser("mc-noise", help="Monte Carlo variance of the noise phase vs mu")
    p.add_argument("--config", required=True)
    p.add_argument("--t", type=float, nargs="+", required=True)
    p.add_argument("--realizations", type=int, default=10_000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle_mc_noise)

    p = osub.add_parser("dn", help="closed-form vs cell-sum double-integral kernel")
    p.add_argument("--sequence", default="pdd", choices=["free", "pdd", "cpmg", "udd"])
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--window", type=float, default=1.0)
    p.add_argument("--omega-grid", required=True, help="start:stop:count")
    p.add_argument("--t-grid", required=True, help="start:stop:count")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle_dn)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DdentangleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 2)


if __name__ == "__main__":
    sys.exit(main())
