"""Command-line surface emitting capacities, curves, and figure datasets.

stdout carries machine-parseable JSON or CSV only; diagnostics go to stderr.
Floats in CSV are printed with 17 significant digits so files round-trip and
stay byte-stable across runs. JSON reports carry a schema_version and the
wall-clock time; the wall-clock field is omitted when writing to a file so
that identical runs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .capacity import (
    capacity_amplitude_damping,
    capacity_depolarizing,
    chi_ad_curve,
    chi_dep_curve,
)
from .channels import AmplitudeDamping, Depolarizing, MixedChannelPair
from .errors import (
    BudgetExceededError,
    CertificationError,
    DomainError,
    SolverError,
)
from .mixtures import minimax_capacity
from .oracle import DEFAULT_BUDGET, OracleConfig, oracle_capacity, oracle_minimax, plan_search_size
from .states import pure_state

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_IO = 4
EXIT_BUDGET = 5
EXIT_CERTIFY = 6

_DEFAULTS = {"tol": 1e-10, "format": None, "threads": 1, "seed": 0}


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _parse_config_value(raw: str):
    text = raw.strip().strip('"').strip("'")
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def _load_config_file(path: str) -> dict:
    """Parse simple ``key = value`` lines; '#' starts a comment."""
    settings = {}
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"config line is not 'key = value': {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            settings[key.strip()] = _parse_config_value(value)
    return settings


def _settings(args) -> dict:
    path = getattr(args, "config", None)
    if path is None and os.path.exists("qchan.toml"):
        path = "qchan.toml"
    return _load_config_file(path) if path else {}


def _resolve(args, settings, key, default):
    """Precedence: command-line flag > config file > default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in settings:
        return settings[key]
    return default


def _resolve_threads(args, settings) -> int:
    value = _resolve(args, settings, "threads", None)
    if value is None:
        env = os.environ.get("QCHAN_THREADS")
        value = int(env) if env else 1
    threads = int(value)
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    return threads


def _write_csv(out, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(report: dict, out) -> None:
    if out:
        trimmed = {k: v for k, v in report.items() if k != "wall_time_s"}
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(json.dumps(trimmed, indent=2) + "\n")
    else:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")


def _emit_rows(args, fmt, header, rows, report_base):
    """Write curve-style output as CSV (default) or a JSON report."""
    if fmt in (None, "csv"):
        _write_csv(args.out, header, rows)
    elif fmt == "json":
        report = dict(report_base)
        report["rows"] = [dict(zip(header, row)) for row in rows]
        _emit_json(report, args.out)
    else:
        raise DomainError(f"unknown format {fmt!r}")


def _report_base(command: str, inputs: dict, started: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "wall_time_s": time.perf_counter() - started,
    }


def _parse_channel(kind, gamma, lam):
    if kind == "ad":
        if gamma is None:
            raise DomainError("--channel ad requires --gamma")
        return AmplitudeDamping(gamma)
    if kind == "dep":
        if lam is None:
            raise DomainError("--channel dep requires --lambda")
        return Depolarizing(lam)
    raise DomainError(f"unknown channel kind {kind!r}")


def _parse_channel_spec(text: str):
    """Compact channel spec: 'ad:<gamma>' or 'dep:<lambda>'."""
    kind, sep, value = text.partition(":")
    if not sep:
        raise DomainError(f"channel spec must look like 'ad:0.5' or 'dep:0.3', got {text!r}")
    try:
        param = float(value)
    except ValueError as exc:
        raise DomainError(f"bad channel parameter in {text!r}") from exc
    if kind == "ad":
        return AmplitudeDamping(param)
    if kind == "dep":
        return Depolarizing(param)
    raise DomainError(f"unknown channel kind {kind!r} in {text!r}")


def _channel_inputs(channel) -> dict:
    if isinstance(channel, AmplitudeDamping):
        return {"channel": "ad", "gamma": channel.gamma}
    return {"channel": "dep", "lambda": channel.lam}


def _grid(start: float, end: float, step: float):
    """Inclusive grid hitting both endpoints exactly."""
    if not (0.0 <= start < end <= 1.0):
        raise DomainError(f"need 0 <= start < end <= 1, got [{start}, {end}]")
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {step}")
    count = int(round((end - start) / step))
    if count < 1:
        raise DomainError(f"step {step} does not fit in [{start}, {end}]")
    return [start + (end - start) * i / count for i in range(count + 1)]


def _solve_capacity(channel, tol):
    if isinstance(channel, AmplitudeDamping):
        return capacity_amplitude_damping(channel.gamma, tol)
    return capacity_depolarizing(channel.lam)


def _oracle_config(args) -> OracleConfig:
    return OracleConfig(
        n_states=args.n_states,
        a_grid=args.a_grid,
        phase_grid=args.phase_grid,
        prob_grid=args.prob_grid,
        restrict_real_b=not args.complex_b,
    )


def cmd_capacity(args, settings) -> int:
    started = time.perf_counter()
    tol = float(_resolve(args, settings, "tol", _DEFAULTS["tol"]))
    channel = _parse_channel(args.channel, args.gamma, args.lam)
    result = _solve_capacity(channel, tol)
    fmt = _resolve(args, settings, "format", None)
    if fmt == "csv":
        header = ["capacity_bits", "a_max", "residual", "iterations", "method"]
        rows = [(result.capacity_bits, result.a_max, result.residual,
                 str(result.iterations), result.method)]
        _write_csv(args.out, header, rows)
        return EXIT_OK
    inputs = _channel_inputs(channel)
    inputs.update({"tol": tol, "seed": args.seed, "threads": _resolve_threads(args, settings)})
    report = _report_base("capacity", inputs, started)
    report["outputs"] = {
        "capacity_bits": result.capacity_bits,
        "a_max": result.a_max,
        "residual": result.residual,
        "iterations": result.iterations,
        "method": result.method,
    }
    report["tolerances"] = {"tol": tol}
    _emit_json(report, args.out)
    return EXIT_OK


def cmd_curve(args, settings) -> int:
    started = time.perf_counter()
    tol = float(_resolve(args, settings, "tol", _DEFAULTS["tol"]))
    threads = _resolve_threads(args, settings)
    params = _grid(args.start, args.end, args.step)
    if args.family == "ad":
        def solve(p):
            r = capacity_amplitude_damping(p, tol)
            return (p, r.capacity_bits, r.a_max)
    elif args.family == "dep":
        def solve(p):
            r = capacity_depolarizing(p)
            return (p, r.capacity_bits, r.a_max)
    else:
        raise DomainError(f"unknown family {args.family!r}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(solve, params))
    else:
        rows = [solve(p) for p in params]
    base = _report_base("curve", {
        "family": args.family, "start": args.start, "end": args.end,
        "step": args.step, "tol": tol, "seed": args.seed, "threads": threads,
    }, started)
    _emit_rows(args, _resolve(args, settings, "format", None),
               ["param", "capacity_bits", "a_max"], rows, base)
    return EXIT_OK


def _bisect_crossing(diff, lo, hi, f_lo, tol=1e-12):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = diff(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cmd_chi_curves(args, settings) -> int:
    started = time.perf_counter()
    gamma = args.gamma
    lam = args.lam
    if gamma is None or lam is None:
        raise DomainError("chi-curves requires --gamma and --lambda")
    grid = _grid(0.0, 1.0, args.a_step)
    arr = np.array(grid)
    ad_vals = chi_ad_curve(gamma, arr)
    dep_vals = chi_dep_curve(lam, arr)

    def diff(a):
        return chi_ad_curve(gamma, a) - chi_dep_curve(lam, a)

    rows = [
        (grid[i], float(ad_vals[i]), float(dep_vals[i]),
         float(min(ad_vals[i], dep_vals[i])), "0")
        for i in range(len(grid))
    ]
    d = ad_vals - dep_vals
    for i in range(1, len(grid) - 2):
        if d[i] == 0.0:
            rows[i] = rows[i][:4] + ("1",)
            continue
        if d[i] * d[i + 1] < 0.0:
            a_c = _bisect_crossing(diff, grid[i], grid[i + 1], d[i])
            chi_a = chi_ad_curve(gamma, a_c)
            chi_d = chi_dep_curve(lam, a_c)
            rows.append((a_c, chi_a, chi_d, min(chi_a, chi_d), "1"))
    rows.sort(key=lambda r: r[0])
    base = _report_base("chi-curves", {
        "gamma": gamma, "lambda": lam, "a_step": args.a_step, "seed": args.seed,
    }, started)
    _emit_rows(args, _resolve(args, settings, "format", None),
               ["a", "chi_ad", "chi_dep", "min_chi", "crossing"], rows, base)
    return EXIT_OK


def cmd_ellipse(args, settings) -> int:
    started = time.perf_counter()
    gamma = args.gamma
    if gamma is None:
        raise DomainError("ellipse requires --gamma")
    if args.n_points < 3:
        raise DomainError(f"--n-points must be >= 3, got {args.n_points}")
    tol = float(_resolve(args, settings, "tol", _DEFAULTS["tol"]))
    channel = AmplitudeDamping(gamma)
    root = math.sqrt(1.0 - gamma)
    rows = []
    for k in range(args.n_points):
        theta = 2.0 * math.pi * k / args.n_points
        a_in = 0.5 * (1.0 + math.cos(theta))
        b_in = 0.5 * math.sin(theta)
        a_out = a_in + (1.0 - a_in) * gamma
        rows.append((a_in, b_in, a_out, b_in * root, "0"))
    best = capacity_amplitude_damping(gamma, tol)
    for sign in (1.0, -1.0):
        state = pure_state(best.a_max, sign)
        b_in = state.b.real
        rows.append((state.a, b_in, state.a + (1.0 - state.a) * gamma, b_in * root, "1"))
    base = _report_base("ellipse", {
        "gamma": gamma, "n_points": args.n_points, "tol": tol, "seed": args.seed,
    }, started)
    _emit_rows(args, _resolve(args, settings, "format", None),
               ["a_in", "b_in", "a_out", "b_out", "optimal"], rows, base)
    return EXIT_OK


def _minimax_pair(args) -> MixedChannelPair:
    if args.ch1 is not None or args.ch2 is not None:
        if args.ch1 is None or args.ch2 is None:
            raise DomainError("--ch1 and --ch2 must be given together")
        return MixedChannelPair(
            _parse_channel_spec(args.ch1), _parse_channel_spec(args.ch2), args.weight1
        )
    if args.gamma is None or args.lam is None:
        raise DomainError("minimax requires --gamma and --lambda (or --ch1/--ch2)")
    return MixedChannelPair(
        AmplitudeDamping(args.gamma), Depolarizing(args.lam), args.weight1
    )


def _pair_inputs(pair: MixedChannelPair) -> dict:
    return {
        "channel1": _channel_inputs(pair.ch1),
        "channel2": _channel_inputs(pair.ch2),
        "weight1": pair.weight1,
    }


def cmd_minimax(args, settings) -> int:
    started = time.perf_counter()
    pair = _minimax_pair(args)
    result = minimax_capacity(pair, resolution=args.resolution)
    cap1 = _solve_capacity(pair.ch1, _DEFAULTS["tol"])
    cap2 = _solve_capacity(pair.ch2, _DEFAULTS["tol"])
    min_cap = min(cap1.capacity_bits, cap2.capacity_bits)
    inputs = _pair_inputs(pair)
    inputs.update({"resolution": args.resolution, "seed": args.seed})
    report = _report_base("minimax", inputs, started)
    outputs = {
        "capacity_bits": result.capacity_bits,
        "a_star": result.a_star,
        "min_branch": result.min_branch,
        "a_cross": result.a_cross,
        "branch_capacity_1": cap1.capacity_bits,
        "branch_capacity_2": cap2.capacity_bits,
        "min_branch_capacity": min_cap,
        "separation_gap": min_cap - result.capacity_bits,
    }
    if args.certify:
        config = _oracle_config(args)
        inputs["oracle"] = {
            "n_states": config.n_states, "a_grid": config.a_grid,
            "phase_grid": config.phase_grid, "prob_grid": config.prob_grid,
            "restrict_real_b": config.restrict_real_b, "budget": args.budget,
        }
        oracle_value, _ = oracle_minimax(pair, config, args.budget)
        difference = result.capacity_bits - oracle_value
        outputs["certification"] = {
            "oracle_capacity_bits": oracle_value,
            "difference": difference,
            "bound": args.bound,
            "search_size": plan_search_size(config, args.budget),
        }
        if abs(difference) > args.bound:
            raise CertificationError(
                f"minimax oracle difference {difference} exceeds bound {args.bound}"
            )
    report["outputs"] = outputs
    report["tolerances"] = {"resolution": args.resolution}
    _emit_json(report, args.out)
    return EXIT_OK


def cmd_certify(args, settings) -> int:
    started = time.perf_counter()
    tol = float(_resolve(args, settings, "tol", _DEFAULTS["tol"]))
    channel = _parse_channel(args.channel, args.gamma, args.lam)
    config = _oracle_config(args)
    solver = _solve_capacity(channel, tol)
    oracle_value, ensemble = oracle_capacity(channel, config, args.budget)
    difference = solver.capacity_bits - oracle_value
    inputs = _channel_inputs(channel)
    inputs.update({
        "tol": tol, "seed": args.seed,
        "oracle": {
            "n_states": config.n_states, "a_grid": config.a_grid,
            "phase_grid": config.phase_grid, "prob_grid": config.prob_grid,
            "restrict_real_b": config.restrict_real_b, "budget": args.budget,
        },
    })
    report = _report_base("certify", inputs, started)
    report["outputs"] = {
        "solver_capacity_bits": solver.capacity_bits,
        "solver_a_max": solver.a_max,
        "oracle_capacity_bits": oracle_value,
        "difference": difference,
        "search_size": plan_search_size(config, args.budget),
        "oracle_ensemble": [
            {"p": p, "a": s.a, "b_re": s.b.real, "b_im": s.b.imag}
            for p, s in ensemble
        ],
    }
    report["tolerances"] = {"bound": args.bound}
    _emit_json(report, args.out)
    if abs(difference) > args.bound:
        raise CertificationError(
            f"oracle difference {difference} exceeds the declared bound {args.bound}"
        )
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="write output to this path instead of stdout")
    parser.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default: csv for curves, json for reports)")
    parser.add_argument("--tol", type=float, default=None,
                        help="solver tolerance on the bracket width (default 1e-10)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for grid sweeps (env QCHAN_THREADS)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed recorded in reports for reproducibility")
    parser.add_argument("--config", help="key = value config file (default ./qchan.toml)")


def _add_oracle_flags(parser: argparse.ArgumentParser, n_states: int) -> None:
    parser.add_argument("--n-states", type=int, default=n_states, dest="n_states")
    parser.add_argument("--a-grid", type=int, default=51, dest="a_grid")
    parser.add_argument("--phase-grid", type=int, default=2, dest="phase_grid")
    parser.add_argument("--prob-grid", type=int, default=10, dest="prob_grid")
    parser.add_argument("--complex-b", action="store_true", dest="complex_b",
                        help="search complex coherence phases instead of real signs")
    parser.add_argument("--budget", type=float, default=DEFAULT_BUDGET,
                        help="maximum planned oracle evaluations")
    parser.add_argument("--bound", type=float, default=2e-4,
                        help="declared grid-resolution bound for certification")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qchan",
        description="Product-state capacities of qubit amplitude-damping and "
                    "depolarizing channels, with brute-force certification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="capacity of a single channel")
    p.add_argument("--channel", choices=("ad", "dep"), required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--lambda", type=float, dest="lam")
    _add_common(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("curve", help="capacity curve over a parameter range (CSV)")
    p.add_argument("--family", choices=("ad", "dep"), required=True)
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--end", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.01)
    _add_common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("chi-curves", help="branch chi curves versus a (CSV)")
    p.add_argument("--gamma", type=float)
    p.add_argument("--lambda", type=float, dest="lam")
    p.add_argument("--a-step", type=float, default=0.01, dest="a_step")
    _add_common(p)
    p.set_defaults(func=cmd_chi_curves)

    p = sub.add_parser("ellipse", help="pure input states and their images (CSV)")
    p.add_argument("--gamma", type=float)
    p.add_argument("--n-points", type=int, default=64, dest="n_points")
    _add_common(p)
    p.set_defaults(func=cmd_ellipse)

    p = sub.add_parser("minimax", help="sup-min capacity of a channel mixture")
    p.add_argument("--gamma", type=float, help="amplitude-damping branch parameter")
    p.add_argument("--lambda", type=float, dest="lam", help="depolarizing branch parameter")
    p.add_argument("--ch1", help="general branch spec, e.g. ad:0.5 or dep:0.3")
    p.add_argument("--ch2", help="general branch spec, e.g. ad:0.5 or dep:0.3")
    p.add_argument("--weight1", type=float, default=0.5)
    p.add_argument("--resolution", type=float, default=1e-6)
    p.add_argument("--certify", action="store_true")
    _add_oracle_flags(p, n_states=2)
    _add_common(p)
    p.set_defaults(func=cmd_minimax)

    p = sub.add_parser("certify", help="brute-force certification of a capacity")
    p.add_argument("--channel", choices=("ad", "dep"), required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--lambda", type=float, dest="lam")
    _add_oracle_flags(p, n_states=2)
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, _settings(args))
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except BudgetExceededError as exc:
        print(f"oracle budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFY
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
