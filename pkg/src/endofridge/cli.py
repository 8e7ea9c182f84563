"""Command-line front end: solve, optimize, sweep, curve, selftest.

Every subcommand accepts ``--config FILE`` with ``key = value`` lines whose
keys mirror the long flags (``omega-h = 0.1`` or ``omega_h = 0.1``). Values
given on the command line take precedence.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import warnings
from typing import Optional, Sequence

from . import __version__, harness, maser, optimizer
from .core import Bath, reversible_cold_frequency
from .errors import EmptyWindowError, EndofridgeError
from .selftest import self_test

EXIT_USAGE = 2
EXIT_FAILED = 1


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ValueError(f"{path}:{lineno}: empty key")
            out[key.lstrip("-").replace("-", "_")] = value
    return out


def _merge_config(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """Fill options left unset on the command line from ``args.config``."""
    if not getattr(args, "config", None):
        return
    values = read_config(args.config)
    actions = {a.dest: a for a in parser._actions if a.option_strings}
    for key, text in values.items():
        if key == "config":
            continue
        action = actions.get(key)
        if action is None:
            parser.error(f"unknown key {key!r} in {args.config}")
        if getattr(args, key) is not None:
            continue
        convert = action.type or str
        try:
            value = convert(text)
        except ValueError:
            parser.error(f"bad value {text!r} for {key!r} in {args.config}")
        if action.choices is not None and value not in action.choices:
            parser.error(f"{key!r} must be one of {sorted(action.choices)}")
        setattr(args, key, value)


def _require(parser: argparse.ArgumentParser, args: argparse.Namespace, names: Sequence[str]) -> None:
    missing = ["--" + n.replace("_", "-") for n in names if getattr(args, n) is None]
    if missing:
        parser.error("missing required option(s): " + ", ".join(missing))


def _fill(args: argparse.Namespace, defaults: dict) -> None:
    for key, value in defaults.items():
        if getattr(args, key) is None:
            setattr(args, key, value)


def _emit(pairs: Sequence[tuple[str, object]], stream) -> None:
    for key, value in pairs:
        print(f"{key}={harness.format_value(value)}", file=stream)


def _write_one_row(path: str, pairs: Sequence[tuple[str, object]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        harness.write_csv([k for k, _ in pairs], [[v for _, v in pairs]], fh)


def _flatten(obj) -> list[tuple[str, object]]:
    pairs = []
    for f in dataclasses.fields(obj):
        if not f.repr:
            continue
        value = getattr(obj, f.name)
        if isinstance(value, tuple):
            pairs += [(f"{f.name}_lo", value[0]), (f"{f.name}_hi", value[1])]
        else:
            pairs.append((f.name, value))
    return pairs


def _physical_options(p: argparse.ArgumentParser, with_omega_c: bool) -> None:
    p.add_argument("--omega-h", type=float, help="hot transition frequency")
    if with_omega_c:
        p.add_argument("--omega-c", type=float, help="cold transition frequency")
    p.add_argument("--lambda", dest="lam", type=float, help="driving amplitude (default 0)")
    p.add_argument("--th", type=float, help="hot bath temperature")
    p.add_argument("--tc", type=float, help="cold bath temperature")
    p.add_argument("--gamma-h", type=float, help="hot coupling strength")
    p.add_argument("--gamma-c", type=float, help="cold coupling strength")
    p.add_argument("--d", type=int, help="bath spectral dimension (default 3)")


def _baths(args) -> tuple[Bath, Bath]:
    return (
        Bath(args.th, args.gamma_h, args.d, "hot"),
        Bath(args.tc, args.gamma_c, args.d, "cold"),
    )


_PHYSICAL = ("omega_h", "th", "tc", "gamma_h", "gamma_c")


def cmd_solve(parser, args, out) -> int:
    _require(parser, args, _PHYSICAL + ("omega_c",))
    _fill(args, {"lam": 0.0, "d": 3})
    hot, cold = _baths(args)
    lc, rep = maser.evaluate(maser.MaserConfig(args.omega_h, args.omega_c, args.lam, hot, cold))
    pairs = _flatten(lc) + _flatten(rep)
    _emit(pairs, out)
    if args.csv:
        _write_one_row(args.csv, pairs)
    return 0


def cmd_optimize(parser, args, out) -> int:
    _require(parser, args, _PHYSICAL)
    _fill(args, {"lam": 0.0, "d": 3, "tol": optimizer.DEFAULT_TOL, "grid": optimizer.DEFAULT_GRID})
    hot, cold = _baths(args)
    top = reversible_cold_frequency(args.omega_h, args.th, args.tc)
    if not top > args.lam:
        raise EmptyWindowError(f"lambda={args.lam!r} leaves no refrigeration window below {top!r}")
    # Placeholder inside the window; the search replaces it.
    template = maser.MaserConfig(args.omega_h, (args.lam + top) / 2, args.lam, hot, cold)
    report = optimizer.optimize_maser(template, tol=args.tol, grid_size=args.grid)
    pairs = _flatten(report)
    _emit(pairs, out)
    if args.csv:
        _write_one_row(args.csv, pairs)
    return 0


_SWEEP_DEFAULTS = harness.SweepSpec()


def cmd_sweep(parser, args, out) -> int:
    d = _SWEEP_DEFAULTS
    _fill(
        args,
        {
            "samples": d.samples,
            "seed": d.seed,
            "d": d.d,
            "th_min": d.t_hot[0],
            "th_max": d.t_hot[1],
            "tc_min": d.t_cold[0],
            "tc_max": d.t_cold[1],
            "tc_max_ratio": d.t_cold_max_ratio,
            "gamma_h_min": d.gamma_hot[0],
            "gamma_h_max": d.gamma_hot[1],
            "gamma_c_min": d.gamma_cold[0],
            "gamma_c_max": d.gamma_cold[1],
            "omega_h_min": d.omega_h[0],
            "omega_h_max": d.omega_h[1],
            "lambda_mode": d.lambda_mode,
            "lambda_ratio": d.lambda_ratio,
            "max_x_h": d.max_x_h,
            "max_gamma_ratio": d.max_gamma_ratio,
            "tol": d.tol,
            "grid": d.grid_size,
            "jobs": 1,
        },
    )
    _require(parser, args, ("out",))
    spec = harness.SweepSpec(
        samples=args.samples,
        seed=args.seed,
        d=args.d,
        t_hot=(args.th_min, args.th_max),
        t_cold=(args.tc_min, args.tc_max),
        t_cold_max_ratio=args.tc_max_ratio,
        gamma_hot=(args.gamma_h_min, args.gamma_h_max),
        gamma_cold=(args.gamma_c_min, args.gamma_c_max),
        omega_h=(args.omega_h_min, args.omega_h_max),
        lambda_mode=args.lambda_mode,
        lambda_ratio=args.lambda_ratio,
        max_x_h=args.max_x_h,
        max_gamma_ratio=args.max_gamma_ratio,
        tol=args.tol,
        grid_size=args.grid,
    )
    records, summary = harness.run_sweep(spec, jobs=args.jobs)
    harness.write_records(records, args.out)
    _emit(list(summary.items()), out)
    return 0


def cmd_curve(parser, args, out) -> int:
    _fill(args, {"d": 3, "eps_c_min": 0.0, "eps_c_max": 10.0, "points": 101})
    grid = harness.curve_grid(args.eps_c_min, args.eps_c_max, args.points)
    harness.write_csv(["eps_carnot", "cop_ratio"], harness.emit_curve(args.d, grid), out)
    return 0


def cmd_selftest(parser, args, out) -> int:
    _fill(args, {"seed": 2024, "samples": 200})
    report = self_test(seed=args.seed, samples=args.samples, stream=out)
    return 0 if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="endofridge",
        description="Driven three-level maser refrigerator: limit cycle, currents and optimal COP.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="limit cycle and heat currents of one configuration")
    _physical_options(p, with_omega_c=True)
    p.add_argument("--csv", metavar="FILE", help="also write the result as a one-row CSV")
    p.set_defaults(handler=cmd_solve, subparser=p)

    p = sub.add_parser("optimize", help="maximize the cooling rate over omega_c")
    _physical_options(p, with_omega_c=False)
    p.add_argument("--tol", type=float, help="relative tolerance on omega_c")
    p.add_argument("--grid", type=int, help="coarse grid size")
    p.add_argument("--csv", metavar="FILE", help="also write the report as a one-row CSV")
    p.set_defaults(handler=cmd_optimize, subparser=p)

    p = sub.add_parser("sweep", help="randomized optimization sweep")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--th-min", type=float)
    p.add_argument("--th-max", type=float)
    p.add_argument("--tc-min", type=float)
    p.add_argument("--tc-max", type=float)
    p.add_argument("--tc-max-ratio", type=float, help="upper bound of T_c as a fraction of T_h")
    p.add_argument("--gamma-h-min", type=float, help="in units of T_h")
    p.add_argument("--gamma-h-max", type=float, help="in units of T_h")
    p.add_argument("--gamma-c-min", type=float, help="in units of T_c")
    p.add_argument("--gamma-c-max", type=float, help="in units of T_c")
    p.add_argument("--omega-h-min", type=float, help="in units of T_h")
    p.add_argument("--omega-h-max", type=float, help="in units of T_h")
    p.add_argument("--lambda-mode", choices=("zero", "ratio"))
    p.add_argument("--lambda-ratio", type=float, help="lambda as a fraction of the window midpoint")
    p.add_argument("--max-x-h", type=float, help="validity filter on x_h")
    p.add_argument("--max-gamma-ratio", type=float, help="validity filter on gamma_c/gamma_h")
    p.add_argument("--tol", type=float)
    p.add_argument("--grid", type=int)
    p.add_argument("--out", metavar="FILE.csv")
    p.add_argument("--jobs", type=int)
    p.set_defaults(handler=cmd_sweep, subparser=p)

    p = sub.add_parser("curve", help="benchmark curve d/(d+1+eps_C) as CSV")
    p.add_argument("--d", type=float)
    p.add_argument("--eps-c-min", type=float)
    p.add_argument("--eps-c-max", type=float)
    p.add_argument("--points", type=int)
    p.set_defaults(handler=cmd_curve, subparser=p)

    p = sub.add_parser("selftest", help="run the cross-route consistency checks")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.set_defaults(handler=cmd_selftest, subparser=p)

    for sp in sub.choices.values():
        sp.add_argument("--config", metavar="FILE", help="key = value defaults; flags win")
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sp = args.subparser
    out = stdout if stdout is not None else sys.stdout
    try:
        _merge_config(sp, args)
    except (OSError, ValueError) as exc:
        sp.error(str(exc))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.handler(sp, args, out)
    except (EndofridgeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
