"""Command-line front end.

Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ChaospicError, ConfigurationError, UsageError
from .observables import EnergyTimeSeries, fit_exponential_rate
from .scenarios import convergence_study, load_config, preset_config, preset_names, run


def _parse_overrides(pairs: list[str]) -> dict:
    out: dict = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigurationError(f"override {pair!r} is not of the form key=value")
        key, raw = pair.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        if key.startswith("initial."):
            out.setdefault("initial", {})[key.split(".", 1)[1]] = value
        else:
            out[key] = value
    return out


def _apply_common(cfg, args):
    if args.seed is not None:
        cfg.seed = args.seed
    if args.workers is not None:
        cfg.workers = args.workers
    cfg.validate()
    return cfg


def _report(result) -> None:
    print(f"steps: {result.config.n_steps}  wall: {result.wall_time_s:.1f}s")
    if result.fitted_rate is not None:
        print(f"fitted rate over {result.config.fit_window}: {result.fitted_rate:+.5f}")
    elif result.diagnostics.get("fit_note"):
        print(f"rate fit failed: {result.diagnostics['fit_note']}")
    if result.out_dir:
        print(f"artifacts in {result.out_dir}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="chaospic",
                                     description="stochastic-Galerkin particle solver "
                                                 "for the 1D-1V Vlasov-Poisson-BGK system")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a JSON scenario file")
    p_run.add_argument("config")

    p_preset = sub.add_parser("preset", help="run a named preset")
    p_preset.add_argument("name", help=f"one of: {', '.join(preset_names())}")
    p_preset.add_argument("--profile", default="desk", choices=("desk", "paper"))
    p_preset.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                          help="config override, value parsed as JSON (repeatable)")

    p_conv = sub.add_parser("converge", help="spectral convergence study from a config")
    p_conv.add_argument("config")

    for p in (p_run, p_preset, p_conv):
        p.add_argument("--out-dir", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)

    p_fit = sub.add_parser("fit-rate", help="fit an exponential rate on an energy.csv")
    p_fit.add_argument("csv")
    p_fit.add_argument("--window", required=True, help="fit window as 'a,b'")
    p_fit.add_argument("--mode", default="damping", choices=("damping", "growth"))
    p_fit.add_argument("--all-points", action="store_true",
                       help="fall back to all samples when fewer than 3 peaks exist")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            result = run(_apply_common(load_config(args.config), args), args.out_dir)
            _report(result)
        elif args.command == "preset":
            cfg = preset_config(args.name, args.profile, _parse_overrides(args.override))
            result = run(_apply_common(cfg, args), args.out_dir)
            _report(result)
        elif args.command == "converge":
            cfg = _apply_common(load_config(args.config), args)
            table = convergence_study(cfg, args.out_dir)
            for order, err in table:
                print(f"M={order:3d}  l2_error={err:.6e}")
        else:  # fit-rate
            try:
                a, b = (float(v) for v in args.window.split(","))
            except ValueError as exc:
                raise ConfigurationError(f"bad --window {args.window!r}: expected 'a,b'") from exc
            series = EnergyTimeSeries.read_csv(args.csv)
            gamma = fit_exponential_rate(series, (a, b), args.mode,
                                         allow_all_points=args.all_points)
            print(f"{gamma:+.6f}")
    except (ConfigurationError, UsageError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ChaospicError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
