"""Command-line front end: ``run``, ``verify`` and ``fixtures`` subcommands."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .config import UM, ConfigError, RunConfig, cavity_config, parse_config, serialize_config
from .fixtures import Fixture
from .model import CONSTANTS
from .quadrature import QuadratureError, QuadratureSpec
from .sweep import SweepError, emit, run_sweep, verification_table
from .verify import run_battery

EXIT_OK, EXIT_CHECK_FAILED, EXIT_ERROR = 0, 1, 2


def _load(path: str | None) -> RunConfig | None:
    if path is None:
        return None
    return parse_config(Path(path).read_text())


def _override(cfg: RunConfig, args) -> RunConfig:
    opts = cfg.options
    if args.delta is not None:
        opts = dataclasses.replace(opts, loss_floor=args.delta)
    if args.quad_tol is not None:
        opts = dataclasses.replace(opts, quad_tol=args.quad_tol)
    return dataclasses.replace(cfg, options=opts)


def _write(data: bytes, out: str | None):
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)


def _config_fixtures(cfg: RunConfig) -> list[Fixture]:
    stack = cfg.stack
    if stack.N:
        window = (stack.interfaces[0] - 1 * UM, stack.interfaces[-1] + 1 * UM)
    else:
        window = (stack.origin - 2 * UM, stack.origin + 2 * UM)
    return [Fixture(f"config@{e:g}eV", stack, float(e), window) for e in cfg.energies_ev()]


def _verify(cfg: RunConfig | None, args) -> int:
    loss_floor = 1e-9 if args.delta is None else args.delta
    if cfg is not None and args.delta is None:
        loss_floor = cfg.options.loss_floor
    quad = QuadratureSpec() if args.quad_tol is None else QuadratureSpec(rtol=args.quad_tol)
    fixtures = None if cfg is None else _config_fixtures(cfg)
    results = run_battery(fixtures, loss_floor=loss_floor, quad=quad)
    meta = {"version": _version(), "constants": dataclasses.asdict(CONSTANTS),
            "config_sha256": None if cfg is None else cfg.digest()}
    _write(emit(verification_table(results, meta), args.format), args.out)
    failed = [f"{fx}/{r.name}" for fx, r in results if r.ran and not r.passed]
    if failed:
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _version() -> str:
    from . import __version__

    return __version__


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qfed", description="Thermal fields, densities of states and energy flow "
                                                         "in planar layered media.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required):
        sp.add_argument("--config", required=config_required, help="YAML run configuration")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--workers", type=int, help="parallel workers (default: $QFED_WORKERS or 1)")
        sp.add_argument("--delta", type=float, help="loss floor for lossless leads")
        sp.add_argument("--quad-tol", type=float, help="relative quadrature tolerance")

    common(sub.add_parser("run", help="compute the configured quantity on its (x, omega) grid"), True)
    common(sub.add_parser("verify", help="run the identity battery (canonical fixtures or --config)"), False)
    fx = sub.add_parser("fixtures", help="print the built-in cavity configuration")
    fx.add_argument("--emitter", choices=("magnetic", "electric", "none"), default="magnetic")
    fx.add_argument("--quantity", default="ldos")
    fx.add_argument("--out", help="output file (default: stdout)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fixtures":
            cfg = cavity_config(None if args.emitter == "none" else args.emitter, args.quantity)
            _write(serialize_config(cfg).encode(), args.out)
            return EXIT_OK
        cfg = _load(args.config)
        if cfg is not None:
            cfg = _override(cfg, args)
        if args.command == "verify" or (cfg is not None and cfg.quantity == "verify"):
            return _verify(cfg, args)
        table = run_sweep(cfg, args.workers)
        _write(emit(table, args.format), args.out)
        return EXIT_OK
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (SweepError, QuadratureError, ArithmeticError, ValueError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
