"""Command-line interface.

Subcommands: run, fig1, fig2, theory, montecarlo, verify.  Exit codes:
0 success, 2 configuration error, 3 divergence, 4 fatal monitor violation,
5 I/O error (1 is reserved for failed verify suites).
"""

from __future__ import annotations

import argparse
import sys

from ..errors import AltgdError, ConfigError, DivergenceError, MonitorViolationError
from . import experiments
from .config import KINDS, build_config, parse_config_file

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_MONITOR = 4
EXIT_IO = 5


def _add_flags(parser: argparse.ArgumentParser) -> None:
    add = parser.add_argument
    add("--config", metavar="PATH", help="flat key=value config file; flags win")
    add("--seed", type=int, help="base seed; trial i uses stream id i")
    add("--matrix-seed", dest="matrix_seed", type=int,
        help="seed for the shared matrix (default: base seed)")
    add("--trials", type=int, help="number of trials (or Monte-Carlo samples)")
    add("--eta", type=float, help="absolute step size (wins over --eta-mult)")
    add("--eta-mult", dest="eta_mult", type=float,
        help="step size as a multiple of the theoretical cap")
    add("--epsilon", type=float, help="target accuracy used by the theoretical cap")
    add("--m", type=int, help="rows of A")
    add("--n", type=int, help="columns of A")
    add("--r", type=int, help="rank of A")
    add("--d", type=int, help="factor rank (must exceed r)")
    add("--sigma1", type=float, help="largest singular value of A")
    add("--sigmar", type=float, help="smallest nonzero singular value of A")
    add("--scheme", choices=["unbalanced", "balanced-colspan", "plain-gaussian"],
        help="initialization scheme for 'run'")
    add("--c", type=float, help="initialization constant C (>= 1)")
    add("--nu", type=float, help="initialization constant nu in (0, 1)")
    add("--record-every", dest="record_every", type=int, help="diagnostic stride")
    add("--max-iters", dest="max_iters", type=int, help="iteration budget")
    add("--target", type=float, help="stop at this relative squared residual (0 disables)")
    add("--monitors", choices=["off", "log", "fatal"], help="invariant monitor mode")
    add("--jobs", type=int, help="concurrent trials (output is jobs-invariant)")
    add("--out", metavar="PATH", help="output directory")
    add("--t", type=float, action="append",
        help="Monte-Carlo deviation parameter(s); repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altgd",
        description="Alternating gradient descent low-rank factorization experiments",
    )
    subparsers = parser.add_subparsers(dest="kind", required=True)
    descriptions = {
        "run": "single-scheme trajectories on one synthetic matrix",
        "fig1": "initialization comparison (three schemes, shared matrix)",
        "fig2": "conditioning sweep over sigma_r in {0.1, 0.5, 0.9}",
        "theory": "closed-form theory report for the configured instance",
        "montecarlo": "Gaussian singular-value concentration check",
        "verify": "run the full invariant verification suite",
    }
    for kind in KINDS:
        sub = subparsers.add_parser(kind, help=descriptions[kind])
        _add_flags(sub)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    kind = args.kind
    flag_values = {k: v for k, v in vars(args).items() if k not in ("kind", "config")}
    if flag_values.get("t") is not None:
        flag_values["t"] = tuple(flag_values["t"])
    try:
        file_values = parse_config_file(args.config) if args.config else None
        cfg = build_config(kind, file_values, flag_values)
        if kind == "run":
            experiments.cmd_run(cfg)
        elif kind == "fig1":
            experiments.cmd_fig1(cfg)
        elif kind == "fig2":
            experiments.cmd_fig2(cfg)
        elif kind == "theory":
            experiments.cmd_theory(cfg)
        elif kind == "montecarlo":
            experiments.cmd_montecarlo(cfg)
        elif kind == "verify":
            if not experiments.cmd_verify(cfg):
                return EXIT_VERIFY_FAILED
        return EXIT_OK
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as err:
        print(f"divergence: {err}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except MonitorViolationError as err:
        print(f"monitor violation: {err}", file=sys.stderr)
        return EXIT_MONITOR
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO
    except AltgdError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
