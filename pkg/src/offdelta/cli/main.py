"""
offdelta command line: levels, wavefunctions, sweeps, dark points and the grid oracle.

Exit codes: 0 success, 2 usage, 3 solver failure, 4 oracle failure.
"""
import argparse
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

import offdelta
from offdelta.cli.output import OutputEnvelope
from offdelta.hardwall import dark_points
from offdelta.oracle import DeltaModel, GridSpec, certified_error
from offdelta.relative import (
    ModelParams,
    Parity,
    build_wavefunction,
    evaluate_wavefunction,
    solve_levels_widening,
    solve_spectrum,
)
from offdelta.scan import infinite_crossings, sweep_c, sweep_g, sweep_infinite, sweep_widths
from offdelta.utils.config import DEFAULT_SOLVER, default_c_grid, default_g_grid
from offdelta.utils.errors import (
    DomainError,
    GridSpecError,
    OffdeltaError,
    OracleConvergenceError,
    describe,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_ORACLE = 4


class UsageError(Exception):
    """Flags that parse but contradict each other."""


def _solver_params() -> dict:
    return {
        "solver_version": offdelta.__version__,
        "q_min": DEFAULT_SOLVER.q_min,
        "q_max": DEFAULT_SOLVER.q_max,
        "q_step": DEFAULT_SOLVER.q_step,
        "root_tol": DEFAULT_SOLVER.root_tol,
        "dark_tol": DEFAULT_SOLVER.dark_tol,
    }


def _emit(envelope: OutputEnvelope, fmt: str, out: Optional[str]) -> None:
    text = envelope.render(fmt)
    if out:
        Path(out).write_text(text)
        logger.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def cmd_levels(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    params = ModelParams(args.g, args.c)
    if args.parity == "both":
        levels = solve_spectrum(params, args.count)
    else:
        levels = solve_levels_widening(params, Parity(args.parity), args.count)
    rows = [[lv.n, lv.parity.value, lv.epsilon, lv.Q, lv.kind.value] for lv in levels]
    envelope = OutputEnvelope(
        ["n", "parity", "epsilon", "Q", "kind"],
        rows,
        {"command": "levels", "g": args.g, "c": args.c, "parity": args.parity, "count": args.count,
         **_solver_params()},
    )
    _emit(envelope, args.format, args.out)
    return EXIT_OK


def cmd_wavefunction(args) -> int:
    if args.dx <= 0.0 or args.xmax <= args.xmin:
        raise UsageError("need --dx > 0 and --xmax > --xmin")
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    params = ModelParams(args.g, args.c)
    parity = Parity.of(args.n)
    levels = solve_levels_widening(params, parity, args.n // 2 + 1)
    level = levels[-1]
    psi = build_wavefunction(level, params)
    xs = np.arange(args.xmin, args.xmax + 0.5 * args.dx, args.dx)
    rows = [[float(x), evaluate_wavefunction(psi, float(x))] for x in xs]
    envelope = OutputEnvelope(
        ["x", "phi"],
        rows,
        {"command": "wavefunction", "g": args.g, "c": args.c, "n": args.n, "parity": parity.value,
         "epsilon": level.epsilon, "kind": level.kind.value, "beta": psi.beta, **_solver_params()},
    )
    _emit(envelope, args.format, args.out)
    return EXIT_OK


def _axis(args, default):
    if args.min is None and args.max is None and args.points is None:
        return default()
    if args.min is None or args.max is None:
        raise UsageError("--min and --max go together")
    return np.linspace(args.min, args.max, args.points or 65)


def _sweep_envelope(result, params: dict) -> OutputEnvelope:
    rows = []
    for k, value in enumerate(result.axis_values):
        for j, (n, parity) in enumerate(result.level_ids):
            rows.append([float(value), n, parity.value, float(result.levels[k, j]), result.kinds[k, j]])
    return OutputEnvelope([result.axis_name, "n", "parity", "epsilon", "kind"], rows, params)


def cmd_sweep(args) -> int:
    params = {"command": "sweep", "mode": args.mode, **_solver_params()}
    if args.mode == "g":
        if args.c is None:
            raise UsageError("--mode g needs --c")
        result = sweep_g(args.c, _axis(args, default_g_grid), args.levels)
        params.update(c=args.c, levels=args.levels)
        envelope = _sweep_envelope(result, params)
    elif args.mode == "c":
        if args.g is None:
            raise UsageError("--mode c needs --g")
        result = sweep_c(args.g, _axis(args, default_c_grid), args.levels)
        params.update(g=args.g, levels=args.levels, contact_limit=result.metadata["contact_limit"])
        envelope = _sweep_envelope(result, params)
    elif args.mode == "widths":
        if args.g is None:
            raise UsageError("--mode widths needs --g")
        table = sweep_widths(args.g, _axis(args, default_c_grid))
        params.update(g=args.g)
        rows = [
            [float(c), n, parity.value, float(table.widths[k, j])]
            for k, c in enumerate(table.c_values)
            for j, (n, parity) in enumerate(table.level_ids)
        ]
        envelope = OutputEnvelope(["c", "n", "parity", "width"], rows, params)
    else:
        samples = _axis(args, default_c_grid)
        result = sweep_infinite(samples, args.levels)
        params.update(g=math.inf, levels=args.levels)
        rows = [
            [float(c), j, float(result.levels[k, j]), result.kinds[k, j], bool(result.triples[k, j]), result.regimes[k]]
            for k, c in enumerate(result.axis_values)
            for j in range(len(result.level_ids))
        ]
        envelope = OutputEnvelope(["c", "rank", "epsilon", "kind", "triple", "regime"], rows, params)
        if args.out:
            crossings = infinite_crossings(samples, args.levels)
            extra = OutputEnvelope(
                ["c", "epsilon", "parity", "inside_index", "outside_index"],
                [[x.c, x.epsilon, x.parity.value, x.inside_index, x.outside_index] for x in crossings],
                params,
            )
            path = Path(args.out)
            _emit(extra, args.format, str(path.with_name(f"{path.stem}.crossings{path.suffix}")))
    _emit(envelope, args.format, args.out)
    return EXIT_OK


def cmd_dark(args) -> int:
    if args.n_max < 1 or args.n_max > 40:
        raise UsageError("--n-max must lie in [1, 40]")
    points = dark_points(args.n_max, args.c_max)
    envelope = OutputEnvelope(
        ["n", "c_star", "parity"],
        [[p.n, p.c_star, p.parity.value] for p in points],
        {"command": "dark", "n_max": args.n_max, "c_max": args.c_max, "solver_version": offdelta.__version__},
    )
    _emit(envelope, args.format, args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    params = ModelParams(args.g, args.c)
    spec = GridSpec(args.L, args.h, DeltaModel(args.delta_model))
    result = certified_error(params, spec, args.k)
    rows = [
        [k, result.eigenvalues[k], result.fine.second_moments[k], result.errors[k], result.extrapolated[k]]
        for k in range(args.k)
    ]
    envelope = OutputEnvelope(
        ["k", "epsilon", "second_moment", "error", "extrapolated"],
        rows,
        {"command": "oracle", "g": args.g, "c": args.c, "L": args.L, "h": args.h,
         "h_fine": spec.halved().h, "delta_model": args.delta_model, "solver_version": offdelta.__version__},
    )
    _emit(envelope, args.format, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    envelope = OutputEnvelope.from_json(Path(args.path).read_text())
    sys.stdout.write(envelope.to_csv())
    return EXIT_OK


def parse_args(argv: Optional[List[str]] = None):
    parser = argparse.ArgumentParser(
        prog="offdelta",
        description="Two trapped particles with off-centred delta interactions (oscillator units)",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p):
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", default=None, help="write to this file instead of stdout")

    p = sub.add_parser("levels", help="energy levels at fixed g and c")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--parity", choices=["even", "odd", "both"], default="both")
    p.add_argument("--count", type=int, default=6)
    output_flags(p)
    p.set_defaults(handler=cmd_levels)

    p = sub.add_parser("wavefunction", help="normalized eigenfunction on a grid")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--xmin", type=float, default=-6.0)
    p.add_argument("--xmax", type=float, default=6.0)
    p.add_argument("--dx", type=float, default=0.01)
    output_flags(p)
    p.set_defaults(handler=cmd_wavefunction)

    p = sub.add_parser("sweep", help="levels or widths along g or c")
    p.add_argument("--mode", choices=["g", "c", "widths", "infinite"], required=True)
    p.add_argument("--g", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--min", type=float, default=None, help="first sample of the axis")
    p.add_argument("--max", type=float, default=None, help="last sample of the axis")
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--levels", type=int, default=6)
    output_flags(p)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("dark", help="dark displacements c* = sqrt(2) x Hermite root")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--c-max", type=float, default=4.0)
    output_flags(p)
    p.set_defaults(handler=cmd_dark)

    p = sub.add_parser("oracle", help="finite-difference reference levels")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--L", type=float, default=10.0)
    p.add_argument("--h", type=float, default=0.002)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--delta-model", choices=[m.value for m in DeltaModel], default=DeltaModel.NEAREST_POINT.value)
    output_flags(p)
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("verify", help="re-emit a JSON result as CSV")
    p.add_argument("path")
    p.set_defaults(handler=cmd_verify)

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except OracleConvergenceError as exc:
        print(describe(exc, args.command), file=sys.stderr)
        return EXIT_ORACLE
    except (UsageError, DomainError, GridSpecError) as exc:
        print(describe(exc, args.command), file=sys.stderr)
        return EXIT_USAGE
    except OffdeltaError as exc:
        print(describe(exc, args.command), file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, OSError) as exc:
        print(describe(exc, args.command), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
