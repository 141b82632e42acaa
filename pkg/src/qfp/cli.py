"""Command-line interface: analyses, sweeps and figure-data emission.

Every CSV starts with a comment line carrying the tool version, the exact
command that produced the file and the seed, so re-running the echoed
command reproduces the file byte for byte.  Exit codes: 0 success,
2 domain error, 3 solver failure, 4 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import shlex
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .chernoff import VisibilityPair, error_bound, per_count, per_count_low_vis
from .classical import baseline
from .errors import (
    BracketError,
    CapacityError,
    ConvergenceError,
    DomainError,
    SolverError,
)
from .numerics import gv_rate
from .optimizer import asymptotic_beta, asymptotic_nq, optimize, reduced_optimum
from .protocol import (
    ProtocolConfig,
    derive,
    noise_parameter,
    noiseless_nq,
    phase_overhead,
)
from .simulator import TrialMode, run_trials

#: Documented default seed; override with QFP_SEED or --seed.
DEFAULT_SEED = 24301

EXIT_DOMAIN = 2
EXIT_SOLVER = 3
EXIT_CAPACITY = 4


def _default_seed() -> int:
    env = os.environ.get("QFP_SEED")
    return int(env) if env else DEFAULT_SEED


def _fmt(x: object) -> str:
    """Shortest round-trip decimal for floats, plain str otherwise."""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _emit(report: Dict[str, object], as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        for key, value in report.items():
            print(f"{key} = {_fmt(value)}")


def _write_csv(
    path: str,
    header: List[str],
    rows: List[List[object]],
    echo: str,
    seed: Optional[int] = None,
) -> None:
    lines = [f"# qfp {__version__} | {echo} | seed={seed}"]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_chernoff(args: argparse.Namespace, echo: str) -> int:
    if args.grid is not None:
        if args.output is None:
            raise DomainError("--grid requires --output")
        values = np.linspace(0.0, 1.0, args.grid)
        rows: List[List[object]] = []
        for ve in values:
            for vd in values:
                # Information per count is symmetric; evaluate the ordered pair.
                pair = VisibilityPair(max(ve, vd), min(ve, vd))
                rows.append([float(ve), float(vd), per_count(pair).per_count])
        _write_csv(args.output, ["v_e", "v_d", "per_count"], rows, echo)
        print(f"wrote {len(rows)} rows to {args.output}")
        return 0
    vis = VisibilityPair(args.ve, args.vd)
    result = per_count(vis)
    report: Dict[str, object] = {
        "v_e": args.ve,
        "v_d": args.vd,
        "per_count": result.per_count,
        "low_vis_approx": per_count_low_vis(vis),
        "method": result.method.value,
    }
    if args.ve != args.vd:
        report["lambda_star"] = result.lambda_star
    _emit(report, args.json)
    return 0


def _cmd_optimize(args: argparse.Namespace, echo: str) -> int:
    op = optimize(args.n, args.nu, args.eps)
    report: Dict[str, object] = {
        "noise_param": op.noise_param,
        "delta_star": op.delta_star,
        "beta_star": op.beta_star,
        "n_q_star": op.n_q_star,
        "l_slots": op.derived.l_slots,
        "bandwidth_unit_power": op.derived.bandwidth,
        "mu": op.derived.mu,
        "v_e": op.derived.vis.v_e,
        "v_d": op.derived.vis.v_d,
        "regime": op.regime.value,
        "nq_noiseless": noiseless_nq(args.eps),
        "nq_asymptotic": asymptotic_nq(args.n, args.nu, args.eps),
        "beta_asymptotic": asymptotic_beta(op.noise_param),
    }
    _emit(report, args.json)
    return 0


def _sweep_noise_param(args: argparse.Namespace) -> tuple[List[str], List[List[object]], int]:
    header = [
        "noise_param",
        "delta_star",
        "r_delta_star",
        "beta_star",
        "beta_asymptotic",
        "nq_over_log_inv_2eps",
        "error",
    ]
    rows: List[List[object]] = []
    failures = 0
    for npar in np.geomspace(args.start, args.stop, args.points):
        npar = float(npar)
        try:
            delta_star, beta_star, factor = reduced_optimum(npar)
            rows.append(
                [
                    npar,
                    delta_star,
                    gv_rate(delta_star),
                    beta_star,
                    asymptotic_beta(npar),
                    factor,
                    "",
                ]
            )
        except Exception as exc:  # recorded per-row, run continues
            failures += 1
            rows.append([npar, "", "", "", "", "", type(exc).__name__])
    return header, rows, failures


def _sweep_n(args: argparse.Namespace) -> tuple[List[str], List[List[object]], int]:
    header = [
        "n",
        "noise_param",
        "nq_star",
        "nq_asymptotic",
        "n_c",
        "n_b",
        "nq_noiseless",
        "error",
    ]
    rows: List[List[object]] = []
    failures = 0
    for n in np.geomspace(args.start, args.stop, args.points):
        n = int(round(n))
        try:
            op = optimize(n, args.nu, args.eps)
            cls = baseline(n, args.nu, args.eps)
            rows.append(
                [
                    n,
                    op.noise_param,
                    op.n_q_star,
                    asymptotic_nq(n, args.nu, args.eps),
                    cls.n_c,
                    cls.n_b,
                    noiseless_nq(args.eps),
                    "",
                ]
            )
        except Exception as exc:
            failures += 1
            rows.append([n, "", "", "", "", "", "", type(exc).__name__])
    return header, rows, failures


def _cmd_sweep(args: argparse.Namespace, echo: str) -> int:
    if args.points < 2:
        raise DomainError(f"sweeps need at least 2 points, got {args.points}")
    if not 0 < args.start < args.stop:
        raise DomainError("need 0 < start < stop")
    if args.axis == "noise-param":
        header, rows, failures = _sweep_noise_param(args)
    else:
        header, rows, failures = _sweep_n(args)
    _write_csv(args.output, header, rows, echo)
    ok = args.points - failures
    print(f"wrote {args.points} rows to {args.output} ({failures} failed)")
    if ok < 0.9 * args.points:
        raise SolverError(f"only {ok}/{args.points} sweep rows succeeded")
    return 0


def _cmd_simulate(args: argparse.Namespace, echo: str) -> int:
    cfg = ProtocolConfig(
        n=args.n,
        nu=args.nu,
        eps=args.eps,
        s=args.s,
        delta=args.delta,
        beta=args.beta,
        bandwidth=args.bandwidth,
    )
    seed = args.seed if args.seed is not None else _default_seed()
    batch = run_trials(
        cfg,
        TrialMode(args.mode.replace("-", "_")),
        args.trials,
        seed,
        slot_limit=args.slot_limit,
    )
    model = derive(cfg)
    bound = error_bound(model.mu, model.vis)
    lo, hi = batch.wilson_ci
    report: Dict[str, object] = {
        "trials": batch.trials,
        "errors_equal": batch.errors_equal,
        "errors_different": batch.errors_different,
        "avg_error": batch.avg_error,
        "wilson_ci_lo": lo,
        "wilson_ci_hi": hi,
        "chernoff_bound": bound,
        "bound_satisfied": bool(batch.avg_error <= bound + (hi - lo) / 2.0),
        "mu": model.mu,
        "v_e": model.vis.v_e,
        "v_d": model.vis.v_d,
        "l_slots": model.l_slots,
        "seed": seed,
    }
    _emit(report, args.json)
    if args.output:
        rows = [
            [kp, km, c]
            for (kp, km), c in sorted(batch.count_histogram.items())
        ]
        _write_csv(args.output, ["k_plus", "k_minus", "count"], rows, echo, seed)
    return 0


def _cmd_classical(args: argparse.Namespace, echo: str) -> int:
    result = baseline(args.n, args.nu, args.eps)
    _emit(
        {
            "i_c_bits": result.i_c,
            "i_b_bits": result.i_b,
            "pie_bits_per_photon": result.pie,
            "n_c_photons": result.n_c,
            "n_b_photons": result.n_b,
        },
        args.json,
    )
    return 0


def _cmd_phase_overhead(args: argparse.Namespace, echo: str) -> int:
    if (args.dphi is None) == (args.w is None):
        raise DomainError("specify exactly one of --dphi and --w")
    if args.dphi is not None:
        dphi = args.dphi
    else:
        if not 0.0 < args.w < 1.0:
            raise DomainError(f"--w must be in (0, 1), got {args.w}")
        dphi = math.sqrt(-2.0 * math.log(args.w))
    result = phase_overhead(dphi)
    _emit(
        {
            "dphi": dphi,
            "n_est_photons": result.n_est,
            "w": result.w,
            "nq_multiplier": result.nq_multiplier,
        },
        args.json,
    )
    return 0


def _int_like(text: str) -> int:
    """Integer flag value, accepting scientific notation like 1e6."""
    value = float(text)
    if value != int(value):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text}")
    return int(value)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfp",
        description=(
            "Photon-budget analysis of coherent-state fingerprinting over "
            "noisy optical channels"
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chernoff", help="information per count for a visibility pair")
    p.add_argument("--ve", type=float, required=True)
    p.add_argument("--vd", type=float, required=True)
    p.add_argument("--grid", type=_int_like, help="emit an NxN surface CSV instead")
    p.add_argument("--output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_chernoff)

    p = sub.add_parser("optimize", help="optimal operating point for an instance")
    p.add_argument("--n", type=_int_like, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("sweep", help="log-spaced sweep emitting figure-data CSV")
    p.add_argument("--axis", choices=["noise-param", "n"], required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--points", type=_int_like, required=True)
    p.add_argument("--nu", type=float, default=1e-7)
    p.add_argument("--eps", type=float, default=1e-5)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo run of the full chain")
    p.add_argument("--n", type=_int_like, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--eps", type=float, default=1e-5)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--beta", type=float)
    p.add_argument("--bandwidth", type=float)
    p.add_argument(
        "--mode",
        choices=["random-inputs", "worst-case-distance", "equal-inputs"],
        default="worst-case-distance",
    )
    p.add_argument("--trials", type=_int_like, default=10000)
    p.add_argument("--seed", type=_int_like)
    p.add_argument("--slot-limit", type=_int_like, default=10**8)
    p.add_argument("--output", help="histogram CSV path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("classical", help="classical fingerprinting baselines")
    p.add_argument("--n", type=_int_like, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_classical)

    p = sub.add_parser("phase-overhead", help="phase-reference estimation cost")
    p.add_argument("--dphi", type=float)
    p.add_argument("--w", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_phase_overhead)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    echo = "qfp " + shlex.join(argv)
    try:
        return args.func(args, echo)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (BracketError, ConvergenceError, SolverError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except CapacityError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
