"""Command-line front end.

One subcommand per concern: point evaluation, quantiles, sampling to a
file, fractional moments, entropies, fitting, characterization self-checks,
and plot-ready CSV tables. Scalar results are printed as one JSON object
per invocation with deterministic field order; numeric fields use Python's
shortest round-trip representation (at least 15 significant digits).

Exit codes: 0 success, 1 check or convergence failure, 2 usage, 3 I/O,
4 bad data. The environment variable XGRATIO_SEED provides a default
sampling seed; an explicit --seed flag wins.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import characterization, entropy, estimation, ratio
from .errors import ConvergenceError, DataError, DomainError
from .numerics import RandomState

SEED_ENV_VAR = "XGRATIO_SEED"

_EVAL_DISPATCH = {
    "pdf": ratio.pdf,
    "cdf": ratio.cdf,
    "sf": ratio.survival,
    "hazard": ratio.hazard,
    "rhazard": ratio.reverse_hazard,
}


def _params(args) -> ratio.RatioParams:
    return ratio.RatioParams(args.alpha, args.beta)


def _emit(record: dict) -> None:
    print(json.dumps(record, indent=2))


def _parse_sweep(text: str, flag: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"{flag} expects lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise DomainError(f"{flag} expects numeric lo:hi:n, got {text!r}") from exc
    if n < 1 or hi < lo:
        raise DomainError(f"{flag} needs hi >= lo and n >= 1, got {text!r}")
    return np.linspace(lo, hi, n)


def _cmd_eval(args) -> int:
    params = _params(args)
    fn = _EVAL_DISPATCH[args.what]
    records = [{"z": z, "value": float(fn(params, z))} for z in args.at]
    _emit(
        {
            "command": "eval",
            "alpha": args.alpha,
            "beta": args.beta,
            "what": args.what,
            "records": records,
        }
    )
    return 0


def _cmd_quantile(args) -> int:
    params = _params(args)
    records = [
        {"prob": p, "value": ratio.quantile(params, p)} for p in args.prob
    ]
    _emit(
        {
            "command": "quantile",
            "alpha": args.alpha,
            "beta": args.beta,
            "records": records,
        }
    )
    return 0


def _resolve_seed(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise DomainError(
                f"{SEED_ENV_VAR} must be an integer, got {env!r}"
            ) from exc
    return 0


def _cmd_sample(args) -> int:
    params = _params(args)
    if args.n < 1:
        raise DomainError(f"-n must be at least 1, got {args.n}")
    seed = _resolve_seed(args.seed)
    batch = ratio.sample(params, args.n, RandomState(seed))
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        for value in batch.values:
            handle.write(f"{float(value)!r}\n")
    _emit(
        {
            "command": "sample",
            "alpha": args.alpha,
            "beta": args.beta,
            "n": args.n,
            "seed": seed,
            "out": args.out,
        }
    )
    return 0


def _cmd_moment(args) -> int:
    params = _params(args)
    records = [
        {"k": k, "value": ratio.fractional_moment(params, k)} for k in args.k
    ]
    _emit(
        {
            "command": "moment",
            "alpha": args.alpha,
            "beta": args.beta,
            "records": records,
        }
    )
    return 0


def _cmd_entropy(args) -> int:
    params = _params(args)
    if args.kind == "shannon":
        if args.order is not None:
            raise DomainError("--order applies only to renyi and tsallis")
        value = entropy.shannon_entropy(params)
    else:
        if args.order is None:
            raise DomainError(f"--order is required for {args.kind}")
        if args.kind == "renyi":
            value = entropy.renyi_entropy(params, args.order)
        else:
            value = entropy.tsallis_entropy(params, args.order)
    record = {
        "command": "entropy",
        "alpha": args.alpha,
        "beta": args.beta,
        "kind": args.kind,
    }
    if args.order is not None:
        record["order"] = args.order
    record["value"] = value
    _emit(record)
    return 0


def _cmd_fit(args) -> int:
    init = None
    if args.init is not None:
        parts = args.init.split(",")
        if len(parts) != 2:
            raise DomainError(f"--init expects alpha,beta, got {args.init!r}")
        try:
            init = ratio.RatioParams(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise DomainError(f"--init expects numbers, got {args.init!r}") from exc
    batch = estimation.read_samples(args.data, fmt=args.format, column=args.column)
    result = estimation.fit_mle(batch, init=init)
    _emit(
        {
            "command": "fit",
            "n": len(batch),
            "alpha_hat": result.alpha_hat,
            "beta_hat": result.beta_hat,
            "log_likelihood": result.log_likelihood,
            "converged": result.converged,
            "iterations": result.iterations,
            "standard_errors": (
                list(result.standard_errors)
                if result.standard_errors is not None
                else None
            ),
        }
    )
    return 0


def _cmd_check(args) -> int:
    params = _params(args)
    report = characterization.run_characterization_checks(
        params,
        k=args.k,
        reconstruction_grid_n=args.grid,
        z_max=args.z_max,
        mismatch_one_side=args.mismatch_one_side,
    )
    print(report.to_text())
    return 0 if report.passed else 1


def _cmd_table(args) -> int:
    params = _params(args)
    if args.what == "moment":
        if args.korder is None:
            raise DomainError("--korder lo:hi:n is required for moment tables")
        ks = _parse_sweep(args.korder, "--korder")
        if ks[0] <= -1.0 or ks[-1] >= 1.0:
            raise DomainError(
                f"moment orders must stay inside (-1, 1), got {args.korder!r}"
            )
        header = "k,value"
        rows = [(k, ratio.fractional_moment(params, float(k))) for k in ks]
    else:
        if args.range is None:
            raise DomainError("--range lo:hi:n is required for pdf/cdf tables")
        zs = _parse_sweep(args.range, "--range")
        if zs[0] < 0:
            raise DomainError(f"--range must start at z >= 0, got {args.range!r}")
        fn = ratio.pdf if args.what == "pdf" else ratio.cdf
        header = "z,value"
        rows = [(z, float(fn(params, float(z)))) for z in zs]
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(header + "\n")
        for x, v in rows:
            handle.write(f"{float(x)!r},{float(v)!r}\n")
    _emit(
        {
            "command": "table",
            "alpha": args.alpha,
            "beta": args.beta,
            "what": args.what,
            "rows": len(rows),
            "out": args.out,
        }
    )
    return 0


def _add_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, required=True,
                        help="numerator parameter (> 0)")
    parser.add_argument("--beta", type=float, required=True,
                        help="denominator parameter (> 0)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xgratio",
        description="Distribution of the ratio of two independent xgamma variables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate pdf/cdf/sf/hazard/rhazard at points")
    _add_params(p)
    p.add_argument("--at", type=float, nargs="+", required=True, metavar="Z")
    p.add_argument("--what", choices=sorted(_EVAL_DISPATCH), default="pdf")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("quantile", help="invert the cdf at given probabilities")
    _add_params(p)
    p.add_argument("--prob", type=float, nargs="+", required=True, metavar="P")
    p.set_defaults(handler=_cmd_quantile)

    p = sub.add_parser("sample", help="write exact draws to a file, one per line")
    _add_params(p)
    p.add_argument("-n", type=int, required=True, help="number of draws (>= 1)")
    p.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (default: ${SEED_ENV_VAR} or 0)")
    p.add_argument("--out", required=True, help="output path")
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("moment", help="fractional moments of order in (-1, 1)")
    _add_params(p)
    p.add_argument("-k", type=float, nargs="+", required=True, metavar="K")
    p.set_defaults(handler=_cmd_moment)

    p = sub.add_parser("entropy", help="Shannon, Renyi, or Tsallis entropy")
    _add_params(p)
    p.add_argument("--kind", choices=["shannon", "renyi", "tsallis"],
                   required=True)
    p.add_argument("--order", type=float, default=None,
                   help="entropy order (> 1/2, != 1); renyi/tsallis only")
    p.set_defaults(handler=_cmd_entropy)

    p = sub.add_parser("fit", help="maximum-likelihood fit from a data file")
    p.add_argument("--data", required=True, help="path to observations")
    p.add_argument("--format", choices=["plain", "csv"], default="plain")
    p.add_argument("--column", type=int, default=0,
                   help="zero-indexed csv column (csv format only)")
    p.add_argument("--init", default=None, metavar="A,B",
                   help="optional starting point, e.g. 1,1")
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser("check", help="run the characterization self-checks")
    _add_params(p)
    p.add_argument("-k", type=float, default=0.5,
                   help="moment order used by the identities")
    p.add_argument("--grid", type=int, default=400,
                   help="reconstruction grid size")
    p.add_argument("--z-max", type=float, default=20.0)
    p.add_argument("--mismatch-one-side", action="store_true",
                   help="negative control: perturb one side so checks must fail")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("table", help="write a two-column CSV table")
    _add_params(p)
    p.add_argument("--what", choices=["pdf", "cdf", "moment"], required=True)
    p.add_argument("--range", default=None, metavar="LO:HI:N",
                   help="z sweep for pdf/cdf tables")
    p.add_argument("--korder", default=None, metavar="LO:HI:N",
                   help="order sweep inside (-1, 1) for moment tables")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(handler=_cmd_table)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
