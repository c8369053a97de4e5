"""Command-line entry point.

Every subcommand prints one JSON document on stdout.  Exit status is 0 on
success, 2 when a scenario's built-in check fails and 1 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import experiments as ex
from .errors import OpIdentError
from .lattice import Lattice4, SQRT2, tilde_lattice, two_beurling_density

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 is reserved for failed checks here
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _gen(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None
    if len(vals) != 8:
        raise argparse.ArgumentTypeError(f"--gen needs 8 entries a1,b1,c1,d1,a2,b2,c2,d2, got {len(vals)}")
    return vals


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _global_flags(suppress):
    # the subcommand copy must not reset a value given before the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=argparse.SUPPRESS if suppress else 1e-6,
                        help="identifiability tolerance (default 1e-6)")
    common.add_argument("--trunc-N", dest="trunc_N", type=_positive_int,
                        default=argparse.SUPPRESS if suppress else 4,
                        help="index box half-width for lattices that do not close on Z_L (default 4)")
    return common


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opident", description="Operator identification experiments on Z_L.",
                parents=[_global_flags(False)])
    common = _global_flags(True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("density", parents=[common], help="2-Beurling density of a lattice in R^4")
    d.add_argument("--gen", type=_gen, required=True, metavar="a1,b1,c1,d1,a2,b2,c2,d2")

    t = sub.add_parser("thm51", parents=[common], help="delta-train identification of a box spreading class")
    t.add_argument("--L", type=_positive_int, default=64)
    t.add_argument("--a", type=_positive_int, default=8)

    g = sub.add_parser("gauss", parents=[common], help="Gaussian prototype on an example lattice")
    g.add_argument("--variant", type=int, choices=(1, 2), default=1)
    g.add_argument("--alpha", type=_positive_float, default=2.0)
    g.add_argument("--beta", type=_positive_float, default=2.0)
    g.add_argument("--L", type=_positive_int, default=128)

    n = sub.add_parser("notident", parents=[common], help="non-identifiable family with |alpha beta| < 1")
    n.add_argument("--alpha", type=float, default=2.0)
    n.add_argument("--beta", type=float, default=0.25)
    n.add_argument("--L", type=_positive_int, default=128)

    s = sub.add_parser("sweep", parents=[common], help="random-lattice sweep against the density bound")
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--L", type=_positive_int, default=64)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--out", default=None, help="CSV or JSON output path")
    s.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    s.add_argument("--workers", type=_positive_int, default=1)
    return p


def _clean(v):
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.generic):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _emit(obj):
    print(json.dumps(_clean(obj), indent=1))


def _record_summary(rec):
    return {
        "entries": rec.entries,
        "gen_discrete": rec.gen_discrete,
        "L": rec.L,
        "D2": rec.D2,
        "Dtilde": rec.Dtilde,
        "closes": rec.closes,
        "n_points": rec.n_points,
        "riesz_spreading_lo": rec.riesz_spreading_lo,
        "riesz_response_lo": rec.riesz_response_lo,
        "identifier": rec.identifier,
        "identifiable": rec.identifiable,
    }


def cmd_density(args):
    lat = Lattice4.from_entries(*args.gen)
    tl = tilde_lattice(lat)
    D2 = two_beurling_density(lat)
    _emit({
        "entries": lat.entries,
        "minors": lat.minors().tolist(),
        "D2": D2,
        "necessary_condition": D2 <= SQRT2,
        "det_tilde": tl.det,
        "Dtilde": math.inf if tl.degenerate else 1.0 / abs(tl.det),
    })
    return EXIT_OK


def cmd_thm51(args):
    rep = ex.run_thm51(args.L, args.a, tol=args.tol)
    ok = rep.max_abs_A_minus_I < 1e-10 and rep.recovery_relative_error < 1e-10
    _emit({
        "L": rep.L, "a": args.a, "n_points": rep.n_points,
        "max_abs_A_minus_I": rep.max_abs_A_minus_I,
        "recovery_relative_error": rep.recovery_relative_error,
        "spreading_bounds": rep.spreading_bounds, "response_bounds": rep.response_bounds,
        "analysis_bounds": rep.extra["analysis_bounds"],
        "cond_A": rep.cond_A, "D2": rep.D2, "Dtilde": rep.Dtilde,
        "identifiable": rep.identifiable, "runtime_s": rep.runtime_s, "check_passed": ok,
    })
    return EXIT_OK if ok else EXIT_CHECK


def cmd_gauss(args):
    rec = ex.run_gaussian_example(args.variant, args.alpha, args.beta, args.L, tol=args.tol, N=args.trunc_N)
    _emit({**_record_summary(rec), "predicates": rec.extra["predicates"]})
    return EXIT_OK


def cmd_notident(args):
    rec = ex.run_notident(args.alpha, args.beta, args.L, tol=args.tol, N=args.trunc_N)
    lo_N, lo_2N = rec.extra["response_lo_N"], rec.extra["response_lo_2N"]
    spreading_ok = rec.riesz_spreading_lo >= args.tol
    all_small = all(v < args.tol for v in lo_N.values())
    ok = spreading_ok and all_small and not rec.identifiable
    _emit({
        **_record_summary(rec),
        "discrete_alpha_beta": rec.extra["discrete_alpha_beta"],
        "n_points_2N": rec.extra["n_points_2N"],
        "response_lo_N": lo_N,
        "response_lo_2N": lo_2N,
        "check_passed": ok,
    })
    return EXIT_OK if ok else EXIT_CHECK


def cmd_sweep(args):
    if args.samples < 0:
        raise UsageError("--samples must be non-negative")
    t0 = time.perf_counter()
    try:
        records = ex.run_density_sweep(args.samples, args.L, args.seed, tol=args.tol, N=args.trunc_N,
                                       out=args.out, fmt=args.fmt, workers=args.workers)
    except AssertionError as e:
        print(f"opident sweep: {e}", file=sys.stderr)
        return EXIT_CHECK
    bad = ex.density_violations(records)
    _emit({
        "samples": len(records),
        "L": args.L,
        "seed": args.seed,
        "identifiable": sum(r.identifiable for r in records),
        "max_identifiable_D2": max((r.D2 for r in records if r.identifiable), default=None),
        "above_sqrt2": sum(r.D2 > SQRT2 for r in records),
        "violations": len(bad),
        "out": args.out,
        "runtime_s": time.perf_counter() - t0,
    })
    return EXIT_OK if not bad else EXIT_CHECK


COMMANDS = {
    "density": cmd_density,
    "thm51": cmd_thm51,
    "gauss": cmd_gauss,
    "notident": cmd_notident,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (OpIdentError, ValueError) as e:
        print(f"opident: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"opident: {e}", file=sys.stderr)
        return EXIT_USAGE
