"""Command-line interface.

Exit codes of ``check`` and ``check-sfs``:

    0  unique
    1  input error
    2  third factor unique only
    3  inconclusive
    4  a necessary condition is violated (not unique if R is the rank)

``generic`` exits 0 when a witness is found and 3 otherwise; ``examples``
exits 0 when every check passes and 5 otherwise.
"""

import argparse
import re
import sys
from pathlib import Path

import numpy as np

from . import generic, io, regression
from .certify import Options, Tier, certify, certify_sfs
from .tensor import FactorTriple

EXIT_CODES = {
    Tier.UNIQUE: 0,
    Tier.THIRD_FACTOR_UNIQUE: 2,
    Tier.INCONCLUSIVE: 3,
    Tier.NECESSARY_VIOLATED: 4,
}
EXIT_INPUT_ERROR = 1
EXIT_NO_WITNESS = 3
EXIT_REGRESSION = 5


class InputError(Exception):
    pass


def _load(paths, mode):
    mats, blobs = [], []
    for label, path in paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"{path}: {exc.strerror}") from None
        try:
            _, M = io.parse_matrix(text, str(path))
        except io.MatrixFileError as exc:
            raise InputError(str(exc)) from None
        mats.append(M)
        blobs.append((label, text))
    has_float = any(M.dtype != object for M in mats)
    if mode == "exact" and has_float:
        raise InputError("--mode exact given but an input contains decimal entries")
    if mode == "float" or has_float:
        mats = [np.array(M, dtype=np.float64) for M in mats]
    return mats, io.inputs_digest(blobs)


def _emit_certificate(cert, digest, args):
    for line in io.summarize(cert):
        print(line)
    if args.verbose:
        for key, o in cert.conditions.items():
            print(f"  {key:<18} {o.verdict.value:<8} {o.detail}")
    if args.out:
        Path(args.out).write_text(io.dumps_document(io.certificate_document(cert, digest)), encoding="utf-8")
    return EXIT_CODES[cert.tier]


def cmd_check(args):
    mats, digest = _load([("A", args.A), ("B", args.B), ("C", args.C)], args.mode)
    try:
        F = FactorTriple(*mats)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    cert = certify(F, args.tol, Options(roles=args.roles))
    return _emit_certificate(cert, digest, args)


def cmd_check_sfs(args):
    (A, C), digest = _load([("A", args.A), ("C", args.C)], args.mode)
    try:
        cert = certify_sfs(A, C, args.tol, Options(roles=args.roles))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    return _emit_certificate(cert, digest, args)


def _describe(v):
    flag = "exact" if v.exact else f"float, not certified, pivot margin {v.margin:.3g}"
    rows, cols = v.shape
    return (f"condition {v.condition} at m={v.m}: {rows}x{cols} compound product "
            f"has full column rank ({flag}); witness seed {v.seed}")


def cmd_generic(args):
    I, J, K = args.dims
    if args.sfs and I != J:
        raise InputError("--sfs needs I == J")
    kinds = {r: args.sampler for r in "ABC"}
    try:
        if args.max_rank:
            generic.check_guards(I, J, K, args.mode, sfs=args.sfs)
            if args.sfs:
                R, v, beyond = generic.max_rank_sfs(I, K, args.trials, args.seed, args.mode)
            else:
                R, v, beyond = generic.max_rank_cpd(I, J, K, kinds, args.trials, args.seed, args.mode)
            if v is None:
                print(f"{I}x{J}x{K}: no witness found for R = 2")
                return EXIT_NO_WITNESS
            print(f"{I}x{J}x{K}: generically unique for every R <= {R}")
            print("  at R = %d: %s" % (R, _describe(v)))
            if beyond:
                print("  also witnessed after a gap: R = " + ", ".join(map(str, beyond)))
            return 0
        R = args.rank
        generic.check_guards(I, J, K, args.mode, ranks=[R], sfs=args.sfs)
        if args.sfs:
            v = generic.generic_unique_sfs(I, K, R, args.trials, args.seed, args.mode)
        else:
            v = generic.generic_unique_cpd(I, J, K, R, kinds, args.trials, args.seed, args.mode)
    except generic.GuardError as exc:
        raise InputError(str(exc)) from None
    if v is None:
        print(f"{I}x{J}x{K}, R = {R}: no witness found")
        return EXIT_NO_WITNESS
    print(f"{I}x{J}x{K}, R = {R}: generically unique")
    print("  " + _describe(v))
    return 0


_RANGE = re.compile(r"([IK])=(\d+)(?:\.\.(\d+))?\Z")


def _parse_ranges(items):
    out = {}
    for item in items or []:
        for part in item.split(","):
            m = _RANGE.match(part.strip())
            if not m:
                raise InputError(f"bad range {part!r}; expected e.g. I=4..7 or K=2..33")
            lo = int(m.group(2))
            hi = int(m.group(3) or lo)
            if hi < lo:
                raise InputError(f"empty range {part!r}")
            out[m.group(1)] = range(lo, hi + 1)
    return out


def cmd_tables(args):
    ranges = _parse_ranges(args.range)
    if args.which == "2":
        table_ranges = ranges.get("I", range(4, 10))
    elif args.which == "3":
        table_ranges = (ranges.get("I", range(4, 10)), ranges.get("K", range(2, 34)))
    else:
        table_ranges = None
    try:
        table = generic.make_table(args.which, table_ranges, args.trials, args.seed, args.mode)
    except generic.GuardError as exc:
        raise InputError(str(exc)) from None
    text = table.to_csv() if args.out == "csv" else table.to_text() + "\n"
    if args.file:
        Path(args.file).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_examples(args):
    try:
        checks = regression.run(args.only, alpha=args.alpha, tamper=args.tamper)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    failed = 0
    for c in checks:
        failed += not c.passed
        tail = f"  ({c.detail})" if c.detail and not c.passed else ""
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.suite}: {c.name}{tail}")
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else EXIT_REGRESSION


def _fraction(text):
    from fractions import Fraction
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="cpdunique", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def certificate_flags(sp):
        sp.add_argument("--mode", choices=("auto", "exact", "float"), default="auto",
                        help="arithmetic; auto is exact unless an input has decimals")
        sp.add_argument("--tol", type=float, default=None, help="rank tolerance in float mode")
        sp.add_argument("--roles", choices=("all", "fixed"), default="all")
        sp.add_argument("--out", help="write the certificate document (JSON) here")
        sp.add_argument("-v", "--verbose", action="store_true", help="list every evaluated condition")

    sp = sub.add_parser("check", help="certify uniqueness of a decomposition [A, B, C]")
    sp.add_argument("A")
    sp.add_argument("B")
    sp.add_argument("C")
    certificate_flags(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("check-sfs", help="certify a decomposition [A, A, C] with symmetric slices")
    sp.add_argument("A")
    sp.add_argument("C")
    certificate_flags(sp)
    sp.set_defaults(func=cmd_check_sfs)

    sp = sub.add_parser("generic", help="generic uniqueness for given dimensions")
    sp.add_argument("--dims", nargs=3, type=int, required=True, metavar=("I", "J", "K"))
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--rank", type=int)
    g.add_argument("--max-rank", action="store_true")
    sp.add_argument("--sampler", choices=("dense", "toeplitz", "hankel"), default="dense")
    sp.add_argument("--sfs", action="store_true", help="symmetric frontal slices (A = B)")
    sp.add_argument("--trials", type=int, default=generic.DEFAULT_TRIALS)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=("auto", "exact", "float"), default="auto")
    sp.set_defaults(func=cmd_generic)

    sp = sub.add_parser("tables", help="regenerate a generic-uniqueness table")
    sp.add_argument("--which", choices=("2", "3", "umwm"), required=True)
    sp.add_argument("--range", action="append", help="e.g. I=4..7 or I=4..5,K=2..33")
    sp.add_argument("--out", choices=("text", "csv"), default="text")
    sp.add_argument("--file", help="write here instead of standard output")
    sp.add_argument("--trials", type=int, default=generic.DEFAULT_TRIALS)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=("auto", "exact", "float"), default="auto")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("examples", help="run the built-in example checks")
    sp.add_argument("--only", choices=sorted(regression.SUITES))
    sp.add_argument("--alpha", type=_fraction, default=1, help="parameter of the w_fails family")
    sp.add_argument("--tamper", action="store_true", help="perturb the sharpness family (negative control)")
    sp.set_defaults(func=cmd_examples)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT_ERROR if exc.code else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
