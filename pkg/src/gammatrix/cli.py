"""Command-line front end.

Exit codes: 0 success, 1 unreadable or malformed file, 2 bad argument or
vector length, 3 operation-count mismatch, 4 oracle deviation or singular
preconditioner, 5 solver did not converge.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import transforms as tr
from .errors import (
    FormulaDiscrepancyError,
    GammaError,
    IndefiniteMatrixError,
    InvalidOrderError,
    SingularMatrixError,
)
from .pcg import pcg
from .toeplitz import SymToeplitz, frobenius_projection_oracle, gamma_approx, preconditioned_spectrum

EXIT_FILE = 1
EXIT_USAGE = 2
EXIT_COUNTS = 3
EXIT_NUMERIC = 4
EXIT_NOCONV = 5


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def read_vector(path):
    """Parse a vector file: one real per line, optional ``# n=<order>`` header."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CliError(EXIT_FILE, f"cannot read {path}: {exc.strerror}") from exc
    declared = None
    values = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip().replace(" ", "")
            if body.startswith("n="):
                try:
                    declared = int(body[2:])
                except ValueError:
                    raise CliError(EXIT_FILE, f"{path}:{lineno}: bad header {raw!r}") from None
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise CliError(EXIT_FILE, f"{path}:{lineno}: not a number: {raw!r}") from None
    if declared is not None and declared != len(values):
        raise CliError(EXIT_FILE, f"{path}: header says n={declared} but {len(values)} values follow")
    if not values:
        raise CliError(EXIT_FILE, f"{path}: no values")
    return np.array(values)


def write_vector(path, x):
    x = np.asarray(x, dtype=float)
    body = "".join(f"{v:.17g}\n" for v in x)
    _write_text(path, f"# n={len(x)}\n" + body)


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_FILE, f"cannot write {path}: {exc.strerror}") from exc


def dump_report(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _emit(report, path):
    text = dump_report(report)
    if path:
        _write_text(path, text)
    return text


def _require_order(n):
    try:
        return tr.check_order(n)
    except InvalidOrderError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None


def _read_toeplitz(path):
    return SymToeplitz(read_vector(path))


def cmd_transform(args):
    x = read_vector(args.infile)
    n = _require_order(len(x))
    counter = tr.OpCounter()
    t0 = time.perf_counter()
    fn = tr.idsct if args.op == "idsct" else tr.dsct
    y = fn(x, counter=counter)
    elapsed = time.perf_counter() - t0
    write_vector(args.out, y)
    if args.counts or args.report:
        headline, detailed = tr.predicted_pipeline_additions(n)
        report = {
            "command": "transform",
            "op": args.op,
            "n": n,
            "counts": {
                "measured": {
                    "total": list(counter.as_tuple()),
                    "stages": {k: list(v) for k, v in sorted(counter.stages.items())},
                },
                "predicted": {
                    "cs": list(tr.predicted_counts_cs(n)),
                    "sn": list(tr.predicted_counts_sn(n)),
                    "matvec_additions_leading_order": {"7/4 n log2 n": headline, "5 n log2 n": detailed},
                },
            },
            "timings": {"transform_s": elapsed},
        }
        text = _emit(report, args.report)
        if args.counts:
            sys.stdout.write(text)
    return 0


def _structured(rng, n, kind):
    x = rng.standard_normal(n)
    mirrored = np.concatenate((x[:1], x[:0:-1]))
    return x + mirrored if kind == "sym" else x - mirrored


def cmd_verify_counts(args):
    top = _require_order(args.max_n)
    rng = np.random.default_rng(args.seed)
    rows = []
    ok = True
    n = 4
    while n <= top:
        cs_counter = tr.OpCounter()
        sn_counter = tr.OpCounter()
        tr.cs(_structured(rng, n, "sym"), counter=cs_counter)
        tr.sn(_structured(rng, n, "asym"), counter=sn_counter)
        row = {
            "n": n,
            "cs": {"measured": list(cs_counter.as_tuple()), "predicted": list(tr.predicted_counts_cs(n))},
            "sn": {"measured": list(sn_counter.as_tuple()), "predicted": list(tr.predicted_counts_sn(n))},
        }
        row["pass"] = row["cs"]["measured"] == row["cs"]["predicted"] and row["sn"]["measured"] == row["sn"]["predicted"]
        ok &= row["pass"]
        rows.append(row)
        n *= 2

    out = sys.stdout
    out.write(f"{'n':>6} {'CS adds':>10} {'CS muls':>10} {'SN adds':>10} {'SN muls':>10}  status\n")
    for row in rows:
        ca, cm = row["cs"]["measured"]
        sa, sm = row["sn"]["measured"]
        out.write(f"{row['n']:>6} {ca:>10} {cm:>10} {sa:>10} {sm:>10}  {'pass' if row['pass'] else 'MISMATCH'}\n")
        if not row["pass"]:
            out.write(f"       predicted CS {tuple(row['cs']['predicted'])} SN {tuple(row['sn']['predicted'])}\n")
    if args.report:
        _emit({"command": "verify-counts", "seed": args.seed, "max_n": top, "sizes": rows, "pass": ok}, args.report)
    return 0 if ok else EXIT_COUNTS


def cmd_precond(args):
    T = _read_toeplitz(args.toeplitz)
    try:
        G = gamma_approx(T)
    except InvalidOrderError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    except FormulaDiscrepancyError as exc:
        sys.stderr.write(dump_report(_discrepancy_dump(exc)))
        raise CliError(EXIT_NUMERIC, str(exc)) from None
    report = {"command": "precond", "n": T.n, "c": G.c.tolist(), "b": G.b.tolist()}
    code = 0
    if args.oracle_check:
        if T.n > 128:
            raise CliError(EXIT_USAGE, "--oracle-check is limited to n <= 128")
        oracle = frobenius_projection_oracle(T)
        dev = max(float(np.abs(G.c - oracle.c).max()), float(np.abs(G.b - oracle.b).max()))
        report["oracle"] = {"c": oracle.c.tolist(), "b": oracle.b.tolist(), "max_deviation": dev}
        if dev > 1e-8:
            sys.stderr.write(f"oracle deviation {dev:.3e} exceeds 1e-8\n")
            sys.stderr.write(dump_report({"formula": {"c": G.c.tolist(), "b": G.b.tolist()}, "oracle": report["oracle"]}))
            code = EXIT_NUMERIC
    _emit(report, args.out)
    return code


def _discrepancy_dump(exc):
    dump = {}
    if exc.formula is not None:
        dump["formula"] = {"c": np.asarray(exc.formula[0]).tolist(), "b": np.asarray(exc.formula[1]).tolist()}
    if exc.oracle is not None:
        dump["oracle"] = {"c": np.asarray(exc.oracle[0]).tolist(), "b": np.asarray(exc.oracle[1]).tolist()}
    return dump


def cmd_spectrum(args):
    if not args.epsilon > 0:
        raise CliError(EXIT_USAGE, "--epsilon must be positive")
    T = _read_toeplitz(args.toeplitz)
    t0 = time.perf_counter()
    try:
        G = gamma_approx(T)
        rep = preconditioned_spectrum(T, G, args.epsilon)
    except InvalidOrderError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    except (SingularMatrixError, FormulaDiscrepancyError) as exc:
        raise CliError(EXIT_NUMERIC, str(exc)) from None
    report = {"command": "spectrum", **rep.as_dict(), "timings": {"spectrum_s": time.perf_counter() - t0}}
    _emit(report, args.out)
    return 0


def cmd_solve(args):
    T = _read_toeplitz(args.toeplitz)
    rhs = read_vector(args.rhs)
    if len(rhs) != T.n:
        raise CliError(EXIT_USAGE, f"rhs length {len(rhs)} does not match n={T.n}")
    if args.maxit < 0 or not args.tol > 0:
        raise CliError(EXIT_USAGE, "--maxit must be >= 0 and --tol positive")
    t0 = time.perf_counter()
    try:
        G = None if args.no_precond else gamma_approx(T)
        out = pcg(T, rhs, G, args.tol, args.maxit)
    except InvalidOrderError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    except (SingularMatrixError, IndefiniteMatrixError, FormulaDiscrepancyError) as exc:
        raise CliError(EXIT_NUMERIC, str(exc)) from None
    report = {
        "command": "solve",
        "n": T.n,
        "preconditioned": not args.no_precond,
        "tol": args.tol,
        "maxit": args.maxit,
        **out.as_dict(),
        "timings": {"solve_s": time.perf_counter() - t0},
    }
    _emit(report, args.out)
    return 0 if out.converged else EXIT_NOCONV


def _default_seed():
    raw = os.environ.get("GAMMA_SEED")
    try:
        return int(raw) if raw is not None else 0
    except ValueError:
        return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="gammatrix", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=_default_seed(), help="seed for random inputs (default: $GAMMA_SEED or 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="apply idsct or dsct to a vector file")
    p.add_argument("--op", choices=("idsct", "dsct"), required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--counts", action="store_true", help="print measured and predicted operation counts as JSON")
    p.add_argument("--report", help="also write the JSON report to this file")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify-counts", help="check kernel operation counts against the closed forms")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify_counts)

    p = sub.add_parser("precond", help="gamma-matrix approximation of a symmetric Toeplitz matrix")
    p.add_argument("--toeplitz", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--oracle-check", action="store_true")
    p.set_defaults(func=cmd_precond)

    p = sub.add_parser("spectrum", help="preconditioned spectrum and outlier count")
    p.add_argument("--toeplitz", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("solve", help="solve a Toeplitz system with PCG")
    p.add_argument("--toeplitz", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--no-precond", action="store_true")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--maxit", type=int, default=1000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"gammatrix: {exc}\n")
        return exc.code
    except GammaError as exc:
        sys.stderr.write(f"gammatrix: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
