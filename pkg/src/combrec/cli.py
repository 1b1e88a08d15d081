"""Command-line front end.

Exit codes: 0 success, 1 numeric disagreement between a closed form and its
oracle, 2 invalid input, 3 internal consistency error.
"""

import argparse
import csv
import io
import sys

import numpy as np

from . import algebraic, binet
from .companion import build_companion, companion_power_closed, companion_power_naive
from .core import FLOAT_TOL, count_products, format_scalar, max_abs_deviation, mat_power_naive
from .errors import CombrecError, CommutativityError, ConsistencyError
from .problem import ProblemError, dump_canonical, load_problem
from .recurrence import closed_term, iterate_sequence
from .rho import rho_dp, rho_enum

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
BENCH_HEADER = ["n", "enum_mults", "dp_mults", "iter_mults", "naive_pow_mults"]
BINET_TOL = 1e-8
EXPM_TOL = 1e-9


class InputError(CombrecError):
    pass


def fmt_matrix(m):
    if m.shape == (1, 1):
        return format_scalar(m[0, 0])
    return "[" + "; ".join(", ".join(format_scalar(v) for v in row) for row in m.tolist()) + "]"


def print_table(rows, header, out):
    cells = [header] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    for row in cells:
        out.write("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() + "\n")


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _option(args, problem, key, default=None):
    val = getattr(args, key, None)
    if val is None:
        val = problem.options.get(key, default)
    if val is None:
        raise InputError(f"missing required option {key!r} (give it on the command line or in the file)")
    return val


def _tol(args, problem, default):
    if args.tol is not None:
        return args.tol
    return problem.options.get("tol", default)


def _agree(a, b, tol):
    if a.exact and b.exact:
        return a == b
    return a.close_to(b, tol)


def _deviation_ok(dev, tol, exact):
    return dev == 0 if exact else dev <= tol


def cmd_rho(args, problem, out):
    spec = problem.spec
    n = int(_option(args, problem, "n"))
    spec.coeffs.require_certified()
    if n < spec.r:
        out.write(f"below boundary: n={n} < r={spec.r}; table is empty\n")
        return EXIT_OK
    tol = _tol(args, problem, FLOAT_TOL)
    table = rho_dp(n, spec.coeffs)
    rows = []
    all_ok = True
    for m in range(spec.r, n + 1):
        e = rho_enum(m, spec.coeffs, threads=args.threads)
        ok = _agree(e, table[m], tol)
        all_ok &= ok
        rows.append([m, fmt_matrix(e), fmt_matrix(table[m]), "yes" if ok else "NO"])
    header = ["m", "enum", "dp", "agree"]
    print_table(rows, header, out)
    out.write(f"status: {'all agree' if all_ok else 'DISAGREEMENT'}\n")
    if args.csv:
        write_csv(args.csv, header, rows)
    return EXIT_OK if all_ok else EXIT_MISMATCH


def cmd_solve(args, problem, out):
    spec = problem.spec
    n = int(_option(args, problem, "n"))
    closed = closed_term(spec, n)
    oracle = iterate_sequence(spec, n)[n]
    dev = max_abs_deviation(closed, oracle)
    ok = _deviation_ok(dev, _tol(args, problem, FLOAT_TOL) * max(1.0, oracle.frobenius_norm()), closed.exact)
    rows = [[n, fmt_matrix(closed), fmt_matrix(oracle), format_scalar(dev)]]
    header = ["n", "closed_form", "iteration", "max_abs_deviation"]
    print_table(rows, header, out)
    if args.csv:
        write_csv(args.csv, header, rows)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_companion(args, problem, out):
    spec = problem.spec
    n = int(_option(args, problem, "n"))
    B = build_companion(spec.coeffs)
    naive = companion_power_naive(B, n).flatten()
    out.write(f"B^{n} by repeated squaring: {fmt_matrix(naive)}\n")
    if n < spec.r:
        out.write(f"closed form not applicable below n = r = {spec.r}\n")
        return EXIT_OK
    closed = companion_power_closed(spec.coeffs, n).flatten()
    dev = max_abs_deviation(closed, naive)
    out.write(f"B^{n} closed form:          {fmt_matrix(closed)}\n")
    out.write(f"max abs deviation: {format_scalar(dev)}\n")
    if args.csv:
        write_csv(args.csv, ["n", "closed_form", "naive", "max_abs_deviation"],
                  [[n, fmt_matrix(closed), fmt_matrix(naive), format_scalar(dev)]])
    ok = _deviation_ok(dev, _tol(args, problem, FLOAT_TOL) * max(1.0, naive.frobenius_norm()), closed.exact)
    return EXIT_OK if ok else EXIT_MISMATCH


def _fmt_complex(z):
    if z.imag == 0:
        return f"{z.real:.17g}"
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _fmt_carray(a):
    return "[" + "; ".join(", ".join(_fmt_complex(complex(v)) for v in row) for row in np.atleast_2d(a)) + "]"


def _rel_dev(approx, exact):
    a, b = approx.to_numpy(), exact.to_numpy()
    return float(np.max(np.abs(a - b) / (1.0 + np.abs(b))))


def cmd_binet(args, problem, out):
    spec = problem.spec
    n = int(_option(args, problem, "n"))
    tol_cluster = float(problem.options.get("tol_cluster", binet.CLUSTER_TOL))
    dec = binet.decompose(spec, tol_cluster)
    out.write("roots (lambda, multiplicity):\n")
    for lam, m in dec.spectral.roots:
        out.write(f"  {_fmt_complex(lam)}  x{m}\n")
    for w in dec.spectral.warnings:
        out.write(f"warning: {w}\n")
    out.write(f"vandermonde condition ~ {dec.condition:.3g}, solve residual {dec.residual:.3g}\n")
    rows = [[i, j, _fmt_carray(S)] for i, j, _, S in dec.terms()]
    print_table(rows, ["i", "j", "S_ij"], out)
    tol = _tol(args, problem, BINET_TOL)
    terms = iterate_sequence(spec, max(n, spec.r - 1))
    recon = max(_rel_dev(binet.binet_eval(dec, k), terms[k]) for k in range(spec.r))
    out.write(f"reconstruction of T_0..T_{spec.r - 1}: max rel deviation {recon:.3g}\n")
    value = binet.binet_eval(dec, n)
    dev = _rel_dev(value, terms[n])
    out.write(f"T_{n} Binet:     {fmt_matrix(value)}\n")
    out.write(f"T_{n} iteration: {fmt_matrix(terms[n])}\n")
    out.write(f"max rel deviation: {dev:.3g}\n")
    if args.csv:
        write_csv(args.csv, ["i", "j", "S_ij"], rows)
    return EXIT_OK if max(dev, recon) <= tol else EXIT_MISMATCH


def cmd_expm(args, problem, out):
    spec = problem.spec
    coeffs = binet.scalar_coefficients(spec.coeffs)
    T = spec.initial[1]
    expected = algebraic.power_sequence(T, spec.r)
    if not T.is_square or any(not _agree(a, b, FLOAT_TOL) for a, b in zip(spec.initial, expected)):
        raise InputError("expm needs initial terms I, T, T^2, ..., T^(r-1) of a square matrix T")
    tol_cluster = float(problem.options.get("tol_cluster", binet.CLUSTER_TOL))
    dec = algebraic.power_decomposition(T, coeffs, tol_cluster)
    closed = algebraic.algebraic_expm(dec)
    oracle = algebraic.expm_series_oracle(T)
    diff = float(np.linalg.norm(closed.to_numpy() - oracle.to_numpy()))
    rel = diff / max(float(np.linalg.norm(oracle.to_numpy())), 1e-300)
    out.write(f"exp(T) Bell closed form: {fmt_matrix(closed)}\n")
    out.write(f"exp(T) series oracle:    {fmt_matrix(oracle)}\n")
    out.write(f"max abs deviation: {format_scalar(max_abs_deviation(closed, oracle))}\n")
    out.write(f"frobenius rel deviation: {rel:.3g}\n")
    if args.csv:
        write_csv(args.csv, ["closed_form", "oracle", "rel_deviation"], [[fmt_matrix(closed), fmt_matrix(oracle), rel]])
    return EXIT_OK if rel <= _tol(args, problem, EXPM_TOL) else EXIT_MISMATCH


def bench_rows(spec, n_max):
    """Per-n d x d product counts for the four ways of reaching index ``n``.

    ``enum`` accumulates rho_enum over every ``m <= n`` (the table a closed
    form needs); ``naive_pow`` counts r d-blocks per side, i.e. one
    ``rd x rd`` product is ``r**3`` d x d products.
    """
    A, r, d = spec.coeffs, spec.r, spec.d
    A.require_certified()
    B = build_companion(A)
    rows = []
    enum_total = 0
    for n in range(r, n_max + 1):
        with count_products() as box:
            rho_enum(n, A)
        enum_total += box.equivalents(d)
        dp = rho_dp(n, A).op_count
        with count_products() as box:
            iterate_sequence(spec, n)
        it = box.equivalents(d)
        with count_products() as box:
            mat_power_naive(B.flatten(), n)
        rows.append([n, enum_total, dp, it, box.equivalents(d)])
    return rows


def cmd_bench(args, problem, out):
    n_max = int(_option(args, problem, "n_max", problem.options.get("n")))
    rows = bench_rows(problem.spec, n_max)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    w.writerows(rows)
    out.write(buf.getvalue())
    if args.csv:
        write_csv(args.csv, BENCH_HEADER, rows)
    return EXIT_OK


COMMANDS = {
    "rho": (cmd_rho, "table of rho(m) by enumeration and by dynamic programming"),
    "solve": (cmd_solve, "closed-form term T_n against direct iteration"),
    "companion": (cmd_companion, "closed-form companion power B^n against repeated squaring"),
    "binet": (cmd_binet, "Binet decomposition for scalar coefficients"),
    "expm": (cmd_expm, "exponential of an algebraic matrix via Bell polynomials"),
    "bench": (cmd_bench, "CSV of matrix-product counts per n"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="JSON problem file")
    common.add_argument("-n", type=int, dest="n", help="index to evaluate (overrides the file)")
    common.add_argument("--n-max", type=int, dest="n_max", help="largest n for bench")
    common.add_argument("--mode", choices=["exact", "float"], help="scalar ring (overrides the file)")
    common.add_argument("--tol", type=float, help="comparison tolerance for float results")
    common.add_argument("--threads", type=int, default=1, help="worker threads for rho enumeration")
    common.add_argument("--require-symmetric", action="store_true", help="reject non-symmetric coefficients")
    common.add_argument("--csv", metavar="PATH", help="also write machine-readable CSV to PATH")
    common.add_argument("--dump-canonical", action="store_true", help="print the parsed problem as canonical JSON and exit")

    parser = argparse.ArgumentParser(prog="combrec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        problem = load_problem(args.file, args.mode, args.require_symmetric)
        if args.dump_canonical:
            out.write(dump_canonical(problem) + "\n")
            return EXIT_OK
        func, _ = COMMANDS[args.command]
        return func(args, problem, out)
    except ConsistencyError as exc:
        print(f"ConsistencyError: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ProblemError, InputError, CommutativityError, CombrecError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - any other failure is an internal error
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
