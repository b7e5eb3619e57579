"""Command-line front end: ``binv cdf|quantile|sweep|bench``.

Exit status is 0 on success, 2 for usage errors and 1 when the inputs
violate a mathematical precondition or no solution exists.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import statistics
import sys
import time
from typing import Iterable, Sequence, TextIO

from . import binomial, negbinomial
from .binomial_inv import invert
from .errors import DomainError, OutOfRangeError
from .oracle import ErrorMetric, SweepRow, SweepSpec, default_p_grid, median_error, run_sweep

SWEEP_HEADER = ("distribution", "size_param", "alpha", "p", "x_asym", "x_oracle", "rel_error", "fallback")


def _num(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".17g")


def _alpha(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"alpha must be a number, got {text!r}") from None
    if not (0.0 < v <= 1.0):
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1], got {text}")
    return v


def _prob(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"p must be a number, got {text!r}") from None
    if not (0.0 < v < 1.0):
        raise argparse.ArgumentTypeError(f"p must lie in (0, 1), got {text}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_real(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}") from None
    if not (v > 0.0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binv", description="Binomial and negative binomial distribution functions and quantiles."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dist", choices=("binomial", "negbinomial"), default="binomial")
    common.add_argument("--format", choices=("text", "csv"), default="text", dest="output_format")
    common.add_argument("--output", help="write to this file instead of standard output")
    common.add_argument("--verbose", action="store_true", help="print intermediate quantities")

    sizes = argparse.ArgumentParser(add_help=False)
    sizes.add_argument("--n", type=_positive_int, help="number of trials (binomial)")
    sizes.add_argument("--r", type=_positive_real, help="number of successes (negative binomial)")

    sub = parser.add_subparsers(dest="command", required=True)

    p_cdf = sub.add_parser("cdf", parents=[common, sizes], help="evaluate the distribution function")
    p_cdf.add_argument("--p", type=_prob, required=True)
    p_cdf.add_argument("--x", type=float, required=True)
    p_cdf.add_argument("--method", choices=("auto", "exact", "beta_ref", "beta_asym"), default="auto")

    p_q = sub.add_parser("quantile", parents=[common, sizes], help="smallest x with alpha <= P(x)")
    p_q.add_argument("--p", type=_prob, required=True)
    p_q.add_argument("--alpha", type=_alpha, required=True)

    p_s = sub.add_parser("sweep", parents=[common], help="relative error of x_real over a p-grid")
    p_s.add_argument("--size", type=_positive_int, required=True, help="n or r")
    p_s.add_argument("--alpha", type=_alpha, required=True)
    p_s.add_argument("--p-grid", type=_prob, nargs="+", help="explicit grid (default 0.05:0.005:0.95)")
    p_s.add_argument(
        "--metric", choices=[m.value for m in ErrorMetric], default=ErrorMetric.RELATIVE_X_ERROR.value
    )
    p_s.add_argument("--threads", type=_positive_int, help="worker threads (default BINV_THREADS)")

    p_b = sub.add_parser("bench", parents=[common], help="median inversion time per size")
    p_b.add_argument("--sizes", type=_positive_int, nargs="+", default=[100, 1_000_000])
    p_b.add_argument("--p", type=_prob, default=0.4)
    p_b.add_argument("--alpha", type=_alpha, default=0.51)
    p_b.add_argument("--repeats", type=_positive_int, default=1000)
    return parser


def _size(args, parser) -> float:
    if args.dist == "binomial":
        if args.n is None:
            parser.error("--n is required for --dist binomial")
        return args.n
    if args.r is None:
        parser.error("--r is required for --dist negbinomial")
    return args.r


def _write_csv(out: TextIO, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if not isinstance(v, str) else v for v in row])


def emit_sweep_csv(table: Sequence[SweepRow], path: str | None = None) -> str:
    """Write a sweep table as CSV to ``path`` (or return it when path is None)."""
    buf = io.StringIO()
    rows = (
        (r.distribution, r.size_param, r.alpha, r.p, r.x_asym, r.x_oracle, r.rel_error, r.fallback)
        for r in table
    )
    _write_csv(buf, SWEEP_HEADER, rows)
    text = buf.getvalue()
    if path is not None and path != "-":
        try:
            with open(path, "w", encoding="ascii", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return text


def _cmd_cdf(args, size) -> str:
    if args.dist == "binomial":
        if args.method == "auto" and float(args.x).is_integer():
            x = int(args.x)
            p_val, q_val, branch = binomial._tails(*_binom_checked(size, args.p, x))
        else:
            p_val = binomial.cdf(size, args.p, args.x, args.method)
            q_val = 1.0 - p_val
            branch = binomial.cdf_branch(size, args.p, args.x)
        label = "P"
    else:
        if args.method not in ("auto", "exact"):
            raise DomainError("negative binomial cdf supports --method auto or exact")
        p_val, q_val, branch = negbinomial.nb_tails(size, args.p, args.x)
        label = "P^NB"
    if args.output_format == "csv":
        buf = io.StringIO()
        _write_csv(buf, ("distribution", "size_param", "p", "x", "cdf", "sf", "branch"),
                   [(args.dist, size, args.p, args.x, p_val, q_val, branch)])
        return buf.getvalue()
    text = f"{_num(p_val)}  (computed {branch} tail directly)\n"
    if args.verbose:
        text += f"{label} = {_num(p_val)}\nQ = {_num(q_val)}\nbranch = {branch}\n"
    return text


def _binom_checked(n, p, x):
    params = binomial.BinomialParams(n, p, x)
    return params.n, params.p, int(params.x)


_DIAG = ("x_real", "eta0", "xi0", "eta1", "eta", "xi", "achieved_cdf", "refinement_steps", "fallback_used")


def _cmd_quantile(args, size) -> str:
    if args.dist == "binomial":
        res = invert(size, args.p, args.alpha)
    else:
        res = negbinomial.nb_invert(size, args.p, args.alpha)
    diag = [(k, getattr(res, k)) for k in _DIAG] + sorted(res.extra.items())
    if args.output_format == "csv":
        buf = io.StringIO()
        header = ["distribution", "size_param", "p", "alpha", "x"] + [k for k, _ in diag]
        _write_csv(buf, header, [[args.dist, size, args.p, args.alpha, res.x_int] + [v for _, v in diag]])
        return buf.getvalue()
    text = f"{res.x_int}\n"
    if args.verbose:
        text += "".join(f"  {k:<16} {_num(v)}\n" for k, v in diag)
    return text


def _cmd_sweep(args) -> str:
    spec = SweepSpec(
        args.dist, args.size, args.alpha, tuple(args.p_grid or default_p_grid()), ErrorMetric(args.metric)
    )
    table = run_sweep(spec, threads=args.threads)
    if args.output_format == "csv":
        return emit_sweep_csv(table)
    lines = [f"{'p':>8} {'x_asym':>22} {'x_oracle':>22} {'error':>12}"]
    for r in table:
        flag = "  fallback" if r.fallback else ""
        lines.append(f"{r.p:8.4f} {r.x_asym:22.12f} {r.x_oracle:22.12f} {r.rel_error:12.4e}{flag}")
    lines.append(f"median {args.metric}: {median_error(table):.4e}")
    return "\n".join(lines) + "\n"


def _cmd_bench(args) -> str:
    fn = invert if args.dist == "binomial" else negbinomial.nb_invert
    rows = []
    for size in args.sizes:
        fn(size, args.p, args.alpha)  # warm caches
        times = []
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            res = fn(size, args.p, args.alpha)
            times.append(time.perf_counter() - t0)
        rows.append((size, statistics.median(times), res.fallback_used))
    base = rows[0][1]
    if args.output_format == "csv":
        buf = io.StringIO()
        _write_csv(buf, ("size", "median_seconds", "ratio", "fallback"),
                   [(s, t, t / base, fb) for s, t, fb in rows])
        return buf.getvalue()
    return "".join(
        f"{s:>10}  {t * 1e6:10.1f} us  x{t / base:5.2f}{'  fallback' if fb else ''}\n" for s, t, fb in rows
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        size = _size(args, parser) if args.command in ("cdf", "quantile") else None
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "cdf":
            text = _cmd_cdf(args, size)
        elif args.command == "quantile":
            text = _cmd_quantile(args, size)
        elif args.command == "sweep":
            text = _cmd_sweep(args)
        else:
            text = _cmd_bench(args)
        if args.output and args.output != "-":
            with open(args.output, "w", encoding="ascii", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (DomainError, OutOfRangeError, ValueError) as exc:
        print(f"binv {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"binv {args.command}: error: cannot write {args.output}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
