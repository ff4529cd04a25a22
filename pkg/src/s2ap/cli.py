"""Command-line entry point.

Exit codes: 0 success, 1 verification or consistency failure, 2 invalid
arguments.  Negative values in comma lists need the ``=`` form, e.g.
``s2ap witness --k=-1,2,0``.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import Sequence

from s2ap import analysis
from s2ap.density1d import delta_1d
from s2ap.densitymd import MAX_PRECISION, delta_md
from s2ap.digits import s2, tm
from s2ap.dyadic import Dyadic
from s2ap.oracle import brute_histogram_1d, brute_histogram_md, verify_witness
from s2ap.witness import Witness, realize_tm_word, witness

DEFAULT_PRECISION = 30
DEFAULT_K_MIN = -20
DEFAULT_MAX_M = 16


class UsageError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _bits(text: str) -> list[int]:
    if not text or any(c not in "01" for c in text):
        raise argparse.ArgumentTypeError(f"expected a word over 0/1, got {text!r}")
    return [int(c) for c in text]


def _precision(text: str) -> int:
    p = int(text)
    if not 1 <= p <= MAX_PRECISION:
        raise argparse.ArgumentTypeError(f"precision must be in [1, {MAX_PRECISION}]")
    return p


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _natural(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _dump(obj, out) -> None:
    json.dump(obj, out, indent=2)
    out.write("\n")


def _cmd_witness(args) -> int:
    if len(args.k) > args.max_m:
        raise UsageError(f"m = {len(args.k)} exceeds --max-m {args.max_m}; witness size grows "
                         "multiplicatively with m")
    w = witness(args.k)
    with _output(args.output) as out:
        _dump(w.to_json(), out)
    return 0


def _cmd_tm_word(args) -> int:
    if len(args.w) - 1 > args.max_m:
        raise UsageError(f"word length {len(args.w)} exceeds --max-m {args.max_m} + 1")
    w = realize_tm_word(args.w)
    obj = w.to_json()
    obj["word"] = "".join(map(str, args.w))
    with _output(args.output) as out:
        _dump(obj, out)
    return 0


def _cmd_verify(args) -> int:
    try:
        with open(args.file) as fh:
            obj = json.load(fh)
        w = Witness.from_json(obj)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read witness: {exc}")
    ok = verify_witness(w)
    word = obj.get("word")
    if ok and word is not None:
        ok = len(word) == w.m + 1 and all(tm(w.n + l * w.t) == int(c) for l, c in enumerate(word))
    _dump({"file": args.file, "m": w.m, "valid": ok}, sys.stdout)
    return 0 if ok else 1


def _cmd_density(args) -> int:
    d = delta_1d(args.t)
    rows = list(d.items(args.k_min))
    with _output(args.output) as out:
        if args.format == "json":
            _dump({
                "t": args.t,
                "s2_t": s2(args.t),
                "k_lo": d.k_lo,
                "tail_coeff": d.tail_coeff.to_json(),
                "tail_formula": "delta(k) = tail_coeff * 2^(k - k_lo) for k < k_lo",
                "values": [{"k": k, **v.to_json()} for k, v in rows],
            }, out)
        else:
            out.write(f"# t={args.t}; for k < {d.k_lo}: delta(k) = {d.tail_coeff} * 2^(k - {d.k_lo})\n")
            out.write("k,num,den,float\n")
            for k, v in rows:
                out.write(f"{k},{v.num},{v.denominator},{float(v)!r}\n")
    return 0


def _cmd_density_md(args) -> int:
    eps = args.eps if args.eps is not None else [0] * args.m
    if len(eps) != args.m or any(x < 0 for x in eps):
        raise UsageError(f"--eps must list {args.m} nonnegative integers")
    d = delta_md(args.m, args.t, eps, args.precision)
    keys = sorted(d.nums)
    with _output(args.output) as out:
        if args.format == "json":
            _dump({
                "m": d.m, "t": d.t, "eps": list(d.eps), "precision": args.precision,
                "lost_mass_bound": d.lost_mass_bound.to_json(),
                "entries": [{"k": list(k), **Dyadic.of(d.nums[k], d.exp).to_json()} for k in keys],
            }, out)
        else:
            out.write(f"# lost_mass_bound={d.lost_mass_bound}\n")
            out.write(",".join(f"k{i + 1}" for i in range(d.m)) + ",num,den,float\n")
            for k in keys:
                v = Dyadic.of(d.nums[k], d.exp)
                out.write(",".join(map(str, k)) + f",{v.num},{v.denominator},{float(v)!r}\n")
    return 0


def _cmd_cusick(args) -> int:
    rows = analysis.scan_cusick(args.t_from, args.t_to, args.jobs)
    with _output(args.output) as out:
        analysis.export(rows, args.format, out, "cusick")
    return 0


def _cmd_problem1(args) -> int:
    rows = analysis.scan_problem1(args.t_from, args.t_to, args.precision, args.jobs)
    with _output(args.output) as out:
        analysis.export(rows, args.format, out, "problem1")
    return 0


def _cmd_gaussian(args) -> int:
    rep = analysis.gaussian_report(args.m, args.t, args.precision)
    with _output(args.output) as out:
        analysis.export(rep, "json", out)
    return 0


def _cmd_brute(args) -> int:
    N = args.N
    if args.mode == "1d":
        hist = {(k,): c for k, c in brute_histogram_1d(args.t, N, args.jobs).items()}
        if args.k is not None and len(args.k) != 1:
            raise UsageError("--k takes a single integer in 1d mode")
        eps = None
    else:
        if args.eps is None:
            raise UsageError("--eps is required in md mode")
        eps = args.eps
        if any(x < 0 for x in eps):
            raise UsageError("--eps entries must be nonnegative")
        hist = brute_histogram_md(eps, args.t, N, args.jobs)
        if args.k is not None and len(args.k) != len(eps):
            raise UsageError("--k and --eps must have the same length")
    if args.k is not None:
        key = tuple(args.k)
        hist = {key: hist.get(key, 0)}
    status = 0
    rows = []
    if args.check is not None:
        if args.mode == "1d":
            if args.t < 1:
                raise UsageError("--check needs t >= 1")
            law = delta_1d(args.t)
            engine = {k: law.value(k[0]) for k in hist}
            slack = Dyadic(0)
        else:
            d = delta_md(len(eps), args.t, eps, args.precision)
            engine = {k: d[k] for k in hist}
            slack = d.lost_mass_bound
        tol = Fraction(args.check) + slack.to_fraction()
        for k in hist:
            if abs(Fraction(hist[k], N) - engine[k].to_fraction()) > tol:
                status = 1
    for k, c in hist.items():
        row = {"k": list(k), "count": c, "N": N, "fraction": float(Fraction(c, N))}
        if args.check is not None:
            row["engine"] = engine[k].to_json()
        rows.append(row)
    with _output(args.output) as out:
        _dump({"mode": args.mode, "t": args.t, "eps": eps, "N": N, "counts": rows,
               "consistent": status == 0}, out)
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="s2ap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=True):
        sp.add_argument("--output", "-o", default=None, help="write to file instead of stdout")
        if formats:
            sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = sub.add_parser("witness", help="construct (n, t) with s2(n + l t) - s2(n) = k_l")
    sp.add_argument("--k", type=_int_list, required=True, help="comma-separated targets k_1..k_m")
    sp.add_argument("--max-m", type=_positive, default=DEFAULT_MAX_M)
    common(sp, formats=False)
    sp.set_defaults(func=_cmd_witness)

    sp = sub.add_parser("tm-word", help="realize a Thue-Morse word along a progression")
    sp.add_argument("--w", type=_bits, required=True, help="word w_0 w_1 ... w_m, e.g. 01101")
    sp.add_argument("--max-m", type=_positive, default=DEFAULT_MAX_M)
    common(sp, formats=False)
    sp.set_defaults(func=_cmd_tm_word)

    sp = sub.add_parser("verify", help="re-verify a stored witness JSON file")
    sp.add_argument("--file", required=True)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("density", help="exact table of delta(k, t)")
    sp.add_argument("--t", type=_positive, required=True)
    sp.add_argument("--k-min", type=int, default=DEFAULT_K_MIN)
    common(sp)
    sp.set_defaults(func=_cmd_density)

    sp = sub.add_parser("density-md", help="truncated joint law delta(k, eps, t)")
    sp.add_argument("--m", type=_positive, required=True)
    sp.add_argument("--t", type=_natural, required=True)
    sp.add_argument("--eps", type=_int_list, default=None)
    sp.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
    common(sp)
    sp.set_defaults(func=_cmd_density_md)

    for name, func, helptext in (
        ("cusick", _cmd_cusick, "scan exact c_t over a range of t"),
        ("problem1", _cmd_problem1, "scan bounds on the two-step density over a range of t"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--from", dest="t_from", type=_positive, required=True)
        sp.add_argument("--to", dest="t_to", type=_positive, required=True)
        sp.add_argument("--jobs", type=_positive, default=1)
        if name == "problem1":
            sp.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("gaussian", help="moment report and Gaussian distance (JSON)")
    sp.add_argument("--m", type=int, choices=[1, 2, 3], required=True)
    sp.add_argument("--t", type=_positive, required=True)
    sp.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
    common(sp, formats=False)
    sp.set_defaults(func=_cmd_gaussian)

    sp = sub.add_parser("brute", help="brute-force counts over 0 <= n < N")
    sp.add_argument("--mode", choices=["1d", "md"], required=True)
    sp.add_argument("--t", type=_natural, required=True)
    sp.add_argument("--N", type=_positive, default=1 << 16)
    sp.add_argument("--k", type=_int_list, default=None, help="restrict to one k (vector in md mode)")
    sp.add_argument("--eps", type=_int_list, default=None)
    sp.add_argument("--check", type=float, default=None,
                    help="compare with the engine; exit 1 if off by more than this (+ lost mass)")
    sp.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
    sp.add_argument("--jobs", type=_positive, default=1)
    common(sp, formats=False)
    sp.set_defaults(func=_cmd_brute)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "t_from", None) is not None and args.t_to < args.t_from:
        print(f"s2ap: error: --to must be >= --from", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"s2ap: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
