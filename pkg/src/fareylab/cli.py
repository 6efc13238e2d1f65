"""Command-line front end.

Subcommands: verify, avg, corr, constants, dist, latcount.  Exact rationals
are printed in p/q form; decimal approximations only appear in *_approx
columns.  Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import constants as consts
from . import identities, triangle
from .farey import correlation_sum, count_farey, sum_nu_k


def _rat(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _load_config(path: str) -> dict:
    """key = value lines; # starts a comment; values stay strings and feed
    argparse defaults (explicit flags win)."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def _emit(rows: list[dict], fmt: str, out_path: Optional[str], command: str) -> None:
    if fmt == "json":
        text = json.dumps({"command": command, "rows": rows}, indent=2)
    else:
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
        text = buf.getvalue().rstrip("\n")
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _positive(name):
    def parse(value):
        iv = int(value)
        if iv < 1:
            raise argparse.ArgumentTypeError(f"{name} must be a positive integer")
        return iv

    return parse


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fareylab",
        description="Exact Farey index sums, identity verification, and limiting averages.",
    )
    p.add_argument("--config", help="key=value defaults file (flags override)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, order=False, chunks=False, kappa=False):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", help="write to this path instead of stdout")
        if order:
            # required, but validated after parsing so --config can supply it
            sp.add_argument("--order", "-Q", type=_positive("order"), default=None)
        if chunks:
            sp.add_argument("--chunks", type=_positive("chunks"), default=consts.DEFAULT_CHUNKS)
            sp.add_argument("--threads", type=_positive("threads"), default=None)
        if kappa:
            sp.add_argument(
                "--kappa-max", type=_positive("kappa-max"), default=consts.DEFAULT_KAPPA_MAX
            )

    sp = sub.add_parser("verify", help="run the identity verifiers over one period")
    common(sp, order=True)
    sp.add_argument("--k-max", type=_positive("k-max"), default=8)
    sp.add_argument(
        "--identity",
        default="all",
        choices=(
            "all",
            "index-formulas",
            "signed-continuant",
            "unimodular-pair",
            "three-term",
            "division-form",
            "index-sum",
        ),
    )

    sp = sub.add_parser("avg", help="exact average of nu_k over F_Q")
    common(sp, order=True, chunks=True)
    sp.add_argument("--k", type=_positive("k"), default=None)

    sp = sub.add_parser("corr", help="exact lag-h correlation average of nu_2 over F_Q")
    common(sp, order=True, chunks=True)
    sp.add_argument("--h", type=_positive("h"), default=None)

    sp = sub.add_parser("constants", help="geometric enclosure of the limiting average")
    common(sp, kappa=True)
    sp.add_argument("--k", type=_positive("k"), default=None)
    sp.add_argument("--cell-cache", help="cell cache file to reuse/create")
    sp.add_argument(
        "--dual", action="store_true", help="also evaluate the monomial (star) form"
    )

    sp = sub.add_parser("dist", help="value distribution of nu_k: measure vs frequency")
    common(sp, order=True, kappa=True)
    sp.add_argument("--k", type=_positive("k"), default=None)

    sp = sub.add_parser("latcount", help="coprime lattice points in the scaled region")
    common(sp, order=True)
    sp.add_argument(
        "--star",
        type=_positive("star"),
        default=None,
        help="use the tail region for this branch index instead of the whole triangle",
    )
    return p


_REQUIRED = {
    "verify": ("order",),
    "avg": ("order", "k"),
    "corr": ("order", "h"),
    "constants": ("k",),
    "dist": ("order", "k"),
    "latcount": ("order",),
}


def _cmd_verify(args) -> int:
    if args.identity == "all":
        reports = identities.verify_suite(args.order, args.k_max)
    else:
        fns = {
            "index-formulas": lambda: identities.verify_index_formulas(args.order),
            "signed-continuant": lambda: identities.verify_theorem_identity(
                args.order, args.k_max
            ),
            "index-sum": lambda: identities.verify_hall_shiu(args.order),
        }
        if args.identity in fns:
            reports = [fns[args.identity]()]
        else:
            per_k = {
                "unimodular-pair": identities.verify_sl2_lemma,
                "three-term": identities.verify_three_term,
                "division-form": identities.verify_division_form,
            }[args.identity]
            reports = [per_k(args.order, k) for k in range(3, max(args.k_max, 3) + 1)]
    if args.format == "json":
        payload = {"command": "verify", "reports": [r.to_dict() for r in reports]}
        text = json.dumps(payload, indent=2)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    else:
        rows = [
            {
                "identity": r.identity,
                "Q": r.Q,
                "k_min": r.k_min,
                "k_max": r.k_max,
                "checked": r.checked,
                "failure_count": r.failure_count,
                "passed": r.passed,
            }
            for r in reports
        ]
        _emit(rows, args.format, args.output, "verify")
    return 0 if all(r.passed for r in reports) else 1


def _cmd_avg(args) -> int:
    N = count_farey(args.order)
    total = sum_nu_k(args.order, args.k, chunks=args.chunks, threads=args.threads)
    avg = Fraction(total, N)
    if args.k > N:
        print(
            f"note: k={args.k} exceeds N({args.order})={N}; windows wrap more than one period",
            file=sys.stderr,
        )
    rows = [
        {
            "Q": args.order,
            "k": args.k,
            "count": N,
            "sum": total,
            "average": _rat(avg),
            "average_approx": float(avg),
        }
    ]
    _emit(rows, args.format, args.output, "avg")
    return 0


def _cmd_corr(args) -> int:
    N = count_farey(args.order)
    total = correlation_sum(args.order, args.h, chunks=args.chunks, threads=args.threads)
    avg = Fraction(total, N)
    rows = [
        {
            "Q": args.order,
            "h": args.h,
            "count": N,
            "sum": total,
            "average": _rat(avg),
            "average_approx": float(avg),
        }
    ]
    _emit(rows, args.format, args.output, "corr")
    return 0


def _cmd_constants(args) -> int:
    itv = consts.bk_enclosure(args.k, args.kappa_max, cell_cache=args.cell_cache)
    row = {
        "k": itv.k,
        "kappa_max": itv.kappa_max,
        "depth": itv.depth,
        "lo": _rat(itv.lo),
        "hi": _rat(itv.hi),
        "tail_bound": _rat(itv.tail_bound),
        "lo_approx": float(itv.lo),
        "hi_approx": float(itv.hi),
    }
    if args.dual:
        star = consts.bk_star_form(args.k, args.kappa_max)
        row["star_value"] = _rat(star.value)
        row["star_tail"] = _rat(star.tail_bound)
        row["forms_agree"] = abs(itv.lo - star.value) <= itv.tail_bound + star.tail_bound
    _emit([row], args.format, args.output, "constants")
    if args.dual and not row["forms_agree"]:
        return 1
    return 0


def _cmd_dist(args) -> int:
    table = consts.nu_k_distribution(args.k, args.kappa_max, args.order)
    rows = [
        {
            "value": v,
            "measure": _rat(meas),
            "measure_approx": float(meas),
            "frequency": _rat(freq),
            "frequency_approx": float(freq),
        }
        for v, (meas, freq) in table.entries.items()
    ]
    _emit(rows, args.format, args.output, "dist")
    return 0


def _cmd_latcount(args) -> int:
    if args.star is not None:
        region = triangle.tail_region(args.star)
        name = f"tail-{args.star}"
    else:
        region = triangle.farey_triangle()
        name = "farey-triangle"
    n = triangle.visible_count(region, args.order)
    model = 6 * float(triangle.area(region)) * args.order**2 / math.pi**2
    rows = [
        {
            "Q": args.order,
            "region": name,
            "count": n,
            "density_model_approx": model,
        }
    ]
    _emit(rows, args.format, args.output, "latcount")
    return 0


_DISPATCH = {
    "verify": _cmd_verify,
    "avg": _cmd_avg,
    "corr": _cmd_corr,
    "constants": _cmd_constants,
    "dist": _cmd_dist,
    "latcount": _cmd_latcount,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    if "--config" in argv:
        try:
            cfg_path = argv[argv.index("--config") + 1]
        except IndexError:
            parser.error("--config needs a path")
        try:
            cfg = _load_config(cfg_path)
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config: {exc}")
        for action in parser._subparsers._group_actions[0].choices.values():  # type: ignore[union-attr]
            usable = {a.dest for a in action._actions}
            action.set_defaults(**{k: _coerce(v) for k, v in cfg.items() if k in usable})
    args = parser.parse_args(argv)
    for field in _REQUIRED[args.command]:
        if getattr(args, field) is None:
            parser.error(f"{args.command} needs --{field}")
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _coerce(value: str):
    try:
        return int(value)
    except ValueError:
        return value


if __name__ == "__main__":
    sys.exit(main())
