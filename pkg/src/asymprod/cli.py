"""Command-line front end.

    asymprod <command> [args] [--digits N] [--prec-bits N] [--format plain|json|csv]

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

from . import asymptotics, exact, fk, verify
from .exact import ProductSpec
from .numerics import FUNDAMENTAL_NAMES, BigReal, PrecisionError, fundamental

PRODUCT_KINDS = {
    "hyperfactorial": "hyperfactorial",
    "superfactorial": "superfactorial_k",
    "multinomial": "multinomial_product",
    "binomial": "binomial_product",
    "central": "central_binomial_product",
    "catalan": "catalan_product",
    "row": "pascal_row_product",
    "scaled_row": "scaled_row_product",
}

ASYMPT_KINDS = ("p_k", "hyperfactorial", "superfactorial", "multinomial", "binomial", "central", "catalan", "row", "hirschhorn")

CHECKS = ("grid", "brackets", "residual", "intervals", "gbound", "bin2", "c_a1", "hirschhorn", "golden")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=25, help="fractional digits to print (truncated)")
    common.add_argument("--prec-bits", type=int, default=None, help="working precision in bits")
    common.add_argument("--format", choices=("plain", "json", "csv"), default="plain")

    parser = argparse.ArgumentParser(prog="asymprod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constant", parents=[common], help="print a named constant")
    p.add_argument("name", help=f"one of {', '.join(FUNDAMENTAL_NAMES)} or {', '.join(verify.GOLDEN)}")

    p = sub.add_parser("fk", parents=[common], help="print F_k")
    p.add_argument("k", type=int)
    p.add_argument("--series", action="store_true", help="show the divergent-series bracket")

    p = sub.add_parser("product", parents=[common], help="exact product value")
    p.add_argument("kind", choices=sorted(PRODUCT_KINDS))
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--parts", type=_int_list)

    p = sub.add_parser("asympt", parents=[common], help="asymptotic constant and log-form coefficients")
    p.add_argument("kind", choices=ASYMPT_KINDS)
    p.add_argument("--k", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--parts", type=_int_list)
    p.add_argument("--n", type=int, help="hirschhorn: evaluate at n")
    p.add_argument("--terms", type=int, default=8, help="hirschhorn: correction terms")

    p = sub.add_parser("verify", parents=[common], help="run a verification check")
    p.add_argument("check", choices=CHECKS)
    p.add_argument("--kind", choices=sorted(k for k in PRODUCT_KINDS if k != "scaled_row"), default="central")
    p.add_argument("--grid", type=_int_list, default=list(verify.DEFAULT_GRID))
    p.add_argument("--k", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--parts", type=_int_list)
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--a-max", type=int, default=20)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--a-grid", type=_int_list, default=[10, 100, 1000])
    p.add_argument("--n-grid", type=_int_list, default=[10, 20, 30, 40, 50])
    p.add_argument("--terms", type=int, default=6)

    sub.add_parser("table1", parents=[common], help="F_1..F_6 by both routes against printed digits")
    return parser


def _precision(args) -> int:
    if args.digits < 1:
        raise UsageError("--digits must be >= 1")
    derived = math.ceil(args.digits * 3.33) + 64
    if args.prec_bits is None:
        return derived
    if args.prec_bits < args.digits * 3.33 or args.prec_bits < 64:
        raise UsageError(f"--prec-bits {args.prec_bits} is too small for --digits {args.digits}")
    return args.prec_bits


def _emit(out, args, plain: str, payload: dict, rows: Optional[list[dict]] = None) -> None:
    if args.format == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    elif args.format == "csv":
        rows = rows or [payload]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
        out.write(buf.getvalue())
    else:
        out.write(plain + "\n")


def _cmd_constant(args, prec, out) -> int:
    name = args.name
    if name in verify.GOLDEN:
        value = verify.GOLDEN[name].compute(prec)
    else:
        try:
            value = fundamental(name, prec)
        except KeyError as exc:
            raise UsageError(str(exc.args[0]))
    text = value.to_decimal(args.digits)
    _emit(out, args, text, {"name": name, "value": text, "digits": args.digits, "precision_bits": prec})
    return 0


def _cmd_fk(args, prec, out) -> int:
    if args.k < 1:
        raise UsageError("k must be >= 1")
    value = fk.fk_closed(args.k, prec)
    payload = {
        "k": args.k,
        "value": value.value.to_decimal(args.digits),
        "log_value": value.log_value.to_decimal(args.digits),
        "precision_bits": prec,
    }
    plain = payload["value"]
    if args.series:
        bracket = fk.fk_series(args.k, prec)
        payload["series"] = {
            "truncation_index": bracket.truncation_index,
            "low": bracket.low.to_decimal(args.digits),
            "high": bracket.high.to_decimal(args.digits),
            "theta": bracket.theta_estimate.to_decimal(args.digits),
            "reliable": bracket.reliable,
            "precision_bits": bracket.precision_bits,
        }
        s = payload["series"]
        plain += f"\nlog F_{args.k} in [{s['low']}, {s['high']}] (J={s['truncation_index']}, theta={s['theta']})"
        if not bracket.reliable:
            plain += "\nwarning: bracket for k=1 is loose"
    _emit(out, args, plain, payload)
    return 0


def _product_spec(args, kind: str, limit: Optional[int]) -> ProductSpec:
    if limit is None:
        raise UsageError(f"product {kind} needs --m (or --n)")
    full = PRODUCT_KINDS[kind]
    if full == "superfactorial_k":
        if args.k is None:
            raise UsageError("superfactorial needs --k")
        return ProductSpec(full, limit, k=args.k)
    if full == "multinomial_product":
        if args.a is None or args.parts is None:
            raise UsageError("multinomial needs --a and --parts")
        return ProductSpec(full, limit, a=args.a, parts=tuple(args.parts))
    if full == "binomial_product":
        if args.a is None or args.b is None:
            raise UsageError("binomial needs --a and --b")
        return ProductSpec(full, limit, a=args.a, b=args.b)
    if full == "scaled_row_product":
        if args.a is None:
            raise UsageError("scaled_row needs --a")
        return ProductSpec(full, limit, a=args.a)
    return ProductSpec(full, limit)


def _cmd_product(args, prec, out) -> int:
    limit = args.m
    if args.kind in ("row", "scaled_row") and args.n is not None:
        limit = args.n
    spec = _product_spec(args, args.kind, limit)
    value = exact.evaluate(spec, prec)
    text = value.serialize()
    _emit(
        out,
        args,
        text,
        {"spec": spec.describe(), "value": text, "log_value": value.log_value.to_decimal(args.digits)},
    )
    return 0


def _cmd_asympt(args, prec, out) -> int:
    kind = args.kind
    constant = None
    if kind == "p_k":
        if args.k is None:
            raise UsageError("p_k needs --k")
        form = asymptotics.p_k(args.k, prec)
    elif kind == "hirschhorn":
        form = asymptotics.hirschhorn_main(prec)
    elif kind == "hyperfactorial":
        constant, form = asymptotics.asym_hyperfactorial(prec)
    elif kind == "superfactorial":
        if args.k is None:
            raise UsageError("superfactorial needs --k")
        constant, form = asymptotics.asym_superfactorial(args.k, prec)
    elif kind == "multinomial":
        if args.a is None or args.parts is None:
            raise UsageError("multinomial needs --a and --parts")
        constant, form = asymptotics.asym_multinomial(args.a, tuple(args.parts), prec)
    elif kind == "binomial":
        if args.a is None or args.b is None:
            raise UsageError("binomial needs --a and --b")
        constant, form = asymptotics.asym_binomial(args.a, args.b, prec)
    elif kind == "central":
        constant, form = asymptotics.asym_central(prec)
    elif kind == "catalan":
        constant, form = asymptotics.asym_catalan(prec)
    else:
        constant, form = asymptotics.asym_row(prec)
    payload = {"kind": kind, "form": form.to_json(args.digits)}
    if constant is not None:
        payload["constant"] = {"name": constant.name, "value": constant.value.to_decimal(args.digits)}
    if kind == "hirschhorn" and args.n is not None:
        payload["n"] = args.n
        payload["log_value"] = asymptotics.hirschhorn(args.n, args.terms, prec).to_decimal(args.digits)
    lines = [f"{name} = {value}" for name, value in payload["form"].items() if name in asymptotics.COEFFICIENTS]
    if constant is not None:
        lines.insert(0, f"{constant.name} = {payload['constant']['value']}")
    if "log_value" in payload:
        lines.append(f"log value at n={args.n}: {payload['log_value']}")
    row = dict(payload["form"], kind=kind)
    if constant is not None:
        row["constant"] = payload["constant"]["value"]
    _emit(out, args, "\n".join(lines), payload, [row])
    return 0


def _verdicts_output(out, args, verdicts: list[verify.Verdict]) -> int:
    plain = "\n".join(f"{'PASS' if v.passed else 'FAIL'} {v.name}: {v.reason}" for v in verdicts)
    rows = [{"name": v.name, "passed": v.passed, "reason": v.reason} for v in verdicts]
    payload = {"verdicts": [v.to_json() for v in verdicts], "passed": all(v.passed for v in verdicts)}
    _emit(out, args, plain, payload, rows)
    return 0 if payload["passed"] else 1


def _cmd_verify(args, prec, out) -> int:
    check = args.check
    if check == "grid":
        limit = 1
        spec = _product_spec(args, args.kind, limit)
        report = verify.compare_grid(spec, args.grid, prec)
        if args.format == "json":
            out.write(report.dumps(args.digits) + "\n")
        elif args.format == "csv":
            out.write(report.to_csv(args.digits))
        else:
            for row in report.rows:
                out.write(f"{row.m}\t{row.delta.to_decimal(args.digits)}\n")
            out.write(f"{'PASS' if report.passed else 'FAIL'}: {report.reason}\n")
        return 0 if report.passed else 1
    if check == "brackets":
        verdicts = verify.check_series_brackets(args.k_max, prec)
    elif check == "residual":
        verdicts = [verify.check_residual_bound(args.k_max, prec)]
    elif check == "intervals":
        verdicts = [verify.check_monotonic_and_intervals(args.a_max, prec)]
    elif check == "gbound":
        verdicts = [verify.check_g_bound()]
    elif check == "bin2":
        verdicts = [verify.check_bin2_limit(args.n, args.a_grid)]
    elif check == "c_a1":
        verdicts = [verify.check_c_a1_limit(args.a_grid, prec)]
    elif check == "hirschhorn":
        verdicts = [verify.check_hirschhorn(args.n_grid, args.terms, prec)]
    else:
        verdicts = verify.check_golden(max(prec, 192))
    return _verdicts_output(out, args, verdicts)


def _cmd_table1(args, prec, out) -> int:
    rows = []
    worst = None
    mismatch = False
    for k in range(1, 7):
        closed = fk.fk_closed(k, prec).value
        table = fk.fk_table_closed_form(k, prec)
        gap = abs(closed - table)
        worst = gap if worst is None or gap > worst else worst
        printed = verify.GOLDEN[f"F_{k}"].digits
        shown = min(args.digits, 25)
        ok = closed.to_decimal(shown) == printed[: len(printed) - 25 + shown]
        mismatch |= not ok
        rows.append(
            {
                "k": k,
                "closed": closed.to_decimal(args.digits),
                "table_form": table.to_decimal(args.digits),
                "matches_printed": ok,
            }
        )
    plain = "\n".join(f"F_{r['k']} = {r['closed']}" + ("" if r["matches_printed"] else "  MISMATCH") for r in rows)
    plain += f"\nmax |closed - table form| = {float(worst):.3e}"
    payload = {"rows": rows, "max_discrepancy": f"{float(worst):.3e}", "precision_bits": prec}
    _emit(out, args, plain, payload, rows)
    return 1 if mismatch else 0


COMMANDS = {
    "constant": _cmd_constant,
    "fk": _cmd_fk,
    "product": _cmd_product,
    "asympt": _cmd_asympt,
    "verify": _cmd_verify,
    "table1": _cmd_table1,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        prec = _precision(args)
        return COMMANDS[args.command](args, prec, out)
    except UsageError as exc:
        err.write(f"asymprod: error: {exc}\n")
        return 2
    except (ValueError, PrecisionError) as exc:
        err.write(f"asymprod: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
