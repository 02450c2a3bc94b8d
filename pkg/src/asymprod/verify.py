"""Numerical evidence for the asymptotic formulas, inequalities and limits.

Each ``check_*`` returns a ``Verdict``; ``compare_grid`` returns a
``ComparisonReport`` holding the full row table so a failure can be read
without rerunning.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import asymptotics, exact, fk
from .exact import ProductSpec
from .numerics import BigReal, agrees_to, fundamental, truncated_decimal, zeta_int

DEFAULT_GRID = (10, 20, 40, 80, 160, 320)


@dataclass
class Verdict:
    name: str
    passed: bool
    reason: str = ""
    details: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "reason": self.reason, "details": self.details}


@dataclass(frozen=True)
class Row:
    m: int
    log_exact: BigReal
    log_asym: BigReal
    delta: BigReal


@dataclass
class ComparisonReport:
    spec: ProductSpec
    rows: list[Row]
    decay: list[float]
    passed: bool
    reason: str
    precision_bits: int

    def to_json(self, digits: int = 25) -> dict:
        def fmt(x: BigReal) -> str:
            return truncated_decimal(x.value, digits)

        return {
            "spec": self.spec.describe(),
            "rows": [
                {"m": r.m, "log_exact": fmt(r.log_exact), "log_asym": fmt(r.log_asym), "delta": fmt(r.delta)}
                for r in self.rows
            ],
            "decay": [repr(d) for d in self.decay],
            "verdict": "pass" if self.passed else "fail",
            "reason": self.reason,
            "precision": self.precision_bits,
        }

    def to_csv(self, digits: int = 25) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "log_exact", "log_asym", "delta"])
        for r in self.rows:
            writer.writerow([r.m] + [truncated_decimal(x.value, digits) for x in (r.log_exact, r.log_asym, r.delta)])
        return buf.getvalue()

    def dumps(self, digits: int = 25) -> str:
        return json.dumps(self.to_json(digits), indent=2)


def compare_grid(spec: ProductSpec, grid: Sequence[int] = DEFAULT_GRID, precision_bits: int = 128) -> ComparisonReport:
    """log(exact product) minus log(C x P) along an ascending grid.

    Passes when |delta| strictly decreases and the last |delta| is at most
    the first divided by (grid[-1]/grid[0])/4.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("empty grid")
    if any(m < 1 for m in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly ascending positive integers")
    constant, form = asymptotics.for_spec(spec, precision_bits)
    exact_values = exact.evaluate_grid(spec, grid, precision_bits)
    rows = []
    for m, ev in zip(grid, exact_values):
        log_asym = asymptotics.eval_log(form, constant, m)
        rows.append(Row(m, ev.log_value, log_asym, ev.log_value - log_asym))
    mags = [abs(r.delta) for r in rows]
    decay = [float(b / a) if a.value else float("inf") for a, b in zip(mags, mags[1:])]
    reasons = []
    if any(not b < a for a, b in zip(mags, mags[1:])):
        reasons.append("|delta| not strictly decreasing")
    shrink = Fraction(grid[-1], grid[0]) / 4
    if len(grid) > 1 and not mags[-1] <= mags[0] / shrink:
        reasons.append(f"|delta| shrank by less than {float(shrink):g}x over the grid")
    passed = not reasons
    reason = "; ".join(reasons) if reasons else f"|delta| decreasing, shrink factor {float(mags[0] / mags[-1]):.4g}"
    return ComparisonReport(spec.with_limit(grid[-1]), rows, decay, passed, reason, precision_bits)


def check_series_brackets(k_max: int, precision_bits: int = 128) -> list[Verdict]:
    """For 2 <= k <= k_max the optimal-truncation bracket must contain log F_k."""
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    out = []
    for k in range(2, k_max + 1):
        bracket = fk.fk_series(k, precision_bits)
        true = fk.fk_closed(k, bracket.precision_bits).log_value
        theta = bracket.theta_estimate
        ok = bracket.contains(true) and 0 < theta < 1
        out.append(
            Verdict(
                f"series_bracket(k={k})",
                ok,
                f"theta={float(theta):.6f}, width={float(bracket.width):.3e}, J={bracket.truncation_index}",
            )
        )
    return out


def check_residual_bound(k_max: int, precision_bits: int = 128) -> Verdict:
    """log F_k - gamma/(12k) lies in (-zeta(3)/(360 k^3), 0) for 2 <= k <= k_max."""
    gamma = fundamental("euler_gamma", precision_bits)
    z3 = zeta_int(3, precision_bits)
    failures = []
    for k in range(2, k_max + 1):
        resid = fk.fk_closed(k, precision_bits).log_value - gamma / (12 * k)
        if not (-z3 / (360 * k**3) < resid < 0):
            failures.append(k)
    return Verdict("residual_bound", not failures, f"failing k: {failures}" if failures else f"k = 2..{k_max}")


def _partitions(n: int, max_part: Optional[int] = None):
    max_part = n if max_part is None else max_part
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def check_monotonic_and_intervals(a_max: int, precision_bits: int = 128) -> Verdict:
    """Monotone F_k > 1, FC interval claims, and both limiting directions."""
    if a_max < 3:
        raise ValueError("a_max must be >= 3")
    details = []

    def record(name: str, ok: bool, note: str = ""):
        details.append({"check": name, "passed": ok, "note": note})

    fks = [fk.fk_closed(k, precision_bits).value for k in range(1, a_max + 2)]
    record("F_k > 1", all(v > 1 for v in fks))
    record("F_k strictly decreasing", all(b < a for a, b in zip(fks, fks[1:])))

    fc21 = fk.fc(2, [1, 1], precision_bits).value
    two_part = {(a, b): fk.fc(a, [b, a - b], precision_bits).value for a in range(2, a_max + 1) for b in range(1, a)}
    bad = [key for key, v in two_part.items() if not (fc21 <= v < 1)]
    record("FC_{a,b} in [FC_{2,1}, 1)", not bad, f"violations: {bad}" if bad else "")
    smallest = min(two_part, key=lambda key: two_part[key].value)
    record("FC_{2,1} is the minimum", smallest in ((2, 1),), f"argmin {smallest}")

    bad = []
    for a in range(2, min(a_max, 8) + 1):
        for parts in _partitions(a):
            if len(parts) >= 2:
                v = fk.fc(a, parts, precision_bits).value
                if not 0 < v < 1:
                    bad.append(parts)
    record("FC_{a,parts} in (0,1)", not bad, f"violations: {bad}" if bad else "")

    sup = [fk.fc(2 * b, [b, b], precision_bits).value for b in (1, 2, 4, 8, 16)]
    record("FC(2b,[b,b]) increasing below 1", all(x < y < 1 for x, y in zip(sup, sup[1:])))
    inf = [fk.fc(r, [1] * r, precision_bits).value for r in range(2, 9)]
    record("FC(r,[1]*r) decreasing", all(y < x for x, y in zip(inf, inf[1:])))

    failed = [d["check"] for d in details if not d["passed"]]
    return Verdict("monotonic_and_intervals", not failed, f"failed: {failed}" if failed else f"a_max={a_max}", details)


def check_g_bound(limit: int = 100) -> Verdict:
    bound = Fraction(7, 6)
    bad = [
        (a, b) for a in range(1, limit + 1) for b in range(1, limit + 1) if a + b >= 3 and not 0 < fk.g_bound(a, b) <= bound
    ]
    return Verdict("g_bound", not bad, f"violations: {bad[:10]}" if bad else f"1 <= a, b <= {limit}")


def pascal_target(n: int) -> int:
    """prod_{v=1}^n binom(n, v), the a -> infinity limit of the scaled row product."""
    return exact.pascal_row_product(n).integer_value


def check_bin2_limit(n: int, a_grid: Sequence[int], rate_tolerance: float = 2.0) -> Verdict:
    """|scaled_row_product(a, n) - target| must fall like 1/a along the grid."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a_grid = list(a_grid)
    if any(b <= a for a, b in zip(a_grid, a_grid[1:])):
        raise ValueError("a_grid must be strictly ascending")
    target = pascal_target(n)
    errors = [abs(exact.scaled_row_product(a, n) - target) for a in a_grid]
    details = [{"a": a, "error": f"{e.numerator}/{e.denominator}"} for a, e in zip(a_grid, errors)]
    if all(e == 0 for e in errors):
        return Verdict(f"bin2_limit(n={n})", True, "exact equality for every a", details)
    reasons = []
    if any(not b < a for a, b in zip(errors, errors[1:])):
        reasons.append("error not strictly decreasing")
    for (a1, e1), (a2, e2) in zip(zip(a_grid, errors), zip(a_grid[1:], errors[1:])):
        expected = a2 / a1
        ratio = float(e1 / e2) if e2 else float("inf")
        if not expected / rate_tolerance <= ratio <= expected * rate_tolerance:
            reasons.append(f"error ratio {ratio:.4g} from a={a1} to a={a2}, expected ~{expected:g}")
    return Verdict(f"bin2_limit(n={n})", not reasons, "; ".join(reasons) or "O(1/a) convergence", details)


def check_c_a1_limit(a_grid: Sequence[int] = (3, 10, 100, 1000), precision_bits: int = 128) -> Verdict:
    """C_{a,1} approaches C_row with shrinking gap (monotone increase is reported, not required)."""
    c_row = asymptotics.asym_row(precision_bits)[0].value
    values = [asymptotics.asym_binomial(a, 1, precision_bits)[0].value for a in a_grid]
    gaps = [abs(v - c_row) for v in values]
    shrinking = all(b < a for a, b in zip(gaps, gaps[1:]))
    increasing = all(b > a for a, b in zip(values, values[1:]))
    details = [{"a": a, "C_a1": v.to_decimal(25), "gap": repr(float(g))} for a, v, g in zip(a_grid, values, gaps)]
    note = "increasing" if increasing else "not monotone (soft check)"
    return Verdict("C_a1_limit", shrinking, f"gap shrinking={shrinking}; values {note}", details)


def check_hirschhorn(n_grid: Sequence[int] = (10, 20, 30, 40, 50), num_terms: int = 6, precision_bits: int = 128) -> Verdict:
    """H = F_1 by closed form and digits; corrected expansion beats the bare main term."""
    details = []
    f1 = fk.fk_closed(1, precision_bits).value
    f1_table = fk.fk_table_closed_form(1, precision_bits)
    ok_identity = agrees_to(f1, f1_table, precision_bits - 8)
    details.append({"check": "F_1 = (2pi)^(1/4) e^(1/12) / A^2", "passed": ok_identity})
    digits_ok = f1.to_decimal(33) == GOLDEN["H"].digits
    details.append({"check": "H digits", "passed": digits_ok, "value": f1.to_decimal(33)})
    main_ok = asymptotics.hirschhorn_main(precision_bits).agrees_with(
        asymptotics.asym_row(precision_bits)[1].with_constant(asymptotics.asym_row(precision_bits)[0].log_value)
    )
    details.append({"check": "main term = C_row P_row", "passed": main_ok})
    closer = []
    for n in n_grid:
        log_exact = exact.pascal_row_product(n, precision_bits).log_value
        bare = abs(log_exact - asymptotics.hirschhorn(n, 0, precision_bits))
        corrected = abs(log_exact - asymptotics.hirschhorn(n, num_terms, precision_bits))
        closer.append(corrected < bare)
        details.append(
            {"n": n, "error_uncorrected": repr(float(bare)), "error_corrected": repr(float(corrected)), "passed": closer[-1]}
        )
    passed = ok_identity and digits_ok and main_ok and all(closer)
    return Verdict("hirschhorn", passed, "" if passed else "see details", details)


# --- printed digits -------------------------------------------------------------------


@dataclass(frozen=True)
class Golden:
    digits: str
    compute: Callable[[int], BigReal]

    @property
    def fractional_digits(self) -> int:
        return len(self.digits.split(".")[1])


def _fk_value(k: int) -> Callable[[int], BigReal]:
    return lambda prec: fk.fk_closed(k, prec).value


GOLDEN: dict[str, Golden] = {
    "A": Golden("1.2824271291006226368753425", lambda p: fundamental("glaisher", p)),
    "gamma": Golden("0.5772156649015328606065120", lambda p: fundamental("euler_gamma", p)),
    "F_1": Golden("1.0463350667705031809809506", _fk_value(1)),
    "F_2": Golden("1.0239374116371184015779507", _fk_value(2)),
    "F_3": Golden("1.0160405370646209912870365", _fk_value(3)),
    "F_4": Golden("1.0120458980239446462423302", _fk_value(4)),
    "F_5": Golden("1.0096399728364770508687282", _fk_value(5)),
    "F_6": Golden("1.0080336272420732654455927", _fk_value(6)),
    "FC_21": Golden("0.9352589011148368571152882", lambda p: fk.fc(2, [1, 1], p).value),
    "C_21": Golden("0.5907270839982808449347463", lambda p: asymptotics.asym_central(p)[0].value),
    "C_Cat": Golden("0.2356660099851628316196795", lambda p: asymptotics.asym_catalan(p)[0].value),
    "C_52": Golden("0.6129670404054601065382712", lambda p: asymptotics.asym_binomial(5, 2, p)[0].value),
    "C_row": Golden("0.6036486760360103196707021", lambda p: asymptotics.asym_row(p)[0].value),
    "H": Golden("1.046335066770503180980950656977760", _fk_value(1)),
}


def check_golden(precision_bits: int = 192) -> list[Verdict]:
    out = []
    for name, golden in GOLDEN.items():
        got = golden.compute(precision_bits).to_decimal(golden.fractional_digits)
        out.append(Verdict(f"golden({name})", got == golden.digits, f"computed {got}, printed {golden.digits}"))
    return out


ACCEPTANCE_FAMILIES: dict[str, ProductSpec] = {
    "central": ProductSpec("central_binomial_product", 1),
    "binomial_5_2": ProductSpec("binomial_product", 1, a=5, b=2),
    "multinomial_3_111": ProductSpec("multinomial_product", 1, a=3, parts=(1, 1, 1)),
    "row": ProductSpec("pascal_row_product", 1),
    "catalan": ProductSpec("catalan_product", 1),
    "hyperfactorial": ProductSpec("hyperfactorial", 1),
    "superfactorial_1": ProductSpec("superfactorial_k", 1, k=1),
    "superfactorial_2": ProductSpec("superfactorial_k", 1, k=2),
}
