"""Acceptance criteria, one PASS/FAIL line each (see the summary section of the pytest output)."""

import math
import time
from fractions import Fraction

import mpmath

from asymprod import asymptotics, exact, fk, verify
from asymprod.numerics import glaisher_routes, working_precision


def digits_of_agreement(x, y):
    with working_precision(400):
        diff = abs(x.value - y.value)
        return math.inf if diff == 0 else float(-mpmath.log10(diff / max(1, abs(x.value))))


def brute(terms):
    out = 1
    for t in terms:
        out *= t
    return out


def test_1_golden_digits(criterion):
    verdicts = verify.check_golden()
    bad = [v.reason for v in verdicts if not v.passed]
    criterion("1 golden digits", not bad, f"{len(verdicts) - len(bad)}/{len(verdicts)} constants match" + (f"; {bad}" if bad else ""))


def test_2_dual_route_agreement(criterion):
    worst = math.inf
    for k in range(1, 7):
        worst = min(worst, digits_of_agreement(fk.fk_closed(k, 256).value, fk.fk_table_closed_form(k, 256)))
    glaisher = digits_of_agreement(*glaisher_routes(256))
    criterion(
        "2 dual-route agreement",
        worst >= 30 and glaisher >= 30,
        f"F_1..F_6 agree to {worst:.1f} digits, Glaisher routes to {glaisher:.1f}",
    )


def test_3_exact_oracles(criterion):
    failures = []
    central = [exact.central_binomial_product(m).value for m in range(1, 51)]
    catalan = [exact.catalan_product(m).value for m in range(1, 51)]
    if central[:4] != [2, 12, 240, 16800] or catalan[:5] != [1, 2, 10, 140, 5880]:
        failures.append("sequence prefix")
    for m in range(1, 51):
        if central[m - 1] != brute(math.comb(2 * n, n) for n in range(1, m + 1)):
            failures.append(f"central m={m}")
        if catalan[m - 1] != brute(math.comb(2 * n, n) // (n + 1) for n in range(1, m + 1)):
            failures.append(f"catalan m={m}")
    for n in range(1, 61):
        h, s = exact.hyperfactorial(n).value, exact.superfactorial_k(1, n).value
        if h % s or exact.pascal_row_product(n).value != h // s:
            failures.append(f"row n={n}")
    checked = 0
    for a in range(2, 7):
        for parts in verify._partitions(a):
            if len(parts) < 2:
                continue
            for m in range(1, 21):
                lhs = exact.multinomial_product(a, parts, m).value
                for b in parts:
                    lhs *= exact.superfactorial_k(b, m).value
                checked += 1
                if lhs != exact.superfactorial_k(a, m).value:
                    failures.append(f"multinomial a={a} parts={parts} m={m}")
    criterion("3 exact-sequence oracles", not failures, f"{checked} multinomial cases" + (f"; {failures[:5]}" if failures else ""))


def test_4_convergence(criterion):
    start = time.perf_counter()
    results = {name: verify.compare_grid(spec, verify.DEFAULT_GRID, 128) for name, spec in verify.ACCEPTANCE_FAMILIES.items()}
    elapsed = time.perf_counter() - start
    failed = [f"{name}: {r.reason}" for name, r in results.items() if not r.passed]
    worst = max(abs(r.rows[-1].delta) / abs(r.rows[0].delta) for r in results.values())
    criterion(
        "4 convergence on {10..320}",
        not failed and elapsed < 60,
        f"{len(results)} families, worst |delta(320)|/|delta(10)| = {float(worst):.3g}, {elapsed:.1f}s" + (f"; {failed}" if failed else ""),
    )


def test_5_bracketing(criterion):
    verdicts = verify.check_series_brackets(50, 128)
    residual = verify.check_residual_bound(50, 128)
    bad = [v.name for v in verdicts if not v.passed]
    criterion(
        "5 series brackets k=2..50",
        not bad and residual.passed,
        f"{len(verdicts) - len(bad)}/{len(verdicts)} brackets hold; residual bound: {residual.reason}",
    )


def test_6_inequality_scans(criterion):
    fks = [fk.fk_closed(k, 256).value for k in range(1, 51)]
    fk_ok = all(v > 1 for v in fks) and all(b < a for a, b in zip(fks, fks[1:]))
    fc21 = fk.fc(2, [1, 1], 192).value
    two_part = all(
        fc21 <= fk.fc(a, [b, a - b], 192).value < 1 for a in range(2, 21) for b in range(1, a)
    )
    multi = all(
        0 < fk.fc(a, list(parts), 192).value < 1
        for a in range(2, 9)
        for parts in verify._partitions(a)
        if len(parts) >= 2
    )
    g_ok = all(
        0 < fk.g_bound(a, b) <= Fraction(7, 6)
        for a in range(1, 101)
        for b in range(1, 101)
        if a + b >= 3
    )
    criterion(
        "6 inequality scans",
        fk_ok and two_part and multi and g_ok,
        f"F_k: {fk_ok}, FC two-part: {two_part}, FC partitions: {multi}, g bound: {g_ok}",
    )


def test_7_scaled_row_limit(criterion):
    target2 = verify.pascal_target(2)
    exact_errors = [exact.scaled_row_product(a, 2) - target2 for a in (10, 100, 1000)]
    errors_ok = [abs(e) for e in exact_errors] == [Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)]
    target5 = verify.pascal_target(5)
    e_lo = abs(exact.scaled_row_product(100, 5) - target5)
    e_hi = abs(exact.scaled_row_product(10_000, 5) - target5)
    ratio = float(e_lo / e_hi)
    c_a1 = verify.check_c_a1_limit((10, 100, 1000))
    criterion(
        "7 scaled row limit",
        errors_ok and 50 <= ratio <= 200 and c_a1.passed,
        f"n=2 errors {[str(abs(e)) for e in exact_errors]}, n=5 ratio {ratio:.2f}, C_a1 gaps "
        + ", ".join(d["gap"] for d in c_a1.details),
    )


def test_8_hirschhorn(criterion):
    const, form = asymptotics.asym_row(192)
    main_equal = asymptotics.hirschhorn_main(192).agrees_with(form.with_constant(const.log_value), 184)
    closer = []
    for n in (10, 20, 30, 40, 50):
        log_exact = exact.pascal_row_product(n, 192).log_value
        bare = abs(log_exact - asymptotics.hirschhorn(n, 0, 192))
        corrected = abs(log_exact - asymptotics.hirschhorn(n, 6, 192))
        closer.append((n, corrected < bare, float(corrected), float(bare)))
    ok = main_equal and all(c[1] for c in closer)
    worst = max(c[2] for c in closer)
    criterion("8 Hirschhorn equivalence", ok, f"main term equal: {main_equal}, worst corrected error {worst:.2e}")


def test_9_performance(criterion):
    start = time.perf_counter()
    big = exact.central_binomial_product(5000, strategy="tree")
    elapsed = time.perf_counter() - start
    tree = exact.central_binomial_product(2000, strategy="tree").value
    naive = exact.central_binomial_product(2000, strategy="naive").value
    criterion(
        "9 performance",
        elapsed < 10 and tree == naive and isinstance(big.value, int),
        f"m=5000 in {elapsed:.2f}s ({big.value.bit_length()} bits), tree == naive at m=2000: {tree == naive}",
    )
