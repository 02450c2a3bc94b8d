"""The constants F_k attached to prod_{v=1}^n (k v)!, their ratios FC, and
the divergent Bernoulli-zeta expansion of log F_k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import mpmath
from mpmath import mpf

from .exact import check_parts
from .numerics import (
    GUARD,
    BigReal,
    bernoulli,
    euler_gamma,
    fundamental,
    log_gamma_rational,
    log_glaisher,
    log_of,
    log_two_pi,
    to_mpf,
    working_precision,
    zeta_int,
)


@dataclass(frozen=True)
class FkValue:
    k: int
    log_value: BigReal
    value: BigReal


@dataclass(frozen=True)
class SeriesBracket:
    """Optimally truncated partial sums of the expansion of log F_k.

    ``partial_sums[i]`` includes terms 1..i+1; the true value lies between
    the last two.  ``reliable`` is False for k = 1, where the terms start
    growing after the fourth.
    """

    k: int
    partial_sums: list[BigReal]
    truncation_index: int
    low: BigReal
    high: BigReal
    theta_estimate: Optional[BigReal]
    reliable: bool
    precision_bits: int

    @property
    def width(self) -> BigReal:
        return self.high - self.low

    def contains(self, x: BigReal) -> bool:
        return self.low < x < self.high


@dataclass(frozen=True)
class FcValue:
    a: int
    parts: tuple[int, ...]
    value: BigReal
    log_value: BigReal


@lru_cache(maxsize=None)
def _log_fk(k: int, precision_bits: int) -> BigReal:
    log_a = log_glaisher(precision_bits)
    l2pi = log_two_pi(precision_bits)
    with working_precision(precision_bits + GUARD):
        total = (
            mpf(k) / 4 * l2pi.value
            - mpf(k * k + 1) / k * log_a.value
            + (1 - mpmath.log(k)) / (12 * k)
        )
        for v in range(1, k):
            total -= mpf(v) / k * log_gamma_rational(v, k, precision_bits).value
    return BigReal(total, precision_bits)


def fk_closed(k: int, precision_bits: int = 128) -> FkValue:
    """F_k from log Gamma at the points v/k, log A and log 2pi."""
    if k < 1:
        raise ValueError("k must be >= 1")
    log_value = _log_fk(k, precision_bits)
    return FkValue(k, log_value, log_value.exp())


# Exponents of the closed forms of F_1..F_6, keyed by log-ingredient.
_F = Fraction
TABLE_FORMS: dict[int, dict[str, Fraction]] = {
    1: {"log_two_pi": _F(1, 4), "one": _F(1, 12), "log_A": _F(-2)},
    2: {"log_two_pi": _F(1, 4), "log2": _F(5, 24), "one": _F(1, 24), "log_A": _F(-5, 2)},
    3: {"log_two_pi": _F(1, 12), "log3": _F(11, 36), "one": _F(1, 36), "lgamma(1/3)": _F(1, 3), "log_A": _F(-10, 3)},
    4: {"log2": _F(7, 12), "one": _F(1, 48), "lgamma(1/4)": _F(1, 2), "log_A": _F(-17, 4)},
    5: {
        "log_two_pi": _F(-3, 20),
        "log5": _F(1, 3),
        "log_phi": _F(-1, 10),
        "one": _F(1, 60),
        "lgamma(1/5)": _F(3, 5),
        "lgamma(2/5)": _F(1, 5),
        "log_A": _F(-26, 5),
    },
    6: {
        "log_two_pi": _F(-7, 12),
        "log2": _F(25, 72),
        "log3": _F(47, 72),
        "one": _F(1, 72),
        "lgamma(1/3)": _F(5, 3),
        "log_A": _F(-37, 6),
    },
}


def _ingredient(name: str, precision_bits: int) -> BigReal:
    if name == "one":
        return BigReal(mpf(1), precision_bits)
    if name == "log_A":
        return log_glaisher(precision_bits)
    if name == "log_two_pi":
        return log_two_pi(precision_bits)
    if name == "log_phi":
        return fundamental("golden_ratio", precision_bits).log()
    if name.startswith("lgamma("):
        p, q = name[len("lgamma(") : -1].split("/")
        return log_gamma_rational(int(p), int(q), precision_bits)
    if name.startswith("log"):
        return log_of(int(name[3:]), precision_bits)
    raise KeyError(name)


def log_from_exponents(exponents: dict[str, Fraction], precision_bits: int) -> BigReal:
    """sum of exponent * ingredient over a TABLE_FORMS-style dictionary."""
    total = BigReal(mpf(0), precision_bits)
    for name, power in exponents.items():
        total = total + _ingredient(name, precision_bits) * power
    return total


def fk_table_closed_form(k: int, precision_bits: int = 128) -> BigReal:
    """F_k for 1 <= k <= 6 from its reduced radical/Gamma expression."""
    if k not in TABLE_FORMS:
        raise ValueError(f"closed forms exist for k = 1..6, got {k}")
    return log_from_exponents(TABLE_FORMS[k], precision_bits).exp()


def series_term(k: int, j: int, precision_bits: int) -> BigReal:
    """j-th term: gamma/(12k) for j = 1, else B_2j zeta(2j-1) / (2j (2j-1) k^(2j-1))."""
    if j == 1:
        return euler_gamma(precision_bits) / (12 * k)
    b = bernoulli(2 * j)
    z = zeta_int(2 * j - 1, precision_bits)
    with working_precision(precision_bits + GUARD):
        value = to_mpf(b) * z.value / (2 * j * (2 * j - 1)) / mpf(k) ** (2 * j - 1)
    return BigReal(value, precision_bits)


def _estimated_log2_terms(k: int, limit: int) -> list[float]:
    # |B_2j| ~ 2 (2j)! / (2 pi)^2j, zeta(2j-1) ~ 1
    out = [math.log2(0.5772 / (12 * k))]
    for j in range(2, limit + 1):
        ln = math.log(2) + math.lgamma(2 * j + 1) - 2 * j * math.log(2 * math.pi)
        ln -= math.log(2 * j * (2 * j - 1)) + (2 * j - 1) * math.log(k)
        out.append(ln / math.log(2))
    return out


def _series_precision(k: int, precision_bits: int) -> int:
    estimates = _estimated_log2_terms(k, int(math.pi * k) + 8)
    needed = int(-min(estimates)) + 64
    bits = max(precision_bits, needed)
    # Round up so neighbouring k share cached zeta/log-gamma values.
    return -(-bits // 128) * 128


def fk_series(k: int, precision_bits: int = 128, with_theta: bool = True) -> SeriesBracket:
    """Partial sums of log F_k up to the smallest term.

    The working precision is raised when needed so that the final term is
    resolved; the bracket records the precision actually used.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    prec = _series_precision(k, precision_bits)
    terms: list[BigReal] = []
    best = None
    j = 1
    while True:
        term = series_term(k, j, prec)
        if best is not None and abs(term) >= abs(terms[best]):
            break
        terms.append(term)
        best = j - 1
        j += 1
    partial: list[BigReal] = []
    acc = BigReal(mpf(0), prec)
    for t in terms:
        acc = acc + t
        partial.append(acc)
    if len(partial) == 1:
        raise ArithmeticError("series truncated before a bracket formed")
    low, high = sorted(partial[-2:], key=lambda x: x.value)
    theta = None
    if with_theta:
        true = fk_closed(k, prec).log_value
        theta = (true - low) / (high - low)
    return SeriesBracket(
        k=k,
        partial_sums=partial,
        truncation_index=len(terms),
        low=low,
        high=high,
        theta_estimate=theta,
        reliable=k >= 2,
        precision_bits=prec,
    )


def fc(a: int, parts: Sequence[int], precision_bits: int = 128) -> FcValue:
    """F_a / (F_b1 ... F_br)."""
    parts = check_parts(a, parts)
    log_value = fk_closed(a, precision_bits).log_value
    for b in parts:
        log_value = log_value - fk_closed(b, precision_bits).log_value
    return FcValue(a, parts, log_value.exp(), log_value)


def g_bound(a: int, b: int) -> Fraction:
    """1/a + 1/b - 1/(a+b)."""
    if a < 1 or b < 1:
        raise ValueError("g_bound needs a, b >= 1")
    return Fraction(1, a) + Fraction(1, b) - Fraction(1, a + b)
