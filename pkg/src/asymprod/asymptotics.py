"""Log-space asymptotic formulas for the factorial, binomial, multinomial,
Catalan and Pascal-row products.

Every formula is a ``LogAsymptotic``

    log f(x) = r x^2 log x + q x^2 + s x log x + l x + t log x + u

so that "the formulas cancel" becomes coefficient arithmetic.  Pure
formula parts P_k, P_{a,b}, P_row carry u = 0; the asymptotic constant
sits in a separate ``AsymptoticConstant``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import mpmath
from mpmath import mpf

from .exact import check_parts
from .fk import fc, fk_closed, log_from_exponents
from .numerics import (
    GUARD,
    BigReal,
    agrees_to,
    bernoulli,
    log_glaisher,
    log_of,
    log_two_pi,
    to_mpf,
    truncated_decimal,
    working_precision,
)

COEFFICIENTS = ("r", "q", "s", "l", "t", "u")

Scalar = Union[int, Fraction, mpf, BigReal]


@dataclass(frozen=True)
class LogAsymptotic:
    r: mpf
    q: mpf
    s: mpf
    l: mpf  # noqa: E741
    t: mpf
    u: mpf
    precision_bits: int

    @classmethod
    def build(cls, precision_bits: int, **coeffs: Scalar) -> "LogAsymptotic":
        with working_precision(precision_bits + GUARD):
            values = {name: to_mpf(coeffs.get(name, 0)) for name in COEFFICIENTS}
        return cls(precision_bits=precision_bits, **values)

    def coefficients(self) -> dict[str, mpf]:
        return {name: getattr(self, name) for name in COEFFICIENTS}

    def _zip(self, other: "LogAsymptotic", sign: int) -> "LogAsymptotic":
        prec = min(self.precision_bits, other.precision_bits)
        with working_precision(prec + GUARD):
            values = {n: getattr(self, n) + sign * getattr(other, n) for n in COEFFICIENTS}
        return LogAsymptotic(precision_bits=prec, **values)

    def __add__(self, other: "LogAsymptotic") -> "LogAsymptotic":
        return self._zip(other, 1)

    def __sub__(self, other: "LogAsymptotic") -> "LogAsymptotic":
        return self._zip(other, -1)

    def scaled(self, factor: Scalar) -> "LogAsymptotic":
        with working_precision(self.precision_bits + GUARD):
            f = to_mpf(factor)
            values = {n: getattr(self, n) * f for n in COEFFICIENTS}
        return LogAsymptotic(precision_bits=self.precision_bits, **values)

    def with_constant(self, log_constant: Scalar) -> "LogAsymptotic":
        with working_precision(self.precision_bits + GUARD):
            values = self.coefficients()
            values["u"] = to_mpf(log_constant)
        return LogAsymptotic(precision_bits=self.precision_bits, **values)

    def evaluate(self, x: Union[int, Fraction]) -> BigReal:
        """log f(x); exact integer/rational x, evaluated at this precision."""
        prec = self.precision_bits
        with working_precision(prec + GUARD + 2 * max(8, int(x).bit_length())):
            xv = to_mpf(Fraction(x))
            lx = mpmath.log(xv)
            value = (
                self.r * xv * xv * lx
                + self.q * xv * xv
                + self.s * xv * lx
                + self.l * xv
                + self.t * lx
                + self.u
            )
        return BigReal(value, prec)

    def agrees_with(self, other: "LogAsymptotic", bits: Optional[int] = None) -> bool:
        """Coefficient-wise equality to ``bits`` (default: the smaller precision)."""
        bits = bits or min(self.precision_bits, other.precision_bits)
        return all(agrees_to(getattr(self, n), getattr(other, n), bits) for n in COEFFICIENTS)

    def to_json(self, digits: Optional[int] = None) -> dict:
        digits = digits or int(self.precision_bits * math.log10(2))
        out = {n: truncated_decimal(getattr(self, n), digits) for n in COEFFICIENTS}
        out["precision_bits"] = self.precision_bits
        out["digits"] = digits
        return out


@dataclass(frozen=True)
class AsymptoticConstant:
    name: str
    value: BigReal
    log_value: BigReal

    @classmethod
    def from_log(cls, name: str, log_value: BigReal) -> "AsymptoticConstant":
        return cls(name, log_value.exp(), log_value)


@dataclass(frozen=True)
class HirschhornCorrection:
    n: int
    num_terms: int
    coefficients: list[Fraction]
    correction_log: BigReal
    terms_used: int = field(default=0)


# --- building blocks --------------------------------------------------------------


def _log(x: int, prec: int) -> mpf:
    return log_of(x, prec).value


@lru_cache(maxsize=None)
def p_k(k: int, precision_bits: int = 128) -> LogAsymptotic:
    """log P_k(x) = (k log k) binom(x+1, 2) + (x/2) log(2 pi k x / e) + (3k+1)/(12k) log x."""
    if k < 1:
        raise ValueError("k must be >= 1")
    prec = precision_bits
    with working_precision(prec + GUARD):
        klogk = k * _log(k, prec)
        return LogAsymptotic.build(
            prec,
            q=klogk / 2,
            s=Fraction(1, 2),
            l=klogk / 2 + (log_two_pi(prec).value + _log(k, prec) - 1) / 2,
            t=Fraction(3 * k + 1, 12 * k),
        )


@lru_cache(maxsize=None)
def asym_superfactorial(k: int, precision_bits: int = 128) -> tuple[AsymptoticConstant, LogAsymptotic]:
    """prod_{v=1}^n (k v)! ~ F_k A^k (2pi)^(1/4) x (k e^(-3/2) n)^(k binom(n+1,2)) (2pi k e^(k/2-1) n)^(n/2) n^((k^2+3k+1)/(12k))."""
    if k < 1:
        raise ValueError("k must be >= 1")
    prec = precision_bits
    with working_precision(prec + GUARD):
        logk = _log(k, prec)
        quad = mpf(k) / 2 * (logk - mpf(3) / 2)
        form = LogAsymptotic.build(
            prec,
            r=Fraction(k, 2),
            q=quad,
            s=Fraction(k + 1, 2),
            l=quad + (log_two_pi(prec).value + logk + mpf(k) / 2 - 1) / 2,
            t=Fraction(k * k + 3 * k + 1, 12 * k),
        )
        log_const = (
            fk_closed(k, prec).log_value.value + k * log_glaisher(prec).value + log_two_pi(prec).value / 4
        )
    return AsymptoticConstant.from_log(f"superfactorial({k})", BigReal(log_const, prec)), form


@lru_cache(maxsize=None)
def asym_hyperfactorial(precision_bits: int = 128) -> tuple[AsymptoticConstant, LogAsymptotic]:
    """prod v^v ~ A x n^(binom(n+1,2) + 1/12) e^(-n^2/4)."""
    form = LogAsymptotic.build(
        precision_bits, r=Fraction(1, 2), q=Fraction(-1, 4), s=Fraction(1, 2), t=Fraction(1, 12)
    )
    return AsymptoticConstant.from_log("hyperfactorial", log_glaisher(precision_bits)), form


@lru_cache(maxsize=None)
def asym_multinomial(
    a: int, parts: tuple[int, ...], precision_bits: int = 128
) -> tuple[AsymptoticConstant, LogAsymptotic]:
    parts = check_parts(a, parts)
    form = p_k(a, precision_bits)
    for b in parts:
        form = form - p_k(b, precision_bits)
    r = len(parts)
    log_const = fc(a, parts, precision_bits).log_value + log_two_pi(precision_bits) * Fraction(1 - r, 4)
    return AsymptoticConstant.from_log(f"C_multinomial({a},{list(parts)})", log_const), form


def p_ab(a: int, b: int, precision_bits: int = 128) -> LogAsymptotic:
    """P_{a,b} written out directly (not as a difference of P_k)."""
    if not a > b >= 1:
        raise ValueError(f"need a > b >= 1, got a={a}, b={b}")
    c = a - b
    prec = precision_bits
    with working_precision(prec + GUARD):
        big_l = a * _log(a, prec) - b * _log(b, prec) - c * _log(c, prec)
        return LogAsymptotic.build(
            prec,
            q=big_l / 2,
            s=Fraction(-1, 2),
            l=big_l / 2 - (log_two_pi(prec).value + _log(b * c, prec) - _log(a, prec) - 1) / 2,
            t=Fraction(1, 12) * (Fraction(1, a) - Fraction(a, b * c)) - Fraction(1, 4),
        )


def binomial_exponent(a: int, b: int) -> Fraction:
    """Exact power of x in P_{a,b}."""
    return Fraction(1, 12) * (Fraction(1, a) - Fraction(a, b * (a - b))) - Fraction(1, 4)


@lru_cache(maxsize=None)
def asym_binomial(a: int, b: int, precision_bits: int = 128) -> tuple[AsymptoticConstant, LogAsymptotic]:
    """prod binom(a n, b n) ~ C_{a,b} x P_{a,b}(m), C_{a,b} = FC_{a,b} (2pi)^(-1/4)."""
    if not a > b >= 1:
        raise ValueError(f"need a > b >= 1, got a={a}, b={b}")
    const, form = asym_multinomial(a, (b, a - b), precision_bits)
    return AsymptoticConstant(f"C_binomial({a},{b})", const.value, const.log_value), form


@lru_cache(maxsize=None)
def asym_row(precision_bits: int = 128) -> tuple[AsymptoticConstant, LogAsymptotic]:
    """prod_{v=0}^n binom(n, v) ~ C_row x e^(x^2/2 + x) / ((2pi)^(x/2) x^(x/2 + 1/3))."""
    prec = precision_bits
    l2pi = log_two_pi(prec)
    form = LogAsymptotic.build(prec, q=Fraction(1, 2), s=Fraction(-1, 2), l=1 - l2pi / 2, t=Fraction(-1, 3))
    log_const = -(fk_closed(1, prec).log_value + l2pi / 4)
    return AsymptoticConstant.from_log("C_row", log_const), form


@lru_cache(maxsize=None)
def asym_catalan(precision_bits: int = 128) -> tuple[AsymptoticConstant, LogAsymptotic]:
    """prod Cat_n ~ C_Cat x 2^(m^2) (4e^3/pi)^(m/2) / m^(3m/2 + 15/8), C_Cat = C_{2,1} (2pi)^(-1/2)."""
    prec = precision_bits
    c21, _ = asym_binomial(2, 1, prec)
    with working_precision(prec + GUARD):
        form = LogAsymptotic.build(
            prec,
            q=_log(2, prec),
            s=Fraction(-3, 2),
            l=(_log(4, prec) + 3 - mpmath.log(mpmath.pi)) / 2,
            t=Fraction(-15, 8),
        )
    log_const = c21.log_value - log_two_pi(prec) / 2
    return AsymptoticConstant.from_log("C_Cat", log_const), form


def asym_central(precision_bits: int = 128) -> tuple[AsymptoticConstant, LogAsymptotic]:
    const, form = asym_binomial(2, 1, precision_bits)
    return AsymptoticConstant("C_21", const.value, const.log_value), form


# Reduced closed forms of selected constants, as exponents of log-ingredients.
_F = Fraction
CONSTANT_FORMS: dict[str, dict[str, Fraction]] = {
    "C_21": {"log2": _F(5, 24), "log_A": _F(3, 2), "log_two_pi": _F(-1, 2), "one": _F(-1, 8)},
    "C_row": {"log_A": _F(2), "log_two_pi": _F(-1, 2), "one": _F(-1, 12)},
    "C_52": {
        "log5": _F(1, 3),
        "log2": _F(-5, 24),
        "log3": _F(-11, 36),
        "log_A": _F(19, 30),
        "log_two_pi": _F(-11, 15),
        "one": _F(-19, 360),
        "log_phi": _F(-1, 10),
        "lgamma(1/5)": _F(3, 5),
        "lgamma(2/5)": _F(1, 5),
        "lgamma(1/3)": _F(-1, 3),
    },
}


def constant_closed_form(name: str, precision_bits: int = 128) -> BigReal:
    """Evaluate a reduced closed form from CONSTANT_FORMS."""
    return log_from_exponents(CONSTANT_FORMS[name], precision_bits).exp()


# --- Hirschhorn's expansion of the row product ----------------------------------------


def hirschhorn_coefficients(num_terms: int) -> list[Fraction]:
    """c_v = (B_{v+1} + B_{v+2}) / (v (v+1)) for v = 1..num_terms."""
    return [(bernoulli(v + 1) + bernoulli(v + 2)) / (v * (v + 1)) for v in range(1, num_terms + 1)]


@lru_cache(maxsize=None)
def hirschhorn_main(precision_bits: int = 128) -> LogAsymptotic:
    """log of H^-1 e^(n(n+2)/2) / (n^((3n+2)/6) (2pi)^((2n+1)/4)) with H = F_1, constant folded into u."""
    prec = precision_bits
    l2pi = log_two_pi(prec)
    log_h = fk_closed(1, prec).log_value
    return LogAsymptotic.build(
        prec,
        q=Fraction(1, 2),
        s=Fraction(-1, 2),
        l=1 - l2pi / 2,
        t=Fraction(-1, 3),
        u=-log_h - l2pi / 4,
    )


def hirschhorn_correction(n: int, num_terms: int = 8, precision_bits: int = 128) -> HirschhornCorrection:
    """-sum_{v<=num_terms} c_v n^-v, stopping early once terms grow."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= num_terms <= 20:
        raise ValueError("num_terms must lie in 0..20")
    coeffs = hirschhorn_coefficients(num_terms)
    total = Fraction(0)
    smallest = None
    used = 0
    for v, c in enumerate(coeffs, start=1):
        term = c / Fraction(n) ** v
        if c and smallest is not None and abs(term) > smallest:
            break
        if c:
            smallest = abs(term)
        total -= term
        used = v
    with working_precision(precision_bits + GUARD):
        value = to_mpf(total)
    return HirschhornCorrection(n, num_terms, coeffs, BigReal(value, precision_bits), used)


def hirschhorn(n: int, num_terms: int = 8, precision_bits: int = 128) -> BigReal:
    """log of Hirschhorn's approximation to prod_{k=0}^n binom(n, k)."""
    main = hirschhorn_main(precision_bits).evaluate(n)
    if num_terms == 0:
        return main
    return main + hirschhorn_correction(n, num_terms, precision_bits).correction_log


def eval_log(
    form: LogAsymptotic,
    constant: Optional[AsymptoticConstant],
    m: Union[int, Fraction],
    precision_bits: Optional[int] = None,
) -> BigReal:
    """log C + log f(m)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if precision_bits is not None and precision_bits != form.precision_bits:
        form = LogAsymptotic.build(precision_bits, **form.coefficients())
    if constant is not None:
        form = form.with_constant(constant.log_value)
    return form.evaluate(m)


def for_spec(spec, precision_bits: int = 128) -> tuple[AsymptoticConstant, LogAsymptotic]:
    """Constant and formula matching an ``exact.ProductSpec`` family."""
    kind = spec.kind
    if kind == "hyperfactorial":
        return asym_hyperfactorial(precision_bits)
    if kind == "superfactorial_k":
        return asym_superfactorial(spec.k, precision_bits)
    if kind == "multinomial_product":
        return asym_multinomial(spec.a, tuple(spec.parts), precision_bits)
    if kind == "binomial_product":
        return asym_binomial(spec.a, spec.b, precision_bits)
    if kind == "central_binomial_product":
        return asym_central(precision_bits)
    if kind == "catalan_product":
        return asym_catalan(precision_bits)
    if kind == "pascal_row_product":
        return asym_row(precision_bits)
    raise ValueError(f"no asymptotic formula for {kind}")


def interval_upper(precision_bits: int = 128) -> BigReal:
    """(2pi)^(-1/4), the supremum of C_{a,b}."""
    return (log_two_pi(precision_bits) / -4).exp()
