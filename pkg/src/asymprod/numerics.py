"""Arbitrary-precision ingredients: Bernoulli numbers, zeta values and
derivatives, Euler's constant, the Glaisher-Kinkelin constant, and
log-gamma at rational points.

Every routine takes a target ``precision_bits`` and computes with
``GUARD`` extra bits.  Special functions are evaluated here with
Euler-Maclaurin / Stirling sums whose remainders are bounded by the first
omitted term; mpmath only supplies the floating-point type and
elementary functions (log, exp, pi, sqrt).
"""
from __future__ import annotations

import math
import re
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterator, Union

import mpmath
from mpmath import mpf

GUARD = 32
MIN_PRECISION = 64
MAX_PRECISION = 1 << 16

_MP_LOCK = threading.RLock()


class PrecisionError(ArithmeticError):
    """The requested accuracy cannot be certified."""


@contextmanager
def working_precision(bits: int) -> Iterator[None]:
    # mpmath keeps its precision in a global context; serialize access to it.
    with _MP_LOCK:
        old = mpmath.mp.prec
        mpmath.mp.prec = bits
        try:
            yield
        finally:
            mpmath.mp.prec = old


def _check_precision(precision_bits: int) -> None:
    if precision_bits < MIN_PRECISION:
        raise ValueError(f"precision_bits must be >= {MIN_PRECISION}, got {precision_bits}")
    if precision_bits > MAX_PRECISION:
        raise PrecisionError(f"precision_bits={precision_bits} exceeds supported maximum {MAX_PRECISION}")


def to_mpf(x: Union[int, Fraction, mpf, "BigReal"]) -> mpf:
    """Convert at the current working precision."""
    if isinstance(x, BigReal):
        return +x.value
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


Number = Union[int, Fraction, mpf, "BigReal"]


@total_ordering
@dataclass(frozen=True)
class BigReal:
    """A real number together with the precision it is accurate to.

    ``value`` may carry a few guard bits beyond ``precision_bits``.
    Binary operations between two BigReals yield the smaller precision.
    """

    value: mpf
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION:
            raise ValueError(f"precision_bits must be >= {MIN_PRECISION}")

    def _combine(self, other: Number, op) -> "BigReal":
        prec = self.precision_bits
        if isinstance(other, BigReal):
            prec = min(prec, other.precision_bits)
        with working_precision(prec + GUARD):
            return BigReal(op(+self.value, to_mpf(other)), prec)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._combine(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._combine(other, lambda a, b: b * a)

    def __truediv__(self, other):
        return self._combine(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._combine(other, lambda a, b: b / a)

    def __pow__(self, other):
        return self._combine(other, lambda a, b: a**b)

    def __neg__(self):
        with working_precision(self.precision_bits + GUARD):
            return BigReal(-self.value, self.precision_bits)

    def __abs__(self):
        with working_precision(self.precision_bits + GUARD):
            return BigReal(abs(self.value), self.precision_bits)

    def __eq__(self, other):
        if isinstance(other, BigReal):
            return self.value == other.value
        with working_precision(self.precision_bits + 2 * GUARD):
            return self.value == to_mpf(other)

    def __lt__(self, other):
        if isinstance(other, BigReal):
            return self.value < other.value
        with working_precision(self.precision_bits + 2 * GUARD):
            return self.value < to_mpf(other)

    def __hash__(self):
        return hash((self.value, self.precision_bits))

    def __float__(self):
        return float(self.value)

    def exp(self) -> "BigReal":
        with working_precision(self.precision_bits + GUARD):
            return BigReal(mpmath.exp(self.value), self.precision_bits)

    def log(self) -> "BigReal":
        with working_precision(self.precision_bits + GUARD):
            return BigReal(mpmath.log(self.value), self.precision_bits)

    def to_decimal(self, digits: int) -> str:
        return truncated_decimal(self.value, digits)

    def __str__(self):
        return self.to_decimal(max(1, int(self.precision_bits * math.log10(2)) - 2))

    def __repr__(self):
        return f"BigReal({self.to_decimal(20)}..., precision_bits={self.precision_bits})"


def truncated_decimal(x: mpf, digits: int) -> str:
    """Fixed-point rendering with exactly ``digits`` fractional digits, truncated toward zero."""
    if digits < 0:
        raise ValueError("digits must be non-negative")
    if not isinstance(x, mpf):
        x = mpf(x)
    if not mpmath.isfinite(x):
        raise ValueError("cannot render a non-finite value")
    mag = max(0, int(mpmath.mag(x))) if x else 0
    mantissa_bits = x._mpf_[3]
    with working_precision(max(mantissa_bits, 64) + mag + int(digits * 3.33) + 16):
        scaled = int(mpmath.floor(abs(x) * mpf(10) ** digits))
    whole, frac = divmod(scaled, 10**digits)
    sign = "-" if x < 0 and scaled else ""
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def agrees_to(x: Number, y: Number, bits: int) -> bool:
    """|x - y| <= 2^-bits * max(1, |x|)."""
    with working_precision(bits + GUARD):
        a, b = to_mpf(x), to_mpf(y)
        return abs(a - b) <= mpmath.ldexp(1, -bits) * max(1, abs(a))


# --- Bernoulli numbers ------------------------------------------------------

_bernoulli_lock = threading.Lock()
_tangent: list[int] = [0, 1]  # tangent numbers T_0, T_1, ...


def _tangent_numbers(n: int) -> list[int]:
    # Brent-Harvey in-place recurrence; O(n^2) integer operations.
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


def bernoulli(n: int) -> Fraction:
    """Exact B_n with z/(e^z - 1) = sum B_n z^n/n!, so B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    k = n // 2
    global _tangent
    tangent = _tangent
    if k >= len(tangent):
        with _bernoulli_lock:
            if k >= len(_tangent):
                _tangent = _tangent_numbers(max(k, 2 * (len(_tangent) - 1)))
            tangent = _tangent
    four_k = 1 << (2 * k)
    sign = 1 if k % 2 else -1
    return Fraction(sign * 2 * k * tangent[k], four_k * (four_k - 1))


# --- Euler-Maclaurin sums ---------------------------------------------------


def _log_power_derivatives(s: mpf, with_log: bool, count: int):
    """Yield (P_m, Q_m) with d^m/dx^m [x^-s (log x)^d] = x^(-s-m) (P_m log x + Q_m)."""
    p, q = mpf(1), mpf(0)
    for m in range(count):
        yield p, q
        p, q = (-s - m) * p, (-s - m) * q + p


def _euler_maclaurin_zeta(s, with_log: bool, prec: int) -> mpf:
    """sum_{n>=1} n^-s (log n)^d, analytically continued in s (s != 1).

    Tail beyond N uses the Euler-Maclaurin expansion; the loop stops once a
    correction term falls below 2^-(prec+8) relative, which bounds the
    remainder for these functions (their high derivatives keep one sign on
    [N, inf)).
    """
    eps = mpmath.ldexp(1, -(prec + 8))
    n_split = int(0.16 * prec) + 12
    for _attempt in range(6):
        with working_precision(prec + 16):
            s = mpf(s)
            big_n = mpf(n_split)
            log_n = mpmath.log(big_n)
            head = mpf(0)
            for n in range(1, n_split):
                term = mpf(n) ** (-s)
                head += term * mpmath.log(n) if with_log else term
            x_pow = big_n ** (-s)
            if with_log:
                integral = big_n ** (1 - s) * (log_n / (s - 1) + 1 / (s - 1) ** 2)
                f_n = x_pow * log_n
            else:
                integral = big_n ** (1 - s) / (s - 1)
                f_n = x_pow
            total = head + integral + f_n / 2
            scale = max(abs(total), mpf(1))
            max_order = 2 * int(0.6 * n_split * math.pi) + 4
            derivs = list(_log_power_derivatives(s, with_log, max_order + 2))
            converged = False
            prev = None
            zero_run = 0
            for j in range(1, max_order // 2 + 1):
                m = 2 * j - 1
                p, q = derivs[m]
                deriv = x_pow * big_n ** (-m) * ((p * log_n + q) if with_log else p)
                b = bernoulli(2 * j)
                term = -mpf(b.numerator) / b.denominator / mpmath.factorial(2 * j) * deriv
                total += term
                mag = abs(term)
                if mag == 0:
                    zero_run += 1
                    if zero_run >= 2:
                        converged = True
                        break
                    continue
                zero_run = 0
                if mag < eps * scale:
                    converged = True
                    break
                if prev is not None and mag > prev and j > 3:
                    break
                prev = mag
            if converged:
                return total
        n_split *= 2
    raise PrecisionError(f"Euler-Maclaurin sum at s={s} did not reach {prec} bits")


@lru_cache(maxsize=None)
def _zeta_cached(s: int, prec: int) -> mpf:
    return _euler_maclaurin_zeta(s, False, prec)


def zeta_int(s: int, precision_bits: int) -> BigReal:
    """Riemann zeta at an integer s >= 2."""
    if s < 2 or int(s) != s:
        raise ValueError("zeta_int needs an integer s >= 2")
    _check_precision(precision_bits)
    return BigReal(_zeta_cached(int(s), precision_bits + GUARD), precision_bits)


@lru_cache(maxsize=None)
def _zeta_prime_cached(s: int, prec: int) -> mpf:
    value = _euler_maclaurin_zeta(s, True, prec)
    with working_precision(prec + 16):
        return -value


def zeta_prime(s: int, precision_bits: int) -> BigReal:
    """zeta'(s) at an integer s != 1 (negative s through analytic continuation)."""
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    _check_precision(precision_bits)
    return BigReal(_zeta_prime_cached(int(s), precision_bits + GUARD), precision_bits)


@lru_cache(maxsize=None)
def _euler_gamma(prec: int) -> mpf:
    # gamma = H_{N-1} - log N + 1/(2N) + sum_j B_2j / (2j N^2j)
    n_split = int(0.16 * prec) + 12
    with working_precision(prec + 16):
        eps = mpmath.ldexp(1, -(prec + 8))
        harmonic = sum(Fraction(1, n) for n in range(1, n_split))
        total = to_mpf(harmonic) - mpmath.log(n_split) + mpf(1) / (2 * n_split)
        inv_sq = mpf(1) / n_split**2
        power = inv_sq
        for j in range(1, 4 * n_split):
            b = bernoulli(2 * j)
            term = to_mpf(b) / (2 * j) * power
            total += term
            if abs(term) < eps:
                return total
            power *= inv_sq
    raise PrecisionError("Euler's constant did not converge")


# --- log-gamma ----------------------------------------------------------------


def _product_tree(values: list[int]) -> int:
    if not values:
        return 1
    while len(values) > 1:
        paired = [values[i] * values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            paired.append(values[-1])
        values = paired
    return values[0]


@lru_cache(maxsize=None)
def _log_gamma_rational(p: int, q: int, prec: int) -> mpf:
    # Shift x = p/q up to z = x + N, then apply the Stirling series at z.
    # The series is enveloping for real z > 0: the error is below the first
    # omitted term.
    n_shift = int(0.16 * prec) + 12
    with working_precision(prec + 16):
        eps = mpmath.ldexp(1, -(prec + 8))
        # prod_{i<N} (x + i) = prod (p + i q) / q^N, exactly
        numer = _product_tree([p + i * q for i in range(n_shift)])
        log_shift = mpmath.log(numer) - n_shift * mpmath.log(q)
        z = mpf(p + n_shift * q) / q
        total = (z - mpf(1) / 2) * mpmath.log(z) - z + mpmath.log(2 * mpmath.pi) / 2
        inv_z = 1 / z
        inv_z_sq = inv_z * inv_z
        power = inv_z
        for j in range(1, 4 * n_shift):
            b = bernoulli(2 * j)
            term = to_mpf(b) / (2 * j * (2 * j - 1)) * power
            total += term
            if abs(term) < eps:
                return total - log_shift
            power *= inv_z_sq
    raise PrecisionError(f"Stirling series for log Gamma({p}/{q}) did not converge")


def log_gamma_rational(p: int, q: int, precision_bits: int) -> BigReal:
    """log Gamma(p/q) for 0 < p < q."""
    if p <= 0 or p >= q:
        raise ValueError(f"log_gamma_rational needs 0 < p < q, got p={p}, q={q}")
    _check_precision(precision_bits)
    g = math.gcd(p, q)
    return BigReal(_log_gamma_rational(p // g, q // g, precision_bits + GUARD), precision_bits)


# --- named constants ------------------------------------------------------------


def glaisher_routes(precision_bits: int) -> tuple[BigReal, BigReal]:
    """log A through zeta'(-1) and through gamma, log 2pi and zeta'(2)."""
    _check_precision(precision_bits)
    prec = precision_bits + GUARD
    zp_neg1 = _zeta_prime_cached(-1, prec)
    zp_2 = _zeta_prime_cached(2, prec)
    gamma = _euler_gamma(prec)
    with working_precision(prec):
        route1 = mpf(1) / 12 - zp_neg1
        route2 = (gamma + mpmath.log(2 * mpmath.pi)) / 12 - zp_2 / (2 * mpmath.pi**2)
    return BigReal(route1, precision_bits), BigReal(route2, precision_bits)


@lru_cache(maxsize=None)
def _log_glaisher(prec: int) -> mpf:
    route1, route2 = glaisher_routes(prec)
    if not agrees_to(route1, route2, prec):
        raise PrecisionError(f"Glaisher routes disagree at {prec} bits")
    return route1.value


def log_glaisher(precision_bits: int) -> BigReal:
    _check_precision(precision_bits)
    return BigReal(_log_glaisher(precision_bits), precision_bits)


def log_two_pi(precision_bits: int) -> BigReal:
    _check_precision(precision_bits)
    with working_precision(precision_bits + GUARD):
        return BigReal(mpmath.log(2 * mpmath.pi), precision_bits)


def euler_gamma(precision_bits: int) -> BigReal:
    _check_precision(precision_bits)
    return BigReal(_euler_gamma(precision_bits + GUARD), precision_bits)


def pi(precision_bits: int) -> BigReal:
    _check_precision(precision_bits)
    with working_precision(precision_bits + GUARD):
        return BigReal(+mpmath.pi, precision_bits)


def log_of(x: Union[int, Fraction], precision_bits: int) -> BigReal:
    """Natural log of an exact positive integer or rational."""
    _check_precision(precision_bits)
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of a non-positive number")
    with working_precision(precision_bits + GUARD):
        return BigReal(mpmath.log(x.numerator) - mpmath.log(x.denominator), precision_bits)


FUNDAMENTAL_NAMES = (
    "glaisher",
    "euler_gamma",
    "log_two_pi",
    "golden_ratio",
    "zeta_prime_2",
    "zeta_prime_neg1",
    "zeta(<s>)",
)

_ZETA_NAME = re.compile(r"^zeta\(?(\d+)\)?$")


def fundamental(name: str, precision_bits: int) -> BigReal:
    """Named constant by string key, e.g. ``glaisher`` or ``zeta(3)``."""
    _check_precision(precision_bits)
    if name == "glaisher":
        return log_glaisher(precision_bits).exp()
    if name == "euler_gamma":
        return euler_gamma(precision_bits)
    if name == "log_two_pi":
        return log_two_pi(precision_bits)
    if name == "golden_ratio":
        with working_precision(precision_bits + GUARD):
            return BigReal((mpmath.sqrt(5) + 1) / 2, precision_bits)
    if name == "zeta_prime_2":
        return zeta_prime(2, precision_bits)
    if name == "zeta_prime_neg1":
        return zeta_prime(-1, precision_bits)
    match = _ZETA_NAME.match(name)
    if match:
        return zeta_int(int(match.group(1)), precision_bits)
    raise KeyError(f"unknown constant {name!r}; expected one of {', '.join(FUNDAMENTAL_NAMES)}")
