"""Exact big-integer products of factorials and binomial/multinomial
coefficients.

Products are formed with a balanced product tree over gmpy2 integers;
``naive_product`` (left-to-right accumulation) is kept as the reference
path.  Values come back as plain Python ``int``/``Fraction``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

import gmpy2
from gmpy2 import mpz

from .numerics import BigReal, log_of

KINDS = (
    "hyperfactorial",
    "superfactorial_k",
    "multinomial_product",
    "binomial_product",
    "central_binomial_product",
    "catalan_product",
    "pascal_row_product",
    "scaled_row_product",
)


class PartsSumError(ValueError):
    pass


def check_parts(a: int, parts: Sequence[int]) -> tuple[int, ...]:
    parts = tuple(int(b) for b in parts)
    if len(parts) < 2:
        raise PartsSumError(f"need at least two parts, got {list(parts)}")
    if any(b < 1 for b in parts):
        raise PartsSumError(f"parts must be positive, got {list(parts)}")
    if sum(parts) != a:
        raise PartsSumError(f"parts {list(parts)} sum to {sum(parts)}, not a={a}")
    return parts


# --- products ------------------------------------------------------------------


def product_tree(values: Sequence) -> mpz:
    """Balanced divide-and-conquer product; operands of similar size meet."""
    n = len(values)
    if n == 0:
        return mpz(1)
    if n == 1:
        return mpz(values[0])
    if n == 2:
        return mpz(values[0]) * values[1]
    mid = n // 2
    return product_tree(values[:mid]) * product_tree(values[mid:])


def naive_product(values: Iterable) -> mpz:
    acc = mpz(1)
    for v in values:
        acc *= v
    return acc


def _multiply(values: Sequence, strategy: str) -> mpz:
    if strategy == "tree":
        return product_tree(values)
    if strategy == "naive":
        return naive_product(values)
    raise ValueError(f"unknown strategy {strategy!r}")


_fac_lock = threading.Lock()
_fac_cache: dict[int, mpz] = {}


def factorial(n: int) -> mpz:
    f = _fac_cache.get(n)
    if f is None:
        f = gmpy2.fac(n)
        with _fac_lock:
            if len(_fac_cache) > 50_000:
                _fac_cache.clear()
            _fac_cache[n] = f
    return f


def falling_factorial(n: int, k: int) -> int:
    """(n)_k = n (n-1) ... (n-k+1)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return int(product_tree([n - i for i in range(k)]))


def multinomial(parts: Sequence[int]) -> mpz:
    """(b_1 + ... + b_r)! / (b_1! ... b_r!) as a running product of binomials."""
    total = 0
    result = mpz(1)
    for b in parts:
        total += b
        result *= gmpy2.comb(total, b)
    return result


def catalan(n: int) -> mpz:
    return gmpy2.comb(2 * n, n) // (n + 1)


# Terms t(n) whose running product over n = 1..m forms each prefix family.
def _term_function(spec: "ProductSpec") -> Callable[[int], mpz]:
    kind = spec.kind
    if kind == "hyperfactorial":
        return lambda n: mpz(n) ** n
    if kind == "superfactorial_k":
        k = spec.k
        return lambda n: factorial(k * n)
    if kind == "multinomial_product":
        parts = spec.parts
        return lambda n: multinomial([b * n for b in parts])
    if kind == "binomial_product":
        a, b = spec.a, spec.b
        return lambda n: gmpy2.comb(a * n, b * n)
    if kind == "central_binomial_product":
        return lambda n: gmpy2.comb(2 * n, n)
    if kind == "catalan_product":
        return catalan
    raise ValueError(f"{kind} is not a running product of terms")


@dataclass(frozen=True)
class ProductSpec:
    """Which product and up to which limit (m, or n for row products)."""

    kind: str
    limit: int
    k: Optional[int] = None
    a: Optional[int] = None
    b: Optional[int] = None
    parts: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown product kind {self.kind!r}")
        lower = 0 if self.kind == "pascal_row_product" else 1
        if self.limit < lower:
            raise ValueError(f"{self.kind} needs limit >= {lower}, got {self.limit}")
        if self.kind == "superfactorial_k" and (self.k is None or self.k < 1):
            raise ValueError("superfactorial_k needs k >= 1")
        if self.kind == "multinomial_product":
            if self.a is None or self.parts is None:
                raise ValueError("multinomial_product needs a and parts")
            object.__setattr__(self, "parts", check_parts(self.a, self.parts))
        if self.kind == "binomial_product":
            if self.a is None or self.b is None or not self.a > self.b >= 1:
                raise ValueError(f"binomial_product needs a > b >= 1, got a={self.a}, b={self.b}")
        if self.kind == "scaled_row_product" and (self.a is None or self.a < 1):
            raise ValueError("scaled_row_product needs a >= 1")

    def with_limit(self, limit: int) -> "ProductSpec":
        return ProductSpec(self.kind, limit, self.k, self.a, self.b, self.parts)

    def describe(self) -> dict:
        out = {"kind": self.kind, "limit": self.limit}
        for key in ("k", "a", "b"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.parts is not None:
            out["parts"] = list(self.parts)
        return out


@dataclass(frozen=True)
class ExactValue:
    value: Union[int, Fraction]
    log_value: BigReal

    @property
    def integer_value(self) -> int:
        if isinstance(self.value, Fraction):
            if self.value.denominator != 1:
                raise TypeError("value is not an integer")
            return self.value.numerator
        return self.value

    def serialize(self) -> str:
        if isinstance(self.value, Fraction):
            return f"{self.value.numerator}/{self.value.denominator}"
        return str(self.value)


def _exact(value, precision_bits: int) -> ExactValue:
    if isinstance(value, mpz):
        value = int(value)
    return ExactValue(value, log_of(value, precision_bits))


def _running_product(spec: ProductSpec, strategy: str) -> mpz:
    term = _term_function(spec)
    return _multiply([term(n) for n in range(1, spec.limit + 1)], strategy)


def hyperfactorial(n: int, precision_bits: int = 128, strategy: str = "tree") -> ExactValue:
    """prod_{v=1}^n v^v."""
    return _exact(_running_product(ProductSpec("hyperfactorial", n), strategy), precision_bits)


def superfactorial_k(k: int, n: int, precision_bits: int = 128, strategy: str = "tree") -> ExactValue:
    """prod_{v=1}^n (k v)!."""
    spec = ProductSpec("superfactorial_k", n, k=k)
    return _exact(_running_product(spec, strategy), precision_bits)


def multinomial_product(
    a: int, parts: Sequence[int], m: int, precision_bits: int = 128, strategy: str = "tree"
) -> ExactValue:
    """prod_{n=1}^m (a n)! / ((b_1 n)! ... (b_r n)!).

    ``strategy="ratio"`` divides superfactorials instead of multiplying
    coefficients.
    """
    spec = ProductSpec("multinomial_product", m, a=a, parts=tuple(parts))
    if strategy == "ratio":
        numer = _running_product(ProductSpec("superfactorial_k", m, k=a), "tree")
        denom = product_tree(
            [_running_product(ProductSpec("superfactorial_k", m, k=b), "tree") for b in spec.parts]
        )
        value, rem = gmpy2.f_divmod(numer, denom)
        if rem:
            raise ArithmeticError("superfactorial ratio is not an integer")
        return _exact(value, precision_bits)
    return _exact(_running_product(spec, strategy), precision_bits)


def binomial_product(a: int, b: int, m: int, precision_bits: int = 128, strategy: str = "tree") -> ExactValue:
    """prod_{n=1}^m binom(a n, b n)."""
    spec = ProductSpec("binomial_product", m, a=a, b=b)
    return _exact(_running_product(spec, strategy), precision_bits)


def central_binomial_product(m: int, precision_bits: int = 128, strategy: str = "tree") -> ExactValue:
    spec = ProductSpec("central_binomial_product", m)
    return _exact(_running_product(spec, strategy), precision_bits)


def catalan_product(m: int, precision_bits: int = 128, strategy: str = "tree") -> ExactValue:
    """prod_{n=1}^m Cat_n, as the central product divided by (m+1)!."""
    central = _running_product(ProductSpec("central_binomial_product", m), strategy)
    value, rem = gmpy2.f_divmod(central, factorial(m + 1))
    if rem:
        raise ArithmeticError("central binomial product not divisible by (m+1)!")
    return _exact(value, precision_bits)


def pascal_row_product(n: int, precision_bits: int = 128, strategy: str = "tree") -> ExactValue:
    """prod_{v=0}^n binom(n, v)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _exact(_multiply([gmpy2.comb(n, v) for v in range(n + 1)], strategy), precision_bits)


def scaled_row_product(a: int, n: int) -> Fraction:
    """a^(-n(n+1)/2) prod_{v=1}^n binom(a v, v), exactly."""
    if a < 1 or n < 1:
        raise ValueError("scaled_row_product needs a >= 1 and n >= 1")
    numer = product_tree([gmpy2.comb(a * v, v) for v in range(1, n + 1)])
    return Fraction(int(numer), a ** (n * (n + 1) // 2))


def evaluate(spec: ProductSpec, precision_bits: int = 128, strategy: str = "tree") -> ExactValue:
    kind, limit = spec.kind, spec.limit
    if kind == "hyperfactorial":
        return hyperfactorial(limit, precision_bits, strategy)
    if kind == "superfactorial_k":
        return superfactorial_k(spec.k, limit, precision_bits, strategy)
    if kind == "multinomial_product":
        return multinomial_product(spec.a, spec.parts, limit, precision_bits, strategy)
    if kind == "binomial_product":
        return binomial_product(spec.a, spec.b, limit, precision_bits, strategy)
    if kind == "central_binomial_product":
        return central_binomial_product(limit, precision_bits, strategy)
    if kind == "catalan_product":
        return catalan_product(limit, precision_bits, strategy)
    if kind == "pascal_row_product":
        return pascal_row_product(limit, precision_bits, strategy)
    value = scaled_row_product(spec.a, limit)
    return ExactValue(value, log_of(value, precision_bits))


def _prefix_products(term: Callable[[int], mpz], grid: Sequence[int]) -> list[mpz]:
    # Each new grid point only multiplies the block of terms since the last one.
    out = []
    acc = mpz(1)
    done = 0
    for m in grid:
        acc *= product_tree([term(n) for n in range(done + 1, m + 1)])
        done = m
        out.append(acc)
    return out


def evaluate_grid(spec: ProductSpec, grid: Sequence[int], precision_bits: int = 128) -> list[ExactValue]:
    """``evaluate`` at every limit in an ascending grid, extending incrementally."""
    grid = list(grid)
    if not grid:
        raise ValueError("empty grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly ascending")
    kind = spec.kind
    if kind == "scaled_row_product":
        return [evaluate(spec.with_limit(m), precision_bits) for m in grid]
    if kind == "pascal_row_product":
        if grid[0] == 0:
            return [evaluate(spec.with_limit(0), precision_bits)] + evaluate_grid(spec, grid[1:], precision_bits)
        hyper = _prefix_products(lambda n: mpz(n) ** n, grid)
        superf = _prefix_products(factorial, grid)
        values = []
        for h, s in zip(hyper, superf):
            q, r = gmpy2.f_divmod(h, s)
            if r:
                raise ArithmeticError("hyperfactorial not divisible by superfactorial")
            values.append(q)
    elif kind == "catalan_product":
        central = _prefix_products(lambda n: gmpy2.comb(2 * n, n), grid)
        values = []
        for m, c in zip(grid, central):
            q, r = gmpy2.f_divmod(c, factorial(m + 1))
            if r:
                raise ArithmeticError("central binomial product not divisible by (m+1)!")
            values.append(q)
    else:
        values = _prefix_products(_term_function(spec), grid)
    return [_exact(v, precision_bits) for v in values]
