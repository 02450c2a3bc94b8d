import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymprod import exact
from asymprod.exact import ProductSpec, PartsSumError


def brute(terms):
    out = 1
    for t in terms:
        out *= t
    return out


def brute_multinomial(a, parts, m):
    total = 1
    for n in range(1, m + 1):
        coeff = math.factorial(a * n)
        for b in parts:
            coeff //= math.factorial(b * n)
        total *= coeff
    return total


# OEIS A007685 and A003046
CENTRAL = [2, 12, 240, 16800]
CATALAN = [1, 2, 10, 140, 5880]


class TestExamples:
    @pytest.mark.parametrize("n, expected", [(1, 1), (3, 108), (4, 27648)])
    def test_hyperfactorial(self, n, expected):
        assert exact.hyperfactorial(n).value == expected

    @pytest.mark.parametrize("k, n, expected", [(1, 4, 288), (2, 3, 34560), (3, 1, 6)])
    def test_superfactorial(self, k, n, expected):
        assert exact.superfactorial_k(k, n).value == expected

    @pytest.mark.parametrize("a, parts, m, expected", [(3, [1, 1, 1], 2, 540), (2, [1, 1], 4, 16800), (5, [2, 3], 2, 2100)])
    def test_multinomial(self, a, parts, m, expected):
        assert exact.multinomial_product(a, parts, m).value == expected

    @pytest.mark.parametrize("m, expected", [(1, 1), (3, 10), (4, 140)])
    def test_catalan(self, m, expected):
        assert exact.catalan_product(m).value == expected

    @pytest.mark.parametrize("n, expected", [(0, 1), (4, 96), (5, 2500)])
    def test_pascal_row(self, n, expected):
        assert exact.pascal_row_product(n).value == expected

    @pytest.mark.parametrize("a, n, expected", [(2, 2, Fraction(3, 2)), (100, 2, Fraction(199, 100)), (7, 1, Fraction(1))])
    def test_scaled_row(self, a, n, expected):
        assert exact.scaled_row_product(a, n) == expected

    def test_scaled_row_large_a_approaches_target(self):
        assert abs(exact.scaled_row_product(10**9, 2) - 2) == Fraction(1, 10**9)

    def test_oeis_prefixes(self):
        assert [exact.central_binomial_product(m).value for m in range(1, 5)] == CENTRAL
        assert [exact.catalan_product(m).value for m in range(1, 6)] == CATALAN


class TestIdentities:
    def test_falling_factorial_identity(self):
        for n in range(1, 61):
            lhs = brute(exact.falling_factorial(n, v) for v in range(1, n + 1))
            assert lhs == exact.hyperfactorial(n).value

    def test_row_identity(self):
        for n in range(1, 61):
            h = exact.hyperfactorial(n).value
            s = exact.superfactorial_k(1, n).value
            assert h % s == 0
            assert exact.pascal_row_product(n).value == h // s

    def test_multinomial_consistency(self):
        for a in range(2, 7):
            for parts in _compositions(a):
                for m in (1, 2, 7, 20):
                    lhs = exact.multinomial_product(a, parts, m).value
                    for b in parts:
                        lhs *= exact.superfactorial_k(b, m).value
                    assert lhs == exact.superfactorial_k(a, m).value

    @pytest.mark.parametrize("a, b", [(2, 1), (5, 2), (7, 3), (4, 1)])
    def test_binomial_specialization(self, a, b):
        for m in (1, 5, 17):
            direct = brute(math.comb(a * n, b * n) for n in range(1, m + 1))
            assert exact.multinomial_product(a, [b, a - b], m).value == direct
            assert exact.binomial_product(a, b, m).value == direct

    def test_multinomial_routes_agree(self):
        for a, parts in [(3, [1, 1, 1]), (6, [1, 2, 3]), (5, [2, 3])]:
            for m in (1, 4, 12):
                tree = exact.multinomial_product(a, parts, m).value
                assert tree == exact.multinomial_product(a, parts, m, strategy="ratio").value
                assert tree == brute_multinomial(a, parts, m)

    def test_catalan_against_brute_force(self):
        for m in range(1, 51):
            direct = brute(math.comb(2 * n, n) // (n + 1) for n in range(1, m + 1))
            assert exact.catalan_product(m).value == direct


def _compositions(a):
    parts_list = []
    for mask in range(1 << (a - 1)):
        parts, run = [], 1
        for i in range(a - 1):
            if mask >> i & 1:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        if len(parts) >= 2:
            parts_list.append(parts)
    return parts_list


class TestStrategies:
    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(1, 10**30), max_size=40))
    def test_tree_equals_naive(self, values):
        assert exact.product_tree(values) == exact.naive_product(values)

    @pytest.mark.parametrize(
        "spec",
        [
            ProductSpec("hyperfactorial", 30),
            ProductSpec("superfactorial_k", 25, k=3),
            ProductSpec("multinomial_product", 20, a=4, parts=(1, 1, 2)),
            ProductSpec("binomial_product", 30, a=5, b=2),
            ProductSpec("central_binomial_product", 60),
            ProductSpec("catalan_product", 60),
            ProductSpec("pascal_row_product", 60),
        ],
    )
    def test_strategy_equivalence(self, spec):
        assert exact.evaluate(spec, strategy="tree").value == exact.evaluate(spec, strategy="naive").value

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            exact.hyperfactorial(3, strategy="fft")


class TestGrid:
    @pytest.mark.parametrize(
        "spec",
        [
            ProductSpec("hyperfactorial", 1),
            ProductSpec("superfactorial_k", 1, k=2),
            ProductSpec("multinomial_product", 1, a=3, parts=(1, 1, 1)),
            ProductSpec("binomial_product", 1, a=5, b=2),
            ProductSpec("central_binomial_product", 1),
            ProductSpec("catalan_product", 1),
            ProductSpec("pascal_row_product", 1),
            ProductSpec("scaled_row_product", 1, a=10),
        ],
    )
    def test_incremental_grid_matches_direct(self, spec):
        grid = [1, 2, 5, 9, 20]
        values = exact.evaluate_grid(spec, grid)
        assert [v.value for v in values] == [exact.evaluate(spec.with_limit(m)).value for m in grid]

    def test_row_grid_with_zero(self):
        assert [v.value for v in exact.evaluate_grid(ProductSpec("pascal_row_product", 0), [0, 4, 5])] == [1, 96, 2500]

    def test_grid_must_ascend(self):
        with pytest.raises(ValueError):
            exact.evaluate_grid(ProductSpec("hyperfactorial", 1), [5, 3])
        with pytest.raises(ValueError):
            exact.evaluate_grid(ProductSpec("hyperfactorial", 1), [])

    @pytest.mark.parametrize("kind, extra", [("hyperfactorial", {}), ("superfactorial_k", {"k": 2}), ("catalan_product", {}), ("central_binomial_product", {})])
    def test_monotone_growth(self, kind, extra):
        values = [v.value for v in exact.evaluate_grid(ProductSpec(kind, 1, **extra), list(range(1, 30)))]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_row_monotone_from_one(self):
        values = [exact.pascal_row_product(n).value for n in range(1, 40)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestValues:
    def test_log_value_tracks_bit_length(self):
        v = exact.central_binomial_product(200)
        bits = v.integer_value.bit_length()
        assert (bits - 1) * math.log(2) <= float(v.log_value) < bits * math.log(2)

    def test_serialization(self):
        assert exact.catalan_product(4).serialize() == "140"
        assert exact.evaluate(ProductSpec("scaled_row_product", 2, a=2)).serialize() == "3/2"

    def test_integer_value_of_rational(self):
        with pytest.raises(TypeError):
            exact.evaluate(ProductSpec("scaled_row_product", 2, a=2)).integer_value


class TestValidation:
    @pytest.mark.parametrize("parts", [[1, 1], [3], [0, 3], [4, -1]])
    def test_parts_errors(self, parts):
        with pytest.raises(PartsSumError):
            exact.multinomial_product(3, parts, 2)

    def test_binomial_order(self):
        with pytest.raises(ValueError):
            exact.binomial_product(2, 2, 3)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            ProductSpec("double_factorial", 3)

    def test_scaled_row_domain(self):
        with pytest.raises(ValueError):
            exact.scaled_row_product(0, 3)
