import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densepi.exact_numbers import (
    BASE,
    DEFAULT_REGISTRY,
    AtomRegistry,
    HamelNumber,
    RefinementBudgetError,
    RegistryMismatchError,
    approx,
    compare_to_rational,
    floor_real,
    format_rat,
    frac,
    hnum_add,
    hnum_from_rational,
    hnum_scale,
    lambda_b,
    parse_rat,
    rat,
    root_enclosure,
    sqrt_enclosure,
)

from conftest import hamel_numbers, hn, rationals


def contains_sqrt(iv, n, shift=Fraction(0)):
    # independent oracle: [lo, hi] contains shift + sqrt(n) iff the squares bracket n
    lo, hi = iv.lo - shift, iv.hi - shift
    return lo >= 0 and lo * lo <= n <= hi * hi


class TestRationals:
    def test_floor_and_frac(self):
        assert math.floor(Fraction(7, 3)) == 2
        assert frac(Fraction(7, 3)) == Fraction(1, 3)

    def test_sum_to_one(self):
        assert Fraction(1, 3) + Fraction(2, 3) == 1

    def test_frac_negative(self):
        assert math.floor(Fraction(-1, 4)) == -1
        assert frac(Fraction(-1, 4)) == Fraction(3, 4)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            Fraction(1, 3) / Fraction(0)

    @given(rationals)
    def test_frac_range(self, q):
        assert 0 <= frac(q) < 1
        assert q - frac(q) == math.floor(q)

    @given(rationals)
    def test_format_roundtrip(self, q):
        assert parse_rat(format_rat(q)) == q
        assert rat(format_rat(q)) == q

    def test_canonical(self):
        assert format_rat(Fraction(-4, 6)) == "-2/3"
        assert format_rat(Fraction(3)) == "3/1"

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            rat(0.5)
        with pytest.raises(ValueError):
            parse_rat("0.5")


class TestHamelNumber:
    def test_from_rational(self):
        x = hnum_from_rational(Fraction(3, 4))
        assert x.lambda_b == Fraction(3, 2) and x.coeffs == ()
        assert hnum_from_rational(0).lambda_b == 0
        assert hnum_from_rational(1).lambda_b == 2

    def test_cancellation(self):
        x = HamelNumber(1, {"a1": Fraction(1, 2)})
        y = HamelNumber(2, {"a1": Fraction(-1, 2)})
        s = hnum_add(x, y)
        assert s.lambda_b == 3 and s.coeffs == () and s.is_rational

    def test_scale(self):
        assert hnum_scale(3, HamelNumber(Fraction(1, 3))) == HamelNumber(1)

    def test_disjoint_supports(self, a1, a2):
        s = a1 + a2
        assert s.lambda_b == 0
        assert dict(s.coeffs) == {"a1": 1, "a2": 1}

    def test_zero_coefficients_pruned(self):
        assert HamelNumber(1, {"a1": 0}).coeffs == ()
        assert HamelNumber(1, {"a1": 0}) == BASE

    def test_lambda_b(self, a1):
        assert lambda_b(BASE) == 1
        assert lambda_b(a1) == 0
        assert lambda_b(hn(Fraction(3, 4))) == Fraction(3, 2)

    def test_registry_mismatch(self):
        other = AtomRegistry.from_config([{"id": "a1", "constant": "sqrt2"}])
        with pytest.raises(RegistryMismatchError):
            HamelNumber.atom("a1") + HamelNumber.atom("a1", other)
        # rationals carry no registry and mix with anything
        assert (hn(1) + HamelNumber.atom("a1", other)).registry is other

    def test_unknown_atom(self):
        with pytest.raises(KeyError):
            HamelNumber(0, {"zz": 1})

    @given(hamel_numbers(), hamel_numbers(), rationals, rationals)
    def test_lambda_b_is_linear(self, x, y, p, q):
        assert lambda_b(x.scale(p) + y.scale(q)) == p * lambda_b(x) + q * lambda_b(y)

    @given(rationals, rationals)
    def test_from_rational_section(self, p, q):
        assert lambda_b(hnum_from_rational(q)) == 2 * q
        assert (hnum_from_rational(p) == hnum_from_rational(q)) == (p == q)

    @given(hamel_numbers())
    def test_json_roundtrip(self, x):
        assert HamelNumber.from_json(json.loads(json.dumps(x.to_json()))) == x

    @given(hamel_numbers(), hamel_numbers())
    def test_equality_is_coordinatewise(self, x, y):
        d = x - y
        assert (x == y) == (d.is_rational and d.lambda_b == 0)


class TestEnclosures:
    def test_rational_is_exact(self):
        iv = approx(hn(Fraction(3, 4)), Fraction(1, 10 ** 6))
        assert iv.lo == iv.hi == Fraction(3, 4)

    def test_sqrt2(self, a1):
        iv = approx(a1, Fraction(1, 100))
        assert iv.width <= Fraction(1, 100)
        assert contains_sqrt(iv, 2)

    def test_b_plus_sqrt2(self, a1):
        iv = approx(BASE + a1, Fraction(1, 1000))
        assert iv.width <= Fraction(1, 1000)
        assert contains_sqrt(iv, 2, shift=Fraction(1, 2))

    @given(st.integers(1, 200))
    def test_sqrt_nested(self, k):
        enc = sqrt_enclosure(3)
        coarse, fine = enc(Fraction(1, k)), enc(Fraction(1, 2 * k + 7))
        assert coarse.contains_interval(fine)
        assert contains_sqrt(fine, 3)

    @given(hamel_numbers(), st.integers(1, 40))
    @settings(max_examples=60)
    def test_approx_nested_and_contains_refinement(self, x, k):
        eps = Fraction(1, 1 << k)
        coarse, fine = approx(x, eps), approx(x, eps / 1024)
        assert coarse.width <= eps
        assert coarse.lo <= fine.midpoint <= coarse.hi

    def test_minpoly_root(self):
        enc = root_enclosure([-2, 0, 1], 1, 2)  # x^2 - 2 on [1, 2]
        iv = enc(Fraction(1, 10 ** 6))
        assert iv.width <= Fraction(1, 10 ** 6) and contains_sqrt(iv, 2)
        assert enc(Fraction(1, 100)).contains_interval(iv)

    def test_minpoly_requires_sign_change(self):
        with pytest.raises(ValueError):
            root_enclosure([-2, 0, 1], 2, 3)

    def test_minpoly_rational_root_detected(self):
        enc = root_enclosure([-3, 2], 0, 4)  # 2x - 3, root 3/2 is hit by bisection
        with pytest.raises(ValueError):
            enc(Fraction(1, 100))

    def test_perfect_square_rejected(self):
        with pytest.raises(ValueError):
            sqrt_enclosure(4)


class TestOrdering:
    def test_compare_rational(self):
        assert compare_to_rational(hn(Fraction(3, 4)), Fraction(1, 2)) == 1
        assert compare_to_rational(BASE + HamelNumber.atom("a1").scale(0), Fraction(1, 2)) == 0

    def test_floor_sqrt2(self, a1):
        assert floor_real(a1) == 1
        assert floor_real(-a1) == -2
        assert floor_real(a1.scale(100)) == 141

    def test_floor_rational(self):
        assert floor_real(hn(Fraction(-1, 4))) == -1
        assert floor_real(hn(3)) == 3

    @given(hamel_numbers(), rationals)
    @settings(max_examples=80)
    def test_compare_consistent_with_approx(self, x, q):
        verdict = compare_to_rational(x, q)
        iv = approx(x, Fraction(1, 1 << 20))
        if iv.hi < q:
            assert verdict == -1
        elif iv.lo > q:
            assert verdict == 1
        if not x.is_rational:
            assert verdict != 0

    @given(hamel_numbers())
    @settings(max_examples=80)
    def test_floor_brackets(self, x):
        f = floor_real(x)
        assert compare_to_rational(x, f) >= 0
        assert compare_to_rational(x, f + 1) < 0

    def test_dependent_atoms_exhaust_budget(self):
        # two names for sqrt(2) violate the independence assumption
        reg = AtomRegistry.from_config([{"id": "u", "constant": "sqrt2"},
                                        {"id": "v", "constant": "sqrt2"}])
        zero_in_disguise = HamelNumber(0, {"u": 1, "v": -1}, reg)
        with pytest.raises(RefinementBudgetError):
            compare_to_rational(zero_in_disguise, 0)


class TestRegistry:
    def test_default(self):
        assert DEFAULT_REGISTRY.ids == ("a1", "a2", "a3")
        assert contains_sqrt(DEFAULT_REGISTRY.enclose("a3", Fraction(1, 1000)), 5)

    def test_load(self, tmp_path):
        cfg = [{"id": "r", "constant": {"minpoly": [-2, 0, 1], "root_interval": ["1/1", "2/1"]}},
               {"id": "s", "constant": "sqrt3"}]
        path = tmp_path / "reg.json"
        path.write_text(json.dumps(cfg))
        reg = AtomRegistry.load(path)
        assert reg.ids == ("r", "s")
        assert contains_sqrt(reg.enclose("r", Fraction(1, 1 << 30)), 2)
        assert reg.digest() == AtomRegistry.from_config(cfg).digest()
        assert reg.digest() != DEFAULT_REGISTRY.digest()

    def test_bad_constant(self):
        with pytest.raises(ValueError):
            AtomRegistry.from_config([{"id": "x", "constant": "pi"}])
        with pytest.raises(ValueError):
            AtomRegistry.from_config([{"id": "x", "constant": "sqrt2"},
                                      {"id": "x", "constant": "sqrt3"}])
