from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densepi.exact_numbers import BASE, HamelNumber, compare_to_rational
from densepi.group_functions import Additive, DensePi, Gmi, fn_sum
from densepi.minimality import HamelSampler
from densepi.model import (
    SearchBudgetError,
    Solution,
    affine_hull_residual,
    check_validity,
    equivalence_check,
    halfspace_value,
    is_member,
    nonneg_form_demo,
    random_solution,
)

from conftest import hn, on_b, rationals

F = Fraction
PI, GMI = DensePi(), Gmi()


class TestMembership:
    def test_examples(self, a1):
        assert is_member(Solution.of((BASE, 1)))
        assert not is_member(Solution.of())
        assert is_member(Solution.of((a1, 1), (BASE - a1, 1)))

    def test_congruence_mod_one(self):
        assert is_member(Solution.of((hn(F(3, 2)), 1)))
        assert not is_member(Solution.of((hn(1), 1)))

    def test_duplicates_merged(self):
        y = Solution.of((on_b(F(1, 3)), 1), (on_b(F(1, 3)), 2))
        assert y.support == ((on_b(F(1, 3)), 3),) and is_member(y)

    def test_bad_multiplicity(self):
        with pytest.raises(ValueError):
            Solution.of((BASE, 0))

    def test_json(self, a1):
        y = Solution.of((a1, 2), (BASE - a1.scale(2), 1))
        assert Solution.from_json(y.to_json()) == y


class TestRandomSolution:
    def test_degenerate(self):
        y = random_solution(HamelSampler(0), k=1, z=0)
        assert y.support == ((BASE, 1),)

    def test_forced_multiplicity(self):
        y = random_solution(HamelSampler(0), k=1, z=0, closing_mult=3)
        assert y.support == ((on_b(F(1, 3)), 3),)

    def test_prefix(self, a1):
        y = random_solution(HamelSampler(0), k=2, prefix=[(a1, 1)], z=0)
        assert y == Solution.of((a1, 1), (BASE - a1, 1))

    @given(st.integers(0, 2 ** 32))
    @settings(max_examples=100)
    def test_always_member(self, seed):
        assert is_member(random_solution(HamelSampler(seed)))

    def test_support_bound(self):
        s = HamelSampler(1)
        assert all(len(random_solution(s)) <= 6 for _ in range(200))


class TestHalfspace:
    def test_values(self, a1):
        assert halfspace_value(PI, Solution.of((BASE, 1))) == 1
        assert halfspace_value(PI, Solution.of((on_b(F(1, 3)), 3))) == 1
        assert halfspace_value(PI, Solution.of((a1, 1), (BASE - a1, 1))) == 1

    def test_validity(self, a1):
        assert check_validity(PI, Solution.of((hn(F(1, 4)), 2)))
        assert check_validity(GMI, Solution.of((BASE, 1)))
        y = Solution.of((a1, 1), (BASE - a1, 1))
        assert halfspace_value(GMI, y) == 1 and check_validity(GMI, y)

    def test_validity_requires_member(self):
        with pytest.raises(ValueError):
            check_validity(PI, Solution.of((hn(F(1, 3)), 1)))

    def test_invalid_function_detected(self):
        half = Additive(F(1, 4))  # theta(b) = 1/4: sums to 1/4 on {(b, 1)}
        assert not check_validity(half, Solution.of((BASE, 1)))

    def test_pi_valid_on_random(self):
        s = HamelSampler(12)
        for _ in range(500):
            y = random_solution(s)
            assert check_validity(PI, y)

    def test_gmi_valid_on_random(self):
        s = HamelSampler(13)
        for _ in range(200):
            assert check_validity(GMI, random_solution(s))


class TestAffineHull:
    def test_examples(self, a1):
        th1 = Additive(0, {"a1": 1})
        assert affine_hull_residual(th1, Solution.of((BASE, 1))) == 0
        y = Solution.of((a1, 1), (BASE - a1, 1))
        assert th1.value(a1) == 1 and th1.value(BASE - a1) == -1
        assert affine_hull_residual(th1, y) == 0
        assert affine_hull_residual(Additive(0, {"a1": 5}), Solution.of((on_b(F(1, 3)), 3))) == 0

    def test_equivalence_examples(self, a1):
        y = Solution.of((a1, 1), (BASE - a1, 1))
        assert equivalence_check(GMI, Additive(0, {"a1": -1}), y)
        assert equivalence_check(PI, Additive(), Solution.of((BASE, 1)))
        assert equivalence_check(PI, Additive(0, {"a1": 7}), Solution.of((on_b(F(1, 3)), 3)))

    def test_equivalence_requires_vanishing_theta(self):
        with pytest.raises(ValueError):
            equivalence_check(PI, Additive(1), Solution.of((BASE, 1)))

    @given(st.integers(0, 2 ** 32), rationals, rationals, rationals)
    @settings(max_examples=150)
    def test_residual_zero_and_accounting(self, seed, c1, c2, cb):
        y = random_solution(HamelSampler(seed))
        theta0 = Additive(0, {"a1": c1, "a2": c2})
        assert affine_hull_residual(theta0, y) == 0
        theta = Additive(cb, {"a1": c1, "a2": c2})
        lhs = halfspace_value(fn_sum([PI, theta]), y)
        rhs = halfspace_value(PI, y) + affine_hull_residual(theta, y) + theta.value(BASE)
        assert lhs == rhs


class TestNonnegDemo:
    def test_minus_one(self, a1):
        demo = nonneg_form_demo(fn_sum([GMI, Additive(0, {"a1": -1})]))
        assert demo.witness == a1
        assert demo.witness_value == a1.scale(2) - 3
        assert compare_to_rational(demo.witness_value, 0) < 0
        assert demo.corrected_value == a1.scale(2) - 2
        assert compare_to_rational(demo.corrected_value, 0) > 0

    def test_minus_tenth(self, a1):
        demo = nonneg_form_demo(fn_sum([GMI, Additive(0, {"a1": F(-1, 10)})]))
        k = demo.witness.coeff("a1")
        assert demo.witness.lambda_b == 0 and 1 <= k <= 20
        # search oracle: first k with gmi(k*sqrt2) < k/10, scanning upward
        first = next(j for j in range(1, 21)
                     if compare_to_rational(GMI(a1.scale(j)), F(j, 10)) < 0)
        assert k == first

    def test_positive_coefficient_uses_negative_multiples(self):
        demo = nonneg_form_demo(fn_sum([GMI, Additive(0, {"a2": F(1, 2)})]))
        assert demo.witness.coeff("a2") < 0

    def test_corrected_equals_gmi(self):
        s = HamelSampler(4)
        pts = [s.point() for _ in range(100)]
        demo = nonneg_form_demo(fn_sum([GMI, Additive(0, {"a1": -1})]), samples=pts)
        for x in pts:
            assert demo.corrected.evaluate(x) == GMI.evaluate(x)

    def test_rejects_zero_theta(self):
        with pytest.raises(ValueError):
            nonneg_form_demo(fn_sum([GMI, Additive()]))
        with pytest.raises(ValueError):
            nonneg_form_demo(fn_sum([PI, Additive(0, {"a1": -1})]))

    def test_budget(self):
        with pytest.raises(SearchBudgetError):
            nonneg_form_demo(fn_sum([GMI, Additive(0, {"a1": F(-1, 1000)})]), max_k=3)
