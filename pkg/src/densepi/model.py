"""Finite-support solutions of the single-row infinite group model (b = 1/2).

A solution is a finite multiset of points whose weighted sum is congruent
to b modulo 1.  This module tests membership, evaluates the halfspace
``sum f(x) y(x) >= 1`` and exercises the affine-hull equations
``sum theta(p) y(p) = theta(b)`` for additive theta vanishing on Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact_numbers import (
    BASE,
    DEFAULT_REGISTRY,
    AtomRegistry,
    HamelNumber,
    is_even_integer,
    sign,
)
from .group_functions import Additive, GroupFunction, Gmi, Sum, fn_sum
from .minimality import HamelSampler


@dataclass(frozen=True)
class Solution:
    support: tuple  # ((HamelNumber, multiplicity), ...)

    def __post_init__(self):
        merged: dict[HamelNumber, int] = {}
        for point, mult in self.support:
            if int(mult) != mult or mult < 1:
                raise ValueError(f"multiplicity must be a positive integer, got {mult}")
            merged[point] = merged.get(point, 0) + int(mult)
        object.__setattr__(self, "support", tuple(merged.items()))

    @classmethod
    def of(cls, *pairs) -> "Solution":
        return cls(tuple(pairs))

    def total(self) -> HamelNumber:
        s = HamelNumber()
        for point, mult in self.support:
            s = s + point.scale(mult)
        return s

    def __len__(self):
        return len(self.support)

    def to_json(self) -> list:
        return [{"point": p.to_json(), "mult": m} for p, m in self.support]

    @classmethod
    def from_json(cls, data, registry: AtomRegistry | None = None) -> "Solution":
        return cls(tuple((HamelNumber.from_json(d["point"], registry), int(d["mult"]))
                         for d in data))


def is_member(y: Solution) -> bool:
    """sum(mult * point) - b is an integer, decided on Hamel coordinates."""
    diff = y.total() - BASE
    return diff.is_rational and is_even_integer(diff.lambda_b)


def random_solution(sampler: HamelSampler, k: int | None = None, *, max_support: int = 6,
                    prefix: Sequence[tuple[HamelNumber, int]] = (),
                    closing_mult: int = 1, z: int | None = None,
                    max_mult: int = 3) -> Solution:
    """Random member of the model.

    Draws ``k - 1`` points (after any fixed ``prefix``) from ``sampler`` and
    closes the congruence with ``x_k = (b + z - sum) / closing_mult``, where
    z is uniform on {-3, ..., 3} unless given.
    """
    rng = sampler.rng
    if k is None:
        k = rng.randint(1, max_support)
    if k < 1 or len(prefix) > k - 1:
        raise ValueError("support size too small for the given prefix")
    pairs = list(prefix)
    while len(pairs) < k - 1:
        pairs.append((sampler.point(), rng.randint(1, max_mult)))
    if z is None:
        z = rng.randint(-3, 3)
    partial = Solution(tuple(pairs)).total() if pairs else HamelNumber()
    closing = (BASE + z - partial) / closing_mult
    return Solution(tuple(pairs) + ((closing, closing_mult),))


def halfspace_value(f: GroupFunction, y: Solution) -> HamelNumber:
    total = HamelNumber()
    for point, mult in y.support:
        total = total + f.evaluate(point).scale(mult)
    return total


def check_validity(f: GroupFunction, y: Solution) -> bool:
    if not is_member(y):
        raise ValueError("solution is not in the model")
    return sign(halfspace_value(f, y) - 1) >= 0


def affine_hull_residual(theta: Additive, y: Solution) -> Fraction:
    if not is_member(y):
        raise ValueError("solution is not in the model")
    return sum((mult * theta.value(p) for p, mult in y.support), Fraction(0)) - theta.value(BASE)


def equivalence_check(pi_fn: GroupFunction, theta: Additive, y: Solution) -> bool:
    """Same halfspace value, hence the same validity verdict, for f and f + theta."""
    if not theta.vanishes_on_rationals:
        raise ValueError("theta must vanish on the rationals")
    if not is_member(y):
        raise ValueError("solution is not in the model")
    plain = halfspace_value(pi_fn, y)
    perturbed = halfspace_value(fn_sum([pi_fn, theta]), y)
    return plain == perturbed and check_validity(pi_fn, y) == check_validity(fn_sum([pi_fn, theta]), y)


class SearchBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class NonnegDemo:
    witness: HamelNumber
    witness_value: HamelNumber
    corrected: GroupFunction
    corrected_value: HamelNumber


def _split_gmi_theta(pi_fn) -> Additive:
    if not isinstance(pi_fn, Sum) or len(pi_fn.terms) != 2:
        raise ValueError("expected a sum of GMI and an additive function")
    gmis = [t for t in pi_fn.terms if isinstance(t, Gmi)]
    thetas = [t for t in pi_fn.terms if isinstance(t, Additive)]
    if len(gmis) != 1 or len(thetas) != 1:
        raise ValueError("expected a sum of GMI and an additive function")
    theta = thetas[0]
    if theta.c_b != 0 or not theta.c:
        raise ValueError("theta must vanish on Q and be nonzero")
    return theta


def nonneg_form_demo(pi_fn: Sum, registry: AtomRegistry = DEFAULT_REGISTRY,
                     max_k: int = 1000, samples: Iterable[HamelNumber] = ()) -> NonnegDemo:
    """Find a point where GMI + theta is negative and undo theta.

    Search visits k*a for k = 1, -1, 2, -2, ... and each atom a on which
    theta is nonzero.  The corrected function is ``pi_fn - theta``, which
    agrees with GMI everywhere; this is checked at the witness and at any
    supplied sample points.
    """
    theta = _split_gmi_theta(pi_fn)
    corrected = fn_sum([pi_fn, theta.negated()])
    gmi = Gmi()
    for k in range(1, max_k + 1):
        for sgn in (1, -1):
            for atom_id in sorted(theta.c):
                x = HamelNumber.atom(atom_id, registry).scale(sgn * k)
                value = pi_fn.evaluate(x)
                if sign(value) < 0:
                    fixed = corrected.evaluate(x)
                    if sign(fixed) < 0 or fixed != gmi.evaluate(x):
                        raise AssertionError("correction failed at the witness")
                    for s in samples:
                        if corrected.evaluate(s) != gmi.evaluate(s):
                            raise AssertionError(f"corrected function differs from GMI at {s!r}")
                    return NonnegDemo(x, value, corrected, fixed)
    raise SearchBudgetError(f"no negative value found for |k| <= {max_k}")
