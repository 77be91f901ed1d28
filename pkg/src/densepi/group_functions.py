"""Group functions: the dense extreme function, GMI, additive perturbations.

All functions are periodic modulo 1 and are evaluated on
:class:`~densepi.exact_numbers.HamelNumber` arguments.  ``evaluate`` always
returns a HamelNumber so that sums of rational- and irrational-valued
functions stay exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact_numbers import (
    B,
    HamelNumber,
    compare_to_rational,
    floor_real,
    format_rat,
    is_odd_integer,
    rat,
)


def pi_dense(x: HamelNumber) -> Fraction:
    """Value of the everywhere-discontinuous extreme function at x.

    Depends on x only through its b-coordinate: the fractional part of
    ``lambda_b``, except that odd integers map to 1.
    """
    lb = x.lambda_b
    if is_odd_integer(lb):
        return Fraction(1)
    return lb - (lb.numerator // lb.denominator)


def reduce_mod_one(x: HamelNumber) -> HamelNumber:
    """Representative of x modulo 1 in [0, 1)."""
    return x - floor_real(x)


def gmi(x: HamelNumber) -> HamelNumber:
    """GMI function for b = 1/2, extended periodically."""
    r = reduce_mod_one(x)
    if compare_to_rational(r, B) <= 0:
        return r.scale(2)
    return (1 - r).scale(2)


def additive_eval(c_b, c: Mapping[str, Fraction], x: HamelNumber) -> Fraction:
    """``c_b * lambda_b(x) + sum(c[a] * lambda_a(x))``; absent atoms count as 0."""
    total = Fraction(c_b) * x.lambda_b
    for atom_id, coef in x.coeffs:
        w = c.get(atom_id)
        if w:
            total += w * coef
    return total


class GroupFunction:
    """Base class; subclasses implement :meth:`evaluate`."""

    def evaluate(self, x: HamelNumber) -> HamelNumber:
        raise NotImplementedError

    def __call__(self, x: HamelNumber) -> HamelNumber:
        return self.evaluate(x)

    def __add__(self, other: "GroupFunction") -> "Sum":
        return fn_sum([self, other])

    @property
    def rational_valued(self) -> bool:
        return False


@dataclass(frozen=True)
class DensePi(GroupFunction):
    def evaluate(self, x):
        return HamelNumber.from_rational(pi_dense(x))

    @property
    def rational_valued(self):
        return True

    def __str__(self):
        return "pi"


@dataclass(frozen=True)
class Gmi(GroupFunction):
    def evaluate(self, x):
        return gmi(x)

    def __str__(self):
        return "gmi"


@dataclass(frozen=True)
class Additive(GroupFunction):
    """theta(x) = c_b * lambda_b(x) + sum over atoms of c[a] * lambda_a(x).

    Note that this is the additive function taking value ``c_b`` at b, so
    ``theta(b) = c_b`` and ``theta(p) = 2 * c_b * p`` for rational p.
    """

    c_b: Fraction = Fraction(0)
    c: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "c_b", Fraction(self.c_b))
        object.__setattr__(self, "c", {k: Fraction(v) for k, v in self.c.items() if v})

    def __hash__(self):
        return hash((self.c_b, tuple(sorted(self.c.items()))))

    def value(self, x: HamelNumber) -> Fraction:
        return additive_eval(self.c_b, self.c, x)

    def evaluate(self, x):
        return HamelNumber.from_rational(self.value(x))

    def negated(self) -> "Additive":
        return Additive(-self.c_b, {k: -v for k, v in self.c.items()})

    @property
    def vanishes_on_rationals(self) -> bool:
        return self.c_b == 0

    @property
    def rational_valued(self):
        return True

    def to_json(self) -> dict:
        out = {"c_b": format_rat(self.c_b)}
        out.update({k: format_rat(v) for k, v in sorted(self.c.items())})
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "Additive":
        data = dict(data)
        c_b = rat(str(data.pop("c_b", "0")))
        return cls(c_b, {k: rat(str(v)) for k, v in data.items()})

    @classmethod
    def load(cls, path) -> "Additive":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def __str__(self):
        return f"theta{self.to_json()}"


@dataclass(frozen=True)
class Sum(GroupFunction):
    terms: tuple

    def evaluate(self, x):
        total = HamelNumber()
        for f in self.terms:
            total = total + f.evaluate(x)
        return total

    @property
    def rational_valued(self):
        return all(f.rational_valued for f in self.terms)

    def __str__(self):
        return "+".join(str(f) for f in self.terms)


def fn_sum(fs: Sequence[GroupFunction]) -> Sum:
    return Sum(tuple(fs))


def evaluate(f: GroupFunction, x: HamelNumber) -> HamelNumber:
    return f.evaluate(x)


@dataclass(frozen=True)
class PiecewiseLinear(GroupFunction):
    """Continuous periodic piecewise linear function on [0, 1).

    ``breakpoints`` start at 0 and are strictly increasing in [0, 1);
    ``values`` are the function values there.  Between consecutive
    breakpoints, and from the last breakpoint to 1 (where the value wraps
    back to ``values[0]``), the function interpolates linearly.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bps = tuple(Fraction(v) for v in self.breakpoints)
        vals = tuple(Fraction(v) for v in self.values)
        if not bps or bps[0] != 0 or len(bps) != len(vals):
            raise ValueError("breakpoints must start at 0 and match values")
        if any(p >= q for p, q in zip(bps, bps[1:])) or bps[-1] >= 1:
            raise ValueError("breakpoints must increase strictly inside [0, 1)")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    def evaluate(self, x):
        r = reduce_mod_one(x)
        bps, vals = self.breakpoints, self.values
        i = len(bps) - 1
        while i > 0 and compare_to_rational(r, bps[i]) < 0:
            i -= 1
        left, v_left = bps[i], vals[i]
        right, v_right = (bps[i + 1], vals[i + 1]) if i + 1 < len(bps) else (Fraction(1), vals[0])
        slope = (v_right - v_left) / (right - left)
        return (r - left).scale(slope) + v_left

    @property
    def rational_valued(self):
        return True  # on rational arguments, which is all restrict_to_grid needs


GMI_PWL = PiecewiseLinear((0, B), (0, 1))


# ---------------------------------------------------------------------------
# finite grids


@dataclass(frozen=True)
class FiniteGroupFunction:
    """Rational values ``values[k]`` at the grid points ``k/n``, n even."""

    n: int
    values: tuple

    def __post_init__(self):
        if self.n <= 0 or self.n % 2:
            raise ValueError(f"grid size must be a positive even integer, got {self.n}")
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != self.n:
            raise ValueError(f"expected {self.n} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @property
    def b_index(self) -> int:
        return self.n // 2

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k % self.n]

    def __add__(self, other: "FiniteGroupFunction") -> "FiniteGroupFunction":
        if other.n != self.n:
            raise ValueError("grid sizes differ")
        return FiniteGroupFunction(self.n, tuple(u + v for u, v in zip(self.values, other.values)))

    def scale(self, q) -> "FiniteGroupFunction":
        q = Fraction(q)
        return FiniteGroupFunction(self.n, tuple(q * v for v in self.values))

    def __rmul__(self, q):
        return self.scale(q)

    def to_json(self) -> dict:
        return {"n": self.n, "values": [format_rat(v) for v in self.values]}


def restrict_to_grid(f: GroupFunction, n: int) -> FiniteGroupFunction:
    if n <= 0 or n % 2:
        raise ValueError(f"grid size must be a positive even integer, got {n}")
    vals = []
    for k in range(n):
        v = f.evaluate(HamelNumber.from_rational(Fraction(k, n)))
        if not v.is_rational:
            raise ValueError(f"{f} takes an irrational value at {k}/{n}")
        vals.append(v.as_rational())
    return FiniteGroupFunction(n, tuple(vals))
