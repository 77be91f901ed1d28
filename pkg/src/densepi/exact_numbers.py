"""Exact rationals, Hamel-coordinate numbers and rational interval enclosures.

Every real number handled by the package lives in a finitely generated
Q-subspace of R spanned by ``b = 1/2`` and a handful of declared irrational
atoms (by default sqrt(2), sqrt(3), sqrt(5)).  A :class:`HamelNumber` stores
the rational coordinates of such a number, which makes equality structural
and additive functions trivially computable.  Ordering questions (floor,
comparison with a rational) are answered by refining rational enclosures of
the atoms until the sign is determined.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

Rat = Fraction

B = Fraction(1, 2)

# refinement stops once the requested width would drop below 2**-MAX_REFINE_BITS
MAX_REFINE_BITS = 256


class RefinementBudgetError(ArithmeticError):
    """Raised when enclosure refinement cannot decide a comparison.

    For honest atoms this cannot happen (an irrational never equals a
    rational), so hitting the budget points at a registry whose atoms are
    not linearly independent over Q together with 1.
    """


class RegistryMismatchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rationals


def rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: they would silently smuggle rounding into exact code.
    """
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals")
    if isinstance(value, str):
        return parse_rat(value)
    return Fraction(value)


def parse_rat(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    if "." in text or "e" in text.lower():
        # decimal literals are exact in Fraction, but keep the surface narrow
        raise ValueError(f"expected 'p/q' or integer, got {text!r}")
    return Fraction(text)


def format_rat(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def floor_rat(q: Fraction) -> int:
    return math.floor(q)


def frac(q: Fraction) -> Fraction:
    """Fractional part in [0, 1); ``frac(-1/4) == 3/4``."""
    return q - math.floor(q)


def is_integer(q: Fraction) -> bool:
    return q.denominator == 1


def is_odd_integer(q: Fraction) -> bool:
    return q.denominator == 1 and q.numerator % 2 == 1


def is_even_integer(q: Fraction) -> bool:
    return q.denominator == 1 and q.numerator % 2 == 0


# ---------------------------------------------------------------------------
# intervals


@dataclass(frozen=True)
class Interval:
    """Closed rational interval ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, q) -> "Interval":
        q = Fraction(q)
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q) -> bool:
        return self.lo <= q <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def scale(self, c: Fraction) -> "Interval":
        if c >= 0:
            return Interval(c * self.lo, c * self.hi)
        return Interval(c * self.hi, c * self.lo)

    def to_json(self) -> list[str]:
        return [format_rat(self.lo), format_rat(self.hi)]


def _dyadic_bits(eps: Fraction) -> int:
    """Smallest k >= 0 with 2**-k <= eps."""
    if eps <= 0:
        raise ValueError("enclosure width must be positive")
    k = 0
    while Fraction(1, 1 << k) > eps:
        k += 1
    return k


# ---------------------------------------------------------------------------
# atom enclosures

EnclosureFn = Callable[[Fraction], Interval]


def sqrt_enclosure(n: int) -> EnclosureFn:
    """Enclosures of sqrt(n) on the dyadic grid.

    At k bits the interval is ``[m/2^k, (m+1)/2^k]`` with ``m = isqrt(n*4^k)``;
    floors on a finer dyadic grid never leave the coarser cell, so the
    intervals are nested.
    """
    if n <= 0 or math.isqrt(n) ** 2 == n:
        raise ValueError(f"sqrt({n}) is not an irrational positive number")

    def enclose(eps: Fraction) -> Interval:
        k = _dyadic_bits(Fraction(eps))
        m = math.isqrt(n << (2 * k))
        return Interval(Fraction(m, 1 << k), Fraction(m + 1, 1 << k))

    return enclose


def _poly_eval(coeffs: list[int], x: Fraction) -> Fraction:
    # coefficients in ascending degree order
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def root_enclosure(coeffs: Iterable[int], lo, hi) -> EnclosureFn:
    """Bisection enclosures of the unique root of a polynomial in ``[lo, hi]``.

    ``coeffs`` are integers in ascending degree order.  The endpoints must
    have opposite signs.  Each request bisects from the original interval,
    so answers at finer widths are nested inside coarser ones.
    """
    coeffs = [int(c) for c in coeffs]
    lo, hi = Fraction(lo), Fraction(hi)
    f_lo, f_hi = _poly_eval(coeffs, lo), _poly_eval(coeffs, hi)
    if lo >= hi or f_lo * f_hi >= 0:
        raise ValueError("root_interval must bracket a sign change strictly")
    sign_lo = f_lo > 0

    def enclose(eps: Fraction) -> Interval:
        a, c = lo, hi
        while c - a > eps:
            mid = (a + c) / 2
            v = _poly_eval(coeffs, mid)
            if v == 0:
                raise ValueError(f"polynomial has the rational root {mid}")
            if (v > 0) == sign_lo:
                a = mid
            else:
                c = mid
        return Interval(a, c)

    return enclose


NAMED_CONSTANTS = {"sqrt2": 2, "sqrt3": 3, "sqrt5": 5}


class AtomRegistry:
    """Immutable map from atom id to an enclosure generator.

    The registry never checks that its atoms are linearly independent over
    Q together with 1; that is a declared assumption recorded in reports.
    """

    def __init__(self, atoms: Mapping[str, EnclosureFn], config: list | None = None):
        if not atoms:
            raise ValueError("registry needs at least one atom")
        self._atoms = dict(atoms)
        self._config = config
        self.ids = tuple(self._atoms)

    def __contains__(self, atom_id) -> bool:
        return atom_id in self._atoms

    def __repr__(self):
        return f"AtomRegistry({list(self.ids)!r})"

    def enclose(self, atom_id: str, eps) -> Interval:
        try:
            fn = self._atoms[atom_id]
        except KeyError:
            raise KeyError(f"unknown atom {atom_id!r}") from None
        return fn(Fraction(eps))

    @classmethod
    def from_config(cls, config: list[dict]) -> "AtomRegistry":
        atoms: dict[str, EnclosureFn] = {}
        for entry in config:
            atom_id = entry["id"]
            if atom_id in atoms:
                raise ValueError(f"duplicate atom id {atom_id!r}")
            const = entry["constant"]
            if isinstance(const, str):
                if const not in NAMED_CONSTANTS:
                    raise ValueError(f"unknown constant {const!r}")
                atoms[atom_id] = sqrt_enclosure(NAMED_CONSTANTS[const])
            else:
                lo, hi = (rat(v) for v in const["root_interval"])
                atoms[atom_id] = root_enclosure(const["minpoly"], lo, hi)
        return cls(atoms, config=[dict(e) for e in config])

    @classmethod
    def load(cls, path) -> "AtomRegistry":
        with open(path) as fh:
            return cls.from_config(json.load(fh))

    @property
    def config(self) -> list[dict] | None:
        return self._config

    def digest(self) -> str:
        """sha256 of the canonical JSON config (used in report headers)."""
        blob = json.dumps(self._config, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


DEFAULT_CONFIG = [
    {"id": "a1", "constant": "sqrt2"},
    {"id": "a2", "constant": "sqrt3"},
    {"id": "a3", "constant": "sqrt5"},
]

DEFAULT_REGISTRY = AtomRegistry.from_config(DEFAULT_CONFIG)


# ---------------------------------------------------------------------------
# Hamel numbers


def _merge_registry(r1, r2):
    if r1 is None:
        return r2
    if r2 is None or r1 is r2:
        return r1
    raise RegistryMismatchError("operands come from different atom registries")


class HamelNumber:
    """``lambda_b * b + sum(coeff[a] * a)`` with rational coordinates.

    Rational numbers carry no registry and combine with anything; numbers
    with atom coordinates remember the registry their atoms belong to.
    """

    __slots__ = ("lambda_b", "coeffs", "registry", "_hash")

    def __init__(self, lambda_b=0, coeffs: Mapping[str, Fraction] | None = None,
                 registry: AtomRegistry | None = None):
        self.lambda_b = Fraction(lambda_b)
        items = []
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    items.append((k, v))
            items.sort()
        if items:
            if registry is None:
                registry = DEFAULT_REGISTRY
            for k, _ in items:
                if k not in registry:
                    raise KeyError(f"atom {k!r} not in registry")
        else:
            registry = None
        self.coeffs = tuple(items)
        self.registry = registry
        self._hash = None

    @classmethod
    def _raw(cls, lambda_b, items, registry):
        obj = cls.__new__(cls)
        obj.lambda_b = lambda_b
        obj.coeffs = items
        obj.registry = registry if items else None
        obj._hash = None
        return obj

    @classmethod
    def from_rational(cls, q) -> "HamelNumber":
        return cls._raw(2 * Fraction(q), (), None)

    @classmethod
    def atom(cls, atom_id: str, registry: AtomRegistry | None = None) -> "HamelNumber":
        return cls(0, {atom_id: 1}, registry)

    @property
    def is_rational(self) -> bool:
        return not self.coeffs

    def as_rational(self) -> Fraction:
        if self.coeffs:
            raise ValueError(f"{self!r} is irrational")
        return self.lambda_b / 2

    def coeff(self, atom_id: str) -> Fraction:
        for k, v in self.coeffs:
            if k == atom_id:
                return v
        return Fraction(0)

    # -- linear structure --------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, HamelNumber):
            if isinstance(other, (int, Fraction)):
                return HamelNumber._raw(self.lambda_b + 2 * other, self.coeffs, self.registry)
            return NotImplemented
        reg = _merge_registry(self.registry, other.registry)
        if not other.coeffs:
            items = self.coeffs
        elif not self.coeffs:
            items = other.coeffs
        else:
            acc = dict(self.coeffs)
            for k, v in other.coeffs:
                s = acc.get(k, 0) + v
                if s:
                    acc[k] = s
                else:
                    acc.pop(k, None)
            items = tuple(sorted(acc.items()))
        return HamelNumber._raw(self.lambda_b + other.lambda_b, items, reg)

    __radd__ = __add__

    def __neg__(self):
        return HamelNumber._raw(-self.lambda_b, tuple((k, -v) for k, v in self.coeffs),
                                self.registry)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-Fraction(other))
        if not isinstance(other, HamelNumber):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q) -> "HamelNumber":
        q = Fraction(q)
        if not q:
            return ZERO
        return HamelNumber._raw(q * self.lambda_b, tuple((k, q * v) for k, v in self.coeffs),
                                self.registry)

    def __mul__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(q)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(1 / Fraction(q))
        return NotImplemented

    # -- equality ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return not self.coeffs and self.lambda_b == 2 * other
        if not isinstance(other, HamelNumber):
            return NotImplemented
        return self.lambda_b == other.lambda_b and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.lambda_b, self.coeffs))
        return self._hash

    def __repr__(self):
        parts = [f"{self.lambda_b}*b"]
        parts += [f"{v}*{k}" for k, v in self.coeffs]
        return "HamelNumber(" + " + ".join(parts) + ")"

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"lambda_b": format_rat(self.lambda_b),
                "coeffs": {k: format_rat(v) for k, v in self.coeffs}}

    @classmethod
    def from_json(cls, data: Mapping, registry: AtomRegistry | None = None) -> "HamelNumber":
        coeffs = {k: rat(v) for k, v in data.get("coeffs", {}).items()}
        return cls(rat(data["lambda_b"]), coeffs, registry)


ZERO = HamelNumber()
BASE = HamelNumber(1)  # the number b = 1/2


def hnum_from_rational(q) -> HamelNumber:
    return HamelNumber.from_rational(q)


def hnum_add(x: HamelNumber, y: HamelNumber) -> HamelNumber:
    return x + y


def hnum_scale(q, x: HamelNumber) -> HamelNumber:
    return x.scale(q)


def lambda_b(x: HamelNumber) -> Fraction:
    """The b-coordinate of x; as a function of x this is additive."""
    return x.lambda_b


# ---------------------------------------------------------------------------
# real-valued questions


def approx(x: HamelNumber, eps) -> Interval:
    """Rational interval of width <= eps containing the real value of x."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    base = Interval.point(x.lambda_b / 2)
    if not x.coeffs:
        return base
    budget = eps / (len(x.coeffs) + 1)
    total = base
    for atom_id, c in x.coeffs:
        total = total + x.registry.enclose(atom_id, budget / abs(c)).scale(c)
    return total


def compare_to_rational(x: HamelNumber, q) -> int:
    """Return -1, 0 or 1 as x <, =, > q."""
    q = Fraction(q)
    if not x.coeffs:
        r = x.lambda_b / 2
        return (r > q) - (r < q)
    for bits in range(1, MAX_REFINE_BITS + 1):
        iv = approx(x, Fraction(1, 1 << bits))
        if iv.hi < q:
            return -1
        if iv.lo > q:
            return 1
    raise RefinementBudgetError(f"could not separate {x!r} from {q}")


def sign(x: HamelNumber) -> int:
    return compare_to_rational(x, 0)


def floor_real(x: HamelNumber) -> int:
    if not x.coeffs:
        return math.floor(x.lambda_b / 2)
    for bits in range(1, MAX_REFINE_BITS + 1):
        iv = approx(x, Fraction(1, 1 << bits))
        f = math.floor(iv.lo)
        if math.floor(iv.hi) == f:
            return f
    raise RefinementBudgetError(f"could not determine floor of {x!r}")


def to_float(x: HamelNumber) -> float:
    """Convenience float; never used in decisions."""
    return float(approx(x, Fraction(1, 1 << 60)).midpoint)
