"""Minimality checks: subadditivity, symmetry, zeros on Z, periodicity.

On Hamel subspaces the checks are exact but sampled; on finite cyclic
grids :func:`verify_minimal_finite` is exhaustive.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact_numbers import (
    BASE,
    DEFAULT_REGISTRY,
    AtomRegistry,
    HamelNumber,
    format_rat,
    sign,
)
from .group_functions import FiniteGroupFunction, GroupFunction

MAX_RECORDED = 50
CHUNK = 1000


def sub_seed(master: int, *labels) -> int:
    """Derive a 64-bit seed: first 8 bytes of sha256("master:label:...")."""
    text = ":".join([str(master), *map(str, labels)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def _jsonable(v):
    if isinstance(v, HamelNumber):
        return v.to_json()
    if isinstance(v, Fraction):
        return format_rat(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass
class CheckReport:
    check: str
    samples: int = 0
    seed: int | None = None
    counterexamples: list = field(default_factory=list)
    n_counterexamples: int = 0
    tight: list = field(default_factory=list)
    n_tight: int = 0
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if self.n_counterexamples == 0 else "fail"

    @property
    def passed(self) -> bool:
        return self.n_counterexamples == 0

    def add_counterexample(self, **data):
        self.n_counterexamples += 1
        if len(self.counterexamples) < MAX_RECORDED:
            self.counterexamples.append(data)

    def add_tight(self, item):
        self.n_tight += 1
        if len(self.tight) < MAX_RECORDED:
            self.tight.append(item)

    def merge(self, other: "CheckReport") -> "CheckReport":
        out = CheckReport(self.check, self.samples + other.samples, self.seed,
                          n_counterexamples=self.n_counterexamples + other.n_counterexamples,
                          n_tight=self.n_tight + other.n_tight,
                          notes=self.notes + [n for n in other.notes if n not in self.notes])
        out.counterexamples = (self.counterexamples + other.counterexamples)[:MAX_RECORDED]
        out.tight = (self.tight + other.tight)[:MAX_RECORDED]
        return out

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "samples": self.samples,
            "seed": self.seed,
            "counterexamples": _jsonable(self.counterexamples),
            "n_counterexamples": self.n_counterexamples,
            "tight": _jsonable(self.tight),
            "n_tight": self.n_tight,
            "notes": list(self.notes),
            "verdict": self.verdict,
        }

    def __str__(self):
        return (f"{self.check}: {self.verdict} ({self.samples} samples, "
                f"{self.n_counterexamples} counterexamples)")


class HamelSampler:
    """Random points of the Hamel subspace.

    lambda_b is uniform over {p/q : |p| <= P, 1 <= q <= Q}; up to
    ``max_atoms`` atoms get coefficients from the same set.
    """

    def __init__(self, seed: int = 0, registry: AtomRegistry = DEFAULT_REGISTRY,
                 atoms: Sequence[str] | None = None, P: int = 40, Q: int = 20,
                 max_atoms: int = 2):
        self.seed = seed
        self.registry = registry
        self.atoms = tuple(atoms if atoms is not None else registry.ids)
        self.P, self.Q = P, Q
        self.max_atoms = min(max_atoms, len(self.atoms))
        self.rng = random.Random(seed)

    def rational(self) -> Fraction:
        return Fraction(self.rng.randint(-self.P, self.P), self.rng.randint(1, self.Q))

    def point(self) -> HamelNumber:
        k = self.rng.randint(0, self.max_atoms)
        chosen = self.rng.sample(self.atoms, k) if k else ()
        coeffs = {a: self.rational() for a in chosen}
        return HamelNumber(self.rational(), coeffs, self.registry)

    def integer(self, lo: int = -5, hi: int = 5) -> int:
        return self.rng.randint(lo, hi)

    def spawn(self, *labels) -> "HamelSampler":
        return HamelSampler(sub_seed(self.seed, *labels), self.registry, self.atoms,
                            self.P, self.Q, self.max_atoms)


def _chunks(n_samples: int):
    start = 0
    while start < n_samples:
        yield start // CHUNK, min(CHUNK, n_samples - start)
        start += CHUNK


def _run_chunked(name, sampler, n_samples, body) -> CheckReport:
    # per-chunk sub-seeds keep results independent of how chunks are scheduled
    report = CheckReport(name, 0, sampler.seed)
    for idx, size in _chunks(n_samples):
        part = CheckReport(name, size, sampler.seed)
        body(sampler.spawn(name, idx), size, part)
        report = report.merge(part)
    return report


def check_subadditivity(f: GroupFunction, sampler: HamelSampler, n_samples: int) -> CheckReport:
    def body(s, size, rep):
        for _ in range(size):
            x, y = s.point(), s.point()
            subadditivity_at(f, x, y, rep)
    return _run_chunked("subadditivity", sampler, n_samples, body)


def subadditivity_at(f, x, y, rep: CheckReport) -> None:
    fx, fy, fxy = f.evaluate(x), f.evaluate(y), f.evaluate(x + y)
    slack = fx + fy - fxy
    sg = sign(slack)
    if sg < 0:
        rep.add_counterexample(x=x, y=y, lhs=fx + fy, rhs=fxy)
    elif sg == 0:
        rep.add_tight({"x": x, "y": y})


def check_symmetry(f: GroupFunction, sampler: HamelSampler, n_samples: int) -> CheckReport:
    def body(s, size, rep):
        for _ in range(size):
            symmetry_at(f, s.point(), rep)
    return _run_chunked("symmetry", sampler, n_samples, body)


def symmetry_at(f, x, rep: CheckReport) -> None:
    lhs = f.evaluate(x) + f.evaluate(BASE - x)
    if lhs != 1:
        rep.add_counterexample(x=x, lhs=lhs, rhs=Fraction(1))


def check_integers_zero(f: GroupFunction, z_range: Iterable[int]) -> CheckReport:
    rep = CheckReport("integers_zero")
    for z in z_range:
        rep.samples += 1
        v = f.evaluate(HamelNumber.from_rational(z))
        if v != 0:
            rep.add_counterexample(z=z, value=v)
    return rep


def check_periodicity(f: GroupFunction, sampler: HamelSampler, n_samples: int = 1000,
                      z_range: tuple[int, int] = (-5, 5)) -> CheckReport:
    def body(s, size, rep):
        for _ in range(size):
            x, z = s.point(), s.integer(*z_range)
            periodicity_at(f, x, z, rep)
    return _run_chunked("periodicity", sampler, n_samples, body)


def periodicity_at(f, x, z, rep: CheckReport) -> None:
    a, b = f.evaluate(x + z), f.evaluate(x)
    if a != b:
        rep.add_counterexample(x=x, z=z, lhs=a, rhs=b)


def check_nonnegativity(f: GroupFunction, sampler: HamelSampler, n_samples: int) -> CheckReport:
    """Flags negative values of f; reported alongside, not part of minimality."""
    def body(s, size, rep):
        for _ in range(size):
            x = s.point()
            v = f.evaluate(x)
            if sign(v) < 0:
                rep.add_counterexample(x=x, value=v)
    return _run_chunked("nonnegativity", sampler, n_samples, body)


def check_minimal(f: GroupFunction, sampler: HamelSampler, n_samples: int,
                  z_range: Iterable[int] = range(-5, 6)) -> list[CheckReport]:
    """The three conditions of the minimality theorem plus periodicity."""
    return [
        check_subadditivity(f, sampler, n_samples),
        check_symmetry(f, sampler, n_samples),
        check_integers_zero(f, z_range),
        check_periodicity(f, sampler, n_samples),
    ]


def verify_minimal_finite(F: FiniteGroupFunction) -> CheckReport:
    """Exhaustive minimality test on the cyclic group of order n."""
    n, v, bi = F.n, F.values, F.b_index
    rep = CheckReport("minimal_finite", samples=n * n + n + 1)
    if v[0] != 0:
        rep.add_counterexample(condition="zero", k=0, value=v[0])
    for j in range(n):
        vj = v[j]
        for k in range(n):
            lhs, rhs = vj + v[k], v[(j + k) % n]
            if lhs < rhs:
                rep.add_counterexample(condition="subadditivity", j=j, k=k, lhs=lhs, rhs=rhs)
            elif lhs == rhs:
                rep.n_tight += 1
    for k in range(n):
        s = v[k] + v[(bi - k) % n]
        if s != 1:
            rep.add_counterexample(condition="symmetry", k=k, lhs=s, rhs=Fraction(1))
    return rep
