"""Constructive density of the graph of the dense extreme function.

Given a target ``(x*, y*)`` and a tolerance, :func:`hit_target` produces a
point x of the Hamel subspace with ``pi(x) == y*`` exactly and the real
value of x within the tolerance of ``x*``.  Choosing ``lambda_b = y*`` pins
the function value; a rational multiple of one atom then moves x anywhere
on the real line without touching ``lambda_b``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_numbers import (
    DEFAULT_REGISTRY,
    AtomRegistry,
    HamelNumber,
    Interval,
    approx,
    format_rat,
    rat,
)
from .group_functions import pi_dense


@dataclass(frozen=True)
class GraphHit:
    x: HamelNumber
    pi_value: Fraction
    x_interval: Interval
    target: tuple
    eps: Fraction

    def check(self) -> bool:
        x_star, y_star = self.target
        iv = self.x_interval
        return (self.pi_value == y_star
                and pi_dense(self.x) == self.pi_value
                and iv.width <= self.eps
                and abs(iv.midpoint - x_star) + iv.width / 2 < self.eps)

    def csv_row(self) -> list[str]:
        iv = self.x_interval
        return [format_rat(iv.lo), format_rat(iv.hi), repr(float(iv.midpoint)),
                str(self.pi_value.numerator), str(self.pi_value.denominator),
                format_rat(self.target[0]), format_rat(self.target[1])]


CSV_HEADER = ["x_lo", "x_hi", "x_float", "pi_num", "pi_den", "target_x", "target_y"]


def hit_target(x_star, y_star, eps, atom: str = "a1",
               registry: AtomRegistry = DEFAULT_REGISTRY) -> GraphHit:
    x_star, y_star, eps = Fraction(x_star), Fraction(y_star), Fraction(eps)
    if not 0 <= y_star <= 1:
        raise ValueError("target value must lie in [0, 1]")
    if eps <= 0:
        raise ValueError("eps must be positive")
    mu = y_star if y_star < 1 else Fraction(1)  # mu = 1 is the odd-integer branch
    residual = x_star - mu / 2

    bits = eps.denominator.bit_length() - eps.numerator.bit_length() + 4
    while True:
        unit = Fraction(1, 1 << bits)
        if residual == 0:
            lam = Fraction(0)
        else:
            alpha = registry.enclose(atom, unit).midpoint
            if alpha == 0:
                bits += 8
                continue
            lam = round(residual / alpha / unit) * unit
        x = HamelNumber(mu, {atom: lam}, registry)
        iv = approx(x, eps / 4)
        hit = GraphHit(x, pi_dense(x), iv, (x_star, y_star), eps)
        if abs(iv.midpoint - x_star) + iv.width / 2 < eps / 2:
            assert hit.check()
            return hit
        bits += 8


def graph_cloud(x_grid: Sequence, y_grid: Sequence, eps, atom: str = "a1",
                registry: AtomRegistry = DEFAULT_REGISTRY) -> list[GraphHit]:
    if not x_grid or not y_grid:
        raise ValueError("grids must be nonempty")
    return [hit_target(xs, ys, eps, atom, registry) for xs in x_grid for ys in y_grid]


def discontinuity_witness(x0, k: int, atom: str = "a1",
                          registry: AtomRegistry = DEFAULT_REGISTRY) -> tuple[GraphHit, Fraction]:
    """Point within 2^-k of the rational x0 whose value is >= 1/2 away from pi(x0)."""
    x0 = Fraction(x0)
    base_value = pi_dense(HamelNumber.from_rational(x0))
    y_star = Fraction(0) if base_value >= Fraction(1, 2) else Fraction(1)
    hit = hit_target(x0, y_star, Fraction(1, 1 << k), atom, registry)
    return hit, abs(hit.pi_value - base_value)


def grid_from_range(spec: str) -> list[Fraction]:
    """Parse ``a:b:step`` (inclusive of b when it lands on the grid)."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected a:b:step, got {spec!r}")
    a, b, step = (rat(p) for p in parts)
    if step <= 0 or b < a:
        raise ValueError(f"bad range {spec!r}")
    out, v = [], a
    while v <= b:
        out.append(v)
        v += step
    return out


def write_csv(hits: Sequence[GraphHit], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for h in hits:
        w.writerow(h.csv_row())
