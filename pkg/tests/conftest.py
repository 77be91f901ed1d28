from fractions import Fraction

import pytest
from hypothesis import strategies as st

from densepi.exact_numbers import DEFAULT_REGISTRY, HamelNumber

ATOMS = ("a1", "a2")

rationals = st.builds(Fraction, st.integers(-60, 60), st.integers(1, 24))


@st.composite
def hamel_numbers(draw, atoms=ATOMS):
    coeffs = draw(st.dictionaries(st.sampled_from(atoms), rationals, max_size=len(atoms)))
    return HamelNumber(draw(rationals), coeffs, DEFAULT_REGISTRY)


@pytest.fixture
def a1():
    return HamelNumber.atom("a1")


@pytest.fixture
def a2():
    return HamelNumber.atom("a2")


def hn(q):
    """Rational q as a HamelNumber."""
    return HamelNumber.from_rational(Fraction(q))


def on_b(lb):
    """lb * b."""
    return HamelNumber(Fraction(lb))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
