import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from kfchiral.poly import Poly, offdiag, param, subsetvar, symoffdiag

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])


def to_sympy(p: Poly):
    """Independent route: rebuild p as a sympy expression."""
    expr = sympy.Integer(0)
    for m, c in p.items():
        t = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
        for v, e in m:
            t = t * sympy.Symbol(str(v)) ** e
        expr += t
    return expr


def vars_for(kind: str, n: int):
    if kind == "param":
        return [param(i) for i in range(1, n + 1)]
    if kind == "offdiag":
        return [offdiag(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    if kind == "symoffdiag":
        return [symoffdiag(i, j) for i, j in itertools.combinations(range(1, n + 1), 2)]
    if kind == "subset":
        k = 2 if n >= 2 else 1
        return [subsetvar(J) for J in itertools.combinations(range(1, n + 1), k)]
    raise ValueError(kind)


def random_poly(rng: random.Random, variables, nterms=4, maxdeg=3, rational=False) -> Poly:
    terms = {}
    for _ in range(nterms):
        d = {}
        for _ in range(rng.randint(0, maxdeg)):
            v = rng.choice(variables)
            d[v] = d.get(v, 0) + 1
        m = tuple(sorted(d.items()))
        c = rng.randint(-5, 5)
        if rational:
            c = Fraction(c, rng.randint(1, 4))
        terms[m] = terms.get(m, 0) + c
    return Poly(terms)


SMALL_VARS = [param(1), param(2), param(3), offdiag(1, 2), offdiag(2, 1), subsetvar((1, 2))]


@st.composite
def polys(draw, variables=SMALL_VARS, max_terms=4, max_deg=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        vs = draw(st.lists(st.sampled_from(variables), max_size=max_deg))
        d = {}
        for v in vs:
            d[v] = d.get(v, 0) + 1
        c = draw(st.fractions(min_value=-6, max_value=6, max_denominator=4))
        m = tuple(sorted(d.items()))
        terms[m] = terms.get(m, 0) + c
    return Poly(terms)


@st.composite
def points(draw, variables=SMALL_VARS):
    return {v: draw(st.fractions(min_value=-5, max_value=5, max_denominator=3)) for v in variables}


@pytest.fixture
def rng():
    return random.Random(12345)
