"""Gaussian-rational scalars and exact linear algebra."""

import random
from fractions import Fraction

import numpy as np

from balmap.exact import (CRat, I, ONE, ZERO, exact_nullspace, exact_rank,
                          exact_solve, ipow)
from oracles import bareiss_rank


def rand_crat(rng):
    return CRat(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                Fraction(rng.randint(-4, 4), rng.randint(1, 3)))


def test_field_axioms_random():
    rng = random.Random(0)
    for _ in range(200):
        a, b, c = (rand_crat(rng) for _ in range(3))
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        if b:
            assert (a / b) * b == a
        assert a * a.conjugate() == CRat(a.re * a.re + a.im * a.im)


def test_ipow_cycle():
    assert ipow(0) == ONE and ipow(1) == I
    assert ipow(2) == CRat(-1) and ipow(3) == CRat(0, -1)
    assert ipow(9) == I and ipow(-1) == CRat(0, -1)


def test_mixed_arithmetic_degrades_to_complex():
    a = CRat(Fraction(1, 2), 1)
    assert a + 0.5 == complex(1.0, 1.0)
    assert (a * 2j) == complex(a) * 2j


def test_exact_rank_against_integer_oracle():
    rng = random.Random(1)
    for _ in range(30):
        nr, nc = rng.randint(1, 6), rng.randint(1, 6)
        rows = [[rand_crat(rng) if rng.random() < 0.7 else ZERO
                 for _ in range(nc)] for _ in range(nr)]
        assert exact_rank(rows) == bareiss_rank(rows)


def test_exact_solve_and_nullspace():
    rng = random.Random(2)
    for _ in range(30):
        nr, nc = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[rand_crat(rng) if rng.random() < 0.7 else ZERO
                 for _ in range(nc)] for _ in range(nr)]
        x0 = [rand_crat(rng) for _ in range(nc)]
        rhs = [sum((rows[i][j] * x0[j] for j in range(nc)), ZERO)
               for i in range(nr)]
        x = exact_solve(rows, rhs)
        assert x is not None
        back = [sum((rows[i][j] * x[j] for j in range(nc)), ZERO)
                for i in range(nr)]
        assert back == rhs
        null = exact_nullspace(rows)
        assert len(null) == nc - exact_rank(rows)
        for v in null:
            img = [sum((rows[i][j] * v[j] for j in range(nc)), ZERO)
                   for i in range(nr)]
            assert all(not c for c in img)


def test_exact_solve_reports_inconsistency():
    rows = [[ONE, ONE], [ONE, ONE]]
    assert exact_solve(rows, [ONE, CRat(2)]) is None
