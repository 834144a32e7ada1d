from __future__ import annotations

import random

import pytest

from envlab.laurent import ExpVec, LaurentPoly
from envlab.spaces import ProjectiveSpace


def random_exp(rng: random.Random, rank: int, max_exp: int = 3, max_y: int = 2) -> ExpVec:
    return ExpVec(
        tuple(rng.randint(-max_exp, max_exp) for _ in range(rank)),
        rng.randint(-max_y, max_y),
    )


def random_poly(
    rng: random.Random,
    rank: int,
    max_terms: int = 8,
    max_exp: int = 3,
    max_coeff: int = 5,
    nonzero: bool = False,
) -> LaurentPoly:
    n = rng.randint(1 if nonzero else 0, max_terms)
    terms: dict[ExpVec, int] = {}
    for _ in range(n):
        exp = random_exp(rng, rank, max_exp)
        terms[exp] = terms.get(exp, 0) + rng.randint(-max_coeff, max_coeff)
    poly = LaurentPoly(rank, terms)
    if nonzero and poly.is_zero():
        return LaurentPoly(rank, {random_exp(rng, rank, max_exp): 1})
    return poly


def random_weights(rng: random.Random, rank: int, size: int, max_exp: int = 3) -> tuple[ExpVec, ...]:
    out = []
    while len(out) < size:
        a = tuple(rng.randint(-max_exp, max_exp) for _ in range(rank))
        if any(a):
            out.append(ExpVec(a, 0))
    return tuple(out)


@pytest.fixture
def p2():
    """The worked projective plane: weights (0,0), (1,0), (0,1); chamber (1,2)."""
    space = ProjectiveSpace(2, (ExpVec((0, 0)), ExpVec((1, 0)), ExpVec((0, 1))))
    return space, (1, 2)


@pytest.fixture
def p1():
    """The projective line with weights (alpha, 0) and the positive chamber."""
    space = ProjectiveSpace(1, (ExpVec((1,)), ExpVec((0,))))
    return space, (1,)
