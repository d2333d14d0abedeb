import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from shiftflow import LocallyConstantFn, paper_example, validate_shift
from shiftflow.errors import ShiftFlowError

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FULL2 = validate_shift([[1, 1], [1, 1]])
GOLDEN = validate_shift([[1, 1], [1, 0]])
FULL3 = validate_shift([[1, 1, 1], [1, 1, 1], [1, 1, 1]])


@pytest.fixture
def full2():
    return FULL2


@pytest.fixture
def golden():
    return GOLDEN


@pytest.fixture
def full3():
    return FULL3


@pytest.fixture
def pair():
    return paper_example()


def random_shift(rng: random.Random, max_n=4):
    """A random matrix satisfying irreducibility and not a permutation."""
    while True:
        n = rng.randint(2, max_n)
        m = [[int(rng.random() < 0.55) for _ in range(n)] for _ in range(n)]
        try:
            return validate_shift(m)
        except ShiftFlowError:
            continue


def random_fn(rng: random.Random, S, depth=None, lo=-2, hi=3):
    depth = depth or rng.randint(1, 2)
    return LocallyConstantFn(S, depth, {w: rng.randint(lo, hi) for w in S.words(depth)})


def random_rational_fn(rng: random.Random, S, depth=None):
    depth = depth or rng.randint(1, 2)
    return LocallyConstantFn(S, depth, {w: Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                                        for w in S.words(depth)})


@st.composite
def shifts(draw, max_n=4):
    return random_shift(random.Random(draw(st.integers(0, 10 ** 9))), max_n)


@st.composite
def potentials(draw, S=None, max_depth=2, lo=-2, hi=3):
    S = S if S is not None else draw(st.sampled_from([FULL2, GOLDEN]))
    d = draw(st.integers(1, max_depth))
    vals = draw(st.lists(st.integers(lo, hi), min_size=len(S.words(d)), max_size=len(S.words(d))))
    return LocallyConstantFn(S, d, dict(zip(S.words(d), vals)))
