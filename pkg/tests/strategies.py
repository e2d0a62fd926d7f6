"""Hypothesis strategies shared by the test modules."""

import random

from hypothesis import strategies as st

from opetopic.foundations import Permutation
from opetopic.samples import random_gen_multicat


def permutations(size):
    return st.permutations(list(range(size))).map(lambda p: Permutation(p, zero_based=True))


@st.composite
def perm_pairs(draw, max_size=6):
    k = draw(st.integers(0, max_size))
    return draw(permutations(k)), draw(permutations(k))


@st.composite
def perm_triples(draw, max_size=6):
    k = draw(st.integers(0, max_size))
    return draw(permutations(k)), draw(permutations(k)), draw(permutations(k))


seeds = st.integers(0, 10_000)


def small_gen_multicat(seed, **kwargs):
    """Deterministic random generalised multicategory for a seed."""
    return random_gen_multicat(random.Random(seed), **kwargs)
