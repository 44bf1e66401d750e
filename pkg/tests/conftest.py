import random

import pytest

from stretchfactor import Word, make_automorphism


def nielsen():
    return make_automorphism(
        2, {1: Word((1,)), 2: Word((2, 1))}, {1: Word((1,)), 2: Word((2, -1))}
    )


@pytest.fixture
def nielsen_map():
    return nielsen()


def random_composition(rank, n_factors, rng: random.Random):
    """A random composition of second-kind and permutation generators."""
    from stretchfactor import compose, enumerate_second_kind, enumerate_signed_permutations

    gens = [t.automorphism() for t in enumerate_second_kind(rank)]
    gens += enumerate_signed_permutations(rank)
    phi = gens[rng.randrange(len(gens))]
    for _ in range(n_factors - 1):
        phi = compose(gens[rng.randrange(len(gens))], phi)
    return phi
