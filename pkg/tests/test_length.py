import random
from fractions import Fraction as F

import pytest

from stretchfactor import (
    InputError,
    compose,
    conj,
    cyclic_length,
    enumerate_signed_permutations,
    eta_length,
    identity,
    inner,
    length_exact,
    length_mc,
    markov_measure,
    parse_word,
    random_reduced,
    rational_measure,
    uniform_as_markov,
)
from conftest import random_composition


def w(text):
    return parse_word(text)


def test_identity_and_inner_have_unit_length(nielsen_map):
    assert length_exact(identity(2)).value == 1
    for text in ["a", "ab", "aBA", "bbA"]:
        assert length_exact(inner(2, w(text))).value == 1


def test_nielsen_length(nielsen_map):
    rep = length_exact(nielsen_map)
    assert rep.value == F(7, 6)
    assert rep.breakdown == {1: F(1, 3), -1: F(1, 3), 2: F(1, 4), -2: F(1, 4)}
    assert rep.value == sum(rep.breakdown.values())


def test_eta_length_examples(nielsen_map):
    assert eta_length(identity(2), rational_measure(2, w("aab"))).value == 3
    assert eta_length(nielsen_map, rational_measure(2, w("b"))).value == 2
    markov = markov_measure(uniform_as_markov(2))
    assert eta_length(nielsen_map, markov).value == length_exact(nielsen_map).value


def test_rational_current_oracle_random():
    rng = random.Random(42)
    checked = 0
    while checked < 30:
        phi = random_composition(2, rng.randrange(1, 4), rng)
        word = random_reduced(rng.randrange(1, 7), 2, rng)
        core = word
        from stretchfactor.words import cyclic_reduce, is_proper_power

        core = cyclic_reduce(word)[0]
        if not core or is_proper_power(core):
            continue
        mu = rational_measure(2, core)
        assert eta_length(phi, mu).value == cyclic_length(phi.apply(core))
        checked += 1


def test_conjugation_invariance_exact(nielsen_map):
    base = length_exact(nielsen_map).value
    rng = random.Random(5)
    for _ in range(8):
        v = random_reduced(rng.randrange(0, 5), 2, rng)
        assert length_exact(conj(nielsen_map, v)).value == base


def test_signed_permutation_invariance(nielsen_map):
    base = length_exact(nielsen_map).value
    for pi in enumerate_signed_permutations(2):
        assert length_exact(compose(pi, nielsen_map)).value == base


def test_length_at_least_one():
    rng = random.Random(11)
    for _ in range(10):
        phi = random_composition(2, rng.randrange(1, 4), rng)
        assert length_exact(phi).value >= 1


def test_mc_identity_close_to_one():
    est = length_mc(identity(2), 2000, 100, seed=3)
    assert 0.99 <= est.mean <= 1.0
    assert est.stderr >= 0


def test_mc_matches_exact(nielsen_map):
    est = length_mc(nielsen_map, 2000, 200, seed=41)
    exact = float(length_exact(nielsen_map).value)
    assert abs(est.mean - exact) <= 3 * est.stderr + 4 / est.n


def test_mc_deterministic(nielsen_map):
    a = length_mc(nielsen_map, 200, 10, seed=9)
    b = length_mc(nielsen_map, 200, 10, seed=9)
    assert a == b
    c = length_mc(nielsen_map, 200, 10, seed=10)
    assert a != c


def test_mc_preconditions(nielsen_map):
    with pytest.raises(InputError):
        length_mc(nielsen_map, 5, 10, seed=0)
    with pytest.raises(InputError):
        length_mc(nielsen_map, 100, 1, seed=0)
