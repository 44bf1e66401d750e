from fractions import Fraction as F

import pytest

from stretchfactor import (
    ComparableCylindersError,
    ForbiddenTransitionError,
    MarkovSpec,
    NotCyclicallyReducedError,
    NotStationaryError,
    NotStochasticError,
    ProperPowerError,
    consistency_check,
    criterion_check,
    current_length,
    current_pair_value,
    load_markov_spec,
    markov_measure,
    parse_word,
    rational_measure,
    uniform_as_markov,
    uniform_eval,
    uniform_measure,
)
from stretchfactor.measures import dump_markov_spec, frac_str
from stretchfactor.words import all_words, alphabet


def w(text):
    return parse_word(text)


def test_uniform_values():
    assert uniform_eval(2, w("a")) == F(1, 4)
    assert uniform_eval(2, w("ab")) == F(1, 12)
    assert uniform_eval(2, w("")) == 1
    mu = uniform_measure(2)
    assert mu.eval(w("")) == 1 and mu.mass == 1


def test_uniform_consistency_depth5():
    assert consistency_check(uniform_measure(2), 5)


def test_markov_uniform_matches_uniform_to_depth5():
    mu = markov_measure(uniform_as_markov(2))
    uni = uniform_measure(2)
    for n in range(0, 6):
        for v in all_words(n, 2):
            assert mu.eval(v) == uni.eval(v)


def test_markov_validation_errors():
    spec = uniform_as_markov(2)
    bad_p = dict(spec.initial)
    bad_p[1], bad_p[2] = F(1, 2), F(0)
    with pytest.raises(NotStationaryError):
        MarkovSpec(2, F(1), bad_p, spec.transitions).validate()
    bad_rows = {x: dict(r) for x, r in spec.transitions.items()}
    bad_rows[1][-1], bad_rows[1][2] = F(1, 3), F(0)
    with pytest.raises(ForbiddenTransitionError):
        MarkovSpec(2, F(1), spec.initial, bad_rows).validate()
    short_rows = {x: dict(r) for x, r in spec.transitions.items()}
    short_rows[1][2] = F(0)
    with pytest.raises(NotStochasticError):
        MarkovSpec(2, F(1), spec.initial, short_rows).validate()


def test_biased_stationary_markov_consistent():
    # Reversible chain from symmetric positive weights: stationarity for free.
    letters = alphabet(2)
    weight = {}
    for x in letters:
        for y in letters:
            if y == -x:
                weight[(x, y)] = F(0)
            else:
                weight[(x, y)] = F(2) if (x, y) in ((1, 2), (2, 1)) else F(1)
    w_tot = {x: sum(weight[(x, y)] for y in letters) for x in letters}
    total = sum(w_tot.values())
    spec = MarkovSpec(
        rank=2,
        mass=F(1),
        initial={x: w_tot[x] / total for x in letters},
        transitions={x: {y: weight[(x, y)] / w_tot[x] for y in letters} for x in letters},
    )
    spec.validate()
    assert consistency_check(markov_measure(spec), 4)


def test_rational_measure_examples():
    mu = rational_measure(2, w("ab"))
    assert mu.eval(w("a")) == 1
    assert mu.mass == 2
    assert current_length(mu) == 2
    mu = rational_measure(2, w("aab"))
    assert mu.eval(w("a")) == 2
    assert current_length(mu) == 3
    with pytest.raises(ProperPowerError):
        rational_measure(2, w("abab"))
    with pytest.raises(NotCyclicallyReducedError):
        rational_measure(2, w("abA"))


def test_rational_consistency():
    for text in ["ab", "aab", "abAB", "aabAB"]:
        assert consistency_check(rational_measure(2, w(text)), len(text))


def test_current_pair_value_examples():
    mu = uniform_measure(2)
    assert current_pair_value(mu, w("A"), w("a")) == F(1, 12)
    assert current_pair_value(mu, w("aa"), w("ab")) == F(1, 12)
    eta_ab = rational_measure(2, w("ab"))
    assert current_pair_value(eta_ab, w("A"), w("a")) == 0
    with pytest.raises(ComparableCylindersError):
        current_pair_value(mu, w("a"), w("ab"))


def test_current_length_equals_mass():
    for mu in [
        uniform_measure(2),
        markov_measure(uniform_as_markov(2)),
        rational_measure(2, w("aabAB")),
    ]:
        assert current_length(mu) == mu.mass


def test_corrupted_table_detected():
    mu = uniform_measure(2)
    broken = type(mu)(
        rank=2,
        kind="uniform",
        mass=F(1),
        _eval=lambda v: F(1, 5) if tuple(v) == (1,) else uniform_eval(2, v),
        label="broken",
    )
    assert not consistency_check(broken, 2)


def test_criterion_uniform_passes():
    report = criterion_check(uniform_as_markov(2))
    assert report.passes
    for a in alphabet(2):
        assert report.c1[a] == report.c2[a] == F(1, 3)
        assert report.b[a] == F(1, 3)


def _cycle_mix_spec():
    """Doubly stochastic, stationary-uniform, fails C1(a^-1) >= C2(a)."""
    letters = alphabet(2)
    nxt = {1: 2, 2: -1, -1: -2, -2: 1}  # a -> b -> A -> B -> a
    rows = {}
    for x in letters:
        rows[x] = {}
        for y in letters:
            if y == -x:
                rows[x][y] = F(0)
                continue
            cycle = F(1, 2) if y in (nxt[x], x) else F(0)
            unif = F(1, 3)
            rows[x][y] = F(3, 4) * cycle + F(1, 4) * unif
    return MarkovSpec(
        rank=2,
        mass=F(1),
        initial={x: F(1, 4) for x in letters},
        transitions=rows,
    )


def test_criterion_failure_with_witness():
    spec = _cycle_mix_spec()
    spec.validate()  # genuinely stationary
    report = criterion_check(spec)
    assert not report.passes
    assert report.witness is not None
    a = report.witness
    assert report.c1[-a] < report.c2[a]
    # stationarity forces every per-letter ratio to stay <= 1
    assert all(q <= 1 for q in report.c2.values())


def test_criterion_ratio_above_one_needs_nonstationary_data():
    # A self-reinforcing letter pushes p(a)P(a,b)/p(b) above 1, which is
    # impossible for stationary specs; checked on unvalidated data.
    letters = alphabet(2)
    p = {1: F(3, 4), 2: F(1, 12), -1: F(1, 12), -2: F(1, 12)}
    rows = {
        x: {y: (F(0) if y == -x else F(1, 3)) for y in letters} for x in letters
    }
    spec = MarkovSpec(rank=2, mass=F(1), initial=p, transitions=rows)
    with pytest.raises(NotStationaryError):
        spec.validate()
    report = criterion_check(spec, validate=False)
    assert not report.passes
    assert report.witness == 1
    assert report.c2[1] == F(3, 4) * F(1, 3) / F(1, 12) == 3
    assert report.reason == "C2(a) > 1"


def test_markov_spec_file_round_trip(tmp_path):
    spec = uniform_as_markov(2)
    text = dump_markov_spec(spec)
    back = load_markov_spec(text)
    assert back == spec
    assert frac_str(back.mass) == "1/1"
