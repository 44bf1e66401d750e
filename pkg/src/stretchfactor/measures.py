"""Shift-invariant cylinder measures on the boundary and their currents.

A frequency measure is represented by an exact-rational evaluator on
cylinder labels; that determines the measure completely.  Three families
are provided: the uniform measure, Markov measures given by a stationary
letter chain, and the counting measures of rational currents.  The
correspondence with currents is used through one formula: the current
value of a product of disjoint ray-cylinders Cyl(v) x Cyl(w) equals the
measure of Cyl(v^-1 w).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import (
    ComparableCylindersError,
    ForbiddenTransitionError,
    InputError,
    NotCyclicallyReducedError,
    NotStationaryError,
    NotStochasticError,
    ProperPowerError,
)
from .words import (
    Word,
    alphabet,
    all_words,
    comparable,
    concat,
    extension_letters,
    format_letter,
    format_word,
    inverse,
    is_cyclically_reduced,
    is_proper_power,
    letter_key,
    occurrences_in_cyclic,
    parse_letter,
    parse_word,
    validate_rank,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True)
class FrequencyMeasure:
    """Exact nonnegative cylinder evaluator, shift invariant by construction."""

    rank: int
    kind: str  # uniform | markov | rational-word
    mass: Fraction
    _eval: Callable[[Word], Fraction]
    label: str = ""

    def eval(self, v: Sequence[int]) -> Fraction:
        w = Word(v)
        validate_rank(w, self.rank)
        if not w:
            return self.mass
        return self._eval(w)

    def __call__(self, v: Sequence[int]) -> Fraction:
        return self.eval(v)


def uniform_eval(k: int, v: Sequence[int]) -> Fraction:
    """1 / (2k (2k-1)^(|v|-1)); the empty cylinder label gets mass 1."""
    n = len(v)
    if n == 0:
        return ONE
    return Fraction(1, 2 * k * (2 * k - 1) ** (n - 1))


def uniform_measure(k: int) -> FrequencyMeasure:
    alphabet(k)  # rank validation
    return FrequencyMeasure(
        rank=k,
        kind="uniform",
        mass=ONE,
        _eval=lambda w: uniform_eval(k, w),
        label="uniform",
    )


# -- Markov measures -------------------------------------------------------


@dataclass(frozen=True)
class MarkovSpec:
    """Stationary letter chain: mass, initial p on letters, transitions P.

    P(x, x^-1) must vanish (images of reduced rays stay reduced) and p must
    be stationary, which is exactly shift invariance of the measure.
    """

    rank: int
    mass: Fraction
    initial: dict[int, Fraction]
    transitions: dict[int, dict[int, Fraction]]

    def validate(self) -> None:
        letters = alphabet(self.rank)
        if self.mass <= 0:
            raise NotStochasticError("mass must be positive")
        if set(self.initial) != set(letters):
            raise InputError("initial distribution must cover the alphabet")
        if any(p < 0 for p in self.initial.values()):
            raise NotStochasticError("initial probabilities must be nonnegative")
        if sum(self.initial.values()) != 1:
            raise NotStochasticError("initial probabilities must sum to 1")
        for x in letters:
            row = self.transitions.get(x)
            if row is None or set(row) != set(letters):
                raise InputError(f"transition row of {format_letter(x)} must cover the alphabet")
            if row[-x] != 0:
                raise ForbiddenTransitionError(
                    f"P({format_letter(x)}, {format_letter(-x)}) must be 0"
                )
            if any(q < 0 for q in row.values()):
                raise NotStochasticError("transition probabilities must be nonnegative")
            if sum(row.values()) != 1:
                raise NotStochasticError(
                    f"transition row of {format_letter(x)} must sum to 1"
                )
        for y in letters:
            inflow = sum(self.initial[x] * self.transitions[x][y] for x in letters)
            if inflow != self.initial[y]:
                raise NotStationaryError(
                    f"initial distribution is not stationary at {format_letter(y)}"
                )


def markov_measure(spec: MarkovSpec, *, validate: bool = True) -> FrequencyMeasure:
    if validate:
        spec.validate()

    def evaluate(w: Word) -> Fraction:
        q = spec.mass * spec.initial[w[0]]
        for x, y in zip(w, w[1:]):
            q *= spec.transitions[x][y]
        return q

    return FrequencyMeasure(
        rank=spec.rank, kind="markov", mass=spec.mass, _eval=evaluate, label="markov"
    )


def uniform_as_markov(k: int) -> MarkovSpec:
    letters = alphabet(k)
    p = {x: Fraction(1, 2 * k) for x in letters}
    rows = {
        x: {y: (ZERO if y == -x else Fraction(1, 2 * k - 1)) for y in letters}
        for x in letters
    }
    return MarkovSpec(rank=k, mass=ONE, initial=p, transitions=rows)


def load_markov_spec(text: str) -> MarkovSpec:
    """Parse the JSON document {rank, mass, p, P} with 'num/den' rationals."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"markov spec is not valid JSON: {e}") from e
    try:
        rank = int(doc["rank"])
        mass = parse_frac(str(doc["mass"]))
        p = {parse_letter(x): parse_frac(str(q)) for x, q in doc["p"].items()}
        rows = {
            parse_letter(x): {parse_letter(y): parse_frac(str(q)) for y, q in row.items()}
            for x, row in doc["P"].items()
        }
    except (KeyError, TypeError) as e:
        raise InputError(f"markov spec is missing field {e}") from e
    return MarkovSpec(rank=rank, mass=mass, initial=p, transitions=rows)


def dump_markov_spec(spec: MarkovSpec) -> str:
    doc = {
        "rank": spec.rank,
        "mass": frac_str(spec.mass),
        "p": {format_letter(x): frac_str(q) for x, q in sorted(spec.initial.items())},
        "P": {
            format_letter(x): {
                format_letter(y): frac_str(q) for y, q in sorted(row.items())
            }
            for x, row in sorted(spec.transitions.items())
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True)


# -- rational currents ------------------------------------------------------


def rational_measure(k: int, w: Sequence[int]) -> FrequencyMeasure:
    """Counting measure of the current carried by the conjugacy class of w."""
    w = Word(w)
    validate_rank(w, k)
    if not w:
        raise InputError("rational currents need a nonempty word")
    if not is_cyclically_reduced(w):
        raise NotCyclicallyReducedError(f"{format_word(w)!r} is not cyclically reduced")
    if is_proper_power(w):
        raise ProperPowerError(
            f"{format_word(w)!r} is a proper power; its current duplicates the root's"
        )
    return FrequencyMeasure(
        rank=k,
        kind="rational-word",
        mass=Fraction(len(w)),
        _eval=lambda u: Fraction(occurrences_in_cyclic(u, w)),
        label=f"rational:{format_word(w)}",
    )


# -- current-side values -----------------------------------------------------


def current_pair_value(mu: FrequencyMeasure, v: Sequence[int], w: Sequence[int]) -> Fraction:
    """Current value of Cyl(v) x Cyl(w) for non-comparable labels: mu(v^-1 w)."""
    v, w = Word(v), Word(w)
    if not v or not w:
        raise InputError("cylinder labels must be nonempty")
    if comparable(v, w):
        raise ComparableCylindersError(
            f"cylinders {format_word(v)!r} and {format_word(w)!r} are nested"
        )
    return mu.eval(concat(inverse(v), w))


def current_length(mu: FrequencyMeasure) -> Fraction:
    """Sum of the single-letter cylinder values; equals the total mass."""
    return sum((mu.eval(Word((x,))) for x in alphabet(mu.rank)), ZERO)


def consistency_check(mu: FrequencyMeasure, depth: int) -> bool:
    """Exact additivity and shift invariance on all words up to `depth`."""
    if depth < 1:
        raise InputError("depth must be at least 1")
    k = mu.rank
    for n in range(0, depth):
        for v in all_words(n, k):
            total = mu.eval(v)
            children = sum(
                (mu.eval(Word(tuple(v) + (c,))) for c in extension_letters(v, k)), ZERO
            )
            if children != total:
                return False
            shifted = sum(
                (mu.eval(Word((c,) + tuple(v))) for c in alphabet(k) if not v or c != -v[0]),
                ZERO,
            )
            if shifted != total:
                return False
    return True


# -- compactness criterion ---------------------------------------------------


@dataclass(frozen=True)
class CriterionReport:
    """Per-letter translation constants and the compactness verdict."""

    rank: int
    c1: dict[int, Fraction]
    c2: dict[int, Fraction]
    b: dict[int, Fraction]
    passes: bool
    witness: Optional[int] = None
    reason: str = ""

    def as_dict(self) -> dict:
        def by_letter(d: dict[int, Fraction]) -> dict[str, str]:
            items = sorted(d.items(), key=lambda kv: letter_key(kv[0]))
            return {format_letter(x): frac_str(q) for x, q in items}

        out = {
            "passes": self.passes,
            "C1": by_letter(self.c1),
            "C2": by_letter(self.c2),
            "b": by_letter(self.b),
        }
        if self.witness is not None:
            out["witness"] = format_letter(self.witness)
            out["reason"] = self.reason
        return out


def criterion_check(spec: MarkovSpec, *, validate: bool = True) -> CriterionReport:
    """Check the per-letter translation bounds that give length compactness.

    C1(a) and C2(a) are the extreme ratios p(a)P(a,b)/p(b) over b != a^-1;
    the criterion passes iff every C1(a) is positive, every C2(a) is at
    most 1 and C1(a^-1) >= C2(a).  Single-letter powers make these
    per-letter conditions equivalent to the word-level sup/inf conditions.
    b(a) = min(C1(a), 1/C2(a^-1)) is the certified one-letter translation
    constant.
    """
    if validate:
        spec.validate()
    letters = alphabet(spec.rank)
    if any(spec.initial[x] <= 0 for x in letters):
        raise InputError("criterion requires strictly positive letter probabilities")
    c1: dict[int, Fraction] = {}
    c2: dict[int, Fraction] = {}
    for a in letters:
        ratios = [
            spec.initial[a] * spec.transitions[a][b] / spec.initial[b]
            for b in letters
            if b != -a
        ]
        c1[a] = min(ratios)
        c2[a] = max(ratios)
    b = {
        a: min(c1[a], 1 / c2[-a]) if c2[-a] > 0 else c1[a]
        for a in letters
    }
    witness: Optional[int] = None
    reason = ""
    for a in letters:
        if c1[a] <= 0:
            witness, reason = a, f"C1({format_letter(a)}) = 0"
            break
        if c2[a] > 1:
            witness, reason = a, f"C2({format_letter(a)}) > 1"
            break
        if c1[-a] < c2[a]:
            witness, reason = a, (
                f"C1({format_letter(-a)}) < C2({format_letter(a)})"
            )
            break
    return CriterionReport(
        rank=spec.rank, c1=c1, c2=c2, b=b, passes=witness is None,
        witness=witness, reason=reason,
    )


def parse_measure_selector(
    k: int, text: str, *, read_file=None, reduce: bool = False
) -> FrequencyMeasure:
    """Resolve 'uniform', 'markov:<file>' or 'rational:<word>'."""
    if text == "uniform":
        return uniform_measure(k)
    if text.startswith("markov:"):
        path = text.split(":", 1)[1]
        reader = read_file or (lambda p: open(p, "r", encoding="utf-8").read())
        spec = load_markov_spec(reader(path))
        if spec.rank != k:
            raise InputError(f"markov spec has rank {spec.rank}, expected {k}")
        return markov_measure(spec)
    if text.startswith("rational:"):
        return rational_measure(k, parse_word(text.split(":", 1)[1], reduce=reduce))
    raise InputError(f"unknown measure selector {text!r}")
