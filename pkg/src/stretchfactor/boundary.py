"""Exact preimages of boundary cylinders under an automorphism.

The engine computes, for an automorphism phi and a cylinder Cyl(u), the
finite prefix-free family of cylinders whose union is exactly
{rays xi : phi(xi) starts with u}.  Everything else (pushforward current
values, exact lengths, recentering) reduces to these partitions plus
exact rational arithmetic.

Three facts drive the computation:

* Sound frontier test.  Let M, M' be the letter-image length maxima of
  phi and its inverse and fix a certified floor |phi(v)| >= floor(|v|).
  If L satisfies floor(L) >= M + 1, and every extension of w to length L
  has its image starting with the letter y, then so does every deeper
  word image (one more letter cancels at most M, leaving at least one
  letter of a y-prefixed image) and hence every boundary ray image.  So
  a single post-order sweep of the depth-L tree yields exact depth-1
  preimage partitions: maximal subtrees whose frontier images agree.
  The assigned pieces are sound, and they cover the whole boundary, so
  they equal the true preimages.

* Translation identity.  Cyl(u) = u * (boundary minus Cyl(l)) for
  l = last(u)^-1, hence
  phi^-1(Cyl u) = phi^-1(u) * disjoint-union of phi^-1(Cyl z), z != l.
  Long targets therefore reduce to depth-1 partitions via exact
  word-by-cylinder translation.

* Compositionality.  (phi o psi)^-1(Cyl u) is the disjoint union of
  psi^-1(Cyl w) over the pieces w of phi^-1(Cyl u), so partitions of a
  composition assemble from the partitions of its factors.  Inner
  automorphisms and generator expressions stay cheap this way even when
  their one-shot Lipschitz constants are large.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .automorphisms import Automorphism, compose, conj, inner, is_simple
from .errors import InputError, ResourceLimitError
from .measures import FrequencyMeasure, uniform_eval, uniform_measure
from .words import (
    EMPTY,
    Word,
    alphabet,
    all_words,
    concat,
    extension_letters,
    format_word,
    inverse,
    is_prefix,
    parse_word,
    word_key,
)

DEFAULT_BUDGET = 10**7
# Above this many frontier leaves, try rewriting an atom as inner * perm
# before brute-forcing the tree.
_REWRITE_LEAVES = 30_000

ZERO = Fraction(0)
HALF = Fraction(1, 2)


class Budget:
    """Node counter shared across one public computation; never approximate."""

    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.spent = 0

    def spend(self, n: int = 1) -> None:
        self.spent += n
        if self.spent > self.limit:
            raise ResourceLimitError(
                f"node budget exhausted ({self.spent} > {self.limit})",
                spent=self.spent,
                limit=self.limit,
            )

    def require(self, n: int) -> None:
        if self.spent + n > self.limit:
            raise ResourceLimitError(
                f"computation needs about {n} more nodes "
                f"({self.spent} spent, limit {self.limit})",
                spent=self.spent,
                limit=self.limit,
            )


@dataclass(frozen=True)
class CylinderPartition:
    """Canonical prefix-free family of nonempty cylinder labels."""

    rank: int
    words: tuple[Word, ...]

    @classmethod
    def from_words(cls, rank: int, words: Iterable[Sequence[int]]) -> "CylinderPartition":
        return cls(rank, canonical_words(rank, words))

    def contains_cylinder(self, w: Sequence[int]) -> bool:
        # Canonical families have no complete sibling sets, so Cyl(w) lies in
        # the union iff some member is a prefix of w.
        return any(is_prefix(p, w) for p in self.words)

    def __iter__(self):
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)


def canonical_words(rank: int, words: Iterable[Sequence[int]]) -> tuple[Word, ...]:
    """Sort, check pairwise disjointness, coalesce complete sibling families."""
    root: dict = {}
    for w in words:
        if not w:
            raise InputError("partition labels must be nonempty")
        node = root
        for i, c in enumerate(w):
            if i == len(w) - 1:
                if c in node:
                    raise InputError(
                        f"overlapping cylinders: {format_word(w)!r} collides"
                    )
                node[c] = None
            else:
                nxt = node.get(c, _MISSING)
                if nxt is None:
                    raise InputError(
                        f"overlapping cylinders at {format_word(w)!r}"
                    )
                if nxt is _MISSING:
                    node[c] = nxt = {}
                node = nxt
    if not root:
        return ()
    if _collapse(root, rank, 0):
        raise InputError("partition coalesces to the full boundary")
    out: list[Word] = []
    _collect(root, (), out)
    out.sort(key=word_key)
    return tuple(out)


_MISSING = object()


def _collapse(node: dict, rank: int, depth: int) -> bool:
    complete = True
    for c in list(node):
        child = node[c]
        if child is not None:
            if _collapse(child, rank, depth + 1):
                node[c] = None
            else:
                complete = False
    needed = 2 * rank if depth == 0 else 2 * rank - 1
    return complete and len(node) == needed


def _collect(node: dict, prefix: tuple, out: list[Word]) -> None:
    for c, child in node.items():
        if child is None:
            out.append(Word(prefix + (c,)))
        else:
            _collect(child, prefix + (c,), out)


def covers_boundary(rank: int, words: Iterable[Sequence[int]]) -> bool:
    """True iff the disjoint cylinders exactly cover the whole boundary."""
    root: dict = {}
    for w in words:
        node = root
        for i, c in enumerate(w):
            if i == len(w) - 1:
                if c in node:
                    return False
                node[c] = None
            else:
                nxt = node.get(c, _MISSING)
                if nxt is None:
                    return False
                if nxt is _MISSING:
                    node[c] = nxt = {}
                node = nxt
    return bool(root) and _collapse(root, rank, 0)


# -- exact translation of cylinder unions ---------------------------------


def translate_cylinder(f: Sequence[int], v: Sequence[int], rank: int) -> list[Word]:
    """The set f * Cyl(v) as disjoint cylinders.

    A single cylinder Cyl(reduce(f v)) unless v is a prefix of f^-1, in
    which case Cyl(v) splits into children first.  Accepts the empty v
    (the whole boundary).
    """
    fi = inverse(f)
    out: list[Word] = []
    stack = [Word(v)]
    while stack:
        u = stack.pop()
        if is_prefix(u, fi):
            base = tuple(u)
            for c in extension_letters(u, rank):
                stack.append(Word(base + (c,)))
        else:
            out.append(concat(f, u))
    return out


def translate_union(
    f: Sequence[int], words: Iterable[Sequence[int]], rank: int
) -> tuple[Word, ...]:
    """Canonical form of f * (disjoint union of cylinders)."""
    pieces: list[Word] = []
    for w in words:
        pieces.extend(translate_cylinder(f, w, rank))
    return canonical_words(rank, pieces)


# -- partition cache -------------------------------------------------------


class PartitionCache:
    """Exact partition store keyed by canonical map text plus target label."""

    def __init__(self):
        self.families: dict[str, dict[int, CylinderPartition]] = {}
        self.partitions: dict[tuple[str, Word], CylinderPartition] = {}

    def save(self, directory: str) -> None:
        doc = {
            "partitions": {
                f"{key}|{format_word(u)}": [format_word(w) for w in part.words]
                for (key, u), part in sorted(
                    self.partitions.items(), key=lambda kv: (kv[0][0], word_key(kv[0][1]))
                )
            }
        }
        os.makedirs(directory, exist_ok=True)
        path = os.path.join(directory, "partitions.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)

    def load(self, directory: str, rank: int) -> None:
        path = os.path.join(directory, "partitions.json")
        if not os.path.exists(path):
            return
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        for label, ws in doc.get("partitions", {}).items():
            key, _, u = label.rpartition("|")
            self.partitions[(key, parse_word(u))] = CylinderPartition.from_words(
                rank, [parse_word(w) for w in ws]
            )


_GLOBAL_CACHE = PartitionCache()


def _resolve(budget: Optional[int | Budget], cache: Optional[PartitionCache]):
    if budget is None:
        budget = Budget()
    elif isinstance(budget, int):
        budget = Budget(budget)
    return budget, (cache if cache is not None else _GLOBAL_CACHE)


# -- depth-1 partitions ----------------------------------------------------


def _frontier_depth(atom: Automorphism) -> int:
    m, mp = atom.lipschitz()
    need = m + 1
    lstar = mp * need
    if atom.drop is not None:
        lstar = min(lstar, need + atom.drop)
    return max(2, lstar)


def _tree_leaves(rank: int, depth: int) -> int:
    return 2 * rank * (2 * rank - 1) ** (depth - 1)


def _atom_depth1(atom: Automorphism, budget: Budget) -> dict[int, CylinderPartition]:
    """Depth-1 preimage partitions of a single atom by the frontier sweep."""
    k = atom.rank
    m, _ = atom.lipschitz()
    lstar = _frontier_depth(atom)
    budget.require(_tree_leaves(k, lstar))
    buckets: dict[int, list[Word]] = {y: [] for y in alphabet(k)}

    def sweep(w: tuple, img: Word) -> Optional[int]:
        budget.spend()
        # Each further letter cancels at most m letters of the image, so a
        # long enough image pins the first letter of the whole subtree.
        if len(w) >= lstar or len(img) > m * (lstar - len(w)):
            return img[0]
        agreed: Optional[int] = None
        consistent = True
        kids = []
        for c in extension_letters(w, k):
            child = sweep(w + (c,), concat(img, atom.letter_image(c)))
            kids.append((c, child))
            if child is None or (agreed is not None and child != agreed):
                consistent = False
            elif agreed is None:
                agreed = child
        if consistent and agreed is not None:
            return agreed
        for c, child in kids:
            if child is not None:
                buckets[child].append(Word(w + (c,)))
        return None

    for c in alphabet(k):
        label = sweep((c,), atom.letter_image(c))
        if label is not None:
            buckets[label].append(Word((c,)))
    return {y: CylinderPartition.from_words(k, ws) for y, ws in buckets.items()}


def _compose_chain(factors: Sequence[Automorphism]) -> Automorphism:
    result = factors[0]
    for f in factors[1:]:
        result = compose(result, f)
    return result


def _depth1_family(
    auto: Automorphism, budget: Budget, cache: PartitionCache
) -> dict[int, CylinderPartition]:
    key = auto.key()
    fam = cache.families.get(key)
    if fam is not None:
        return fam
    factors = auto.factors
    if len(factors) > 1:
        fam = _family_from_factors(auto.rank, factors, budget, cache)
    else:
        fam = _atom_family(factors[0], budget, cache)
    cache.families[key] = fam
    return fam


def _atom_family(
    atom: Automorphism, budget: Budget, cache: PartitionCache
) -> dict[int, CylinderPartition]:
    if _tree_leaves(atom.rank, _frontier_depth(atom)) > _REWRITE_LEAVES:
        simple = is_simple(atom)
        if simple is not None:
            v, pi = simple
            rewritten = (
                tuple(inner(atom.rank, (c,)) for c in v) + (pi.automorphism(),)
            )
            return _family_from_factors(atom.rank, rewritten, budget, cache)
    return _atom_depth1(atom, budget)


def _family_from_factors(
    rank: int,
    factors: Sequence[Automorphism],
    budget: Budget,
    cache: PartitionCache,
) -> dict[int, CylinderPartition]:
    head = factors[0]
    if len(factors) == 1:
        return _depth1_family(head, budget, cache)
    rest = _compose_chain(factors[1:])
    head_fam = _depth1_family(head, budget, cache)
    fam: dict[int, CylinderPartition] = {}
    for y in alphabet(rank):
        pieces: list[Word] = []
        for w in head_fam[y].words:
            pieces.extend(_preimage(rest, w, budget, cache).words)
        budget.spend(len(pieces))
        fam[y] = CylinderPartition.from_words(rank, pieces)
    return fam


def _preimage(
    auto: Automorphism, u: Word, budget: Budget, cache: PartitionCache
) -> CylinderPartition:
    key = (auto.key(), u)
    part = cache.partitions.get(key)
    if part is not None:
        return part
    fam = _depth1_family(auto, budget, cache)
    if len(u) == 1:
        part = fam[u[0]]
    else:
        g = auto.apply_inverse(u)
        ell = -u[-1]
        pieces: list[Word] = []
        for z in alphabet(auto.rank):
            if z == ell:
                continue
            for w in fam[z].words:
                pieces.extend(translate_cylinder(g, w, auto.rank))
        budget.spend(len(pieces))
        part = CylinderPartition.from_words(auto.rank, pieces)
    cache.partitions[key] = part
    return part


# -- public operations -------------------------------------------------------


def preimage_partition(
    auto: Automorphism,
    u: Sequence[int],
    *,
    budget: Optional[int | Budget] = None,
    cache: Optional[PartitionCache] = None,
) -> CylinderPartition:
    """Exact canonical partition of {xi : phi(xi) in Cyl(u)}."""
    u = Word(u)
    if not u:
        raise InputError("target cylinder label must be nonempty")
    budget, cache = _resolve(budget, cache)
    return _preimage(auto, u, budget, cache)


def partition_mass(mu: FrequencyMeasure, part: CylinderPartition) -> Fraction:
    return sum((mu.eval(w) for w in part.words), ZERO)


def stable_prefix(
    auto: Automorphism,
    w: Sequence[int],
    *,
    refine: bool = True,
    budget: Optional[int | Budget] = None,
    cache: Optional[PartitionCache] = None,
) -> Word:
    """A word s with phi(Cyl w) inside Cyl(s).

    The unrefined answer truncates phi(w) by the certified cancellation
    bound.  Refinement walks the preimage partitions and returns the
    longest s whose preimage contains Cyl(w), which is the exact common
    prefix of all ray images.
    """
    w = Word(w)
    if not w:
        raise InputError("stable_prefix needs a nonempty cylinder label")
    img = auto.apply(w)
    coarse = Word(img[: max(0, len(img) - auto.cancellation_bound())])
    if not refine:
        return coarse
    budget, cache = _resolve(budget, cache)
    s = EMPTY
    while True:
        step = None
        for c in extension_letters(s, auto.rank):
            cand = Word(tuple(s) + (c,))
            if _preimage(auto, cand, budget, cache).contains_cylinder(w):
                step = cand
                break
        if step is None:
            break
        s = step
    return s if len(s) >= len(coarse) else coarse


# -- current values under pushforward ---------------------------------------


def _grouped(words: Iterable[Word]) -> dict[int, list[tuple]]:
    groups: dict[int, list[tuple]] = {}
    for w in words:
        groups.setdefault(w[0], []).append(tuple(w[1:]))
    return groups


def _pair_mass_uniform(
    k: int, ws1: Sequence[tuple], ws2: Sequence[tuple], depth: int
) -> Fraction:
    """Sum of uniform masses mu(w1^-1 w2) over pairs from two disjoint families.

    Pairs splitting at depth d contribute 2k(2k-1)^(2d-1) mu(w1) mu(w2),
    so a joint walk of the two prefix trees with subtree masses is exact
    and avoids the quadratic pair enumeration.
    """
    if not ws1 or not ws2:
        return ZERO
    if any(not w for w in ws1) or any(not w for w in ws2):
        raise AssertionError("comparable cylinders across disjoint partitions")
    g1, g2 = _grouped(ws1), _grouped(ws2)

    def side_mass(groups: dict[int, list[tuple]]) -> dict[int, Fraction]:
        return {
            c: sum((uniform_eval(k, range(depth + 1 + len(s))) for s in suf), ZERO)
            for c, suf in groups.items()
        }

    m1, m2 = side_mass(g1), side_mass(g2)
    t1 = sum(m1.values(), ZERO)
    t2 = sum(m2.values(), ZERO)
    same = sum((m1[c] * m2[c] for c in m1 if c in m2), ZERO)
    factor = Fraction(2 * k, (2 * k - 1)) * Fraction(2 * k - 1) ** (2 * depth)
    total = factor * (t1 * t2 - same)
    for c in m1:
        if c in m2:
            total += _pair_mass_uniform(k, g1[c], g2[c], depth + 1)
    return total


def _pair_mass(
    mu: FrequencyMeasure, p1: CylinderPartition, p2: CylinderPartition
) -> Fraction:
    if mu.kind == "uniform":
        return _pair_mass_uniform(
            mu.rank, [tuple(w) for w in p1.words], [tuple(w) for w in p2.words], 0
        )
    total = ZERO
    for w1 in p1.words:
        left = inverse(w1)
        for w2 in p2.words:
            total += mu.eval(concat(left, w2))
    return total


def pushforward_current_value(
    auto: Automorphism,
    mu: FrequencyMeasure,
    u: Sequence[int],
    *,
    budget: Optional[int | Budget] = None,
    cache: Optional[PartitionCache] = None,
) -> Fraction:
    """Value of the pushed-forward current on the geodesic cylinder at u.

    Cyl[1,u] splits into products Cyl(a) x Cyl(u) over letters a other
    than the first letter of u, so the value is an exact pair sum over
    the preimage partitions of both sides.
    """
    u = Word(u)
    if not u:
        raise InputError("target label must be nonempty")
    budget, cache = _resolve(budget, cache)
    fam = _depth1_family(auto, budget, cache)
    p_u = _preimage(auto, u, budget, cache)
    mu_ = mu
    total = ZERO
    for a in alphabet(auto.rank):
        if a == u[0]:
            continue
        total += _pair_mass(mu_, fam[a], p_u)
    return total


def pushforward_table(
    auto: Automorphism,
    mu: FrequencyMeasure,
    depth: int,
    *,
    budget: Optional[int | Budget] = None,
    cache: Optional[PartitionCache] = None,
) -> dict[Word, Fraction]:
    """Pushforward measure of every cylinder up to the given depth."""
    if depth < 1:
        raise InputError("depth must be at least 1")
    budget, cache = _resolve(budget, cache)
    table: dict[Word, Fraction] = {}
    for n in range(1, depth + 1):
        for v in all_words(n, auto.rank):
            table[v] = pushforward_current_value(
                auto, mu, v, budget=budget, cache=cache
            )
    return table


def depth1_profile(
    auto: Automorphism,
    *,
    budget: Optional[int | Budget] = None,
    cache: Optional[PartitionCache] = None,
) -> dict[int, Fraction]:
    """Uniform mass of each depth-1 preimage; the values sum to one."""
    budget, cache = _resolve(budget, cache)
    fam = _depth1_family(auto, budget, cache)
    mu = uniform_measure(auto.rank)
    return {a: partition_mass(mu, fam[a]) for a in alphabet(auto.rank)}


def recenter(
    auto: Automorphism,
    *,
    budget: Optional[int | Budget] = None,
    cache: Optional[PartitionCache] = None,
) -> tuple[Word, Automorphism]:
    """Greedy recentering: descend while a child cylinder preimage has mass >= 1/2.

    Returns the final word v (ties broken toward the canonically smallest
    letter) and the conjugated map x -> v^-1 phi(x) v.
    """
    budget, cache = _resolve(budget, cache)
    mu = uniform_measure(auto.rank)
    v: tuple = ()
    while True:
        step = None
        for c in extension_letters(v, auto.rank):
            part = _preimage(auto, Word(v + (c,)), budget, cache)
            if partition_mass(mu, part) >= HALF:
                step = c
                break
        if step is None:
            break
        v = v + (step,)
    vw = Word(v)
    return vw, conj(auto, inverse(vw))
