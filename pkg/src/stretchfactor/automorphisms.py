"""Verified automorphism pairs (forward and inverse basis images).

An Automorphism stores the images of the positive basis letters under the
map and under its inverse; construction checks that the two compose to the
identity on every generator.  Composition, inner automorphisms, signed
permutations and second-kind moves all track their inverses, so the
boundary engine always has a certified inverse available.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InputError, NotInverseError
from .words import (
    Word,
    alphabet,
    concat,
    cyclic_reduce,
    format_letter,
    format_word,
    free_reduce,
    inverse,
    letter_key,
    parse_letter,
    parse_word,
    validate_rank,
)

FIX, RIGHT, LEFT, CONJ = "FIX", "RIGHT", "LEFT", "CONJ"
_W2_TYPES = (FIX, RIGHT, LEFT, CONJ)


class Automorphism:
    """An automorphism of the rank-k free group with a verified inverse.

    `factors` decomposes the map as a composition of atoms (leftmost factor
    applied last); raw maps are their own single atom.  `drop` is a
    certified constant with |phi(v)| >= |v| - drop for every reduced v,
    known for inner atoms and signed permutations.
    """

    __slots__ = ("rank", "fwd", "bwd", "_factors", "drop", "_hash")

    def __init__(
        self,
        rank: int,
        fwd: Sequence[Word],
        bwd: Sequence[Word],
        *,
        factors: Optional[tuple] = None,
        drop: Optional[int] = None,
        verify: bool = True,
    ):
        if len(fwd) != rank or len(bwd) != rank:
            raise InputError("need exactly one image per basis letter")
        self.rank = rank
        self.fwd = tuple(Word(w) for w in fwd)
        self.bwd = tuple(Word(w) for w in bwd)
        for w in self.fwd + self.bwd:
            if not w:
                raise InputError("automorphism images must be nonempty")
            validate_rank(w, rank)
        self._factors = factors
        self.drop = drop
        self._hash = hash((rank, self.fwd))
        if verify:
            self._verify()

    def _verify(self) -> None:
        for x in range(1, self.rank + 1):
            img = self.apply_inverse(self.fwd[x - 1])
            if img != Word((x,)):
                raise NotInverseError(
                    f"inverse check failed: maps send {format_letter(x)} "
                    f"to {format_word(img)!r} instead of itself"
                )
            img = self.apply(self.bwd[x - 1])
            if img != Word((x,)):
                raise NotInverseError(
                    f"inverse check failed on the backward map at {format_letter(x)}"
                )

    # -- basic action ---------------------------------------------------

    def letter_image(self, x: int) -> Word:
        return self.fwd[x - 1] if x > 0 else inverse(self.fwd[-x - 1])

    def inverse_letter_image(self, x: int) -> Word:
        return self.bwd[x - 1] if x > 0 else inverse(self.bwd[-x - 1])

    def apply(self, w: Sequence[int]) -> Word:
        out: list[int] = []
        for x in w:
            for y in self.letter_image(x):
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        return Word(out)

    def apply_inverse(self, w: Sequence[int]) -> Word:
        out: list[int] = []
        for x in w:
            for y in self.inverse_letter_image(x):
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        return Word(out)

    def inverse(self) -> "Automorphism":
        factors = None
        if self._factors is not None:
            factors = tuple(f.inverse() for f in reversed(self._factors))
        return Automorphism(
            self.rank, self.bwd, self.fwd,
            factors=factors, drop=self.drop, verify=False,
        )

    @property
    def factors(self) -> tuple:
        """Atoms whose composition (left applied last) equals this map."""
        return self._factors if self._factors is not None else (self,)

    # -- metrics --------------------------------------------------------

    def lipschitz(self) -> tuple[int, int]:
        """(max |phi(x)|, max |phi^-1(x)|) over all letters x."""
        return (max(len(w) for w in self.fwd), max(len(w) for w in self.bwd))

    def cancellation_bound(self) -> int:
        """Certified bound on cancellation in phi(u)*phi(v) for reduced uv.

        2*M^2*M' + M comes from stability of the prefix path of phi-images,
        which is an (M, M')-bi-Lipschitz embedding of a geodesic into the tree.
        """
        m, mp = self.lipschitz()
        return 2 * m * m * mp + m

    def is_identity(self) -> bool:
        return all(self.fwd[x - 1] == Word((x,)) for x in range(1, self.rank + 1))

    # -- plumbing -------------------------------------------------------

    def key(self) -> str:
        """Canonical text of the forward map, stable across sessions."""
        return ",".join(
            f"{format_letter(x)}->{format_word(self.fwd[x - 1])}"
            for x in range(1, self.rank + 1)
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Automorphism)
            and self.rank == other.rank
            and self.fwd == other.fwd
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Automorphism({self.key()!r})"


def make_automorphism(
    rank: int,
    fwd: dict[int, Sequence[int]] | Sequence[Sequence[int]],
    bwd: dict[int, Sequence[int]] | Sequence[Sequence[int]],
) -> Automorphism:
    """Build a verified automorphism from basis images of phi and phi^-1."""

    def as_tuple(maps) -> tuple[Word, ...]:
        if isinstance(maps, dict):
            missing = [x for x in range(1, rank + 1) if x not in maps]
            if missing:
                raise InputError(
                    f"missing image for {', '.join(format_letter(x) for x in missing)}"
                )
            return tuple(Word(maps[x]) for x in range(1, rank + 1))
        return tuple(Word(w) for w in maps)

    return Automorphism(rank, as_tuple(fwd), as_tuple(bwd))


def identity(rank: int) -> Automorphism:
    basis = [Word((x,)) for x in range(1, rank + 1)]
    return Automorphism(rank, basis, basis, drop=0, verify=False)


def inner(rank: int, v: Sequence[int]) -> Automorphism:
    """x -> v x v^-1, decomposed into single-letter inner atoms."""
    v = Word(v)
    validate_rank(v, rank)
    atoms = tuple(_inner_letter(rank, c) for c in v)
    if not atoms:
        return identity(rank)
    if len(atoms) == 1:
        return atoms[0]
    fwd = [concat(v, concat(Word((x,)), inverse(v))) for x in range(1, rank + 1)]
    vi = inverse(v)
    bwd = [concat(vi, concat(Word((x,)), v)) for x in range(1, rank + 1)]
    return Automorphism(
        rank, fwd, bwd, factors=atoms, drop=2 * len(v), verify=False
    )


def _inner_letter(rank: int, c: int) -> Automorphism:
    fwd = [free_reduce((c, x, -c)) for x in range(1, rank + 1)]
    bwd = [free_reduce((-c, x, c)) for x in range(1, rank + 1)]
    return Automorphism(rank, fwd, bwd, drop=2, verify=False)


def compose(phi: Automorphism, psi: Automorphism) -> Automorphism:
    """x -> phi(psi(x)); the left factor is applied last."""
    if phi.rank != psi.rank:
        raise InputError("cannot compose automorphisms of different ranks")
    fwd = [phi.apply(w) for w in psi.fwd]
    bwd = [psi.apply_inverse(w) for w in phi.bwd]
    return Automorphism(
        phi.rank, fwd, bwd, factors=phi.factors + psi.factors, verify=True
    )


def conj(phi: Automorphism, v: Sequence[int]) -> Automorphism:
    """x -> v phi(x) v^-1."""
    return compose(inner(phi.rank, v), phi)


def apply(phi: Automorphism, w: Sequence[int]) -> Word:
    return phi.apply(w)


def lipschitz(phi: Automorphism) -> tuple[int, int]:
    return phi.lipschitz()


def cancellation_bound(phi: Automorphism) -> int:
    return phi.cancellation_bound()


# -- signed permutations ------------------------------------------------


@dataclass(frozen=True)
class SignedPermutation:
    """A bijection of the alphabet commuting with inversion.

    `images[i]` is the (possibly negative) image of basis letter i+1.
    """

    rank: int
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(abs(x) for x in self.images) != list(range(1, self.rank + 1)):
            raise InputError("signed permutation images must hit each basis letter once")

    def __call__(self, x: int) -> int:
        return self.images[x - 1] if x > 0 else -self.images[-x - 1]

    def automorphism(self) -> Automorphism:
        inv_images = [0] * self.rank
        for x in range(1, self.rank + 1):
            y = self.images[x - 1]
            inv_images[abs(y) - 1] = x if y > 0 else -x
        return Automorphism(
            self.rank,
            [Word((y,)) for y in self.images],
            [Word((y,)) for y in inv_images],
            drop=0,
            verify=False,
        )


def enumerate_signed_permutations(rank: int) -> list[Automorphism]:
    """All 2^k k! signed permutations as verified automorphisms."""
    out = []
    for perm in itertools.permutations(range(1, rank + 1)):
        for signs in itertools.product((1, -1), repeat=rank):
            images = tuple(s * p for s, p in zip(signs, perm))
            out.append(SignedPermutation(rank, images).automorphism())
    return out


# -- Whitehead automorphisms of the second kind ---------------------------


@dataclass(frozen=True)
class WhiteheadSecondKind:
    """Multiplier letter a plus a type for every other basis letter.

    The induced map fixes the basis letter under the multiplier and sends
    each other basis letter x to x, xa, a^-1 x or a^-1 x a.
    """

    rank: int
    multiplier: int
    types: tuple[str, ...]  # indexed by basis letters != |multiplier|, ascending

    def __post_init__(self):
        if not (1 <= abs(self.multiplier) <= self.rank):
            raise InputError("multiplier outside alphabet")
        if len(self.types) != self.rank - 1:
            raise InputError("need a type for every non-multiplier basis letter")
        for t in self.types:
            if t not in _W2_TYPES:
                raise InputError(f"unknown type {t!r}")

    def _others(self) -> list[int]:
        return [x for x in range(1, self.rank + 1) if x != abs(self.multiplier)]

    def type_of(self, x: int) -> str:
        return self.types[self._others().index(x)]

    def automorphism(self) -> Automorphism:
        a = self.multiplier
        fwd: list[Word] = []
        bwd: list[Word] = []
        for x in range(1, self.rank + 1):
            if x == abs(a):
                fwd.append(Word((x,)))
                bwd.append(Word((x,)))
                continue
            t = self.type_of(x)
            fwd.append(_w2_image(x, a, t))
            bwd.append(_w2_image(x, -a, t))
        return Automorphism(self.rank, fwd, bwd, verify=True)

    def inverse(self) -> "WhiteheadSecondKind":
        return WhiteheadSecondKind(self.rank, -self.multiplier, self.types)

    def is_identity(self) -> bool:
        return all(t == FIX for t in self.types)

    def sort_key(self) -> tuple:
        return (letter_key(self.multiplier), tuple(_W2_TYPES.index(t) for t in self.types))

    def label(self) -> str:
        inside = ", ".join(
            f"{format_letter(x)}:{t}" for x, t in zip(self._others(), self.types)
        )
        return f"W2[{format_letter(self.multiplier)}; {inside}]"


def _w2_image(x: int, a: int, t: str) -> Word:
    if t == FIX:
        return Word((x,))
    if t == RIGHT:
        return free_reduce((x, a))
    if t == LEFT:
        return free_reduce((-a, x))
    return free_reduce((-a, x, a))


def enumerate_second_kind(rank: int) -> list[WhiteheadSecondKind]:
    """All 2k * 4^(k-1) second-kind moves, identity-typed ones included."""
    out = []
    for a in alphabet(rank):
        for types in itertools.product(_W2_TYPES, repeat=rank - 1):
            out.append(WhiteheadSecondKind(rank, a, types))
    return sorted(out, key=WhiteheadSecondKind.sort_key)


# -- simplicity test -----------------------------------------------------


def is_simple(phi: Automorphism) -> Optional[tuple[Word, SignedPermutation]]:
    """Find (v, pi) with phi(x) = v pi(x) v^-1 for all x, if they exist.

    Each image must cyclically reduce to a single letter; writing
    phi(x) = u_x p_x u_x^-1 exactly, any valid conjugator lies in
    u_x <p_x> for every x, so candidates are enumerated from one letter
    and verified on all.  The search is complete for |v| <= max |phi(x)|
    and some witness is always that short.
    """
    cores: list[int] = []
    conjs: list[Word] = []
    for x in range(1, phi.rank + 1):
        core, u = cyclic_reduce(phi.fwd[x - 1])
        if len(core) != 1:
            return None
        cores.append(core[0])
        conjs.append(u)
    if sorted(abs(c) for c in cores) != list(range(1, phi.rank + 1)):
        return None
    pi = SignedPermutation(phi.rank, tuple(cores))
    bound = max(len(w) for w in phi.fwd)
    x0 = min(range(phi.rank), key=lambda i: len(conjs[i]))
    u0, p0 = conjs[x0], Word((cores[x0],))
    for m in range(-(bound - len(u0)), bound - len(u0) + 1):
        power = Word(tuple(p0) * m if m >= 0 else tuple(inverse(p0)) * (-m))
        v = concat(u0, power)
        vi = inverse(v)
        if all(
            concat(v, concat(Word((cores[i],)), vi)) == phi.fwd[i]
            for i in range(phi.rank)
        ):
            return v, pi
    return None


# -- text formats ---------------------------------------------------------


def parse_map_text(rank: int, text: str) -> dict[int, Word]:
    """Parse 'a->a, b->ba' into basis-letter images."""
    images: dict[int, Word] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "->" not in part:
            raise InputError(f"expected 'x->word' entries, got {part!r}")
        left, right = part.split("->", 1)
        x = parse_letter(left.strip())
        if x < 0:
            raise InputError("map entries must be keyed by basis (lowercase) letters")
        if x in images:
            raise InputError(f"duplicate image for {left.strip()!r}")
        w = parse_word(right.strip())
        validate_rank(w, rank)
        images[x] = w
    missing = [x for x in range(1, rank + 1) if x not in images]
    if missing:
        raise InputError(
            f"missing image for {', '.join(format_letter(x) for x in missing)}"
        )
    return images


_EXPR_ATOM = re.compile(r"^(W2|perm|inner)\[(.*)\]$")


def parse_generator_expression(rank: int, text: str) -> Automorphism:
    """Parse `W2[a; b:RIGHT] * perm[a->b,b->a] * inner[ab]` style expressions.

    `*` composes left-to-right with the left factor applied last.  Every
    named generator carries its inverse, so no `--inverse` text is needed.
    """
    factors = [t.strip() for t in text.split("*")]
    result: Optional[Automorphism] = None
    for t in factors:
        atom = _parse_expr_atom(rank, t)
        result = atom if result is None else compose(result, atom)
    if result is None:
        raise InputError("empty expression")
    return result


def _parse_expr_atom(rank: int, text: str) -> Automorphism:
    m = _EXPR_ATOM.match(text)
    if not m:
        raise InputError(
            f"cannot parse {text!r}: expected W2[...], perm[...] or inner[...]"
        )
    kind, body = m.group(1), m.group(2).strip()
    if kind == "inner":
        return inner(rank, parse_word(body))
    if kind == "perm":
        images = [0] * rank
        for part in body.split(","):
            left, right = part.split("->", 1)
            x = parse_letter(left.strip())
            y = parse_letter(right.strip())
            if x < 0:
                raise InputError("perm entries must be keyed by basis letters")
            images[x - 1] = y
        for x in range(1, rank + 1):
            if images[x - 1] == 0:
                images[x - 1] = x
        return SignedPermutation(rank, tuple(images)).automorphism()
    # W2[a; x:TYPE, ...] with unlisted basis letters fixed
    if ";" in body:
        head, rest = body.split(";", 1)
    else:
        head, rest = body, ""
    a = parse_letter(head.strip())
    others = [x for x in range(1, rank + 1) if x != abs(a)]
    types = {x: FIX for x in others}
    for part in rest.split(","):
        part = part.strip()
        if not part:
            continue
        left, right = part.split(":", 1)
        x = parse_letter(left.strip())
        t = right.strip().upper()
        if x < 0 or abs(x) == abs(a):
            raise InputError(f"bad W2 entry {part!r}")
        if t not in _W2_TYPES:
            raise InputError(f"unknown W2 type {right.strip()!r}")
        types[x] = t
    move = WhiteheadSecondKind(rank, a, tuple(types[x] for x in others))
    return move.automorphism()
