"""Words, automorphisms, and the verified-inverse discipline.

Letters are written a, b, c, ... with capitals for inverses, so "abA"
means a * b * a^-1.  Every automorphism is stored together with its
inverse and the pair is checked on construction; building one with a
wrong inverse fails loudly.
"""

from stretchfactor import (
    NotInverseError,
    compose,
    concat,
    cyclic_reduce,
    inner,
    inverse,
    make_automorphism,
    parse_generator_expression,
    parse_word,
)

w = parse_word

print("-- reduced word algebra --")
u, v = w("abA"), w("aB")
print(f"u = {u}, v = {v}")
print(f"u * v          = {concat(u, v)}")
print(f"u^-1           = {inverse(u)}")
core, conj = cyclic_reduce(w("aBA"))
print(f"cyclic core of aBA = {core} (conjugator {conj})")

print()
print("-- a verified automorphism pair --")
nielsen = make_automorphism(2, {1: w("a"), 2: w("ba")}, {1: w("a"), 2: w("bA")})
print(f"map: {nielsen.key()}")
print(f"image of bA: {nielsen.apply(w('bA'))}")
print(f"Lipschitz constants (M, M') = {nielsen.lipschitz()}")

try:
    make_automorphism(2, {1: w("a"), 2: w("ba")}, {1: w("a"), 2: w("ba")})
except NotInverseError as e:
    print(f"wrong inverse rejected: {e}")

print()
print("-- generator expressions --")
phi = parse_generator_expression(2, "W2[a; b:RIGHT] * perm[a->b,b->a]")
print(f"W2[a; b:RIGHT] * perm[a->b,b->a]  =  {phi.key()}")
print(f"same thing by hand: {compose(nielsen, make_automorphism(2, {1: w('b'), 2: w('a')}, {1: w('b'), 2: w('a')})).key()}")
print(f"inner(ab): {inner(2, w('ab')).key()}")
