"""The three measure families and the identities connecting them.

A frequency measure assigns an exact rational to every cylinder of the
boundary; its current counterpart evaluates products of disjoint
cylinders through one formula.  Uniform, Markov, and word-counting
measures are all driven through the same interface, and the compactness
criterion for Markov data reduces to per-letter constants.
"""

from fractions import Fraction

from stretchfactor import (
    consistency_check,
    criterion_check,
    current_length,
    current_pair_value,
    cyclic_length,
    eta_length,
    markov_measure,
    parse_generator_expression,
    parse_word,
    rational_measure,
    uniform_as_markov,
    uniform_measure,
)

w = parse_word
mu = uniform_measure(2)

print("-- uniform measure --")
for text in ["a", "ab", "abA"]:
    print(f"  mu(Cyl {text}) = {mu.eval(w(text))}")
print(f"  total mass = {mu.mass}, current length = {current_length(mu)}")
print(f"  consistency to depth 5: {consistency_check(mu, 5)}")

print("\n-- product-cylinder values and the disintegration factor --")
pair = current_pair_value(mu, w("A"), w("a"))
print(f"  eta(Cyl(A) x Cyl(a)) = {pair}")
print(f"  disintegration: 2k(2k-1)^(2L-1) mu mu = {Fraction(4, 3) * mu.eval(w('A')) * mu.eval(w('a'))}")

print("\n-- word-counting (rational) currents --")
eta_ab = rational_measure(2, w("aab"))
print(f"  mass of the aab current = {eta_ab.mass}")
print(f"  value on Cyl(a) = {eta_ab.eval(w('a'))} (occurrences per period)")

phi = parse_generator_expression(2, "W2[a; b:RIGHT]")
value = eta_length(phi, eta_ab).value
print(f"  length of the pushed-forward aab current = {value}")
print(f"  cyclic length of the image word          = {cyclic_length(phi.apply(w('aab')))}")

print("\n-- Markov measures and the compactness criterion --")
spec = uniform_as_markov(2)
print(f"  uniform-as-Markov consistent to depth 4: {consistency_check(markov_measure(spec), 4)}")
report = criterion_check(spec)
print(f"  criterion passes: {report.passes}")
print(f"  C1 = C2 = {report.c1[1]} on every letter, b(a) = {report.b[1]}")
