"""The exact stretching factor of the basic Nielsen map, end to end.

The length of an automorphism is the average factor by which it
stretches long random reduced words.  It is computed exactly: first the
preimage of each one-letter cylinder is resolved into an exact finite
union of cylinders, then the mass the pushed-forward uniform current
gives to geodesics through the base vertex is an exact pair sum over
those partitions.
"""

from stretchfactor import (
    depth1_profile,
    format_word,
    length_exact,
    length_mc,
    parse_generator_expression,
    parse_word,
    preimage_partition,
)

phi = parse_generator_expression(2, "W2[a; b:RIGHT]")
print(f"map: {phi.key()}\n")

print("exact cylinder preimages (each a finite union of cylinders):")
for letter in "abAB":
    part = preimage_partition(phi, parse_word(letter))
    pieces = " + ".join(f"Cyl({format_word(p)})" for p in part.words)
    print(f"  phi^-1 Cyl({letter}) = {pieces}")

print("\nuniform mass of each preimage (sums to 1):")
profile = depth1_profile(phi)
for letter, mass in sorted(profile.items(), key=lambda kv: abs(kv[0])):
    print(f"  {format_word((letter,))}: {mass}")

report = length_exact(phi)
print(f"\nexact length L = {report.value}")
for letter, value in sorted(report.breakdown.items(), key=lambda kv: abs(kv[0])):
    print(f"  geodesics leaving through {format_word((letter,))}: {value}")

est = length_mc(phi, n=2000, trials=200, seed=1)
print(f"\nMonte Carlo cross-check: {est.mean:.5f} +- {est.stderr:.5f}")
print(f"|mc - exact| = {abs(est.mean - float(report.value)):.5f}"
      f" (tolerance {3 * est.stderr + 4 / est.n:.5f})")
