"""The small-scale length spectrum: finitely many exact values with a gap.

Enumerating all compositions of up to three generating moves, merging
conjugate normal forms, and computing exact lengths exhibits a finite
value set whose minimum is exactly 1 (attained precisely by the simple
maps) and whose least gap is an exact positive rational.
"""

import time

from stretchfactor import frac_str, spectrum

for max_factors in (1, 2, 3):
    t0 = time.monotonic()
    report = spectrum(2, max_factors)
    elapsed = time.monotonic() - t0
    print(f"-- compositions of up to {max_factors} generators ({elapsed:.1f}s) --")
    for value, multiplicity, rep in report.entries:
        print(f"  L = {frac_str(value):>8}  ~ {float(value):.6f}"
              f"   classes: {multiplicity:3d}   rep: {rep}")
    print(f"  least gap: {frac_str(report.min_gap)}\n")

print("CSV form (stable ordering, exact numerators and denominators):")
for line in spectrum(2, 2).csv_lines():
    print(" ", line)
