"""Length descent: factoring a map into second-kind moves times a simple map.

A non-simple automorphism always admits a second-kind move that strictly
lowers its exact length; iterating the steepest such move terminates in
a simple map.  Reading the moves backwards factors the original map with
strictly increasing lengths.
"""

from stretchfactor import (
    compose,
    descent_step,
    factorize,
    frac_str,
    is_simple,
    length_exact,
    parse_generator_expression,
    recenter,
    format_word,
)

phi = parse_generator_expression(2, "W2[a; b:RIGHT] * W2[b; a:RIGHT] * W2[A; b:CONJ]")
print(f"map: {phi.key()}")
print(f"exact length: {frac_str(length_exact(phi).value)}")
print(f"simple: {is_simple(phi) is not None}\n")

step = descent_step(phi)
print(f"steepest descending move: {step.label()}")
print(f"length after one move: {frac_str(length_exact(compose(step.automorphism(), phi)).value)}\n")

report = factorize(phi)
print("factorization (left factor applied last):")
print(f"  simple part sigma = {report.sigma.key()}")
for i, tau in enumerate(report.taus, 1):
    print(f"  tau_{i} = {tau.label()}")
print(f"  lengths along the chain: {', '.join(frac_str(q) for q in report.lengths)}")
print(f"  recomposes exactly: {report.recomposed() == phi}\n")

v, psi = recenter(phi)
print(f"recentering: v = {format_word(v) or '(empty)'}, conjugated map = {psi.key()}")
