"""
Criterion sets and witness forms
================================

A finished run compresses into a short list of integers: represent all
of them (and nothing below the target) and universality follows.  Two
witness constructions show the list is honest.
"""

from tightforms import (
    criterion_set,
    fermat_witness,
    is_tight_universal,
    minimality_witness,
    repr_set,
    run_escalation,
)

M, N, BOUND = 4, 1, 10_000

run = run_escalation(M, N, BOUND)
cs = criterion_set(run)
print(f"criterion set for order {M}, target {N}: {set(cs.elements)}")
print(f"gamma (largest element): {cs.gamma}")

# Each element beyond the target is the truant of some escalated vector;
# the run remembers the earliest one.
for g, stem in sorted(cs.provenance.items()):
    print(f"  {g:3d} first appeared as the miss of {stem}")

# The Fermat-style witness is tight universal for every order and target:
# the coefficient list n x m, n+1, ..., 2n-1 covers exactly the tail.
w = fermat_witness(M, N)
print(f"\nfermat witness {w} tight universal:",
      is_tight_universal(M, N, w, BOUND))

# And no element can be dropped: for each g there is a form hitting
# everything required except g itself.
for g in cs.elements:
    witness = minimality_witness(M, N, g, cs, BOUND)
    r = repr_set(M, witness, BOUND)
    assert g not in r and r.contains_all(g + 1, BOUND)
    print(f"element {g:2d}: witness of length {len(witness)} misses only {g}")
