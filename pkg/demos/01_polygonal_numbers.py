"""
Polygonal values and representation sets
========================================

The building blocks: the value sequence for one polygon order, and the
set of integers a coefficient vector can reach with those values.
"""

from tightforms import polygonal_number, polygonal_sequence, repr_set

# One value: order m, index u.  Negative indices are allowed and give the
# "generalized" half of the sequence.
print("pentagonal value at u=3: ", polygonal_number(5, 3))
print("pentagonal value at u=-3:", polygonal_number(5, -3))

# The whole nondecreasing value sequence up to a bound, both signs merged.
seq = polygonal_sequence(5, 50)
print("pentagonal values <= 50: ", list(seq))

# Squares are the order-4 case.
print("squares <= 50:           ", list(polygonal_sequence(4, 50)))

# A representation set answers "which integers are a1*P(x1) + a2*P(x2) + ..."
# for one coefficient vector, up to a bound.  Membership is a bit test.
r = repr_set(5, (1, 2), 50)
print("\nreachable with coefficients (1, 2), order 5, bound 50:")
print(r.to_list())

# The first value missing from a tail is the quantity the whole search
# revolves around: the smallest target the vector fails to cover.
print("first value >= 1 not reachable:", r.first_missing(1))

# Adding a coefficient can only grow the set.
bigger = repr_set(5, (1, 2, 4), 50)
print("with (1, 2, 4) instead:        ", bigger.first_missing(1))
