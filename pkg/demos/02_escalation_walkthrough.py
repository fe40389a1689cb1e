"""
Escalation, level by level
==========================

Grow coefficient vectors until every branch covers the whole target
range.  Each non-universal vector is extended by exactly the candidates
its first uncovered value allows, so the tree stays small.
"""

from tightforms import escalator_candidates, run_escalation, truant

M, N, BOUND = 3, 1, 10_000

# The root is the single vector (n,).  Its truant (first uncovered value)
# dictates the next coefficients worth trying.
t = truant(M, N, (N,), BOUND)
print(f"root (1,) misses {t}; candidate next coefficients: "
      f"{escalator_candidates(N, t)}")

result = run_escalation(M, N, BOUND)

for level in result.levels:
    print(f"\nlevel {level.index}: {len(level.members)} vectors")
    for vec in level.members:
        tag = []
        if vec in level.new_universal:
            tag.append("new universal")
        elif vec in level.universal:
            tag.append("universal")
        if vec in level.escalating:
            tag.append(f"escalates on {result.truants[vec]}")
        print(f"  {vec}  {', '.join(tag)}")

# The search ends when no vector escalates any further.
print(f"\nterminated at depth {result.terminal_depth}")
print(f"new universal vectors found: {len(result.new_candidates())}")
