"""Criterion sets, gamma bounds, and witness constructions.

A finished escalation run yields a criterion set: n together with the
truants of every escalated vector.  A form with all coefficients >= n is
universal for the target range iff it represents each criterion element,
and gamma (the largest element) is the sharpest such single bound.  The
witness helpers build explicit vectors showing each criterion element is
really needed and that the base case covers what it should.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .escalation import EscalationResult
from .polygonal import canonical_vector, repr_set

__all__ = [
    "CriterionSet",
    "IncompleteRunError",
    "WitnessVerificationError",
    "criterion_set",
    "gamma",
    "fermat_witness",
    "minimality_witness",
]


class IncompleteRunError(RuntimeError):
    """A criterion set can only be read off a run that terminated on its own."""


class WitnessVerificationError(RuntimeError):
    """A constructed witness failed its representation check.

    Only possible when the verification bound is too small to see the whole
    pattern the witness must exhibit.
    """


@dataclass
class CriterionSet:
    """Criterion elements for one (m, n) pair, with provenance.

    provenance maps each element g != n to the shortest (then
    lexicographically first) escalated vector whose truant is g.
    """

    m: int
    n: int
    bound: int
    elements: tuple[int, ...]
    provenance: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def gamma(self) -> int:
        return self.elements[-1]


def criterion_set(run: EscalationResult) -> CriterionSet:
    """Collect {n} and all truants of escalated vectors from a complete run.

    Levels are scanned in order and members in canonical order, so the
    recorded provenance vector for a repeated truant value is the shortest
    one, lexicographically first among its length.
    """
    if not run.complete:
        raise IncompleteRunError(
            f"run for m={run.m}, n={run.n} hit its depth guard; "
            "criterion set undefined"
        )
    elements = {run.n}
    provenance: dict[int, tuple[int, ...]] = {}
    for level in run.levels:
        for vec in level.escalating:
            t = run.truants[vec]
            elements.add(t)
            provenance.setdefault(t, vec)
    provenance.pop(run.n, None)
    return CriterionSet(run.m, run.n, run.bound, tuple(sorted(elements)), provenance)


def gamma(cs: CriterionSet) -> int:
    """Largest criterion element: representing everything in [n, gamma]
    already forces universality for vectors with entries >= n."""
    return cs.elements[-1]


def fermat_witness(m: int, n: int) -> tuple[int, ...]:
    """m copies of n followed by n+1, ..., 2n-1.

    The polygonal number theorem makes every integer a sum of m m-gonal
    numbers, so this form covers all of n*[0,inf) + {0, n+1, ..., 2n-1},
    i.e. everything from n up, and its entries keep it from reaching
    anything below n: it is tight universal at every bound.
    """
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return (n,) * m + tuple(range(n + 1, 2 * n))


def minimality_witness(
    m: int,
    n: int,
    g: int,
    run: EscalationResult | CriterionSet | None = None,
    bound: int | None = None,
    *,
    verify: bool = True,
) -> tuple[int, ...]:
    """Vector whose form represents exactly [n, bound] minus {g}.

    Its existence shows no criterion element can be dropped: a form can hit
    every other required value and still miss g.  For g = n the witness is
    the Fermat vector one target higher; otherwise the escalated vector
    with truant g (from the run's provenance) is extended by the Fermat
    vector for targets above g, which fills in everything past g while g
    itself stays out of reach.
    """
    if bound is None:
        raise ValueError("a verification bound is required")
    if bound <= g:
        raise ValueError(f"bound {bound} must exceed g={g}")
    if g == n:
        witness = fermat_witness(m, n + 1)
    else:
        if run is None:
            raise ValueError("provenance run required for g != n")
        cs = run if isinstance(run, CriterionSet) else criterion_set(run)
        if g not in cs.elements:
            raise ValueError(f"{g} is not a criterion element for m={m}, n={n}")
        stem = cs.provenance[g]
        witness = canonical_vector(stem + fermat_witness(m, g + 1))

    if verify:
        r = repr_set(m, witness, bound)
        low = n + 1 if g == n else n
        ok = (
            r.first_present(1) == low
            and (g == n or r.first_missing(n) == g)
            and r.contains_all(g + 1, bound)
        )
        if not ok:
            raise WitnessVerificationError(
                f"witness {witness} for element {g} (m={m}, n={n}) does not "
                f"miss exactly {{{g}}} within [1, {bound}]"
            )
    return witness
