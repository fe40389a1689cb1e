"""Level-by-level escalation search for universal forms.

Starting from the single vector (n,), each level splits its members by
whether the form covers every integer in [n, bound].  Members with a finite
truant (the smallest uncovered value) sprout children: one new coefficient g
per escalator candidate, where g ranges over [n, truant - n] plus the truant
itself.  Adding any such g makes the old truant representable, so truants
strictly increase along every branch and the search bottoms out once no
member has a finite truant left.

Vectors are canonical sorted tuples throughout; children reached from
several parents are deduplicated, and level members are processed in
lexicographic order, which makes runs reproducible bit for bit regardless
of the jobs setting.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from typing import Callable, Iterable

from .polygonal import (
    ReprSet,
    canonical_vector,
    drop_one_subvectors,
    insert_coeff,
    repr_base,
    repr_extend,
    repr_set,
)

__all__ = [
    "EscalationNode",
    "EscalationLevel",
    "EscalationResult",
    "DepthGuardExceeded",
    "default_max_depth",
    "truant",
    "escalator_candidates",
    "escalate_level",
    "run_escalation",
    "is_tight_universal",
    "is_new",
]

# Children are grouped into chunks of this many per worker task when jobs > 1.
_CHUNK = 24

# Small first-pass bound for rejecting non-universal subvectors cheaply.
_PRECHECK_BOUND = 1024


def default_max_depth(n: int) -> int:
    """Depth guard used when the caller does not set one."""
    return 2 * n + 16


@dataclass(frozen=True)
class EscalationNode:
    """One searched vector: its truant (None = nothing missing up to the
    bound) and whether the form is tight, i.e. covers nothing below n."""

    vector: tuple[int, ...]
    truant: int | None
    tight: bool


@dataclass(frozen=True)
class EscalationLevel:
    """Level k of a run.  members = everything generated at this depth;
    universal = members with no uncovered value <= bound; new_universal =
    universal members none of whose drop-one subvectors is tight universal;
    escalating = members with a finite truant (their children form the next
    level)."""

    index: int
    members: tuple[tuple[int, ...], ...]
    universal: tuple[tuple[int, ...], ...]
    new_universal: tuple[tuple[int, ...], ...]
    escalating: tuple[tuple[int, ...], ...]


@dataclass
class EscalationResult:
    """Everything a finished (or depth-guarded) run produced."""

    m: int
    n: int
    bound: int
    max_depth: int
    levels: tuple[EscalationLevel, ...]
    truants: dict[tuple[int, ...], int | None]
    complete: bool

    @property
    def terminal_depth(self) -> int | None:
        """Depth of the first level with nothing left to escalate, or None
        if the run hit its depth guard instead."""
        return len(self.levels) if self.complete else None

    def node(self, vector) -> EscalationNode:
        vec = canonical_vector(vector)
        return EscalationNode(vec, self.truants[vec], vec[0] >= self.n)

    def new_candidates(self) -> list[tuple[int, ...]]:
        """All new universal vectors, shortest first, lexicographic within
        a length."""
        out: list[tuple[int, ...]] = []
        for level in self.levels:
            out.extend(level.new_universal)
        return out

    def universal_candidates(self) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []
        for level in self.levels:
            out.extend(level.universal)
        return out

    def to_payload(self) -> dict:
        """JSON-ready dict; every collection is in canonical order."""
        return {
            "schema": "tightforms/escalation/v1",
            "m": self.m,
            "n": self.n,
            "bound": self.bound,
            "max_depth": self.max_depth,
            "complete": self.complete,
            "terminal_depth": self.terminal_depth,
            "levels": [
                {
                    "k": lv.index,
                    "members": [list(v) for v in lv.members],
                    "universal": [list(v) for v in lv.universal],
                    "new_universal": [list(v) for v in lv.new_universal],
                    "escalating": [list(v) for v in lv.escalating],
                }
                for lv in self.levels
            ],
            "truants": {
                ",".join(map(str, vec)): t
                for vec, t in sorted(self.truants.items())
            },
        }


class DepthGuardExceeded(RuntimeError):
    """Raised when a run still has escalating vectors at max_depth.

    ``partial`` holds the result built so far (complete=False), so callers
    can inspect or persist what was searched before giving up.
    """

    def __init__(self, partial: EscalationResult) -> None:
        super().__init__(
            f"escalation for m={partial.m}, n={partial.n} still active at "
            f"depth {partial.max_depth}; partial results attached"
        )
        self.partial = partial


def truant(m: int, n: int, vector, bound: int) -> int | None:
    """Smallest value in [n, bound] the form misses, or None if it misses
    nothing there.  Zero is never counted as covered: coefficients are
    positive, so no nonzero sum can be 0 and the distinction only matters
    for the all-zero representation, which lies below n anyway."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if bound < n:
        raise ValueError(f"bound {bound} below n={n}")
    return repr_set(m, vector, bound).first_missing(n)


def escalator_candidates(n: int, t: int) -> list[int]:
    """New-coefficient choices for a vector with truant t: all g in
    [n, t - n], then t itself.  For t < 2n the interval is empty and t is
    the only candidate."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if t < n:
        raise ValueError(f"truant {t} below n={n}")
    return list(range(n, t - n + 1)) + [t]


def escalate_level(
    m: int,
    n: int,
    vectors: Iterable[tuple[int, ...]],
    bound: int,
    *,
    truants: dict[tuple[int, ...], int | None] | None = None,
) -> list[tuple[int, ...]]:
    """Deduplicated sorted children of the given escalating vectors.

    Every vector must have a finite truant at this bound; pass a truant
    mapping to reuse known values, anything absent is recomputed.
    """
    known = truants or {}
    children: set[tuple[int, ...]] = set()
    for vec in sorted(canonical_vector(v) for v in vectors):
        t = known.get(vec)
        if t is None:
            t = truant(m, n, vec, bound)
        if t is None:
            raise ValueError(f"vector {vec} has no truant <= {bound}; cannot escalate")
        for g in escalator_candidates(n, t):
            children.add(insert_coeff(vec, g))
    return sorted(children)


def is_tight_universal(m: int, n: int, vector, bound: int) -> bool:
    """True iff the form covers exactly [n, bound] among [1, bound]:
    everything from n up, nothing below n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if bound < n:
        raise ValueError(f"bound {bound} below n={n}")
    r = repr_set(m, vector, bound)
    low = r.first_present(1)
    if low is not None and low < n:
        return False
    return r.contains_all(n, bound)


class _TightCache:
    """Memoized tight-universality verdicts for subvector checks.

    Consults a run's truant memo first (its vectors all start at n, so a
    recorded None means tight universal and a finite truant means not).
    Unknown vectors get a cheap small-bound rejection pass before the full
    computation; a truant found at a smaller bound is still a truant at the
    larger one, so the early reject is sound.
    """

    def __init__(self, m: int, n: int, bound: int,
                 memo: dict[tuple[int, ...], int | None] | None = None) -> None:
        self.m = m
        self.n = n
        self.bound = bound
        self.memo = memo if memo is not None else {}
        self.verdicts: dict[tuple[int, ...], bool] = {}

    def tight_universal(self, vec: tuple[int, ...]) -> bool:
        if not vec or vec[0] != self.n or vec[0] != min(vec):
            # min != n: either something below n is covered or n itself is not
            return False
        hit = self.memo.get(vec, _MISSFLAG)
        if hit is not _MISSFLAG:
            return hit is None
        cached = self.verdicts.get(vec)
        if cached is not None:
            return cached
        pre = min(self.bound, max(_PRECHECK_BOUND, 2 * self.n))
        if pre < self.bound and repr_set(self.m, vec, pre).first_missing(self.n) is not None:
            self.verdicts[vec] = False
            return False
        ok = repr_set(self.m, vec, self.bound).first_missing(self.n) is None
        self.verdicts[vec] = ok
        return ok


_MISSFLAG = object()


def is_new(
    m: int,
    n: int,
    vector,
    bound: int,
    *,
    _cache: _TightCache | None = None,
) -> bool:
    """True iff no proper subvector of the form is itself tight universal.

    Only drop-one subvectors are examined: a tight universal subvector of
    any smaller size extends back up to a drop-one one, because inserting
    coefficients >= n into a tight universal vector keeps every covered
    value and adds nothing below n.  A length-1 vector has no proper
    subvectors of interest and is new outright.
    """
    vec = canonical_vector(vector)
    cache = _cache if _cache is not None else _TightCache(m, n, bound)
    for sub in drop_one_subvectors(vec):
        if sub and cache.tight_universal(sub):
            return False
    return True


def _member_truants(
    levels: list[EscalationLevel],
    memo: dict[tuple[int, ...], int | None],
) -> dict[tuple[int, ...], int | None]:
    # Restrict to vectors the run actually generated, so a seeded cache
    # cannot leak foreign entries into the result.
    return {v: memo[v] for lv in levels for v in lv.members}


def _expand_chunk(args) -> list[tuple[tuple[int, ...], int | None]]:
    """Worker task: truants of a batch of children of one parent."""
    m, n, bound, parent, gs = args
    parent_set = repr_set(m, parent, bound)
    out = []
    for g in gs:
        child_set = repr_extend(parent_set, m, g, bound)
        out.append((insert_coeff(parent, g), child_set.first_missing(n)))
    return out


def run_escalation(
    m: int,
    n: int,
    bound: int,
    *,
    max_depth: int | None = None,
    jobs: int = 1,
    truant_cache: dict[tuple[int, ...], int | None] | None = None,
    progress: Callable[[EscalationLevel], None] | None = None,
) -> EscalationResult:
    """Run the full search for (m, n) at the given bound.

    truant_cache seeds the truant memo (entries must come from the same
    m, n and bound); progress, if given, is called once per finished level.
    jobs > 1 spreads child evaluation over worker processes; the result is
    identical to a serial run.

    Raises DepthGuardExceeded if escalating vectors remain at max_depth
    (default 2n + 16); the exception carries the partial result.
    """
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if bound < 2 * n:
        raise ValueError(f"bound must be >= 2n = {2 * n}, got {bound}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    depth_limit = default_max_depth(n) if max_depth is None else max_depth
    if depth_limit < 1:
        raise ValueError(f"max_depth must be >= 1, got {depth_limit}")

    memo: dict[tuple[int, ...], int | None] = dict(truant_cache or {})
    tight_cache = _TightCache(m, n, bound, memo)
    levels: list[EscalationLevel] = []

    root = (n,)
    members: list[tuple[int, ...]] = [root]
    # Representation sets for the current level's escalating vectors; only
    # maintained in serial runs (workers re-fold from scratch).
    repr_map: dict[tuple[int, ...], ReprSet] = {}
    if root not in memo:
        root_set = repr_extend(repr_base(bound), m, n, bound)
        memo[root] = root_set.first_missing(n)
        repr_map[root] = root_set

    k = 1
    while True:
        universal = tuple(v for v in members if memo[v] is None)
        escalating = tuple(v for v in members if memo[v] is not None)
        new_universal = tuple(
            v for v in universal if is_new(m, n, v, bound, _cache=tight_cache)
        )
        level = EscalationLevel(k, tuple(members), universal, new_universal, escalating)
        levels.append(level)
        if progress is not None:
            progress(level)

        if not escalating:
            return EscalationResult(
                m, n, bound, depth_limit, tuple(levels),
                _member_truants(levels, memo), complete=True,
            )
        if k >= depth_limit:
            partial = EscalationResult(
                m, n, bound, depth_limit, tuple(levels),
                _member_truants(levels, memo), complete=False,
            )
            raise DepthGuardExceeded(partial)

        # A child can arise from several parents; the first parent in
        # canonical order owns it.
        owner: dict[tuple[int, ...], tuple[tuple[int, ...], int]] = {}
        for parent in escalating:
            for g in escalator_candidates(n, memo[parent]):
                child = insert_coeff(parent, g)
                owner.setdefault(child, (parent, g))
                assert child[0] >= n  # generated forms never cover below n

        next_members = sorted(owner)
        todo: dict[tuple[int, ...], list[int]] = {}
        for child, (parent, g) in owner.items():
            if child not in memo:
                todo.setdefault(parent, []).append(g)

        next_repr: dict[tuple[int, ...], ReprSet] = {}
        if jobs == 1:
            for parent in escalating:
                gs = todo.get(parent)
                if not gs:
                    continue
                parent_set = repr_map.get(parent)
                if parent_set is None:
                    parent_set = repr_set(m, parent, bound)
                for g in sorted(gs):
                    child_set = repr_extend(parent_set, m, g, bound)
                    child = insert_coeff(parent, g)
                    memo[child] = t = child_set.first_missing(n)
                    if t is not None:
                        next_repr[child] = child_set
        else:
            tasks = []
            for parent in escalating:
                gs = sorted(todo.get(parent, []))
                for i in range(0, len(gs), _CHUNK):
                    tasks.append((m, n, bound, parent, tuple(gs[i : i + _CHUNK])))
            if tasks:
                with multiprocessing.Pool(jobs) as pool:
                    for batch in pool.map(_expand_chunk, tasks):
                        for child, t in batch:
                            memo[child] = t

        repr_map = next_repr
        members = next_members
        k += 1
