"""Tight universal sums of generalized polygonal numbers.

Enumerates, by escalation, all candidate coefficient vectors (a1, ..., ak)
such that a1*P(x1) + ... + ak*P(xk) over generalized m-gonal numbers P
represents exactly the integers from n upward, and no smaller form does.
Also derives the criterion sets and sharp bounds that certify universality,
and reproduces the published candidate tables.
"""

from .polygonal import (
    PolygonalSequence,
    ReprSet,
    canonical_vector,
    drop_one_subvectors,
    insert_coeff,
    is_subvector,
    polygonal_number,
    polygonal_sequence,
    repr_base,
    repr_extend,
    repr_oracle,
    repr_set,
)
from .escalation import (
    DepthGuardExceeded,
    EscalationLevel,
    EscalationNode,
    EscalationResult,
    default_max_depth,
    escalate_level,
    escalator_candidates,
    is_new,
    is_tight_universal,
    run_escalation,
    truant,
)
from .criterion import (
    CriterionSet,
    IncompleteRunError,
    WitnessVerificationError,
    criterion_set,
    fermat_witness,
    gamma,
    minimality_witness,
)
from .tables import (
    CandidateRow,
    DiffReport,
    RangeCondition,
    UnionCondition,
    ValueCondition,
    candidate_rows,
    classification,
    compress,
    condition_text,
    condition_values,
    diff_reference,
    emit,
    expand_rows,
    load_reference_table,
    reference_table_ids,
)

__version__ = "0.1.0"

__all__ = [
    "polygonal_number", "polygonal_sequence", "PolygonalSequence",
    "canonical_vector", "insert_coeff", "is_subvector", "drop_one_subvectors",
    "ReprSet", "repr_base", "repr_extend", "repr_set", "repr_oracle",
    "truant", "escalator_candidates", "escalate_level", "run_escalation",
    "is_tight_universal", "is_new", "default_max_depth",
    "EscalationNode", "EscalationLevel", "EscalationResult", "DepthGuardExceeded",
    "criterion_set", "gamma", "fermat_witness", "minimality_witness",
    "CriterionSet", "IncompleteRunError", "WitnessVerificationError",
    "ValueCondition", "RangeCondition", "UnionCondition",
    "condition_values", "condition_text", "CandidateRow",
    "compress", "candidate_rows", "expand_rows",
    "reference_table_ids", "load_reference_table", "classification",
    "DiffReport", "diff_reference", "emit",
    "__version__",
]
