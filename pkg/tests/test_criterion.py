import pytest

from tightforms.criterion import (
    CriterionSet,
    IncompleteRunError,
    WitnessVerificationError,
    criterion_set,
    fermat_witness,
    gamma,
    minimality_witness,
)
from tightforms.escalation import DepthGuardExceeded, is_tight_universal, run_escalation
from tightforms.polygonal import repr_set


@pytest.fixture(scope="module")
def run31():
    return run_escalation(3, 1, 10_000)


@pytest.fixture(scope="module")
def run52():
    return run_escalation(5, 2, 10_000)


class TestCriterionSet:
    def test_elements(self, run31, run52):
        assert criterion_set(run31).elements == (1, 2, 4, 5, 8)
        assert criterion_set(run52).elements == (2, 3, 9, 53, 77, 141)

    def test_gamma(self, run31):
        cs = criterion_set(run31)
        assert cs.gamma == 8
        assert gamma(cs) == 8

    def test_provenance_is_shortest_then_lexicographic(self, run52):
        cs = criterion_set(run52)
        assert cs.provenance[3] == (2,)
        assert cs.provenance[9] == (2, 3)
        assert cs.provenance[77] == (2, 3, 3)
        assert cs.provenance[141] == (2, 3, 4)
        assert cs.provenance[53] == (2, 3, 5)
        # the target itself needs no provenance
        assert 2 not in cs.provenance

    def test_rejects_partial_run(self):
        with pytest.raises(DepthGuardExceeded) as exc_info:
            run_escalation(5, 2, 10_000, max_depth=2)
        with pytest.raises(IncompleteRunError):
            criterion_set(exc_info.value.partial)


class TestFermatWitness:
    def test_shape(self):
        assert fermat_witness(3, 2) == (2, 2, 2, 3)
        assert fermat_witness(7, 4) == (4, 4, 4, 4, 4, 4, 4, 5, 6, 7)
        assert fermat_witness(5, 1) == (1, 1, 1, 1, 1)

    def test_tight_universal(self):
        for m in (3, 5, 8):
            for n in (1, 2, 3):
                assert is_tight_universal(m, n, fermat_witness(m, n), 3000), (m, n)

    def test_validation(self):
        with pytest.raises(ValueError):
            fermat_witness(2, 1)
        with pytest.raises(ValueError):
            fermat_witness(5, 0)


class TestMinimalityWitness:
    def test_target_element(self, run31):
        w = minimality_witness(3, 1, 1, run31, 2000)
        assert w == (2, 2, 2, 3)

    def test_other_elements(self, run31):
        cs = criterion_set(run31)
        w = minimality_witness(3, 1, 2, cs, 2000)
        assert w == (1, 3, 3, 3, 4, 5)
        r = repr_set(3, w, 2000)
        assert r.first_present(1) == 1
        assert r.first_missing(1) == 2
        assert r.contains_all(3, 2000)

    def test_every_element_verifies(self, run52):
        cs = criterion_set(run52)
        for g in cs.elements:
            w = minimality_witness(5, 2, g, cs, 4000)
            r = repr_set(5, w, 4000)
            missing = [x for x in range(1, 200) if x not in r]
            assert missing == [x for x in range(1, 200) if x < 2 or x == g]

    def test_bad_provenance_fails_verification(self):
        doctored = CriterionSet(3, 1, 2000, (1, 2, 4, 5, 8), {8: (1, 1)})
        with pytest.raises(WitnessVerificationError):
            minimality_witness(3, 1, 8, doctored, 2000)

    def test_requires_bound_past_element(self, run31):
        with pytest.raises(ValueError):
            minimality_witness(3, 1, 8, run31, 8)

    def test_unknown_element_rejected(self, run31):
        with pytest.raises(ValueError):
            minimality_witness(3, 1, 7, run31, 2000)
