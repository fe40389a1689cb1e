import json

import pytest

from tightforms.criterion import CriterionSet, criterion_set
from tightforms.escalation import run_escalation
from tightforms.tables import (
    CandidateRow,
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


class TestConditions:
    def test_value_expansion(self):
        assert condition_values(ValueCondition((9, 3, 3))) == (3, 9)

    def test_range_expansion(self):
        assert condition_values(RangeCondition(6, 9, (8,))) == (6, 7, 9)

    def test_union_expansion(self):
        cond = UnionCondition((RangeCondition(3, 5), ValueCondition((9,))))
        assert condition_values(cond) == (3, 4, 5, 9)

    def test_text(self):
        assert condition_text(RangeCondition(6, 9, (8,)), "a4") == "6 <= a4 <= 9, a4 != 8"
        assert condition_text(ValueCondition((3, 15)), "a5") == "a5 = 3, 15"
        cond = UnionCondition((RangeCondition(3, 5), ValueCondition((9,))))
        assert condition_text(cond, "a3") == "3 <= a3 <= 5 or a3 = 9"

    def test_non_condition_rejected(self):
        with pytest.raises(TypeError):
            condition_values("3..5")


class TestCompress:
    def test_contiguous_run_becomes_range(self):
        rows = compress([(1, 2, 3), (1, 2, 4), (1, 2, 5)])
        assert rows == [CandidateRow((1, 2), RangeCondition(3, 5, ()))]

    def test_sparse_values_stay_explicit(self):
        rows = compress([(1, 2, 3), (1, 2, 15)])
        assert rows == [CandidateRow((1, 2), ValueCondition((3, 15)))]

    def test_tie_prefers_range(self):
        # 2 endpoints + 1 exception vs 3 listed values
        rows = compress([(1, 2, 3), (1, 2, 4), (1, 2, 6)])
        assert rows == [CandidateRow((1, 2), RangeCondition(3, 6, (5,)))]

    def test_groups_by_prefix(self):
        rows = compress([(1, 1, 2), (1, 2, 2), (1, 2, 3)])
        assert [r.prefix for r in rows] == [(1, 1), (1, 2)]

    def test_mixed_lengths_rejected(self):
        with pytest.raises(ValueError):
            compress([(1, 2), (1, 2, 3)])

    def test_empty(self):
        assert compress([]) == []

    def test_candidate_rows_orders_by_length(self):
        rows = candidate_rows([(1, 2, 3), (1, 2), (1, 3)])
        assert [r.length for r in rows] == [2, 3]

    def test_round_trip(self):
        vectors = [(1, 1, 3), (1, 1, 4), (1, 1, 9), (1, 2, 2), (2, 2, 2, 4)]
        assert expand_rows(candidate_rows(vectors)) == sorted(
            set(vectors), key=lambda v: (len(v), v)
        )


class TestReferenceData:
    def test_all_tables_load(self):
        kinds = {tid: load_reference_table(tid).kind for tid in reference_table_ids()}
        assert kinds[1] == "gamma"
        assert kinds[4] == "criterion"
        for tid in (2, 3, 5, 6, 7, 8):
            assert kinds[tid] == "candidates"

    def test_candidate_vectors_are_canonical_and_tight(self):
        for tid in (2, 3, 5, 6, 7, 8):
            table = load_reference_table(tid)
            vectors = table.candidate_vectors()
            assert vectors
            for vec in vectors:
                assert vec == tuple(sorted(vec))
                assert vec[0] == table.n

    def test_gamma_agrees_with_criterion_table(self):
        gamma_table = load_reference_table(1)
        criterion_table = load_reference_table(4)
        explicit = {
            (row.m, row.n): row
            for row in criterion_table.criterion_rows
            if row.m is not None and row.n is not None
        }
        checked = 0
        for m, expected_gamma, proved in gamma_table.gamma_entries:
            row = explicit.get((m, 1))
            if row is None:
                continue
            assert max(row.elements) == expected_gamma, m
            assert row.proved == proved, m
            checked += 1
        assert checked == 6

    def test_unknown_table_rejected(self):
        with pytest.raises(ValueError):
            load_reference_table(9)


class TestClassification:
    def test_explicit_rows(self):
        assert classification(3, 1) == "proved"
        assert classification(7, 2) == "candidate"

    def test_family_rows(self):
        assert classification(5, 5) == "candidate"
        assert classification(5, 7) == "proved"
        assert classification(8, 11) == "proved"

    def test_large_order_threshold(self):
        # settled from target 2m-5 on
        assert classification(12, 19) == "proved"
        assert classification(12, 18) == "candidate"

    def test_unlisted_pair_is_candidate(self):
        assert classification(6, 1) == "candidate"

    def test_family_formula_expansion(self):
        table = load_reference_table(4)
        row = next(r for r in table.criterion_rows if r.m == 3 and r.n_min == 4)
        assert row.expected(3, 5) == (5, 6, 7, 8, 9, 10)
        row = next(r for r in table.criterion_rows if r.m == 5 and r.n_min == 7)
        assert row.expected(5, 8) == (8, 9, 10, 11, 12, 13, 14, 15)


class TestDiff:
    def test_candidates_match(self):
        table = load_reference_table(2)
        report = diff_reference(table.candidate_vectors(), 2)
        assert report.ok
        assert report.mismatches == 0

    def test_missing_vector_flagged(self):
        vectors = load_reference_table(2).candidate_vectors()
        report = diff_reference(vectors[1:], 2)
        assert not report.ok
        assert report.mismatches == 1
        bad = [line for line in report.lines if not line.ok]
        assert "missing" in bad[0].detail

    def test_extra_vector_flagged(self):
        vectors = load_reference_table(2).candidate_vectors() + [(99, 99, 99)]
        report = diff_reference(vectors, 2)
        assert not report.ok
        bad = [line for line in report.lines if not line.ok]
        assert bad[0].label == "unlisted"
        assert "(99,99,99)" in bad[0].detail

    def test_gamma_subset(self):
        report = diff_reference({3: 8, 4: 15}, 1, subset=[3, 4])
        assert report.ok
        assert len(report.lines) == 2

    def test_gamma_mismatch_and_unknown_order(self):
        report = diff_reference({3: 9, 6: 23}, 1, subset=[3, 6])
        assert report.mismatches == 2
        details = {line.label: line.detail for line in report.lines if not line.ok}
        assert details["m=3"] == "expected 8, got 9"
        assert "no reference entry" in details["m=6"]

    def test_criterion_set_against_reference(self):
        cs = CriterionSet(3, 1, 10_000, (1, 2, 4, 5, 8))
        assert diff_reference(cs, 4).ok
        family = CriterionSet(12, 19, 10_000, tuple(range(19, 39)))
        assert diff_reference(family, 4).ok

    def test_criterion_mismatch_details(self):
        cs = CriterionSet(3, 1, 10_000, (1, 2, 4, 5, 9))
        report = diff_reference(cs, 4)
        assert not report.ok
        assert "missing [8]" in report.lines[0].detail
        assert "extra [9]" in report.lines[0].detail

    def test_criterion_pair_without_row(self):
        report = diff_reference(CriterionSet(6, 1, 10_000, (1,)), 4)
        assert not report.ok
        assert "no reference row" in report.lines[0].detail

    def test_run_for_wrong_pair_rejected(self):
        run = run_escalation(3, 1, 2000)
        with pytest.raises(ValueError):
            diff_reference(run, 2)


@pytest.fixture(scope="module")
def run31():
    return run_escalation(3, 1, 2000)


class TestEmit:
    def test_criterion_json_shape(self, run31):
        text = emit(criterion_set(run31), "json")
        payload = json.loads(text)
        assert payload == {"m": 3, "n": 1, "cs": [1, 2, 4, 5, 8], "gamma": 8}
        # canonical bytes: sorted keys, two-space indent, trailing newline
        assert text == json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def test_criterion_markdown(self, run31):
        text = emit(criterion_set(run31), "markdown")
        assert "| 3 | 1 | {1, 2, 4, 5, 8} | 8 |" in text

    def test_criterion_csv(self, run31):
        lines = emit(criterion_set(run31), "csv").splitlines()
        assert lines[0] == "m,n,elements,gamma"
        assert lines[1] == "3,1,1 2 4 5 8,8"

    def test_escalation_json_includes_rows(self, run31):
        payload = json.loads(emit(run31, "json"))
        assert payload["schema"] == "tightforms/escalation/v1"
        assert payload["new_candidate_rows"]

    def test_escalation_markdown_sections(self, run31):
        text = emit(run31, "markdown")
        assert "escalation m=3 n=1" in text
        assert "new universal candidates" in text

    def test_empty_candidate_rows_render_header_only(self):
        text = emit([], "markdown")
        lines = text.splitlines()
        assert len(lines) == 2
        assert lines[0] == "| a1 | a2 | condition |"

    def test_diff_json_schema(self):
        report = diff_reference({3: 8}, 1, subset=[3])
        payload = json.loads(emit(report, "json"))
        assert payload["schema"] == "tightforms/diff/v1"
        assert payload["ok"] is True

    def test_gamma_mapping_formats(self):
        text = emit({3: 8, 4: 15}, "markdown")
        assert text.splitlines()[0] == "| m | 3 | 4 |"
        assert emit({3: 8}, "csv").splitlines() == ["m,gamma", "3,8"]

    def test_bad_format_rejected(self, run31):
        with pytest.raises(ValueError):
            emit(criterion_set(run31), "yaml")

    def test_unknown_object_rejected(self):
        with pytest.raises(TypeError):
            emit(42, "json")
