"""Candidate-table compression, output formats, and reference comparison.

Candidate lists group naturally the way the published tables print them:
vectors sharing everything but the last coefficient collapse into one row
whose final column is a condition (an explicit value list, a range with
exceptions, or a union of both).  This module builds those rows from raw
vector lists, renders results as markdown, CSV, or JSON, and diffs computed
results against the bundled reference tables.

Comparison always happens on fully expanded vector sets, never on the
surface form of a condition: the same set can be written as "3, 4" or as a
two-element range, and nothing should hinge on which spelling was chosen.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .criterion import CriterionSet
from .escalation import EscalationResult

__all__ = [
    "ValueCondition",
    "RangeCondition",
    "UnionCondition",
    "condition_values",
    "condition_text",
    "CandidateRow",
    "compress",
    "candidate_rows",
    "expand_rows",
    "ReferenceTable",
    "reference_table_ids",
    "load_reference_table",
    "classification",
    "DiffLine",
    "DiffReport",
    "diff_reference",
    "emit",
]

FORMATS = ("json", "markdown", "csv")


@dataclass(frozen=True)
class ValueCondition:
    """Explicit last-coefficient values."""

    values: tuple[int, ...]


@dataclass(frozen=True)
class RangeCondition:
    """Contiguous last-coefficient range [lo, hi] minus listed exceptions."""

    lo: int
    hi: int
    exceptions: tuple[int, ...] = ()


@dataclass(frozen=True)
class UnionCondition:
    """Union of simpler conditions, as some published rows are written."""

    parts: tuple


def condition_values(cond) -> tuple[int, ...]:
    """Sorted expansion of a condition into concrete values."""
    if isinstance(cond, ValueCondition):
        return tuple(sorted(set(cond.values)))
    if isinstance(cond, RangeCondition):
        exc = set(cond.exceptions)
        return tuple(v for v in range(cond.lo, cond.hi + 1) if v not in exc)
    if isinstance(cond, UnionCondition):
        out: set[int] = set()
        for part in cond.parts:
            out.update(condition_values(part))
        return tuple(sorted(out))
    raise TypeError(f"not a condition: {cond!r}")


def condition_text(cond, var: str) -> str:
    """Human rendering, e.g. '6 <= a4 <= 9, a4 != 8' or 'a5 = 3, 15'."""
    if isinstance(cond, ValueCondition):
        return f"{var} = " + ", ".join(map(str, cond.values))
    if isinstance(cond, RangeCondition):
        text = f"{cond.lo} <= {var} <= {cond.hi}"
        if cond.exceptions:
            text += f", {var} != " + ",".join(map(str, cond.exceptions))
        return text
    if isinstance(cond, UnionCondition):
        return " or ".join(condition_text(p, var) for p in cond.parts)
    raise TypeError(f"not a condition: {cond!r}")


@dataclass(frozen=True)
class CandidateRow:
    """One table row: shared prefix plus a condition on the last entry."""

    prefix: tuple[int, ...]
    last: object

    @property
    def length(self) -> int:
        return len(self.prefix) + 1

    def vectors(self) -> list[tuple[int, ...]]:
        return [self.prefix + (v,) for v in condition_values(self.last)]

    def is_single(self) -> bool:
        return len(condition_values(self.last)) == 1


def _best_condition(values: tuple[int, ...]):
    # Range form wins when it reads shorter: 2 endpoints + exceptions vs
    # the plain list.  Ties go to the range.
    lo, hi = values[0], values[-1]
    exceptions = tuple(v for v in range(lo, hi + 1) if v not in set(values))
    if 2 + len(exceptions) <= len(values):
        return RangeCondition(lo, hi, exceptions)
    return ValueCondition(values)


def compress(vectors) -> list[CandidateRow]:
    """Group same-length vectors by their length-(k-1) prefix into rows.

    Only the last coefficient is compressed; deeper factoring would stop
    the rows matching the published layout.
    """
    vecs = sorted(set(tuple(v) for v in vectors))
    if not vecs:
        return []
    lengths = {len(v) for v in vecs}
    if len(lengths) != 1:
        raise ValueError(f"mixed vector lengths {sorted(lengths)}; compress one length at a time")
    groups: dict[tuple[int, ...], list[int]] = {}
    for v in vecs:
        groups.setdefault(v[:-1], []).append(v[-1])
    return [
        CandidateRow(prefix, _best_condition(tuple(vals)))
        for prefix, vals in sorted(groups.items())
    ]


def candidate_rows(vectors) -> list[CandidateRow]:
    """Compress a mixed-length candidate list, shortest vectors first."""
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for v in vectors:
        t = tuple(v)
        by_len.setdefault(len(t), []).append(t)
    rows: list[CandidateRow] = []
    for length in sorted(by_len):
        rows.extend(compress(by_len[length]))
    return rows


def expand_rows(rows) -> list[tuple[int, ...]]:
    """All vectors covered by the rows, deduplicated and sorted."""
    out: set[tuple[int, ...]] = set()
    for row in rows:
        out.update(row.vectors())
    return sorted(out, key=lambda v: (len(v), v))


def _parse_condition(data: dict):
    if "union" in data:
        return UnionCondition(tuple(_parse_condition(p) for p in data["union"]))
    if "values" in data:
        return ValueCondition(tuple(data["values"]))
    return RangeCondition(data["lo"], data["hi"], tuple(data.get("except", ())))


@dataclass(frozen=True)
class CriterionReferenceRow:
    """One reference criterion-set row; either explicit elements for a pair
    or a formula for a family of targets."""

    proved: bool
    m: int | None = None
    m_min: int | None = None
    n: int | None = None
    n_min: int | None = None
    n_max: int | None = None
    n_min_rule: str | None = None
    elements: tuple[int, ...] | None = None
    formula: str | None = None

    def matches(self, m: int, n: int) -> bool:
        if self.m is not None and m != self.m:
            return False
        if self.m_min is not None and m < self.m_min:
            return False
        lo = self.n_min
        if self.n_min_rule == "2m-5":
            lo = 2 * m - 5
        if self.n is not None:
            return n == self.n
        if lo is not None and n < lo:
            return False
        if self.n_max is not None and n > self.n_max:
            return False
        return True

    def expected(self, m: int, n: int) -> tuple[int, ...]:
        if self.elements is not None:
            return self.elements
        if self.formula == "n..2n":
            return tuple(range(n, 2 * n + 1))
        if self.formula == "n..2n-1":
            return tuple(range(n, 2 * n))
        raise ValueError(f"unknown formula {self.formula!r}")


@dataclass(frozen=True)
class ReferenceTable:
    table_id: int
    kind: str
    title: str
    m: int | None = None
    n: int | None = None
    gamma_entries: tuple = ()
    criterion_rows: tuple = ()
    candidate_rows_: tuple = ()

    def candidate_vectors(self) -> list[tuple[int, ...]]:
        return expand_rows(self.candidate_rows_)


def reference_table_ids() -> list[int]:
    return list(range(1, 9))


@lru_cache(maxsize=None)
def load_reference_table(table_id: int) -> ReferenceTable:
    """Bundled reference data for one published table."""
    if table_id not in reference_table_ids():
        raise ValueError(f"no reference table {table_id}; have {reference_table_ids()}")
    text = resources.files("tightforms.reference").joinpath(f"table{table_id}.json").read_text()
    data = json.loads(text)
    kind = data["kind"]
    if kind == "gamma":
        entries = tuple(
            (e["m"], e["gamma"], e["proved"]) for e in data["entries"]
        )
        return ReferenceTable(table_id, kind, data["title"], n=data["n"], gamma_entries=entries)
    if kind == "criterion":
        rows = tuple(
            CriterionReferenceRow(
                proved=r["proved"],
                m=r.get("m"),
                m_min=r.get("m_min"),
                n=r.get("n"),
                n_min=r.get("n_min"),
                n_max=r.get("n_max"),
                n_min_rule=r.get("n_min_rule"),
                elements=tuple(r["elements"]) if "elements" in r else None,
                formula=r.get("formula"),
            )
            for r in data["rows"]
        )
        return ReferenceTable(table_id, kind, data["title"], criterion_rows=rows)
    rows = []
    for r in data["rows"]:
        if "vector" in r:
            vec = tuple(r["vector"])
            rows.append(CandidateRow(vec[:-1], ValueCondition((vec[-1],))))
        else:
            rows.append(CandidateRow(tuple(r["prefix"]), _parse_condition(r["last"])))
    return ReferenceTable(
        table_id, kind, data["title"], m=data["m"], n=data["n"],
        candidate_rows_=tuple(rows),
    )


def classification(m: int, n: int) -> str:
    """'proved' if the reference marks the pair as settled, else 'candidate'.

    Proof status only ever comes from the bundled data; computation at a
    finite bound can never upgrade a pair on its own.
    """
    table = load_reference_table(4)
    for row in table.criterion_rows:
        if row.matches(m, n):
            return "proved" if row.proved else "candidate"
    return "candidate"


@dataclass(frozen=True)
class DiffLine:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class DiffReport:
    table_id: int
    lines: list[DiffLine] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(line.ok for line in self.lines)

    @property
    def mismatches(self) -> int:
        return sum(1 for line in self.lines if not line.ok)

    def summary(self) -> str:
        return f"table {self.table_id}: {len(self.lines)} rows checked, {self.mismatches} mismatches"

    def render(self) -> str:
        out = [self.summary()]
        for line in self.lines:
            mark = "ok" if line.ok else "MISMATCH"
            text = f"  {line.label}: {mark}"
            if line.detail:
                text += f" ({line.detail})"
            out.append(text)
        return "\n".join(out)

    def to_payload(self) -> dict:
        return {
            "schema": "tightforms/diff/v1",
            "table": self.table_id,
            "ok": self.ok,
            "rows_checked": len(self.lines),
            "mismatches": self.mismatches,
            "lines": [
                {"label": l.label, "ok": l.ok, "detail": l.detail} for l in self.lines
            ],
        }


def _fmt_vec(vec: tuple[int, ...]) -> str:
    return "(" + ",".join(map(str, vec)) + ")"


def _diff_candidates(vectors, table: ReferenceTable) -> DiffReport:
    computed = set(tuple(v) for v in vectors)
    report = DiffReport(table.table_id)
    claimed: set[tuple[int, ...]] = set()
    for row in table.candidate_rows_:
        expected = set(row.vectors())
        claimed.update(expected)
        missing = sorted(expected - computed)
        label = _fmt_vec(row.prefix) + "+last" if not row.is_single() else _fmt_vec(row.vectors()[0])
        if missing:
            report.lines.append(DiffLine(
                label, False,
                "missing " + ", ".join(_fmt_vec(v) for v in missing[:8])
                + ("..." if len(missing) > 8 else ""),
            ))
        else:
            report.lines.append(DiffLine(label, True))
    extras = sorted(computed - claimed, key=lambda v: (len(v), v))
    if extras:
        report.lines.append(DiffLine(
            "unlisted", False,
            "computed but not in reference: "
            + ", ".join(_fmt_vec(v) for v in extras[:8])
            + ("..." if len(extras) > 8 else ""),
        ))
    return report


def _diff_gamma(gammas: dict[int, int], table: ReferenceTable, subset=None) -> DiffReport:
    report = DiffReport(table.table_id)
    wanted = set(subset) if subset is not None else None
    for m, expected, _proved in table.gamma_entries:
        if wanted is not None and m not in wanted:
            continue
        got = gammas.get(m)
        if got == expected:
            report.lines.append(DiffLine(f"m={m}", True))
        else:
            report.lines.append(DiffLine(f"m={m}", False, f"expected {expected}, got {got}"))
    for m in sorted(gammas):
        if (wanted is None or m in wanted) and not any(e[0] == m for e in table.gamma_entries):
            report.lines.append(DiffLine(f"m={m}", False, "no reference entry"))
    return report


def _diff_criterion(sets, table: ReferenceTable) -> DiffReport:
    report = DiffReport(table.table_id)
    for cs in sets:
        label = f"m={cs.m}, n={cs.n}"
        row = next((r for r in table.criterion_rows if r.matches(cs.m, cs.n)), None)
        if row is None:
            report.lines.append(DiffLine(label, False, "no reference row"))
            continue
        expected = row.expected(cs.m, cs.n)
        if tuple(cs.elements) == expected:
            report.lines.append(DiffLine(label, True))
        else:
            missing = sorted(set(expected) - set(cs.elements))
            extra = sorted(set(cs.elements) - set(expected))
            detail = []
            if missing:
                detail.append(f"missing {missing}")
            if extra:
                detail.append(f"extra {extra}")
            report.lines.append(DiffLine(label, False, "; ".join(detail)))
    return report


def diff_reference(result, table_id: int, *, subset=None) -> DiffReport:
    """Compare a computed result against one bundled reference table.

    Accepts whatever naturally holds the table's content: an
    EscalationResult (its new-universal vectors) or plain vector list for
    candidate tables, a CriterionSet or list of them for the criterion
    table, a {m: gamma} mapping for the gamma table.
    """
    table = load_reference_table(table_id)
    if table.kind == "candidates":
        if isinstance(result, EscalationResult):
            if (result.m, result.n) != (table.m, table.n):
                raise ValueError(
                    f"table {table_id} is for m={table.m}, n={table.n}; "
                    f"got a run for m={result.m}, n={result.n}"
                )
            vectors = result.new_candidates()
        else:
            vectors = list(result)
        return _diff_candidates(vectors, table)
    if table.kind == "gamma":
        if isinstance(result, dict):
            gammas = dict(result)
        else:
            gammas = {cs.m: cs.gamma for cs in result}
        return _diff_gamma(gammas, table, subset)
    if table.kind == "criterion":
        sets = [result] if isinstance(result, CriterionSet) else list(result)
        return _diff_criterion(sets, table)
    raise ValueError(f"unknown table kind {table.kind!r}")


def _markdown_table(header: list[str], rows: list[list[str]]) -> str:
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines)


def _candidate_cells(rows: list[CandidateRow]) -> tuple[list[str], list[list[str]]]:
    width = max((r.length for r in rows), default=2)
    header = [f"a{i}" for i in range(1, width + 1)] + ["condition"]
    cells = []
    for row in rows:
        if row.is_single():
            vec = row.vectors()[0]
            body = [str(c) for c in vec] + [""] * (width - len(vec)) + [""]
        else:
            var = f"a{row.length}"
            body = [str(c) for c in row.prefix] + [var]
            body += [""] * (width - len(body))
            body.append(condition_text(row.last, var))
        cells.append(body)
    return header, cells


def _candidates_csv(rows: list[CandidateRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["length", "prefix", "kind", "lo", "hi", "exceptions", "values"])
    for row in rows:
        prefix = " ".join(map(str, row.prefix))
        cond = row.last
        if isinstance(cond, RangeCondition):
            writer.writerow([row.length, prefix, "range", cond.lo, cond.hi,
                             " ".join(map(str, cond.exceptions)), ""])
        else:
            values = condition_values(cond)
            writer.writerow([row.length, prefix, "values", "", "", "",
                             " ".join(map(str, values))])
    return buf.getvalue()


def _condition_payload(cond) -> dict:
    if isinstance(cond, ValueCondition):
        return {"values": list(cond.values)}
    if isinstance(cond, RangeCondition):
        out = {"lo": cond.lo, "hi": cond.hi}
        if cond.exceptions:
            out["except"] = list(cond.exceptions)
        return out
    return {"union": [_condition_payload(p) for p in cond.parts]}


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def emit(obj, fmt: str = "json") -> str:
    """Render a result in one of the supported formats.

    Handles criterion sets, escalation results, candidate row lists, diff
    reports, and {m: gamma} mappings.  JSON output is deterministic (sorted
    keys, canonical element order), so byte-identical runs give
    byte-identical files.
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")

    if isinstance(obj, CriterionSet):
        if fmt == "json":
            return _json_text({
                "m": obj.m, "n": obj.n,
                "cs": list(obj.elements), "gamma": obj.gamma,
            })
        if fmt == "markdown":
            return _markdown_table(
                ["m", "n", "criterion set", "gamma"],
                [[str(obj.m), str(obj.n),
                  "{" + ", ".join(map(str, obj.elements)) + "}", str(obj.gamma)]],
            ) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "n", "elements", "gamma"])
        writer.writerow([obj.m, obj.n, " ".join(map(str, obj.elements)), obj.gamma])
        return buf.getvalue()

    if isinstance(obj, EscalationResult):
        rows = candidate_rows(obj.new_candidates())
        if fmt == "json":
            payload = obj.to_payload()
            payload["new_candidate_rows"] = [
                {"prefix": list(r.prefix), "last": _condition_payload(r.last)}
                for r in rows
            ]
            return _json_text(payload)
        if fmt == "markdown":
            head = (
                f"escalation m={obj.m} n={obj.n} bound={obj.bound}: "
                + ("complete" if obj.complete else "depth guard hit")
                + f", depth {len(obj.levels)}\n\n"
            )
            summary = _markdown_table(
                ["level", "members", "universal", "new", "escalating"],
                [[str(lv.index), str(len(lv.members)), str(len(lv.universal)),
                  str(len(lv.new_universal)), str(len(lv.escalating))]
                 for lv in obj.levels],
            )
            header, cells = _candidate_cells(rows)
            body = _markdown_table(header, cells)
            return head + summary + "\n\nnew universal candidates\n\n" + body + "\n"
        return _candidates_csv(rows)

    if isinstance(obj, DiffReport):
        if fmt == "json":
            return _json_text(obj.to_payload())
        if fmt == "markdown":
            return _markdown_table(
                ["row", "status", "detail"],
                [[l.label, "ok" if l.ok else "MISMATCH", l.detail] for l in obj.lines],
            ) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label", "ok", "detail"])
        for line in obj.lines:
            writer.writerow([line.label, line.ok, line.detail])
        return buf.getvalue()

    if isinstance(obj, dict):
        ms = sorted(obj)
        if fmt == "json":
            return _json_text({"gamma": {str(m): obj[m] for m in ms}})
        if fmt == "markdown":
            return _markdown_table(
                ["m"] + [str(m) for m in ms],
                [["gamma"] + [str(obj[m]) for m in ms]],
            ) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "gamma"])
        for m in ms:
            writer.writerow([m, obj[m]])
        return buf.getvalue()

    if isinstance(obj, (list, tuple)) and all(isinstance(r, CandidateRow) for r in obj):
        rows = list(obj)
        if fmt == "json":
            return _json_text({
                "rows": [
                    {"prefix": list(r.prefix), "last": _condition_payload(r.last)}
                    for r in rows
                ]
            })
        if fmt == "markdown":
            header, cells = _candidate_cells(rows)
            return _markdown_table(header, cells) + "\n"
        return _candidates_csv(rows)

    raise TypeError(f"cannot emit {type(obj).__name__}")
