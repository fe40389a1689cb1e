"""Command-line interface.

Four subcommands: ``escalate`` runs the search and reports level sets and
candidates, ``criterion`` derives the criterion set (optionally with
verified witnesses), ``verify`` checks a single form, and ``tables``
reproduces a bundled reference table and diffs against it.  Results go to
stdout or --output; progress chatter goes to stderr so piped output stays
clean.  The same configuration always produces byte-identical output,
whatever the jobs setting.

Exit codes: 0 success (and exact match for ``tables``), 1 failed
comparison or verification, 2 usage errors, 3 depth-guard exhaustion.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .criterion import (
    WitnessVerificationError,
    criterion_set,
    minimality_witness,
)
from .escalation import (
    DepthGuardExceeded,
    is_new,
    run_escalation,
)
from .polygonal import canonical_vector, repr_set
from .tables import (
    FORMATS,
    classification,
    diff_reference,
    emit,
    load_reference_table,
    reference_table_ids,
    _json_text,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DEPTH = 3

CACHE_ENV = "TIGHTFORMS_CACHE_DIR"


def _positive(kind: str, minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{kind} must be an integer, got {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{kind} must be >= {minimum}, got {value}")
        return value
    return parse


def _parse_vector(text: str) -> tuple[int, ...]:
    parts = [p for chunk in text.split(",") for p in chunk.split()]
    try:
        return canonical_vector(int(p) for p in parts if p)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tightforms",
        description="Escalation search for tight universal polygonal forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_mn: bool = True) -> None:
        if with_mn:
            p.add_argument("--m", type=_positive("m", 3), required=True,
                           help="polygon order (>= 3)")
            p.add_argument("--n", type=_positive("n", 1), default=1,
                           help="universality target (default 1)")
        p.add_argument("--bound", type=_positive("bound", 1), default=1_000_000,
                       help="verification bound (default 1000000)")
        p.add_argument("--max-depth", type=_positive("max-depth", 1), default=None,
                       help="depth guard (default 2n+16)")
        p.add_argument("--jobs", type=_positive("jobs", 1), default=1,
                       help="worker processes (default 1)")
        p.add_argument("--format", choices=FORMATS, default="json",
                       help="output format (default json)")
        p.add_argument("--output", help="write the result here instead of stdout")
        p.add_argument("--cache-dir", default=None,
                       help=f"truant cache directory (default ${CACHE_ENV} if set)")
        p.add_argument("--quiet", action="store_true",
                       help="suppress progress output on stderr")

    p = sub.add_parser("escalate", help="run the escalation search")
    add_common(p)

    p = sub.add_parser("criterion", help="compute the criterion set and gamma")
    add_common(p)
    p.add_argument("--witnesses", action="store_true",
                   help="construct and verify a minimality witness per element")

    p = sub.add_parser("verify", help="check one form: tight, universal, new")
    p.add_argument("vector", type=_parse_vector,
                   help="coefficients, e.g. 1,2,5 or '1 2 5'")
    add_common(p)

    p = sub.add_parser("tables", help="reproduce a reference table and diff")
    p.add_argument("--id", type=int, required=True, dest="table_id",
                   help=f"reference table id ({reference_table_ids()[0]}-{reference_table_ids()[-1]})")
    p.add_argument("--subset", default=None,
                   help="gamma table: comma-separated polygon orders to check")
    p.add_argument("--m", type=_positive("m", 3), default=None,
                   help="criterion table: restrict to this polygon order")
    p.add_argument("--n", type=_positive("n", 1), default=None,
                   help="criterion table: restrict to this target")
    add_common(p, with_mn=False)

    return parser


def _cache_path(cache_dir: str, m: int, n: int, bound: int) -> str:
    return os.path.join(cache_dir, f"truants_m{m}_n{n}_b{bound}.txt")


def _load_cache(path: str) -> dict[tuple[int, ...], int | None]:
    cache: dict[tuple[int, ...], int | None] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    vec_text, value_text = line.split("=", 1)
                    vec = tuple(int(p) for p in vec_text.split(","))
                    if not vec or any(c < 1 for c in vec) or list(vec) != sorted(vec):
                        raise ValueError(line)
                    value = None if value_text == "above" else int(value_text)
                except ValueError:
                    print(f"warning: {path}:{lineno}: unreadable cache line skipped",
                          file=sys.stderr)
                    continue
                cache[vec] = value
    except FileNotFoundError:
        pass
    except OSError as exc:
        print(f"warning: cannot read cache {path}: {exc}", file=sys.stderr)
    return cache


def _append_cache(path: str, fresh: dict[tuple[int, ...], int | None]) -> None:
    if not fresh:
        return
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "a", encoding="utf-8") as fh:
            for vec in sorted(fresh):
                value = fresh[vec]
                text = "above" if value is None else str(value)
                fh.write(",".join(map(str, vec)) + "=" + text + "\n")
    except OSError as exc:
        print(f"warning: cannot write cache {path}: {exc}", file=sys.stderr)


class _Progress:
    def __init__(self, enabled: bool, label: str) -> None:
        self.enabled = enabled
        self.label = label
        self.start = time.monotonic()
        self.nodes = 0

    def level(self, lv) -> None:
        if not self.enabled:
            return
        self.nodes += len(lv.members)
        elapsed = time.monotonic() - self.start
        rate = self.nodes / elapsed if elapsed > 0 else 0.0
        print(
            f"{self.label} level {lv.index}: members={len(lv.members)} "
            f"universal={len(lv.universal)} escalating={len(lv.escalating)} "
            f"({elapsed:.1f}s, {rate:.0f} vectors/s)",
            file=sys.stderr,
        )


def _run(args, m: int, n: int):
    """Escalation run honoring cache and progress options; shared by the
    escalate/criterion/tables commands."""
    cache_dir = args.cache_dir or os.environ.get(CACHE_ENV)
    seed: dict[tuple[int, ...], int | None] = {}
    path = None
    if cache_dir:
        path = _cache_path(cache_dir, m, n, args.bound)
        seed = _load_cache(path)
    progress = _Progress(not args.quiet, f"m={m} n={n}")
    result = run_escalation(
        m, n, args.bound,
        max_depth=args.max_depth, jobs=args.jobs,
        truant_cache=seed, progress=progress.level,
    )
    if path is not None:
        fresh = {v: t for v, t in result.truants.items() if v not in seed}
        _append_cache(path, fresh)
    return result


def _write(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_escalate(args) -> int:
    try:
        result = _run(args, args.m, args.n)
    except DepthGuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        _write(args, emit(exc.partial, args.format))
        return EXIT_DEPTH
    _write(args, emit(result, args.format))
    return EXIT_OK


def cmd_criterion(args) -> int:
    try:
        result = _run(args, args.m, args.n)
    except DepthGuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEPTH
    cs = criterion_set(result)
    if not args.witnesses:
        _write(args, emit(cs, args.format))
        return EXIT_OK
    witnesses = {}
    for g in cs.elements:
        try:
            witnesses[g] = minimality_witness(cs.m, cs.n, g, cs, args.bound)
        except WitnessVerificationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
    if args.format == "json":
        _write(args, _json_text({
            "m": cs.m, "n": cs.n, "cs": list(cs.elements), "gamma": cs.gamma,
            "witnesses": {str(g): list(w) for g, w in witnesses.items()},
        }))
    else:
        text = emit(cs, args.format)
        lines = ["witnesses (each misses exactly its element):"]
        for g in cs.elements:
            lines.append(f"  {g}: ({', '.join(map(str, witnesses[g]))})")
        _write(args, text + "\n" + "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    vec = args.vector
    r = repr_set(args.m, vec, args.bound)
    t = r.first_missing(args.n)
    low = r.first_present(1)
    tight = (low is None or low >= args.n) and t is None
    universal = t is None
    new = is_new(args.m, args.n, vec, args.bound) if universal else False
    payload = {
        "m": args.m, "n": args.n, "bound": args.bound, "vector": list(vec),
        "universal": universal,
        "tight_universal": tight,
        "new": new,
        "truant": t,
        "first_value_covered": low,
        "status": classification(args.m, args.n),
    }
    if args.format == "json":
        _write(args, _json_text(payload))
    else:
        lines = [
            f"form: m={args.m}, coefficients ({', '.join(map(str, vec))})",
            f"covers every value in [{args.n}, {args.bound}]: {'yes' if universal else 'no'}",
        ]
        if not universal:
            lines.append(f"first uncovered value: {t}")
        lines.append(f"tight (nothing below {args.n}): {'yes' if tight else 'no'}")
        if universal:
            lines.append(f"new (no tight universal subform): {'yes' if new else 'no'}")
        lines.append(f"pair status in reference data: {payload['status']}")
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _tables_gamma(args, table) -> tuple[dict[int, int], list]:
    subset = None
    if args.subset:
        subset = [int(p) for p in args.subset.split(",") if p]
    orders = [e[0] for e in table.gamma_entries]
    if subset is not None:
        orders = [m for m in orders if m in subset]
    gammas = {}
    for m in orders:
        result = _run(args, m, table.n)
        gammas[m] = criterion_set(result).gamma
    return gammas, subset


def cmd_tables(args) -> int:
    try:
        table = load_reference_table(args.table_id)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if table.kind == "gamma":
            gammas, subset = _tables_gamma(args, table)
            report = diff_reference(gammas, args.table_id, subset=subset)
        elif table.kind == "criterion":
            pairs = []
            for row in table.criterion_rows:
                if row.m is None:
                    m = 10 if args.m is None else args.m
                else:
                    m = row.m
                if args.m is not None and m != args.m:
                    continue
                if row.n is not None:
                    ns = [row.n]
                else:
                    lo = 2 * m - 5 if row.n_min_rule == "2m-5" else row.n_min
                    ns = list(range(lo, (row.n_max or lo) + 1))
                for n in ns:
                    if args.n is not None and n != args.n:
                        continue
                    pairs.append((m, n))
            sets = [criterion_set(_run(args, m, n)) for m, n in sorted(set(pairs))]
            report = diff_reference(sets, args.table_id)
        else:
            result = _run(args, table.m, table.n)
            report = diff_reference(result, args.table_id)
    except DepthGuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEPTH
    _write(args, emit(report, args.format))
    if not args.quiet:
        print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "escalate": cmd_escalate,
        "criterion": cmd_criterion,
        "verify": cmd_verify,
        "tables": cmd_tables,
    }
    try:
        return handlers[args.command](args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
