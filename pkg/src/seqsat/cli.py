"""Command line: decide, solve, audit, fuzz, stats.

Exit codes: 10 satisfiable (claimed or verified), 20 unsatisfiable, 30
stalled witness extraction, 3 soundness or invariant violation in an audit,
1 usage, parse or spec error, 0 for report-only commands.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .comparing import ComparePolicy, Mode, Outcome, decide
from .dimacs import DimacsError, emit_dimacs, read_dimacs_file
from .harness import (
    BUILTIN_SPECS,
    CorpusSpec,
    SpecError,
    Stratum,
    differential_run,
    findings_dir,
    resolve_spec,
)
from .solution import SolveStatus, solve
from .stats import scaling_sweep, to_csv, work_report

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_STALLED = 30
EXIT_VIOLATION = 3
EXIT_ERROR = 1
EXIT_REPORT = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--single-pass", action="store_true", help="compare each S-set pair once per run")
    p.add_argument("--no-phi", action="store_true", help="disable the Phi rule during determinations")
    p.add_argument("--lifo", action="store_true", help="LIFO worklist for the rule cascade")


def _policy(args) -> ComparePolicy:
    return ComparePolicy(
        mode=Mode.SINGLE_PASS if args.single_pass else Mode.REPEAT_UNTIL_STABLE,
        phi_enabled=not args.no_phi,
        lifo=args.lifo,
    )


def _range(text: str) -> list[int]:
    try:
        parts = [int(x) for x in text.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LOW:HIGH, got {text!r}") from None
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2 or parts[0] < 1 or parts[0] > parts[1]:
        raise argparse.ArgumentTypeError(f"expected N or LOW:HIGH, got {text!r}")
    return parts


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="seqsat", description="Edge/vertex-sequence 3-SAT procedure with oracle audits.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decide", help="decide a DIMACS file")
    d.add_argument("path")
    d.add_argument("--stats", action="store_true", help="print the verdict with run statistics as JSON")
    d.add_argument("--explain", action="store_true", help="print preprocessing steps and per-run counts")
    d.add_argument("--no-preprocess", action="store_true", help="only normalize before building sequences")
    d.add_argument("--strict", action="store_true", help="treat DIMACS warnings as errors")
    _policy_flags(d)

    s = sub.add_parser("solve", help="decide and extract a verified assignment")
    s.add_argument("path")
    s.add_argument("--stats", action="store_true")
    s.add_argument("--explain", action="store_true")
    s.add_argument("--strict", action="store_true")
    _policy_flags(s)

    a = sub.add_parser("audit", help="differential run over a corpus spec")
    a.add_argument("spec", help=f"JSON spec path or one of: {', '.join(BUILTIN_SPECS)}")
    a.add_argument("--out", help="write the JSON report here instead of stdout")
    a.add_argument("--workers", type=int, default=1)
    a.add_argument("--limit", type=int, help="check at most this many instances")

    f = sub.add_parser("fuzz", help="differential run over seeded random formulas")
    f.add_argument("--count", type=int, default=200)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--vars", type=_range, default=[3, 8], metavar="LOW:HIGH")
    f.add_argument("--clauses", type=_range, default=[1, 16], metavar="LOW:HIGH")
    f.add_argument("--mode", choices=("uniform", "clean", "adversarial"), default="uniform")
    f.add_argument("--no-preprocess", action="store_true")
    f.add_argument("--confluence", action="store_true", help="also compare the four policy variants")
    f.add_argument("--out")
    f.add_argument("--workers", type=int, default=1)
    _policy_flags(f)

    t = sub.add_parser("stats", help="work accounting for files, directories or a scaling sweep")
    t.add_argument("paths", nargs="*")
    t.add_argument("--csv", help="write one CSV row per instance to this file ('-' for stdout)")
    t.add_argument("--scaling", action="store_true", help="run the random scaling sweep")
    t.add_argument("--sizes", default="30,60,120,240", help="comma-separated n values for --scaling")
    t.add_argument("--seed", type=int, default=1)
    t.add_argument("--instances", type=int, default=1, help="formulas per size for --scaling")
    t.add_argument("--no-preprocess", action="store_true")
    _policy_flags(t)

    for sp in (d, s, a, f, t):
        sp.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _read(path: str, strict: bool = False):
    try:
        formula, diag = read_dimacs_file(path, strict=strict)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except DimacsError as exc:
        raise UsageError(f"{path}: {exc}") from None
    except UnicodeDecodeError:
        raise UsageError(f"{path}: not a text file") from None
    for line, msg in diag.warnings:
        print(f"c warning: line {line}: {msg}", file=sys.stderr)
    return formula


def _explain_preprocess(pre) -> None:
    if pre is None:
        return
    for line in pre.log_lines().splitlines():
        print(f"c {line}")


def _explain_runs(verdict) -> None:
    for r in verdict.rounds:
        print(
            f"c run {r.run_index}: pairs={r.sset_pairs_compared} determinations={r.determinations} "
            f"intersections={r.intersections} bit_changes={r.bit_changes} refined={r.refined_determinations}"
        )


def cmd_decide(args) -> int:
    formula = _read(args.path, args.strict)
    v = decide(formula, _policy(args), use_preprocess=not args.no_preprocess)
    if args.explain:
        _explain_preprocess(v.preprocess)
        _explain_runs(v)
    if v.outcome is Outcome.UNSAT:
        print(f"c reason: {v.unsat_reason}")
        print("s UNSATISFIABLE")
        code = EXIT_UNSAT
    elif v.outcome is Outcome.SOLVED_IN_PREPROCESS:
        print("c solved in preprocessing")
        print("s SATISFIABLE")
        print(v.assignment.v_line())
        code = EXIT_SAT
    else:
        print(f"c {v.claim_note}")
        print("s SATISFIABLE (claimed)")
        code = EXIT_SAT
    if args.stats:
        print(v.to_json())
    return code


def cmd_solve(args) -> int:
    formula = _read(args.path, args.strict)
    policy = _policy(args)
    report = solve(formula, policy)
    if args.explain:
        for i, v in enumerate(report.verdicts):
            print(f"c stage {i}: {len(v.preprocess.reduced) if v.preprocess else '?'} clauses, {v.runs} runs")
        print(f"c chosen literals: {' '.join(map(str, report.chosen))}")
    if args.stats:
        print(json.dumps({
            "schema": 1,
            "status": report.status.value,
            "iterations": report.iterations,
            "iteration_bound": report.iteration_bound,
            "stages": [v.to_dict() for v in report.verdicts],
        }))
    if report.status is SolveStatus.UNSAT:
        print(f"c reason: {report.reason}")
        print("s UNSATISFIABLE")
        return EXIT_UNSAT
    if report.status is SolveStatus.SAT:
        if report.solved_in_preprocess:
            print("c solved in preprocessing")
        print("s SATISFIABLE")
        print(report.assignment.v_line())
        return EXIT_SAT
    out_dir = findings_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"stalled-{Path(args.path).stem}.cnf"
    comments = ["kind: stalled", f"reason: {report.reason}", f"policy: {json.dumps(policy.describe())}"]
    path.write_text(emit_dimacs(formula, comments))
    print("c " + "=" * 60)
    print(f"c FINDING: witness extraction stalled: {report.reason}")
    print(f"c counterexample written to {path}")
    print("c " + "=" * 60)
    print("s UNKNOWN")
    return EXIT_STALLED


def _progress(verbose: int):
    if not verbose:
        return None
    count = [0]

    def tick(rec):
        count[0] += 1
        if verbose > 1 or rec.findings or count[0] % 1000 == 0:
            kinds = ",".join(sorted({f.kind for f in rec.findings})) or "-"
            print(f"{count[0]} {rec.name} ours={rec.ours} oracle={rec.oracle} findings={kinds}", file=sys.stderr)

    return tick


def _finish_report(report, out: str | None) -> int:
    text = report.to_json(indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)
    summary = (
        f"{report.corpus_id}: {report.instances} instances, agreement {report.agreement_rate:.4f}, "
        f"witnessed bits {report.cov_bits - report.cov_unwitnessed}/{report.cov_bits}, "
        f"soundness {'ok' if report.ok else 'VIOLATED'}"
    )
    print(summary, file=sys.stderr)
    for fnd in report.findings[:20]:
        print(f"  {fnd.kind}: {fnd.instance} -> {fnd.path}", file=sys.stderr)
    return EXIT_REPORT if report.ok else EXIT_VIOLATION


def cmd_audit(args) -> int:
    try:
        spec = resolve_spec(args.spec)
    except SpecError as exc:
        raise UsageError(f"spec error: {exc}") from None
    if args.limit is not None:
        spec.limit = args.limit
    report = differential_run(spec, workers=args.workers, progress=_progress(args.verbose))
    return _finish_report(report, args.out)


def cmd_fuzz(args) -> int:
    stratum = Stratum(
        count=args.count,
        mode=args.mode,
        vars=tuple(args.vars),
        clauses=tuple(args.clauses),
        seed=args.seed,
    )
    if args.mode != "adversarial" and stratum.vars[0] < 3:
        raise UsageError("uniform and clean formulas need at least 3 variables")
    spec = CorpusSpec(
        id=f"fuzz-{args.mode}-s{args.seed}",
        random=[stratum],
        policy=_policy(args),
        preprocess=not args.no_preprocess,
        confluence=args.confluence,
    )
    report = differential_run(spec, workers=args.workers, progress=_progress(args.verbose))
    return _finish_report(report, args.out)


def _expand(paths: list[str]) -> list[Path]:
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(q for q in p.iterdir() if q.suffix in (".cnf", ".dimacs")))
        else:
            out.append(p)
    return out


def cmd_stats(args) -> int:
    policy = _policy(args)
    if args.scaling:
        try:
            sizes = [int(x) for x in args.sizes.split(",")]
        except ValueError:
            raise UsageError(f"bad --sizes {args.sizes!r}") from None
        if any(n <= 0 or n % 3 for n in sizes):
            raise UsageError("scaling sizes must be positive multiples of 3")

        def tick(r):
            if args.verbose:
                print(f"n={r.n} c={r.c} runs={r.runs} intersections={r.intersections} {r.seconds:.1f}s", file=sys.stderr)

        rep = scaling_sweep(sizes, seed=args.seed, instances=args.instances, policy=policy, progress=tick)
        if args.csv:
            _write_csv(args.csv, rep.reports)
        print(json.dumps(rep.to_dict(), indent=2))
        return EXIT_REPORT
    if not args.paths:
        raise UsageError("stats needs input paths or --scaling")
    files = _expand(args.paths)
    reports = []
    for path in files:
        formula = _read(str(path))
        reports.append(work_report(formula, policy, name=str(path), use_preprocess=not args.no_preprocess))
    if args.csv or len(files) > 1 or Path(args.paths[0]).is_dir():
        _write_csv(args.csv or "-", reports)
    else:
        print(json.dumps(reports[0].to_dict(), indent=2))
    return EXIT_REPORT


def _write_csv(target: str, reports) -> None:
    text = to_csv(reports)
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


COMMANDS = {
    "decide": cmd_decide,
    "solve": cmd_solve,
    "audit": cmd_audit,
    "fuzz": cmd_fuzz,
    "stats": cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"seqsat: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
