"""Command-line driver: ``fbsynth solve FILE`` and ``fbsynth bench DIR``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from .dnc import solve_with_dnc
from .search import SearchConfig, Solution, solve
from .sygus import SygusError, parse_problem, parse_sketch, render_solution
from .terms import to_sexpr

EXIT_SOLUTION, EXIT_USAGE, EXIT_UNREALIZABLE, EXIT_TIMEOUT = 0, 2, 10, 20
EXIT_CODES = {"solution": EXIT_SOLUTION, "unrealizable": EXIT_UNREALIZABLE, "timeout": EXIT_TIMEOUT}
CSV_FIELDS = ["id", "outcome", "time_s", "analysis_s", "size", "dequeued", "pruned", "pool_max_n"]
TIMING_FIELDS = ("time_s", "analysis_s")


@dataclass
class RunReport:
    id: str
    outcome: str
    time_s: float
    analysis_s: float
    size: int = None
    dequeued: int = 0
    pruned: int = 0
    pool_max_n: int = 0
    solution: str = None


def _config(args) -> SearchConfig:
    return SearchConfig(max_height=args.max_height, max_size=args.max_size, timeout=args.timeout,
                        mode=args.mode, pruning=args.pruning, queue=args.queue,
                        trace=getattr(args, "trace", False))


def run_problem(path, config: SearchConfig, dnc: bool = False, sketches=None):
    """Solve one file; returns ``(report, outcome, problem)``.  Parse errors propagate."""
    problem = parse_problem(Path(path).read_text())
    if sketches:
        config = replace(config, sketches=[parse_sketch(problem, s) for s in sketches])
    t0 = time.perf_counter()
    outcome = (solve_with_dnc if dnc else solve)(problem, config)
    elapsed = time.perf_counter() - t0
    st = outcome.stats
    solution = render_solution(problem, outcome.term) if isinstance(outcome, Solution) else None
    report = RunReport(Path(path).stem, outcome.kind, round(elapsed, 6), round(st.analysis_time, 6),
                       outcome.term.size if isinstance(outcome, Solution) else None,
                       st.dequeued, st.pruned, st.n, solution)
    return report, outcome, problem


def _bench_worker(job):
    path, config, dnc = job
    try:
        return run_problem(path, config, dnc)[0]
    except (SygusError, OSError) as exc:
        return RunReport(Path(path).stem, "error", 0.0, 0.0, solution=str(exc))


def _summary(reports) -> dict:
    counts = {k: sum(r.outcome == k for r in reports)
              for k in ("solution", "unrealizable", "timeout", "error")}
    times = [r.time_s for r in reports]
    return {"problems": len(reports), **counts,
            "mean_time_s": round(statistics.fmean(times), 6) if times else None,
            "median_time_s": round(statistics.median(times), 6) if times else None,
            "mean_analysis_s": round(statistics.fmean([r.analysis_s for r in reports]), 6)
            if reports else None}


def emit_report(reports, fmt: str = "csv") -> str:
    """Serialize run reports as CSV (records plus a ``#summary`` row) or JSON."""
    reports = list(reports)
    summary = _summary(reports)
    if fmt == "json":
        return json.dumps({"records": [asdict(r) for r in reports], "summary": summary},
                          indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in reports:
        row = asdict(r)
        w.writerow(["" if row[f] is None else row[f] for f in CSV_FIELDS])
    if reports:
        counts = ";".join(f"{k}={summary[k]}" for k in ("solution", "unrealizable", "timeout", "error"))
        w.writerow(["#summary", counts,
                    f"mean={summary['mean_time_s']};median={summary['median_time_s']}",
                    f"mean={summary['mean_analysis_s']}", "", "", "", ""])
    return buf.getvalue()


def strip_timing(csv_text: str) -> str:
    """The CSV with its timing columns removed, for run-to-run comparison."""
    rows = list(csv.reader(io.StringIO(csv_text)))
    if not rows:
        return ""
    keep = [k for k, name in enumerate(rows[0]) if name not in TIMING_FIELDS]
    return "\n".join(",".join(r[k] for k in keep if k < len(r)) for r in rows) + "\n"


def _add_search_flags(p, timeout):
    p.add_argument("--max-height", type=int, default=1, metavar="D",
                   help="maximum sketch height (default 1)")
    p.add_argument("--max-size", type=int, default=None, metavar="N",
                   help="give up once components would exceed N nodes")
    p.add_argument("--timeout", type=float, default=timeout, metavar="SECS")
    p.add_argument("--mode", choices=["bidir", "topdown"], default="bidir")
    p.add_argument("--pruning", choices=["full", "forward", "off"], default="full")
    p.add_argument("--queue", choices=["size", "fifo"], default="size",
                   help="worklist order: smallest candidate first, or insertion order")
    p.add_argument("--dnc", action="store_true", help="divide-and-conquer for conditionals")


def build_parser():
    parser = argparse.ArgumentParser(prog="fbsynth",
                                     description="Bit-vector synthesis by example with abstract pruning")
    sub = parser.add_subparsers(dest="command", required=True)
    ps = sub.add_parser("solve", help="solve one SyGuS file")
    ps.add_argument("file")
    _add_search_flags(ps, 600.0)
    ps.add_argument("--stats-json", metavar="PATH", help="write the run report as JSON")
    ps.add_argument("--trace", action="store_true", help="log search events to stderr")
    ps.add_argument("--sketch", action="append", metavar="TERM",
                    help="search only these sketches (repeatable); nonterminal names mark holes")
    pb = sub.add_parser("bench", help="solve every .sl file in a directory")
    pb.add_argument("dir")
    _add_search_flags(pb, 600.0)
    pb.add_argument("--jobs", type=int, default=1, metavar="K")
    pb.add_argument("--csv", metavar="PATH", help="write the CSV here instead of stdout")
    pb.add_argument("--json", metavar="PATH", help="also write a JSON report")
    return parser


def _cmd_solve(args) -> int:
    try:
        report, outcome, _ = run_problem(args.file, _config(args), args.dnc, args.sketch)
    except (SygusError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.trace:
        for event in outcome.stats.events:
            print("trace:", *event, file=sys.stderr)
    if report.solution is not None:
        print(report.solution)
    else:
        print(report.outcome)
    if args.stats_json:
        data = asdict(report)
        data["stats"] = outcome.stats.as_dict()
        if isinstance(outcome, Solution):
            data["term"] = to_sexpr(outcome.term)
        Path(args.stats_json).write_text(json.dumps(data, indent=2) + "\n")
    return EXIT_CODES[outcome.kind]


def _cmd_bench(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        print(f"error: {root} is not a directory", file=sys.stderr)
        return EXIT_USAGE
    files = sorted(root.glob("*.sl"))
    config = _config(args)
    jobs = [(str(f), config, args.dnc) for f in files]
    with ProcessPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        reports = list(pool.map(_bench_worker, jobs))
    reports.sort(key=lambda r: r.id)
    text = emit_report(reports, "csv")
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    if args.json:
        Path(args.json).write_text(emit_report(reports, "json"))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        _config(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return _cmd_solve(args) if args.command == "solve" else _cmd_bench(args)


if __name__ == "__main__":
    sys.exit(main())
