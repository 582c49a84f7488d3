"""Command-line front end: ``wlstar learn|equiv|eval|random|bench|export-dot``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field

from . import fileformat, semifield
from .automaton import as_string, equivalent, evaluate, random_wdfsa, show_string
from .errors import (
    AlphabetMismatch,
    IterationCapExceeded,
    OracleInconsistent,
    ParseError,
    SemifieldMismatch,
)
from .learner import lstar
from .oracle import bruteforce_oracle, reference_oracle

EXIT_OK, EXIT_DIFFERENT, EXIT_INPUT, EXIT_ORACLE, EXIT_CAP = 0, 1, 2, 3, 4


@dataclass
class RunReport:
    automaton: dict
    stats: dict
    verification: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(asdict(self), indent=2, ensure_ascii=False, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        return cls(doc["automaton"], doc["stats"], doc.get("verification", {}), doc.get("config", {}))


def stats_dict(stats):
    return {
        "membership_queries": stats.ledger.membership_count,
        "distinct_membership_queries": stats.ledger.distinct_membership_count,
        "equivalence_queries": stats.ledger.equivalence_count,
        "consistency_fixes": stats.consistency_fixes,
        "closure_fixes": stats.closure_fixes,
        "null_repairs": stats.null_repairs,
        "counterexamples": [show_string(t) for t in stats.counterexamples],
        "dim_history": list(stats.dim_history),
        "iterations": stats.iterations,
        "wall_time": stats.wall_time,
    }


def _err(msg):
    print(f"error: {msg}", file=sys.stderr)


def _load(path, args=None):
    return fileformat.load(
        path,
        tolerance=getattr(args, "tolerance", None),
        semifield_override=getattr(args, "semifield", None),
    )


def cmd_learn(args):
    try:
        target = _load(args.target, args)
    except (ParseError, OSError) as exc:
        _err(exc)
        return EXIT_INPUT
    try:
        result = lstar(reference_oracle(target), max_iter=args.max_iter)
    except OracleInconsistent as exc:
        _err(exc)
        return EXIT_ORACLE
    except IterationCapExceeded as exc:
        _err(exc)
        return EXIT_CAP
    learned = result.automaton
    verification = {}
    code = EXIT_OK
    if args.verify_depth is not None:
        t = bruteforce_oracle(target, args.verify_depth).equivalence(learned)
        verification = {
            "depth": args.verify_depth,
            "result": "pass" if t is None else "fail",
            "counterexample": None if t is None else show_string(t),
        }
        if t is not None:
            code = EXIT_DIFFERENT
    report = RunReport(
        automaton=fileformat.to_dict(learned),
        stats=stats_dict(result.stats),
        verification=verification,
        config={
            "target": args.target,
            "semifield": learned.sf.name,
            "tolerance": args.tolerance,
            "seed": args.seed,
            "max_iter": args.max_iter,
        },
    )
    if args.out:
        fileformat.dump(learned, args.out)
    else:
        sys.stdout.write(fileformat.dumps(learned))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(fileformat.to_dot(learned, name="learned"))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    s = result.stats
    print(
        f"learned {learned.n_states} states with {s.ledger.equivalence_count} equivalence "
        f"and {s.ledger.membership_count} membership queries",
        file=sys.stderr,
    )
    if verification:
        print(f"brute-force check to length {args.verify_depth}: {verification['result']}", file=sys.stderr)
    return code


def cmd_equiv(args):
    try:
        a = _load(args.a, args)
        b = _load(args.b, args)
        t = equivalent(a, b)
    except (ParseError, OSError, AlphabetMismatch, SemifieldMismatch) as exc:
        _err(exc)
        return EXIT_INPUT
    if t is None:
        print("equivalent")
        return EXIT_OK
    sf = a.sf
    print(show_string(t, a.alphabet) or "ε")
    print(f"{args.a}: {sf.format(evaluate(a, t))}")
    print(f"{args.b}: {sf.format(evaluate(b, t))}")
    return EXIT_DIFFERENT


def cmd_eval(args):
    try:
        a = _load(args.automaton, args)
        x = as_string(args.string, a.alphabet)
        w = evaluate(a, x)
    except (ParseError, OSError, KeyError) as exc:
        _err(exc)
        return EXIT_INPUT
    print(a.sf.format(w))
    return EXIT_OK


def _alphabet(size):
    if size <= 26:
        return tuple(chr(ord("a") + i) for i in range(size))
    return tuple(f"s{i}" for i in range(size))


def cmd_random(args):
    if args.n < 1 or args.sigma < 1:
        _err("need --n >= 1 and --sigma >= 1")
        return EXIT_INPUT
    try:
        sf = semifield.get(args.semifield, args.tolerance)
    except ValueError as exc:
        _err(exc)
        return EXIT_INPUT
    a = random_wdfsa(args.n, _alphabet(args.sigma), args.seed, sf)
    if args.out:
        fileformat.dump(a, args.out)
    else:
        sys.stdout.write(fileformat.dumps(a))
    return EXIT_OK


BENCH_FIELDS = [
    "n", "sigma", "rep", "seed", "states", "membership_queries", "equivalence_queries",
    "consistency_fixes", "closure_fixes", "max_counterexample_length", "wall_time",
]


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def loglog_slope(ns, times):
    """Least-squares slope of log(time) against log(n) over per-n medians."""
    by_n = {}
    for n, t in zip(ns, times):
        by_n.setdefault(n, []).append(t)
    xs = sorted(by_n)
    if len(xs) < 2:
        return math.nan
    ys = [math.log(max(statistics.median(by_n[n]), 1e-9)) for n in xs]
    return statistics.linear_regression([math.log(n) for n in xs], ys).slope


def run_bench(sizes, sigmas, reps, seed, sf, out):
    writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    ns, times = [], []
    for sigma in sigmas:
        for n in sizes:
            for rep in range(reps):
                s = seed * 1_000_003 + n * 1009 + sigma * 101 + rep
                target = random_wdfsa(n, _alphabet(sigma), s, sf)
                started = time.perf_counter()
                result = lstar(reference_oracle(target))
                elapsed = time.perf_counter() - started
                st = result.stats
                writer.writerow({
                    "n": n, "sigma": sigma, "rep": rep, "seed": s,
                    "states": result.automaton.n_states,
                    "membership_queries": st.ledger.membership_count,
                    "equivalence_queries": st.ledger.equivalence_count,
                    "consistency_fixes": st.consistency_fixes,
                    "closure_fixes": st.closure_fixes,
                    "max_counterexample_length": st.max_counterexample_length,
                    "wall_time": f"{elapsed:.6f}",
                })
                ns.append(n)
                times.append(elapsed)
    return loglog_slope(ns, times)


def cmd_bench(args):
    try:
        sizes = _int_list(args.sizes)
        sigmas = _int_list(args.sigma)
        sf = semifield.get(args.semifield, args.tolerance)
    except ValueError as exc:
        _err(exc)
        return EXIT_INPUT
    if not sizes or not sigmas or min(sizes) < 1 or min(sigmas) < 1 or args.reps < 1:
        _err("invalid grid: sizes, alphabet sizes and repetitions must be positive")
        return EXIT_INPUT
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            slope = run_bench(sizes, sigmas, args.reps, args.seed, sf, fh)
    else:
        slope = run_bench(sizes, sigmas, args.reps, args.seed, sf, sys.stdout)
    print(f"# log-log slope of wall time vs N: {slope:.3f}", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_export_dot(args):
    try:
        a = _load(args.automaton, args)
    except (ParseError, OSError) as exc:
        _err(exc)
        return EXIT_INPUT
    text = fileformat.to_dot(a, name=args.name)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="wlstar", description="Weighted L* for semifield-weighted DFAs.")
    sub = p.add_subparsers(dest="command", required=True)

    def weights(sp):
        sp.add_argument("--semifield", choices=semifield.NAMES, help="override the file's semifield")
        sp.add_argument("--tolerance", type=float, help="relative tolerance for the real semifield")

    sp = sub.add_parser("learn", help="learn a target automaton through a reference oracle")
    sp.add_argument("target")
    weights(sp)
    sp.add_argument("--max-iter", type=int)
    sp.add_argument("--verify-depth", type=int, help="brute-force check up to this length")
    sp.add_argument("--out")
    sp.add_argument("--dot")
    sp.add_argument("--report")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_learn)

    sp = sub.add_parser("equiv", help="shortest string weighted differently by two automata")
    sp.add_argument("a")
    sp.add_argument("b")
    weights(sp)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("eval", help="weight of a string")
    sp.add_argument("automaton")
    sp.add_argument("string", nargs="?", default="")
    weights(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("random", help="write a random trimmed WDFSA")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--sigma", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--semifield", choices=semifield.NAMES, default="rational")
    sp.add_argument("--tolerance", type=float)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_random)

    sp = sub.add_parser("bench", help="time the learner over a grid of random targets")
    sp.add_argument("--sizes", default="2,4,8,16")
    sp.add_argument("--sigma", default="2")
    sp.add_argument("--reps", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--semifield", choices=semifield.NAMES, default="rational")
    sp.add_argument("--tolerance", type=float)
    sp.add_argument("--out", help="CSV path (default stdout)")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("export-dot", help="Graphviz rendering of an automaton file")
    sp.add_argument("automaton")
    weights(sp)
    sp.add_argument("--name", default="A")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
