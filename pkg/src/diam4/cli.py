"""Command-line entry point.

Exit codes: 0 success / no violations, 1 I/O or parse error, 2 usage or
parameter error, 3 violations found (census flags or lemma counterexamples).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__, graph6
from .errors import ConvergenceFailure, CorpusIncomplete, Graph6Error, InvalidParameters, UnsupportedSize
from .spectral import DEFAULT_TOL, exact_radius_snk, exact_radius_snk_plus, spectral_radius
from .trees import enumerate_diam4_trees
from .verification import (
    LEMMA_CHECKS,
    census_conjecture_b,
    census_theorem,
    report_csv,
    report_human,
    report_json,
    valid_lemma_parameters,
)

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3
TOL_ENV = "DIAM4_TOL"

log = logging.getLogger("diam4")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _pair(text: str) -> tuple[int, int]:
    try:
        n, k = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N,K, got {text!r}") from None
    return n, k


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    return float(raw) if raw else DEFAULT_TOL


def _open_in(path: str | None) -> TextIO:
    if path in (None, "-"):
        return sys.stdin
    return open(path, encoding="ascii")


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _fmt_radius(x: float) -> str:
    return repr(float(f"{x:.12g}"))


def cmd_gen_trees(args: argparse.Namespace) -> int:
    trees = enumerate_diam4_trees(args.order)
    if args.format == "graph6":
        lines = [graph6.encode(t.graph()) for t in trees]
    else:
        lines = [t.notation for t in trees]
    _write("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK


def cmd_radius(args: argparse.Namespace) -> int:
    tol = args.tol if args.tol is not None else _default_tol()
    out = []
    if args.exact_snk or args.exact_snk_plus:
        from .graph import make_snk, make_snk_plus

        if args.exact_snk:
            n, k = args.exact_snk
            exact, g = exact_radius_snk(n, k), make_snk(n, k)
            out.append(f"S_({n},{k})")
        else:
            n, k = args.exact_snk_plus
            exact, g = exact_radius_snk_plus(n, k), make_snk_plus(n, k)
            out.append(f"S+_({n},{k})")
        numeric = spectral_radius(g, tol).radius
        out.append(f"exact {exact!r}")
        out.append(f"numeric {numeric!r}")
        out.append(f"delta {abs(exact - numeric):.3e}")
    else:
        fh = _open_in(args.input)
        try:
            for g in graph6.read_file(fh):
                res = spectral_radius(g, tol)
                out.append(f"{graph6.encode(g)} {_fmt_radius(res.radius)}")
        finally:
            if fh is not sys.stdin:
                fh.close()
    _write("".join(line + "\n" for line in out), args.output)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    check = LEMMA_CHECKS[args.lemma]
    if (args.n is None) != (args.k is None):
        raise InvalidParameters("give both --n and --k, or neither to sweep every valid pair")
    if args.n is None:
        params = valid_lemma_parameters(args.lemma, args.max_n)
    else:
        params = [(args.n, args.k)]
    verdicts = [check(n, k, jobs=args.jobs) for n, k in params]
    if args.format == "json":
        text = json.dumps([v.to_dict() for v in verdicts], indent=2) + "\n"
    else:
        lines = []
        for v in verdicts:
            lines.append(v.summary())
            lines.extend(f"  {g6} {diag}" for g6, diag in v.violations)
        text = "\n".join(lines) + "\n"
    _write(text, args.output)
    return EXIT_OK if all(v.holds for v in verdicts) else EXIT_VIOLATION


def cmd_census(args: argparse.Namespace) -> int:
    corpus = None
    if args.corpus is not None:
        fh = _open_in(args.corpus)
        try:
            corpus = list(graph6.read_file(fh))
        finally:
            if fh is not sys.stdin:
                fh.close()
    run = census_theorem if args.mode == "a" else census_conjecture_b
    report = run(args.n, args.k, corpus=corpus, jobs=args.jobs, expected=args.expected_count)
    # Worker count and output path are left out so reports compare byte-for-byte.
    config = {
        "subcommand": "census",
        "mode": args.mode,
        "n": args.n,
        "k": args.k,
        "corpus": args.corpus or "internal",
        "expected_count": args.expected_count,
        "format": args.format,
        "version": __version__,
    }
    render = {"csv": report_csv, "json": report_json, "human": report_human}[args.format]
    _write(render(report, config), args.out)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_VIOLATION if report.violation else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diam4", description="Spectral extremal toolkit for trees of diameter at most four.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-trees", help="list all trees of a given order with diameter <= 4")
    g.add_argument("--order", type=_positive, required=True)
    g.add_argument("--format", choices=("multiset", "graph6"), default="multiset")
    g.add_argument("--output")
    g.set_defaults(func=cmd_gen_trees)

    r = sub.add_parser("radius", help="spectral radius of graph6 input, or the closed forms")
    r.add_argument("--input", help="graph6 file, '-' or omitted for stdin")
    r.add_argument("--exact-snk", type=_pair, metavar="N,K")
    r.add_argument("--exact-snk-plus", type=_pair, metavar="N,K")
    r.add_argument("--tol", type=float, help=f"power-iteration tolerance (default ${TOL_ENV} or {DEFAULT_TOL})")
    r.add_argument("--output")
    r.set_defaults(func=cmd_radius)

    c = sub.add_parser("check", help="exhaustively check one lemma at small order")
    c.add_argument("lemma", choices=sorted(LEMMA_CHECKS))
    c.add_argument("--n", type=_positive)
    c.add_argument("--k", type=_positive)
    c.add_argument("--max-n", type=_positive, default=8, help="upper order for the full sweep")
    c.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)
    c.add_argument("--format", choices=("human", "json"), default="human")
    c.add_argument("--output")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("census", help="per-tree maximum spectral radius over tree-free graphs")
    s.add_argument("--mode", choices=("a", "b"), required=True)
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--k", type=_positive, required=True)
    s.add_argument("--corpus", help="graph6 file with every class of order n ('-' for stdin)")
    s.add_argument("--expected-count", type=_positive, help="expected class count for external corpora")
    s.add_argument("--jobs", type=_positive, default=os.cpu_count() or 1)
    s.add_argument("--format", choices=("csv", "json", "human"), default="csv")
    s.add_argument("--out")
    s.set_defaults(func=cmd_census)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InvalidParameters, UnsupportedSize) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Graph6Error, CorpusIncomplete, OSError, ConvergenceFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
