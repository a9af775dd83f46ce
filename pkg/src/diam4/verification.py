"""Exhaustive small-order lemma checks and spectral censuses.

All sweeps follow one map-reduce contract: the corpus is split into chunks,
workers compute pure per-graph records, and the reducer merges with
associative, commutative operations (sums, maxima, sorted unions), so results
do not depend on the number of workers.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Iterable, Iterator, Sequence, TypeVar

import numpy as np

from . import graph6
from .embedding import contains_tree, embed_diam4_at_root
from .errors import CorpusIncomplete, InvalidParameters, UnsupportedSize
from .graph import (
    ENUM_MAX_ORDER,
    GRAPH_COUNTS,
    Graph,
    canonical_form,
    enumerate_graphs,
    make_snk,
    make_snk_plus,
    max_matching_size,
    snk_edge_count,
)
from .spectral import exact_radius_snk, exact_radius_snk_plus, spectral_radius
from .trees import Diam4Tree, all_trees, enumerate_diam4_trees, enumerate_diam4_trees_upto, spider_1_2s, spider_2s

log = logging.getLogger(__name__)

FLAG_TOL = 1e-9
ARGMAX_TOL = 1e-9
CHUNK = 256

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(func: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """Order-preserving map over ``items``, in worker processes when ``jobs > 1``."""
    if jobs <= 1 or len(items) <= CHUNK:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items, chunksize=CHUNK))


# -- lemma checks -------------------------------------------------------------------


@dataclass
class LemmaVerdict:
    lemma: str
    n: int
    k: int
    graphs_checked: int = 0
    violations: list[tuple[str, str]] = field(default_factory=list)
    notes: dict[str, int] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        status = "holds at this scale" if self.holds else f"{len(self.violations)} VIOLATION(S)"
        return f"{self.lemma} n={self.n} k={self.k}: {self.graphs_checked} graphs checked, {status}"

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "n": self.n,
            "k": self.k,
            "graphs_checked": self.graphs_checked,
            "holds": self.holds,
            "violations": [{"graph6": g, "diagnostic": d} for g, d in self.violations],
            "notes": dict(sorted(self.notes.items())),
        }


def _corpus(n: int) -> list[Graph]:
    if n < 1:
        raise InvalidParameters(f"exhaustive checks need n >= 1, got n={n}")
    if n > ENUM_MAX_ORDER:
        raise UnsupportedSize(f"exhaustive checks need n <= {ENUM_MAX_ORDER}, got n={n}")
    return list(enumerate_graphs(n))


def _contains(g: Graph, t: Diam4Tree | tuple[int, tuple]) -> bool:
    """Fast root embedder where applicable, otherwise the exact oracle."""
    if isinstance(t, Diam4Tree):
        for u in sorted(range(g.n), key=lambda v: -g.degree(v)):
            if g.degree(u) >= len(t.star_sizes) and embed_diam4_at_root(g, t, u) is not None:
                return True
    return contains_tree(g, t) is not None


def _tree_label(t: Diam4Tree | tuple[int, tuple]) -> str:
    if isinstance(t, Diam4Tree):
        return t.notation
    m, edges = t
    return graph6.encode(Graph.from_edges(m, edges))


def _missing_trees(family: Sequence, g: Graph) -> list[int]:
    return [i for i, t in enumerate(family) if not _contains(g, t)]


def _reverified_missing(g6: str, family: Sequence, idx: Iterable[int]) -> list[int]:
    g = graph6.decode(g6)
    return [i for i in idx if contains_tree(g, family[i]) is None]


def _containment_sweep(
    lemma: str, n: int, k: int, graphs: list[Graph], family: Sequence, jobs: int
) -> LemmaVerdict:
    verdict = LemmaVerdict(lemma, n, k, graphs_checked=len(graphs))
    verdict.notes["family_size"] = len(family)
    results = parallel_map(partial(_missing_trees, family), graphs, jobs)
    for g, miss in zip(graphs, results):
        if not miss:
            continue
        code = graph6.encode(g)
        confirmed = _reverified_missing(code, family, miss)
        if confirmed:
            names = ", ".join(_tree_label(family[i]) for i in confirmed)
            verdict.violations.append((code, f"missing {names}"))
        else:
            verdict.violations.append((code, "inconsistent containment verdicts on re-check"))
    return verdict


def check_es_diam4(n: int, k: int, jobs: int = 1) -> LemmaVerdict:
    """Every graph with e > (k-2)n/2 contains every diameter-<=4 tree of order k."""
    if k < 1:
        raise InvalidParameters("k must be >= 1")
    graphs = [g for g in _corpus(n) if 2 * g.num_edges > (k - 2) * n]
    family = enumerate_diam4_trees(k)
    return _containment_sweep("es4", n, k, graphs, family, jobs)


def _nu_below(k: int, g: Graph) -> bool:
    return max_matching_size(g) < k


def check_matching_lemma(n: int, k: int, jobs: int = 1) -> LemmaVerdict:
    """No matching of size k forces e <= e(S_{n,k-1}), with equality only for S_{n,k-1}."""
    if k < 1 or 2 * n < 5 * k:
        raise InvalidParameters(f"matching bound needs k >= 1 and n >= 5k/2, got n={n}, k={k}")
    corpus = _corpus(n)
    flags = parallel_map(partial(_nu_below, k), corpus, jobs)
    graphs = [g for g, f in zip(corpus, flags) if f]
    bound = snk_edge_count(n, k - 1)
    target = canonical_form(make_snk(n, k - 1))
    verdict = LemmaVerdict("matching", n, k, graphs_checked=len(graphs))
    equal = 0
    for g in graphs:
        e = g.num_edges
        if e > bound:
            verdict.violations.append((graph6.encode(g), f"e={e} > e(S_(n,k-1))={bound}"))
        elif e == bound:
            equal += 1
            if canonical_form(g) != target:
                verdict.violations.append((graph6.encode(g), f"e={e} attains the bound but G is not S_(n,k-1)"))
    verdict.notes["equality_count"] = equal
    return verdict


def check_lemma_ves4(n: int, k: int, jobs: int = 1) -> LemmaVerdict:
    """Delta = n-1 and e > (2k-1)n/2 force every tree of T*_(<=2k+2)."""
    if k < 1 or n < 2 * k + 2:
        raise InvalidParameters(f"needs k >= 1 and n >= 2k+2, got n={n}, k={k}")
    graphs = [g for g in _corpus(n) if 2 * g.num_edges > (2 * k - 1) * n and g.max_degree() == n - 1]
    drop = spider_1_2s(k).code
    family = [t for t in enumerate_diam4_trees_upto(2 * k + 2) if t.code != drop]
    return _containment_sweep("ves4", n, k, graphs, family, jobs)


def snk_supergraphs(n: int, k: int) -> list[Graph]:
    """Isomorphism classes of proper supergraphs of S_{n,k} on the same vertex set.

    Extra edges live inside the independent part; since K_k joined with H
    determines H up to isomorphism, the classes of nonempty H on n-k vertices
    suffice.  Results are still deduplicated by canonical form.
    """
    base = make_snk(n, k)
    seen: dict[bytes, Graph] = {}
    for h in enumerate_graphs(n - k):
        if h.num_edges == 0:
            continue
        g = base.with_edges((k + u, k + v) for u, v in h.edges())
        seen.setdefault(canonical_form(g).code, g)
    return [seen[c] for c in sorted(seen)]


def check_structure_lemma(n: int, k: int, jobs: int = 1) -> LemmaVerdict:
    """Every proper supergraph of S_{n,k} contains every tree of order 2k+2."""
    if k < 1 or n < 2 * k + 2:
        raise InvalidParameters(f"needs k >= 1 and n >= 2k+2, got n={n}, k={k}")
    if n > ENUM_MAX_ORDER:
        raise InvalidParameters(f"supergraph sweep needs n <= {ENUM_MAX_ORDER}")
    family = all_trees(2 * k + 2)
    return _containment_sweep("structure", n, k, snk_supergraphs(n, k), family, jobs)


LEMMA_CHECKS: dict[str, Callable[..., LemmaVerdict]] = {
    "es4": check_es_diam4,
    "matching": check_matching_lemma,
    "ves4": check_lemma_ves4,
    "structure": check_structure_lemma,
}


def valid_lemma_parameters(lemma: str, max_n: int = ENUM_MAX_ORDER) -> list[tuple[int, int]]:
    """Every (n, k) with n <= max_n satisfying the checker's preconditions."""
    out = []
    for n in range(1, max_n + 1):
        for k in range(1, n + 1):
            if lemma == "es4":
                ok = True
            elif lemma == "matching":
                ok = 2 * n >= 5 * k
            elif lemma in ("ves4", "structure"):
                ok = n >= 2 * k + 2
            else:
                raise InvalidParameters(f"unknown lemma {lemma!r}")
            if ok:
                out.append((n, k))
    return out


# -- censuses --------------------------------------------------------------------------


def is_snk(g: Graph, k: int) -> bool:
    """Exactly S_{n,k}: k vertices of full degree and all others of degree k."""
    n = g.n
    degs = sorted(g.degrees(), reverse=True)
    return 1 <= k < n and degs == [n - 1] * k + [k] * (n - k)


def is_snk_plus(g: Graph, k: int) -> bool:
    """Exactly S+_{n,k} (up to isomorphism)."""
    n = g.n
    if n < k + 2 or g.num_edges != snk_edge_count(n, k) + 1:
        return False
    full = [v for v in range(n) if g.degree(v) == n - 1]
    if len(full) < k:
        return False
    if len(full) > k:
        # n = k+2 gives the complete graph, where every vertex has full degree
        return n == k + 2
    rest = [v for v in range(n) if g.degree(v) != n - 1]
    return sorted(g.degree(v) for v in rest) == [k] * (n - k - 2) + [k + 1] * 2


@dataclass
class CensusRow:
    tree_id: str
    free_count: int = 0
    max_mu: float | None = None
    argmax: list[str] = field(default_factory=list)
    flag_count: int = 0
    witness: str | None = None
    witness_mu: float | None = None
    witness_mu_check: float | None = None
    witness_free_check: bool | None = None
    extremal_free: dict[str, bool] = field(default_factory=dict)
    benchmark: float = 0.0
    tracks: str = ""
    predicted: str = ""

    @property
    def margin(self) -> float | None:
        return None if self.max_mu is None else self.max_mu - self.benchmark

    @property
    def flagged(self) -> bool:
        return self.flag_count > 0


@dataclass
class CensusReport:
    mode: str
    n: int
    k: int
    benchmarks: dict[str, float]
    corpus: str
    corpus_count: int
    expected_count: int | None
    rows: list[CensusRow]
    warnings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def violation(self) -> bool:
        return any(r.flagged for r in self.rows)


@dataclass
class _TreeAcc:
    free: int = 0
    top: list[tuple[float, str]] = field(default_factory=list)  # within ARGMAX_TOL of max
    flagged: int = 0
    flag_top: list[tuple[float, str]] = field(default_factory=list)

    @staticmethod
    def _window(items: list[tuple[float, str]]) -> list[tuple[float, str]]:
        if not items:
            return []
        best = max(mu for mu, _ in items)
        return sorted({x for x in items if x[0] >= best - ARGMAX_TOL}, key=lambda x: x[1])

    def merge(self, other: _TreeAcc) -> _TreeAcc:
        return _TreeAcc(
            self.free + other.free,
            self._window(self.top + other.top),
            self.flagged + other.flagged,
            self._window(self.flag_top + other.flag_top),
        )


def _census_record(family: Sequence[Diam4Tree], g6: str) -> tuple[str, float, tuple[bool, ...]]:
    g = graph6.decode(g6)
    mu = spectral_radius(g).radius
    return g6, mu, tuple(not _contains(g, t) for t in family)


def _check_corpus(n: int, corpus: list[Graph] | None, expected: int | None) -> tuple[list[Graph], str, int | None, list[str]]:
    warnings: list[str] = []
    if corpus is None:
        if n > ENUM_MAX_ORDER:
            raise InvalidParameters(f"a corpus file is required for n > {ENUM_MAX_ORDER}")
        return list(enumerate_graphs(n)), "internal", GRAPH_COUNTS[n], warnings
    if not corpus:
        raise CorpusIncomplete("corpus is empty")
    wrong = [i for i, g in enumerate(corpus) if g.n != n]
    if wrong:
        raise InvalidParameters(f"corpus graph #{wrong[0] + 1} has order {corpus[wrong[0]].n}, expected {n}")
    if expected is None and n < len(GRAPH_COUNTS):
        expected = GRAPH_COUNTS[n]
    if expected is None:
        warnings.append("no expected class count known; exhaustiveness not checked")
    elif len(corpus) != expected:
        msg = f"corpus-incomplete: {len(corpus)} graphs but {expected} classes expected"
        log.warning(msg)
        warnings.append(msg)
    return corpus, "external", expected, warnings


def _run_census(
    mode: str,
    n: int,
    k: int,
    family: list[Diam4Tree],
    benchmarks: dict[str, float],
    flag_bench: float,
    is_exception: Callable[[Graph], bool],
    extremal: dict[str, Graph],
    corpus: list[Graph] | None,
    expected: int | None,
    jobs: int,
) -> CensusReport:
    graphs, source, expected, warnings = _check_corpus(n, corpus, expected)
    codes = [graph6.encode(g) for g in graphs]
    records = parallel_map(partial(_census_record, family), codes, jobs)

    accs = [_TreeAcc() for _ in family]
    for code, mu, free in records:
        exception = is_exception(graph6.decode(code))
        for i, is_free in enumerate(free):
            if not is_free:
                continue
            part = _TreeAcc(1, [(mu, code)])
            if not exception and mu >= flag_bench - FLAG_TOL:
                part.flagged = 1
                part.flag_top = [(mu, code)]
            accs[i] = accs[i].merge(part)

    rows = []
    for t, acc in zip(family, accs):
        row = CensusRow(t.notation, free_count=acc.free, benchmark=flag_bench)
        if acc.top:
            row.max_mu = max(mu for mu, _ in acc.top)
            row.argmax = [c for _, c in acc.top]
        row.extremal_free = {name: not _contains(h, t) for name, h in extremal.items()}
        if acc.flagged:
            row.flag_count = acc.flagged
            mu_w, code_w = min(acc.flag_top, key=lambda x: (-x[0], x[1]))
            row.witness, row.witness_mu = code_w, mu_w
            # independent re-verification from the graph6 string
            g = graph6.decode(code_w)
            row.witness_mu_check = float(np.linalg.eigvalsh(g.adjacency_matrix().astype(float))[-1])
            row.witness_free_check = contains_tree(g, t) is None
        rows.append(row)

    report = CensusReport(mode, n, k, benchmarks, source, len(graphs), expected, rows, warnings)
    report.notes.append(
        f"the asymptotic statement needs n > 2(k+2)^4 = {2 * (k + 2) ** 4}; flags at n={n} are exploratory data, not refutations"
    )
    return report


def census_theorem(
    n: int, k: int, corpus: list[Graph] | None = None, jobs: int = 1, expected: int | None = None
) -> CensusReport:
    """Largest spectral radius among T-free graphs of order n, per T of order 2k+2.

    A row is flagged when some T-free graph other than S_{n,k} reaches
    mu(S_{n,k}) - 1e-9.
    """
    if k < 1 or n < 2 * k + 2:
        raise InvalidParameters(f"census needs k >= 1 and n >= 2k+2, got n={n}, k={k}")
    bench = exact_radius_snk(n, k)
    report = _run_census(
        "a",
        n,
        k,
        enumerate_diam4_trees(2 * k + 2),
        {"snk": bench},
        bench,
        lambda g: is_snk(g, k),
        {"snk": make_snk(n, k)},
        corpus,
        expected,
        jobs,
    )
    for row in report.rows:
        row.tracks = "snk" if any(is_snk(graph6.decode(c), k) for c in row.argmax) else "other"
    return report


def census_conjecture_b(
    n: int, k: int, corpus: list[Graph] | None = None, jobs: int = 1, expected: int | None = None
) -> CensusReport:
    """Census over trees of order 2k+3 against mu(S_{n,k}) and mu(S+_{n,k}).

    Flags follow the odd-order statement: a T-free graph other than S+_{n,k}
    with radius at least mu(S+_{n,k}) - 1e-9.  Each row also records which
    extremal graph its argmax set contains and the predicted one (S+_{n,k} for
    the all-length-two spider, S_{n,k} otherwise).
    """
    if k < 1 or n < 2 * k + 3:
        raise InvalidParameters(f"odd-order census needs k >= 1 and n >= 2k+3, got n={n}, k={k}")
    b_snk = exact_radius_snk(n, k)
    b_plus = exact_radius_snk_plus(n, k)
    report = _run_census(
        "b",
        n,
        k,
        enumerate_diam4_trees(2 * k + 3),
        {"snk": b_snk, "snk_plus": b_plus},
        b_plus,
        lambda g: is_snk_plus(g, k),
        {"snk": make_snk(n, k), "snk_plus": make_snk_plus(n, k)},
        corpus,
        expected,
        jobs,
    )
    spider = spider_2s(k).code
    family = enumerate_diam4_trees(2 * k + 3)
    for t, row in zip(family, report.rows):
        argmax = [graph6.decode(c) for c in row.argmax]
        if any(is_snk_plus(g, k) for g in argmax):
            row.tracks = "snk_plus"
        elif any(is_snk(g, k) for g in argmax):
            row.tracks = "snk"
        else:
            row.tracks = "other"
        row.predicted = "snk_plus" if t.code == spider else "snk"
    return report


# -- report serialisation ---------------------------------------------------------------

CSV_COLUMNS = (
    "tree_id",
    "free_count",
    "max_mu",
    "margin",
    "argmax_g6",
    "benchmark",
    "tracks",
    "predicted",
    "snk_free",
    "snk_plus_free",
    "flag_count",
    "witness_g6",
    "witness_mu_recheck",
    "witness_free_recheck",
)


def _fmt(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def _row_values(row: CensusRow) -> list[str]:
    def b(v: bool | None) -> str:
        return "" if v is None else ("true" if v else "false")

    return [
        row.tree_id,
        str(row.free_count),
        _fmt(row.max_mu),
        _fmt(row.margin),
        " ".join(row.argmax),
        _fmt(row.benchmark),
        row.tracks,
        row.predicted,
        b(row.extremal_free.get("snk")),
        b(row.extremal_free.get("snk_plus")),
        str(row.flag_count),
        row.witness or "",
        _fmt(row.witness_mu_check),
        b(row.witness_free_check),
    ]


def report_header(report: CensusReport, config: dict) -> dict:
    return {
        "config": dict(sorted(config.items())),
        "mode": report.mode,
        "n": report.n,
        "k": report.k,
        "benchmarks": {k: repr(v) for k, v in sorted(report.benchmarks.items())},
        "corpus": report.corpus,
        "corpus_count": report.corpus_count,
        "expected_count": report.expected_count,
        "violation": report.violation,
        "warnings": report.warnings,
        "notes": report.notes,
    }


def report_csv(report: CensusReport, config: dict) -> str:
    buf = io.StringIO()
    for key, value in report_header(report, config).items():
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in report.rows:
        w.writerow(_row_values(row))
    return buf.getvalue()


def report_json(report: CensusReport, config: dict) -> str:
    payload = report_header(report, config)
    payload["columns"] = list(CSV_COLUMNS)
    payload["rows"] = [dict(zip(CSV_COLUMNS, _row_values(r))) for r in report.rows]
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def report_human(report: CensusReport, config: dict) -> str:
    lines = [f"census mode {report.mode}: n={report.n} k={report.k} corpus={report.corpus} ({report.corpus_count} graphs)"]
    for name, v in sorted(report.benchmarks.items()):
        lines.append(f"  benchmark {name} = {v:.12f}")
    for w in report.warnings:
        lines.append(f"  WARNING {w}")
    for row in report.rows:
        mm = "-" if row.max_mu is None else f"{row.max_mu:.9f}"
        mg = "-" if row.margin is None else f"{row.margin:+.3e}"
        flag = f"  VIOLATION x{row.flag_count} witness {row.witness}" if row.flagged else ""
        lines.append(f"  {row.tree_id:<24} free={row.free_count:<6} max_mu={mm} margin={mg} tracks={row.tracks}{flag}")
    lines.extend(f"  note: {x}" for x in report.notes)
    return "\n".join(lines) + "\n"


def iter_corpus(lines: Iterable[str]) -> Iterator[Graph]:
    return graph6.read_lines(lines)
