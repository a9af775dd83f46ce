"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line; the lines are printed in the
pytest terminal summary, or directly when this file is run as a script.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import sys
from typing import Callable

import pytest

from diam4.embedding import contains_all, contains_tree
from diam4.graph import Graph, enumerate_graphs, is_connected, make_snk, make_snk_plus
from diam4.spectral import (
    CharPolyParams,
    Verdict,
    b_column_sums,
    eq1_identity_check,
    eq2_bound_check,
    exact_radius_snk,
    exact_radius_snk_plus,
    lemma21_check,
    spectral_radius,
)
from diam4.trees import Diam4Tree, decompose, enumerate_diam4_trees, prufer_diam4_codes, spider_1_2s
from diam4.verification import LEMMA_CHECKS, census_theorem, report_csv, report_json, valid_lemma_parameters

# tolerances pinned from the acceptance criteria
RADIUS_TOL = 1e-8
ROOT_REL_TOL = 1e-12
BENCH_TOL = 1e-12
FLAG_TOL = 1e-9
MAX_N = 8
JOBS = os.cpu_count() or 1

RESULTS: dict[int, str] = {}


def record(num: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[num] = f"criterion {num} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    print(RESULTS[num])
    assert ok, RESULTS[num]


def test_criterion_1_lemma_suite():
    bad = []
    pairs = 0
    graphs = 0
    for lemma, check in sorted(LEMMA_CHECKS.items()):
        for n, k in valid_lemma_parameters(lemma, MAX_N):
            v = check(n, k, jobs=JOBS)
            pairs += 1
            graphs += v.graphs_checked
            if not v.holds:
                bad.append(f"{lemma}({n},{k}): {v.violations[:3]}")
    record(1, "lemma suite has zero violations for n <= 8", not bad, f"{pairs} (lemma, n, k) runs, {graphs} graph checks, {len(bad)} failing")


def test_criterion_2_comparison_criterion():
    rnd = random.Random(7)
    done = violations = 0
    while done < 250:
        n = rnd.randint(2, 30)
        p = rnd.uniform(0.05, 0.95)
        g = Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rnd.random() < p])
        if not is_connected(g):
            continue
        done += 1
        if lemma21_check(g, rnd.randint(1, 10), rnd.randint(1, 10)).verdict is Verdict.VIOLATION:
            violations += 1
    eq_fail = []
    for n in range(6, 13):
        for k in range(1, 5):
            g = make_snk(n, k)
            a, b = k - 1, k * (n - k)
            zero = all(s == 0 for s in b_column_sums(g, a, b).sums)
            r = lemma21_check(g, a, b)
            close = abs(spectral_radius(g).radius - CharPolyParams(a, b).largest_root) <= RADIUS_TOL
            if not (zero and close and r.verdict is Verdict.EQUALITY_CASE):
                eq_fail.append((n, k))
    record(
        2,
        "comparison criterion: no violation, equality on S_{n,k}",
        violations == 0 and not eq_fail,
        f"{done} random connected graphs, {violations} violations, equality failures {eq_fail}",
    )


def test_criterion_3_spectral_exactness():
    worst_radius = worst_root = worst_plus = 0.0
    for n in (10, 100, 1000):
        for k in range(1, 6):
            mu = exact_radius_snk(n, k)
            worst_radius = max(worst_radius, abs(spectral_radius(make_snk(n, k)).radius - mu))
            worst_root = max(worst_root, abs(CharPolyParams.for_snk(n, k)(mu)) / (mu * mu))
            plus = exact_radius_snk_plus(n, k)
            worst_plus = max(worst_plus, abs(spectral_radius(make_snk_plus(n, k)).radius - plus))
    ok = worst_radius <= RADIUS_TOL and worst_root <= ROOT_REL_TOL and worst_plus <= RADIUS_TOL
    record(
        3,
        "power iteration matches closed forms",
        ok,
        f"max |mu - closed form| {worst_radius:.2e}, max relative f(mu') {worst_root:.2e}, max S+ delta {worst_plus:.2e}",
    )


def test_criterion_4_column_sum_identity_and_bound():
    checked = fail1 = fail2 = 0
    for n in range(1, 8):
        for g in enumerate_graphs(n):
            for k in range(1, 5):
                checked += 1
                fail1 += not eq1_identity_check(g, k)
                fail2 += not eq2_bound_check(g, k)
    record(4, "link-graph identity and degree bound", fail1 == 0 and fail2 == 0, f"{checked} (graph, k) pairs, {fail1} identity and {fail2} bound failures")


def test_criterion_5_tree_family():
    problems = []
    for m in range(1, 11):
        ours = {t.code for t in enumerate_diam4_trees(m)}
        if ours != prufer_diam4_codes(m) or len(ours) != len(enumerate_diam4_trees(m)):
            problems.append(f"count m={m}")
    if [len(enumerate_diam4_trees(m)) for m in (4, 5, 6)] != [2, 3, 5]:
        problems.append("small counts")
    for m in range(1, 13):
        for t in enumerate_diam4_trees(m):
            dec = decompose(t)
            if tuple(len(lv) for _, lv in dec.all_stars) != t.star_sizes or Diam4Tree.from_star_sizes(t.star_sizes) != t:
                problems.append(f"round trip {t.notation}")
    for k in range(1, 6):
        for t in enumerate_diam4_trees(2 * k + 2):
            dec = decompose(t)
            if dec.p_prime > 2 * k + 1 - dec.p:
                problems.append(f"p' bound {t.notation}")
    record(5, "tree family matches the Pruefer oracle", not problems, f"problems {problems[:5]}")


def test_criterion_6_extremal_signature():
    problems = []
    cases = 0
    for k in (2, 3):
        family = enumerate_diam4_trees(2 * k + 2)
        spider = spider_1_2s(k)
        for n in range(2 * k + 2, 3 * k + 5):
            cases += 1
            g = make_snk(n, k)
            if contains_all(g, family) != [spider]:
                problems.append(f"missing set at ({n},{k})")
            for e in itertools.combinations(range(n), 2):
                if g.has_edge(*e):
                    continue
                if contains_tree(g.with_edges([e]), spider) is None:
                    problems.append(f"S_{n},{k} + {e}")
    record(6, "S_{n,k} misses exactly the spider; one more edge adds it", not problems, f"{cases} (n, k) cases, problems {problems[:5]}")


def _census_integrity(n: int, k: int) -> list[str]:
    problems = []
    one = census_theorem(n, k, jobs=1)
    many = census_theorem(n, k, jobs=max(2, JOBS))
    cfg = {"subcommand": "census", "mode": "a", "n": n, "k": k}
    if report_csv(one, cfg) != report_csv(many, cfg) or report_json(one, cfg) != report_json(many, cfg):
        problems.append(f"({n},{k}) differs across worker counts")
    bench = exact_radius_snk(n, k)
    for row in one.rows:
        if abs(row.benchmark - bench) > BENCH_TOL:
            problems.append(f"({n},{k}) benchmark {row.benchmark}")
        if row.flagged:
            ok = (
                row.witness_free_check is True
                and row.witness_mu_check is not None
                and abs(row.witness_mu_check - row.witness_mu) <= RADIUS_TOL
                and row.witness_mu_check >= bench - FLAG_TOL - RADIUS_TOL
            )
            if not ok:
                problems.append(f"({n},{k}) witness for {row.tree_id} not confirmed")
    return problems


def test_criterion_7_census_determinism():
    problems = _census_integrity(6, 2) + _census_integrity(7, 2)
    record(7, "census reproducible with verified witnesses", not problems, f"problems {problems}")


CRITERIA: list[Callable[[], None]] = [
    test_criterion_1_lemma_suite,
    test_criterion_2_comparison_criterion,
    test_criterion_3_spectral_exactness,
    test_criterion_4_column_sum_identity_and_bound,
    test_criterion_5_tree_family,
    test_criterion_6_extremal_signature,
    test_criterion_7_census_determinism,
]


if __name__ == "__main__":
    failed = 0
    for fn in CRITERIA:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
