"""Trees of diameter at most four, described by the stars hanging off a root.

Deleting a centre of such a tree leaves a forest of stars.  A tree is stored as
the multiset of leaf counts of those stars (``star_sizes``, non-increasing)
together with a materialised edge list: root ``0``, star centres ``1..p`` in
``star_sizes`` order, then the leaves of each star in turn.

For bicentred trees the root is the centre whose deletion leaves more
components.  Tree isomorphism is decided by AHU codes rooted at the centre(s),
independently of :mod:`diam4.graph`'s permutation canonicaliser.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import InvalidParameters, UnsupportedSize
from .graph import Graph

PRUFER_MAX_ORDER = 10

Edge = tuple[int, int]


def _adjacency(m: int, edges: Sequence[Edge]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(m)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def _eccentricities(adj: list[list[int]]) -> list[int]:
    m = len(adj)
    out = []
    for s in range(m):
        dist = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        if len(dist) != m:
            raise InvalidParameters("edge list is not connected")
        out.append(max(dist.values()))
    return out


def tree_centers(adj: list[list[int]]) -> list[int]:
    ecc = _eccentricities(adj)
    r = min(ecc)
    return [v for v, e in enumerate(ecc) if e == r]


def tree_diameter(m: int, edges: Sequence[Edge]) -> int:
    if m == 1:
        return 0
    return max(_eccentricities(_adjacency(m, edges)))


def _ahu(adj: list[list[int]], root: int) -> str:
    def code(v: int, parent: int) -> str:
        return "(" + "".join(sorted(code(c, v) for c in adj[v] if c != parent)) + ")"

    return code(root, -1)


def tree_code(m: int, edges: Sequence[Edge]) -> str:
    """Canonical string for the isomorphism class of a tree."""
    if len(edges) != m - 1:
        raise InvalidParameters("a tree on m vertices has m - 1 edges")
    adj = _adjacency(m, edges)
    return min(_ahu(adj, c) for c in tree_centers(adj))


def materialize(star_sizes: Sequence[int]) -> tuple[int, list[Edge]]:
    p = len(star_sizes)
    edges: list[Edge] = [(0, i + 1) for i in range(p)]
    nxt = p + 1
    for i, a in enumerate(star_sizes):
        for _ in range(a):
            edges.append((i + 1, nxt))
            nxt += 1
    return nxt, edges


def _star_sizes_at(adj: list[list[int]], root: int) -> tuple[int, ...]:
    return tuple(sorted((len(adj[c]) - 1 for c in adj[root]), reverse=True))


def _convention_root(adj: list[list[int]]) -> int:
    centers = tree_centers(adj)
    # Most components after deletion, then the larger multiset for a
    # deterministic choice (equal degrees make the two rootings isomorphic).
    return max(centers, key=lambda c: (len(adj[c]), _star_sizes_at(adj, c)))


@dataclass(frozen=True)
class StarForestDecomposition:
    all_stars: tuple[tuple[int, tuple[int, ...]], ...]  # (centre, leaves) per component
    nontrivial_stars: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def p(self) -> int:
        return len(self.all_stars)

    @property
    def p_prime(self) -> int:
        return len(self.nontrivial_stars)

    @property
    def nontrivial_edges(self) -> int:
        return sum(len(leaves) for _, leaves in self.nontrivial_stars)


@dataclass(frozen=True)
class Diam4Tree:
    order: int
    star_sizes: tuple[int, ...]
    edges: tuple[Edge, ...]

    @classmethod
    def from_star_sizes(cls, star_sizes: Sequence[int]) -> Diam4Tree:
        if any(a < 0 for a in star_sizes):
            raise InvalidParameters("star sizes must be nonnegative")
        m, edges = materialize(star_sizes)
        return cls.from_edges(m, edges)

    @classmethod
    def from_edges(cls, m: int, edges: Sequence[Edge]) -> Diam4Tree:
        """Normalise an arbitrary diameter-<=4 tree to the root convention."""
        if m < 1:
            raise InvalidParameters("a tree needs at least one vertex")
        if len(edges) != m - 1:
            raise InvalidParameters("a tree on m vertices has m - 1 edges")
        if m == 1:
            return cls(1, (), ())
        adj = _adjacency(m, edges)
        if max(_eccentricities(adj)) > 4:
            raise InvalidParameters("tree has diameter greater than 4")
        sizes = _star_sizes_at(adj, _convention_root(adj))
        m2, canon = materialize(sizes)
        assert m2 == m
        return cls(m, sizes, tuple(canon))

    @property
    def notation(self) -> str:
        return "root:[" + ",".join(str(a) for a in self.star_sizes) + "]"

    @property
    def code(self) -> str:
        return tree_code(self.order, self.edges)

    def graph(self) -> Graph:
        return Graph.from_edges(self.order, self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.order
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def decompose(t: Diam4Tree) -> StarForestDecomposition:
    """Components of T minus the root, each a star centred at a root neighbour."""
    adj = _adjacency(t.order, t.edges)
    stars = []
    for c in sorted(adj[0]) if t.order > 1 else []:
        leaves = tuple(sorted(x for x in adj[c] if x != 0))
        if any(len(adj[x]) != 1 for x in leaves):
            raise InvalidParameters("root is not a centre: component is not a star")
        stars.append((c, leaves))
    stars.sort(key=lambda s: (-len(s[1]), s[0]))
    all_stars = tuple(stars)
    return StarForestDecomposition(all_stars, tuple(s for s in all_stars if s[1]))


def _partitions(total: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` in lexicographically decreasing order."""
    if total == 0:
        yield ()
        return
    if largest is None:
        largest = total
    for first in range(min(total, largest), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _diam4_trees(m: int) -> tuple[Diam4Tree, ...]:
    seen: set[str] = set()
    out = []
    for part in _partitions(m - 1):
        raw = tuple(x - 1 for x in part)
        t = Diam4Tree.from_star_sizes(raw)
        if t.star_sizes != raw:
            continue  # the same class appears under its normalised multiset
        code = t.code
        if code not in seen:
            seen.add(code)
            out.append(t)
    return tuple(out)


def enumerate_diam4_trees(m: int) -> list[Diam4Tree]:
    if m < 1:
        raise InvalidParameters("tree order must be >= 1")
    return list(_diam4_trees(m))


def enumerate_diam4_trees_upto(m: int) -> list[Diam4Tree]:
    return [t for i in range(1, m + 1) for t in _diam4_trees(i)]


def spider_1_2s(k: int) -> Diam4Tree:
    """Spider of order 2k+2: k legs of length two and one of length one."""
    if k < 1:
        raise InvalidParameters("spider_1_2s needs k >= 1")
    return Diam4Tree.from_star_sizes((1,) * k + (0,))


def spider_2s(k: int) -> Diam4Tree:
    """Spider of order 2k+3 with k+1 legs of length two (k = 0 is the path P3)."""
    if k < 0:
        raise InvalidParameters("spider_2s needs k >= 0")
    return Diam4Tree.from_star_sizes((1,) * (k + 1))


def family_T_star(k: int, odd: bool = False) -> list[Diam4Tree]:
    """Diameter-<=4 trees of order 2k+2 (or 2k+3 if ``odd``) minus the matching spider."""
    if k < 1:
        raise InvalidParameters("family_T_star needs k >= 1")
    if odd:
        m, spider = 2 * k + 3, spider_2s(k)
    else:
        m, spider = 2 * k + 2, spider_1_2s(k)
    drop = spider.code
    return [t for t in enumerate_diam4_trees(m) if t.code != drop]


# -- Prüfer oracle ----------------------------------------------------------------


def prufer_decode(seq: Sequence[int], m: int) -> list[Edge]:
    deg = [1] * m
    for x in seq:
        deg[x] += 1
    edges = []
    for x in seq:
        leaf = deg.index(1)
        edges.append((leaf, x))
        deg[leaf] = 0
        deg[x] -= 1
    u, v = (i for i, d in enumerate(deg) if d == 1)
    edges.append((u, v))
    return edges


def _monotone_prufer_codes(m: int) -> Iterator[tuple[int, ...]]:
    """Prüfer codes in which label i occurs at least as often as label i+1.

    Every tree has a labelling with degree non-increasing in the label, and in
    a Prüfer code label ``v`` occurs ``deg(v) - 1`` times, so these codes reach
    every isomorphism class.
    """
    length = m - 2
    for counts in _count_vectors(length, m):
        pool = [v for v, c in enumerate(counts) for _ in range(c)]
        yield from _distinct_orderings(pool)


def _count_vectors(total: int, slots: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    if slots == 0:
        if total == 0:
            yield ()
        return
    if cap is None:
        cap = total
    for c in range(min(total, cap), -1, -1):
        for rest in _count_vectors(total - c, slots - 1, c):
            yield (c,) + rest


def _distinct_orderings(pool: list[int]) -> Iterator[tuple[int, ...]]:
    counts: dict[int, int] = {}
    for x in pool:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)
    cur: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(cur) == len(pool):
            yield tuple(cur)
            return
        for key in keys:
            if counts[key]:
                counts[key] -= 1
                cur.append(key)
                yield from rec()
                cur.pop()
                counts[key] += 1

    return rec()


def all_prufer_codes(m: int) -> Iterator[tuple[int, ...]]:
    """Every Prüfer code (m^(m-2) of them); for cross-checking the pruned scan."""
    return product(range(m), repeat=max(m - 2, 0))


@lru_cache(maxsize=None)
def _all_trees(m: int, exhaustive: bool) -> tuple[tuple[str, tuple[Edge, ...]], ...]:
    if m == 1:
        return (("()", ()),)
    if m == 2:
        return (("(())", ((0, 1),)),)
    codes = all_prufer_codes(m) if exhaustive else _monotone_prufer_codes(m)
    found: dict[str, tuple[Edge, ...]] = {}
    for seq in codes:
        edges = prufer_decode(seq, m)
        c = tree_code(m, edges)
        if c not in found:
            found[c] = tuple(sorted(tuple(sorted(e)) for e in edges))
    return tuple(sorted(found.items()))


def all_trees(m: int, exhaustive: bool = False) -> list[tuple[int, tuple[Edge, ...]]]:
    """All free trees of order ``m`` as ``(m, edges)``, one per class, from Prüfer codes."""
    if m < 1:
        raise InvalidParameters("tree order must be >= 1")
    if m > PRUFER_MAX_ORDER:
        raise UnsupportedSize(f"Prüfer oracle supports m <= {PRUFER_MAX_ORDER}")
    return [(m, edges) for _, edges in _all_trees(m, exhaustive)]


def prufer_diam4_codes(m: int, exhaustive: bool = False) -> set[str]:
    """Oracle for ``enumerate_diam4_trees``: Prüfer scan, dedup, diameter filter."""
    return {tree_code(mm, e) for mm, e in all_trees(m, exhaustive) if tree_diameter(mm, e) <= 4}
