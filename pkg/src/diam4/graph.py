"""Graph representation, named constructions and structural queries.

Adjacency is stored as one Python ``int`` bitset per vertex, bit ``u`` of
``adj[v]`` set iff ``uv`` is an edge.  Python integers are arbitrary precision,
so the same code path serves the single-word census graphs (n <= 64) and the
multi-word constructed families (up to n = 4096).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidParameters, UnsupportedSize

MAX_ORDER = 4096
CANON_MAX_ORDER = 10
ENUM_MAX_ORDER = 8
MATCHING_MAX_ORDER = 24

INFINITE = math.inf


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_ORDER:
            raise UnsupportedSize(f"graph order {self.n} outside [0, {MAX_ORDER}]")
        if len(self.adj) != self.n:
            raise InvalidParameters("adjacency must have one row per vertex")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full or (row >> v) & 1:
                raise InvalidParameters(f"row {v} has a self-loop or out-of-range bit")
            for u in _bits(row):
                if not (self.adj[u] >> v) & 1:
                    raise InvalidParameters(f"asymmetric adjacency at {v},{u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise InvalidParameters(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidParameters(f"edge ({u}, {v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def star(cls, leaves: int) -> Graph:
        return cls.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degrees(self) -> list[int]:
        return [popcount(r) for r in self.adj]

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v in range(self.n) for u in _bits(self.adj[v] & ((1 << v) - 1))]

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> Graph:
        adj = list(self.adj)
        for u, v in extra:
            if u == v:
                raise InvalidParameters(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))

    def relabel(self, order: Sequence[int]) -> Graph:
        """Return the graph whose vertex ``i`` is old vertex ``order[i]``."""
        pos = {old: new for new, old in enumerate(order)}
        adj = []
        for old in order:
            row = 0
            for u in _bits(self.adj[old]):
                row |= 1 << pos[u]
            adj.append(row)
        return Graph(self.n, tuple(adj))

    def is_subgraph_of(self, other: Graph) -> bool:
        """Same vertex set, every edge of ``self`` present in ``other``."""
        return self.n == other.n and all(a & ~b == 0 for a, b in zip(self.adj, other.adj))

    def adjacency_matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges():
            m[u, v] = m[v, u] = 1
        return m


# -- named constructions ------------------------------------------------------


def make_snk(n: int, k: int) -> Graph:
    """K_k joined to an independent set of n - k vertices; clique is 0..k-1.

    ``k = 0`` gives the empty graph, which the matching bound needs as S_{n,0}.
    """
    if not 0 <= k < n:
        raise InvalidParameters(f"S_(n,k) needs 0 <= k < n, got n={n}, k={k}")
    clique = (1 << k) - 1
    full = (1 << n) - 1
    adj = [full & ~(1 << v) for v in range(k)] + [clique] * (n - k)
    return Graph(n, tuple(adj))


def make_snk_plus(n: int, k: int) -> Graph:
    """S_{n,k} plus the edge between independent vertices k and k+1."""
    if k < 0 or n < k + 2:
        raise InvalidParameters(f"S+_(n,k) needs n >= k + 2, got n={n}, k={k}")
    return make_snk(n, k).with_edges([(k, k + 1)])


def snk_edge_count(n: int, k: int) -> int:
    return k * (k - 1) // 2 + k * (n - k)


# -- distances and neighbourhoods --------------------------------------------


@dataclass(frozen=True)
class NeighborhoodShells:
    source: int
    shells: tuple[frozenset[int], ...]

    def __getitem__(self, i: int) -> frozenset[int]:
        """Shell ``i`` (1-based, as in N^i); empty beyond the last layer."""
        if i < 1:
            raise IndexError("shells are indexed from 1")
        return self.shells[i - 1] if i <= len(self.shells) else frozenset()


def _bfs_layers(g: Graph, v: int) -> list[int]:
    seen = 1 << v
    frontier = 1 << v
    layers = []
    while True:
        nxt = 0
        for x in _bits(frontier):
            nxt |= g.adj[x]
        nxt &= ~seen
        if not nxt:
            return layers
        layers.append(nxt)
        seen |= nxt
        frontier = nxt


def shells(g: Graph, v: int) -> NeighborhoodShells:
    if not 0 <= v < g.n:
        raise InvalidParameters(f"vertex {v} out of range")
    return NeighborhoodShells(v, tuple(frozenset(_bits(m)) for m in _bfs_layers(g, v)))


def distance(g: Graph, u: int, v: int) -> float:
    if u == v:
        return 0
    for i, layer in enumerate(_bfs_layers(g, u), start=1):
        if (layer >> v) & 1:
            return i
    return INFINITE


@dataclass(frozen=True)
class LinkGraph:
    """Graph on N^1(v) | N^2(v) with the edges inside N^1(v) and between the shells.

    ``graph`` is relabelled onto ``0..len(vertices)-1`` following ``vertices``.
    """

    center: int
    vertices: tuple[int, ...]
    first_shell: frozenset[int]
    graph: Graph

    def index(self, x: int) -> int:
        return self.vertices.index(x)

    def degree(self, x: int) -> int:
        return self.graph.degree(self.vertices.index(x))

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[a], vs[b]) for a, b in self.graph.edges()]


def link_graph(g: Graph, v: int) -> LinkGraph:
    if not 0 <= v < g.n:
        raise InvalidParameters(f"vertex {v} out of range")
    layers = _bfs_layers(g, v)
    n1 = layers[0] if layers else 0
    n2 = layers[1] if len(layers) > 1 else 0
    verts = tuple(_bits(n1 | n2))
    pos = {x: i for i, x in enumerate(verts)}
    edges = []
    for x in _bits(n1):
        for y in _bits(g.adj[x] & (n1 | n2)):
            if (n2 >> y) & 1 or y > x:
                edges.append((pos[x], pos[y]))
    return LinkGraph(v, verts, frozenset(_bits(n1)), Graph.from_edges(len(verts), edges))


def components(g: Graph) -> int:
    return len(component_masks(g))


def component_masks(g: Graph) -> list[int]:
    left = (1 << g.n) - 1
    comps = []
    while left:
        v = (left & -left).bit_length() - 1
        comp = 1 << v
        for layer in _bfs_layers(g, v):
            comp |= layer
        comps.append(comp)
        left &= ~comp
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or components(g) == 1


def eccentricity(g: Graph, v: int) -> float:
    layers = _bfs_layers(g, v)
    reached = 1 + sum(popcount(m) for m in layers)
    return len(layers) if reached == g.n else INFINITE


def diameter(g: Graph) -> float:
    """Largest eccentricity; ``INFINITE`` (math.inf) when disconnected."""
    if g.n == 0:
        return 0
    if not is_connected(g):
        return INFINITE
    return max(eccentricity(g, v) for v in range(g.n))


def induced(g: Graph, s: Iterable[int]) -> Graph:
    verts = sorted(set(s))
    if any(not 0 <= v < g.n for v in verts):
        raise InvalidParameters("induced vertex set out of range")
    return g.relabel(verts) if len(verts) == g.n else _induced(g, verts)


def _induced(g: Graph, verts: list[int]) -> Graph:
    pos = {x: i for i, x in enumerate(verts)}
    mask = sum(1 << x for x in verts)
    adj = []
    for x in verts:
        row = 0
        for y in _bits(g.adj[x] & mask):
            row |= 1 << pos[y]
        adj.append(row)
    return Graph(len(verts), tuple(adj))


# -- matching -----------------------------------------------------------------


def max_matching_size(g: Graph) -> int:
    """Exact matching number by branch and bound.

    Branching takes a minimum-degree vertex ``u`` and its highest-degree
    neighbour ``w``: either ``uw`` is in the matching or the edge is deleted.
    Pendant vertices are matched greedily (always optimal); the bound is the sum
    of ``floor(|C| / 2)`` over the remaining components.
    """
    if g.n > MATCHING_MAX_ORDER:
        raise UnsupportedSize(f"max_matching_size supports n <= {MATCHING_MAX_ORDER}")
    best = 0

    def comp_bound(adj: list[int], alive: int) -> int:
        total = 0
        left = alive
        while left:
            v = (left & -left).bit_length() - 1
            comp = 1 << v
            frontier = comp
            while frontier:
                nxt = 0
                for x in _bits(frontier):
                    nxt |= adj[x]
                nxt &= alive & ~comp
                comp |= nxt
                frontier = nxt
            total += popcount(comp) // 2
            left &= ~comp
        return total

    def rec(adj: list[int], alive: int, size: int) -> None:
        nonlocal best
        changed = True
        while changed:
            changed = False
            for v in _bits(alive):
                if not (alive >> v) & 1:
                    continue
                nb = adj[v] & alive
                if nb == 0:
                    alive &= ~(1 << v)
                    changed = True
                elif nb & (nb - 1) == 0:
                    w = nb.bit_length() - 1
                    alive &= ~((1 << v) | (1 << w))
                    size += 1
                    changed = True
        if not alive:
            best = max(best, size)
            return
        if size + comp_bound(adj, alive) <= best:
            return
        u = min(_bits(alive), key=lambda x: (popcount(adj[x] & alive), x))
        w = max(_bits(adj[u] & alive), key=lambda x: (popcount(adj[x] & alive), -x))
        rec(adj, alive & ~((1 << u) | (1 << w)), size + 1)
        if size + comp_bound(adj, alive) <= best:
            return
        cut = list(adj)
        cut[u] &= ~(1 << w)
        cut[w] &= ~(1 << u)
        rec(cut, alive, size)

    rec(list(g.adj), (1 << g.n) - 1, 0)
    return best


# -- canonical forms ------------------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """graph6 string of the canonically relabelled graph, as bytes."""

    code: bytes

    def __str__(self) -> str:
        return self.code.decode("ascii")


def _refined_cells(g: Graph, color: list[int] | None = None) -> list[list[int]]:
    """Ordered equitable partition from ``color`` (default: degrees) by iterated refinement."""
    n = g.n
    if color is None:
        color = g.degrees()
    while True:
        sigs = [(color[v], tuple(sorted(color[u] for u in _bits(g.adj[v])))) for v in range(n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(ranks) == len(set(color)):
            break
        color = new
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(color[v], []).append(v)
    return [cells[c] for c in sorted(cells)]


def _cell_colors(n: int, cells: list[list[int]]) -> list[int]:
    color = [0] * n
    for i, cell in enumerate(cells):
        for v in cell:
            color[v] = i
    return color


def _twin_labels(g: Graph, cell: list[int]) -> list[int]:
    """Label each vertex of ``cell`` by its twin class within the cell."""
    labels: list[int] = []
    reps: list[int] = []
    for v in cell:
        for i, r in enumerate(reps):
            if g.adj[v] & ~(1 << r) == g.adj[r] & ~(1 << v):
                labels.append(i)
                break
        else:
            labels.append(len(reps))
            reps.append(v)
    return labels


def _cell_arrangements(g: Graph, cell: list[int]) -> np.ndarray:
    """All orderings of ``cell`` up to permutations of twins.

    Swapping twins is an automorphism, so only one ordering per coset is
    needed: members of a twin class appear in increasing vertex order.
    """
    if len(cell) == 1:
        return np.array([cell], dtype=np.int64)
    pattern = _arrangement_pattern(tuple(_twin_labels(g, cell)))
    return np.asarray(cell, dtype=np.int64)[pattern]


@lru_cache(maxsize=None)
def _arrangement_pattern(labels: tuple[int, ...]) -> np.ndarray:
    """Index arrays for the distinct orderings of a labelled cell."""
    size = len(labels)
    if len(set(labels)) == size:
        return np.array(list(permutations(range(size))), dtype=np.int64).reshape(-1, size)
    members: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        members.setdefault(lab, []).append(i)
    out = []
    for arr in _multiset_perms(sorted(labels)):
        used = {lab: 0 for lab in members}
        row = []
        for lab in arr:
            row.append(members[lab][used[lab]])
            used[lab] += 1
        out.append(row)
    return np.array(out, dtype=np.int64).reshape(-1, size)


def _multiset_perms(items: list[int]) -> Iterator[tuple[int, ...]]:
    counts: dict[int, int] = {}
    for x in items:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)
    n = len(items)
    cur: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(cur) == n:
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


@lru_cache(maxsize=None)
def _pair_index(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ii, jj = [], []
    for j in range(1, n):
        for i in range(j):
            ii.append(i)
            jj.append(j)
    e = len(ii)
    weights = np.array([1 << (e - 1 - t) for t in range(e)], dtype=np.uint64)
    return np.array(ii, dtype=np.int64), np.array(jj, dtype=np.int64), weights


_CHUNK = 1 << 16
# Above this many cell-respecting orderings, individualise a vertex and refine.
_SCAN_LIMIT = 40320


def _arrangement_count(labels: list[int]) -> int:
    total = math.factorial(len(labels))
    for lab in set(labels):
        total //= math.factorial(labels.count(lab))
    return total


def canonical_labeling(g: Graph) -> list[int]:
    """Vertex order minimising the graph6 upper-triangle bit string.

    The minimum is taken over all orderings that respect the refined degree
    partition (cells in increasing colour order), with twin permutations
    factored out.  When that set is too large, the first cell that still has
    several orderings is split by individualising each of its vertices in
    turn and refining again; the minimum over all branches is kept.  Every
    step is isomorphism-invariant, so the result is a canonical labelling.
    """
    n = g.n
    if n > CANON_MAX_ORDER:
        raise UnsupportedSize(f"canonical_form supports n <= {CANON_MAX_ORDER}")
    if n <= 1:
        return list(range(n))
    mat = g.adjacency_matrix().astype(np.uint64)
    _, perm = _search(g, mat, _refined_cells(g))
    return [int(x) for x in perm]


def _search(g: Graph, mat: np.ndarray, cells: list[list[int]]) -> tuple[int, np.ndarray]:
    counts = [_arrangement_count(_twin_labels(g, c)) if len(c) > 1 else 1 for c in cells]
    total = 1
    for c in counts:
        total *= c
    if total <= _SCAN_LIMIT:
        return _scan(g, mat, cells)
    target = next(i for i, c in enumerate(counts) if c > 1)
    best: tuple[int, np.ndarray] | None = None
    base = _cell_colors(g.n, cells)
    for v in cells[target]:
        color = [2 * c + (0 if x == v else 1) for x, c in enumerate(base)]
        cand = _search(g, mat, _refined_cells(g, color))
        if best is None or cand[0] < best[0]:
            best = cand
    assert best is not None
    return best


def _scan(g: Graph, mat: np.ndarray, cells: list[list[int]]) -> tuple[int, np.ndarray]:
    n = g.n
    blocks = [_cell_arrangements(g, c) for c in cells]
    ii, jj, weights = _pair_index(n)

    # Enumerate the product of per-cell arrangements in chunks of the first
    # varying blocks; the tail product is materialised once.
    sizes = [len(b) for b in blocks]
    best_val: int | None = None
    best_perm: np.ndarray | None = None
    split = len(blocks)
    tail = 1
    while split > 0 and tail * sizes[split - 1] <= _CHUNK:
        split -= 1
        tail *= sizes[split]
    tail_perm = _product(blocks[split:]) if split < len(blocks) else np.zeros((1, 0), np.int64)
    head_blocks = blocks[:split]
    for head in _iter_product(head_blocks):
        if head.size:
            perms = np.hstack([np.broadcast_to(head, (tail_perm.shape[0], head.size)), tail_perm])
        else:
            perms = tail_perm
        vals = (mat[perms[:, ii], perms[:, jj]] * weights).sum(axis=1, dtype=np.uint64)
        idx = int(np.argmin(vals))
        v = int(vals[idx])
        if best_val is None or v < best_val:
            best_val = v
            best_perm = perms[idx].copy()
    assert best_val is not None and best_perm is not None
    return best_val, best_perm


def _product(blocks: list[np.ndarray]) -> np.ndarray:
    out = np.zeros((1, 0), dtype=np.int64)
    for b in blocks:
        r, s = out.shape[0], b.shape[0]
        out = np.hstack([np.repeat(out, s, axis=0), np.tile(b, (r, 1))])
    return out


def _iter_product(blocks: list[np.ndarray]) -> Iterator[np.ndarray]:
    if not blocks:
        yield np.zeros(0, dtype=np.int64)
        return
    first, rest = blocks[0], blocks[1:]
    for row in first:
        for tail in _iter_product(rest):
            yield np.concatenate([row, tail])


def canonical_form(g: Graph) -> CanonicalForm:
    from .graph6 import encode

    return CanonicalForm(encode(g.relabel(canonical_labeling(g))).encode("ascii"))


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_labeling(g))


# -- isomorph-free enumeration ----------------------------------------------------

# Number of unlabelled graphs of order n (n = 0..10).
GRAPH_COUNTS = (1, 1, 2, 4, 11, 34, 156, 1044, 12346, 274668, 12005168)


@lru_cache(maxsize=None)
def _graphs_of_order(n: int) -> tuple[Graph, ...]:
    if n == 0:
        return (Graph(0, ()),)
    if n == 1:
        return (Graph(1, (0,)),)
    seen: dict[bytes, Graph] = {}
    new_bit = 1 << (n - 1)
    for h in _graphs_of_order(n - 1):
        degs = h.degrees()
        for r in range(n):
            for nbrs in combinations(range(n - 1), r):
                # Every graph arises from a smaller one by adding a vertex of
                # minimum degree, so other extensions are redundant.
                mask = 0
                for u in nbrs:
                    mask |= 1 << u
                if any(degs[u] + ((mask >> u) & 1) < r for u in range(n - 1)):
                    continue
                adj = tuple(row | (new_bit if (mask >> u) & 1 else 0) for u, row in enumerate(h.adj))
                g = Graph(n, adj + (mask,))
                cg = canonical_graph(g)
                key = _adj_key(cg)
                if key not in seen:
                    seen[key] = cg
    return tuple(sorted(seen.values(), key=lambda x: (x.num_edges, _adj_key(x))))


def _adj_key(g: Graph) -> bytes:
    from .graph6 import encode

    return encode(g).encode("ascii")


def enumerate_graphs(n: int) -> Iterator[Graph]:
    """One canonically labelled representative per isomorphism class of order n.

    Order is by edge count, then graph6 code, and is deterministic.
    """
    if n < 1:
        raise InvalidParameters("enumerate_graphs needs n >= 1")
    if n > ENUM_MAX_ORDER:
        raise UnsupportedSize(f"enumerate_graphs supports n <= {ENUM_MAX_ORDER}")
    return iter(_graphs_of_order(n))
