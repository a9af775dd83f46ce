"""Tree-subgraph containment.

``contains_tree`` is the exact oracle: backtracking over tree vertices in BFS
order with degree pruning and symmetry breaking between isomorphic sibling
subtrees.  ``embed_diam4_at_root`` is a fast, sound but incomplete embedder that
places the tree's root at a given vertex and its stars in the first two
neighbourhood shells.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import UnsupportedSize
from .graph import Graph, _bfs_layers, _bits
from .trees import Diam4Tree, decompose

TREE_MAX_ORDER = 14

Edge = tuple[int, int]
TreeLike = Union[Diam4Tree, tuple[int, Sequence[Edge]]]


@dataclass(frozen=True)
class Embedding:
    """``mapping[t]`` is the graph vertex hosting tree vertex ``t``."""

    mapping: tuple[int, ...]

    def pairs(self) -> list[list[int]]:
        return [[t, v] for t, v in enumerate(self.mapping)]


def _tree_parts(t: TreeLike) -> tuple[int, tuple[Edge, ...]]:
    if isinstance(t, Diam4Tree):
        return t.order, t.edges
    m, edges = t
    return m, tuple(edges)


def verify_embedding(g: Graph, t: TreeLike, emb: Embedding | Sequence[int]) -> bool:
    """Edge-by-edge check that ``emb`` is an injective homomorphism of the tree into g."""
    m, edges = _tree_parts(t)
    mp = emb.mapping if isinstance(emb, Embedding) else tuple(emb)
    if len(mp) != m or len(set(mp)) != m:
        return False
    if any(not 0 <= v < g.n for v in mp):
        return False
    return all(g.has_edge(mp[a], mp[b]) for a, b in edges)


def _rooted_codes(adj: list[list[int]], root: int) -> tuple[list[int], list[str], list[int]]:
    m = len(adj)
    parent = [-1] * m
    order = [root]
    for v in order:
        for c in adj[v]:
            if c != parent[v] and c != root:
                parent[c] = v
                order.append(c)
    code = [""] * m
    size = [1] * m
    for v in reversed(order):
        kids = [c for c in adj[v] if c != parent[v]]
        code[v] = "(" + "".join(sorted(code[c] for c in kids)) + ")"
        size[v] += sum(size[c] for c in kids)
    return parent, code, size


def contains_tree(g: Graph, t: TreeLike) -> Embedding | None:
    """Exact subgraph test for a tree; returns a verified embedding or ``None``."""
    m, edges = _tree_parts(t)
    if m > TREE_MAX_ORDER:
        raise UnsupportedSize(f"contains_tree supports trees with at most {TREE_MAX_ORDER} vertices")
    if m > g.n:
        return None
    if m == 1:
        return Embedding((0,)) if g.n else None
    adj_t: list[list[int]] = [[] for _ in range(m)]
    for a, b in edges:
        adj_t[a].append(b)
        adj_t[b].append(a)
    tdeg = [len(x) for x in adj_t]
    root = max(range(m), key=lambda v: (tdeg[v], -v))
    parent, code, size = _rooted_codes(adj_t, root)

    # BFS order; siblings sorted so that isomorphic subtrees are adjacent.
    order = [root]
    for v in order:
        kids = [c for c in adj_t[v] if c != parent[v]]
        kids.sort(key=lambda c: (-size[c], code[c]))
        order.extend(kids)
    pos = {v: i for i, v in enumerate(order)}
    nkids = [tdeg[v] - (0 if v == root else 1) for v in order]
    par = [pos[parent[v]] if v != root else -1 for v in order]
    need = [tdeg[v] for v in order]
    # Earlier sibling with an isomorphic subtree: its image must be smaller.
    twin = [-1] * m
    for i in range(1, m):
        j = i - 1
        if par[j] == par[i] and code[order[j]] == code[order[i]]:
            twin[i] = j
    kids_before = [0] * m  # children of par[i] placed before position i
    seen_kids: dict[int, int] = {}
    for i in range(1, m):
        kids_before[i] = seen_kids.get(par[i], 0)
        seen_kids[par[i]] = kids_before[i] + 1

    gadj = g.adj
    gdeg = [r.bit_count() for r in gadj]
    img = [-1] * m

    def feasible_open(used: int, upto: int) -> bool:
        # every placed vertex must still have room for its unplaced children
        for j in range(upto + 1):
            pending = nkids[j] - _placed_children(j, upto)
            if pending > 0 and (gadj[img[j]] & ~used).bit_count() < pending:
                return False
        return True

    first_child = [-1] * m
    for i in range(m - 1, 0, -1):
        first_child[par[i]] = i

    def _placed_children(j: int, upto: int) -> int:
        fc = first_child[j]
        if fc == -1 or fc > upto:
            return 0
        return min(upto - fc + 1, nkids[j])

    def rec(i: int, used: int) -> bool:
        if i == m:
            return True
        p = par[i]
        cand = gadj[img[p]] & ~used
        lo = img[twin[i]] if twin[i] >= 0 else -1
        for w in _bits(cand):
            if w <= lo or gdeg[w] < need[i]:
                continue
            if nkids[i] and (gadj[w] & ~used & ~(1 << w)).bit_count() < nkids[i]:
                continue
            img[i] = w
            nu = used | (1 << w)
            if feasible_open(nu, i) and rec(i + 1, nu):
                return True
        img[i] = -1
        return False

    roots = sorted((v for v in range(g.n) if gdeg[v] >= need[0]), key=lambda v: (-gdeg[v], v))
    for r in roots:
        img[0] = r
        if rec(1, 1 << r):
            mapping = [0] * m
            for i, v in enumerate(order):
                mapping[v] = img[i]
            emb = Embedding(tuple(mapping))
            assert verify_embedding(g, (m, edges), emb)
            return emb
    return None


def embed_diam4_at_root(g: Graph, t: Diam4Tree, u: int) -> Embedding | None:
    """Try to embed ``t`` with its root at ``u`` and its stars in the link graph of u.

    Star centres go to distinct neighbours of ``u`` (largest star first, most
    connected neighbour first, with backtracking); leaves are taken greedily,
    second-shell vertices first since trivial stars can only use the first
    shell.  Returns only verified embeddings.
    """
    if t.order > g.n:
        return None
    if t.order == 1:
        return Embedding((u,))
    dec = decompose(t)
    layers = _bfs_layers(g, u)
    n1 = layers[0] if layers else 0
    n2 = layers[1] if len(layers) > 1 else 0
    if n1.bit_count() < dec.p:
        return None
    adj = g.adj
    deg = [r.bit_count() for r in adj]
    stars = dec.nontrivial_stars
    trivial = [c for c, leaves in dec.all_stars if not leaves]
    centres = sorted(_bits(n1), key=lambda x: (-deg[x], x))
    mapping: dict[int, int] = {0: u}

    def place(i: int, used: int) -> bool:
        if i == len(stars):
            free = [x for x in _bits(n1 & ~used)]
            if len(free) < len(trivial):
                return False
            free.sort(key=lambda x: (deg[x], x))
            for c, x in zip(trivial, free):
                mapping[c] = x
            return True
        c, leaves = stars[i]
        for x in centres:
            if (used >> x) & 1:
                continue
            nu = used | (1 << x)
            room = adj[x] & (n1 | n2) & ~nu
            if room.bit_count() < len(leaves):
                continue
            picks = [y for y in _bits(room & n2)] + sorted(_bits(room & n1), key=lambda y: (deg[y], y))
            chosen = picks[: len(leaves)]
            for y in chosen:
                nu |= 1 << y
            if place(i + 1, nu):
                mapping[c] = x
                for leaf, y in zip(leaves, chosen):
                    mapping[leaf] = y
                return True
        return False

    if not place(0, 1 << u):
        return None
    emb = Embedding(tuple(mapping[v] for v in range(t.order)))
    return emb if verify_embedding(g, t, emb) else None


def contains_all(g: Graph, family: Iterable[Diam4Tree]) -> list[Diam4Tree]:
    """Trees of ``family`` not contained in ``g`` (fast embedder, then the oracle)."""
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    missing = []
    for t in family:
        if t.order > g.n:
            missing.append(t)
            continue
        p = len(t.star_sizes)
        found = any(embed_diam4_at_root(g, t, u) is not None for u in order if g.degree(u) >= p)
        if not found and contains_tree(g, t) is None:
            missing.append(t)
    return missing
