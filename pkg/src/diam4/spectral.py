"""Spectral radius computation and the column-sum comparison criterion.

For a graph with adjacency matrix A and integers a >= 0, b >= 1 put
``B = A^2 - a A - b I``.  If every column sum of B is <= 0 then the spectral
radius is at most the largest root of ``x^2 - a x - b``, with equality exactly
when all column sums vanish.  Column sums are computed exactly from degrees:
``B_u = sum_{x ~ u} d(x) - a d(u) - b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConvergenceFailure, InvalidParameters
from .graph import Graph, is_connected, link_graph

DEFAULT_TOL = 1e-12
MAX_ITER = 10**6
EQUALITY_TOL = 1e-9
_DENSE_MAX = 256


@dataclass(frozen=True)
class CharPolyParams:
    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < 0:
            raise InvalidParameters("polynomial coefficients must be nonnegative")

    @property
    def largest_root(self) -> float:
        return (self.a + math.sqrt(self.a * self.a + 4 * self.b)) / 2

    def __call__(self, x: float) -> float:
        return x * x - self.a * x - self.b

    @classmethod
    def for_snk(cls, n: int, k: int) -> CharPolyParams:
        return cls(k - 1, k * (n - k))


@dataclass(frozen=True)
class SpectralResult:
    radius: float
    iterations: int
    residual: float  # ||Ax - radius x||_inf with ||x||_inf = 1


def exact_radius_snk(n: int, k: int) -> float:
    if not 1 <= k < n:
        raise InvalidParameters(f"need 1 <= k < n, got n={n}, k={k}")
    return CharPolyParams.for_snk(n, k).largest_root


def _matvec(g: Graph):
    n = g.n
    if n <= _DENSE_MAX:
        m = g.adjacency_matrix().astype(float) + np.eye(n)
        return lambda x: m @ x
    rows, cols = [], []
    for u, v in g.edges():
        rows += (u, v)
        cols += (v, u)
    r = np.asarray(rows, dtype=np.int64)
    c = np.asarray(cols, dtype=np.int64)
    return lambda x: x + np.bincount(r, weights=x[c], minlength=n)


def spectral_radius(g: Graph, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> SpectralResult:
    """Largest adjacency eigenvalue by power iteration on A + I.

    The +1 shift makes the dominant eigenvalue of a bipartite graph strictly
    dominant in modulus, and the all-ones start vector overlaps every
    component's Perron vector, so disconnected graphs are handled too.
    Stops when both the relative change of the Rayleigh quotient and the
    relative residual are at most ``tol``.
    """
    if g.n < 1:
        raise InvalidParameters("spectral_radius needs at least one vertex")
    if not any(g.adj):
        return SpectralResult(0.0, 0, 0.0)
    apply = _matvec(g)
    x = np.full(g.n, 1.0 / math.sqrt(g.n))
    prev = math.inf
    best = (math.inf, 0.0)
    for it in range(1, max_iter + 1):
        y = apply(x)
        rq = float(x @ y)
        mu = rq - 1.0
        scale = max(1.0, abs(mu))
        residual = float(np.max(np.abs(y - rq * x))) / float(np.max(np.abs(x)))
        if residual < best[0]:
            best = (residual, mu)
        if abs(mu - prev) <= tol * scale and residual <= tol * scale:
            return SpectralResult(max(mu, 0.0), it, residual)
        prev = mu
        x = y / np.linalg.norm(y)
    raise ConvergenceFailure(
        f"power iteration did not converge in {max_iter} iterations",
        estimate=best[1],
        iterations=max_iter,
        residual=best[0],
    )


def snk_plus_cubic(n: int, k: int) -> tuple[int, int, int, int]:
    """Coefficients (1, c2, c1, c0) of det(xI - Q) for the 3x3 quotient Q of S+_{n,k}.

    Q has rows [k-1, 2, n-k-2], [k, 1, 0], [k, 0, 0] for the cells
    (clique, added-edge pair, other independent vertices).
    """
    r = n - k - 2
    return 1, -k, -(k + 1 + k * r), k * r


def exact_radius_snk_plus(n: int, k: int) -> float:
    """Largest root of the quotient cubic by safeguarded Newton from above."""
    if k < 1 or n < k + 2:
        raise InvalidParameters(f"need k >= 1 and n >= k + 2, got n={n}, k={k}")
    _, c2, c1, c0 = snk_plus_cubic(n, k)

    def p(x: float) -> float:
        return ((x + c2) * x + c1) * x + c0

    def dp(x: float) -> float:
        return (3 * x + 2 * c2) * x + c1

    lo = exact_radius_snk(n, k)  # proper spanning subgraph: strictly smaller radius
    hi = float(n - 1)  # max degree
    if p(lo) >= 0:
        lo = 0.0
    x = hi
    for _ in range(200):
        fx = p(x)
        if fx == 0:
            return x
        if fx > 0:
            hi = x
        else:
            lo = x
        d = dp(x)
        nxt = x - fx / d if d > 0 else math.nan
        if not (lo < nxt < hi):
            nxt = (lo + hi) / 2
        if abs(nxt - x) <= 4 * math.ulp(x):
            return nxt
        x = nxt
    return x


# -- column sums of B = A^2 - aA - bI -----------------------------------------


@dataclass(frozen=True)
class BColumnSums:
    params: CharPolyParams
    sums: tuple[int, ...]


def _column_sums(g: Graph, a: int, b: int) -> tuple[int, ...]:
    deg = g.degrees()
    return tuple(sum(deg[x] for x in g.neighbors(u)) - a * deg[u] - b for u in range(g.n))


def b_column_sums(g: Graph, a: int, b: int) -> BColumnSums:
    return BColumnSums(CharPolyParams(a, b), _column_sums(g, a, b))


def link_form(g: Graph, k: int, v: int) -> int:
    """Column sum at ``v`` rewritten through the link graph L_v.

    ``sum_{x in N^1(v)} d_L(x) - (k-2) d(v) - k(n-k)``.
    """
    lg = link_graph(g, v)
    return sum(lg.degree(x) for x in lg.first_shell) - (k - 2) * g.degree(v) - k * (g.n - k)


def eq1_identity_check(g: Graph, k: int) -> bool:
    """Degree-sum and link-graph evaluations of B_v agree at every vertex.

    Pure integer algebra, so any k >= 1 is accepted, including k >= n.
    """
    sums = _column_sums(g, k - 1, k * (g.n - k))
    return all(sums[v] == link_form(g, k, v) for v in range(g.n))


def eq2_bound_check(g: Graph, k: int) -> bool:
    """``B_v <= (d(v) - k)(n - k)`` at every vertex."""
    n = g.n
    sums = _column_sums(g, k - 1, k * (n - k))
    return all(sums[v] <= (g.degree(v) - k) * (n - k) for v in range(n))


# -- comparison criterion -------------------------------------------------------


class Verdict(str, Enum):
    HYPOTHESIS_NOT_MET = "hypothesis-not-met"
    BOUND_HOLDS = "bound-holds"
    EQUALITY_CASE = "equality-case"
    VIOLATION = "VIOLATION"


@dataclass(frozen=True)
class Lemma21Result:
    verdict: Verdict
    mu: float | None
    mu_prime: float
    margin: float | None  # mu - mu_prime
    witness: int | None = None
    detail: str = ""


def lemma21_check(g: Graph, a: int, b: int, tol: float = EQUALITY_TOL) -> Lemma21Result:
    # a = 0 is admitted so the star-like case k = 1 can be checked as well
    if a < 0 or b < 1:
        raise InvalidParameters("criterion needs a >= 0 and b >= 1")
    params = CharPolyParams(a, b)
    mu_prime = params.largest_root
    if not is_connected(g):
        return Lemma21Result(Verdict.HYPOTHESIS_NOT_MET, None, mu_prime, None, detail="disconnected")
    sums = b_column_sums(g, a, b).sums
    pos = [u for u, s in enumerate(sums) if s > 0]
    if pos:
        return Lemma21Result(
            Verdict.HYPOTHESIS_NOT_MET, None, mu_prime, None, witness=pos[0], detail=f"B_{pos[0]} = {sums[pos[0]]} > 0"
        )
    mu = spectral_radius(g).radius
    margin = mu - mu_prime
    if margin > tol:
        worst = max(range(g.n), key=lambda u: (sums[u], -u))
        return Lemma21Result(Verdict.VIOLATION, mu, mu_prime, margin, worst, "radius exceeds root with all B_j <= 0")
    all_zero = all(s == 0 for s in sums)
    if margin >= -tol:
        if not all_zero:
            w = next(u for u, s in enumerate(sums) if s != 0)
            return Lemma21Result(Verdict.VIOLATION, mu, mu_prime, margin, w, f"equality with B_{w} = {sums[w]} != 0")
        return Lemma21Result(Verdict.EQUALITY_CASE, mu, mu_prime, margin)
    if all_zero:
        return Lemma21Result(Verdict.VIOLATION, mu, mu_prime, margin, 0, "all B_j = 0 but radius below root")
    return Lemma21Result(Verdict.BOUND_HOLDS, mu, mu_prime, margin)
