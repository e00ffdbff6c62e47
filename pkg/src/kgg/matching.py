"""Matching engines for general graphs and Euclidean point sets.

``max_matching`` is Edmonds' blossom algorithm (cardinality version, odd
cycles are contracted through a base array), so it is correct on the
non-bipartite, non-planar graphs produced for k >= 1.  The exponential
routines (``deficiency``, ``enumerate_perfect_matchings``,
``lexmin_matching``, ``independence_number``) are exact oracles with hard
size caps.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional, Protocol

import numpy as np

from kgg.errors import NoPerfectMatching, OddCardinality, SelfCheckFailed, TooLarge
from kgg.geom import as_points, pairwise_dist2

Edge = tuple[int, int]

MAX_ENUMERATE = 14
MAX_DEFICIENCY = 16
MAX_INDEPENDENCE = 20


class GraphLike(Protocol):
    n: int
    edges: Iterable[Edge]


@dataclass(frozen=True)
class Graph:
    """Plain undirected simple graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset[Edge]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        norm = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge {(i, j)} out of range for n={n}")
            norm.add((min(i, j), max(i, j)))
        return cls(n, frozenset(norm))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset(combinations(range(n), 2)))


def _adjacency(graph: GraphLike) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(graph.n)]
    for i, j in sorted(graph.edges):
        adj[i].append(j)
        adj[j].append(i)
    return adj


def _bitmasks(graph: GraphLike) -> list[int]:
    nbr = [0] * graph.n
    for i, j in graph.edges:
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
    return nbr


@dataclass(frozen=True)
class Matching:
    pairs: tuple[Edge, ...]
    ws: tuple[float, ...] = ()

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def bottleneck(self) -> float:
        return self.ws[0] if self.ws else 0.0

    def vertices(self) -> set[int]:
        return {v for e in self.pairs for v in e}

    def __contains__(self, edge) -> bool:
        i, j = edge
        return (min(i, j), max(i, j)) in self.pairs

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], points=None) -> "Matching":
        norm = tuple(sorted((min(i, j), max(i, j)) for i, j in pairs))
        seen: set[int] = set()
        for e in norm:
            if seen & set(e):
                raise ValueError(f"vertex repeated in matching at edge {e}")
            seen.update(e)
        ws: tuple[float, ...] = ()
        if points is not None:
            pts = as_points(points)
            ws = tuple(sorted((math.dist(pts[i], pts[j]) for i, j in norm), reverse=True))
        return cls(norm, ws)


# -- maximum cardinality matching ------------------------------------------


def _augmenting_path_end(adj, match, root, parent, base):
    n = len(adj)
    used = [False] * n
    for v in range(n):
        parent[v] = -1
        base[v] = v
    used[root] = True
    queue = deque([root])

    def lca(a, b):
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark_path(v, b, child, blossom):
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and parent[match[to]] != -1):
                # odd cycle: contract it onto its base
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if match[to] == -1:
                    return to
                used[match[to]] = True
                queue.append(match[to])
    return -1


def _max_matching_mates(n: int, adj: list[list[int]]) -> list[int]:
    match = [-1] * n
    # greedy warm start
    for v in range(n):
        if match[v] == -1:
            for u in adj[v]:
                if match[u] == -1:
                    match[v], match[u] = u, v
                    break
    parent = [-1] * n
    base = list(range(n))
    for root in range(n):
        if match[root] != -1:
            continue
        end = _augmenting_path_end(adj, match, root, parent, base)
        while end != -1:
            pv = parent[end]
            nxt = match[pv]
            match[end], match[pv] = pv, end
            end = nxt
    return match


def max_matching(graph: GraphLike, points=None) -> Matching:
    """Maximum-cardinality matching of an arbitrary simple graph.

    When ``points`` is given the returned matching carries its weight
    sequence of Euclidean edge lengths.
    """
    mates = _max_matching_mates(graph.n, _adjacency(graph))
    pairs = [(v, u) for v, u in enumerate(mates) if u > v]
    return Matching.from_pairs(pairs, points)


def matching_number(graph: GraphLike) -> int:
    return sum(1 for v, u in enumerate(_max_matching_mates(graph.n, _adjacency(graph))) if u > v)


# -- Tutte-Berge ------------------------------------------------------------


def odd_components(nbr: list[int], alive: int) -> int:
    """Number of odd connected components induced on the vertex bitmask ``alive``."""
    odd = 0
    rem = alive
    while rem:
        comp = frontier = rem & -rem
        while frontier:
            bit = frontier & -frontier
            frontier ^= bit
            new = nbr[bit.bit_length() - 1] & rem & ~comp
            comp |= new
            frontier |= new
        rem &= ~comp
        odd += comp.bit_count() & 1
    return odd


@dataclass(frozen=True)
class DeficiencyReport:
    deficiency: int
    witness: frozenset[int]


def deficiency(graph: GraphLike) -> DeficiencyReport:
    """``max_S o(G - S) - |S|`` by sweeping every vertex subset.

    The witness is the first maximising subset in increasing bitmask order.
    """
    n = graph.n
    if n > MAX_DEFICIENCY:
        raise TooLarge(f"deficiency sweep capped at n={MAX_DEFICIENCY}, got n={n}")
    nbr = _bitmasks(graph)
    full = (1 << n) - 1
    best, best_s = -1 - n, 0
    for s in range(1 << n):
        value = odd_components(nbr, full & ~s) - s.bit_count()
        if value > best:
            best, best_s = value, s
    witness = frozenset(i for i in range(n) if best_s >> i & 1)
    return DeficiencyReport(best, witness)


def deficiency_of(graph: GraphLike, removed: Iterable[int]) -> int:
    s = 0
    for v in removed:
        s |= 1 << v
    nbr = _bitmasks(graph)
    return odd_components(nbr, ((1 << graph.n) - 1) & ~s) - s.bit_count()


def has_perfect_matching(graph: GraphLike, cross_check: bool = False) -> bool:
    """True iff a maximum matching covers every vertex.

    With ``cross_check`` and n <= 16, the answer is compared with Tutte's
    condition by subset enumeration.
    """
    if graph.n % 2:
        result = False
    else:
        result = 2 * matching_number(graph) == graph.n
    if cross_check and graph.n <= MAX_DEFICIENCY:
        tutte = deficiency(graph).deficiency == 0
        if tutte != result:
            raise SelfCheckFailed(f"blossom says {result}, Tutte's condition says {tutte}")
    return result


# -- Euclidean bottleneck matching -------------------------------------------


def _norm_edge(e) -> Edge:
    i, j = int(e[0]), int(e[1])
    return (i, j) if i < j else (j, i)


def bottleneck_matching(points, edges: Optional[Iterable[Edge]] = None, forbid: Optional[Edge] = None) -> Matching:
    """Perfect matching minimising its longest edge.

    Binary search over the sorted candidate squared lengths; each probe tests
    perfect-matching feasibility of the thresholded graph.  ``edges``
    restricts the candidates (default: all pairs); ``forbid`` removes one edge.
    """
    pts = as_points(points)
    n = len(pts)
    if n % 2:
        raise OddCardinality(f"perfect matching needs an even number of points, got {n}")
    if n == 0:
        return Matching(())
    cand = set(combinations(range(n), 2)) if edges is None else {_norm_edge(e) for e in edges}
    if forbid is not None:
        cand.discard(_norm_edge(forbid))
    d2 = pairwise_dist2(pts)
    ordered = sorted(cand, key=lambda e: (d2[e], e))
    lengths = np.array([d2[e] for e in ordered])
    levels = np.unique(lengths)

    def feasible(level: float) -> bool:
        upto = int(np.searchsorted(lengths, level, side="right"))
        return has_perfect_matching(Graph(n, frozenset(ordered[:upto])))

    if len(levels) == 0 or not feasible(levels[-1]):
        raise NoPerfectMatching("allowed edges admit no perfect matching")
    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    upto = int(np.searchsorted(lengths, levels[lo], side="right"))
    return max_matching(Graph(n, frozenset(ordered[:upto])), pts)


# -- enumeration oracles -----------------------------------------------------


def enumerate_perfect_matchings(n: int, edges: Optional[Iterable[Edge]] = None) -> Iterator[tuple[Edge, ...]]:
    """Yield every perfect matching of the complete graph (or of ``edges``).

    Order: the lowest unmatched vertex is paired with candidates in
    increasing index order.
    """
    if n > MAX_ENUMERATE:
        raise TooLarge(f"matching enumeration capped at n={MAX_ENUMERATE}, got n={n}")
    if n % 2:
        return
    allowed = None if edges is None else {_norm_edge(e) for e in edges}
    free = [True] * n
    stack: list[Edge] = []

    def rec(start: int):
        v = start
        while v < n and not free[v]:
            v += 1
        if v == n:
            yield tuple(stack)
            return
        free[v] = False
        for u in range(v + 1, n):
            if free[u] and (allowed is None or (v, u) in allowed):
                free[u] = False
                stack.append((v, u))
                yield from rec(v + 1)
                stack.pop()
                free[u] = True
        free[v] = True

    yield from rec(0)


def lexmin_matching(points) -> Matching:
    """Perfect matching with lexicographically minimal weight sequence.

    Depth-first over the enumeration order of ``enumerate_perfect_matchings``,
    pruning a partial matching once its sorted weights already exceed the
    incumbent's prefix; ties keep the first matching found.
    """
    pts = as_points(points)
    n = len(pts)
    if n > MAX_ENUMERATE:
        raise TooLarge(f"lex-min search capped at n={MAX_ENUMERATE}, got n={n}")
    if n % 2:
        raise OddCardinality(f"perfect matching needs an even number of points, got {n}")
    d2 = pairwise_dist2(pts).tolist()
    free = [True] * n
    stack: list[Edge] = []
    cur: list[float] = []  # descending
    best: list = [None, None]

    def insert(w: float) -> int:
        k = 0
        while k < len(cur) and cur[k] >= w:
            k += 1
        cur.insert(k, w)
        return k

    def rec(start: int):
        v = start
        while v < n and not free[v]:
            v += 1
        if v == n:
            if best[0] is None or cur < best[0]:
                best[0], best[1] = list(cur), tuple(stack)
            return
        free[v] = False
        row = d2[v]
        for u in range(v + 1, n):
            if not free[u]:
                continue
            k = insert(row[u])
            if best[0] is None or not cur > best[0][: len(cur)]:
                free[u] = False
                stack.append((v, u))
                rec(v + 1)
                stack.pop()
                free[u] = True
            del cur[k]
        free[v] = True

    rec(0)
    return Matching.from_pairs(best[1] or (), pts)


def independence_number(graph: GraphLike) -> int:
    """Exact maximum independent set size by branch and bound on bitmasks."""
    n = graph.n
    if n > MAX_INDEPENDENCE:
        raise TooLarge(f"independence number capped at n={MAX_INDEPENDENCE}, got n={n}")
    nbr = _bitmasks(graph)
    memo: dict[int, int] = {}

    def mis(cand: int) -> int:
        if cand == 0:
            return 0
        hit = memo.get(cand)
        if hit is not None:
            return hit
        # branch on the candidate vertex of largest residual degree
        best_v, best_deg = -1, -1
        rest = cand
        while rest:
            bit = rest & -rest
            rest ^= bit
            v = bit.bit_length() - 1
            deg = (nbr[v] & cand).bit_count()
            if deg > best_deg:
                best_v, best_deg = v, deg
        bit = 1 << best_v
        if best_deg == 0:
            value = cand.bit_count()
        elif best_deg == 1:
            # a degree-one vertex is always in some maximum independent set
            value = 1 + mis(cand & ~bit & ~nbr[best_v])
        else:
            value = max(mis(cand & ~bit), 1 + mis(cand & ~bit & ~nbr[best_v]))
        memo[cand] = value
        return value

    return mis((1 << n) - 1)
