"""Independent oracles shared across tests.

Everything here is deliberately brute force: permutation search for
isomorphism, dense integer matrix powers for walk counts, exhaustive subset
enumeration for graphlets. These stay independent of the library's fast
paths so they can referee them.
"""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from momentdist import Graph


def random_graph(rng, n: int, p: float) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Brute-force isomorphism test; only sensible for n <= 8."""
    if g1.n != g2.n or g1.m != g2.m:
        return False
    if sorted(g1.degrees) != sorted(g2.degrees):
        return False
    e2 = {(u, v) for u, v in g2.edges()}
    for perm in permutations(range(g1.n)):
        mapped = {tuple(sorted((perm[u], perm[v]))) for u, v in g1.edges()}
        if mapped == e2:
            return True
    return False


def dense_int_power(g: Graph, k: int) -> np.ndarray:
    """A^k as exact integers (object dtype so nothing overflows)."""
    a = np.zeros((g.n, g.n), dtype=object)
    for u in range(g.n):
        for v in g.neighbors(u):
            a[u, v] = 1
    p = np.eye(g.n, dtype=object)
    for _ in range(k):
        p = p @ a
    return p


def brute_graphlet3_counts(g: Graph) -> np.ndarray:
    """Exhaustive induced 3-subset counts (empty, one-edge, wedge, triangle)."""
    counts = np.zeros(4, dtype=np.int64)
    for trio in combinations(range(g.n), 3):
        edges = sum(
            g.has_edge(a, b) for a, b in combinations(trio, 2)
        )
        counts[edges] += 1
    return counts


def brute_graphlet4_distribution(g: Graph) -> np.ndarray:
    """Exhaustive induced 4-subset distribution in catalog order."""
    from momentdist.baselines import _DEGSEQ4_TO_INDEX, GRAPHLET4_TYPES

    counts = np.zeros(len(GRAPHLET4_TYPES), dtype=np.int64)
    for quad in combinations(range(g.n), 4):
        degs = [0, 0, 0, 0]
        for a in range(4):
            for b in range(a + 1, 4):
                if g.has_edge(quad[a], quad[b]):
                    degs[a] += 1
                    degs[b] += 1
        counts[_DEGSEQ4_TO_INDEX[tuple(sorted(degs))]] += 1
    return counts / counts.sum()


def component_count(g: Graph) -> int:
    seen = np.zeros(g.n, dtype=bool)
    comps = 0
    for s in range(g.n):
        if seen[s]:
            continue
        comps += 1
        stack = [s]
        seen[s] = True
        while stack:
            u = stack.pop()
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    stack.append(int(v))
    return comps
