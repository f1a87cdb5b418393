"""Exhaustive enumeration of small canonical diagrams.

The test corpus is the set of all nonzero canonical trivalent diagrams with
at most four vertices and at most two legs (connected or not).  Enumeration
runs in two stages: first the underlying multigraphs (vertices of degree 3,
legs of degree 1, loops and parallel edges allowed), deduped up to vertex
relabeling; then, for one half-edge realization of each multigraph, every
per-vertex orientation pattern.  Canonicalization dedupes the rest and drops
diagrams killed by antisymmetry.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .diagrams import JacobiGraph, canonicalize


def _labeled_multigraphs(nv: int, nl: int):
    """Adjacency maps for degree-3 vertices 0..nv-1 and degree-1 legs nv..nv+nl-1.

    Yields dicts {(i, j): multiplicity} with i <= j; (i, i) counts loops
    (each loop eats two degree units).  Leg nodes cannot carry loops.
    """
    n = nv + nl
    deg = [3] * nv + [1] * nl
    pairs = [(i, j) for i in range(n) for j in range(i, n)
             if not (i == j and i >= nv)]

    out = []

    def rec(idx, remaining, acc):
        if idx == len(pairs):
            if all(r == 0 for r in remaining):
                out.append(dict(acc))
            return
        i, j = pairs[idx]
        if i == j:
            cap = remaining[i] // 2
        else:
            cap = min(remaining[i], remaining[j])
        for m in range(cap + 1):
            if m:
                remaining[i] -= 2 * m if i == j else m
                if i != j:
                    remaining[j] -= m
                acc[(i, j)] = m
            rec(idx + 1, remaining, acc)
            if m:
                remaining[i] += 2 * m if i == j else m
                if i != j:
                    remaining[j] += m
                del acc[(i, j)]

    rec(0, deg, {})
    return out


def _multigraph_key(adj, nv, nl):
    """Cheap dedup key: adjacency minimized over vertex permutations.

    Leg nodes are pinned (they are labeled attachment points)."""
    best = None
    for perm in itertools.permutations(range(nv)):
        f = lambda x: perm[x] if x < nv else x
        items = tuple(sorted(((min(f(i), f(j)), max(f(i), f(j))), m)
                             for (i, j), m in adj.items()))
        if best is None or items < best:
            best = items
    return best


def _realize(adj, nv, nl):
    """One half-edge realization: vertex i owns slots (3i, 3i+1, 3i+2)."""
    free = {i: [3 * i + k for k in range(3)] for i in range(nv)}
    for j in range(nl):
        free[nv + j] = [3 * nv + j]
    edges = []
    for (i, j), m in sorted(adj.items()):
        for _ in range(m):
            if i == j:
                a = free[i].pop(0)
                b = free[i].pop(0)
            else:
                a = free[i].pop(0)
                b = free[j].pop(0)
            edges.append((a, b))
    verts = [(3 * i, 3 * i + 1, 3 * i + 2) for i in range(nv)]
    legs = tuple(range(3 * nv, 3 * nv + nl))
    return verts, legs, edges


def enumerate_graphs(n_vertices: int, n_legs: int):
    """All distinct nonzero canonical diagrams with the given shape."""
    if (3 * n_vertices + n_legs) % 2 != 0:
        return []
    seen_mg = set()
    found = {}
    for adj in _labeled_multigraphs(n_vertices, n_legs):
        key = _multigraph_key(adj, n_vertices, n_legs)
        if key in seen_mg:
            continue
        seen_mg.add(key)
        verts, legs, edges = _realize(adj, n_vertices, n_legs)
        for flips in itertools.product((False, True), repeat=n_vertices):
            vs = [(v[0], v[2], v[1]) if fl else v
                  for v, fl in zip(verts, flips)]
            g = JacobiGraph.make(vs, legs, edges)
            canon, s = canonicalize(g)
            if s != 0:
                found[canon] = True
    return sorted(found, key=lambda g: g.sort_key())


@lru_cache(maxsize=None)
def corpus(max_vertices: int = 4, max_legs: int = 2):
    """The full small-diagram corpus, sorted canonically."""
    out = []
    for nv in range(max_vertices + 1):
        for nl in range(max_legs + 1):
            out.extend(enumerate_graphs(nv, nl))
    return tuple(sorted(out, key=lambda g: g.sort_key()))


def corpus_with_max_vertices(max_vertices: int, max_legs: int = 2):
    return tuple(g for g in corpus(4, max_legs)
                 if len(g.vertices) <= max_vertices)
