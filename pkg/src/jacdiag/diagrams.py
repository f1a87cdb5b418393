"""Trivalent diagrams with orientation data, and exact formal sums of them.

A diagram is stored as a half-edge structure: every half-edge id appears
exactly once inside a trivalent vertex triple or in the leg list, and exactly
once in the perfect matching `edges`.  The triple at a vertex is a
representative of its cyclic orientation; listing it in an odd order negates
the diagram (the antisymmetry relation).  Legs are external attachment points
with a fixed global order; they are never permuted by canonicalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class StructuralError(ValueError):
    """Raised for malformed half-edge structures (dangling ids etc.)."""


@dataclass(frozen=True)
class JacobiGraph:
    vertices: tuple  # tuple of (h, h, h) triples, each an orientation representative
    legs: tuple      # ordered tuple of univalent half-edge ids
    edges: tuple     # sorted tuple of sorted pairs; a perfect matching
    sign: int = 1

    @staticmethod
    def make(vertices, legs=(), edges=(), sign=1) -> "JacobiGraph":
        vs = tuple(tuple(v) for v in vertices)
        es = tuple(sorted(tuple(sorted(e)) for e in edges))
        return JacobiGraph(vs, tuple(legs), es, sign)

    def half_edges(self):
        for v in self.vertices:
            yield from v
        yield from self.legs

    def validate(self) -> None:
        seen = set()
        for v in self.vertices:
            if len(v) != 3:
                raise StructuralError(f"vertex {v} is not trivalent")
            for h in v:
                if h in seen:
                    raise StructuralError(f"half-edge {h} attached twice")
                seen.add(h)
        for h in self.legs:
            if h in seen:
                raise StructuralError(f"leg {h} collides with another attachment")
            seen.add(h)
        matched = set()
        for e in self.edges:
            if len(e) != 2 or e[0] == e[1]:
                raise StructuralError(f"bad edge {e}")
            for h in e:
                if h not in seen:
                    raise StructuralError(f"edge end {h} is dangling")
                if h in matched:
                    raise StructuralError(f"half-edge {h} matched twice")
                matched.add(h)
        if matched != seen:
            raise StructuralError("edges are not a perfect matching on the half-edges")
        if self.sign not in (1, -1):
            raise StructuralError(f"sign must be +-1, got {self.sign}")

    def partner_map(self) -> dict:
        p = {}
        for a, b in self.edges:
            p[a] = b
            p[b] = a
        return p

    def vertex_of(self) -> dict:
        """Map half-edge id -> vertex index, or -1 for legs."""
        at = {}
        for i, v in enumerate(self.vertices):
            for h in v:
                at[h] = i
        for h in self.legs:
            at[h] = -1
        return at

    def n_vertices(self) -> int:
        return len(self.vertices)

    def n_legs(self) -> int:
        return len(self.legs)

    def internal_edges(self):
        """Edges whose both ends sit at trivalent vertices."""
        at = self.vertex_of()
        return [e for e in self.edges if at[e[0]] >= 0 and at[e[1]] >= 0]

    def is_connected(self) -> bool:
        at = self.vertex_of()
        nodes = set(range(len(self.vertices))) | {("leg", h) for h in self.legs}
        if len(nodes) <= 1:
            return True
        def node_of(h):
            i = at[h]
            return i if i >= 0 else ("leg", h)
        adj = {n: set() for n in nodes}
        for a, b in self.edges:
            adj[node_of(a)].add(node_of(b))
            adj[node_of(b)].add(node_of(a))
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            for m in adj[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return seen == nodes

    def sort_key(self):
        return (len(self.vertices), len(self.legs), self.edges, self.vertices)


# All six orders of a triple with the parity of the permutation; rotations are
# even (orientation-preserving), reflections odd.
_PERM3 = (
    ((0, 1, 2), 0),
    ((1, 2, 0), 0),
    ((2, 0, 1), 0),
    ((0, 2, 1), 1),
    ((1, 0, 2), 1),
    ((2, 1, 0), 1),
)


def _search_canonical(g: JacobiGraph):
    """Minimize a relabeling code over vertex orders and triple representatives.

    Vertex slot i receives canonical ids (3i, 3i+1, 3i+2); leg j keeps the
    pinned id 3V + j.  When a slot is placed, it emits one code entry per new
    canonical id: the partner's canonical id if the partner is already placed
    (or is a leg, or sits in this same slot), else a sentinel.  The search is
    greedy-exact for the lexicographic order: at every slot only the
    candidates with the minimal emission are explored, so every completed
    branch carries the same minimal code and the branches are exactly the
    minimal labelings.  Returns (code, parities) with the orientation
    adjustment parities of all of them; a mixed set means the diagram has an
    orientation-reversing automorphism.
    """
    nv = len(g.vertices)
    if nv == 0:
        partner = g.partner_map()
        leg_canon = {h: j for j, h in enumerate(g.legs)}
        code = tuple(leg_canon[partner[h]] for h in g.legs)
        return code, {0}

    # compress half-edge ids to 0..n-1
    ids = sorted(g.half_edges())
    idx = {h: i for i, h in enumerate(ids)}
    n = len(ids)
    partner = [0] * n
    for a, b in g.edges:
        partner[idx[a]] = idx[b]
        partner[idx[b]] = idx[a]
    canon_fixed = [-1] * n
    for j, h in enumerate(g.legs):
        canon_fixed[idx[h]] = 3 * nv + j
    triples = [tuple(idx[h] for h in v) for v in g.vertices]
    ordered6 = [
        [((t[p[0]], t[p[1]], t[p[2]]), pp) for p, pp in _PERM3]
        for t in triples
    ]
    BIG = 3 * nv + len(g.legs) + 1

    # Level-synchronized search: every kept partial labeling has emitted the
    # same (minimal) code prefix, so taking the global minimum of the next
    # emission over the whole frontier is exact for the lexicographic order.
    # Two states with identical assignments and opposite parities certify an
    # orientation-reversing automorphism: the diagram is zero; the duplicate
    # state is merged either way, which keeps the frontier from blowing up.
    code_acc: list = []
    killed = [False]
    frontier = [(canon_fixed[:], 0, 0)]       # (canon_of, used bitmap, parity)
    for slot in range(nv):
        base = 3 * slot
        best_em = None
        chosen = []                           # (state index, vi, ordered, pp)
        for si, (canon_of, used, parity) in enumerate(frontier):
            for vi in range(nv):
                if used & (1 << vi):
                    continue
                for ordered, pparity in ordered6[vi]:
                    em = []
                    for k in range(3):
                        p = partner[ordered[k]]
                        e = canon_of[p]
                        if e < 0:
                            if p == ordered[0]:
                                e = base
                            elif p == ordered[1]:
                                e = base + 1
                            elif p == ordered[2]:
                                e = base + 2
                            else:
                                e = BIG
                        em.append(e)
                    em = tuple(em)
                    if best_em is None or em < best_em:
                        best_em = em
                        chosen = [(si, vi, ordered, pparity)]
                    elif em == best_em:
                        chosen.append((si, vi, ordered, pparity))
        code_acc.extend(best_em)
        new_frontier = []
        seen_states = {}
        for si, vi, ordered, pparity in chosen:
            canon_of, used, parity = frontier[si]
            nxt = canon_of[:]
            nxt[ordered[0]] = base
            nxt[ordered[1]] = base + 1
            nxt[ordered[2]] = base + 2
            key = (tuple(nxt), used | (1 << vi))
            npar = parity ^ pparity
            prev = seen_states.get(key)
            if prev is None:
                seen_states[key] = npar
                new_frontier.append((nxt, used | (1 << vi), npar))
            elif prev != npar:
                killed[0] = True              # orientation-reversing automorphism
        frontier = new_frontier
    parities = {parity for _, _, parity in frontier}
    if killed[0]:
        parities = {0, 1}
    return tuple(code_acc), parities


def _canonical_one_component(g: JacobiGraph):
    nv = len(g.vertices)
    nl = len(g.legs)
    code, parities = _search_canonical(g)
    sign = 0 if len(parities) > 1 else (-1 if parities.pop() else 1)

    BIG = 3 * nv + nl + 1
    edges = set()
    if nv == 0:
        for j, qc in enumerate(code):
            edges.add(tuple(sorted((j, qc))))
        leg_ids = range(nl)
        verts = []
    else:
        for c, qc in enumerate(code):
            if qc != BIG:
                edges.add(tuple(sorted((c, qc))))
        # leg-to-leg edges never appear in the code; they are pinned data
        pm = g.partner_map()
        leg_canon = {h: 3 * nv + j for j, h in enumerate(g.legs)}
        for h in g.legs:
            q = pm[h]
            if q in leg_canon:
                edges.add(tuple(sorted((leg_canon[h], leg_canon[q]))))
        leg_ids = range(3 * nv, 3 * nv + nl)
        verts = [(3 * i, 3 * i + 1, 3 * i + 2) for i in range(nv)]
    canon = JacobiGraph.make(verts, leg_ids, sorted(edges))
    return canon, sign


def _components(g: JacobiGraph):
    """Connected components as (vertex index list, leg position list)."""
    at = g.vertex_of()
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    def node_of(h):
        i = at[h]
        return ("v", i) if i >= 0 else ("l", h)

    for a, b in g.edges:
        ra, rb = find(node_of(a)), find(node_of(b))
        if ra != rb:
            parent[ra] = rb
    comps = {}
    for i in range(len(g.vertices)):
        comps.setdefault(find(("v", i)), [[], []])[0].append(i)
    for pos, h in enumerate(g.legs):
        comps.setdefault(find(("l", h)), [[], []])[1].append(pos)
    return list(comps.values())


@lru_cache(maxsize=1 << 17)
def _canonicalize_cached(g: JacobiGraph):
    g.validate()
    comps = _components(g)
    if len(comps) <= 1:
        return _canonical_one_component(g)

    # canonicalize the components independently; a swap of two components
    # touches no cyclic order, so assembly contributes no sign
    pm = g.partner_map()
    closed = []
    legged = []
    total_sign = 1
    for verts_idx, leg_pos in comps:
        verts = [g.vertices[i] for i in sorted(verts_idx)]
        legs = [g.legs[j] for j in sorted(leg_pos)]
        members = {h for v in verts for h in v} | set(legs)
        edges = [e for e in g.edges if e[0] in members]
        sub = JacobiGraph.make(verts, legs, edges)
        csub, ssub = _canonicalize_cached(sub)
        total_sign *= ssub
        if leg_pos:
            legged.append((min(leg_pos), sorted(leg_pos), csub))
        else:
            closed.append(csub)
    closed.sort(key=lambda c: c.sort_key())
    legged.sort()

    nv_total = sum(len(c.vertices) for c in closed) + \
        sum(len(c.vertices) for _, _, c in legged)
    nl_total = len(g.legs)
    verts_out = []
    edges_out = []
    v_off = 0

    def place(c, leg_positions):
        nonlocal v_off
        nv_c = len(c.vertices)
        mapping = {}
        for i in range(nv_c):
            for k in range(3):
                mapping[3 * i + k] = 3 * (v_off + i) + k
        for local_j, global_pos in enumerate(leg_positions):
            mapping[3 * nv_c + local_j] = 3 * nv_total + global_pos
        for i in range(nv_c):
            verts_out.append(tuple(mapping[3 * i + k] for k in range(3)))
        for a, b in c.edges:
            edges_out.append((mapping[a], mapping[b]))
        v_off += nv_c

    for c in closed:
        place(c, [])
    for _, leg_positions, c in legged:
        place(c, leg_positions)

    canon = JacobiGraph.make(verts_out, range(3 * nv_total,
                                              3 * nv_total + nl_total),
                             edges_out)
    return canon, (total_sign if total_sign in (-1, 0, 1) else total_sign)


def canonicalize(g: JacobiGraph):
    """Return (canonical form, sign).

    The sign is the antisymmetry parity of the orientation adjustment,
    multiplied into ``g.sign``; it is 0 when the diagram admits an
    orientation-reversing automorphism and is therefore the zero element of
    the diagram algebra.  Legs keep their positions.
    """
    stripped = g if g.sign == 1 else JacobiGraph(g.vertices, g.legs, g.edges, 1)
    canon, s = _canonicalize_cached(stripped)
    return canon, s * g.sign


def count_i_configurations(g: JacobiGraph) -> int:
    """Pairs of trivalent vertices joined by exactly one edge."""
    at = g.vertex_of()
    counts = {}
    for a, b in g.edges:
        ia, ib = at[a], at[b]
        if ia >= 0 and ib >= 0 and ia != ib:
            key = (ia, ib) if ia < ib else (ib, ia)
            counts[key] = counts.get(key, 0) + 1
    return sum(1 for v in counts.values() if v == 1)


def relabel_shift(g: JacobiGraph, shift: int) -> JacobiGraph:
    return JacobiGraph.make(
        [tuple(h + shift for h in v) for v in g.vertices],
        (h + shift for h in g.legs),
        [tuple(h + shift for h in e) for e in g.edges],
        g.sign,
    )


def graph_disjoint_union(a: JacobiGraph, b: JacobiGraph) -> JacobiGraph:
    """Raw disjoint union; b's half-edges are shifted clear of a's.

    The leg order is a's legs followed by b's legs.
    """
    shift = max(a.half_edges(), default=-1) + 1
    b2 = relabel_shift(b, shift)
    return JacobiGraph.make(
        a.vertices + b2.vertices,
        a.legs + b2.legs,
        a.edges + b2.edges,
        a.sign * b.sign,
    )


class DiagramSum:
    """Finite formal sum of canonical diagrams with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms or {})

    @staticmethod
    def zero() -> "DiagramSum":
        return DiagramSum()

    @staticmethod
    def of(g: JacobiGraph, coeff=Fraction(1)) -> "DiagramSum":
        out = DiagramSum()
        out.add_graph(g, coeff)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def graphs(self):
        return [g for g, _ in self.items()]

    def add_graph(self, g: JacobiGraph, coeff) -> None:
        coeff = Fraction(coeff)
        if coeff == 0:
            return
        canon, s = canonicalize(g)
        if s == 0:
            return
        c = self.terms.get(canon, Fraction(0)) + coeff * s
        if c == 0:
            self.terms.pop(canon, None)
        else:
            self.terms[canon] = c

    def __add__(self, other: "DiagramSum") -> "DiagramSum":
        out = DiagramSum(self.terms)
        for g, c in other.terms.items():
            nc = out.terms.get(g, Fraction(0)) + c
            if nc == 0:
                out.terms.pop(g, None)
            else:
                out.terms[g] = nc
        return out

    def __sub__(self, other: "DiagramSum") -> "DiagramSum":
        return self + other.scale(-1)

    def scale(self, q) -> "DiagramSum":
        q = Fraction(q)
        if q == 0:
            return DiagramSum()
        return DiagramSum({g: c * q for g, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, DiagramSum) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "DiagramSum(0)"
        bits = [f"{c}*[{len(g.vertices)}v,{len(g.legs)}l]" for g, c in self.items()]
        return "DiagramSum(" + " + ".join(bits) + ")"


def disjoint_union(a: DiagramSum, b: DiagramSum) -> DiagramSum:
    out = DiagramSum()
    for ga, ca in a.terms.items():
        for gb, cb in b.terms.items():
            out.add_graph(graph_disjoint_union(ga, gb), ca * cb)
    return out


def permute_legs(g: JacobiGraph, new_order) -> tuple:
    """Reorder the legs of a graph; returns (graph, parity sign).

    ``new_order[i]`` is the old position of the leg that lands in position i.
    Leg slots are odd, so an odd permutation contributes a -1.
    """
    perm = tuple(new_order)
    legs = tuple(g.legs[i] for i in perm)
    seen = [False] * len(perm)
    parity = 0
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        parity ^= (clen - 1) & 1
    out = JacobiGraph.make(g.vertices, legs, g.edges, g.sign)
    return out, (-1 if parity else 1)


# --- JSON wire format -------------------------------------------------------

def graph_to_json(g: JacobiGraph) -> dict:
    return {
        "vertices": [list(v) for v in g.vertices],
        "legs": list(g.legs),
        "edges": [list(e) for e in g.edges],
    }


def graph_from_json(obj: dict) -> JacobiGraph:
    try:
        g = JacobiGraph.make(obj["vertices"], obj.get("legs", ()), obj["edges"])
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"bad diagram object: {exc}") from exc
    g.validate()
    return g


def sum_to_json(s: DiagramSum) -> list:
    return [
        {"coeff": {"num": c.numerator, "den": c.denominator},
         "graph": graph_to_json(g)}
        for g, c in s.items()
    ]


def sum_from_json(obj) -> DiagramSum:
    out = DiagramSum()
    for entry in obj:
        c = Fraction(entry["coeff"]["num"], entry["coeff"]["den"])
        out.add_graph(graph_from_json(entry["graph"]), c)
    return out
