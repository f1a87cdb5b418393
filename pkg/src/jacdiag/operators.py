"""Leg-joining differential, derived brackets, and the connected sum.

The differential joins a pair of legs into a new internal edge: the two leg
ends are erased and their stem half-edges are matched with each other.  Legs
occupy odd slots, so the pair at positions i < j carries the interior-product
sign (-1)**(i+j-1).  Joining the two ends of a single isolated segment would
produce a vertex-free circle, which has no home in this algebra; such terms
are dropped.

The connected sum cuts one internal edge in each factor and sums both
reconnections across the cut, over all edge pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .diagrams import (DiagramSum, JacobiGraph, canonicalize, disjoint_union,
                       graph_disjoint_union, permute_legs)
from .rewrite import (BudgetExceeded, CycleDetected, RewriteViolation,
                      normal_form)


class ArgumentError(ValueError):
    pass


# --- the differential -------------------------------------------------------

def join_legs_raw(g: JacobiGraph, i: int, j: int):
    """Join legs at positions i < j; returns the raw graph or None (circle)."""
    if not (0 <= i < j < len(g.legs)):
        raise ArgumentError(f"bad leg positions {i}, {j}")
    li, lj = g.legs[i], g.legs[j]
    pm = g.partner_map()
    pi, pj = pm[li], pm[lj]
    if pi == lj:
        return None
    edges = [e for e in g.edges if li not in e and lj not in e]
    edges.append((pi, pj))
    legs = tuple(h for k, h in enumerate(g.legs) if k not in (i, j))
    return JacobiGraph.make(g.vertices, legs, edges, g.sign)


def _join_sign(i: int, j: int) -> int:
    return -1 if (i + j - 1) % 2 else 1


def d_h(s: DiagramSum) -> DiagramSum:
    """Sum over leg pairs of join-and-contract, with interior-product signs."""
    out = DiagramSum()
    for g, c in s.terms.items():
        m = len(g.legs)
        for i in range(m):
            for j in range(i + 1, m):
                joined = join_legs_raw(g, i, j)
                if joined is not None:
                    out.add_graph(joined, c * _join_sign(i, j))
    return out


def d_h_cross(a: DiagramSum, b: DiagramSum) -> DiagramSum:
    """The part of d_h(a | b) joining a leg of a to a leg of b."""
    out = DiagramSum()
    for ga, ca in a.terms.items():
        for gb, cb in b.terms.items():
            u = graph_disjoint_union(ga, gb)
            m, n = len(ga.legs), len(gb.legs)
            for i in range(m):
                for j in range(m, m + n):
                    joined = join_legs_raw(u, i, j)
                    if joined is not None:
                        out.add_graph(joined, ca * cb * _join_sign(i, j))
    return out


def l2(a: DiagramSum, b: DiagramSum) -> DiagramSum:
    """Derived bracket: the cross-component of d_h on the disjoint union.

    Equals d_h(a|b) - d_h(a)|b - a|d_h(b); the diagram gradings relevant here
    are all even, so no Koszul prefactor appears.
    """
    return d_h_cross(a, b)


def l2_via_formula(a: DiagramSum, b: DiagramSum) -> DiagramSum:
    u = disjoint_union(a, b)
    return d_h(u) - disjoint_union(d_h(a), b) - disjoint_union(a, d_h(b))


def _reorder_to(s: DiagramSum, order) -> DiagramSum:
    """Permute every term's legs into the given position order, signed."""
    out = DiagramSum()
    for g, c in s.terms.items():
        gg, sg = permute_legs(g, order)
        out.add_graph(gg, c * sg)
    return out


def l_k(args, apply_normal_form: bool = False, budget: int = 10 ** 4):
    """Higher derived bracket via inclusion-exclusion over factor subsets.

    l_1 is d_h and l_2 the cross bracket; for k >= 3 the differential is
    second order in the legs, so every higher bracket vanishes identically
    (the inclusion-exclusion cancels all terms touching fewer than k
    factors).  The projection step of the abstract definition maps resolved
    diagrams back into the trivalent algebra; join outputs land there
    already, so it is exposed as an optional extra normalization rather than
    applied by default (keeping l_1 identical to the differential).
    """
    args = list(args)
    k = len(args)
    if k == 0:
        raise ArgumentError("l_k needs at least one argument")
    out = DiagramSum()
    for ga in itertools.product(*(list(s.terms.items()) for s in args)):
        graphs = [g for g, _ in ga]
        coeff = Fraction(1)
        for _, c in ga:
            coeff *= c
        m = [len(g.legs) for g in graphs]
        offsets = [sum(m[:t]) for t in range(k)]
        total = sum(m)
        for bits in range(1, 1 << k):
            S = [t for t in range(k) if bits & (1 << t)]
            comp = [t for t in range(k) if t not in S]
            sign = (-1) ** (k - len(S))
            # assemble |_{S} then |_{comp}, remembering original positions
            ordered = S + comp
            union = None
            for t in ordered:
                union = graphs[t] if union is None else \
                    graph_disjoint_union(union, graphs[t])
            # legs currently in `ordered` block order; d_h applies to the
            # S-block only: join pairs inside the first sum(m[S]) legs
            ms = sum(m[t] for t in S)
            u = union
            for i in range(ms):
                for j in range(i + 1, ms):
                    joined = join_legs_raw(u, i, j)
                    if joined is None:
                        continue
                    # map remaining legs back to original concatenation order
                    kept = [x for x in range(total) if x not in (i, j)]
                    # kept[x] indexes into `ordered`-block positions; convert
                    pos_of = []
                    for t in ordered:
                        pos_of.extend(range(offsets[t], offsets[t] + m[t]))
                    remaining_orig = [pos_of[x] for x in kept]
                    # target order: ascending original positions
                    order = sorted(range(len(remaining_orig)),
                                   key=lambda q: remaining_orig[q])
                    gg, sg = permute_legs(joined, order)
                    out.add_graph(gg, coeff * sign * sg * _join_sign(i, j))
    if apply_normal_form:
        nf, _ = normal_form(out, budget=budget)
        return nf
    return out


# --- connected sum -----------------------------------------------------------

def connected_sum_raw_terms(g1: JacobiGraph, g2: JacobiGraph):
    """Yield (raw graph, e1, e2, twisted) for all cut-and-reconnect choices."""
    u = graph_disjoint_union(g1, g2)
    at = u.vertex_of()
    e1s = [e for e in u.edges
           if at[e[0]] >= 0 and at[e[1]] >= 0
           and at[e[0]] < len(g1.vertices) and at[e[1]] < len(g1.vertices)]
    e2s = [e for e in u.edges
           if at[e[0]] >= 0 and at[e[1]] >= 0
           and at[e[0]] >= len(g1.vertices) and at[e[1]] >= len(g1.vertices)]
    for e1 in e1s:
        for e2 in e2s:
            x, xb = e1
            y, yb = e2
            rest = [e for e in u.edges if e not in (e1, e2)]
            yield (JacobiGraph.make(u.vertices, u.legs,
                                    rest + [(x, y), (xb, yb)], u.sign),
                   e1, e2, False)
            yield (JacobiGraph.make(u.vertices, u.legs,
                                    rest + [(x, yb), (xb, y)], u.sign),
                   e1, e2, True)


def connected_sum(a: DiagramSum, b: DiagramSum) -> DiagramSum:
    """Sum over internal edge pairs and both reconnections, bilinear."""
    out = DiagramSum()
    for ga, ca in a.terms.items():
        for gb, cb in b.terms.items():
            for raw, _, _, _ in connected_sum_raw_terms(ga, gb):
                out.add_graph(raw, ca * cb)
    return out


def graft_raw(g1: JacobiGraph, ia: int, g2: JacobiGraph, ib: int):
    """Operadic composition: join leg ia of g1 to leg ib of g2.

    Returns (raw graph, new_edge, edge_origin) where edge_origin maps each
    edge of the result to 'a', 'b' or 'graft'.
    """
    u = graph_disjoint_union(g1, g2)
    m = len(g1.legs)
    joined = join_legs_raw(u, ia, m + ib)
    if joined is None:
        raise ArgumentError("grafting a segment to itself")
    shift = max(g1.half_edges(), default=-1) + 1
    e1_ids = {h for e in g1.edges for h in e}
    origin = {}
    new_edge = None
    for e in joined.edges:
        a_side = e[0] in e1_ids and e[1] in e1_ids
        b_side = e[0] >= shift and e[1] >= shift
        if a_side:
            origin[e] = "a"
        elif b_side:
            origin[e] = "b"
        else:
            origin[e] = "graft"
            new_edge = e
    return joined, new_edge, origin


@dataclass
class OperatorReport:
    axiom: str
    lhs: DiagramSum
    rhs: DiagramSum
    verdict: str                  # "equal-in-normal-form" | "unequal" | "undecided"
    witness: DiagramSum           # difference (normal form when available)
    parts: dict | None = None     # CS6 decomposition

    def to_json(self) -> dict:
        from .diagrams import sum_to_json
        obj = {
            "axiom": self.axiom,
            "lhs": sum_to_json(self.lhs),
            "rhs": sum_to_json(self.rhs),
            "verdict": self.verdict,
            "witness": sum_to_json(self.witness),
        }
        if self.parts is not None:
            obj["parts"] = {k: sum_to_json(v) for k, v in self.parts.items()}
        return obj


def _difference_verdict(lhs: DiagramSum, rhs: DiagramSum, budget: int = 10 ** 4):
    diff = lhs - rhs
    if diff.is_zero():
        return "equal-in-normal-form", diff
    try:
        nf, _ = normal_form(diff, budget=budget, strict=False)
    except CycleDetected:
        return "non-terminating", diff
    except BudgetExceeded:
        return "undecided", diff
    return ("equal-in-normal-form" if nf.is_zero() else "unequal"), nf


def check_axiom(axiom: str, inputs, budget: int = 10 ** 4) -> OperatorReport:
    """Verify a connected-sum compatibility axiom on concrete inputs.

    CS2 inputs: (a, b); CS3 inputs: (a, b, c) -- DiagramSums or graphs.
    CS6 inputs: (g1, ia, g2, ib, g3) with leg positions for the graft.
    """
    def as_sum(x):
        return x if isinstance(x, DiagramSum) else DiagramSum.of(x)

    if axiom == "CS2":
        a, b = map(as_sum, inputs)
        lhs = connected_sum(a, b)
        rhs_raw = connected_sum(b, a)
        # b#a lists b-legs first; swap the blocks back, with parity
        rhs = DiagramSum()
        for g, c in rhs_raw.terms.items():
            nb = _leg_block_size(b)
            if nb is None or len(g.legs) == 0:
                rhs.add_graph(g, c)
            else:
                order = list(range(nb, len(g.legs))) + list(range(nb))
                gg, sg = permute_legs(g, order)
                rhs.add_graph(gg, c * sg)
        verdict, witness = _difference_verdict(lhs, rhs, budget)
        return OperatorReport("CS2", lhs, rhs, verdict, witness)

    if axiom == "CS3":
        a, b, c = map(as_sum, inputs)
        lhs = connected_sum(connected_sum(a, b), c)
        rhs = connected_sum(a, connected_sum(b, c))
        verdict, witness = _difference_verdict(lhs, rhs, budget)
        return OperatorReport("CS3", lhs, rhs, verdict, witness)

    if axiom == "CS6":
        g1, ia, g2, ib, g3 = inputs
        for g, name in ((g1, "g1"), (g2, "g2")):
            if not g.legs:
                raise ArgumentError(f"CS6 needs a leg on {name}")
        # LHS: graft g1 onto each term of g2 # g3 at (ia, ib)
        lhs = DiagramSum()
        for raw23, _, _, _ in connected_sum_raw_terms(g2, g3):
            joined, _, _ = graft_raw(g1, ia, raw23, ib)
            lhs.add_graph(joined, 1)
        # RHS: (g1 grafted to g2) # g3, split by the origin of the cut edge
        g12, new_edge, origin = graft_raw(g1, ia, g2, ib)
        part_a, part_b, part_c = DiagramSum(), DiagramSum(), DiagramSum()
        for raw, e1, _, _ in connected_sum_raw_terms(g12, g3):
            bucket = origin[e1]
            if bucket == "b":
                part_a.add_graph(raw, 1)
            elif bucket == "a":
                part_b.add_graph(raw, 1)
            else:
                part_c.add_graph(raw, 1)
        rhs = part_a + part_b + part_c
        surplus = part_b + part_c
        verdict, witness = _difference_verdict(lhs, rhs, budget)
        try:
            nf_surplus, _ = normal_form(surplus, budget=budget, strict=False)
            surplus_zero = nf_surplus.is_zero()
        except (BudgetExceeded, CycleDetected):
            nf_surplus, surplus_zero = surplus, None
        report = OperatorReport("CS6", lhs, rhs, verdict, witness,
                                parts={"A": part_a, "B": part_b, "C": part_c,
                                       "surplus_nf": nf_surplus})
        report.surplus_zero = surplus_zero
        return report

    raise ArgumentError(f"unknown axiom {axiom!r}")


def _leg_block_size(b: DiagramSum):
    sizes = {len(g.legs) for g in b.terms}
    if len(sizes) == 1:
        return sizes.pop()
    return None


# --- property-check helpers ---------------------------------------------------

def _l2_tracked(sa, pa, sb, pb):
    """Cross-bracket terms with original leg positions carried along."""
    results = []
    for ga, ca in sa.terms.items():
        for gb, cb in sb.terms.items():
            u = graph_disjoint_union(ga, gb)
            m = len(ga.legs)
            n = len(gb.legs)
            for i in range(m):
                for j in range(n):
                    joined = join_legs_raw(u, i, m + j)
                    if joined is None:
                        continue
                    c = ca * cb * _join_sign(i, m + j)
                    pos = [p for k, p in enumerate(pa) if k != i] + \
                          [p for k, p in enumerate(pb) if k != j]
                    results.append((joined, c, pos))
    return results


def antisymmetry_defect(ga: JacobiGraph, gb: JacobiGraph) -> DiagramSum:
    """l2(a,b) + (-1)^{|a||b|} swap(l2(b,a)) with |.| the leg count.

    Zero exactly when the graded antisymmetry of the bracket holds; leg
    blocks are swapped back into (a, b) order with odd-slot parity.
    """
    a, b = DiagramSum.of(ga), DiagramSum.of(gb)
    m, n = len(ga.legs), len(gb.legs)
    lab = l2(a, b)
    lba = l2(b, a)
    swapped = DiagramSum()
    nb = n - 1
    for g, c in lba.terms.items():
        order = list(range(nb, len(g.legs))) + list(range(nb))
        gg, sg = permute_legs(g, order)
        swapped.add_graph(gg, c * sg)
    return lab + swapped.scale((-1) ** (m * n))


def jacobiator3(ga: JacobiGraph, gb: JacobiGraph, gc: JacobiGraph) -> DiagramSum:
    """The n = 3 homotopy-Jacobi combination of l1, l2, l3.

    The higher brackets vanish identically (the differential is second order
    in the legs), so the identity reduces to the Koszul-signed sum of nested
    l2 terms over (2,1)-unshuffles, with every term's legs mapped back to the
    common (a, b, c) concatenation order.
    """
    la, lb, lc = len(ga.legs), len(gb.legs), len(gc.legs)
    pa = list(range(la))
    pb = list(range(la, la + lb))
    pc = list(range(la + lb, la + lb + lc))
    A, B, C = DiagramSum.of(ga), DiagramSum.of(gb), DiagramSum.of(gc)
    total = DiagramSum()
    cases = [
        (A, pa, B, pb, C, pc, 1),
        (A, pa, C, pc, B, pb, (-1) ** (lb * lc)),
        (B, pb, C, pc, A, pa, (-1) ** (la * (lb + lc))),
    ]
    for s1, p1, s2, p2, s3, p3, eps in cases:
        for g12, c12, pos12 in _l2_tracked(s1, p1, s2, p2):
            inner = DiagramSum.of(g12, c12)
            for g, cg, pos in _l2_tracked(inner, pos12, s3, p3):
                order = sorted(range(len(pos)), key=lambda q: pos[q])
                gg, sg = permute_legs(g, order)
                total.add_graph(gg, cg * sg * eps)
    return total
