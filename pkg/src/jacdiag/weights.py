"""The H1-decorated weight system: sawtooth, vertex and edge factors,
decorated operators and traces, the theta evaluation, Dedekind sums and
quadratic-residue diagnostics.

All amplitudes are exact rationals and all phases exact rationals mod 1; a
value is carried as a phase-indexed amplitude table and converted to a float
pair once, at the end.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .diagrams import JacobiGraph
from .homology import ArgumentError, TorsionData, UnsupportedError


# --- exact complex values -----------------------------------------------------

class PhaseSum:
    """Finite sum of amp * exp(2*pi*i*phase) with exact rational data."""

    __slots__ = ("amps",)

    def __init__(self, amps=None):
        self.amps = {}
        if amps:
            for ph, a in amps.items():
                self.add(ph, a)

    def add(self, phase, amp) -> None:
        amp = Fraction(amp)
        if amp == 0:
            return
        ph = Fraction(phase) % 1
        cur = self.amps.get(ph, Fraction(0)) + amp
        if cur == 0:
            self.amps.pop(ph, None)
        else:
            self.amps[ph] = cur

    def scale(self, q) -> "PhaseSum":
        out = PhaseSum()
        for ph, a in self.amps.items():
            out.add(ph, a * Fraction(q))
        return out

    def __add__(self, other: "PhaseSum") -> "PhaseSum":
        out = PhaseSum(dict(self.amps))
        for ph, a in other.amps.items():
            out.add(ph, a)
        return out

    def __mul__(self, other: "PhaseSum") -> "PhaseSum":
        out = PhaseSum()
        for p1, a1 in self.amps.items():
            for p2, a2 in other.amps.items():
                out.add(p1 + p2, a1 * a2)
        return out

    def is_zero(self) -> bool:
        return not self.amps

    def __eq__(self, other) -> bool:
        return isinstance(other, PhaseSum) and self.amps == other.amps

    def conjugate(self) -> "PhaseSum":
        out = PhaseSum()
        for ph, a in self.amps.items():
            out.add(-ph, a)
        return out

    def to_complex(self) -> complex:
        # fixed summation order for reproducible floats
        total = 0j
        for ph in sorted(self.amps):
            total += float(self.amps[ph]) * cmath.exp(2j * cmath.pi * float(ph))
        return total

    def to_json(self) -> list:
        return [
            {"phase": {"num": ph.numerator, "den": ph.denominator},
             "amp": {"num": a.numerator, "den": a.denominator}}
            for ph, a in sorted(self.amps.items())
        ]


@dataclass
class ComplexValue:
    re: float
    im: float
    exact: PhaseSum | None = None

    @staticmethod
    def from_phase_sum(ps: PhaseSum) -> "ComplexValue":
        z = ps.to_complex()
        return ComplexValue(z.real, z.imag, ps)

    @staticmethod
    def zero() -> "ComplexValue":
        return ComplexValue(0.0, 0.0, PhaseSum())

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def to_json(self) -> dict:
        obj = {"re": float(f"{self.re:.15g}"), "im": float(f"{self.im:.15g}")}
        if self.exact is not None:
            obj["exact"] = self.exact.to_json()
        return obj


# --- sawtooth / W / Dedekind ---------------------------------------------------

def sawtooth(k: int, p: int) -> Fraction:
    """((k/p)): 0 on multiples of p, else (k mod p)/p - 1/2."""
    if p < 1:
        raise ArgumentError("p must be positive")
    r = k % p
    if r == 0:
        return Fraction(0)
    return Fraction(r, p) - Fraction(1, 2)


def _require_cyclic(t: TorsionData) -> int:
    if not t.is_cyclic() or t.free_rank:
        raise UnsupportedError(
            "the sawtooth weight system is defined on cyclic torsion only")
    return t.order()


def w_factor(g1: int, g2: int, g3: int, t) -> Fraction:
    """prod f(g_j) - 1/4 sum f(g_j) on Z/p; totally symmetric."""
    if isinstance(t, TorsionData):
        p = _require_cyclic(t)
    else:
        p = int(t)
        if p < 1:
            raise ArgumentError("p must be positive")
    f1, f2, f3 = sawtooth(g1, p), sawtooth(g2, p), sawtooth(g3, p)
    return f1 * f2 * f3 - Fraction(1, 4) * (f1 + f2 + f3)


def dedekind_sum(q: int, p: int) -> Fraction:
    """S(q, p) = sum_k ((k/p)) ((k q/p)), exact."""
    if p < 1:
        raise ArgumentError("p must be positive")
    if math.gcd(p, q) != 1:
        raise ArgumentError("q must be coprime to p")
    return sum((sawtooth(k, p) * sawtooth(k * q, p) for k in range(1, p)),
               Fraction(0))


def edge_factor(g, t: TorsionData) -> ComplexValue:
    """exp(2*pi*i*q(g)): unit modulus, exact rational phase."""
    if not t.has_qform():
        raise UnsupportedError("edge factor needs a quadratic refinement")
    ps = PhaseSum({t.qform(_as_tuple(g)): Fraction(1)})
    return ComplexValue.from_phase_sum(ps)


def _as_tuple(g):
    return g if isinstance(g, tuple) else (g,)


# --- theta ---------------------------------------------------------------------

def theta_eval(t: TorsionData) -> ComplexValue:
    """Trace of the bar-diagram operator: the two-vertex, three-edge diagram.

        (1/|G|^3) * sum_{g1+g2+g3=0} W(g1,g2,g3)^2
                    * exp(2*pi*i*(q(g1)+q(g2)+q(g3)))

    |G|^2 terms.  The inner loop runs on integer numerators: W has the form
    [n1 n2 n3 - p^2 (n1+n2+n3)] / (8 p^3) with n_k = 2(k mod p) - p (0 on the
    zero class), and the phases live on a common denominator.
    """
    p = _require_cyclic(t)
    if not t.has_qform():
        raise UnsupportedError("theta evaluation needs a quadratic refinement")
    if p == 1:
        return ComplexValue.zero()
    n = [0] + [2 * k - p for k in range(1, p)]
    qv = t.canonical_cyclic_profile()
    den = 1
    for x in qv:
        den = den * x.denominator // math.gcd(den, x.denominator)
    qn = [int(x * den) for x in qv]
    p2 = p * p
    acc = [0] * den
    for g1 in range(p):
        n1 = n[g1]
        q1 = qn[g1]
        for g2 in range(p):
            g3 = (-g1 - g2) % p
            n2, n3 = n[g2], n[g3]
            w_num = n1 * n2 * n3 - p2 * (n1 + n2 + n3)
            if w_num == 0:
                continue
            acc[(q1 + qn[g2] + qn[g3]) % den] += w_num * w_num
    scale = Fraction(1, 64 * p ** 6 * p ** 3)
    ps = PhaseSum()
    for tnum, a in enumerate(acc):
        if a:
            ps.add(Fraction(tnum, den), a * scale)
    return ComplexValue.from_phase_sum(ps)


# --- decorated operators --------------------------------------------------------

@dataclass
class DecoratedOperator:
    in_arity: int
    out_arity: int
    entries: dict        # (in tuple, out tuple) -> PhaseSum
    group: TorsionData

    def entry(self, gin, gout) -> PhaseSum:
        return self.entries.get((tuple(gin), tuple(gout)), PhaseSum())


def _incident_edges(d: JacobiGraph):
    inc = {}
    for e in d.edges:
        for h in e:
            inc[h] = e
    return inc


def operator_of_open_diagram(d: JacobiGraph, t: TorsionData,
                             in_legs, out_legs,
                             internal_mode: str = "directed") -> DecoratedOperator:
    """Interpret an open diagram as a linear operator on group decorations.

    Leg positions are split into inputs and outputs.  Every edge carries a
    group decoration; at each trivalent vertex the incident values must sum
    to zero and feed the vertex factor W.  An entry is the product of the
    vertex factors and the factors of the internal (non-leg) edges.

    ``internal_mode`` fixes how an internal edge presents its value to its
    two endpoints.  In ``"directed"`` mode the far end sees the negated
    value: for the bar diagram this yields the matrix element

        delta(-g_a-g_b, g_c+g_d) * W(g_a,g_b,g_x) W(g_c,g_d,-g_x) * EF(g_x)

    with g_x = -g_a-g_b.  In ``"undirected"`` mode both ends see the same
    value, which is the convention under which the plain trace glues legs
    with equal decorations (the closure used by closed_diagram_eval).  The
    two conventions genuinely differ on the diagonal; the relation between
    the trace and the theta evaluation depends on this choice and is
    documented in the tests rather than resolved.
    """
    p = _require_cyclic(t)
    if not t.has_qform():
        raise UnsupportedError("decorated operators need a quadratic refinement")
    if not d.is_connected():
        raise ArgumentError("open diagram must be connected")
    if internal_mode not in ("directed", "undirected"):
        raise ArgumentError("internal_mode must be 'directed' or 'undirected'")
    in_legs = list(in_legs)
    out_legs = list(out_legs)
    if sorted(in_legs + out_legs) != list(range(len(d.legs))):
        raise ArgumentError("in/out lists must partition the leg positions")

    at = d.vertex_of()
    inc = _incident_edges(d)
    leg_edge_of_pos = {pos: inc[h] for pos, h in enumerate(d.legs)}
    internal = [e for e in d.edges
                if at[e[0]] >= 0 and at[e[1]] >= 0]
    qprof = t.canonical_cyclic_profile()
    flip = -1 if internal_mode == "directed" else 1

    def end_value(e, h, g):
        """Value of edge e as seen by its half-edge h, base value g."""
        if e in internal_set and h == e[1] and e[0] != e[1]:
            return (flip * g) % p
        return g

    internal_set = set(internal)

    entries = {}
    for leg_dec in itertools.product(range(p), repeat=len(d.legs)):
        for int_dec in itertools.product(range(p), repeat=len(internal)):
            dec = {}
            for pos, e in leg_edge_of_pos.items():
                dec[e] = leg_dec[pos]
            for e, v in zip(internal, int_dec):
                dec[e] = v
            amp = Fraction(1)
            ok = True
            for triple in d.vertices:
                vals = [end_value(inc[h], h, dec[inc[h]]) for h in triple]
                if sum(vals) % p != 0:
                    ok = False
                    break
                amp *= w_factor(vals[0], vals[1], vals[2], p)
                if amp == 0:
                    break
            if not ok or amp == 0:
                continue
            phase = sum((qprof[dec[e]] for e in internal), Fraction(0))
            key = (tuple(leg_dec[pos] for pos in in_legs),
                   tuple(leg_dec[pos] for pos in out_legs))
            ps = entries.get(key)
            if ps is None:
                ps = entries[key] = PhaseSum()
            ps.add(phase, amp)
    entries = {k: v for k, v in entries.items() if not v.is_zero()}
    return DecoratedOperator(len(in_legs), len(out_legs), entries, t)


def trace(op: DecoratedOperator) -> ComplexValue:
    """Sum of diagonal entries; needs matching arities."""
    if op.in_arity != op.out_arity:
        raise ArgumentError("trace needs in_arity == out_arity")
    ps = PhaseSum()
    for (gin, gout), val in op.entries.items():
        if gin == gout:
            ps = ps + val
    return ComplexValue.from_phase_sum(ps)


def spanning_cotree(g: JacobiGraph):
    """Deterministic split of the edges into (tree, cotree) on the vertices."""
    at = g.vertex_of()
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    tree, cotree = [], []
    for e in g.edges:
        ia, ib = at[e[0]], at[e[1]]
        ra, rb = find(ia), find(ib)
        if ra == rb:
            cotree.append(e)
        else:
            parent[ra] = rb
            tree.append(e)
    return tree, cotree


def closed_diagram_eval(g: JacobiGraph, t: TorsionData) -> ComplexValue:
    """Trace evaluation of a closed connected diagram, 1/|G|^(#edges).

    The diagram is cut along a spanning cotree into an open diagram; the
    operator trace glues each cut edge back, which forces equal decorations
    on its two stubs and restores its edge factor.  Concretely this is a sum
    over cotree decorations with the tree decorations solved from the vertex
    conservation laws (leaf elimination, root consistency check).
    """
    p = _require_cyclic(t)
    if not t.has_qform():
        raise UnsupportedError("evaluation needs a quadratic refinement")
    if g.legs:
        raise ArgumentError("closed diagram expected")
    if not g.is_connected():
        raise ArgumentError("closed diagram must be connected")
    if not g.vertices:
        return ComplexValue.zero()

    at = g.vertex_of()
    inc = _incident_edges(g)
    tree, cotree = spanning_cotree(g)
    nv = len(g.vertices)

    # elimination order: repeatedly take a tree leaf
    deg = [0] * nv
    tree_edges_at = [[] for _ in range(nv)]
    for e in tree:
        ia, ib = at[e[0]], at[e[1]]
        deg[ia] += 1
        deg[ib] += 1
        tree_edges_at[ia].append(e)
        tree_edges_at[ib].append(e)
    order = []
    remaining = deg[:]
    alive = [True] * nv
    used = set()
    for _ in range(len(tree)):
        leaf = next(i for i in range(nv)
                    if alive[i] and remaining[i] == 1)
        e = next(ed for ed in tree_edges_at[leaf] if ed not in used)
        used.add(e)
        order.append((leaf, e))
        ia, ib = at[e[0]], at[e[1]]
        remaining[ia] -= 1
        remaining[ib] -= 1
        alive[leaf] = False
    roots = [i for i in range(nv) if alive[i]]

    qv = t.canonical_cyclic_profile()
    fw = {}

    def wf(a, b, c):
        key = (a, b, c)
        v = fw.get(key)
        if v is None:
            v = fw[key] = w_factor(a, b, c, p)
        return v

    ps = PhaseSum()
    for dec_tuple in itertools.product(range(p), repeat=len(cotree)):
        dec = dict(zip(cotree, dec_tuple))
        ok = True
        for leaf, e in order:
            triple = g.vertices[leaf]
            s = 0
            for h in triple:
                ed = inc[h]
                if ed == e:
                    continue
                v = dec.get(ed)
                if v is None:
                    ok = False
                    break
                s += v
            if not ok:
                break
            # a loop at the leaf contributes both ends; handled above since
            # both half-edges iterate.  The unknown e appears once (a tree
            # edge is never a loop).
            dec[e] = (-s) % p
        if ok:
            for r in roots:
                s = sum(dec[inc[h]] for h in g.vertices[r])
                if s % p != 0:
                    ok = False
                    break
        if not ok:
            continue
        amp = Fraction(1)
        for triple in g.vertices:
            vals = [dec[inc[h]] for h in triple]
            amp *= wf(vals[0], vals[1], vals[2])
            if amp == 0:
                break
        if amp == 0:
            continue
        phase = sum((qv[dec[e]] for e in g.edges), Fraction(0))
        ps.add(phase, amp)
    return ComplexValue.from_phase_sum(ps.scale(Fraction(1, p ** len(g.edges))))


def closed_diagram_eval_direct(g: JacobiGraph, t: TorsionData) -> ComplexValue:
    """Independent path: brute-force sum over all edge decorations."""
    p = _require_cyclic(t)
    if g.legs or not g.is_connected():
        raise ArgumentError("closed connected diagram expected")
    if not g.vertices:
        return ComplexValue.zero()
    inc = _incident_edges(g)
    qv = t.canonical_cyclic_profile()
    edges = list(g.edges)
    ps = PhaseSum()
    for dec in itertools.product(range(p), repeat=len(edges)):
        dec_of = dict(zip(edges, dec))
        amp = Fraction(1)
        ok = True
        for triple in g.vertices:
            vals = [dec_of[inc[h]] for h in triple]
            if sum(vals) % p != 0:
                ok = False
                break
            amp *= w_factor(vals[0], vals[1], vals[2], p)
            if amp == 0:
                break
        if not ok or amp == 0:
            continue
        phase = sum((qv[v] for v in dec), Fraction(0))
        ps.add(phase, amp)
    return ComplexValue.from_phase_sum(ps.scale(Fraction(1, p ** len(edges))))


# --- number-theoretic diagnostics ----------------------------------------------

def factorize(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def legendre(a: int, ell: int) -> int:
    """Legendre symbol (a/ell) for odd prime ell."""
    a %= ell
    if a == 0:
        return 0
    return 1 if pow(a, (ell - 1) // 2, ell) == 1 else -1


def residue_report(p: int, q1: int, q2: int) -> dict:
    """Legendre symbols of q1, q2 at every odd prime factor of p."""
    if p < 1:
        raise ArgumentError("p must be positive")
    if math.gcd(p, q1) != 1 or math.gcd(p, q2) != 1:
        raise ArgumentError("q1, q2 must be coprime to p")
    factors = factorize(p)
    rows = []
    asym = False
    for ell in sorted(factors):
        if ell == 2:
            continue
        s1, s2 = legendre(q1, ell), legendre(q2, ell)
        rows.append({"prime": ell, "legendre_q1": s1, "legendre_q2": s2,
                     "asymmetric": s1 != s2})
        asym = asym or (s1 != s2)
    return {
        "p": p, "q1": q1, "q2": q2,
        "factorization": {str(k): v for k, v in sorted(factors.items())},
        "odd_prime_rows": rows,
        "asymmetric": asym,
    }
