"""The IHX relation as a directed rewrite rule, with a termination monitor.

A rewrite site (``I-configuration``) is a pair of trivalent vertices joined
by exactly one edge, the bar.  Rewriting replaces the diagram by the two
other pairings of the four outer half-edges around the bar, with relative
signs taken from the Jacobi identity.  The number of I-configurations is
claimed to drop strictly on both output graphs; this implementation checks
that claim at every step instead of trusting it, and raises a diagnostic
carrying the counterexample when it fails (it does fail, e.g. on the
tetrahedron, whose X-reconnection is isomorphic to the tetrahedron itself).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .diagrams import (DiagramSum, JacobiGraph, canonicalize,
                       count_i_configurations)


class RewriteViolation(RuntimeError):
    """Strict-decrease assertion failed; carries the counterexample."""

    def __init__(self, message, graph, site, outputs):
        super().__init__(message)
        self.graph = graph
        self.site = site
        self.outputs = outputs

    def artifact(self) -> dict:
        from .diagrams import graph_to_json
        return {
            "reason": str(self),
            "input": graph_to_json(self.graph),
            "input_i_count": count_i_configurations(self.graph),
            "site": {"vertices": list(self.site[:2]),
                     "bar": list(self.site[2])},
            "outputs": [
                {"graph": graph_to_json(g), "i_count": count_i_configurations(g)}
                for g in self.outputs
            ],
        }


class BudgetExceeded(RuntimeError):
    """normal_form ran past its step ceiling."""


class CycleDetected(RuntimeError):
    """The rewrite strategy revisited a state; no normal form exists for it."""

    def __init__(self, message, state):
        super().__init__(message)
        self.state = state


@dataclass
class RewriteStep:
    graph: JacobiGraph          # the canonical graph that was rewritten
    site: tuple                 # (i, j, bar-edge)
    outputs: tuple              # the two canonical signed replacement sums


@dataclass
class RewriteTrace:
    steps: list = field(default_factory=list)
    potential_history: list = field(default_factory=list)

    def to_json(self) -> dict:
        from .diagrams import graph_to_json
        return {
            "step_count": len(self.steps),
            "steps": [
                {
                    "graph": graph_to_json(st.graph),
                    "site": {"vertices": list(st.site[:2]),
                             "bar": list(st.site[2])},
                }
                for st in self.steps
            ],
            "potential_history": [sorted(m) for m in self.potential_history],
        }


def i_configurations(g: JacobiGraph):
    """All (i, j, bar) with vertices i < j joined by exactly the edge bar."""
    at = g.vertex_of()
    between = {}
    for e in g.edges:
        ia, ib = at[e[0]], at[e[1]]
        if ia >= 0 and ib >= 0 and ia != ib:
            key = (ia, ib) if ia < ib else (ib, ia)
            between.setdefault(key, []).append(e)
    return sorted((i, j, es[0]) for (i, j), es in between.items()
                  if len(es) == 1)


def _rotate_to_front(triple, h):
    i = triple.index(h)
    return (triple[i], triple[(i + 1) % 3], triple[(i + 2) % 3])


def ihx_resolutions(g: JacobiGraph, site):
    """The H and X reconnections at the given I-configuration.

    With the bar halves c at u and f at v, write the cyclic orders as
    (c, a1, a2) and (f, b1, b2).  The Jacobi identity resolves the site as

        I = H - X,   H: swap a2 <-> b1,   X: swap a2 <-> b2,

    so both outputs keep the bar and exchange one outer half-edge across it.
    Orientation representatives keep the written order; canonicalization
    absorbs the rest of the sign bookkeeping.
    """
    i, j, bar = site
    at = g.vertex_of()
    c, f = bar
    if at[c] != i:
        c, f = f, c
    u = _rotate_to_front(g.vertices[i], c)
    v = _rotate_to_front(g.vertices[j], f)
    _, a1, a2 = u
    _, b1, b2 = v

    def rebuild(u_triple, v_triple):
        verts = list(g.vertices)
        verts[i] = u_triple
        verts[j] = v_triple
        return JacobiGraph.make(verts, g.legs, g.edges, g.sign)

    g_h = rebuild((c, a1, b1), (f, a2, b2))
    g_x = rebuild((c, a1, b2), (f, a2, b1))
    return g_h, g_x


def ihx_step(s: DiagramSum, strict: bool = True):
    """One leftmost-innermost IHX rewrite; returns (new sum, step) or None.

    The first term in canonical order containing an I-configuration is
    rewritten at its lexicographically smallest site.  ``strict`` enables the
    per-step strict-decrease assertion.
    """
    for g, coeff in s.items():
        sites = i_configurations(g)
        if not sites:
            continue
        site = sites[0]
        g_h, g_x = ihx_resolutions(g, site)
        if strict:
            n0 = count_i_configurations(g)
            bad = [out for out in (g_h, g_x)
                   if count_i_configurations(out) >= n0]
            if bad:
                raise RewriteViolation(
                    "IHX output does not strictly decrease the I-count",
                    g, site, (g_h, g_x))
        out = DiagramSum(s.terms)
        del out.terms[g]
        out.add_graph(g_h, coeff)
        out.add_graph(g_x, -coeff)
        step = RewriteStep(g, site, (g_h, g_x))
        return out, step
    return None


def _potential(s: DiagramSum):
    return sorted(count_i_configurations(g) for g in s.terms)


def _multiset_decreasing(before, after):
    """Dershowitz-Manna: after < before iff removing the common part, every
    remaining element of `after` is dominated by some removed element."""
    from collections import Counter
    b, a = Counter(before), Counter(after)
    common = b & a
    b -= common
    a -= common
    if not b:
        return False
    mx = max(b.elements())
    return all(x < mx for x in a.elements())


def _state_key(s: DiagramSum):
    return tuple(sorted((g.sort_key(), c) for g, c in s.terms.items()))


def normal_form(s: DiagramSum, budget: int = 10 ** 6, strict: bool = True,
                detect_cycles: bool = True):
    """Rewrite to an I-configuration-free sum; returns (sum, trace).

    Raises RewriteViolation when the strict-decrease claim fails (the
    counterexample graph rides along), CycleDetected when the strategy
    revisits a state, and BudgetExceeded past the step ceiling.
    """
    trace = RewriteTrace()
    trace.potential_history.append(_potential(s))
    current = s
    steps = 0
    seen = {_state_key(s)} if detect_cycles else None
    while True:
        res = ihx_step(current, strict=strict)
        if res is None:
            return current, trace
        current, step = res
        trace.steps.append(step)
        pot = _potential(current)
        if strict and not _multiset_decreasing(trace.potential_history[-1], pot):
            raise RewriteViolation(
                "potential multiset did not decrease",
                step.graph, step.site, step.outputs)
        trace.potential_history.append(pot)
        if detect_cycles:
            key = _state_key(current)
            if key in seen:
                raise CycleDetected(
                    f"rewriting revisited a state after {steps + 1} steps",
                    current)
            seen.add(key)
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"no normal form within {budget} steps")


def normal_form_or_none(s: DiagramSum, budget: int = 10 ** 4):
    """Best-effort normal form: None when rewriting loops or runs away."""
    try:
        nf, _ = normal_form(s, budget=budget, strict=False)
        return nf
    except (BudgetExceeded, CycleDetected):
        return None
