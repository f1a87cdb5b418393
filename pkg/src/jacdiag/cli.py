"""Command-line interface: stable JSON output for every computation.

Exit codes: 0 success, 1 property violation (fuzz found a counterexample),
2 usage or domain error.  Identical invocations with identical seeds emit
byte-identical JSON.
"""

from __future__ import annotations

import json
import random
import sys
from fractions import Fraction

import click

from . import diagrams as dg
from . import freelie, homology, operators, rewrite, weights


def _emit(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True, indent=2))


def _fail(message: str, code: int = 2):
    click.echo(json.dumps({"error": message}, sort_keys=True), err=True)
    sys.exit(code)


def _round15(x: float) -> float:
    return float(f"{x:.15g}")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot read {path}: {exc}")


def _load_sum(path: str) -> dg.DiagramSum:
    obj = _load_json(path)
    try:
        if isinstance(obj, dict):
            return dg.DiagramSum.of(dg.graph_from_json(obj))
        return dg.sum_from_json(obj)
    except (dg.StructuralError, KeyError, TypeError) as exc:
        _fail(f"bad diagram input: {exc}")


def _load_matrix(path: str):
    obj = _load_json(path)
    try:
        n = obj["n"]
        entries = obj["entries"]
        if len(entries) != n or any(len(r) != n for r in entries):
            raise ValueError("entries shape does not match n")
        qform = None
        if "qform" in obj:
            qform = {tuple(e["elem"]): Fraction(e["value"]["num"],
                                                e["value"]["den"])
                     for e in obj["qform"]}
        return [list(map(int, r)) for r in entries], qform
    except (KeyError, TypeError, ValueError) as exc:
        _fail(f"bad matrix input: {exc}")


def _torsion_from_matrix_input(path: str) -> homology.TorsionData:
    entries, qform = _load_matrix(path)
    try:
        td = homology.torsion_data_from_matrix(entries)
    except (homology.ArgumentError, homology.UnsupportedError) as exc:
        _fail(str(exc))
    if qform is not None:
        td = homology.user_qform(td, qform)
    if td.free_rank:
        _fail("matrix has nonzero free rank: not a rational homology sphere")
    return td


def _value_payload(cv: weights.ComplexValue) -> dict:
    return cv.to_json()


@click.group()
def main():
    """Diagram algebra and H1-decorated weight-system toolkit."""


# --- theta ----------------------------------------------------------------------

@main.group()
def theta():
    """Evaluate the two-vertex closed diagram."""


@theta.command("lens")
@click.option("-p", type=int, required=True)
@click.option("-q", type=int, required=True)
def theta_lens(p, q):
    try:
        td = homology.lens_torsion_data(p, q)
        val = weights.theta_eval(td)
    except (homology.ArgumentError, homology.UnsupportedError) as exc:
        _fail(str(exc))
    _emit({"input": {"kind": "lens", "p": p, "q": q},
           "group_order": td.order(),
           "value": _value_payload(val)})


@theta.command("matrix")
@click.option("-f", "path", type=click.Path(), required=True)
def theta_matrix(path):
    td = _torsion_from_matrix_input(path)
    try:
        val = weights.theta_eval(td)
    except (homology.UnsupportedError, homology.ArgumentError) as exc:
        _fail(str(exc))
    _emit({"input": {"kind": "matrix", "path": path},
           "group_order": td.order(),
           "invariant_factors": td.invariant_factors,
           "value": _value_payload(val)})


# --- compare --------------------------------------------------------------------

@main.command()
@click.argument("p", type=int)
@click.argument("q1", type=int)
@click.argument("q2", type=int)
def compare(p, q1, q2):
    """Classical vs decorated separation verdicts for a lens pair."""
    try:
        s1, s2 = weights.dedekind_sum(q1, p), weights.dedekind_sum(q2, p)
        t1 = weights.theta_eval(homology.lens_torsion_data(p, q1))
        t2 = weights.theta_eval(homology.lens_torsion_data(p, q2))
        rep = weights.residue_report(p, q1, q2)
    except (homology.ArgumentError, homology.UnsupportedError) as exc:
        _fail(str(exc))
    decorated_distinguishes = t1.exact != t2.exact
    _emit({
        "p": p, "q1": q1, "q2": q2,
        "dedekind": {
            "s_q1": {"num": s1.numerator, "den": s1.denominator},
            "s_q2": {"num": s2.numerator, "den": s2.denominator},
            "equal": s1 == s2,
        },
        "theta": {"q1": _value_payload(t1), "q2": _value_payload(t2)},
        "residues": rep,
        "verdicts": {
            "classical_lmo_distinguishes": s1 != s2,
            "decorated_distinguishes": decorated_distinguishes,
        },
    })


# --- kirby fuzz -----------------------------------------------------------------

@main.command("kirby-fuzz")
@click.option("--lens", "lens_pq", nargs=2, type=int, default=None,
              help="p q: start from the lens chain matrix")
@click.option("-f", "path", type=click.Path(), default=None,
              help="start from a linking-matrix file")
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-moves", type=int, default=8, show_default=True)
def kirby_fuzz(lens_pq, path, trials, seed, max_moves):
    """Random Kirby sequences; checks derived-data invariance."""
    if (lens_pq is None) == (path is None):
        _fail("exactly one of --lens or -f is required")
    if lens_pq is not None:
        p, q = lens_pq
        try:
            base = homology.lens_chain_matrix(p, q)
        except homology.ArgumentError as exc:
            _fail(str(exc))
    else:
        base, _ = _load_matrix(path)
        try:
            homology.check_symmetric(base)
        except homology.ArgumentError as exc:
            _fail(str(exc))
    if homology.mat_det(base) == 0:
        _fail("input matrix is singular: not a rational homology sphere")
    before = homology.torsion_data_from_matrix(base)
    theta_before = None
    if before.is_cyclic() and before.has_qform():
        theta_before = weights.theta_eval(before)
    rng = random.Random(seed)
    violations = []
    max_dtheta = 0.0
    equivalent_all = True
    for trial in range(trials):
        moved, moves = homology.random_kirby_sequence(
            base, rng, rng.randrange(1, max_moves + 1))
        after = homology.torsion_data_from_matrix(moved)
        try:
            eq = homology.torsion_pair_equivalent(before, after)
        except homology.UnsupportedError:
            eq = None
        if eq is False:
            equivalent_all = False
            violations.append({"trial": trial, "moves": moves,
                               "reason": "torsion pair not equivalent"})
        if theta_before is not None and after.is_cyclic() and after.has_qform():
            theta_after = weights.theta_eval(after)
            d = abs(theta_after.to_complex() - theta_before.to_complex())
            max_dtheta = max(max_dtheta, d)
            if d >= 1e-9:
                violations.append({"trial": trial, "moves": moves,
                                   "reason": f"theta moved by {d:.3e}"})
    _emit({
        "seed": seed,
        "trials": trials,
        "max_abs_delta_theta": _round15(max_dtheta),
        "all_equivalent": equivalent_all,
        "violations": violations,
    })
    if violations:
        sys.exit(1)


# --- diagram-algebra commands ------------------------------------------------------

@main.command()
@click.option("-f", "path", type=click.Path(), required=True)
@click.option("--budget", type=int, default=10 ** 6, show_default=True)
def simplify(path, budget):
    """Rewrite a diagram sum to its I-configuration-free normal form."""
    s = _load_sum(path)
    try:
        nf, trace_ = rewrite.normal_form(s, budget=budget)
    except rewrite.RewriteViolation as exc:
        _emit({"status": "violation", "artifact": exc.artifact()})
        sys.exit(1)
    except rewrite.CycleDetected as exc:
        _emit({"status": "cycle", "detail": str(exc)})
        sys.exit(1)
    except rewrite.BudgetExceeded as exc:
        _fail(str(exc))
    _emit({"status": "ok", "result": dg.sum_to_json(nf),
           "steps": len(trace_.steps), "trace": trace_.to_json()})


@main.command()
@click.option("-f", "path", type=click.Path(), required=True)
def dh(path):
    """Apply the leg-joining differential."""
    s = _load_sum(path)
    _emit({"result": dg.sum_to_json(operators.d_h(s))})


@main.command()
@click.option("-a", "path_a", type=click.Path(), required=True)
@click.option("-b", "path_b", type=click.Path(), required=True)
def bracket(path_a, path_b):
    """Derived bracket of two diagram sums."""
    a, b = _load_sum(path_a), _load_sum(path_b)
    _emit({"result": dg.sum_to_json(operators.l2(a, b))})


@main.command()
@click.option("-a", "path_a", type=click.Path(), required=True)
@click.option("-b", "path_b", type=click.Path(), required=True)
def csum(path_a, path_b):
    """Connected sum of two diagram sums."""
    a, b = _load_sum(path_a), _load_sum(path_b)
    _emit({"result": dg.sum_to_json(operators.connected_sum(a, b))})


@main.command("check-axiom")
@click.argument("axiom", type=click.Choice(["CS2", "CS3", "CS6"]))
@click.option("-i", "paths", type=click.Path(), multiple=True, required=True)
@click.option("--leg-a", type=int, default=0, show_default=True)
@click.option("--leg-b", type=int, default=0, show_default=True)
def check_axiom_cmd(axiom, paths, leg_a, leg_b):
    """Verify a connected-sum axiom on concrete inputs."""
    sums = [_load_sum(p) for p in paths]
    try:
        if axiom == "CS2":
            if len(sums) != 2:
                raise operators.ArgumentError("CS2 needs two inputs")
            rep = operators.check_axiom("CS2", sums)
        elif axiom == "CS3":
            if len(sums) != 3:
                raise operators.ArgumentError("CS3 needs three inputs")
            rep = operators.check_axiom("CS3", sums)
        else:
            if len(sums) != 3:
                raise operators.ArgumentError(
                    "CS6 needs three inputs (two legged, one closed)")
            graphs = []
            for s in sums:
                gs = s.graphs()
                if len(gs) != 1:
                    raise operators.ArgumentError(
                        "CS6 inputs must be single diagrams")
                graphs.append(gs[0])
            rep = operators.check_axiom(
                "CS6", (graphs[0], leg_a, graphs[1], leg_b, graphs[2]))
    except operators.ArgumentError as exc:
        _fail(str(exc))
    _emit(rep.to_json())
    if rep.verdict == "unequal":
        sys.exit(1)


@main.command("eval-diagram")
@click.option("-f", "path", type=click.Path(), required=True)
@click.option("-p", type=int, required=True)
@click.option("-q", type=int, required=True)
def eval_diagram(path, p, q):
    """Evaluate a closed connected diagram over a lens space."""
    obj = _load_json(path)
    try:
        g = dg.graph_from_json(obj)
        td = homology.lens_torsion_data(p, q)
        val = weights.closed_diagram_eval(g, td)
    except (dg.StructuralError, homology.ArgumentError,
            homology.UnsupportedError) as exc:
        _fail(str(exc))
    _emit({"input": {"p": p, "q": q},
           "edges": len(g.edges),
           "value": _value_payload(val)})


@main.command()
@click.option("-p", type=int, required=True)
@click.option("-q", type=int, required=True)
def dedekind(p, q):
    """Exact Dedekind sum S(q, p)."""
    try:
        s = weights.dedekind_sum(q, p)
    except homology.ArgumentError as exc:
        _fail(str(exc))
    _emit({"p": p, "q": q,
           "value": {"num": s.numerator, "den": s.denominator}})


@main.command()
@click.argument("p", type=int)
@click.argument("q1", type=int)
@click.argument("q2", type=int)
def residue(p, q1, q2):
    """Legendre-symbol comparison at the odd prime factors of p."""
    try:
        rep = weights.residue_report(p, q1, q2)
    except homology.ArgumentError as exc:
        _fail(str(exc))
    _emit(rep)


@main.command("grt-verify")
def grt_verify():
    """Depth-1 bracket comparison and the scalar constraint solve."""
    rep = freelie.verify_depth1_identity()

    def poly_json(p):
        return [{"word": w, "coeff": {"num": c.numerator, "den": c.denominator}}
                for w, c in sorted(p.terms.items())]

    def pair_json(d):
        return {"x_image": poly_json(d.a), "y_image": poly_json(d.b)}

    c = freelie.solve_pentagon_constant()
    _emit({
        "lhs_before_doubling": pair_json(rep["lhs_before_doubling"]),
        "lhs": pair_json(rep["lhs"]),
        "rhs": pair_json(rep["rhs"]),
        "equal": rep["equal"],
        "vertex_constant": {"num": c.numerator, "den": c.denominator},
    })


if __name__ == "__main__":
    main()
