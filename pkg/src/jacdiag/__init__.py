"""Trivalent-diagram algebra with an H1-decorated weight system.

Core pieces: exact diagram sums with antisymmetry-signed canonical forms,
the IHX rewrite system with a termination monitor, the leg-joining
differential and its derived brackets, the connected sum with axiom checks,
torsion/linking data of surgery presentations with Kirby moves, the sawtooth
weight system with exact-phase evaluation, and the free-Lie-algebra
verification utilities.
"""

from .diagrams import (DiagramSum, JacobiGraph, StructuralError, canonicalize,
                       count_i_configurations, disjoint_union, graph_from_json,
                       graph_to_json, sum_from_json, sum_to_json)
from .rewrite import (BudgetExceeded, CycleDetected, RewriteTrace,
                      RewriteViolation, ihx_step, normal_form)
from .operators import check_axiom, connected_sum, d_h, l2, l_k
from .homology import (TorsionData, kirby_slide, kirby_stabilize,
                       lens_torsion_data, smith_normal_form,
                       torsion_data_from_matrix, torsion_pair_equivalent)
from .weights import (ComplexValue, PhaseSum, closed_diagram_eval,
                      dedekind_sum, edge_factor, operator_of_open_diagram,
                      residue_report, sawtooth, theta_eval, trace, w_factor)
from .freelie import (NcPoly, TangentialDeriv, solve_pentagon_constant,
                      verify_depth1_identity)

__all__ = [
    "DiagramSum", "JacobiGraph", "StructuralError", "canonicalize",
    "count_i_configurations", "disjoint_union", "graph_from_json",
    "graph_to_json", "sum_from_json", "sum_to_json",
    "BudgetExceeded", "CycleDetected", "RewriteTrace", "RewriteViolation",
    "ihx_step", "normal_form",
    "check_axiom", "connected_sum", "d_h", "l2", "l_k",
    "TorsionData", "kirby_slide", "kirby_stabilize", "lens_torsion_data",
    "smith_normal_form", "torsion_data_from_matrix",
    "torsion_pair_equivalent",
    "ComplexValue", "PhaseSum", "closed_diagram_eval", "dedekind_sum",
    "edge_factor", "operator_of_open_diagram", "residue_report", "sawtooth",
    "theta_eval", "trace", "w_factor",
    "NcPoly", "TangentialDeriv", "solve_pentagon_constant",
    "verify_depth1_identity",
]
