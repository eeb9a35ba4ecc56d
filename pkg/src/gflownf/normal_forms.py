"""Focusing transformations, input-promotion rewrites, and the defect bound.

``focus`` eliminates non-output correctors through a reverse-order sweep;
the two promotions turn an off-axis measured non-input into an input,
trading one unit of input defect.
"""

from __future__ import annotations

from dataclasses import dataclass

from .opengraph import ExtendedOpenGraph, Graph, Plane, odd_neighbourhood
from .gflow import (
    AXES,
    Gflow,
    check_normal_form,
    extensivity_order,
    verify_gflow,
)
from .search import find_gflow


@dataclass(frozen=True)
class PromotionResult:
    rewritten: ExtendedOpenGraph
    gflow: Gflow
    promoted_vertex: int
    added_vertex: int | None


def focus(eog: ExtendedOpenGraph, g: Gflow, sigma: str) -> Gflow:
    """Rewrite g so the sigma-specific corrector set stays in {u} + outputs.

    Requires sigma to lie in the plane of every measured non-input; the
    sweep runs from the latest layer down so each substituted set is
    already final. The result is a valid sigma-NF gflow extensive under
    g's own order.
    """
    if sigma not in AXES:
        raise ValueError(f"sigma must be one of {AXES}, got {sigma!r}")
    for u in sorted(eog.measured_non_inputs):
        if not eog.planes[u].contains(sigma):
            raise ValueError(
                f"vertex {u} is measured in the {eog.planes[u].value} plane, "
                f"which does not contain {sigma}"
            )
    graph = eog.graph
    measured = eog.measured
    f = {u: g[u] | odd_neighbourhood(graph, g[u]) for u in measured}
    order = extensivity_order(graph, eog.outputs, f)
    refocused: dict[int, frozenset[int]] = {}
    for u in sorted(measured, key=lambda v: (-order.layers[v], v)):
        gu = g[u]
        odd = odd_neighbourhood(graph, gu)
        pool = {"X": odd, "Y": gu ^ odd, "Z": gu}[sigma]
        acc = gu
        for v in sorted(pool - eog.outputs - {u}):
            acc = acc ^ refocused[v]
        refocused[u] = acc
    return Gflow(refocused)


def _check_promotion_pre(eog, g, u0, sigma):
    report = verify_gflow(eog, g)
    if not report.valid:
        first = report.violations[0]
        raise ValueError(
            f"promotion requires a valid gflow "
            f"({first.condition} violated at vertex {first.vertex})"
        )
    if not check_normal_form(eog, g, sigma):
        raise ValueError(f"promotion requires a {sigma}-NF gflow")
    if u0 not in eog.measured_non_inputs:
        raise ValueError(f"vertex {u0} is not a measured non-input")
    if eog.planes[u0].contains(sigma):
        raise ValueError(
            f"vertex {u0} is measured in a plane containing {sigma}; "
            f"nothing to promote"
        )


def _redirect_through(g: Gflow, u0: int, measured) -> dict[int, frozenset[int]]:
    # After this, u0 appears in no corrector set but its own.
    gu0 = g[u0]
    return {
        u: g[u] if u == u0 or u0 not in g[u] else g[u] ^ gu0 for u in measured
    }


def promote_input_z(eog: ExtendedOpenGraph, g: Gflow, u0: int) -> PromotionResult:
    """Turn an XY-measured non-input into an input, keeping a Z-NF gflow."""
    _check_promotion_pre(eog, g, u0, "Z")
    gp = _redirect_through(g, u0, eog.measured)
    rewritten = ExtendedOpenGraph(
        eog.graph, eog.inputs | {u0}, eog.outputs, dict(eog.planes)
    )
    return PromotionResult(rewritten, Gflow(gp), u0, None)


def promote_input_y(eog: ExtendedOpenGraph, g: Gflow, u0: int) -> PromotionResult:
    """Turn an XZ-measured non-input into an input, keeping a Y-NF gflow.

    A fresh degree-one vertex hangs off the promoted vertex; the promoted
    vertex switches to the XY plane and the new vertex is measured YZ.
    """
    _check_promotion_pre(eog, g, u0, "Y")
    for v in sorted(eog.graph.neighbours(u0) - eog.outputs):
        if not eog.planes[v].contains("Y"):
            raise ValueError(
                f"cannot promote vertex {u0}: its neighbour {v} is measured "
                f"in the {eog.planes[v].value} plane, so the spurious parity "
                f"it picks up cannot be cancelled"
            )
    gp = _redirect_through(g, u0, eog.measured)
    u1 = max(eog.vertices) + 1
    graph2 = Graph(eog.graph.vertices | {u1}, eog.graph.edges | {(u0, u1)})
    planes2 = dict(eog.planes)
    planes2[u0] = Plane.XY
    planes2[u1] = Plane.YZ
    # Corrector for the promoted vertex: start from its old set minus
    # itself, then cancel the spurious odd-parity it casts on each
    # non-output neighbour by folding in that neighbour's (redirected)
    # set.  Each fold removes exactly one non-output vertex from the
    # symmetric difference and cannot reintroduce u0, so the result
    # satisfies the XY condition at u0 and the Y-NF inclusion.
    s = gp[u0] ^ {u0}
    for v in eog.graph.neighbours(u0) - eog.outputs:
        s ^= gp[v]
    g2 = dict(gp)
    g2[u0] = s
    g2[u1] = s | {u1}
    rewritten = ExtendedOpenGraph(graph2, eog.inputs | {u0}, eog.outputs, planes2)
    return PromotionResult(rewritten, Gflow(g2), u0, u1)


def promote_all(eog: ExtendedOpenGraph, g: Gflow, sigma: str):
    """Promote eligible vertices in ascending id order until none remain.

    Returns (rewritten instance, gflow, list of promotion steps).
    """
    if sigma not in ("Y", "Z"):
        raise ValueError("promotion applies to the Y and Z normal forms only")
    step_fn = promote_input_z if sigma == "Z" else promote_input_y
    steps = []
    while True:
        eligible = sorted(
            u for u in eog.measured_non_inputs if not eog.planes[u].contains(sigma)
        )
        if not eligible:
            return eog, g, steps
        step = step_fn(eog, g, eligible[0])
        steps.append(step)
        eog, g = step.rewritten, step.gflow


def check_defect_bound(eog: ExtendedOpenGraph, sigma: str):
    """(off-sigma count, input defect, count <= defect) for sigma in {Y, Z}.

    For Z the comparison is a necessary condition: a Z-NF gflow can only
    exist when the count of XY-measured non-inputs stays within the input
    defect.  For Y the numbers are reported but the comparison is *not* a
    sound rejection — a complete 3-vertex graph with one output and both
    measured vertices in XZ has a Y-NF gflow with count 2 > defect 1.
    """
    if sigma not in ("Y", "Z"):
        raise ValueError("the input-defect bound applies to Y- and Z-NF only")
    count = sum(
        1 for u in eog.measured_non_inputs if not eog.planes[u].contains(sigma)
    )
    defect = eog.input_defect
    return count, defect, count <= defect


def check_balanced_nf(eog: ExtendedOpenGraph, sigma: str) -> bool:
    """Equal-input-output decision: sigma-NF existence reduces to the planes.

    For an instance with a gflow and |I| = |O|, a sigma-NF gflow
    (sigma in {Y, Z}) exists exactly when every measured non-input plane
    contains sigma.
    """
    if sigma not in ("Y", "Z"):
        raise ValueError("the equivalence is stated for sigma in {Y, Z}")
    if len(eog.inputs) != len(eog.outputs):
        raise ValueError("the equivalence requires as many inputs as outputs")
    if find_gflow(eog) is None:
        raise ValueError("instance has no gflow")
    return all(eog.planes[u].contains(sigma) for u in eog.measured_non_inputs)
