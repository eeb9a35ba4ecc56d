"""Gflow discovery: layered GF(2) finder plus a brute-force oracle.

The finder works backwards from the outputs, solving a small GF(2)
system per vertex per round; the enumerator checks every candidate map
(after per-vertex pruning) and serves as the correctness oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .opengraph import (
    ExtendedOpenGraph,
    Plane,
    mask_to_set,
    odd_mask,
    set_to_mask,
)
from .gflow import AXES, Gflow


@dataclass(frozen=True)
class GflowEnumeration:
    instance: ExtendedOpenGraph
    gflows: tuple[Gflow, ...]
    exhausted: bool

    @property
    def count(self) -> int:
        return len(self.gflows)


def _plane_condition_holds(plane: Plane, u: int, k_mask: int, odd: int) -> bool:
    ubit = 1 << u
    in_g = bool(k_mask & ubit)
    in_odd = bool(odd & ubit)
    if plane is Plane.XY:
        return in_odd and not in_g
    if plane is Plane.XZ:
        return in_g and in_odd
    return in_g and not in_odd


def _nf_local_ok(sigma: str, k_mask: int, odd: int, nf_allowed: int) -> bool:
    target = odd if sigma == "X" else (odd ^ k_mask if sigma == "Y" else k_mask)
    return target & ~nf_allowed == 0


def _local_candidates(eog, u, allowed_mask, nf_sigma=None):
    """All corrector masks satisfying the plane (and optional NF) condition at u."""
    graph = eog.graph
    plane = eog.planes[u]
    nf_allowed = (1 << u) | set_to_mask(eog.outputs)
    cands = []
    k = allowed_mask
    while True:
        odd = odd_mask(graph, k)
        if _plane_condition_holds(plane, u, k, odd):
            if nf_sigma is None or _nf_local_ok(nf_sigma, k, odd, nf_allowed):
                cands.append(k)
        if k == 0:
            break
        k = (k - 1) & allowed_mask
    cands.reverse()
    return cands


def _is_extensive(deps: dict[int, int]) -> bool:
    """Acyclicity of the arcs u -> v for v in deps[u] (masks over measured)."""
    remaining = dict(deps)
    rem_mask = 0
    for u in remaining:
        rem_mask |= 1 << u
    while remaining:
        sinks = [u for u, m in remaining.items() if m & rem_mask == 0]
        if not sinks:
            return False
        for u in sinks:
            del remaining[u]
            rem_mask &= ~(1 << u)
    return True


def brute_force_enumerate(
    eog: ExtendedOpenGraph,
    limit: int = 1_000_000,
    *,
    nf_sigma: str | None = None,
    stop_after: int | None = None,
) -> GflowEnumeration:
    """Enumerate every valid gflow of the instance.

    Per-vertex candidates are pre-filtered by the local plane condition;
    surviving combinations are checked for extensivity. When more than
    ``limit`` combinations would need examining, a partial enumeration is
    returned with ``exhausted`` False. ``nf_sigma`` restricts candidates
    to the sigma normal form; ``stop_after`` stops early once that many
    gflows are collected (also marking the run non-exhausted).
    """
    measured = sorted(eog.measured)
    if not measured:
        return GflowEnumeration(eog, (Gflow({}),), True)
    allowed = set_to_mask(eog.vertices - eog.inputs)
    graph = eog.graph
    meas_mask = set_to_mask(measured)
    per_vertex = []
    for u in measured:
        cands = _local_candidates(eog, u, allowed, nf_sigma)
        if not cands:
            return GflowEnumeration(eog, (), True)
        ubit = 1 << u
        per_vertex.append(
            [(k, (k | odd_mask(graph, k)) & meas_mask & ~ubit) for k in cands]
        )
    found = []
    examined = 0
    exhausted = True
    for combo in itertools.product(*per_vertex):
        examined += 1
        if examined > limit:
            exhausted = False
            break
        deps = {u: d for u, (_, d) in zip(measured, combo)}
        if _is_extensive(deps):
            found.append(
                Gflow({u: mask_to_set(k) for u, (k, _) in zip(measured, combo)})
            )
            if stop_after is not None and len(found) >= stop_after:
                exhausted = False
                break
    return GflowEnumeration(eog, tuple(found), exhausted)


def _gf2_solve(rows, col_mask):
    """Solve the GF(2) system; free variables 0; None when inconsistent."""
    work = [list(r) for r in rows]
    pivot_rows = []
    used = set()
    m = col_mask
    while m:
        b = m & -m
        m ^= b
        idx = None
        for i, (mask, _) in enumerate(work):
            if i not in used and mask & b:
                idx = i
                break
        if idx is None:
            continue
        used.add(idx)
        pivot_rows.append((b, idx))
        pm, pr = work[idx]
        for j, (mask, rhs) in enumerate(work):
            if j != idx and mask & b:
                work[j][0] = mask ^ pm
                work[j][1] = rhs ^ pr
    for mask, rhs in work:
        if mask == 0 and rhs:
            return None
    sol = 0
    for b, i in pivot_rows:
        if work[i][1]:
            sol |= b
    return sol


def _solve_corrector_set(eog, u, c_mask, i_mask, v_mask):
    """Corrector mask for u with all dependencies inside c_mask, or None."""
    plane = eog.planes[u]
    ubit = 1 << u
    force_u = plane is not Plane.XY
    if force_u and ubit & i_mask:
        return None
    cols = c_mask & ~i_mask
    adj = eog.graph.adjacency_masks
    rows = []
    outside = v_mask & ~(c_mask | ubit)
    m = outside
    while m:
        b = m & -m
        m ^= b
        w = b.bit_length() - 1
        coeff = adj[w] & cols
        rhs = (adj[w] >> u) & 1 if force_u else 0
        if coeff == 0:
            if rhs:
                return None
        else:
            rows.append((coeff, rhs))
    rhs_u = 1 if plane in (Plane.XY, Plane.XZ) else 0
    coeff_u = adj[u] & cols
    if coeff_u == 0:
        if rhs_u:
            return None
    else:
        rows.append((coeff_u, rhs_u))
    sol = _gf2_solve(rows, cols)
    if sol is None:
        return None
    return sol | ubit if force_u else sol


def _find_gflow_rounds(eog: ExtendedOpenGraph):
    """Backward layered search; returns (gflow-or-None, rounds).

    rounds[u] counts from the outputs: round 1 holds the last-measured
    vertices, higher rounds are measured earlier.
    """
    measured = sorted(eog.measured)
    i_mask = set_to_mask(eog.inputs)
    v_mask = set_to_mask(eog.vertices)
    c_mask = set_to_mask(eog.outputs)
    unsolved = list(measured)
    assignment: dict[int, int] = {}
    rounds: dict[int, int] = {}
    round_no = 0
    while unsolved:
        solved = []
        for u in unsolved:
            k = _solve_corrector_set(eog, u, c_mask, i_mask, v_mask)
            if k is not None:
                assignment[u] = k
                solved.append(u)
        if not solved:
            return None, rounds
        round_no += 1
        for u in solved:
            rounds[u] = round_no
            c_mask |= 1 << u
        unsolved = [u for u in unsolved if u not in assignment]
    gflow = Gflow({u: mask_to_set(k) for u, k in assignment.items()})
    return gflow, rounds


def find_gflow(eog: ExtendedOpenGraph) -> Gflow | None:
    """A valid gflow of the instance, or None when none exists."""
    g, _ = _find_gflow_rounds(eog)
    return g


def exists_normal_form(
    eog: ExtendedOpenGraph, sigma: str, limit: int = 1_000_000
) -> bool | None:
    """Decide sigma-NF gflow existence; None when the search limit is hit.

    Pipeline: no gflow -> False; sigma in every measured non-input plane
    -> True; input-defect bound exceeded (Z only) -> False; otherwise
    restricted exhaustive search.  The bound is only a sound rejection
    for Z: a Y-NF gflow can exist with more XZ-measured non-inputs than
    the defect (complete 3-vertex graph, one output, both measured
    vertices XZ), so Y falls through to the search.
    """
    if sigma not in AXES:
        raise ValueError(f"sigma must be one of {AXES}, got {sigma!r}")
    if find_gflow(eog) is None:
        return False
    mni = eog.measured_non_inputs
    if all(eog.planes[u].contains(sigma) for u in mni):
        return True
    if sigma == "Z":
        off = sum(1 for u in mni if not eog.planes[u].contains(sigma))
        if off > eog.input_defect:
            return False
    enum = brute_force_enumerate(eog, limit, nf_sigma=sigma, stop_after=1)
    if enum.gflows:
        return True
    return False if enum.exhausted else None
