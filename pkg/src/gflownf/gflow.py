"""Gflow candidates, extensivity, verification, normal-form predicates.

A gflow assigns each measured vertex a corrector set drawn from the
non-inputs; validity combines a per-vertex plane condition with global
extensivity (the induced dependency digraph must be acyclic).
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .opengraph import (
    ExtendedOpenGraph,
    Graph,
    OpenGraphError,
    Plane,
    odd_neighbourhood,
)

AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class Gflow:
    """Map from each measured vertex to its corrector set."""

    assignments: Mapping[int, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(
            self,
            "assignments",
            {int(u): frozenset(s) for u, s in self.assignments.items()},
        )

    def __getitem__(self, u: int) -> frozenset[int]:
        return self.assignments[u]

    def domain(self) -> frozenset[int]:
        return frozenset(self.assignments)


def parse_gflow(text: str) -> Gflow:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OpenGraphError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("g"), dict):
        raise OpenGraphError('gflow document must be an object with a "g" map')
    assignments = {}
    for key, val in doc["g"].items():
        try:
            u = int(key)
        except ValueError as exc:
            raise OpenGraphError(f"gflow key {key!r} is not a vertex id") from exc
        if not isinstance(val, list) or not all(isinstance(v, int) for v in val):
            raise OpenGraphError(f"corrector set of {u} must be a list of ids")
        assignments[u] = frozenset(val)
    return Gflow(assignments)


def serialize_gflow(g: Gflow) -> str:
    doc = {"g": {str(u): sorted(s) for u, s in g.assignments.items()}}
    return json.dumps(doc, sort_keys=True)


@dataclass(frozen=True)
class DependencyOrder:
    """Layer assignment witnessing a strict partial order (lower layers first)."""

    layers: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "layers", dict(self.layers))

    def schedule(self, vertices: Iterable[int]) -> tuple[int, ...]:
        """Linear extension over the given vertices, ties broken by id."""
        return tuple(sorted(vertices, key=lambda v: (self.layers[v], v)))


class CycleError(ValueError):
    """Extensivity failure: the dependency digraph contains a cycle."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("dependency cycle: " + " -> ".join(map(str, self.cycle)))


def _witness_cycle(succ, remaining):
    pred = {v: set() for v in remaining}
    for u in remaining:
        for v in succ[u]:
            if v in remaining:
                pred[v].add(u)
    path = [min(remaining)]
    seen = {path[0]: 0}
    while True:
        nxt = min(pred[path[-1]])
        if nxt in seen:
            return list(reversed(path[seen[nxt]:]))
        seen[nxt] = len(path)
        path.append(nxt)


def extensivity_order(
    graph: Graph, outputs: Iterable[int], f: Mapping[int, Iterable[int]]
) -> DependencyOrder:
    """Layer the vertices so every v in f(u)\\{u} sits strictly above u.

    Raises CycleError (carrying one witness cycle) when no such order
    exists. Outputs are lifted to the shared maximal layer.
    """
    outputs = frozenset(outputs)
    succ: dict[int, set[int]] = {v: set() for v in graph.vertices}
    for u, image in f.items():
        if u not in succ:
            raise OpenGraphError(f"map is keyed by unknown vertex {u}")
        for v in image:
            if v not in succ:
                raise OpenGraphError(f"image of {u} contains unknown vertex {v}")
            if v != u:
                succ[u].add(v)
    indeg = {v: 0 for v in graph.vertices}
    for vs in succ.values():
        for v in vs:
            indeg[v] += 1
    ready = [v for v in graph.vertices if indeg[v] == 0]
    heapq.heapify(ready)
    layers = {v: 0 for v in graph.vertices}
    done = 0
    while ready:
        u = heapq.heappop(ready)
        done += 1
        for v in sorted(succ[u]):
            layers[v] = max(layers[v], layers[u] + 1)
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if done != len(graph.vertices):
        remaining = {v for v in graph.vertices if indeg[v] > 0}
        raise CycleError(_witness_cycle(succ, remaining))
    top = max(layers.values(), default=0)
    for o in outputs:
        layers[o] = top
    return DependencyOrder(layers)


@dataclass(frozen=True)
class Violation:
    vertex: int
    condition: str
    witness: frozenset[int]


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    violations: tuple[Violation, ...]

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [
                {
                    "vertex": v.vertex,
                    "condition": v.condition,
                    "witness": sorted(v.witness),
                }
                for v in self.violations
            ],
        }


def verify_gflow(eog: ExtendedOpenGraph, g: Gflow) -> VerificationReport:
    """Check codomain, extensivity and the per-plane membership conditions.

    A mismatch between the gflow's domain and the measured vertices is a
    usage error and raises; condition failures come back as violations.
    """
    measured = eog.measured
    if g.domain() != measured:
        raise ValueError(
            f"gflow must assign exactly the measured vertices "
            f"{sorted(measured)}, got {sorted(g.domain())}"
        )
    violations = []
    non_inputs = eog.vertices - eog.inputs
    clean = True
    for u in sorted(measured):
        bad = g[u] - non_inputs
        if bad:
            violations.append(Violation(u, "codomain", frozenset(bad)))
            if not g[u] <= eog.vertices:
                clean = False
    for u in sorted(measured):
        gu = g[u]
        if not gu <= eog.vertices:
            continue
        odd = odd_neighbourhood(eog.graph, gu)
        plane = eog.planes[u]
        in_g, in_odd = u in gu, u in odd
        ok = {
            Plane.XY: in_odd and not in_g,
            Plane.XZ: in_g and in_odd,
            Plane.YZ: in_g and not in_odd,
        }[plane]
        if not ok:
            violations.append(Violation(u, f"plane-{plane.value}", odd))
    if clean:
        f = {u: g[u] | odd_neighbourhood(eog.graph, g[u]) for u in measured}
        try:
            extensivity_order(eog.graph, eog.outputs, f)
        except CycleError as exc:
            violations.append(
                Violation(exc.cycle[0], "extensivity", frozenset(exc.cycle))
            )
    return VerificationReport(not violations, tuple(violations))


def check_input_planes(eog: ExtendedOpenGraph) -> bool:
    """Necessary for gflow existence: measured inputs sit in the XY plane."""
    return all(eog.planes[u] is Plane.XY for u in eog.inputs & eog.measured)


@dataclass(frozen=True)
class CorrectiveMaps:
    """Signal-conditioned X and Z correction targets per measured vertex."""

    x: Mapping[int, frozenset[int]]
    z: Mapping[int, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(
            self, "x", {int(u): frozenset(s) for u, s in self.x.items()}
        )
        object.__setattr__(
            self, "z", {int(u): frozenset(s) for u, s in self.z.items()}
        )


def parse_corrective_maps(text: str) -> CorrectiveMaps:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OpenGraphError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not (
        isinstance(doc.get("x"), dict) and isinstance(doc.get("z"), dict)
    ):
        raise OpenGraphError('corrective-map document needs "x" and "z" objects')

    def load(side):
        out = {}
        for key, val in doc[side].items():
            try:
                u = int(key)
            except ValueError as exc:
                raise OpenGraphError(f"key {key!r} is not a vertex id") from exc
            if not isinstance(val, list) or not all(isinstance(v, int) for v in val):
                raise OpenGraphError(f'"{side}" targets of {u} must be id lists')
            out[u] = frozenset(val)
        return out

    return CorrectiveMaps(load("x"), load("z"))


def serialize_corrective_maps(maps: CorrectiveMaps) -> str:
    doc = {
        "x": {str(u): sorted(s) for u, s in maps.x.items()},
        "z": {str(u): sorted(s) for u, s in maps.z.items()},
    }
    return json.dumps(doc, sort_keys=True)


def corrective_maps(eog: ExtendedOpenGraph, g: Gflow) -> CorrectiveMaps:
    """Derive the correction strategy x(u) = g(u)\\{u}, z(u) = Odd(g(u))\\{u}."""
    report = verify_gflow(eog, g)
    if not report.valid:
        first = report.violations[0]
        raise ValueError(
            f"not a valid gflow: {first.condition} violated at vertex {first.vertex}"
        )
    x = {u: g[u] - {u} for u in eog.measured}
    z = {u: odd_neighbourhood(eog.graph, g[u]) - {u} for u in eog.measured}
    return CorrectiveMaps(x, z)


def check_normal_form(eog: ExtendedOpenGraph, g: Gflow, sigma: str) -> bool:
    """Whether the sigma-specific corrector inclusion holds at every vertex.

    X bounds Odd(g(u)), Z bounds g(u), Y bounds their symmetric difference,
    each inside {u} union the outputs.
    """
    if sigma not in AXES:
        raise ValueError(f"sigma must be one of {AXES}, got {sigma!r}")
    if g.domain() != eog.measured:
        raise ValueError("gflow must assign exactly the measured vertices")
    for u in eog.measured:
        gu = g[u]
        odd = odd_neighbourhood(eog.graph, gu)
        target = {"X": odd, "Y": gu ^ odd, "Z": gu}[sigma]
        if not target <= ({u} | eog.outputs):
            return False
    return True
