"""Open graphs with measurement planes and GF(2) vertex-set algebra.

Vertex sets are frozensets of small non-negative integer ids. Hot paths
(candidate enumeration, GF(2) solving) work on int bitmasks where bit i
stands for vertex i; ``set_to_mask``/``mask_to_set`` convert between the
two views.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping


class OpenGraphError(ValueError):
    """Malformed open-graph document or violated structural invariant."""


class Plane(Enum):
    """Measurement plane of the Bloch sphere."""

    XY = "XY"
    XZ = "XZ"
    YZ = "YZ"

    def contains(self, axis: str) -> bool:
        """Whether the Pauli axis ("X", "Y" or "Z") lies in this plane."""
        return axis in self.value


def set_to_mask(s: Iterable[int]) -> int:
    m = 0
    for v in s:
        m |= 1 << v
    return m


def mask_to_set(mask: int) -> frozenset[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return frozenset(out)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph over non-negative integer vertex ids."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        verts = frozenset(self.vertices)
        for v in verts:
            if not isinstance(v, int) or v < 0:
                raise OpenGraphError(
                    f"vertex ids must be non-negative integers, got {v!r}"
                )
        norm = set()
        for edge in self.edges:
            u, v = edge
            if u == v:
                raise OpenGraphError(f"self-loop at vertex {u}")
            if u not in verts or v not in verts:
                raise OpenGraphError(
                    f"edge ({u}, {v}) has an endpoint outside the vertex set"
                )
            norm.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", frozenset(norm))

    @cached_property
    def adjacency_masks(self) -> dict[int, int]:
        masks = {v: 0 for v in self.vertices}
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks

    def neighbours(self, v: int) -> frozenset[int]:
        if v not in self.vertices:
            raise OpenGraphError(f"vertex {v} not in graph")
        return mask_to_set(self.adjacency_masks[v])


def odd_mask(graph: Graph, mask: int) -> int:
    """Bitmask form of the odd neighbourhood; linear over XOR."""
    adj = graph.adjacency_masks
    acc = 0
    while mask:
        b = mask & -mask
        acc ^= adj[b.bit_length() - 1]
        mask ^= b
    return acc


def odd_neighbourhood(graph: Graph, a: Iterable[int]) -> frozenset[int]:
    """Vertices adjacent to an odd number of members of ``a``."""
    a = frozenset(a)
    if not a <= graph.vertices:
        raise OpenGraphError(
            f"set members {sorted(a - graph.vertices)} are not graph vertices"
        )
    return mask_to_set(odd_mask(graph, set_to_mask(a)))


def symmetric_difference(a: Iterable[int], b: Iterable[int]) -> frozenset[int]:
    """Elements lying in exactly one of the two sets."""
    return frozenset(a) ^ frozenset(b)


def induced_edge_count(graph: Graph, x: Iterable[int], y: Iterable[int]) -> int:
    """Number of edges with both endpoints inside the combined support."""
    support = frozenset(x) | frozenset(y)
    return sum(1 for u, v in graph.edges if u in support and v in support)


@dataclass(frozen=True)
class ExtendedOpenGraph:
    """Open graph with input/output marks and a measurement-plane map.

    The plane map is total on the measured (non-output) vertices and
    undefined on outputs. Instances are immutable; rewrites build new ones.
    """

    graph: Graph
    inputs: frozenset[int]
    outputs: frozenset[int]
    planes: Mapping[int, Plane]

    def __post_init__(self):
        inputs = frozenset(self.inputs)
        outputs = frozenset(self.outputs)
        verts = self.graph.vertices
        if not inputs <= verts:
            raise OpenGraphError(f"inputs {sorted(inputs - verts)} are not vertices")
        if not outputs <= verts:
            raise OpenGraphError(f"outputs {sorted(outputs - verts)} are not vertices")
        planes = dict(self.planes)
        for v, p in planes.items():
            if not isinstance(p, Plane):
                raise OpenGraphError(f"plane of vertex {v} must be a Plane, got {p!r}")
        measured = verts - outputs
        if set(planes) != measured:
            extra = sorted(set(planes) - measured)
            missing = sorted(measured - set(planes))
            raise OpenGraphError(
                f"plane map must cover exactly the measured vertices "
                f"(extra: {extra}, missing: {missing})"
            )
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
        object.__setattr__(self, "planes", planes)

    @property
    def vertices(self) -> frozenset[int]:
        return self.graph.vertices

    @property
    def measured(self) -> frozenset[int]:
        return self.graph.vertices - self.outputs

    @property
    def measured_non_inputs(self) -> frozenset[int]:
        return self.measured - self.inputs

    @property
    def input_defect(self) -> int:
        return len(self.outputs) - len(self.inputs)


def _int_list(doc, key):
    val = doc.get(key)
    if not isinstance(val, list) or not all(isinstance(v, int) for v in val):
        raise OpenGraphError(f'"{key}" must be a list of integers')
    return val


def parse_open_graph_document(text: str):
    """Parse a JSON open-graph document; returns (graph, angles-or-None)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OpenGraphError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise OpenGraphError("document must be a JSON object")

    vertices = _int_list(doc, "vertices")
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise OpenGraphError('"edges" must be a list of vertex pairs')
    edges = set()
    for e in raw_edges:
        if (
            not isinstance(e, list)
            or len(e) != 2
            or not all(isinstance(v, int) for v in e)
        ):
            raise OpenGraphError(f"malformed edge {e!r}")
        edges.add((e[0], e[1]))
    inputs = _int_list(doc, "inputs")
    outputs = _int_list(doc, "outputs")

    raw_planes = doc.get("planes", {})
    if not isinstance(raw_planes, dict):
        raise OpenGraphError('"planes" must be an object keyed by vertex id')
    planes = {}
    for key, val in raw_planes.items():
        try:
            v = int(key)
        except ValueError as exc:
            raise OpenGraphError(f"plane key {key!r} is not a vertex id") from exc
        try:
            planes[v] = Plane(val)
        except ValueError as exc:
            raise OpenGraphError(f"unknown plane {val!r} at vertex {v}") from exc

    graph = Graph(frozenset(vertices), frozenset(edges))
    eog = ExtendedOpenGraph(graph, frozenset(inputs), frozenset(outputs), planes)

    angles = None
    if "angles" in doc:
        raw_angles = doc["angles"]
        if not isinstance(raw_angles, dict):
            raise OpenGraphError('"angles" must be an object keyed by vertex id')
        angles = {}
        for key, val in raw_angles.items():
            try:
                v = int(key)
            except ValueError as exc:
                raise OpenGraphError(f"angle key {key!r} is not a vertex id") from exc
            if not isinstance(val, (int, float)) or not 0 <= val < math.tau:
                raise OpenGraphError(f"angle at vertex {v} must lie in [0, 2*pi)")
            if v not in eog.measured:
                raise OpenGraphError(f"angle given for unmeasured vertex {v}")
            angles[v] = float(val)
    return eog, angles


def parse_open_graph(text: str) -> ExtendedOpenGraph:
    return parse_open_graph_document(text)[0]


def serialize_open_graph(eog: ExtendedOpenGraph, angles=None) -> str:
    doc = {
        "vertices": sorted(eog.vertices),
        "edges": [list(e) for e in sorted(eog.graph.edges)],
        "inputs": sorted(eog.inputs),
        "outputs": sorted(eog.outputs),
        "planes": {str(v): eog.planes[v].value for v in sorted(eog.measured)},
    }
    if angles is not None:
        doc["angles"] = {str(v): float(a) for v, a in sorted(angles.items())}
    return json.dumps(doc, sort_keys=True)
