"""Exhaustive branch simulation of measurement patterns with corrections.

States live on an ordered qubit register (first qubit is the most
significant bit); measured qubits are factored out immediately, so memory
stays at 2**(alive qubits). Every signal assignment is evaluated as its
own branch and the outputs compared up to global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np

from .opengraph import ExtendedOpenGraph, Graph, Plane, odd_neighbourhood
from .gflow import CorrectiveMaps, Gflow, corrective_maps, extensivity_order

STATE_TOL = 1e-9
NORM_TOL = 1e-12
DEFAULT_BRANCH_BOUND = 12

PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class BranchLimitError(RuntimeError):
    """Too many measured qubits for exhaustive branch evaluation."""


@dataclass
class Statevector:
    qubits: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        self.qubits = tuple(self.qubits)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2 ** len(self.qubits),):
            raise ValueError(
                f"amplitude vector of length {self.amplitudes.size} does not "
                f"match {len(self.qubits)} qubits"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "Statevector":
        return Statevector(self.qubits, self.amplitudes.copy())


def basis_state(qubits, bits: int) -> Statevector:
    amps = np.zeros(2 ** len(tuple(qubits)), dtype=complex)
    amps[bits] = 1.0
    return Statevector(tuple(qubits), amps)


def inner(a: Statevector, b: Statevector) -> complex:
    if a.qubits != b.qubits:
        raise ValueError("states live on different registers")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def prepare(graph: Graph, inputs, input_state: Statevector) -> Statevector:
    """Entangle the input state: append |+> on the rest, phase per edge.

    The amplitude on a basis assignment picks up -1 for every edge whose
    endpoints are both set, and the non-input part is uniformly weighted.
    """
    inputs = frozenset(inputs)
    if input_state.qubits != tuple(sorted(inputs)):
        raise ValueError("input state must be defined exactly on the input qubits")
    qubits = tuple(sorted(graph.vertices))
    n = len(qubits)
    pos = {v: i for i, v in enumerate(qubits)}
    idx = np.arange(2**n)
    bit = {v: (idx >> (n - 1 - pos[v])) & 1 for v in qubits}
    in_index = np.zeros(2**n, dtype=np.int64)
    for v in input_state.qubits:
        in_index = (in_index << 1) | bit[v]
    sign = np.ones(2**n)
    for u, v in graph.edges:
        sign *= 1.0 - 2.0 * (bit[u] & bit[v])
    amps = input_state.amplitudes[in_index] * sign / math.sqrt(2 ** (n - len(inputs)))
    return Statevector(qubits, amps)


def plane_observable(plane: Plane, alpha: float) -> np.ndarray:
    a1, a2 = plane.value
    return math.cos(alpha) * PAULI[a1] + math.sin(alpha) * PAULI[a2]


@lru_cache(maxsize=4096)
def _eigenvectors(plane: Plane, alpha: float):
    # columns: eigenvector for outcome s=0 (eigenvalue +1), then s=1 (-1)
    vals, vecs = np.linalg.eigh(plane_observable(plane, alpha))
    plus = int(np.argmax(vals))
    vecs.flags.writeable = False
    return vecs[:, plus], vecs[:, 1 - plus]


def measure(state: Statevector, u: int, plane: Plane, alpha: float, s: int):
    """Project qubit u onto the (-1)^s eigenspace of the plane observable.

    Returns (probability, post state with u factored out); a numerically
    zero projection yields (0.0, None).
    """
    if u not in state.qubits:
        raise ValueError(f"qubit {u} not present in the register")
    if s not in (0, 1):
        raise ValueError("signal must be 0 or 1")
    n = len(state.qubits)
    p = state.qubits.index(u)
    phi = _eigenvectors(plane, alpha)[s]
    block = state.amplitudes.reshape(2**p, 2, 2 ** (n - 1 - p))
    rest = np.tensordot(phi.conj(), block, axes=([0], [1])).reshape(-1)
    total = float(np.vdot(state.amplitudes, state.amplitudes).real)
    if total <= 0.0:
        raise ValueError("cannot measure a zero state")
    weight = float(np.vdot(rest, rest).real)
    prob = weight / total
    if weight < 1e-24:
        return 0.0, None
    post = Statevector(
        tuple(q for q in state.qubits if q != u), rest / math.sqrt(weight)
    )
    return prob, post


def apply_correction(state: Statevector, pauli: str, targets, s: int) -> Statevector:
    """X or Z on every target, conditioned on the signal bit."""
    if pauli not in ("X", "Z"):
        raise ValueError("correction operators are X or Z")
    targets = frozenset(targets)
    missing = targets - set(state.qubits)
    if missing:
        raise ValueError(f"correction targets {sorted(missing)} not in register")
    if s == 0:
        return state
    n = len(state.qubits)
    amps = state.amplitudes
    for t in sorted(targets):
        p = state.qubits.index(t)
        block = amps.reshape(2**p, 2, 2 ** (n - 1 - p)).copy()
        if pauli == "X":
            block = block[:, ::-1, :]
        else:
            block[:, 1, :] *= -1
        amps = block.reshape(-1)
    return Statevector(state.qubits, amps)


@dataclass(frozen=True)
class Pattern:
    """Extended open graph with angles, corrections and a measurement order."""

    eog: ExtendedOpenGraph
    angles: Mapping[int, float]
    corrections: CorrectiveMaps
    schedule: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "angles", dict(self.angles))
        object.__setattr__(self, "schedule", tuple(self.schedule))
        measured = self.eog.measured
        if frozenset(self.schedule) != measured or len(self.schedule) != len(measured):
            raise ValueError("schedule must order the measured vertices exactly")
        if not measured <= frozenset(self.angles):
            raise ValueError("angles must cover every measured vertex")
        if frozenset(self.corrections.x) != measured or frozenset(
            self.corrections.z
        ) != measured:
            raise ValueError("corrective maps must be keyed by the measured vertices")
        position = {u: i for i, u in enumerate(self.schedule)}
        for u in self.schedule:
            for v in self.corrections.x[u] | self.corrections.z[u]:
                if v not in self.eog.vertices:
                    raise ValueError(f"corrector {v} of {u} is not a vertex")
                if v in position and position[v] <= position[u]:
                    raise ValueError(
                        f"corrector {v} of {u} would already be measured"
                    )


def pattern_from_gflow(
    eog: ExtendedOpenGraph, angles: Mapping[int, float], g: Gflow
) -> Pattern:
    """Corrections from the gflow, schedule from its dependency layers."""
    maps = corrective_maps(eog, g)
    f = {u: g[u] | odd_neighbourhood(eog.graph, g[u]) for u in eog.measured}
    order = extensivity_order(eog.graph, eog.outputs, f)
    return Pattern(eog, angles, maps, order.schedule(eog.measured))


def strip_corrections(pattern: Pattern) -> Pattern:
    empty = {u: frozenset() for u in pattern.eog.measured}
    return Pattern(
        pattern.eog, pattern.angles, CorrectiveMaps(empty, dict(empty)), pattern.schedule
    )


@dataclass(frozen=True)
class BranchResult:
    signals: Mapping[int, int]
    probability: float
    output_state: Statevector

    def __post_init__(self):
        object.__setattr__(self, "signals", dict(self.signals))


def _run_measurements(pattern: Pattern, state: Statevector, signals) -> BranchResult:
    prob = 1.0
    for u in pattern.schedule:
        s = signals[u]
        p, post = measure(state, u, pattern.eog.planes[u], pattern.angles[u], s)
        prob *= p
        if post is None:
            out_qubits = tuple(sorted(pattern.eog.outputs))
            return BranchResult(
                signals, 0.0, Statevector(out_qubits, np.zeros(2 ** len(out_qubits)))
            )
        state = post
        if s:
            state = apply_correction(state, "X", pattern.corrections.x[u], s)
            state = apply_correction(state, "Z", pattern.corrections.z[u], s)
    return BranchResult(signals, prob, state)


def run_branch(pattern: Pattern, input_state: Statevector, signals) -> BranchResult:
    """Run one signal assignment end to end."""
    if frozenset(signals) != pattern.eog.measured:
        raise ValueError("signals must be given for exactly the measured vertices")
    state = prepare(pattern.eog.graph, pattern.eog.inputs, input_state)
    return _run_measurements(pattern, state, dict(signals))


def run_all_branches(
    pattern: Pattern,
    input_state: Statevector,
    branch_bound: int = DEFAULT_BRANCH_BOUND,
) -> list[BranchResult]:
    """One branch per signal assignment, ordered as a binary counter."""
    k = len(pattern.schedule)
    if k > branch_bound:
        raise BranchLimitError(
            f"{k} measured qubits exceed the branch bound {branch_bound}"
        )
    prepared = prepare(pattern.eog.graph, pattern.eog.inputs, input_state)
    results = []
    for code in range(2**k):
        signals = {
            u: (code >> (k - 1 - i)) & 1 for i, u in enumerate(pattern.schedule)
        }
        results.append(_run_measurements(pattern, prepared.copy(), signals))
    return results


@dataclass(frozen=True)
class DeterminismReport:
    deterministic: bool
    max_state_deviation: float
    probabilities: tuple[float, ...]
    strong: bool
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "deterministic": self.deterministic,
            "max_state_deviation": self.max_state_deviation,
            "probabilities": list(self.probabilities),
            "strong": self.strong,
            "tolerance": self.tolerance,
        }


def check_determinism(results, tol: float = STATE_TOL) -> DeterminismReport:
    """Compare branch outputs up to global phase and probabilities to 2**-k."""
    if not results:
        raise ValueError("no branch results given")
    live = [r for r in results if r.probability > 0]
    if not live:
        raise ValueError("every branch has zero probability")
    k = len(live[0].signals)
    ref = live[0].output_state
    max_dev = 0.0
    for r in live[1:]:
        max_dev = max(max_dev, 1.0 - abs(inner(ref, r.output_state)))
    uniform = 2.0**-k
    probs = tuple(r.probability for r in results)
    strong = all(abs(p - uniform) <= tol for p in probs)
    return DeterminismReport(max_dev <= tol, max_dev, probs, strong, tol)


def extract_isometry(
    pattern: Pattern,
    tol: float = STATE_TOL,
    branch_bound: int = DEFAULT_BRANCH_BOUND,
) -> np.ndarray:
    """The implemented input-to-output map as a 2^|O| x 2^|I| matrix.

    Column x is the (unit-norm, phase-gauged) branch output on basis input
    x; determinism is certified on every basis input and on the uniform
    superposition, and a non-deterministic pattern raises.
    """
    in_qubits = tuple(sorted(pattern.eog.inputs))
    n_in = len(in_qubits)
    dim_out = 2 ** len(pattern.eog.outputs)
    matrix = np.zeros((dim_out, 2**n_in), dtype=complex)
    for x in range(2**n_in):
        results = run_all_branches(pattern, basis_state(in_qubits, x), branch_bound)
        report = check_determinism(results, tol)
        if not report.deterministic:
            raise ValueError(f"pattern is not deterministic on basis input {x}")
        col = next(r.output_state for r in results if r.probability > 0).amplitudes
        col = col / np.linalg.norm(col)
        lead = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        matrix[:, x] = col * (abs(lead) / lead)
    if n_in > 0:
        sup = Statevector(
            in_qubits, np.full(2**n_in, 2 ** (-n_in / 2), dtype=complex)
        )
        if not check_determinism(
            run_all_branches(pattern, sup, branch_bound), tol
        ).deterministic:
            raise ValueError("pattern is not deterministic on a superposed input")
    return matrix
