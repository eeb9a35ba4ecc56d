"""Command-line front end; every command prints one JSON report.

Exit codes: 0 success, 1 valid-but-negative answer, 2 input error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys

import numpy as np

from .opengraph import (
    OpenGraphError,
    parse_open_graph_document,
    serialize_open_graph,
)
from .gflow import (
    CorrectiveMaps,
    check_normal_form,
    extensivity_order,
    parse_corrective_maps,
    parse_gflow,
    serialize_gflow,
    verify_gflow,
)
from .instances import all_instances, random_instance
from .normal_forms import promote_input_y, promote_input_z
from .normal_forms import focus as focus_gflow
from .search import brute_force_enumerate, find_gflow
from .sim import (
    BranchLimitError,
    Pattern,
    Statevector,
    basis_state,
    check_determinism,
    pattern_from_gflow,
    run_all_branches,
)

OK, NEGATIVE, INPUT_ERROR, RESOURCE = 0, 1, 2, 3


def _emit(doc):
    print(json.dumps(doc, sort_keys=True))


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise OpenGraphError(f"cannot read {path}: {exc}") from exc


def _gflow_doc(g):
    return json.loads(serialize_gflow(g))


def cmd_verify(args):
    eog = parse_open_graph_document(_read(args.graph))[0]
    g = parse_gflow(_read(args.gflow))
    report = verify_gflow(eog, g)
    _emit(report.to_dict())
    return OK if report.valid else NEGATIVE


def cmd_find(args):
    eog = parse_open_graph_document(_read(args.graph))[0]
    g = find_gflow(eog)
    _emit({"gflow": None if g is None else _gflow_doc(g)["g"]})
    return OK if g is not None else NEGATIVE


def cmd_enumerate(args):
    eog = parse_open_graph_document(_read(args.graph))[0]
    enum = brute_force_enumerate(eog, args.limit)
    _emit(
        {
            "count": enum.count,
            "exhausted": enum.exhausted,
            "gflows": [_gflow_doc(g)["g"] for g in enum.gflows],
        }
    )
    if not enum.exhausted:
        return RESOURCE
    return OK if enum.count else NEGATIVE


def cmd_focus(args):
    eog = parse_open_graph_document(_read(args.graph))[0]
    g = parse_gflow(_read(args.gflow))
    report = verify_gflow(eog, g)
    if not report.valid:
        raise OpenGraphError("input gflow is not valid for this graph")
    focused = focus_gflow(eog, g, args.sigma)
    _emit(_gflow_doc(focused))
    return OK


def cmd_check_nf(args):
    eog = parse_open_graph_document(_read(args.graph))[0]
    g = parse_gflow(_read(args.gflow))
    ok = check_normal_form(eog, g, args.sigma)
    _emit({"normal_form": ok, "sigma": args.sigma})
    return OK if ok else NEGATIVE


def cmd_promote(args):
    eog = parse_open_graph_document(_read(args.graph))[0]
    g = parse_gflow(_read(args.gflow))
    step_fn = promote_input_z if args.sigma == "Z" else promote_input_y
    result = step_fn(eog, g, args.vertex)
    _emit(
        {
            "graph": json.loads(serialize_open_graph(result.rewritten)),
            "gflow": _gflow_doc(result.gflow)["g"],
            "promoted_vertex": result.promoted_vertex,
            "added_vertex": result.added_vertex,
        }
    )
    return OK


def _build_pattern(eog, angles, correction_text, seed):
    rng = random.Random(seed)
    if angles is None:
        angles = {u: rng.uniform(0.1, math.tau - 0.1) for u in sorted(eog.measured)}
    if correction_text is None:
        empty = {u: frozenset() for u in eog.measured}
        maps = CorrectiveMaps(empty, dict(empty))
        schedule = tuple(sorted(eog.measured))
        return Pattern(eog, angles, maps, schedule), angles
    doc = json.loads(correction_text)
    if isinstance(doc, dict) and "g" in doc:
        g = parse_gflow(correction_text)
        return pattern_from_gflow(eog, angles, g), angles
    maps = parse_corrective_maps(correction_text)
    f = {u: maps.x[u] | maps.z[u] for u in eog.measured}
    order = extensivity_order(eog.graph, eog.outputs, f)
    return Pattern(eog, angles, maps, order.schedule(eog.measured)), angles


def cmd_simulate(args):
    eog, angles = parse_open_graph_document(_read(args.graph))
    correction_text = _read(args.gflow) if args.gflow else None
    try:
        pattern, angles = _build_pattern(eog, angles, correction_text, args.seed)
    except json.JSONDecodeError as exc:
        raise OpenGraphError(f"invalid JSON: {exc}") from exc
    in_qubits = tuple(sorted(eog.inputs))
    if args.input == "basis":
        input_state = basis_state(in_qubits, 0)
    else:
        rng = np.random.default_rng(args.seed)
        amps = rng.normal(size=2 ** len(in_qubits)) + 1j * rng.normal(
            size=2 ** len(in_qubits)
        )
        input_state = Statevector(in_qubits, amps / np.linalg.norm(amps))
    results = run_all_branches(pattern, input_state, args.branch_bound)
    report = check_determinism(results, args.tol)
    doc = report.to_dict()
    doc["seed"] = args.seed
    doc["angles"] = {str(u): angles[u] for u in sorted(angles)}
    if args.dump_branches:
        doc["branches"] = [
            {
                "signals": {str(u): s for u, s in sorted(r.signals.items())},
                "probability": r.probability,
            }
            for r in results
        ]
    _emit(doc)
    return OK if report.deterministic else NEGATIVE


def cmd_oracle_compare(args):
    rng = random.Random(args.seed)
    instances = 0
    disagreements = 0
    invalid = 0

    def compare(eog):
        nonlocal instances, disagreements, invalid
        instances += 1
        found = find_gflow(eog)
        witness = brute_force_enumerate(eog, args.limit, stop_after=1)
        if (found is not None) != bool(witness.gflows):
            disagreements += 1
            return
        if found is not None and not verify_gflow(eog, found).valid:
            invalid += 1
        if witness.gflows and not verify_gflow(eog, witness.gflows[0]).valid:
            invalid += 1

    for eog in all_instances(args.max_vertices):
        compare(eog)
    for _ in range(args.trials):
        compare(random_instance(rng, rng.randint(1, 5)))
    _emit(
        {
            "instances": instances,
            "disagreements": disagreements,
            "invalid_gflows": invalid,
            "max_vertices": args.max_vertices,
            "trials": args.trials,
            "seed": args.seed,
        }
    )
    return OK if disagreements == 0 and invalid == 0 else NEGATIVE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gflownf",
        description="gflow verification, search, normal forms and simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a gflow against its open graph")
    p.add_argument("graph")
    p.add_argument("gflow")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("find", help="search for a gflow")
    p.add_argument("graph")
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("enumerate", help="list every gflow by brute force")
    p.add_argument("graph")
    p.add_argument("--limit", type=int, default=1_000_000)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("focus", help="rewrite a gflow into a normal form")
    p.add_argument("graph")
    p.add_argument("gflow")
    p.add_argument("--sigma", choices=("X", "Y", "Z"), required=True)
    p.set_defaults(func=cmd_focus)

    p = sub.add_parser("check-nf", help="test a gflow for a normal form")
    p.add_argument("graph")
    p.add_argument("gflow")
    p.add_argument("--sigma", choices=("X", "Y", "Z"), required=True)
    p.set_defaults(func=cmd_check_nf)

    p = sub.add_parser("promote", help="turn a measured non-input into an input")
    p.add_argument("graph")
    p.add_argument("gflow")
    p.add_argument("--sigma", choices=("Y", "Z"), required=True)
    p.add_argument("--vertex", type=int, required=True)
    p.set_defaults(func=cmd_promote)

    p = sub.add_parser("simulate", help="run every measurement branch")
    p.add_argument("graph")
    p.add_argument("gflow", nargs="?", default=None)
    p.add_argument("--input", choices=("basis", "random"), default="basis")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--branch-bound", type=int, default=12)
    p.add_argument("--dump-branches", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "oracle-compare", help="finder vs brute-force agreement sweep"
    )
    p.add_argument("--max-vertices", type=int, default=3)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=1_000_000)
    p.set_defaults(func=cmd_oracle_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BranchLimitError as exc:
        print(str(exc), file=sys.stderr)
        return RESOURCE
    except (OpenGraphError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
