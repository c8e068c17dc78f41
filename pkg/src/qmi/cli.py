"""``qmi`` command-line front end.

Every subcommand writes one JSON report to stdout (or ``--output``) and exits
0 when a verdict was computed, 1 on invalid input and 2 when two internal
routes disagree. Reports contain no timestamps unless ``--timing`` is given,
so identical inputs and flags reproduce identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import jsonschema
import numpy as np

from . import m2cc
from .classical_group import isometry_group, largest_isometric_subgroup
from .errors import ConsistencyError, InputError, InternalDisagreement, QmiError
from .isometry_check import decide_isometric, lipdefect
from .magic_unitary import check_commutation, decode_magic
from .matrix_core import DEFAULT_TOL, decode_complex, decode_state
from .metric_space import FiniteMetricSpace, distance_levels, lipnorm, validate_metric
from .transport import CouplingProblem, CutCertificate, hall_check, solve_transport

_NUMBER = {"type": "number"}
_COMPLEX = {"oneOf": [_NUMBER, {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}]}
_CMATRIX = {"type": "array", "items": {"type": "array", "items": _COMPLEX}}

SCHEMAS = {
    "metric": {
        "type": "object",
        "required": ["d"],
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "d": {"type": "array", "items": {"type": "array", "items": _NUMBER}},
        },
    },
    "magic": {
        "type": "object",
        "required": ["n", "dim", "entries"],
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "dim": {"type": "integer", "minimum": 1},
            "entries": {"type": "array", "items": {"type": "array", "items": _CMATRIX}},
        },
    },
    "state": {
        "type": "object",
        "required": ["dim", "rho"],
        "properties": {"dim": {"type": "integer", "minimum": 1}, "rho": _CMATRIX},
    },
    "arep": {
        "type": "object",
        "required": ["dim", "x", "y", "z", "p"],
        "properties": {"dim": {"type": "integer", "minimum": 1},
                       **{k: _CMATRIX for k in ("x", "y", "z", "p")}},
    },
    "allowed": {
        "type": "array",
        "items": {"type": "array", "items": {"oneOf": [{"type": "boolean"}, {"enum": [0, 1]}]}},
    },
    "vector": {"type": "array", "items": _NUMBER},
    "cvector": {"type": "array", "items": _COMPLEX},
    "perms": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 1}}},
}


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = DEFAULT_TOL
    seed: int = 0
    samples: int = 200
    jobs: int = 1

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InputError("--tolerance must be positive")
        if self.samples < 0:
            raise InputError("--samples must be nonnegative")
        if self.jobs < 1:
            raise InputError("--jobs must be at least 1")


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class _Inputs:
    """Loads JSON inputs, validates them against a schema and records digests."""

    def __init__(self):
        self.digests: dict[str, str] = {}

    def load(self, path: str, schema: str):
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
        self.digests[path] = hashlib.sha256(raw).hexdigest()
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc.msg})") from None
        return self.check(data, schema, path)

    def inline(self, text: str, schema: str, label: str):
        """A flag value holding either inline JSON or a path to a JSON file."""
        if Path(text).is_file():
            return self.load(text, schema)
        self.digests[label] = hashlib.sha256(text.encode()).hexdigest()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{label}: invalid JSON ({exc.msg})") from None
        return self.check(data, schema, label)

    @staticmethod
    def check(data, schema: str, label: str):
        try:
            jsonschema.validate(data, SCHEMAS[schema])
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise InputError(f"{label}: schema violation at {where}: {exc.message}") from None
        return data


def _metric(inputs: _Inputs, path: str, cfg: RunConfig) -> FiniteMetricSpace:
    data = inputs.load(path, "metric")
    if "n" in data and len(data["d"]) != data["n"]:
        raise InputError(f"{path}: n = {data['n']} but d has {len(data['d'])} rows")
    return validate_metric(data["d"])


# Subcommand handlers return the JSON payload.

def cmd_metric_validate(args, cfg, inputs):
    space = _metric(inputs, args.file, cfg)
    return {"valid": True, "metric": space.to_json(), "levels": list(distance_levels(space))}


def cmd_metric_lipnorm(args, cfg, inputs):
    space = _metric(inputs, args.file, cfg)
    f = [decode_complex(v) for v in inputs.inline(args.f, "cvector", "--f")]
    return {"lipnorm": lipnorm(space, f)}


def cmd_magic_validate(args, cfg, inputs):
    a = decode_magic(inputs.load(args.file, "magic"), cfg.tolerance)
    return {"valid": True, "n": a.n, "dim": a.dim}


def cmd_magic_check_iso(args, cfg, inputs):
    space = _metric(inputs, args.metric, cfg)
    a = decode_magic(inputs.load(args.magic, "magic"), cfg.tolerance)
    return check_commutation(a, space, cfg.tolerance).to_json()


def cmd_transport_plan(args, cfg, inputs):
    alpha = inputs.inline(args.alpha, "vector", "--alpha")
    beta = inputs.inline(args.beta, "vector", "--beta")
    allowed = inputs.load(args.allowed, "allowed")
    problem = CouplingProblem(np.array(alpha, float), np.array(beta, float),
                              np.array(allowed, dtype=bool), cfg.tolerance)
    result = solve_transport(problem)
    hall = hall_check(problem)
    if isinstance(result, CutCertificate) != (hall is not None):
        raise InternalDisagreement("max-flow and Hall enumeration disagree on feasibility")
    if isinstance(result, CutCertificate):
        if not result.verify(problem):
            raise InternalDisagreement("min-cut certificate does not violate Hall's condition")
        return {"feasible": False, "certificate": result.to_json(), "hall_certificate": hall.to_json()}
    result.check(problem)
    return {"feasible": True, **result.to_json()}


def cmd_decide(args, cfg, inputs):
    space = _metric(inputs, args.metric, cfg)
    a = decode_magic(inputs.load(args.magic, "magic"), cfg.tolerance)
    verdict = decide_isometric(a, space, cfg.tolerance, samples=cfg.samples, seed=cfg.seed, jobs=cfg.jobs)
    w = verdict.witness
    if w is not None:
        # re-validate the emitted witness through its JSON form
        payload = w.to_json()
        state = decode_state(payload["omega"])
        f = [complex(*v) for v in payload["f"]]
        if lipdefect(a, space, state, f) <= cfg.tolerance:
            raise InternalDisagreement("serialized witness does not reproduce a positive defect")
    for cert in verdict.certificates:
        if not cert.holds():
            raise InternalDisagreement(f"certificate for pair ({cert.x + 1},{cert.y + 1}) fails")
    return verdict.to_json()


def cmd_group_isometries(args, cfg, inputs):
    return isometry_group(_metric(inputs, args.metric, cfg)).to_json()


def cmd_group_subgroup(args, cfg, inputs):
    space = _metric(inputs, args.metric, cfg)
    gens = [[s - 1 for s in g] for g in inputs.inline(args.generators, "perms", "--generators")]
    return largest_isometric_subgroup(gens, space).to_json()


DEMO_REP = (0.3, 0.9, -0.1, 1.0)


def cmd_m2cc_demo(args, cfg, inputs):
    if args.rep:
        rep = m2cc.decode_arep(inputs.load(args.rep, "arep"), cfg.tolerance)
    else:
        rep = m2cc.scalar_rep(*DEMO_REP, tol=cfg.tolerance)
    report = m2cc.admissibility_check(rep, samples=cfg.samples, seed=cfg.seed, tol=cfg.tolerance)
    if report.witness_b is not None:
        again = m2cc.defect6(rep, report.witness_state, report.witness_b)
        if again <= cfg.tolerance:
            raise InternalDisagreement("admissibility witness does not reproduce")
    return {
        "rep": {"dim": rep.dim, "relation_residuals": m2cc.relation_residuals(rep.x, rep.y, rep.z, rep.p)},
        "trace_preserved": m2cc.trace_preservation_check(rep, cfg.tolerance),
        "admissibility": report.to_json(),
    }


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tolerance", type=float, default=d(RunConfig.tolerance))
    parser.add_argument("--seed", type=int, default=d(RunConfig.seed))
    parser.add_argument("--samples", type=int, default=d(RunConfig.samples))
    parser.add_argument("--jobs", type=int, default=d(RunConfig.jobs))
    parser.add_argument("--output", default=d(None), help="write the report here instead of stdout")
    parser.add_argument("--timing", action="store_true", default=d(False),
                        help="add wall-clock seconds to the report (breaks byte reproducibility)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmi", description="Quantum metric isometry checks on finite metric spaces.")
    _common(parser, suppress=False)
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        _common(p, suppress=True)
        p.set_defaults(handler=handler)
        return p

    metric = groups.add_parser("metric").add_subparsers(dest="action", required=True)
    p = leaf(metric, "validate", cmd_metric_validate, "validate a distance matrix")
    p.add_argument("file")
    p = leaf(metric, "lipnorm", cmd_metric_lipnorm, "Lipschitz constant of a function")
    p.add_argument("file")
    p.add_argument("--f", required=True, help="JSON list of values (numbers or [re, im])")

    magic = groups.add_parser("magic").add_subparsers(dest="action", required=True)
    p = leaf(magic, "validate", cmd_magic_validate, "validate a magic unitary grid")
    p.add_argument("file")
    p = leaf(magic, "check-iso", cmd_magic_check_iso, "commutation of the grid with d")
    p.add_argument("--metric", required=True)
    p.add_argument("--magic", required=True)

    transport = groups.add_parser("transport").add_subparsers(dest="action", required=True)
    p = leaf(transport, "plan", cmd_transport_plan, "constrained coupling or Hall certificate")
    p.add_argument("--alpha", required=True, help="JSON list or file")
    p.add_argument("--beta", required=True, help="JSON list or file")
    p.add_argument("--allowed", required=True, help="JSON 0/1 or boolean matrix file")

    p = leaf(groups, "decide", cmd_decide, "decide 1-isometry with certificates or a witness")
    p.add_argument("--metric", required=True)
    p.add_argument("--magic", required=True)

    group = groups.add_parser("group").add_subparsers(dest="action", required=True)
    p = leaf(group, "isometries", cmd_group_isometries, "isometry group of a metric")
    p.add_argument("--metric", required=True)
    p = leaf(group, "subgroup", cmd_group_subgroup, "largest isometric subgroup of a generated group")
    p.add_argument("--metric", required=True)
    p.add_argument("--generators", required=True, help="JSON list of 1-based permutations, or file")

    m2 = groups.add_parser("m2cc").add_subparsers(dest="action", required=True)
    p = leaf(m2, "demo", cmd_m2cc_demo, "admissibility of a representation")
    p.add_argument("--rep", help="ARep JSON file (default: the scalar rep (0.3, 0.9, -0.1, 1))")
    return parser


def _plain(obj):
    """Make a payload JSON-safe: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(_plain(report), indent=2) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    output = None
    try:
        args = build_parser().parse_args(argv)
        output = args.output
        cfg = RunConfig(args.tolerance, args.seed, args.samples, args.jobs)
        inputs = _Inputs()
        start = time.perf_counter()
        payload = args.handler(args, cfg, inputs)
        report = {"command": argv, "config": asdict(cfg), "inputs": inputs.digests, "result": payload}
        if args.timing:
            report["timing"] = {"seconds": time.perf_counter() - start}
        _emit(report, output)
        return 0
    except QmiError as exc:
        code = 2 if isinstance(exc, ConsistencyError) else 1
        err = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "points", None):
            err["points"] = list(exc.points)
        print(str(exc), file=sys.stderr)
        if not isinstance(exc, UsageError):
            _emit({"command": argv, "error": err}, output)
        return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
