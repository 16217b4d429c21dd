"""Command line front end.

    qgraph regularity --config system.json
    qgraph roots --step 0.3 0.5 --out roots.csv
    qgraph converge --config scan.json --threads 4

Exit status: 0 ok, 2 invalid configuration, 3 system not regular where the
task needs it, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import jsonschema

from . import tables
from .errors import EnumerationCapError, NotRegularError, NumericalFailure
from .explicit import ExpansionConfig, convergence_scan
from .graph_model import ScalingChain, StepGraph, system_from_json, to_trig
from .orbits import ENUMERATION_CAP, code_to_word, lyndon_codes, orbit_classes, orbit_stats
from .spectral import TrigPolynomial, find_root_in_zone, regularity, root_zone

TASKS = ("regularity", "roots", "orbits", "solve", "converge")

EXIT_OK, EXIT_CONFIG, EXIT_NOT_REGULAR, EXIT_NUMERICAL = 0, 2, 3, 4

_int_list = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1}

CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["system"],
    "properties": {
        "task": {"enum": list(TASKS)},
        "system": {
            "type": "object",
            "additionalProperties": False,
            "minProperties": 1,
            "maxProperties": 1,
            "properties": {
                "step": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["b", "lambda"],
                    "properties": {"b": {"type": "number"}, "lambda": {"type": "number"}},
                },
                "regions": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["length", "lambda"],
                        "properties": {
                            "length": {"type": "number"},
                            "lambda": {"type": "number"},
                        },
                    },
                },
                "trig": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["S0"],
                    "properties": {
                        "S0": {"type": "number"},
                        "gamma0": {"type": ["number", "string"]},
                        "terms": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "additionalProperties": False,
                                "required": ["a", "S"],
                                "properties": {
                                    "a": {"type": "number"},
                                    "S": {"type": "number"},
                                    "gamma": {"type": ["number", "string"]},
                                },
                            },
                        },
                    },
                },
            },
        },
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "n_max": {"type": "integer", "minimum": 1},
                "n_list": _int_list,
                "q_max": {"type": "integer", "minimum": 0},
                "q_list": _int_list,
                "nu_max": {"type": "integer", "minimum": 1},
                "nu_tail_tol": {"type": "number", "minimum": 0},
                "use_grouped": {"type": "boolean"},
                "order": {"enum": ["total", "prime"]},
                "tol": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "path": {"type": "string"},
                "format": {"enum": ["csv", "json"]},
            },
        },
    },
}


class ConfigError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment description (JSON)")
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--tol", type=float, help="relative bisection tolerance (default 1e-12)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument(
        "--step", nargs=2, type=float, metavar=("B", "LAMBDA"),
        help="step graph shortcut, overrides the configured system",
    )

    parser = argparse.ArgumentParser(prog="qgraph", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="task", required=True)
    sub.add_parser("regularity", parents=[common], help="alpha, u and the separator offset")
    p = sub.add_parser("roots", parents=[common], help="bisection roots with their zones")
    p.add_argument("--n-max", type=int)
    p = sub.add_parser("orbits", parents=[common], help="prime periodic orbits of the step graph")
    p.add_argument("--q-max", type=int)
    p.add_argument("--grouped", action="store_true", help="emit (n1, n2, j) classes")
    p = sub.add_parser("solve", parents=[common], help="explicit expansion for one root")
    p.add_argument("-n", type=int)
    p.add_argument("--q-max", type=int)
    p = sub.add_parser("converge", parents=[common], help="relative error against orbit length")
    p.add_argument("--q-max", type=int)
    return parser


def load_config(args: argparse.Namespace) -> dict:
    cfg: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
    if args.step is not None:
        cfg["system"] = {"step": {"b": args.step[0], "lambda": args.step[1]}}
    if "system" not in cfg:
        raise ConfigError("no system given: use --config or --step")

    params = dict(cfg.get("params", {}))
    for flag in ("n_max", "q_max", "n"):
        value = getattr(args, flag, None)
        if value is not None:
            params[flag] = value
    if getattr(args, "grouped", False):
        params["use_grouped"] = True
    if args.tol is not None:
        params["tol"] = args.tol
    output = dict(cfg.get("output", {}))
    if args.out:
        output["path"] = args.out
    if args.format:
        output["format"] = args.format
    cfg = {**cfg, "params": params, "output": output}

    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message}") from exc
    if cfg.get("task", args.task) != args.task:
        raise ConfigError(f"config is for task {cfg['task']!r}, not {args.task!r}")
    return cfg


def _system(cfg):
    try:
        return system_from_json(cfg["system"])
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"invalid system: {exc}") from exc


def _step_graph(system) -> StepGraph:
    if isinstance(system, StepGraph):
        return system
    if isinstance(system, ScalingChain):
        try:
            return system.as_step_graph()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError("this task needs a step graph, not a bare trigonometric polynomial")


def _expansion(params, q_max: int) -> ExpansionConfig:
    try:
        return ExpansionConfig(
            q_max,
            params.get("nu_max", 50),
            params.get("nu_tail_tol", 0.0),
            params.get("use_grouped", False),
            params.get("order", "total"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _regular_trig(system) -> tuple[TrigPolynomial, Any]:
    trig = to_trig(system)
    report = regularity(trig)
    report.require_regular()
    return trig, report


def task_regularity(system, params):
    trig = to_trig(system)
    rep = regularity(trig)
    row = {
        "S0": trig.S0, "alpha": rep.alpha, "regular": rep.regular, "u": rep.u,
        "gamma": None if rep.gamma is None else float(rep.gamma), "mu": rep.mu,
        "n_terms": len(trig.terms),
    }
    return [row], list(row)


def task_roots(system, params):
    trig, report = _regular_trig(system)
    tol = params.get("tol", 1e-12)
    n_values = params.get("n_list") or range(1, params.get("n_max", 10) + 1)
    rows = []
    for n in n_values:
        if n < 1:
            raise ConfigError("root indices start at 1")
        zone = root_zone(report, n)
        k = find_root_in_zone(trig, report, n, tol)
        margin = min(k - zone.sep_lo, zone.sep_hi - k) - zone.u
        rows.append({"n": n, "sep_lo": zone.sep_lo, "sep_hi": zone.sep_hi, "k_n": k, "margin": margin})
    return rows, ["n", "sep_lo", "sep_hi", "k_n", "margin"]


def task_orbits(system, params):
    graph = _step_graph(system)
    q_max = params.get("q_max", 6)
    if q_max < 1:
        raise ConfigError("q_max must be at least 1")
    rows = []
    if params.get("use_grouped", False):
        for q in range(1, q_max + 1):
            for c in orbit_classes(q):
                rows.append({
                    "q": q, "n1": c.n1, "n2": c.n2, "j": c.j, "multiplicity": c.multiplicity,
                    "sigma": c.sigma, "tau": c.tau, "chi": c.chi,
                    "S_p": c.action(graph), "A_p": c.amplitude(graph),
                })
        return rows, ["q", "n1", "n2", "j", "multiplicity", "sigma", "tau", "chi", "S_p", "A_p"]
    if q_max > ENUMERATION_CAP:
        raise ConfigError(f"q_max = {q_max} exceeds the enumeration cap {ENUMERATION_CAP}; use --grouped")
    for q in range(1, q_max + 1):
        for code in lyndon_codes(q):
            o = orbit_stats(code_to_word(code, q), graph)
            rows.append({
                "word": o.word, "q": o.q, "n1": o.n1, "n2": o.n2, "sigma": o.sigma,
                "tau": o.tau, "chi": o.chi, "S_p": o.action, "A_p": o.amplitude,
            })
    return rows, ["word", "q", "n1", "n2", "sigma", "tau", "chi", "S_p", "A_p"]


def task_solve(system, params, threads):
    _regular_trig(system)
    graph = _step_graph(system)
    n = params.get("n", 1)
    q_max = params.get("q_max", 20)
    cfg = _expansion(params, max(1, q_max))
    recs = convergence_scan(graph, [n], [q_max], cfg, params.get("tol", 1e-12), threads)
    return tables.error_rows(recs), list(tables.ERROR_COLUMNS)


def task_converge(system, params, threads):
    _regular_trig(system)
    graph = _step_graph(system)
    n_list = params.get("n_list", [1, 10, 100])
    q_list = params.get("q_list") or list(range(1, params.get("q_max", 25) + 1))
    if not q_list:
        raise ConfigError("empty q range")
    cfg = _expansion(params, max(1, max(q_list)))
    recs = convergence_scan(graph, n_list, q_list, cfg, params.get("tol", 1e-12), threads)
    return tables.error_rows(recs), list(tables.ERROR_COLUMNS)


def run(task: str, cfg: dict, threads: int = 1) -> int:
    system = _system(cfg)
    params = cfg["params"]
    if task in ("solve", "converge"):
        rows, columns = (task_solve if task == "solve" else task_converge)(system, params, threads)
    else:
        rows, columns = {"regularity": task_regularity, "roots": task_roots, "orbits": task_orbits}[task](system, params)
    out = cfg["output"]
    path = out.get("path")
    text = tables.write_table(rows, columns, path, out.get("format", "csv"))
    if path is None:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        cfg = load_config(args)
        return run(args.task, cfg, args.threads)
    except (ConfigError, EnumerationCapError) as exc:
        print(f"qgraph: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotRegularError as exc:
        print(f"qgraph: system is not regular: {exc}", file=sys.stderr)
        return EXIT_NOT_REGULAR
    except NumericalFailure as exc:
        print(f"qgraph: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"qgraph: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
