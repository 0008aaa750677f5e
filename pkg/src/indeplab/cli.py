"""Command-line interface: ``indeplab <command> [options]``.

Every command writes one JSON report (stdout, or ``--out FILE``).  Settings
come from built-in defaults, then ``--config FILE`` (a JSON object with
RunConfig keys), then explicit flags.

Exit codes: 0 success / Independent, 1 negative finding (NotWitnessed,
counterexample, failed bound), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import words as W
from .independence import lemmas as L
from .independence.bounds import bound_experiment, build_type_graph
from .independence.check import PreconditionError, is_independence_set, validate_verdict
from .independence.classify import (TYPES, ClassificationError, classify_pair,
                                    prediction_experiment)
from .independence.ramsey import FINAL_BOUND_ARGS, ramsey_upper
from .independence.search import search_max
from .reports import (ConfigError, RunConfig, make_report, read_report, verdict_from_json,
                      verdict_to_json, write_report)
from .towers import DepthError, SanovTower

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2

CONFIG_FLAGS = ("tower", "p", "q", "max_depth", "mode", "radius", "depth", "size_cap",
                "seed", "workers")


class UsageError(ValueError):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", metavar="FILE", help="JSON file with RunConfig keys")
    g.add_argument("--tower", choices=("integer", "sanov"))
    g.add_argument("--p", type=int)
    g.add_argument("--q", type=int)
    g.add_argument("--max-depth", dest="max_depth", type=int)
    g.add_argument("--mode", type=str.upper, choices=("RF", "FREE", "GENERIC"))
    g.add_argument("--radius", type=int)
    g.add_argument("--depth", type=int)
    g.add_argument("--size-cap", dest="size_cap", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--workers", type=int)
    g.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    g.add_argument("--timing", action="store_true", help="record wall-clock time in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indeplab",
                                     description="Finite-depth independence experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide whether a finite set is an independence set")
    _common(p)
    p.add_argument("--set", dest="elements", metavar="ELEMS",
                   help="comma-separated elements, e.g. '0,15' or '1,aabAAB'")
    p.add_argument("--set-file", metavar="FILE", help="file with one element per line")
    p.add_argument("--validate", metavar="REPORT",
                   help="re-validate the witnesses stored in a check report")

    p = sub.add_parser("search", help="largest independence sets in a ball")
    _common(p)
    p.add_argument("--anchor", help="only explore sets containing this element")
    p.add_argument("--max-checks", type=int)

    p = sub.add_parser("classify", help="pair types and membership predictions")
    _common(p)
    p.add_argument("--pair", metavar="S1,S2", help="classify one pair")
    p.add_argument("--sample", type=int, metavar="N",
                   help="sample N witnessed pairs and compare predictions with brute force")
    p.add_argument("--sketches", type=int, default=20)
    p.add_argument("--class-depth", type=int, default=10,
                   help="tower depth used for the coset side conditions")

    p = sub.add_parser("verify", help="check a lemma on concrete instances")
    _common(p)
    p.add_argument("lemmas", nargs="+", metavar="LEMMA",
                   help=f"one of {', '.join(L.LEMMAS)}, or 'all'")
    p.add_argument("--exhaustive", action="store_true",
                   help="exhaustive instances only (no random sampling)")
    p.add_argument("--samples", type=int)
    p.add_argument("--max-level", type=int)

    p = sub.add_parser("bounds", help="largest all-type independence sets")
    _common(p)
    p.add_argument("types", nargs="+", metavar="TYPE", help=f"one of {', '.join(TYPES)}, or 'all'")
    p.add_argument("--max-checks", type=int)
    p.add_argument("--class-depth", type=int, default=10)

    p = sub.add_parser("ramsey", help="upper bound for a multicolour Ramsey number")
    _common(p)
    p.add_argument("args", nargs="*", type=int, metavar="C")
    p.add_argument("--final", action="store_true", help="use the 18 per-type constants")
    return parser


def load_config(args: argparse.Namespace, **defaults) -> RunConfig:
    data: dict = dict(defaults)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        data.update(loaded)
    for key in CONFIG_FLAGS:
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    return RunConfig.from_dict(data)


def _parse_elements(text: str, tower) -> list:
    parts = [x.strip() for x in text.replace("\n", ",").split(",")]
    parts = [x for x in parts if x]
    if not parts:
        raise UsageError("empty element list")
    return [tower.parse_element(x) for x in parts]


def _emit(args, command, cfg, findings, t0, exhausted=False) -> None:
    seconds = time.perf_counter() - t0 if args.timing else None
    write_report(make_report(command, cfg, findings, seconds, exhausted), args.out)


# ------------------------------------------------------------------ commands

def cmd_check(args) -> int:
    t0 = time.perf_counter()
    if args.validate:
        report = read_report(args.validate)
        cfg = RunConfig.from_dict(report["config"])
        tower = cfg.make_tower()
        M, verdict = verdict_from_json(report["findings"], tower)
        ok, why = validate_verdict(M, cfg.target(tower), verdict)
        _emit(args, "check-validate", cfg, {"source": args.validate, "valid": ok, "reason": why,
                                            "witnesses": len(verdict.witnesses)}, t0)
        return EXIT_OK if ok else EXIT_NEGATIVE
    cfg = load_config(args)
    tower = cfg.make_tower()
    if args.set_file:
        with open(args.set_file, encoding="utf-8") as fh:
            M = _parse_elements(fh.read(), tower)
    elif args.elements:
        M = _parse_elements(args.elements, tower)
    else:
        raise UsageError("give --set, --set-file or --validate")
    verdict = is_independence_set(M, cfg.target(tower), cfg.depth, cfg.workers)
    _emit(args, "check", cfg, verdict_to_json(M, tower, verdict), t0)
    return EXIT_OK if verdict.independent else EXIT_NEGATIVE


def cmd_search(args) -> int:
    t0 = time.perf_counter()
    cfg = load_config(args)
    tower = cfg.make_tower()
    anchor = tower.parse_element(args.anchor) if args.anchor else None
    res = search_max(cfg.target(tower), cfg.radius, cfg.depth, cfg.size_cap, anchor=anchor,
                     workers=cfg.workers, max_checks=args.max_checks)
    fmt = tower.format_element
    findings = {
        "k_star": res.k_star,
        "count_by_size": {str(k): len(v) for k, v in sorted(res.by_size.items())},
        "largest_sets": [[fmt(s) for s in m] for m in res.sets(res.k_star)],
        "maximal_count_by_size": _count_sizes(res.maximal),
        "ball_size": len(res.elements),
        "checks": res.checks,
        "size_cap_reached": res.size_cap_reached,
        "anchor": fmt(anchor) if anchor is not None else None,
    }
    _emit(args, "search", cfg, findings, t0, res.budget_exhausted)
    return EXIT_OK


def _count_sizes(sets) -> dict:
    out: dict = {}
    for s in sets:
        out[str(len(s))] = out.get(str(len(s)), 0) + 1
    return dict(sorted(out.items(), key=lambda kv: int(kv[0])))


def cmd_classify(args) -> int:
    t0 = time.perf_counter()
    cfg = load_config(args)
    tower = cfg.make_tower()
    if cfg.mode != "FREE" or cfg.tower != "sanov":
        raise UsageError("classify works on FREE targets over the Sanov tower")
    class_tower = SanovTower(cfg.p, max_depth=max(args.class_depth, tower.max_depth))
    target = cfg.target(tower)
    if args.pair:
        s1, s2 = _parse_elements(args.pair, tower)
        matches = classify_pair(s1, s2, target, cfg.depth, class_tower)
        findings = {"pair": [W.format_word(s1), W.format_word(s2)],
                    "matches": [m.to_json() for m in matches]}
        _emit(args, "classify", cfg, findings, t0)
        return EXIT_OK if matches else EXIT_NEGATIVE
    if args.sample:
        rep = prediction_experiment(target, cfg.depth, cfg.radius, args.sample, args.sketches,
                                    cfg.seed, class_tower)
        _emit(args, "classify", cfg, rep.to_json(), t0)
        return EXIT_OK if rep.passed else EXIT_NEGATIVE
    raise UsageError("give --pair or --sample")


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    names = list(L.LEMMAS) if [n.lower() for n in args.lemmas] == ["all"] else \
        [L.canonical_name(n) for n in args.lemmas]
    cfg = load_config(args)
    reports = []
    for name in names:
        budget = L.LemmaBudget(depth=cfg.depth, seed=cfg.seed)
        if args.samples is not None:
            budget.samples = args.samples
        if args.exhaustive:
            budget.samples = 0
        if args.max_level is not None:
            budget.max_level = args.max_level
        # each lemma runs on its natural tower unless one was asked for
        tower = cfg.make_tower() if (args.tower or args.config) else L.default_tower(name)
        if cfg.depth > tower.max_depth:
            raise ConfigError(f"depth {cfg.depth} exceeds the tower's max_depth {tower.max_depth}")
        reports.append(L.verify_lemma(name, tower, budget).to_json())
    total = sum(r["counterexample_count"] for r in reports)
    _emit(args, "verify", cfg, {"lemmas": reports, "counterexamples": total}, t0)
    return EXIT_OK if total == 0 else EXIT_NEGATIVE


def cmd_bounds(args) -> int:
    t0 = time.perf_counter()
    kinds = list(TYPES) if [k.upper() for k in args.types] == ["ALL"] else [k.upper() for k in args.types]
    for k in kinds:
        if k not in TYPES:
            raise UsageError(f"unknown type {k!r}")
    cfg = load_config(args, radius=10, mode="FREE")
    if cfg.mode != "FREE" or cfg.tower != "sanov":
        raise UsageError("bounds works on FREE targets over the Sanov tower")
    tower = cfg.make_tower()
    class_tower = SanovTower(cfg.p, max_depth=max(args.class_depth, tower.max_depth))
    graph = build_type_graph(cfg.radius, tower, cfg.depth, class_tower)
    reports = [bound_experiment(k, graph=graph, max_checks=args.max_checks) for k in kinds]
    exhausted = any(r.budget_exhausted for r in reports)
    findings = {"types": [r.to_json() for r in reports], "candidates": len(graph.elements) - 1}
    _emit(args, "bounds", cfg, findings, t0, exhausted)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_NEGATIVE


def cmd_ramsey(args) -> int:
    t0 = time.perf_counter()
    values = list(FINAL_BOUND_ARGS) if args.final else args.args
    if not values:
        raise UsageError("give the arguments c1 .. ck or --final")
    value = ramsey_upper(*values)
    if args.out:
        print(value)
    _emit(args, "ramsey", None, {"args": values, "value": str(value),
                                 "digits": len(str(value))}, t0)
    return EXIT_OK


COMMANDS = {"check": cmd_check, "search": cmd_search, "classify": cmd_classify,
            "verify": cmd_verify, "bounds": cmd_bounds, "ramsey": cmd_ramsey}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError, PreconditionError, DepthError, ClassificationError,
            W.WordError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"indeplab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
