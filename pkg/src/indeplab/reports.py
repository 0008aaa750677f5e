"""Run configuration and JSON report documents.

A report is one JSON object with sorted keys, so identical inputs give
byte-identical files.  Wall-clock time is only recorded on request.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from typing import Any, Sequence

from . import __version__
from .boundary import PrefixConstraintSet
from .independence.check import Verdict, Witness, pattern_text
from .independence.targets import FREE, GENERIC, MODES, Block, TargetPair
from .towers import CosetId, QuotientTower, make_tower

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    tower: str = "sanov"
    p: int = 3
    q: int = 5
    max_depth: int | None = None  # None: the tower's default
    mode: str = FREE
    radius: int = 8
    depth: int = 3
    size_cap: int = 6
    seed: int = 0
    workers: int = 1
    blocks: list | None = None  # GENERIC mode only

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        out = asdict(self)
        if out["blocks"] is None:
            del out["blocks"]
        return out

    def validate(self) -> None:
        self.mode = self.mode.upper()
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}")
        if self.tower not in ("integer", "sanov"):
            raise ConfigError("tower must be 'integer' or 'sanov'")
        for name in ("radius", "depth", "size_cap", "workers"):
            if getattr(self, name) < (0 if name == "radius" else 1):
                raise ConfigError(f"{name} is out of range")
        if self.max_depth is not None and self.depth > self.max_depth:
            raise ConfigError(f"depth {self.depth} exceeds max_depth {self.max_depth}")

    def make_tower(self) -> QuotientTower:
        kwargs = {}
        if self.max_depth is not None:
            kwargs["max_depth"] = self.max_depth
        elif self.tower == "sanov" and self.depth > 4:
            kwargs["max_depth"] = self.depth
        tower = make_tower(self.tower, self.p, self.q, **kwargs)
        if self.depth > tower.max_depth:
            raise ConfigError(f"depth {self.depth} exceeds the tower's max_depth {tower.max_depth}")
        return tower

    def target(self, tower: QuotientTower | None = None) -> TargetPair:
        tower = tower or self.make_tower()
        if self.mode != GENERIC:
            return TargetPair(tower, self.mode)
        if not self.blocks:
            raise ConfigError("GENERIC mode needs 'blocks' in the config file")
        blocks = []
        for b in self.blocks:
            bnd = b.get("boundary")
            blocks.append(Block(int(b["level"]), CosetId.from_str(b["coset"]),
                                PrefixConstraintSet.from_json(bnd) if bnd else None))
        return TargetPair(tower, GENERIC, blocks)


def make_report(command: str, config: RunConfig | None, findings: dict,
                seconds: float | None = None, budget_exhausted: bool = False) -> dict:
    report: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "config": config.to_dict() if config is not None else None,
        "findings": findings,
        "budget_exhausted": budget_exhausted,
    }
    if seconds is not None:
        report["wall_clock_seconds"] = round(seconds, 3)
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_report(report: dict, path: str | None) -> None:
    text = dumps(report)
    if path is None or path == "-":
        print(text, end="")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_report(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported report schema {data.get('schema_version')!r}")
    return data


def verdict_to_json(M: Sequence, tower: QuotientTower, verdict: Verdict) -> dict:
    return {
        "set": [tower.format_element(s) for s in M],
        "status": verdict.label(),
        "independent": verdict.independent,
        "depth": verdict.depth,
        "failed_pattern": pattern_text(verdict.failed_pattern) if verdict.failed_pattern else None,
        "witnesses": [verdict.witnesses[p].to_json() for p in sorted(verdict.witnesses, reverse=True)],
    }


def verdict_from_json(data: dict, tower: QuotientTower) -> tuple[list, Verdict]:
    M = [tower.parse_element(s) for s in data["set"]]
    ws = [Witness.from_json(w) for w in data.get("witnesses", [])]
    status = "Independent" if data.get("independent") else "NotWitnessed"
    return M, Verdict(status, int(data["depth"]), {w.pattern: w for w in ws})
