"""Experiment configuration: a JSON document validated against :data:`SCHEMA`."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

import jsonschema

from ..geometry import OPENING_CAP
from ..velling import SolverOptions

SUITES = ("theorem", "conjecture", "lemma", "flux", "regularity", "corollary", "solver-selftest")

# checks run by each suite; "all" runs every one of them
SUITE_CHECKS = {
    "theorem": ("theorem",),
    "conjecture": ("conjecture",),
    "lemma": ("lemma",),
    "flux": ("flux",),
    "regularity": ("regularity", "comparison"),
    "corollary": ("corollary",),
    "solver-selftest": (),
}

_POS = {"type": "number", "exclusiveMinimum": 0}
_POS_INT = {"type": "integer", "minimum": 1}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "suite": {"enum": list(SUITES) + ["all"]},
        "openings": {
            "type": "array",
            "items": {"type": "array", "minItems": 3,
                      "items": {"type": "number", "exclusiveMinimum": 0, "maximum": OPENING_CAP}},
        },
        "random": {
            "type": "object",
            "additionalProperties": False,
            "required": ["count"],
            "properties": {
                "count": _POS_INT,
                "arcs": {"type": "array", "items": {"type": "integer", "minimum": 3},
                         "minItems": 2, "maxItems": 2},
                "min_opening": {"type": "number", "minimum": 1e-2},
                "seed": {"type": "integer", "minimum": 0},
            },
        },
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "eps": _POS, "n": _POS_INT, "h": _POS, "angles": {"type": "integer", "minimum": 16},
                "dt": _POS, "spacing": _POS, "offset": _POS, "fd_tol": _POS, "probes": _POS_INT,
                "ray_samples": _POS_INT, "delta": _POS, "flux_rel_tol": _POS,
            },
        },
        "seed": {"type": "integer", "minimum": 0},
        "workers": _POS_INT,
        "out": {"type": "string"},
        "render": {"type": "boolean"},
        "timings": {"type": "boolean"},
    },
}


@dataclass(frozen=True)
class RandomSource:
    count: int = 10
    arcs: tuple[int, int] = (3, 8)
    min_opening: float = 0.1
    seed: int = 0


@dataclass(frozen=True)
class ExperimentConfig:
    suite: str = "all"
    openings: tuple[tuple[float, ...], ...] = ()
    random: Optional[RandomSource] = None
    solver: SolverOptions = field(default_factory=SolverOptions)
    seed: int = 0
    workers: int = 1
    out: str = "results"
    render: bool = False
    timings: bool = True

    def __post_init__(self):
        if self.suite not in SUITES and self.suite != "all":
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.random is not None:
            lo, hi = self.random.arcs
            if lo > hi:
                raise ValueError("random arc-count range is empty")
            if hi * self.random.min_opening >= math.pi:
                raise ValueError("min_opening too large for the arc-count range")
        for op in self.openings:
            if any(not 0 < a <= OPENING_CAP for a in op):
                raise ValueError(f"openings must lie in (0, {OPENING_CAP}]")

    @property
    def checks(self) -> tuple[str, ...]:
        if self.suite == "all":
            return tuple(c for s in SUITES for c in SUITE_CHECKS[s])
        return SUITE_CHECKS[self.suite]

    @property
    def selftest(self) -> bool:
        return self.suite in ("all", "solver-selftest")

    @property
    def options(self) -> SolverOptions:
        """Solver options carrying the global seed (WoS runs single-threaded inside the pool)."""
        return replace(self.solver, seed=self.seed, workers=1)

    def override(self, **kw) -> "ExperimentConfig":
        """Apply CLI overrides; ``None`` values are ignored."""
        kw = {k: v for k, v in kw.items() if v is not None}
        solver_keys = {k: kw.pop(k) for k in list(kw) if k in ("n", "eps", "h", "angles")}
        cfg = replace(self, **kw)
        if solver_keys:
            cfg = replace(cfg, solver=replace(cfg.solver, **solver_keys))
        return cfg

    def to_dict(self) -> dict:
        """Settings that determine the results; output location, thread count and rendering are left out
        so that reports for the same seed are identical however they were produced."""
        d = asdict(self)
        for k in ("workers", "out", "render"):
            d.pop(k)
        d["solver"] = {k: v for k, v in d["solver"].items() if k not in ("seed", "workers")}
        if self.random is None:
            d.pop("random")
        return d


def config_from_dict(doc: dict) -> ExperimentConfig:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValueError(f"invalid configuration at {where}: {exc.message}") from None
    doc = dict(doc)
    if "random" in doc:
        r = dict(doc["random"])
        if "arcs" in r:
            r["arcs"] = tuple(r["arcs"])
        doc["random"] = RandomSource(**r)
    if "openings" in doc:
        doc["openings"] = tuple(tuple(float(a) for a in op) for op in doc["openings"])
    if "solver" in doc:
        doc["solver"] = SolverOptions(**doc["solver"])
    return ExperimentConfig(**doc)


def load_config(path) -> ExperimentConfig:
    with open(Path(path)) as fh:
        return config_from_dict(json.load(fh))
