"""Report rows and their CSV / JSON serialisation."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

CSV_COLUMNS = ("instance_id", "n_arcs", "openings", "check", "omega0", "value", "std_error",
               "margin", "passed", "seed", "runtime_s")


@dataclass
class ReportRow:
    instance_id: int
    n_arcs: int
    openings: tuple[float, ...]
    check: str
    omega0: float
    value: float
    std_error: float
    margin: float
    passed: bool
    seed: int
    runtime_s: float
    tolerance: float = 0.0
    quantities: dict = field(default_factory=dict)
    error: str = ""

    @property
    def key(self):
        return (self.instance_id, self.check)

    def csv_record(self) -> list[str]:
        return [str(self.instance_id), str(self.n_arcs), ";".join(_num(a) for a in self.openings),
                self.check, _num(self.omega0), _num(self.value), _num(self.std_error),
                _num(self.margin), "true" if self.passed else "false", str(self.seed),
                _num(self.runtime_s)]

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id, "n_arcs": self.n_arcs, "openings": list(self.openings),
            "check": self.check, "omega0": _json_num(self.omega0), "value": _json_num(self.value),
            "std_error": _json_num(self.std_error), "margin": _json_num(self.margin),
            "tolerance": _json_num(self.tolerance), "passed": self.passed, "seed": self.seed,
            "runtime_s": self.runtime_s, "error": self.error,
            "quantities": {k: [_json_num(v), _json_num(e)] for k, (v, e) in sorted(self.quantities.items())},
        }


def _num(x: float) -> str:
    # repr round-trips doubles exactly
    return repr(float(x))


def _json_num(x: float):
    x = float(x)
    return x if math.isfinite(x) else str(x)


def write_csv(rows, path) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(r.csv_record())


def write_json(rows, path, config: dict) -> None:
    doc = {"config": config, "passed": all(r.passed for r in rows),
           "rows": [r.to_dict() for r in rows]}
    with open(Path(path), "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_csv(path) -> list[dict]:
    with open(Path(path), newline="") as fh:
        return list(csv.DictReader(fh))
