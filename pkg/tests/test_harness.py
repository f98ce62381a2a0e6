import json
import math

import numpy as np
import pytest

from vellingcheck.geometry import OPENING_CAP, GeometryError
from vellingcheck.harness import (CSV_COLUMNS, ExperimentConfig, RandomSource, config_from_dict,
                                  exit_status, random_partition, render_svg, run_suite)
from vellingcheck.harness.cli import main
from vellingcheck.harness.instances import config_instances
from vellingcheck.harness.report import read_csv

SMALL = {"n": 4000, "angles": 128, "h": 1 / 64, "probes": 8, "ray_samples": 6}


def write_config(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def test_random_partition_bounds_and_determinism():
    for s in range(1000):
        n = 3 + s % 6
        p = random_partition(n, 0.1, s)
        ops = np.array(p.openings)
        assert len(ops) == n
        assert math.fsum(ops) == pytest.approx(math.pi, abs=1e-12)
        assert ops.min() >= 0.1 - 1e-12 and ops.max() <= OPENING_CAP
    a, b = random_partition(5, 0.2, 42), random_partition(5, 0.2, 42)
    assert a.openings == b.openings


def test_random_partition_rejects():
    with pytest.raises(ValueError):
        random_partition(2, 0.1, 0)
    with pytest.raises(ValueError):
        random_partition(8, 0.4, 0)
    with pytest.raises(GeometryError):
        random_partition(3, 1.04, 0)


def test_config_instances_order():
    cfg = ExperimentConfig(openings=((1.2, 1.0, math.pi - 2.2),), random=RandomSource(count=4, seed=3))
    inst = config_instances(cfg)
    assert [i for i, _ in inst] == [0, 1, 2, 3, 4]
    assert inst[0][1].openings[0] == 1.2
    again = config_instances(cfg)
    assert all(a[1].openings == b[1].openings for a, b in zip(inst, again))


@pytest.mark.parametrize("doc", [
    {"suite": "nope"},
    {"openings": [[1.0, 1.0]]},
    {"random": {"count": 0}},
    {"solver": {"n": -5}},
    {"unknown": 1},
    {"random": {"count": 3, "arcs": [5, 3]}},
])
def test_schema_errors(doc):
    with pytest.raises(ValueError):
        config_from_dict(doc)


def test_config_override():
    cfg = config_from_dict({"suite": "theorem", "solver": {"n": 1000}})
    cfg2 = cfg.override(n=50, seed=9, out=None)
    assert cfg2.solver.n == 50 and cfg2.seed == 9 and cfg2.out == cfg.out
    assert cfg2.options.seed == 9 and cfg2.options.workers == 1
    assert cfg.checks == ("theorem",)


def test_exit_codes(tmp_path):
    ok = write_config(tmp_path / "ok.json", {"suite": "corollary", "openings": [[math.pi / 4] * 4],
                                             "solver": SMALL})
    assert main(["verify", "corollary", "--config", ok, "--out", str(tmp_path / "a")]) == 0
    # a single walk has zero standard error, so the combined tolerance cannot absorb its error
    bad = write_config(tmp_path / "bad.json", {"suite": "solver-selftest", "solver": {"n": 1, "h": 0.0625}})
    assert main(["verify", "solver-selftest", "--config", bad, "--out", str(tmp_path / "b")]) == 1
    broken = write_config(tmp_path / "broken.json", {"suite": 3})
    assert main(["verify", "theorem", "--config", broken]) == 2
    assert main(["verify", "theorem", "--config", str(tmp_path / "missing.json")]) == 2


def test_csv_header_and_rows(tmp_path):
    cfg = ExperimentConfig(suite="theorem", openings=((1.2, 0.7, 0.7, math.pi - 2.6),),
                           solver=ExperimentConfig().solver.__class__(**SMALL), out=str(tmp_path))
    rows = run_suite(cfg)
    header = (tmp_path / "report.csv").read_text().splitlines()[0]
    assert tuple(header.split(",")) == CSV_COLUMNS
    recs = read_csv(tmp_path / "report.csv")
    assert len(recs) == len(rows) == 1
    assert recs[0]["openings"].count(";") == 3
    assert float(recs[0]["value"]) == rows[0].value
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["passed"] == (exit_status(rows) == 0)
    assert doc["rows"][0]["check"] == "theorem"


def test_reports_identical_across_workers(tmp_path):
    doc = {"suite": "all", "random": {"count": 3, "arcs": [3, 5], "seed": 4}, "solver": SMALL, "seed": 2}
    cfg = write_config(tmp_path / "c.json", doc)
    outs = []
    for w in (1, 3):
        out = tmp_path / f"w{w}"
        main(["verify", "all", "--config", cfg, "--workers", str(w), "--out", str(out), "--no-timings"])
        outs.append(((out / "report.csv").read_bytes(), (out / "report.json").read_bytes()))
    assert outs[0][0] == outs[1][0]
    assert outs[0][1] == outs[1][1]


def test_svg_deterministic(tmp_path):
    from vellingcheck.geometry import make_partition
    p = make_partition([1.2, 0.7, 0.7, math.pi - 2.6])
    render_svg(p, None, tmp_path / "a.svg")
    render_svg(p, None, tmp_path / "b.svg")
    a = (tmp_path / "a.svg").read_bytes()
    assert a == (tmp_path / "b.svg").read_bytes()
    assert a.lstrip().startswith(b"<?xml") and b"<svg" in a


def test_render_cli(tmp_path):
    cfg = write_config(tmp_path / "r.json", {"openings": [[1.2, 0.7, 0.7, math.pi - 2.6]], "solver": {"angles": 128}})
    out = tmp_path / "f.svg"
    assert main(["render", "--config", cfg, "--out", str(out), "--field", "u"]) == 0
    assert out.stat().st_size > 1000
    empty = write_config(tmp_path / "e.json", {})
    assert main(["render", "--config", empty, "--out", str(out)]) == 2
