"""Suite execution: instances x checks on a worker pool, rows sorted before writing."""

from __future__ import annotations

import logging
import math
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .. import velling
from ..geometry import ArcPartition
from .config import ExperimentConfig
from .instances import config_instances
from .report import ReportRow, write_csv, write_json
from .selftest import solver_selftest

log = logging.getLogger(__name__)

SELFTEST_ID = -1

_INSTANCE_CHECKS = {
    "theorem": velling.check_theorem,
    "conjecture": velling.check_conjecture,
    "lemma": velling.check_lemma,
    "flux": velling.check_flux,
    "regularity": velling.check_phi_regularity,
    "comparison": velling.check_u,
}


def _row(iid: int, p, check: str, rep, timings: bool, omega0=None) -> ReportRow:
    ops = tuple(p.openings) if isinstance(p, ArcPartition) else tuple(p)
    w0 = velling.omega0(p) if isinstance(p, ArcPartition) else (math.nan if omega0 is None else omega0)
    return ReportRow(iid, len(ops) if isinstance(p, ArcPartition) else 0, ops, check, w0,
                     rep.value, rep.std_error, rep.margin, bool(rep.passed), int(rep.seed),
                     rep.runtime if timings else 0.0, rep.tolerance, dict(rep.quantities))


def _error_row(iid: int, p: ArcPartition, check: str, exc: BaseException) -> ReportRow:
    nan = math.nan
    msg = "".join(traceback.format_exception_only(type(exc), exc)).strip()
    return ReportRow(iid, len(p.openings), tuple(p.openings), check, velling.omega0(p),
                     nan, nan, nan, False, 0, 0.0, error=msg)


def run_instance(iid: int, p: ArcPartition, checks, opts: velling.SolverOptions,
                 timings: bool = True) -> list[ReportRow]:
    """All selected checks for one partition; failures become rows, never exceptions."""
    rows = []
    inst = None
    build_error = None
    for check in checks:
        try:
            if check == "corollary":
                rep = velling.check_corollary(p, opts, iid)
            else:
                if inst is None and build_error is None:
                    try:
                        inst = velling.build_instance(p, angles=opts.angles)
                    except Exception as exc:  # reported on every dependent row
                        build_error = exc
                if build_error is not None:
                    raise build_error
                rep = _INSTANCE_CHECKS[check](inst, opts, instance_id=iid)
            rows.append(_row(iid, p, check, rep, timings))
        except Exception as exc:
            log.warning("instance %d check %s failed: %s", iid, check, exc)
            rows.append(_error_row(iid, p, check, exc))
    return rows


def selftest_rows(opts: velling.SolverOptions, timings: bool = True) -> list[ReportRow]:
    rows = []
    for _oracle, param, rep in solver_selftest(opts):
        rows.append(_row(SELFTEST_ID, (param,), rep.name, rep, timings,
                         omega0=rep.quantities["exact"][0]))
    return rows


def run_suite(cfg: ExperimentConfig, write: bool = True) -> list[ReportRow]:
    """Run the configured suite; write ``report.csv`` / ``report.json`` (and SVGs) under ``cfg.out``."""
    opts = cfg.options
    instances = config_instances(cfg)
    checks = cfg.checks
    t0 = time.perf_counter()
    rows: list[ReportRow] = []
    if cfg.selftest:
        rows.extend(selftest_rows(opts, cfg.timings))
    if checks and instances:
        jobs = [(iid, p) for iid, p in instances]
        run = lambda job: run_instance(job[0], job[1], checks, opts, cfg.timings)  # noqa: E731
        if cfg.workers > 1:
            with ThreadPoolExecutor(cfg.workers) as pool:
                results = list(pool.map(run, jobs))
        else:
            results = [run(j) for j in jobs]
        for r in results:
            rows.extend(r)
    rows.sort(key=lambda r: r.key)
    log.info("%d rows in %.1fs, %d failed", len(rows), time.perf_counter() - t0,
             sum(not r.passed for r in rows))
    if write:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(rows, out / "report.csv")
        write_json(rows, out / "report.json", cfg.to_dict())
        if cfg.render:
            from .render import render_margins, render_svg
            render_margins(rows, out / "margins.svg")
            for iid, p in instances:
                render_svg(p, None, out / f"instance_{iid:03d}.svg")
    return rows


def exit_status(rows) -> int:
    """Zero iff every check passed."""
    return 0 if all(r.passed for r in rows) else 1
