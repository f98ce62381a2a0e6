"""Command line: ``verify <suite>`` and ``render``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import SUITES, ExperimentConfig, load_config
from .instances import config_instances
from .suite import exit_status, run_suite

FIELDS = ("none", "green", "phi", "u")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vellingcheck",
                                 description="Numerical checks of a harmonic-measure inequality for arc partitions.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a check suite and write report.csv / report.json")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--config", help="JSON configuration file")
    v.add_argument("--seed", type=int)
    v.add_argument("--n-samples", type=int, dest="n", help="walks per Monte Carlo estimate")
    v.add_argument("--eps", type=float, help="walk-on-spheres stopping distance")
    v.add_argument("--grid-h", type=float, dest="h", help="Cartesian grid spacing")
    v.add_argument("--angles", type=int, help="log-polar grid nodes per turn")
    v.add_argument("--workers", type=int)
    v.add_argument("--out", help="output directory")
    v.add_argument("--svg", action="store_true", help="also render instance and margin figures")
    v.add_argument("--no-timings", action="store_true", help="write zero runtimes (byte-stable reports)")

    r = sub.add_parser("render", help="draw the first configured instance as SVG")
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True, help="output .svg file")
    r.add_argument("--field", choices=FIELDS, default="none")
    return ap


def _verify(args) -> int:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    cfg = cfg.override(suite=args.suite, seed=args.seed, n=args.n, eps=args.eps, h=args.h,
                       angles=args.angles, workers=args.workers, out=args.out,
                       render=True if args.svg else None, timings=False if args.no_timings else None)
    rows = run_suite(cfg)
    for r in rows:
        flag = "PASS" if r.passed else "FAIL"
        print(f"{flag} {r.instance_id:>4} {r.check:<13} value={r.value:.6g} margin={r.margin:.3g}"
              + (f"  error: {r.error}" if r.error else ""))
    failed = sum(not r.passed for r in rows)
    print(f"{len(rows)} rows, {failed} failed; reports in {cfg.out}")
    return exit_status(rows)


def _render(args) -> int:
    from .. import velling
    from .render import render_svg
    cfg = load_config(args.config)
    instances = config_instances(cfg)
    if not instances:
        print("the configuration defines no instances", file=sys.stderr)
        return 2
    _, p = instances[0]
    if args.field == "none":
        render_svg(p, None, args.out)
        return 0
    inst = velling.build_instance(p, angles=cfg.solver.angles)
    fields = {
        "green": inst.green_Dcirc,
        "phi": lambda z: velling.phi_at(inst, z),
        "u": lambda z: velling.u_at(inst, z)[0],
    }
    render_svg(inst, fields[args.field], args.out)
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _verify(args) if args.command == "verify" else _render(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
