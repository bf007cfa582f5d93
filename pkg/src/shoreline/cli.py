"""Command-line interface.

Subcommands: evaluate (competitive ratio of a fleet config), certify
(snapshot lower bound), lemmas (verification sweeps for the geometric
facts the certificates lean on), optimize (spiral growth search), plot
(SVG rendering of a report).  Outputs are files plus a one-line summary on
stdout.

Exit codes: 0 ok, 1 usage/config error, 2 uncovered direction, 3 lemma
violation, 4 non-convergence.  Set SHORELINE_WORKERS to parallelize the
evaluator's direction sweep.

Fleet configs are JSON:

    {
      "version": 1,
      "robots": [
        {"kind": "ray", "angle": 0.0},
        {"kind": "log_spiral", "growth": 0.5, "start_radius": 1.0,
         "start_phase": 0.0, "chirality": "ccw"},
        {"kind": "antipodal_of", "inner": {"kind": "ray", "angle": 1.0}},
        {"kind": "polyline", "vertices": [[0, 0], [1, 0], [1, 1]]}
      ],
      "evaluation": {"horizon": 10.0, "theta_steps": 720, "t_steps": 4096}
    }

The optional "evaluation" block supplies defaults that CLI flags override.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import certifier, evaluator, optimizer, report
from .trajectory import Fleet, spec_from_dict, spec_to_dict

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_UNCOVERED = 2
EXIT_LEMMA = 3
EXIT_NO_CONVERGENCE = 4

LEMMA_SUITES = ("omb", "cone-exit", "ellipses", "discriminant")
OMB_PHIS = (math.pi / 16, math.pi / 8, 3 * math.pi / 16, math.pi / 4)


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # map argparse usage errors onto exit 1
        raise ConfigError(message)


def load_fleet_config(path: str) -> tuple[Fleet, list[dict], dict]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path}: top level must be an object")
    if doc.get("version") != 1:
        raise ConfigError(f"config {path}: missing or unsupported version "
                          f"(expected 1, got {doc.get('version')!r})")
    robots_doc = doc.get("robots")
    if not isinstance(robots_doc, list) or not robots_doc:
        raise ConfigError(f"config {path}: robots must be a non-empty list")
    try:
        robots = tuple(
            spec_from_dict(r, f"robots[{i}]") for i, r in enumerate(robots_doc)
        )
    except ValueError as exc:
        raise ConfigError(f"config {path}: {exc}") from exc
    evaluation = doc.get("evaluation") or {}
    if not isinstance(evaluation, dict):
        raise ConfigError(f"config {path}: evaluation must be an object")
    return Fleet(robots), [spec_to_dict(r) for r in robots], evaluation


def _pick(cli_value, config: dict, key: str, default=None):
    if cli_value is not None:
        return cli_value
    if key in config:
        return config[key]
    return default


def cmd_evaluate(args) -> int:
    fleet, robot_docs, ev = load_fleet_config(args.config)
    horizon = _pick(args.horizon, ev, "horizon")
    if horizon is None:
        raise ConfigError("horizon must be given via --horizon or the config's "
                          "evaluation block")
    theta_steps = int(_pick(args.theta_steps, ev, "theta_steps",
                            evaluator.DEFAULT_THETA_STEPS))
    t_steps = int(_pick(args.t_steps, ev, "t_steps", evaluator.DEFAULT_T_STEPS))
    epsilon = _pick(args.epsilon, ev, "epsilon")
    window = _pick(tuple(args.window) if args.window else None, ev, "window")
    if window is not None:
        window = (float(window[0]), float(window[1]))
    spacing = _pick(args.spacing, ev, "spacing", "uniform")
    t_start = float(_pick(args.t_start, ev, "t_start", 0.0))
    try:
        rep = evaluator.evaluate_cr(
            fleet, float(horizon), theta_steps, t_steps,
            epsilon=None if epsilon is None else float(epsilon),
            window=window, spacing=spacing, t_start=t_start,
        )
    except ValueError as exc:
        if isinstance(exc, evaluator.UncoveredDirectionError):
            raise
        raise ConfigError(str(exc)) from exc
    text = report.emit_report(rep, fleet=robot_docs)
    if args.out:
        Path(args.out).write_text(text)
    print(f"cr_estimate={rep.cr_estimate:.9f} witness_theta={rep.witness.theta:.6f} "
          f"witness_delta={rep.witness.delta:.6g} coverage={rep.coverage_radius:.6g}"
          + (f" -> {args.out}" if args.out else ""))
    return EXIT_OK


def cmd_certify(args) -> int:
    fleet, robot_docs, _ = load_fleet_config(args.config)
    n = args.n if args.n is not None else len(fleet)
    if n != len(fleet):
        raise ConfigError(f"--n {n} does not match fleet size {len(fleet)}")
    try:
        cert = certifier.snapshot_lower_bound(
            fleet, args.d, n, args.gamma, eps=args.eps, zeta=args.zeta,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    text = report.emit_report(cert, fleet=robot_docs)
    if args.out:
        Path(args.out).write_text(text)
    if cert.degenerate:
        print(f"degenerate: unbounded CR (all robots at the origin at "
              f"d={cert.snapshot_time:g})" + (f" -> {args.out}" if args.out else ""))
    else:
        print(f"bound={cert.bound:.9f} limit={cert.bound_limit:.9f} n={n} "
              f"d={cert.snapshot_time:g} witness_theta={cert.witness_line.theta:.6f} "
              f"witness_delta={cert.witness_line.delta:.6g}"
              + (f" -> {args.out}" if args.out else ""))
    return EXIT_OK


def _run_lemma_suites(grid: int, samples: int, seed: int,
                      suites: tuple[str, ...]) -> tuple[list[dict], bool]:
    results = []
    ok = True

    if "omb" in suites:
        worst = math.inf
        worst_phi = None
        for phi in OMB_PHIS:
            excess, _ = certifier.omb_oracle(phi, grid)
            if excess < worst:
                worst, worst_phi = excess, phi
        passed = worst >= -1e-9
        results.append({
            "lemma": "reflection inequality (OK + KL >= OB)",
            "suite": "omb", "grid": grid, "phis": list(OMB_PHIS),
            "extremal": worst, "at": {"phi": worst_phi}, "passed": passed,
        })
        ok &= passed

    if "cone-exit" in suites:
        lam, f = certifier.min_cone_exit(grid)
        resid = abs(3 * lam / (2 * math.sqrt(3 * lam * lam + 1)) - math.sqrt(3) / 4)
        passed = (abs(lam - 1 / 3) <= 1e-8 and abs(f - math.sqrt(3) / 2) <= 1e-12
                  and resid < 1e-8)
        results.append({
            "lemma": "cone exit cost minimum sqrt(3)/2 at lambda=1/3",
            "suite": "cone-exit", "grid": grid,
            "extremal": f, "at": {"lambda": lam, "derivative_residual": resid},
            "passed": passed,
        })
        ok &= passed

    if "ellipses" in suites:
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-1.3, 1.3, size=(samples, 2))
        deltas = rng.uniform(0.0, 0.999, size=samples)
        thetas = rng.uniform(0.0, math.pi, size=samples)
        q = certifier.ellipse_q_grid(pts[:, 0], pts[:, 1], deltas, thetas)
        trip = np.hypot(pts[:, 0], pts[:, 1]) + np.hypot(
            pts[:, 0] - deltas * np.cos(thetas), pts[:, 1] - deltas * np.sin(thetas))
        decisive = np.abs(q) > 1e-6
        agree = (q[decisive] < 0) == (trip[decisive] <= 1.0)
        n_checked = int(decisive.sum())
        n_agree = int(agree.sum())
        passed = n_agree == n_checked
        results.append({
            "lemma": "reachable region equals the ellipse (q <= 0)",
            "suite": "ellipses", "samples": samples, "checked": n_checked,
            "extremal": n_checked - n_agree, "at": {"seed": seed},
            "passed": passed,
        })
        ok &= passed

    if "discriminant" in suites:
        mx = certifier.discriminant_sweep(
            np.linspace(0.0, 0.99, 100), np.linspace(0.0, math.pi, 256),
            [1e-6, 1e-3, 0.1],
        )
        passed = mx < 0.0
        results.append({
            "lemma": "line y = -1/2 - zeta misses every reachable ellipse",
            "suite": "discriminant", "grid": [100, 256, 3],
            "extremal": mx, "at": {"zeta": [1e-6, 1e-3, 0.1]}, "passed": passed,
        })
        ok &= passed

    return results, ok


def _run_negative_controls(grid: int) -> tuple[list[dict], bool]:
    results = []
    ok = True
    excess, _ = certifier.omb_oracle(0.3 * math.pi, grid,
                                     allow_beyond_hypothesis=True)
    behaved = excess < 0.0
    results.append({
        "lemma": "reflection inequality beyond phi = pi/4 (expected violation)",
        "suite": "omb-negative-control", "grid": grid, "phi": 0.3 * math.pi,
        "extremal": excess, "passed": behaved,
    })
    ok &= behaved
    mx = certifier.discriminant_sweep(
        np.linspace(0.0, 0.99, 100), np.linspace(0.0, math.pi, 256), [0.0])
    behaved = abs(mx) <= 1e-12
    results.append({
        "lemma": "zeta = 0 tangency diagnostic (expected max exactly 0)",
        "suite": "discriminant-zeta-zero", "grid": [100, 256], "extremal": mx,
        "passed": behaved,
    })
    ok &= behaved
    return results, ok


def cmd_lemmas(args) -> int:
    suites = LEMMA_SUITES if args.suite == "all" else (args.suite,)
    results, ok = _run_lemma_suites(args.grid, args.samples, args.seed, suites)
    if args.negative_control:
        controls, controls_ok = _run_negative_controls(args.grid)
        results.extend(controls)
        ok &= controls_ok
    for r in results:
        status = "PASS" if r["passed"] else "FAIL"
        print(f"{status} {r['suite']}: {r['lemma']} | extremal={r['extremal']:.6g}")
    if args.out:
        doc = {"results": results, "all_passed": bool(ok)}
        Path(args.out).write_text(report.emit_report(doc))
    if not ok:
        failed = ", ".join(r["suite"] for r in results if not r["passed"])
        print(f"lemma violation in: {failed}", file=sys.stderr)
        return EXIT_LEMMA
    return EXIT_OK


def cmd_optimize(args) -> int:
    if args.n not in (1, 2):
        raise ConfigError(f"unsupported n={args.n}: only n=1 or n=2 spiral "
                          "fleets are defined")
    try:
        result = optimizer.optimize_spiral(
            args.n, bracket=(args.bracket[0], args.bracket[1]), tol=args.tol,
            prescan=args.prescan, r0=args.r0,
        )
    except optimizer.ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    text = report.emit_report(result, extra={"n": args.n, "r0": args.r0})
    if args.out:
        Path(args.out).write_text(text)
    if not result.converged:
        print(f"non-convergence: bracket {result.bracket} wider than tol "
              f"{args.tol:g} after {result.evaluations} evaluations",
              file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    print(f"b={result.parameter:.6f} cr={result.value:.6f} "
          f"evaluations={result.evaluations}"
          + (f" -> {args.out}" if args.out else ""))
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        with open(args.report) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read report {args.report}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"report {args.report} is not valid JSON: {exc}") from exc
    try:
        spec, entities = report.scene_for_document(
            doc, canvas=args.size, world_radius=args.world_radius)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    svg = report.render(spec, entities)
    out = args.out or str(Path(args.report).with_suffix(".svg"))
    Path(out).write_text(svg)
    print(f"wrote {out}")
    return EXIT_OK


def build_parser() -> _Parser:
    p = _Parser(prog="shoreline",
                description="Simulate, certify, and optimize multi-robot "
                            "shoreline search.")
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("evaluate", help="competitive ratio of a fleet config")
    pe.add_argument("config")
    pe.add_argument("--horizon", type=float)
    pe.add_argument("--theta-steps", type=int, dest="theta_steps")
    pe.add_argument("--t-steps", type=int, dest="t_steps")
    pe.add_argument("--epsilon", type=float)
    pe.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"))
    pe.add_argument("--spacing", choices=("uniform", "geometric"))
    pe.add_argument("--t-start", type=float, dest="t_start")
    pe.add_argument("--out")
    pe.set_defaults(func=cmd_evaluate)

    pc = sub.add_parser("certify", help="snapshot lower-bound certificate")
    pc.add_argument("config")
    pc.add_argument("--d", type=float, required=True, help="snapshot time")
    pc.add_argument("--n", type=int, help="expected fleet size (validated)")
    pc.add_argument("--gamma", type=float, default=certifier.DEFAULT_GAMMA)
    pc.add_argument("--eps", type=float, default=certifier.DEFAULT_EPS)
    pc.add_argument("--zeta", type=float, default=certifier.DEFAULT_ZETA)
    pc.add_argument("--out")
    pc.set_defaults(func=cmd_certify)

    pl = sub.add_parser("lemmas", help="run the lemma verification sweeps")
    pl.add_argument("--suite", choices=("all",) + LEMMA_SUITES, default="all")
    pl.add_argument("--grid", type=int, default=certifier.DEFAULT_GRID)
    pl.add_argument("--samples", type=int, default=20_000,
                    help="random samples for the ellipse equivalence check")
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--negative-control", action="store_true",
                    dest="negative_control",
                    help="also run the expected-to-violate controls")
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_lemmas)

    po = sub.add_parser("optimize", help="search the spiral growth rate")
    po.add_argument("--n", type=int, required=True)
    po.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"),
                    default=list(optimizer.DEFAULT_BRACKET))
    po.add_argument("--tol", type=float, default=optimizer.DEFAULT_B_TOL)
    po.add_argument("--prescan", type=int, default=optimizer.DEFAULT_PRESCAN)
    po.add_argument("--r0", type=float, default=1.0)
    po.add_argument("--out")
    po.set_defaults(func=cmd_optimize)

    pp = sub.add_parser("plot", help="render a report file to SVG")
    pp.add_argument("report")
    pp.add_argument("--out")
    pp.add_argument("--size", type=int, default=report.DEFAULT_CANVAS)
    pp.add_argument("--world-radius", type=float, dest="world_radius")
    pp.set_defaults(func=cmd_plot)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except evaluator.UncoveredDirectionError as exc:
        print(f"uncovered: {exc}", file=sys.stderr)
        return EXIT_UNCOVERED
    except optimizer.ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
