"""Command-line frontend: verify, trajectory, maxwell, sweep, check.

Exit codes: 0 success, 2 verification rejected, 64 usage error, 65 domain or
genericity error, 70 integration failure.  All numeric output is seeded and
serialized with 17 significant digits, so identical invocations produce
bit-identical files regardless of --jobs.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .catalog import BUILTIN_NAMES, resolve
from .checks import SUITES, run_suites
from .errors import (
    CatalogError,
    DomainError,
    GenericSetError,
    IntegrationError,
    LiemaxError,
)
from .flows import FlowConfig, left_trajectory, trajectory_to_csv, trajectory_to_json
from .maxwell import MaxwellQuery, first_maxwell_time
from .symmetry import VerifiedSymmetry, verify_candidate

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_USAGE = 64
EXIT_DOMAIN = 65
EXIT_INTEGRATION = 70


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 64
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass(frozen=True)
class RunManifest:
    command: str
    group: str
    seed: int
    config: dict
    tool_version: str
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "group": self.group,
            "seed": self.seed,
            "config": self.config,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }


def _manifest(command: str, group: str, seed: int, cfg: FlowConfig) -> RunManifest:
    return RunManifest(
        command,
        group,
        seed,
        {"method": cfg.method, "tol": cfg.tol, "max_step": cfg.max_step},
        __version__,
        datetime.now(timezone.utc).isoformat(),
    )


def _parse_covector(text: str, dim: int):
    parts = text.split(",")
    if len(parts) != dim:
        raise _UsageError(f"--p needs {dim} comma-separated reals, got {len(parts)}")
    try:
        return [float(v) for v in parts]
    except ValueError as exc:
        raise _UsageError(f"could not parse --p: {exc}") from exc


def _get_symmetry(bundle, name: str):
    if name not in bundle.symmetries:
        raise CatalogError(
            f"unknown symmetry '{name}' for group '{bundle.name}'; "
            f"available: {', '.join(sorted(bundle.symmetries))}"
        )
    return bundle.symmetries[name]


def _get_hamiltonian(bundle, name: str):
    if name not in bundle.hamiltonians:
        raise CatalogError(
            f"unknown Hamiltonian '{name}' for group '{bundle.name}'; "
            f"available: {', '.join(sorted(bundle.hamiltonians))}"
        )
    return bundle.hamiltonians[name]


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)


# -- verify -------------------------------------------------------------------------


def cmd_verify(args) -> int:
    bundle = resolve(args.group)
    cand = _get_symmetry(bundle, args.symmetry)
    H = _get_hamiltonian(bundle, args.hamiltonian)
    verdict = verify_candidate(cand, H, samples=args.samples, seed=args.seed)
    manifest = _manifest("verify", args.group, args.seed, FlowConfig()).to_dict()
    if isinstance(verdict, VerifiedSymmetry):
        payload = {
            "candidate": args.symmetry,
            "classification": "automorphism" if verdict.case == "a" else "anti_automorphism",
            "residual_H": verdict.residual_H,
            "residual_vertical": verdict.residual_vertical,
            "case": verdict.case,
            "samples": args.samples,
            "seed": args.seed,
            "verified": True,
            "manifest": manifest,
        }
        _emit_json(payload, args.out)
        print(f"case {verdict.case}: residual_H={verdict.residual_H:.3e} "
              f"residual_vertical={verdict.residual_vertical:.3e}", file=sys.stderr)
        return EXIT_OK
    payload = {
        "candidate": args.symmetry,
        "classification": verdict.classification,
        "residual_H": verdict.residual_H,
        "residual_vertical_commuting": verdict.residual_vertical_commuting,
        "residual_vertical_anticommuting": verdict.residual_vertical_anticommuting,
        "case": None,
        "samples": args.samples,
        "seed": args.seed,
        "verified": False,
        "reason": verdict.reason,
        "manifest": manifest,
    }
    _emit_json(payload, args.out)
    print(f"rejected: {verdict.reason}", file=sys.stderr)
    return EXIT_REJECTED


# -- trajectory ---------------------------------------------------------------------


def cmd_trajectory(args) -> int:
    bundle = resolve(args.group)
    H = _get_hamiltonian(bundle, args.hamiltonian)
    if args.t <= 0:
        raise _UsageError("--t must be positive")
    p = bundle.algebra.covector(_parse_covector(args.p, bundle.algebra.dim))
    cfg = FlowConfig(tol=args.tol)
    manifest = _manifest("trajectory", args.group, 0, cfg).to_dict()
    try:
        traj = left_trajectory(H, p, args.t, cfg, step_out=args.step_out)
    except IntegrationError as exc:
        manifest["error"] = str(exc)
        manifest["partial"] = True
        manifest["last_time"] = exc.last_time
        if exc.last_time > 0:  # salvage the reachable part of the trajectory
            partial = left_trajectory(H, p, 0.999 * exc.last_time, cfg, step_out=args.step_out)
            if args.json:
                trajectory_to_json(partial, args.out)
            else:
                trajectory_to_csv(partial, args.out)
        with open(args.out + ".manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=1)
        print(f"integration failed at t={exc.last_time}; partial file flagged", file=sys.stderr)
        return EXIT_INTEGRATION
    final = traj.final.g.matrix
    manifest["final_variety_residual"] = bundle.variety_residual(final)
    if args.json:
        trajectory_to_json(traj, args.out)
    else:
        trajectory_to_csv(traj, args.out)
    with open(args.out + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=1)
    return EXIT_OK


# -- maxwell ------------------------------------------------------------------------


def _verified(bundle, symmetry: str, hamiltonian: str) -> VerifiedSymmetry:
    verdict = verify_candidate(
        _get_symmetry(bundle, symmetry), _get_hamiltonian(bundle, hamiltonian)
    )
    if not isinstance(verdict, VerifiedSymmetry):
        raise DomainError(
            f"symmetry '{symmetry}' does not verify against '{hamiltonian}': {verdict.reason}"
        )
    return verdict


def _maxwell_payload(res) -> dict:
    return {
        "time": res.time if math.isfinite(res.time) else "inf",
        "endpoint": None if res.endpoint is None else [list(r) for r in res.endpoint.matrix],
        "fixed_point_residual": None if math.isnan(res.fixed_point_residual) else res.fixed_point_residual,
        "meet_residual": None if math.isnan(res.meet_residual) else res.meet_residual,
        "distinct": res.distinct,
        "stratum": res.stratum,
        "grid_min_residual": res.grid_min_residual,
        "skipped_roots": [
            {
                "time": s.time,
                "fixed_point_residual": s.fixed_point_residual,
                "meet_residual": None if math.isnan(s.meet_residual) else s.meet_residual,
                "distinct": s.distinct,
            }
            for s in res.skipped
        ],
    }


def cmd_maxwell(args) -> int:
    bundle = resolve(args.group)
    H = _get_hamiltonian(bundle, args.hamiltonian)
    V = _verified(bundle, args.symmetry, args.hamiltonian)
    p = bundle.algebra.covector(_parse_covector(args.p, bundle.algebra.dim))
    cfg = FlowConfig(tol=args.tol)
    try:
        res = first_maxwell_time(
            MaxwellQuery(V, H, p, args.horizon, grid_step=args.grid, cfg=cfg)
        )
    except GenericSetError as exc:
        from .algebra import orbit_report

        rep = orbit_report(p)
        _emit_json(
            {
                "error": str(exc),
                "orbit_report": {
                    "codim": rep.codim,
                    "pairing": rep.pairing,
                    "in_generic_set": rep.in_generic_set,
                },
            },
            args.out,
        )
        return EXIT_DOMAIN
    payload = _maxwell_payload(res)
    payload["manifest"] = _manifest("maxwell", args.group, 0, cfg).to_dict()
    _emit_json(payload, args.out)
    return EXIT_OK


# -- sweep --------------------------------------------------------------------------


def _parse_grid(spec: str, dim: int) -> list[list[float]]:
    axes = spec.split(",")
    if len(axes) != dim:
        raise _UsageError(f"--p-grid needs {dim} axes 'start:stop:count', got {len(axes)}")
    grids = []
    for axis in axes:
        parts = axis.split(":")
        if len(parts) != 3:
            raise _UsageError(f"bad grid axis '{axis}' (want start:stop:count)")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise _UsageError("grid counts must be >= 1")
        grids.append([float(v) for v in np.linspace(start, stop, count)])
    return grids


def _sweep_row(task) -> dict:
    group, symmetry, hamiltonian, coords, horizon, grid, tol = task
    bundle = resolve(group)
    row: dict = {"p": coords}
    try:
        V = _verified(bundle, symmetry, hamiltonian)
        H = _get_hamiltonian(bundle, hamiltonian)
        res = first_maxwell_time(
            MaxwellQuery(
                V, H, bundle.algebra.covector(coords), horizon,
                grid_step=grid, cfg=FlowConfig(tol=tol),
            )
        )
        if math.isfinite(res.time):
            row.update(
                t_max=res.time,
                residual=res.fixed_point_residual,
                distinct=res.distinct,
                stratum=res.stratum or "",
                error="",
            )
        else:
            row.update(
                t_max=math.inf,
                residual=res.grid_min_residual,
                distinct=False,
                stratum="",
                error="",
            )
    except LiemaxError as exc:
        row.update(t_max=math.nan, residual=math.nan, distinct=False, stratum="", error=str(exc))
    return row


def cmd_sweep(args) -> int:
    bundle = resolve(args.group)
    _get_hamiltonian(bundle, args.hamiltonian)
    _verified(bundle, args.symmetry, args.hamiltonian)  # fail early on bad names
    grids = _parse_grid(args.p_grid, bundle.algebra.dim)
    import itertools

    points = [list(c) for c in itertools.product(*grids)]
    tasks = [
        (args.group, args.symmetry, args.hamiltonian, coords, args.horizon, args.grid, args.tol)
        for coords in points
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks, chunksize=4))
    else:
        rows = [_sweep_row(t) for t in tasks]

    n = bundle.algebra.dim
    header = [f"p_{i + 1}" for i in range(n)] + ["t_max", "residual", "distinct", "stratum", "error"]
    failed = 0
    strata: dict[str, int] = {}
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            if row["error"]:
                failed += 1
            if row["stratum"]:
                strata[row["stratum"]] = strata.get(row["stratum"], 0) + 1
            t_txt = "inf" if math.isinf(row["t_max"]) else (
                "" if math.isnan(row["t_max"]) else _fmt(row["t_max"])
            )
            r_txt = "" if math.isnan(row["residual"]) else _fmt(row["residual"])
            writer.writerow(
                [_fmt(v) for v in row["p"]]
                + [t_txt, r_txt, str(row["distinct"]).lower(), row["stratum"], row["error"]]
            )
    manifest = _manifest("sweep", args.group, 0, FlowConfig(tol=args.tol)).to_dict()
    manifest["symmetry"] = args.symmetry
    manifest["rows"] = len(rows)
    manifest["failed_rows"] = failed
    with open(args.out + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=1)
    if bundle.name in ("se2", "sh2"):
        with open(args.out + ".strata.json", "w") as fh:
            json.dump(dict(sorted(strata.items())), fh, indent=1)
            fh.write("\n")
    with open(args.out + ".gp", "w") as fh:
        fh.write(
            "# gnuplot script for the sweep output\n"
            f"set datafile separator ','\n"
            f"set key autotitle columnhead\n"
            f"plot '{os.path.basename(args.out)}' using 1:{n + 1} with points\n"
        )
    return EXIT_OK if failed == 0 else 1


# -- check --------------------------------------------------------------------------


def cmd_check(args) -> int:
    groups = None
    if args.groups is not None:
        groups = [g for g in args.groups.split(",") if g]
    lines = run_suites(args.suite, groups, args.seed, pairs=args.pairs)
    if not lines:
        print("TAP version 14")
        print("1..0 # SKIP empty catalog")
        print("# warning: no groups selected; vacuous pass", file=sys.stderr)
        return EXIT_OK
    print("TAP version 14")
    print(f"1..{len(lines)}")
    failed = 0
    for i, line in enumerate(lines, start=1):
        if line.skipped:
            print(f"ok {i} - {line.name} # SKIP {line.detail}")
            continue
        if line.passed:
            print(f"ok {i} - {line.name} # {line.detail}")
        else:
            failed += 1
            print(f"not ok {i} - {line.name} # {line.detail}")
    print(f"# suite={args.suite} seed={args.seed} pairs={args.pairs} failed={failed}")
    return EXIT_OK if failed == 0 else 1


# -- entry point --------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="liemax", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify a symmetry candidate against a Hamiltonian")
    p.add_argument("--group", required=True)
    p.add_argument("--symmetry", required=True)
    p.add_argument("--hamiltonian", default="sr")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trajectory", help="integrate an extremal and write samples")
    p.add_argument("--group", required=True)
    p.add_argument("--hamiltonian", default="sr")
    p.add_argument("--p", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--step-out", type=float, default=0.1, dest="step_out")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("maxwell", help="first Maxwell time for one covector")
    p.add_argument("--group", required=True)
    p.add_argument("--symmetry", required=True)
    p.add_argument("--hamiltonian", default="sr")
    p.add_argument("--p", required=True)
    p.add_argument("--horizon", type=float, default=10.0)
    p.add_argument("--grid", type=float, default=1e-2)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_maxwell)

    p = sub.add_parser("sweep", help="Maxwell times over a covector grid")
    p.add_argument("--group", required=True)
    p.add_argument("--symmetry", required=True)
    p.add_argument("--hamiltonian", default="sr")
    p.add_argument("--p-grid", required=True, dest="p_grid")
    p.add_argument("--horizon", type=float, default=10.0)
    p.add_argument("--grid", type=float, default=1e-2)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="run the residual suites over the catalog")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=20)
    p.add_argument("--groups", help="comma-separated subset (empty string = none)")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except CatalogError as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GenericSetError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except IntegrationError as exc:
        print(f"integration error: {exc} (last good time {exc.last_time})", file=sys.stderr)
        return EXIT_INTEGRATION


if __name__ == "__main__":
    sys.exit(main())
