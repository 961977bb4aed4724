"""Command-line front end.

Subcommands: simulate, spectrum, equilibrium, branch, audit.  Options may
also come from a flat config file (``key = value``, ``#`` comments) passed
with --config; command-line flags override file keys, and unknown file keys
are rejected.  Every run writes a metadata JSON echoing the fully resolved
configuration.

Exit codes: 0 success (including clean pinch detection), 2 usage error,
3 numeric failure, 4 I/O failure.  ``ASDFLOW_OUT`` sets the default output
directory.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis, dynamics, equilibria, reporting, svg
from .errors import AsdflowError, ConfigError, NumericError
from .grid import PeriodicProfile, TorusGrid
from .reduced import equivalent_cylinder_radius

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

# per-command config-file schema: key -> coercion
_COMMON_KEYS = {"out": str, "seed": int}
_CONFIG_KEYS: dict[str, dict[str, type]] = {
    "simulate": {
        "cylinder": float, "perturbed": str, "unduloid": str, "file": str,
        "n": int, "t_end": float, "dt0": float, "adapt_tol": float,
        "stab_margin": float, "pinch_frac": float, "snapshot_every": int,
        "k_track": int, "fixed_dt": float, "order": int, **_COMMON_KEYS,
    },
    "spectrum": {"radius": float, "kmax": int, "reduced": bool, **_COMMON_KEYS},
    "equilibrium": {"B": float, "k": int, "n": int, "svg": bool, "family_svg": bool, **_COMMON_KEYS},
    "branch": {"l": int, "B_grid": str, "n": int, "fit": bool, "polish": bool,
               "workers": int, **_COMMON_KEYS},
    "audit": {"trajectory": str, "volume_tol": float, "area_slack": float, **_COMMON_KEYS},
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asdflow", description=__doc__.splitlines()[0], allow_abbrev=False
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output directory (default $ASDFLOW_OUT or ./asdflow_out)")
        p.add_argument("--config", default=None, help="flat key = value config file")
        p.add_argument("--seed", type=int, default=0, help="seed echoed into metadata for sweep tooling")

    p = sub.add_parser("simulate", help="integrate the flow from an initial profile")
    common(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--cylinder", type=float, default=None, metavar="R")
    group.add_argument("--perturbed", default=None, metavar="r=..,k=..,eps=..")
    group.add_argument("--unduloid", default=None, metavar="B=..,k=..")
    group.add_argument("--file", default=None, metavar="PATH", help="profile snapshot CSV to resume from")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--dt0", type=float, default=1e-3)
    p.add_argument("--adapt-tol", type=float, default=1e-8)
    p.add_argument("--stab-margin", type=float, default=1.25)
    p.add_argument("--pinch-frac", type=float, default=0.25)
    p.add_argument("--snapshot-every", type=int, default=1000)
    p.add_argument("--k-track", type=int, default=4)
    p.add_argument("--fixed-dt", type=float, default=None)
    p.add_argument("--order", type=int, default=1, choices=(1, 2))

    p = sub.add_parser("spectrum", help="analytic cylinder spectrum report")
    common(p)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--reduced", action="store_true")

    p = sub.add_parser("equilibrium", help="generate an unduloid/cylinder profile")
    common(p)
    p.add_argument("--B", type=float, required=True, help="shape parameter (|B| <= 0.95)")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--svg", action="store_true", help="also plot the profile")
    p.add_argument("--family-svg", action="store_true", help="also plot the curve family")

    p = sub.add_parser("branch", help="trace a bifurcating equilibrium branch")
    common(p)
    p.add_argument("--l", type=int, required=True, help="branch mode (period count)")
    p.add_argument("--B-grid", default="0:0.05:0.3", metavar="a:step:b")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--fit", action="store_true", help="emit the pitchfork fit triple")
    p.add_argument("--polish", action="store_true", help="Newton-polish each sample")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("audit", help="re-check conservation laws on a stored trajectory")
    common(p)
    p.add_argument("--trajectory", required=True, metavar="PATH")
    p.add_argument("--volume-tol", type=float, default=1e-7)
    p.add_argument("--area-slack", type=float, default=1e-9)
    return parser


def _apply_config_file(args: argparse.Namespace, command: str, argv: list[str]) -> None:
    """File values fill in options the command line did not set explicitly."""
    if args.config is None:
        return
    values = reporting.parse_config_file(args.config)
    schema = _CONFIG_KEYS[command]
    for key, raw in values.items():
        attr = key.replace("-", "_")
        if attr not in schema:
            raise ConfigError(f"unknown config key {key!r} for command {command!r}")
        flag = "--" + attr.replace("_", "-") if len(attr) > 1 else "--" + attr
        if any(a == flag or a.startswith(flag + "=") for a in argv):
            continue  # explicit flag wins
        kind = schema[attr]
        try:
            if kind is bool:
                value: object = raw.lower() in ("1", "true", "yes", "on")
            else:
                value = kind(raw)
        except ValueError as exc:
            raise ConfigError(f"config key {key!r}: cannot parse {raw!r} as {kind.__name__}") from exc
        setattr(args, attr, value)


def _outdir(args: argparse.Namespace) -> Path:
    out = args.out or os.environ.get("ASDFLOW_OUT") or "asdflow_out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _parse_kv(spec: str, required: dict[str, float]) -> dict[str, float]:
    out = dict(required)
    seen = set()
    for item in spec.split(","):
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        key = key.strip()
        if key not in out:
            raise ConfigError(f"unknown key {key!r} in {spec!r}")
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} in {spec!r}")
        seen.add(key)
        try:
            out[key] = float(value)
        except ValueError as exc:
            raise ConfigError(f"non-numeric value for {key!r} in {spec!r}") from exc
    missing = [k for k, v in out.items() if v is None]
    if missing:
        raise ConfigError(f"missing keys {missing} in {spec!r}")
    return out


def _initial_profile(args: argparse.Namespace) -> tuple[PeriodicProfile, dict]:
    grid = TorusGrid(args.n)
    if args.cylinder is not None:
        if args.cylinder <= 0:
            raise ConfigError("--cylinder radius must be positive")
        return PeriodicProfile.constant(grid, args.cylinder), {"kind": "cylinder", "r": args.cylinder}
    if args.perturbed is not None:
        kv = _parse_kv(args.perturbed, {"r": None, "k": None, "eps": None})
        values = kv["r"] + kv["eps"] * np.cos(kv["k"] * grid.nodes)
        return PeriodicProfile(grid, values), {"kind": "perturbed", **kv}
    if args.unduloid is not None:
        kv = _parse_kv(args.unduloid, {"B": None, "k": None})
        profile = equilibria.unduloid_profile(kv["B"], int(kv["k"]), grid)
        return profile, {"kind": "unduloid", **kv}
    if args.file is not None:
        profile = reporting.read_profile_csv(args.file)
        return profile, {"kind": "file", "path": str(args.file)}
    raise ConfigError("simulate needs one of --cylinder/--perturbed/--unduloid/--file")


def _echo_config(args: argparse.Namespace, command: str) -> dict:
    skip = {"command", "config"}
    echo = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(value, Path):
            value = str(value)
        echo[key] = value
    return {"command": command, "config": echo}


# ---------------------------------------------------------------------------
# subcommand drivers


def _cmd_simulate(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    r0, source = _initial_profile(args)
    cfg = dynamics.SimConfig(
        t_end=args.t_end,
        dt0=args.dt0,
        stab_margin=args.stab_margin,
        adapt_tol=args.adapt_tol,
        pinch_frac=args.pinch_frac,
        snapshot_every=args.snapshot_every,
        k_track=args.k_track,
        fixed_dt=args.fixed_dt,
        order=args.order,
    )
    start = time.perf_counter()
    record = dynamics.simulate(r0, cfg)
    wall = time.perf_counter() - start
    reporting.write_trajectory_csv(outdir / "trajectory.csv", record)
    for i, (t, profile) in enumerate(record.snapshots):
        reporting.write_profile_csv(outdir / f"snapshot_{i:06d}.csv", profile)
    reporting.write_profile_csv(outdir / "snapshot_final.csv", record.final_profile())
    meta = _echo_config(args, "simulate")
    meta["initial_condition"] = source
    meta["termination"] = record.termination
    meta["steps_accepted"] = int(record.times.size - 1)
    meta["wall_time_s"] = wall
    reporting.write_json(outdir / "metadata.json", meta)
    if record.termination in (dynamics.DIVERGED, dynamics.STEP_UNDERFLOW):
        print(f"simulate: numeric failure ({record.termination})", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"simulate: {record.termination} at t={record.times[-1]:.6g} "
          f"({record.times.size - 1} steps) -> {outdir}")
    return EXIT_OK


def _cmd_spectrum(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    report = analysis.cylinder_spectrum(args.radius, args.kmax, reduced=args.reduced)
    payload = {
        "source": report.source,
        "radius": report.radius,
        "reduced": args.reduced,
        "entries": [{"k": k, "mu": mu.real, "multiplicity": m} for k, mu, m in report.entries],
    }
    reporting.write_json(outdir / "spectrum.json", payload)
    reporting.write_json(outdir / "spectrum_metadata.json", _echo_config(args, "spectrum"))
    print(reporting.dumps_json([mu.real for k, mu, _ in report.entries if k >= 1]))
    return EXIT_OK


def _cmd_equilibrium(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    grid = TorusGrid(args.n)
    cls = equilibria.classify_cmc(args.B)
    classification = {
        "B": args.B,
        "kind": cls.kind,
        "representable_as_periodic_graph": cls.graph_representable,
    }
    if cls.graph_representable:
        classification["mean_curvature"] = equilibria.unduloid_mean_curvature(args.B, args.k)
    line = dumps_oneline(classification)
    (outdir / "classification.json").write_text(line + "\n")
    print(line)
    if not cls.graph_representable:
        reporting.write_json(outdir / "equilibrium_metadata.json", _echo_config(args, "equilibrium"))
        return EXIT_OK
    profile = equilibria.unduloid_profile(args.B, args.k, grid)
    reporting.write_profile_csv(outdir / "profile.csv", profile)
    if args.svg:
        svg.emit_svg([(grid.nodes, profile.values)], outdir / "profile.svg",
                     title=f"B={args.B:g} k={args.k}")
    if args.family_svg:
        family = []
        for b in (-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9):
            curve = equilibria.unduloid_parametric(equilibria.make_spec(b, args.k), 256)
            family.append((curve.x, curve.rho))
        svg.emit_svg(family, outdir / "family.svg", title=f"undulary family, k={args.k}")
    reporting.write_json(outdir / "equilibrium_metadata.json", _echo_config(args, "equilibrium"))
    return EXIT_OK


def _cmd_branch(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    ecc_grid = reporting.parse_range(args.B_grid)
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            futures = [
                pool.submit(analysis.trace_branch, args.l, [ecc], args.n, args.polish)
                for ecc in ecc_grid
            ]
            samples = [f.result()[0] for f in futures]
    else:
        samples = analysis.trace_branch(args.l, ecc_grid, args.n, polish=args.polish)
    reporting.write_branch_csv(outdir / "branch.csv", samples)
    payload = {
        "mode": args.l,
        "samples": [
            {"B": b.ecc, "lambda": b.lam, "amplitude": b.amplitude,
             "residual": b.residual, "leading_mu": b.leading_mu}
            for b in samples
        ],
    }
    if args.fit:
        fit = analysis.fit_pitchfork(samples)
        payload["fit"] = {"lambda0": fit.lambda0, "dlambda": fit.dlambda, "d2lambda": fit.d2lambda}
        print(f"pitchfork fit: lambda0={fit.lambda0:.9g} dlambda={fit.dlambda:.3g} "
              f"d2lambda={fit.d2lambda:.6g}")
    reporting.write_json(outdir / "branch.json", payload)
    reporting.write_json(outdir / "branch_metadata.json", _echo_config(args, "branch"))
    return EXIT_OK


def _cmd_audit(args: argparse.Namespace) -> int:
    outdir = _outdir(args)
    data = reporting.read_trajectory_csv(args.trajectory)
    volume = data["volume"]
    area = data["area"]
    volume_drift = float(np.max(np.abs(volume - volume[0])) / abs(volume[0]))
    area_increase = float(np.max(np.diff(area)) / area[0]) if area.size > 1 else 0.0
    volume_ok = volume_drift <= args.volume_tol
    area_ok = area_increase <= args.area_slack
    verdict = {
        "trajectory": str(args.trajectory),
        "samples": int(volume.size),
        "volume_drift": volume_drift,
        "volume_tol": args.volume_tol,
        "volume_ok": volume_ok,
        "max_area_increase": area_increase,
        "area_slack": args.area_slack,
        "area_ok": area_ok,
        "ok": volume_ok and area_ok,
    }
    reporting.write_json(outdir / "audit.json", verdict)
    print(reporting.dumps_json(verdict))
    return EXIT_OK if verdict["ok"] else EXIT_NUMERIC


def dumps_oneline(obj: dict) -> str:
    parts = [f'"{k}": {reporting.dumps_json(v)}' for k, v in obj.items()]
    return "{" + ", ".join(parts) + "}"


_DRIVERS = {
    "simulate": _cmd_simulate,
    "spectrum": _cmd_spectrum,
    "equilibrium": _cmd_equilibrium,
    "branch": _cmd_branch,
    "audit": _cmd_audit,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args, args.command, argv)
        return _DRIVERS[args.command](args)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except AsdflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
