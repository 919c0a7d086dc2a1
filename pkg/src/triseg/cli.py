"""Command line interface: solve | recover | sweep | report.

Exit codes: 1 usage, 2 configuration, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .config import RunConfig, load_config, parse_family
from .energy import energy_eps
from .errors import ConfigError, TrisegError
from .field import field_to_csv, l2_norm, make_grid, product_field
from .gamma import (
    SweepConfig,
    fit_slope,
    gamma_report,
    records_from_csv,
    records_to_csv,
    run_sweep,
)
from .geometry import classify, region_map_to_csv
from .presets import get_preset, grid_for_eps, recovery_config
from .recovery import assemble_recovery, geometry_hash, write_manifest
from .solver import solve_penalized
from .svg import heatmap_svg, loglog_svg

__all__ = ["main"]

EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="triseg", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("solve", "recover", "sweep"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--out", default=None)
        sp.add_argument("--eps", default=None, help="comma-separated override")
        sp.add_argument("--family", default=None, choices=("tanh", "ramp"))
        sp.add_argument("--delta", type=float, default=None)
    rp = sub.add_parser("report")
    rp.add_argument("--records", required=True)
    rp.add_argument("--out", default=None)
    return p


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if args.eps:
        vals = tuple(float(v) for v in args.eps.split(",") if v.strip())
        if not vals:
            raise ConfigError("--eps override is empty")
        cfg.eps_list = vals
        cfg.eps = vals[0]
    if args.family:
        cfg.family = parse_family(args.family)
    if args.delta is not None:
        if args.delta < 1.0:
            raise ConfigError("--delta must be >= 1")
        cfg.delta = args.delta
    if args.out:
        cfg.out_dir = args.out
    return cfg


def _outdir(cfg: RunConfig) -> str:
    os.makedirs(cfg.out_dir, exist_ok=True)
    return cfg.out_dir


def _write_breakdown(path, eps, geometry, breakdown) -> None:
    with open(path, "w") as fh:
        fh.write("eps,geometry,quantity,value\n")
        rows = [
            ("dirichlet_u1", breakdown.dirichlet[0]),
            ("dirichlet_u2", breakdown.dirichlet[1]),
            ("dirichlet_u3", breakdown.dirichlet[2]),
            ("penalty", breakdown.penalty),
            ("total_eps", breakdown.total_eps),
            ("total_constrained", breakdown.total_constrained),
        ]
        for label, part in sorted(
            breakdown.per_region.items(), key=lambda kv: int(kv[0])
        ):
            rows.append((f"dirichlet_region_{label.name}", part))
        for value_name, value in rows:
            fh.write(f"{eps:.17g},{geometry},{value_name},{value:.17g}\n")


def cmd_solve(cfg: RunConfig) -> int:
    preset = get_preset(cfg.preset)
    if preset.phi is None:
        raise ConfigError(f"preset {cfg.preset!r} has no solver boundary data")
    if cfg.n is not None:
        grid = make_grid(preset.solve_extent, (cfg.n, cfg.n))
    else:
        grid = grid_for_eps(preset.solve_extent, cfg.eps)
    h = max(grid.hx, grid.hy)
    if h > math.sqrt(cfg.eps) / 4.0:
        raise ConfigError(
            f"grid h={h:.6g} cannot resolve eps={cfg.eps:g} (need h <= sqrt(eps)/4)"
        )
    res = solve_penalized(grid, preset.phi, cfg.eps, cfg.solver)
    out = _outdir(cfg)
    for i, u in enumerate(res.triple.components(), start=1):
        field_to_csv(u, os.path.join(out, f"u{i}.csv"))
        heatmap_svg(u.values, os.path.join(out, f"u{i}.svg"), title=f"u{i}")
    breakdown = energy_eps(res.triple, cfg.eps, with_regions=True)
    _write_breakdown(os.path.join(out, "breakdown.csv"), cfg.eps, cfg.preset, breakdown)
    rm = classify(res.triple)
    region_map_to_csv(rm, os.path.join(out, "regions.csv"))
    heatmap_svg(rm.labels.astype(float), os.path.join(out, "regions.svg"),
                title="regions")
    with open(os.path.join(out, "convergence.csv"), "w") as fh:
        fh.write("iteration,energy,residual\n")
        for it, en, rs in res.log:
            fh.write(f"{it},{en:.17g},{rs:.17g}\n")
    print(
        f"solve preset={cfg.preset} eps={cfg.eps:g} grid={grid.nx}x{grid.ny} "
        f"iterations={res.iterations} residual={res.residual:.3e} "
        f"converged={res.converged} energy={breakdown.total_eps:.12g}"
    )
    if not res.converged:
        return EXIT_NUMERIC
    return 0


def cmd_recover(cfg: RunConfig) -> int:
    preset = get_preset(cfg.preset)
    rcfg = recovery_config(preset, cfg.eps, delta=cfg.delta, family=cfg.family)
    grid = grid_for_eps(rcfg.extent, cfg.eps) if cfg.n is None else make_grid(
        rcfg.extent, (cfg.n, cfg.n)
    )
    rec = assemble_recovery(rcfg, grid)
    out = _outdir(cfg)
    for i, u in enumerate(rec.components(), start=1):
        field_to_csv(u, os.path.join(out, f"recovery_u{i}.csv"))
        heatmap_svg(u.values, os.path.join(out, f"recovery_u{i}.svg"),
                    title=f"recovery u{i}")
    violation = float(np.max(np.abs(product_field(rec).values)))
    ref = rcfg.input.sample(grid)
    err = math.sqrt(
        sum(
            l2_norm(type(u)(grid, u.values - v.values)) ** 2
            for u, v in zip(rec.components(), ref.components())
        )
    )
    write_manifest(
        os.path.join(out, "manifest.txt"),
        {
            "preset": cfg.preset,
            "eps": f"{cfg.eps:.17g}",
            "delta": f"{cfg.delta:.17g}",
            "family": rcfg.family.value,
            "grid": f"{grid.nx}x{grid.ny}",
            "geometry_hash": geometry_hash(rcfg),
            "constraint_violation_max": f"{violation:.17g}",
            "l2_error_vs_input": f"{err:.17g}",
        },
    )
    print(
        f"recover preset={cfg.preset} eps={cfg.eps:g} grid={grid.nx}x{grid.ny} "
        f"constraint_violation={violation:.3e} l2_error={err:.6e}"
    )
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    if not cfg.experiments:
        raise ConfigError("[run] experiments is empty; nothing to sweep")
    if not cfg.eps_list:
        raise ConfigError("[run] eps list is required for sweeps")
    scfg = SweepConfig(
        preset=cfg.preset, n=cfg.n, family=cfg.family, delta=cfg.delta,
        band_factor=cfg.band_factor, solver=cfg.solver,
    )
    records = []
    for exp in cfg.experiments:
        records.extend(run_sweep(exp, cfg.eps_list, scfg))
    out = _outdir(cfg)
    path = os.path.join(out, "records.csv")
    records_to_csv(records, path)
    print(f"sweep wrote {len(records)} records to {path}")
    return 0


def cmd_report(records_path, out_dir) -> int:
    records = records_from_csv(records_path)
    report = gamma_report(records)
    out = out_dir or "."
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, "report.txt"), "w") as fh:
        fh.write(report.render() + "\n")
    # one log-log plot per (experiment, geometry, quantity) with >= 3 points
    keys = sorted({(r.experiment, r.geometry, r.quantity) for r in records})
    for exp, geom, quantity in keys:
        rows = sorted(
            (
                r
                for r in records
                if r.experiment == exp and r.geometry == geom and r.quantity == quantity
            ),
            key=lambda r: -r.eps,
        )
        if len(rows) < 3:
            continue
        eps = [r.eps for r in rows]
        vals = [r.value for r in rows]
        fit = None
        if all(v > 0.0 for v in vals):
            f = fit_slope(eps, vals)
            fit = (f.slope, f.intercept)
        safe_geom = geom.replace("/", "_").replace("@", "_").replace("#", "_")
        name = f"plot_{exp}_{safe_geom}_{quantity}.svg"
        loglog_svg(eps, vals, os.path.join(out, name),
                   title=f"{exp}/{geom}: {quantity}", fit=fit)
    for line in report.machine_lines():
        print(line)
    return 0 if report.status == "PASS" else EXIT_NUMERIC


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "report":
            return cmd_report(args.records, args.out)
        cfg = load_config(args.config)
        cfg = _apply_overrides(cfg, args)
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "recover":
            return cmd_recover(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TrisegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
