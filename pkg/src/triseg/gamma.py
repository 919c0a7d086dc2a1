"""Epsilon-sweep harness: runs experiments, fits log-log slopes, reports.

Grid-based experiments enforce the layer-resolution guard h <= sqrt(eps)/4
per record; the junction scaling experiments integrate analytic patches by
quadrature and carry no grid constraint.  Records are plain rows; the report
is a deterministic function of them.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .energy import energy_constrained, energy_eps
from .errors import CannotFit, InvalidArgument, ResolutionError
from .field import PhaseTriple, holder_quotient, l2_norm, make_grid, product_field
from .presets import feasible_candidate, get_preset, grid_for_eps, recovery_config
from .profiles import ProfileFamily
from .recovery import (
    JunctionScalingPatch,
    assemble_recovery,
    cutoff_triple_overlap,
    halton_points,
    partition_weights,
)
from .solver import SolverConfig, solve_penalized

__all__ = [
    "SweepRecord",
    "SweepConfig",
    "run_sweep",
    "fit_slope",
    "fit_exponential_decay",
    "gamma_report",
    "records_to_csv",
    "records_from_csv",
    "EXPERIMENTS",
    "QUANTITIES",
]

QUANTITIES = frozenset(
    {
        "penalty_l2",
        "min_energy",
        "candidate_energy",
        "recovery_excess",
        "junction_EA",
        "junction_EB",
        "junction_Etotal",
        "l2_recovery_error",
        "holder_quotient",
        "constraint_violation",
        "cutoff_overlap",
        "partition_defect",
        "partition_active_max",
        "partition_support_bad",
        "case1_penalty",
    }
)


@dataclass(frozen=True)
class SweepRecord:
    experiment: str
    eps: float
    grid: str  # "NxM" or "-" for analytic quadrature
    quantity: str
    value: float
    runtime_s: float
    geometry: str
    provenance: str  # solver | recovery | analytic-quadrature

    def __post_init__(self):
        if self.eps <= 0.0:
            raise InvalidArgument("record eps must be positive")
        if not math.isfinite(self.value):
            raise InvalidArgument("record value must be finite")
        if self.quantity not in QUANTITIES:
            raise InvalidArgument(f"unknown quantity {self.quantity!r}")


@dataclass
class SweepConfig:
    preset: str = "three_sector"
    n: int | None = None  # grid cells per side; None = auto from smallest eps
    family: ProfileFamily = ProfileFamily.COMPACT_RAMP
    delta: float = 1.0
    deltas: tuple = (1.0, 1.5, 2.0)
    band_factor: float | None = None
    solver: SolverConfig = dc_field(default_factory=SolverConfig)
    warm_start: bool = True
    partition_points: int = 10_000


def _check_eps_list(eps_list) -> list[float]:
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        raise InvalidArgument("eps list must be non-empty")
    if any(e <= 0.0 for e in eps_list):
        raise InvalidArgument("eps values must be positive")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise InvalidArgument("eps list must be strictly decreasing")
    return eps_list


def _check_resolution(grid, eps: float) -> None:
    h = max(grid.hx, grid.hy)
    if h > math.sqrt(eps) / 4.0:
        raise ResolutionError(
            f"grid h={h:.6g} cannot resolve the layer of eps={eps:g} "
            f"(need h <= sqrt(eps)/4 = {math.sqrt(eps) / 4.0:.6g})"
        )


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get("SEG_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# experiments


def _exp_penalty_decay(eps_list, cfg: SweepConfig):
    preset = get_preset(cfg.preset)
    if preset.phi is None:
        raise InvalidArgument(f"preset {cfg.preset!r} has no solver data")
    extent = preset.solve_extent
    if cfg.n is not None:
        grid = make_grid(extent, (cfg.n, cfg.n))
    else:
        # one fixed grid for the whole sweep keeps the minimum energies
        # comparable across eps
        grid = grid_for_eps(extent, min(eps_list))
    for eps in eps_list:
        _check_resolution(grid, eps)
    gid = f"{cfg.preset}"
    gstr = f"{grid.nx}x{grid.ny}"

    t0 = time.perf_counter()
    candidate = feasible_candidate(preset, grid)
    cand_energy = energy_constrained(candidate)
    cand_dt = time.perf_counter() - t0

    span_x = grid.x1 - grid.x0
    span_y = grid.y1 - grid.y0
    window = (
        grid.x0 + 0.25 * span_x,
        grid.x1 - 0.25 * span_x,
        grid.y0 + 0.25 * span_y,
        grid.y1 - 0.25 * span_y,
    )

    records = []
    previous = None
    for eps in eps_list:
        t0 = time.perf_counter()
        res = solve_penalized(
            grid, preset.phi, eps, cfg.solver,
            initial=previous if cfg.warm_start else None,
        )
        dt = time.perf_counter() - t0
        previous = res.triple
        pnorm = l2_norm(product_field(res.triple))
        hq = max(
            holder_quotient(u, 0.75, window) for u in res.triple.components()
        )
        rows = [
            ("penalty_l2", pnorm, "solver"),
            ("min_energy", res.breakdown.total_eps, "solver"),
            ("holder_quotient", hq, "solver"),
            ("candidate_energy", cand_energy, "solver"),
        ]
        for q, v, prov in rows:
            records.append(
                SweepRecord(
                    experiment="penalty_decay", eps=eps, grid=gstr, quantity=q,
                    value=v, runtime_s=dt + (cand_dt if q == "candidate_energy" else 0.0),
                    geometry=gid, provenance=prov,
                )
            )
    return records


def _scaling_patch(cfg: SweepConfig, eps: float, delta: float,
                   ring: str) -> JunctionScalingPatch:
    preset = get_preset(cfg.preset)
    if preset.recovery is None or not preset.recovery.junctions:
        raise InvalidArgument(f"preset {cfg.preset!r} has no junction")
    return JunctionScalingPatch(
        junction=preset.recovery.junctions[0],
        eps=eps,
        delta=delta,
        family=cfg.family,
        band_factor=cfg.band_factor,
        ring=ring,
    )


def _exp_junction_scaling(eps_list, cfg: SweepConfig, experiment="junction_scaling",
                          delta=None, geometry_suffix="", ring="asymptotic"):
    delta = cfg.delta if delta is None else delta
    records = []
    for eps in eps_list:
        t0 = time.perf_counter()
        patch = _scaling_patch(cfg, eps, delta, ring)
        e_a, e_b = patch.ball_energy_split()
        dt = time.perf_counter() - t0
        gid = f"{cfg.preset}{geometry_suffix}"
        for q, v in (
            ("junction_EA", e_a),
            ("junction_EB", e_b),
            ("junction_Etotal", e_a + e_b),
        ):
            records.append(
                SweepRecord(
                    experiment=experiment, eps=eps, grid="-", quantity=q, value=v,
                    runtime_s=dt, geometry=gid, provenance="analytic-quadrature",
                )
            )
    return records


def _exp_junction_delta(eps_list, cfg: SweepConfig):
    from concurrent.futures import ThreadPoolExecutor

    def one(d):
        # the delta sweep probes the radial regularizer on the shipped
        # pure-sector fixture's own junction patch
        return _exp_junction_scaling(
            eps_list, cfg, experiment="junction_delta", delta=d,
            geometry_suffix=f"@delta={d:g}", ring="bump",
        )

    workers = min(max_workers(), len(cfg.deltas))
    records = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(one, cfg.deltas):
                records.extend(chunk)
    else:
        for d in cfg.deltas:
            records.extend(one(d))
    return records


def _exp_recovery_l2(eps_list, cfg: SweepConfig):
    preset = get_preset(cfg.preset)
    if preset.recovery is None:
        raise InvalidArgument(f"preset {cfg.preset!r} ships no recovery fixture")
    records = []
    for eps in eps_list:
        grid = grid_for_eps(preset.recovery.extent, eps)
        _check_resolution(grid, eps)
        t0 = time.perf_counter()
        rcfg = recovery_config(preset, eps, delta=cfg.delta, family=cfg.family)
        rec = assemble_recovery(rcfg, grid)
        ref = rcfg.input.sample(grid)
        err = math.sqrt(
            sum(
                l2_norm(type(u)(grid, u.values - v.values)) ** 2
                for u, v in zip(rec.components(), ref.components())
            )
        )
        excess = energy_eps(rec, eps).total_eps - sum(
            energy_eps(ref, eps).dirichlet
        )
        viol = float(np.max(np.abs(product_field(rec).values)))
        dt = time.perf_counter() - t0
        gstr = f"{grid.nx}x{grid.ny}"
        rows = [
            ("l2_recovery_error", err),
            ("recovery_excess", excess),
            ("constraint_violation", viol),
        ]
        for q, v in rows:
            records.append(
                SweepRecord(
                    experiment="recovery_l2", eps=eps, grid=gstr, quantity=q,
                    value=v, runtime_s=dt, geometry=cfg.preset, provenance="recovery",
                )
            )
    return records


def _exp_constraint_exactness(eps_list, cfg: SweepConfig):
    preset = get_preset(cfg.preset)
    if preset.recovery is None:
        raise InvalidArgument(f"preset {cfg.preset!r} ships no recovery fixture")
    records = []
    for eps in eps_list:
        grid = grid_for_eps(preset.recovery.extent, eps)
        t0 = time.perf_counter()
        rcfg = recovery_config(preset, eps, delta=cfg.delta, family=cfg.family)
        rec = assemble_recovery(rcfg, grid)
        viol = float(np.max(np.abs(product_field(rec).values)))
        dt = time.perf_counter() - t0
        records.append(
            SweepRecord(
                experiment="constraint_exactness", eps=eps,
                grid=f"{grid.nx}x{grid.ny}", quantity="constraint_violation",
                value=viol, runtime_s=dt, geometry=cfg.preset, provenance="recovery",
            )
        )
        for j_idx, j in enumerate(rcfg.junctions):
            overlap = cutoff_triple_overlap(j, eps, cfg.family)
            records.append(
                SweepRecord(
                    experiment="constraint_exactness", eps=eps, grid="-",
                    quantity="cutoff_overlap", value=overlap,
                    runtime_s=0.0, geometry=f"{cfg.preset}#j{j_idx}",
                    provenance="analytic-quadrature",
                )
            )
    return records


def _exp_partition_unity(eps_list, cfg: SweepConfig):
    preset = get_preset(cfg.preset)
    if preset.recovery is None:
        raise InvalidArgument(f"preset {cfg.preset!r} ships no recovery fixture")
    records = []
    for eps in eps_list:
        t0 = time.perf_counter()
        rcfg = recovery_config(preset, eps, delta=cfg.delta, family=cfg.family)
        x, y = halton_points(cfg.partition_points, rcfg.extent)
        w = partition_weights(x, y, rcfg)
        defect = float(np.max(np.abs(w.total() - 1.0)))
        active = int(np.max(w.active_counts()))
        sq = math.sqrt(eps)
        bad = 0
        bad += int(np.count_nonzero((w.psi_boundary > 0.0) & (w.d_boundary >= sq)))
        bad += int(np.count_nonzero((w.psi_junction > 0.0) & (w.d_junction >= sq)))
        bad += int(np.count_nonzero((w.psi_interface > 0.0) & (w.d_interface >= sq)))
        dt = time.perf_counter() - t0
        for q, v in (
            ("partition_defect", defect),
            ("partition_active_max", float(active)),
            ("partition_support_bad", float(bad)),
        ):
            records.append(
                SweepRecord(
                    experiment="partition_unity", eps=eps, grid="-", quantity=q,
                    value=v, runtime_s=dt, geometry=cfg.preset, provenance="recovery",
                )
            )
    return records


def _exp_case1_blowup(eps_list, cfg: SweepConfig):
    """Penalty blow-up on a fixed constraint-violating triple."""
    grid = make_grid((0.0, 1.0, 0.0, 1.0), (16, 16))
    from .field import ScalarField

    ones = np.ones(grid.shape)
    t = PhaseTriple(
        ScalarField(grid, ones), ScalarField(grid, ones), ScalarField(grid, ones)
    )
    records = []
    for eps in eps_list:
        t0 = time.perf_counter()
        val = energy_eps(t, eps).penalty
        dt = time.perf_counter() - t0
        records.append(
            SweepRecord(
                experiment="case1_blowup", eps=eps, grid=f"{grid.nx}x{grid.ny}",
                quantity="case1_penalty", value=val, runtime_s=dt,
                geometry="constant_violation", provenance="analytic-quadrature",
            )
        )
    return records


EXPERIMENTS = {
    "penalty_decay": _exp_penalty_decay,
    "junction_scaling": _exp_junction_scaling,
    "junction_delta": _exp_junction_delta,
    "recovery_l2": _exp_recovery_l2,
    "constraint_exactness": _exp_constraint_exactness,
    "partition_unity": _exp_partition_unity,
    "case1_blowup": _exp_case1_blowup,
}


def run_sweep(experiment: str, eps_list, cfg: SweepConfig | None = None):
    """Run one named experiment over a decreasing eps list."""
    cfg = cfg or SweepConfig()
    eps_list = _check_eps_list(eps_list)
    try:
        fn = EXPERIMENTS[experiment]
    except KeyError:
        raise InvalidArgument(
            f"unknown experiment {experiment!r}; available: "
            f"{', '.join(sorted(EXPERIMENTS))}"
        ) from None
    return fn(eps_list, cfg)


# ---------------------------------------------------------------------------
# fitting


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r2: float


def fit_slope(eps_values, values) -> FitResult:
    """Ordinary least squares of log(value) against log(eps)."""
    eps_values = np.asarray(list(eps_values), dtype=float)
    values = np.asarray(list(values), dtype=float)
    if eps_values.size < 3:
        raise CannotFit("need at least 3 records to fit a slope")
    if np.any(values <= 0.0):
        raise CannotFit("non-positive value: quantity hit numerical zero")
    x = np.log(eps_values)
    y = np.log(values)
    return _ols(x, y)


def fit_exponential_decay(eps_values, values) -> FitResult:
    """Fit value ~ exp(-c / sqrt(eps)); returns slope -c of log v vs 1/sqrt(eps)."""
    eps_values = np.asarray(list(eps_values), dtype=float)
    values = np.asarray(list(values), dtype=float)
    if eps_values.size < 3:
        raise CannotFit("need at least 3 records to fit a decay")
    if np.any(values <= 0.0):
        raise CannotFit("non-positive value: quantity hit numerical zero")
    x = 1.0 / np.sqrt(eps_values)
    y = np.log(values)
    return _ols(x, y)


def _ols(x: np.ndarray, y: np.ndarray) -> FitResult:
    xm = x - x.mean()
    ym = y - y.mean()
    sxx = float(np.sum(xm * xm))
    if sxx == 0.0:
        raise CannotFit("degenerate abscissae")
    slope = float(np.sum(xm * ym) / sxx)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (slope * x + intercept)
    sst = float(np.sum(ym * ym))
    r2 = 1.0 if sst == 0.0 else 1.0 - float(np.sum(resid * resid)) / sst
    return FitResult(slope=slope, intercept=intercept, r2=r2)


# ---------------------------------------------------------------------------
# report


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    warning: bool = False


@dataclass
class Report:
    checks: list

    @property
    def status(self) -> str:
        hard = [c for c in self.checks if not c.warning]
        return "PASS" if all(c.passed for c in hard) else "FAIL"

    def render(self) -> str:
        lines = ["gamma convergence checklist", "=" * 60]
        width = max((len(c.name) for c in self.checks), default=10)
        for c in self.checks:
            mark = "PASS" if c.passed else ("WARN" if c.warning else "FAIL")
            lines.append(f"{c.name:<{width}}  {mark}  {c.detail}")
        lines.append("=" * 60)
        lines.append(f"overall: {self.status}")
        return "\n".join(lines)

    def machine_lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else ("WARN" if c.warning else "FAIL")
            out.append(f"status={status} check={c.name} {c.detail}")
        out.append(f"status={self.status} check=overall")
        return out


def _series(records, experiment, quantity, geometry=None):
    rows = [
        r
        for r in records
        if r.experiment == experiment
        and r.quantity == quantity
        and (geometry is None or r.geometry == geometry)
    ]
    rows.sort(key=lambda r: -r.eps)
    return [r.eps for r in rows], [r.value for r in rows]


def gamma_report(records) -> Report:
    """Evaluate every scaling/structure check the records support."""
    records = list(records)
    checks: list[Check] = []
    if not records:
        return Report(checks=[])

    experiments = {r.experiment for r in records}

    if "penalty_decay" in experiments:
        geoms = sorted({r.geometry for r in records if r.experiment == "penalty_decay"})
        for gid in geoms:
            eps, vals = _series(records, "penalty_decay", "penalty_l2", gid)
            if eps:
                try:
                    fit = fit_slope(eps, vals)
                    ok = fit.slope >= 0.45 and fit.r2 >= 0.98
                    detail = f"slope={fit.slope:.4f} r2={fit.r2:.5f} geometry={gid}"
                except CannotFit as exc:
                    ok, detail = False, f"cannot fit: {exc} geometry={gid}"
                checks.append(Check("penalty_decay_slope", ok, detail))

            eps, energies = _series(records, "penalty_decay", "min_energy", gid)
            if energies:
                worst = 0.0
                for k in range(len(energies) - 1):
                    worst = max(worst, energies[k] - energies[k + 1])
                ok = worst <= 1e-8
                checks.append(
                    Check(
                        "min_energy_monotone", ok,
                        f"max_increase={worst:.3e} tol=1e-08 geometry={gid}",
                    )
                )
            _, cand = _series(records, "penalty_decay", "candidate_energy", gid)
            if cand and energies:
                gap = max(e - cand[0] for e in energies)
                ok = gap <= 1e-8
                checks.append(
                    Check(
                        "min_energy_upper_bound", ok,
                        f"max_excess_over_candidate={gap:.3e} tol=1e-08 geometry={gid}",
                    )
                )
            eps, hq = _series(records, "penalty_decay", "holder_quotient", gid)
            if hq:
                ratio = max(hq) / min(hq) if min(hq) > 0.0 else math.inf
                ok = ratio < 2.0
                checks.append(
                    Check(
                        "holder_quotient_bounded", ok,
                        f"max/min={ratio:.4f} tol=2.0 geometry={gid}",
                    )
                )

    if "junction_scaling" in experiments:
        for q, target, tol, name in (
            ("junction_EA", 0.75, 0.10, "junction_EA_slope"),
            ("junction_EB", 0.25, 0.10, "junction_EB_slope"),
        ):
            eps, vals = _series(records, "junction_scaling", q)
            if eps:
                try:
                    fit = fit_slope(eps, vals)
                    ok = abs(fit.slope - target) <= tol
                    detail = f"slope={fit.slope:.4f} target={target}+-{tol} r2={fit.r2:.5f}"
                except CannotFit as exc:
                    ok, detail = False, f"cannot fit: {exc}"
                checks.append(Check(name, ok, detail))
        eps, vals = _series(records, "junction_scaling", "junction_Etotal")
        if eps:
            try:
                fit = fit_slope(eps, vals)
                ok = 0.15 <= fit.slope <= 0.35
                detail = f"slope={fit.slope:.4f} window=[0.15,0.35] r2={fit.r2:.5f}"
            except CannotFit as exc:
                ok, detail = False, f"cannot fit: {exc}"
            checks.append(Check("junction_total_slope", ok, detail))

    if "junction_delta" in experiments:
        geoms = sorted(
            {r.geometry for r in records if r.experiment == "junction_delta"}
        )
        fits = []
        for gid in geoms:
            d = float(gid.split("@delta=")[1])
            eps, vals = _series(records, "junction_delta", "junction_EA", gid)
            try:
                fit = fit_slope(eps, vals)
            except CannotFit:
                fit = None
            fits.append((d, fit))
        fits.sort()
        ok_match = True
        details = []
        for d, fit in fits:
            if fit is None:
                ok_match = False
                details.append(f"delta={d:g}:unfittable")
                continue
            target = min(0.75, d - 0.25)
            ok_match &= abs(fit.slope - target) <= 0.15
            details.append(f"delta={d:g}:slope={fit.slope:.4f}(target={target:g})")
        slopes = [f.slope for _, f in fits if f is not None]
        ok_incr = len(slopes) == len(fits) and all(
            b > a for a, b in zip(slopes, slopes[1:])
        )
        checks.append(
            Check("delta_sweep_match", ok_match, " ".join(details))
        )
        checks.append(
            Check(
                "delta_sweep_increasing", ok_incr,
                "slopes=" + ",".join(f"{s:.5f}" for s in slopes),
            )
        )

    if "constraint_exactness" in experiments:
        geoms = sorted(
            {
                r.geometry
                for r in records
                if r.experiment == "constraint_exactness"
                and r.quantity == "constraint_violation"
            }
        )
        worst = 0.0
        for gid in geoms:
            _, vals = _series(records, "constraint_exactness", "constraint_violation", gid)
            worst = max(worst, max(vals))
        ramp_like = worst == 0.0
        checks.append(
            Check(
                "constraint_zero" if ramp_like else "constraint_violation_max",
                ramp_like,
                f"max_violation={worst:.3e}",
                warning=not ramp_like,
            )
        )
        over_geoms = sorted(
            {
                r.geometry
                for r in records
                if r.experiment == "constraint_exactness"
                and r.quantity == "cutoff_overlap"
            }
        )
        for gid in over_geoms:
            eps, vals = _series(records, "constraint_exactness", "cutoff_overlap", gid)
            if max(vals) == 0.0:
                checks.append(
                    Check(
                        "cutoff_overlap_zero", True,
                        f"geometry={gid} max=0 (compact profiles)",
                    )
                )
                continue
            try:
                fit = fit_exponential_decay(eps, vals)
                c = -fit.slope
                ok = c > 0.0 and fit.r2 >= 0.95
                detail = f"geometry={gid} c={c:.4f} r2={fit.r2:.5f}"
            except CannotFit as exc:
                ok, detail = False, f"geometry={gid} cannot fit: {exc}"
            checks.append(Check("cutoff_overlap_decay", ok, detail))

    if "partition_unity" in experiments:
        geoms = sorted({r.geometry for r in records if r.experiment == "partition_unity"})
        for gid in geoms:
            _, defect = _series(records, "partition_unity", "partition_defect", gid)
            _, active = _series(records, "partition_unity", "partition_active_max", gid)
            _, bad = _series(records, "partition_unity", "partition_support_bad", gid)
            ok = (
                max(defect) <= 1e-12
                and max(active) <= 2.0
                and max(bad) == 0.0
            )
            checks.append(
                Check(
                    "partition_of_unity", ok,
                    f"geometry={gid} max_defect={max(defect):.2e} "
                    f"max_active={int(max(active))} support_bad={int(max(bad))}",
                )
            )

    if "recovery_l2" in experiments:
        geoms = sorted({r.geometry for r in records if r.experiment == "recovery_l2"})
        for gid in geoms:
            eps, vals = _series(records, "recovery_l2", "l2_recovery_error", gid)
            if not eps:
                continue
            ok = all(b < a for a, b in zip(vals, vals[1:]))
            checks.append(
                Check(
                    "l2_recovery_monotone", ok,
                    f"geometry={gid} errors=" + ",".join(f"{v:.3e}" for v in vals),
                )
            )
            eps, ex = _series(records, "recovery_l2", "recovery_excess", gid)
            if len(ex) >= 3 and all(v > 0.0 for v in ex):
                fit = fit_slope(eps, ex)
                checks.append(
                    Check(
                        "recovery_excess_slope", fit.slope >= 0.15,
                        f"geometry={gid} slope={fit.slope:.4f} floor=0.15",
                        warning=True,
                    )
                )

    if "case1_blowup" in experiments:
        eps, vals = _series(records, "case1_blowup", "case1_penalty")
        if eps:
            fit = fit_slope(eps, vals)
            ok = abs(fit.slope + 1.0) <= 1e-9
            checks.append(
                Check("case1_penalty_blowup", ok, f"slope={fit.slope:.12f} target=-1")
            )

    return Report(checks=checks)


# ---------------------------------------------------------------------------
# record IO


def records_to_csv(records, path) -> None:
    with open(path, "w") as fh:
        fh.write("experiment,eps,grid,quantity,value,runtime_s,provenance\n")
        rows = sorted(
            records, key=lambda r: (r.experiment, r.geometry, -r.eps, r.quantity)
        )
        for r in rows:
            exp = r.experiment if r.geometry in (r.experiment, "") else (
                f"{r.experiment}/{r.geometry}"
            )
            fh.write(
                f"{exp},{r.eps:.17g},{r.grid},{r.quantity},{r.value:.17g},"
                f"{r.runtime_s:.6f},{r.provenance}\n"
            )


def records_from_csv(path):
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "experiment,eps,grid,quantity,value,runtime_s,provenance":
            raise InvalidArgument(f"unexpected records header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            exp, eps, grid, quantity, value, runtime_s, provenance = line.split(",")
            if "/" in exp:
                experiment, geometry = exp.split("/", 1)
            else:
                experiment, geometry = exp, exp
            records.append(
                SweepRecord(
                    experiment=experiment, eps=float(eps), grid=grid,
                    quantity=quantity, value=float(value),
                    runtime_s=float(runtime_s), geometry=geometry,
                    provenance=provenance,
                )
            )
    return records
