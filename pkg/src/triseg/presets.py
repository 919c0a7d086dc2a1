"""Shipped problem presets: boundary data, segregated inputs, geometries.

Solver presets live on the unit square.  Recovery fixtures with junctions
live on [0, 2]^2 so the 2*sqrt(eps) junction ball stays inside the domain
down to eps = 1e-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .field import Grid, PhaseTriple, make_grid
from .geometry import CircleInterface, JunctionSpec, RegionLabel, SegmentInterface
from .profiles import ProfileFamily
from .recovery import AnalyticTriple, RecoveryConfig
from .solver import evaluate_boundary, harmonic_extension

__all__ = [
    "Preset",
    "RecoveryFixture",
    "get_preset",
    "PRESET_NAMES",
    "grid_for_eps",
    "feasible_candidate",
    "recovery_config",
]

TWO_PI = 2.0 * math.pi
UNIT_SQUARE = (0.0, 1.0, 0.0, 1.0)
BIG_SQUARE = (0.0, 2.0, 0.0, 2.0)


@dataclass
class RecoveryFixture:
    extent: tuple
    input: AnalyticTriple
    phi: tuple
    interfaces: tuple = ()
    junctions: tuple = ()


@dataclass
class Preset:
    name: str
    solve_extent: tuple | None = None
    phi: tuple | None = None
    recovery: RecoveryFixture | None = None
    exact_energy: float | None = None


def grid_for_eps(extent, eps: float, min_n: int = 32, max_n: int = 1024) -> Grid:
    """Smallest power-of-two grid resolving the sqrt(eps) layer (h <= sqrt(eps)/4)."""
    x0, x1, y0, y1 = extent
    span = max(x1 - x0, y1 - y0)
    need = 4.0 * span / math.sqrt(eps)
    n = min_n
    while n < need and n < max_n:
        n *= 2
    return make_grid(extent, (n, n))


def _const_zero(x, y):
    return np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)


# ---------------------------------------------------------------------------
# simple presets


def _one_phase_harmonic() -> Preset:
    f1 = lambda x, y: np.asarray(x, dtype=float) + np.asarray(y, dtype=float)
    funcs = (f1, _const_zero, _const_zero)
    pattern = lambda x, y: np.full(
        np.broadcast(np.asarray(x), np.asarray(y)).shape, int(RegionLabel.PURE1),
        dtype=np.int8,
    )
    fixture = RecoveryFixture(
        extent=UNIT_SQUARE,
        input=AnalyticTriple(funcs=funcs, pattern=pattern),
        phi=funcs,
    )
    return Preset(
        name="one_phase_harmonic",
        solve_extent=UNIT_SQUARE,
        phi=funcs,
        recovery=fixture,
        exact_energy=2.0,
    )


def _two_phase_linear() -> Preset:
    f1 = lambda x, y: np.asarray(x, dtype=float) + 0.0 * np.asarray(y, dtype=float)
    f2 = lambda x, y: 1.0 - np.asarray(x, dtype=float) + 0.0 * np.asarray(y, dtype=float)
    funcs = (f1, f2, _const_zero)
    pattern = lambda x, y: np.full(
        np.broadcast(np.asarray(x), np.asarray(y)).shape, int(RegionLabel.TWO12),
        dtype=np.int8,
    )
    fixture = RecoveryFixture(
        extent=UNIT_SQUARE,
        input=AnalyticTriple(funcs=funcs, pattern=pattern),
        phi=funcs,
    )
    return Preset(
        name="two_phase_linear",
        solve_extent=UNIT_SQUARE,
        phi=funcs,
        recovery=fixture,
        exact_energy=2.0,
    )


def _circle_interface() -> Preset:
    cx, cy, R = 0.5, 0.5, 0.25

    def rad(x, y):
        return np.hypot(np.asarray(x, dtype=float) - cx, np.asarray(y, dtype=float) - cy)

    f1 = lambda x, y: np.maximum(R - rad(x, y), 0.0)
    f2 = lambda x, y: np.maximum(rad(x, y) - R, 0.0)
    funcs = (f1, f2, _const_zero)

    def pattern(x, y):
        inside = rad(x, y) < R
        return np.where(inside, np.int8(RegionLabel.PURE1), np.int8(RegionLabel.PURE2))

    circle = CircleInterface(
        center=(cx, cy), radius=R, side_neg=(1,), side_pos=(2,), type_tag="I"
    )
    fixture = RecoveryFixture(
        extent=UNIT_SQUARE,
        input=AnalyticTriple(funcs=funcs, pattern=pattern),
        phi=funcs,
        interfaces=(circle,),
    )
    return Preset(
        name="circle_interface",
        solve_extent=UNIT_SQUARE,
        phi=funcs,
        recovery=fixture,
    )


# ---------------------------------------------------------------------------
# junction fixtures


def _ray_exit(center, angle, extent) -> tuple[float, float]:
    """Intersection of the ray from center with the rectangle boundary."""
    x0, x1, y0, y1 = extent
    cx, cy = center
    dx, dy = math.cos(angle), math.sin(angle)
    best = math.inf
    if dx > 1e-15:
        best = min(best, (x1 - cx) / dx)
    if dx < -1e-15:
        best = min(best, (x0 - cx) / dx)
    if dy > 1e-15:
        best = min(best, (y1 - cy) / dy)
    if dy < -1e-15:
        best = min(best, (y0 - cy) / dy)
    if not math.isfinite(best):
        raise InvalidArgument("degenerate ray")
    return (cx + best * dx, cy + best * dy)


def _pure_sector_fixture(extent, junction: JunctionSpec,
                         radial_power: float = 0.75) -> RecoveryFixture:
    """Pure-sector input: component i positive exactly in its sector.

    u_i(r, theta) = r^p * sin(pi * (theta - a_i) / width_i) on sector i,
    zero elsewhere.  The three separating rays are type-I interfaces.
    """
    cx, cy = junction.center
    bounds = (0.0, junction.alpha1, junction.alpha1 + junction.alpha2, TWO_PI)

    def make_component(sector_idx: int):
        lo = bounds[sector_idx]
        hi = bounds[sector_idx + 1]

        def f(x, y, lo=lo, hi=hi):
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            r = np.hypot(x - cx, y - cy)
            th = junction.theta_rel(x, y)
            inside = (th >= lo) & (th < hi)
            prof = np.sin(math.pi * (th - lo) / (hi - lo))
            return np.where(inside, r**radial_power * np.maximum(prof, 0.0), 0.0)

        return f

    funcs = [None, None, None]
    for k in range(3):
        comp = junction.components[k]
        funcs[comp - 1] = make_component(k)

    pure = np.array(
        [int(RegionLabel.PURE1), int(RegionLabel.PURE2), int(RegionLabel.PURE3)],
        dtype=np.int8,
    )
    comp_arr = np.asarray(junction.components)

    def pattern(x, y):
        sector = np.asarray(junction.sector_of(junction.theta_rel(x, y)))
        return pure[comp_arr[sector - 1] - 1]

    rays = []
    for k, ang in enumerate(junction.ray_angles()):
        exit_pt = _ray_exit(junction.center, ang, extent)
        prev_sector = 3 if k == 0 else k  # clockwise neighbor of ray k
        next_sector = k + 1
        rays.append(
            SegmentInterface(
                p0=junction.center,
                p1=exit_pt,
                side_pos=(junction.components[prev_sector - 1],),
                side_neg=(junction.components[next_sector - 1],),
                type_tag="I",
            )
        )

    triple = AnalyticTriple(funcs=tuple(funcs), pattern=pattern)
    return RecoveryFixture(
        extent=extent,
        input=triple,
        phi=tuple(funcs),
        interfaces=tuple(rays),
        junctions=(junction,),
    )


def _perimeter_param(x, y, extent):
    """Counterclockwise arclength parameter on the rectangle boundary."""
    x0, x1, y0, y1 = extent
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lx = x1 - x0
    ly = y1 - y0
    d_bottom = np.abs(y - y0)
    d_right = np.abs(x - x1)
    d_top = np.abs(y - y1)
    d_left = np.abs(x - x0)
    which = np.argmin(np.stack([d_bottom, d_right, d_top, d_left]), axis=0)
    tau = np.where(
        which == 0,
        x - x0,
        np.where(
            which == 1,
            lx + (y - y0),
            np.where(which == 2, lx + ly + (x1 - x), 2 * lx + ly + (y1 - y)),
        ),
    )
    return tau, 2.0 * (lx + ly)


def _three_sector_phi(extent, amplitude: float = 5.0):
    """Three cos^2 bumps on the perimeter with pairwise (never triple) overlap.

    The amplitude sets the two-phase pair products that drive the minority
    suppression layers; ~5 puts the layer width near sqrt(eps) on the unit
    square so the penalty-decay scaling is clean over eps in [1e-3, 1e-1]
    at the h <= sqrt(eps)/4 grid resolution.
    """
    x0, x1, y0, y1 = extent
    per = 2.0 * ((x1 - x0) + (y1 - y0))
    centers = [per * (0.125 + k / 3.0) for k in range(3)]
    width = 0.2 * per

    def make(c):
        def f(x, y, c=c):
            tau, L = _perimeter_param(x, y, extent)
            d = np.abs(tau - c)
            d = np.minimum(d, L - d)
            prof = np.cos(math.pi * d / (2.0 * width)) ** 2
            return np.where(d < width, amplitude * prof, 0.0)

        return f

    return tuple(make(c) for c in centers)


def _three_sector() -> Preset:
    junction = JunctionSpec(
        center=(1.0, 1.0), alpha1=TWO_PI / 3.0, alpha2=TWO_PI / 3.0,
        base_angle=math.pi / 2.0,
    )
    fixture = _pure_sector_fixture(BIG_SQUARE, junction)
    return Preset(
        name="three_sector",
        solve_extent=UNIT_SQUARE,
        phi=_three_sector_phi(UNIT_SQUARE),
        recovery=fixture,
    )


def _junction_symmetric() -> Preset:
    junction = JunctionSpec(
        center=(1.0, 1.0), alpha1=TWO_PI / 3.0, alpha2=TWO_PI / 3.0, base_angle=0.0
    )
    fixture = _pure_sector_fixture(BIG_SQUARE, junction)
    return Preset(name="junction_symmetric", recovery=fixture)


def _junction_asymmetric() -> Preset:
    junction = JunctionSpec(
        center=(1.0, 1.0), alpha1=1.9, alpha2=2.4, base_angle=0.0
    )
    fixture = _pure_sector_fixture(BIG_SQUARE, junction)
    return Preset(name="junction_asymmetric", recovery=fixture)


_BUILDERS = {
    "one_phase_harmonic": _one_phase_harmonic,
    "two_phase_linear": _two_phase_linear,
    "circle_interface": _circle_interface,
    "three_sector": _three_sector,
    "junction_symmetric": _junction_symmetric,
    "junction_asymmetric": _junction_asymmetric,
}

PRESET_NAMES = tuple(sorted(_BUILDERS))


def get_preset(name: str) -> Preset:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise InvalidArgument(
            f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}"
        ) from None


def recovery_config(preset: Preset, eps: float, delta: float = 1.0,
                    family: ProfileFamily = ProfileFamily.COMPACT_RAMP) -> RecoveryConfig:
    if preset.recovery is None:
        raise InvalidArgument(f"preset {preset.name!r} ships no recovery fixture")
    fx = preset.recovery
    return RecoveryConfig(
        eps=eps,
        extent=fx.extent,
        input=fx.input,
        phi=fx.phi,
        interfaces=fx.interfaces,
        junctions=fx.junctions,
        delta=delta,
        family=family,
    )


def feasible_candidate(preset: Preset, grid: Grid) -> PhaseTriple:
    """Segregated competitor with the preset's exact traces.

    Componentwise harmonic extensions minus their pointwise minimum: the
    minimum vanishes on the boundary (the data is segregated there), every
    node has at least one zero component, and non-negativity is literal.
    """
    if preset.phi is None:
        raise InvalidArgument(f"preset {preset.name!r} has no solver boundary data")
    phi_arrays = evaluate_boundary(grid, preset.phi)
    triple, _ = harmonic_extension(grid, phi_arrays)
    v1, v2, v3 = triple.arrays()
    m = np.minimum(np.minimum(v1, v2), v3)
    from .field import ScalarField

    return PhaseTriple(
        ScalarField(grid, v1 - m),
        ScalarField(grid, v2 - m),
        ScalarField(grid, v3 - m),
    )
