"""The three functionals: penalized, unconstrained and constrained energies.

Includes per-region breakdowns for the scaling harness and the junction-ball
energy split into bulk sectors (E_A) and angular transition bands (E_B).
The analytic-patch path integrates with tensorized Gauss-Legendre quadrature
in polar coordinates, splitting the angular axis at profile breakpoints so
the mild r^(-1/2)-type density at the junction center is the only
singularity and it is handled by the radial rule exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import InvalidArgument, InvalidGeometry
from .field import PhaseTriple, dirichlet_energy, l2_norm, product_field
from .geometry import JunctionSpec, RegionLabel, RegionMap, classify

__all__ = [
    "EnergyBreakdown",
    "penalty",
    "energy_eps",
    "energy_constrained",
    "energy_gradient",
    "junction_ball_split",
    "band_halfwidth_factor",
]

TWO_PI = 2.0 * math.pi


@dataclass
class EnergyBreakdown:
    dirichlet: tuple[float, float, float]
    penalty: float
    total_eps: float
    total_constrained: float  # math.inf when infeasible
    per_region: dict = dc_field(default_factory=dict)
    junction_balls: list = dc_field(default_factory=list)  # [(E_A, E_B), ...]

    @property
    def dirichlet_total(self) -> float:
        return self.dirichlet[0] + self.dirichlet[1] + self.dirichlet[2]


def penalty(t: PhaseTriple, eps: float) -> float:
    """(1/eps) times the squared L2 norm of the triple product."""
    if eps <= 0.0:
        raise InvalidArgument("eps must be positive")
    n = l2_norm(product_field(t))
    return (n * n) / eps


def energy_constrained(t: PhaseTriple, tol: float | None = None,
                       phi_arrays=None) -> float:
    """Constrained Dirichlet energy: sum of components if feasible, inf else.

    Feasibility: the product's L2 norm below tol (default 1e-10 * scale^3),
    non-negativity up to 1e-12 * scale, and, when boundary data is supplied,
    exact trace match up to the same slack.
    """
    scale = max(max(float(np.max(np.abs(a))) for a in t.arrays()), 1.0)
    if tol is None:
        tol = 1e-10 * scale**3
    if tol <= 0.0:
        raise InvalidArgument("tol must be positive")
    if l2_norm(product_field(t)) > tol:
        return math.inf
    if min(float(a.min()) for a in t.arrays()) < -1e-12 * scale:
        return math.inf
    if phi_arrays is not None:
        mask = t.grid.boundary_mask()
        for u, p in zip(t.arrays(), phi_arrays):
            if float(np.max(np.abs(u[mask] - p[mask]))) > 1e-12 * scale:
                return math.inf
    return sum(dirichlet_energy(u) for u in t.components())


def energy_eps(t: PhaseTriple, eps: float, region_map: RegionMap | None = None,
               junctions: list[JunctionSpec] | None = None,
               with_regions: bool = False) -> EnergyBreakdown:
    """Full penalized-energy breakdown.

    Per-region Dirichlet parts (cell energies keyed by the cell's lower-left
    node label) and junction-ball splits are only computed when requested;
    they are diagnostics, not needed on the solve hot path.
    """
    d = tuple(dirichlet_energy(u) for u in t.components())
    pen = penalty(t, eps)
    total = d[0] + d[1] + d[2] + pen
    constrained = energy_constrained(t)

    per_region: dict = {}
    if with_regions or region_map is not None:
        rm = region_map if region_map is not None else classify(t)
        cell_labels = rm.labels[:-1, :-1].astype(np.int64)
        g = t.grid
        cell_e = np.zeros(cell_labels.shape)
        for u in t.components():
            v = u.values
            dx = v[:-1, 1:] - v[:-1, :-1]
            dy = v[1:, :-1] - v[:-1, :-1]
            cell_e += (g.hy / g.hx) * dx * dx + (g.hx / g.hy) * dy * dy
        sums = np.bincount(
            cell_labels.ravel(), weights=cell_e.ravel(),
            minlength=int(RegionLabel.BOUNDARY_LAYER) + 1,
        )
        per_region = {
            RegionLabel(k): float(sums[k]) for k in range(sums.size) if sums[k] != 0.0
        }

    balls = []
    if junctions:
        for j in junctions:
            balls.append(junction_ball_split(t, j, eps))

    return EnergyBreakdown(
        dirichlet=d,
        penalty=pen,
        total_eps=total,
        total_constrained=constrained,
        per_region=per_region,
        junction_balls=balls,
    )


def energy_gradient(t: PhaseTriple, eps: float):
    """Nodal gradient of the discrete penalized energy (zero on the boundary).

    The Dirichlet part's derivative at interior nodes is the 5-point
    Laplacian form of the cell-based energy; the penalty part differentiates
    the nodal trapezoid quadrature (interior weight hx*hy).
    """
    if eps <= 0.0:
        raise InvalidArgument("eps must be positive")
    g = t.grid
    u1, u2, u3 = t.arrays()
    area = g.hx * g.hy
    cx = g.hy / g.hx
    cy = g.hx / g.hy
    others = ((u2, u3), (u1, u3), (u1, u2))
    grads = []
    for u, (a, b) in zip(t.arrays(), others):
        grad = np.zeros(g.shape)
        core = u[1:-1, 1:-1]
        lapish = cx * (2.0 * core - u[1:-1, :-2] - u[1:-1, 2:]) + cy * (
            2.0 * core - u[:-2, 1:-1] - u[2:, 1:-1]
        )
        pen = (
            (2.0 / eps)
            * core
            * (a[1:-1, 1:-1] * a[1:-1, 1:-1])
            * (b[1:-1, 1:-1] * b[1:-1, 1:-1])
            * area
        )
        grad[1:-1, 1:-1] = 2.0 * lapish + pen
        grads.append(grad)
    return tuple(grads)


# ---------------------------------------------------------------------------
# junction ball energies


def band_halfwidth_factor(family) -> float:
    """Angular half-width of the A/B transition band, in units of sqrt(eps).

    CompactRamp transitions occupy exactly +-sqrt(eps) around each sector
    boundary; tanh transitions need two widths to capture all but an
    exponentially small remainder of |chi'|^2.
    """
    from .profiles import ProfileFamily

    return 1.0 if family is ProfileFamily.COMPACT_RAMP else 2.0


def _angular_band_mask(theta_rel, junction: JunctionSpec, half_width: float):
    bounds = np.array([0.0, junction.alpha1, junction.alpha1 + junction.alpha2])
    th = np.asarray(theta_rel, dtype=float)[..., None]
    d = np.abs(th - bounds[None, :])
    d = np.minimum(d, TWO_PI - d)
    return np.min(d, axis=-1) < half_width


def junction_ball_split(t: PhaseTriple, j: JunctionSpec, eps: float,
                        band_factor: float = 1.0):
    """Grid-quadrature split of the Dirichlet energy in the sqrt(eps)-ball.

    Cells whose centers fall in the ball contribute to E_B when the center's
    angle lies within band_factor*sqrt(eps) of a sector boundary, to E_A
    otherwise.
    """
    if eps <= 0.0:
        raise InvalidArgument("eps must be positive")
    g = t.grid
    w = math.sqrt(eps)
    cx, cy = j.center
    if not (g.x0 <= cx - w and cx + w <= g.x1 and g.y0 <= cy - w and cy + w <= g.y1):
        raise InvalidGeometry("junction ball exits the domain")

    xs = g.x0 + g.hx * (np.arange(g.nx) + 0.5)
    ys = g.y0 + g.hy * (np.arange(g.ny) + 0.5)
    X, Y = np.meshgrid(xs, ys)
    inside = (X - cx) ** 2 + (Y - cy) ** 2 < w * w
    if not np.any(inside):
        return (0.0, 0.0)

    cell_e = np.zeros((g.ny, g.nx))
    for u in t.components():
        v = u.values
        dx = v[:-1, 1:] - v[:-1, :-1]
        dy = v[1:, :-1] - v[:-1, :-1]
        cell_e += (g.hy / g.hx) * dx * dx + (g.hx / g.hy) * dy * dy

    theta = np.mod(np.arctan2(Y - cy, X - cx) - j.base_angle, TWO_PI)
    in_band = _angular_band_mask(theta, j, band_factor * w)
    e_b = float(np.sum(cell_e[inside & in_band]))
    e_a = float(np.sum(cell_e[inside & ~in_band]))
    return (e_a, e_b)


def junction_patch_ball_split(patch, n_radial: int = 64,
                              n_angular_per_piece: int = 32):
    """Analytic-quadrature split for a junction recovery patch.

    Integrates |grad u|^2 = (du/dr)^2 + (du/dtheta)^2 / r^2 over the
    sqrt(eps)-ball in polar coordinates using a tensor Gauss-Legendre rule:
    one radial panel (the integrand is r^(2 delta - 1), polynomial for the
    shipped deltas) and per-piece angular panels split at the patch's
    breakpoints so every piece is smooth.  Returns (E_A, E_B).
    """
    eps = patch.eps
    w = math.sqrt(eps)
    xr, wr = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * w * (xr + 1.0)
    wr = 0.5 * w * wr

    pieces = patch.angular_pieces()
    xa, wa = np.polynomial.legendre.leggauss(n_angular_per_piece)
    e_a = 0.0
    e_b = 0.0
    for (lo, hi, in_band) in pieces:
        th = 0.5 * (hi - lo) * (xa + 1.0) + lo
        wth = 0.5 * (hi - lo) * wa
        # radial x angular tensor grid
        R = r[:, None]
        TH = th[None, :]
        dens = patch.energy_density(R, TH)
        val = float(np.sum((dens * R) * (wr[:, None] * wth[None, :])))
        if in_band:
            e_b += val
        else:
            e_a += val
    return (e_a, e_b)
