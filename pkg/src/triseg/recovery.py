"""Recovery-sequence assembly: patches blended by an explicit partition of unity.

The partition is hierarchical: the boundary layer claims its weight first,
junction balls next, interface tubes next, and the containing bulk region
takes the exact multiplicative remainder.  Gating factors make at most one
special weight positive at any point, so at most two weights are active
anywhere, the sum is algebraically one, and every weight is supported in the
sqrt(eps)-neighborhood of its feature.

Patch values feed off the input triple: interface profiles read their levels
at a 2*sqrt(eps) offset along the normal (on the interface itself continuity
would force zero), junction patches read the input on the 2*sqrt(eps) ring
and regularize radially, and the boundary patch interpolates between the
prescribed trace and the input.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, InvalidGeometry
from .field import Grid, PhaseTriple, ScalarField
from .geometry import (
    CircleInterface,
    JunctionSpec,
    LABEL_PATTERN,
    RegionLabel,
    SegmentInterface,
)
from .profiles import (
    ProfileFamily,
    angular_cutoff,
    angular_cutoff_deriv,
    half_up,
    ramp_rho,
    step_up,
)

__all__ = [
    "AnalyticTriple",
    "RecoveryConfig",
    "CutoffWeights",
    "partition_weights",
    "build_interface_patch",
    "build_junction_patch",
    "build_boundary_layer",
    "assemble_recovery",
    "JunctionScalingPatch",
    "asymptotic_ring_profile",
    "bump_ring_profile",
    "cutoff_triple_overlap",
    "halton_points",
    "write_manifest",
    "geometry_hash",
]

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# inputs


@dataclass
class AnalyticTriple:
    """Segregated input triple given by closed-form component functions.

    funcs: three vectorized callables (x, y) -> values.
    pattern: callable (x, y) -> RegionLabel codes of the containing bulk
    region (used to mask bulk copies to their exact support).
    """

    funcs: tuple
    pattern: object

    def component(self, i: int, x, y):
        out = np.asarray(self.funcs[i - 1](x, y), dtype=float)
        return out + np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)

    def labels(self, x, y):
        lab = np.asarray(self.pattern(x, y))
        return lab + np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape, dtype=lab.dtype)

    def sample(self, grid: Grid) -> PhaseTriple:
        x, y = grid.nodes()
        return PhaseTriple(
            ScalarField(grid, self.component(1, x, y)),
            ScalarField(grid, self.component(2, x, y)),
            ScalarField(grid, self.component(3, x, y)),
        )


@dataclass
class RecoveryConfig:
    eps: float
    extent: tuple  # (x0, x1, y0, y1)
    input: AnalyticTriple
    phi: tuple  # three trace callables
    interfaces: tuple = ()
    junctions: tuple = ()
    delta: float = 1.0
    family: ProfileFamily = ProfileFamily.COMPACT_RAMP

    def __post_init__(self):
        if self.eps <= 0.0:
            raise InvalidArgument("eps must be positive")
        if self.delta < 1.0:
            raise InvalidArgument("delta must be >= 1")
        w = math.sqrt(self.eps)
        x0, x1, y0, y1 = self.extent
        for j in self.junctions:
            cx, cy = j.center
            margin = min(cx - x0, x1 - cx, cy - y0, y1 - cy)
            if margin < 2.0 * w:
                raise InvalidGeometry(
                    f"junction ball of radius 2*sqrt(eps)={2 * w:.4g} exits the domain"
                )
            for a in (j.alpha1, j.alpha2, j.alpha3):
                if a <= 4.0 * w:
                    raise InvalidGeometry(
                        f"junction sector width {a:.4g} <= 4*sqrt(eps)={4 * w:.4g}"
                    )
        self._check_interface_separation(w)

    def _check_interface_separation(self, w: float) -> None:
        """Sampled check that distinct interfaces stay > 2*sqrt(eps) apart
        outside declared junction balls."""
        pts = []
        for g in self.interfaces:
            if isinstance(g, CircleInterface):
                tt = np.linspace(0.0, TWO_PI, 64, endpoint=False)
            else:
                tt = np.linspace(0.0, g.length, 64)
            px, py = g.point(tt)
            pts.append((np.asarray(px, dtype=float), np.asarray(py, dtype=float)))
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                ax, ay = pts[a]
                bx, by = pts[b]
                d = np.hypot(ax[:, None] - bx[None, :], ay[:, None] - by[None, :])
                if self.junctions:
                    near_j = np.zeros(d.shape, dtype=bool)
                    for j in self.junctions:
                        da = np.hypot(ax - j.center[0], ay - j.center[1])
                        db = np.hypot(bx - j.center[0], by - j.center[1])
                        near_j |= (da[:, None] < 3.0 * w) | (db[None, :] < 3.0 * w)
                    d = np.where(near_j, np.inf, d)
                if d.size and float(np.min(d)) <= 2.0 * w:
                    raise InvalidGeometry(
                        "interfaces closer than 2*sqrt(eps) away from declared junctions"
                    )


# ---------------------------------------------------------------------------
# partition of unity


@dataclass
class CutoffWeights:
    psi_boundary: np.ndarray
    psi_junction: np.ndarray
    psi_interface: np.ndarray
    psi_bulk: np.ndarray
    junction_index: np.ndarray  # -1 where psi_junction = 0
    interface_index: np.ndarray  # -1 where psi_interface = 0
    d_boundary: np.ndarray
    d_junction: np.ndarray
    d_interface: np.ndarray

    def total(self) -> np.ndarray:
        return self.psi_boundary + self.psi_junction + self.psi_interface + self.psi_bulk

    def active_counts(self) -> np.ndarray:
        return (
            (self.psi_boundary > 0.0).astype(np.int8)
            + (self.psi_junction > 0.0).astype(np.int8)
            + (self.psi_interface > 0.0).astype(np.int8)
            + (self.psi_bulk > 0.0).astype(np.int8)
        )


def _boundary_distance(x, y, extent):
    x0, x1, y0, y1 = extent
    return np.minimum(np.minimum(x - x0, x1 - x), np.minimum(y - y0, y1 - y))


def partition_weights(x, y, cfg: RecoveryConfig) -> CutoffWeights:
    """Hierarchical cutoff weights at the given points.

    psi_boundary = rho(2(sqrt(eps) - d_bd)/sqrt(eps)); the junction weight
    takes the same ramp of its own distance times (1 - psi_boundary) and a
    gate vanishing for d_bd <= sqrt(eps); interfaces are gated on both the
    junction and boundary distances; the containing bulk region receives the
    exact remainder.  The gates make boundary/junction/interface activations
    mutually exclusive, so at most one special weight plus the bulk weight is
    positive at any point.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = math.sqrt(cfg.eps)

    d_bd = _boundary_distance(x, y, cfg.extent)
    B = np.asarray(ramp_rho(2.0 * (w - d_bd) / w))

    if cfg.junctions:
        dj = np.stack(
            [np.hypot(x - j.center[0], y - j.center[1]) for j in cfg.junctions]
        )
        j_idx = np.argmin(dj, axis=0)
        d_junc = np.take_along_axis(dj, j_idx[None], axis=0)[0]
    else:
        d_junc = np.full(x.shape, np.inf)
        j_idx = np.full(x.shape, -1, dtype=int)
    gate_bd = np.asarray(ramp_rho(2.0 * (d_bd - w) / w))
    J = np.asarray(ramp_rho(2.0 * (w - d_junc) / w)) * gate_bd

    if cfg.interfaces:
        di = np.stack([np.asarray(g.distance(x, y)) for g in cfg.interfaces])
        i_idx = np.argmin(di, axis=0)
        d_if = np.take_along_axis(di, i_idx[None], axis=0)[0]
    else:
        d_if = np.full(x.shape, np.inf)
        i_idx = np.full(x.shape, -1, dtype=int)
    gate_junc = np.asarray(ramp_rho(2.0 * (d_junc - w) / w))
    G = np.asarray(ramp_rho(2.0 * (w - d_if) / w)) * gate_junc * gate_bd

    psi_bd = B
    psi_junc = (1.0 - B) * J
    psi_if = (1.0 - B) * (1.0 - J) * G
    psi_bulk = (1.0 - B) * (1.0 - J) * (1.0 - G)

    return CutoffWeights(
        psi_boundary=psi_bd,
        psi_junction=psi_junc,
        psi_interface=psi_if,
        psi_bulk=psi_bulk,
        junction_index=np.where(psi_junc > 0.0, j_idx, -1),
        interface_index=np.where(psi_if > 0.0, i_idx, -1),
        d_boundary=d_bd,
        d_junction=d_junc,
        d_interface=d_if,
    )


# ---------------------------------------------------------------------------
# patches


def _sample_offset(itf, eps: float) -> float:
    """Offset along the normal at which interface levels are read."""
    off = 2.0 * math.sqrt(eps)
    if isinstance(itf, CircleInterface):
        off = min(off, 0.5 * itf.radius)
    return off


def build_interface_patch(itf, inp: AnalyticTriple, eps: float,
                          family: ProfileFamily, x, y):
    """Evaluate the local interface model at the given points.

    Components shared by both sides blend their two offset levels through a
    rising step; one-sided components switch off through hard-zero half
    profiles (type I uses full steps).  The third component is identically
    zero for types I/IIa/IIb and the two switching components of type III
    have disjoint supports, so the triple product vanishes exactly.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = math.sqrt(eps)
    s, t = itf.coords(x, y)
    tc = itf.clamp_param(t)
    fx, fy = itf.point(tc)
    nx, ny = itf.normal(tc)
    off = _sample_offset(itf, eps)

    neg = set(itf.side_neg)
    pos = set(itf.side_pos)
    common = neg & pos
    z = s / w

    out = []
    for i in (1, 2, 3):
        if i in common:
            ua = inp.component(i, fx - off * nx, fy - off * ny)
            ub = inp.component(i, fx + off * nx, fy + off * ny)
            vals = ua + (ub - ua) * np.asarray(step_up(z, family))
        elif i in neg:
            ua = inp.component(i, fx - off * nx, fy - off * ny)
            if itf.type_tag == "I":
                vals = ua * np.asarray(step_up(-z, family))
            else:
                vals = ua * np.asarray(half_up(-z, family))
        elif i in pos:
            ub = inp.component(i, fx + off * nx, fy + off * ny)
            if itf.type_tag == "I":
                vals = ub * np.asarray(step_up(z, family))
            else:
                vals = ub * np.asarray(half_up(z, family))
        else:
            vals = np.zeros(np.broadcast(x, y).shape)
        out.append(vals)
    return tuple(out)


def build_junction_patch(j: JunctionSpec, inp: AnalyticTriple, cfg: RecoveryConfig,
                         x, y):
    """Junction triple on the 2*sqrt(eps) ball around the junction center.

    Inside the ball each component is its sector cutoff times the input read
    on the 2*sqrt(eps) ring, scaled by (r / 2 sqrt(eps))^delta; outside it
    copies the input.  All components vanish at the center.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = math.sqrt(cfg.eps)
    r0 = 2.0 * w
    cx, cy = j.center
    dx = x - cx
    dy = y - cy
    r = np.hypot(dx, dy)
    theta_abs = np.arctan2(dy, dx)
    theta_rel = np.mod(theta_abs - j.base_angle, TWO_PI)
    ring_x = cx + r0 * np.cos(theta_abs)
    ring_y = cy + r0 * np.sin(theta_abs)
    radial = np.where(r < r0, (np.minimum(r, r0) / r0) ** cfg.delta, 1.0)
    inner = r < r0

    out = []
    for i in (1, 2, 3):
        sector = 1 + j.components.index(i)
        chi = np.asarray(angular_cutoff(sector, theta_rel, cfg.eps, j, cfg.family))
        ring_vals = inp.component(i, ring_x, ring_y)
        inside_vals = chi * ring_vals * radial
        outside_vals = inp.component(i, x, y)
        out.append(np.where(inner, inside_vals, outside_vals))
    return tuple(out)


def _project_to_boundary(x, y, extent):
    """Closest-point projection onto the rectangle boundary.

    Ties resolve in the fixed order left, right, bottom, top; points already
    on the boundary project to themselves exactly.
    """
    x0, x1, y0, y1 = extent
    d = np.stack([x - x0, x1 - x, y - y0, y1 - y])
    which = np.argmin(d, axis=0)
    px = np.where(which == 0, x0, np.where(which == 1, x1, x))
    py = np.where(which == 2, y0, np.where(which == 3, y1, y))
    return px, py


def build_boundary_layer(inp: AnalyticTriple, phi, eps: float, extent, x, y):
    """Trace-pinning layer: phi at the boundary, the input beyond sqrt(eps)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = math.sqrt(eps)
    d = _boundary_distance(x, y, extent)
    px, py = _project_to_boundary(x, y, extent)
    chi = np.asarray(ramp_rho(d / w))
    out = []
    for i in (1, 2, 3):
        pb = np.asarray(phi[i - 1](px, py), dtype=float) + np.zeros(np.broadcast(x, y).shape)
        ui = inp.component(i, x, y)
        out.append(pb + (ui - pb) * chi)
    return tuple(out)


# ---------------------------------------------------------------------------
# global assembly


def _bulk_patch(inp: AnalyticTriple, x, y):
    """Input copy masked to the exact support pattern of the containing region."""
    labels = inp.labels(x, y)
    out = []
    for i in (1, 2, 3):
        keep = np.zeros(labels.shape, dtype=bool)
        for lab, pat in LABEL_PATTERN.items():
            if i in pat:
                keep |= labels == int(lab)
        vals = np.where(keep, inp.component(i, x, y), 0.0)
        out.append(vals)
    return tuple(out)


def assemble_recovery(cfg: RecoveryConfig, grid: Grid,
                      check_input: bool = True) -> PhaseTriple:
    """Blend all patches nodewise with the partition weights.

    Only patches with positive weight are evaluated.  Boundary nodes carry
    weight one on the trace layer, so the output trace equals phi bit for
    bit.  A constraint-violating input is rejected: no recovery exists in
    that case, the penalized energies blow up instead.
    """
    x, y = grid.nodes()
    xf = x.ravel()
    yf = y.ravel()

    if check_input:
        u1 = cfg.input.component(1, xf, yf)
        u2 = cfg.input.component(2, xf, yf)
        u3 = cfg.input.component(3, xf, yf)
        scale = max(float(np.max(np.abs(v))) for v in (u1, u2, u3))
        prod = float(np.max(np.abs((u1 * u2) * u3)))
        if prod > 1e-10 * max(scale, 1.0) ** 3:
            raise InvalidArgument(
                "input violates the segregation constraint; no recovery exists"
            )

    weights = partition_weights(xf, yf, cfg)
    out = [np.zeros(xf.shape) for _ in range(3)]

    m = weights.psi_bulk > 0.0
    if np.any(m):
        vals = _bulk_patch(cfg.input, xf[m], yf[m])
        for i in range(3):
            out[i][m] += weights.psi_bulk[m] * vals[i]

    m = weights.psi_boundary > 0.0
    if np.any(m):
        vals = build_boundary_layer(cfg.input, cfg.phi, cfg.eps, cfg.extent,
                                    xf[m], yf[m])
        for i in range(3):
            out[i][m] += weights.psi_boundary[m] * vals[i]

    for k, j in enumerate(cfg.junctions):
        m = (weights.psi_junction > 0.0) & (weights.junction_index == k)
        if np.any(m):
            vals = build_junction_patch(j, cfg.input, cfg, xf[m], yf[m])
            for i in range(3):
                out[i][m] += weights.psi_junction[m] * vals[i]

    for k, itf in enumerate(cfg.interfaces):
        m = (weights.psi_interface > 0.0) & (weights.interface_index == k)
        if np.any(m):
            vals = build_interface_patch(itf, cfg.input, cfg.eps, cfg.family,
                                         xf[m], yf[m])
            for i in range(3):
                out[i][m] += weights.psi_interface[m] * vals[i]

    shape = grid.shape
    return PhaseTriple(
        ScalarField(grid, out[0].reshape(shape)),
        ScalarField(grid, out[1].reshape(shape)),
        ScalarField(grid, out[2].reshape(shape)),
    )


# ---------------------------------------------------------------------------
# analytic junction patch for the scaling experiments


def bump_ring_profile(j: JunctionSpec, eps: float, radial_power: float = 0.75):
    """Ring levels of the pure-sector bump fixture at radius 2*sqrt(eps).

    A_i(theta) = (2 sqrt(eps))^p * sin(pi (theta - a_i) / width_i) inside
    component i's sector, zero outside; vanishes at every sector boundary
    with nonzero slope.
    """
    amp = (2.0 * math.sqrt(eps)) ** radial_power
    bounds = (0.0, j.alpha1, j.alpha1 + j.alpha2, TWO_PI)

    def _sector_of_component(i):
        return j.components.index(i)

    def value(i, theta):
        k = _sector_of_component(i)
        lo, hi = bounds[k], bounds[k + 1]
        th = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        inside = (th >= lo) & (th < hi)
        prof = np.sin(math.pi * (th - lo) / (hi - lo))
        return np.where(inside, amp * np.maximum(prof, 0.0), 0.0)

    def deriv(i, theta):
        k = _sector_of_component(i)
        lo, hi = bounds[k], bounds[k + 1]
        th = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        inside = (th >= lo) & (th < hi)
        d = amp * (math.pi / (hi - lo)) * np.cos(math.pi * (th - lo) / (hi - lo))
        return np.where(inside, d, 0.0)

    kinks = [b % TWO_PI for b in bounds]
    return value, deriv, sorted(set(kinks))


def asymptotic_ring_profile(j: JunctionSpec, eps: float):
    """Ring levels from the junction asymptotics, clipped to positive part.

    Returns (value, derivative, kinks): A_i(theta) = (2 sqrt(eps))^(3/4)
    * max(0, sin(3 theta/4 - 2(i-1) pi/3)) in junction-relative angle, its
    angular derivative, and the clip kink locations in [0, 2 pi].
    """
    amp = (2.0 * math.sqrt(eps)) ** 0.75

    def value(i, theta):
        arg = 0.75 * np.asarray(theta, dtype=float) - 2.0 * (i - 1) * math.pi / 3.0
        return amp * np.maximum(np.sin(arg), 0.0)

    def deriv(i, theta):
        theta = np.asarray(theta, dtype=float)
        arg = 0.75 * theta - 2.0 * (i - 1) * math.pi / 3.0
        return np.where(np.sin(arg) > 0.0, amp * 0.75 * np.cos(arg), 0.0)

    kinks = []
    for i in (1, 2, 3):
        phase = 2.0 * (i - 1) * math.pi / 3.0
        for k in range(-2, 4):
            th = (phase + k * math.pi) / 0.75
            if 0.0 <= th <= TWO_PI:
                kinks.append(th)
    return value, deriv, sorted(set(kinks))


@dataclass
class JunctionScalingPatch:
    """Analytic junction recovery patch u_i = chi_i(theta) A_i(theta) (r/2w)^d.

    Provides pointwise polar derivatives and the angular piece decomposition
    used by the ball-energy quadrature.  band_factor is the A/B split half
    width in units of sqrt(eps); by default it matches the profile family's
    transition capture width.
    """

    junction: JunctionSpec
    eps: float
    delta: float = 1.0
    family: ProfileFamily = ProfileFamily.COMPACT_RAMP
    band_factor: float | None = None
    # (value, deriv, kinks) triple, or "asymptotic" | "bump"
    ring: object = "asymptotic"

    def __post_init__(self):
        if self.ring == "asymptotic":
            self.ring = asymptotic_ring_profile(self.junction, self.eps)
        elif self.ring == "bump":
            self.ring = bump_ring_profile(self.junction, self.eps)
        if self.band_factor is None:
            from .energy import band_halfwidth_factor

            self.band_factor = band_halfwidth_factor(self.family)

    def _chi(self, sector, theta):
        return np.asarray(angular_cutoff(sector, theta, self.eps, self.junction,
                                         self.family))

    def _chi_d(self, sector, theta):
        return np.asarray(angular_cutoff_deriv(sector, theta, self.eps,
                                               self.junction, self.family))

    def component_polar(self, i: int, r, theta_rel):
        value, _, _ = self.ring
        sector = 1 + self.junction.components.index(i)
        r0 = 2.0 * math.sqrt(self.eps)
        rad = (np.asarray(r, dtype=float) / r0) ** self.delta
        return self._chi(sector, theta_rel) * np.asarray(value(i, theta_rel)) * rad

    def energy_density(self, r, theta_rel):
        """|grad u|^2 summed over components, in polar coordinates."""
        value, deriv, _ = self.ring
        r = np.asarray(r, dtype=float)
        r0 = 2.0 * math.sqrt(self.eps)
        rad = (r / r0) ** self.delta
        rad_d = (self.delta / r0) * (r / r0) ** (self.delta - 1.0)
        dens = np.zeros(np.broadcast(r, np.asarray(theta_rel)).shape)
        for i in (1, 2, 3):
            sector = 1 + self.junction.components.index(i)
            chi = self._chi(sector, theta_rel)
            chi_d = self._chi_d(sector, theta_rel)
            a = np.asarray(value(i, theta_rel))
            a_d = np.asarray(deriv(i, theta_rel))
            du_dr = chi * a * rad_d
            du_dth = (chi_d * a + chi * a_d) * rad
            dens = dens + du_dr * du_dr + (du_dth * du_dth) / (r * r)
        return dens

    def band_halfwidth(self) -> float:
        return self.band_factor * math.sqrt(self.eps)

    def angular_pieces(self):
        """Breakpoints -> (lo, hi, in_band) smooth angular pieces on [0, 2pi]."""
        _, _, kinks = self.ring
        w = math.sqrt(self.eps)
        bw = self.band_halfwidth()
        bounds = [0.0, self.junction.alpha1,
                  self.junction.alpha1 + self.junction.alpha2, TWO_PI]
        pts = set()
        for b in bounds:
            for off in (-bw, -w, 0.0, w, bw):
                pts.add((b + off) % TWO_PI)
        for k in kinks:
            pts.add(k % TWO_PI)
        pts.add(0.0)
        pts.add(TWO_PI)
        cuts = sorted(p for p in pts if 0.0 <= p <= TWO_PI)
        if cuts[-1] < TWO_PI:
            cuts.append(TWO_PI)

        def in_band(theta):
            d = [min(abs(theta - b) % TWO_PI, TWO_PI - abs(theta - b) % TWO_PI)
                 for b in bounds[:3]]
            return min(d) < bw

        pieces = []
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi - lo < 1e-14:
                continue
            pieces.append((lo, hi, in_band(0.5 * (lo + hi))))
        return pieces

    def ball_energy_split(self, n_radial: int = 64, n_angular: int = 32):
        from .energy import junction_patch_ball_split

        return junction_patch_ball_split(self, n_radial, n_angular)


def cutoff_triple_overlap(j: JunctionSpec, eps: float, family: ProfileFamily,
                          n: int = 4096) -> float:
    """Max over a dense angle scan of chi_1 * chi_2 * chi_3.

    Zero for CompactRamp cutoffs with admissible sectors; exponentially small
    in 1/sqrt(eps) for SmoothTanh.  This is the only constraint slack the
    construction admits: field-level products also carry the input's own
    ring segregation, which vanishes identically.
    """
    theta = TWO_PI * (np.arange(n) + 0.5) / n
    prod = np.ones(n)
    for sector in (1, 2, 3):
        prod = prod * np.asarray(angular_cutoff(sector, theta, eps, j, family))
    return float(np.max(prod))


# ---------------------------------------------------------------------------
# utilities


def halton_points(n: int, extent, skip: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic quasirandom points in the open rectangle (bases 2, 3)."""

    def radical_inverse(base: int, idx: np.ndarray) -> np.ndarray:
        out = np.zeros(idx.shape)
        f = 1.0 / base
        i = idx.copy()
        while np.any(i > 0):
            out += f * (i % base)
            i //= base
            f /= base
        return out

    idx = np.arange(skip, skip + n)
    u = radical_inverse(2, idx)
    v = radical_inverse(3, idx)
    x0, x1, y0, y1 = extent
    return x0 + (x1 - x0) * u, y0 + (y1 - y0) * v


def geometry_hash(cfg: RecoveryConfig) -> str:
    parts = [f"extent={tuple(round(float(v), 12) for v in cfg.extent)}"]
    for g in cfg.interfaces:
        if isinstance(g, SegmentInterface):
            parts.append(
                f"segment:{g.p0}:{g.p1}:{g.side_neg}:{g.side_pos}:{g.type_tag}"
            )
        elif isinstance(g, CircleInterface):
            parts.append(
                f"circle:{g.center}:{g.radius}:{g.side_neg}:{g.side_pos}:{g.type_tag}"
            )
        else:
            parts.append(repr(g))
    for j in cfg.junctions:
        parts.append(
            f"junction:{j.center}:{j.alpha1}:{j.alpha2}:{j.base_angle}:{j.components}"
        )
    return hashlib.sha256("|".join(parts).encode()).hexdigest()[:16]


def write_manifest(path, entries: dict) -> None:
    """Plain text key: value manifest."""
    with open(path, "w") as fh:
        for k, v in entries.items():
            fh.write(f"{k}: {v}\n")
