"""Region classification, interface taxonomy and tubular coordinates.

Bulk labels follow the seven-region decomposition of a segregated triple:
three pure regions, three two-phase regions and the vacuum region.  Analytic
interface objects (segments, circles) are first-class inputs because the
recovery construction needs exact normals and curvatures; extraction from a
RegionMap is provided for diagnostics.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateTube,
    InvalidArgument,
    OutOfTube,
    UnsupportedGeometry,
)
from .field import Grid, PhaseTriple

__all__ = [
    "RegionLabel",
    "RegionMap",
    "JunctionSpec",
    "SegmentInterface",
    "CircleInterface",
    "classify",
    "interface_coords",
    "jacobian",
    "detect_junctions",
    "region_map_to_csv",
]

TWO_PI = 2.0 * math.pi


class RegionLabel(enum.IntEnum):
    ZERO = 0
    PURE1 = 1
    PURE2 = 2
    TWO12 = 3
    PURE3 = 4
    TWO13 = 5
    TWO23 = 6
    NEAR_INTERFACE = 7
    NEAR_JUNCTION = 8
    BOUNDARY_LAYER = 9


_BULK_LABELS = (
    RegionLabel.ZERO,
    RegionLabel.PURE1,
    RegionLabel.PURE2,
    RegionLabel.TWO12,
    RegionLabel.PURE3,
    RegionLabel.TWO13,
    RegionLabel.TWO23,
)

# label value <-> set of positive components (bitmask 1|2|4)
LABEL_PATTERN = {
    RegionLabel.ZERO: (),
    RegionLabel.PURE1: (1,),
    RegionLabel.PURE2: (2,),
    RegionLabel.PURE3: (3,),
    RegionLabel.TWO12: (1, 2),
    RegionLabel.TWO13: (1, 3),
    RegionLabel.TWO23: (2, 3),
}


@dataclass
class RegionMap:
    grid: Grid
    labels: np.ndarray  # int8, RegionLabel values
    near_index: np.ndarray  # int32, feature index for Near* labels, else -1
    violation: np.ndarray  # bool, all three components positive

    def bulk_labels_present(self) -> set:
        vals = set(np.unique(self.labels[self.labels <= RegionLabel.TWO23]))
        return {RegionLabel(v) for v in vals}


@dataclass(frozen=True)
class JunctionSpec:
    """Planar triple junction: center, two sector angles, sector components.

    Sector k (k = 1, 2, 3) spans angles [b_{k-1}, b_k) measured from
    base_angle, with b_0 = 0, b_1 = alpha1, b_2 = alpha1 + alpha2,
    b_3 = 2 pi.  components[k-1] is the phase index positive in sector k.
    """

    center: tuple[float, float]
    alpha1: float
    alpha2: float
    base_angle: float = 0.0
    components: tuple[int, int, int] = (1, 2, 3)

    def __post_init__(self):
        if not (self.alpha1 > 0.0 and self.alpha2 > 0.0):
            raise InvalidArgument("sector angles must be positive")
        if self.alpha1 + self.alpha2 >= TWO_PI:
            raise InvalidArgument("alpha1 + alpha2 must be < 2 pi")
        if sorted(self.components) != [1, 2, 3]:
            raise InvalidArgument("components must be a permutation of (1, 2, 3)")

    @property
    def alpha3(self) -> float:
        return TWO_PI - self.alpha1 - self.alpha2

    def theta_rel(self, x, y):
        """Angle relative to the first ray, in [0, 2 pi)."""
        cx, cy = self.center
        th = np.arctan2(np.asarray(y, dtype=float) - cy, np.asarray(x, dtype=float) - cx)
        return np.mod(th - self.base_angle, TWO_PI)

    def ray_angles(self) -> tuple[float, float, float]:
        b = self.base_angle
        return (b, b + self.alpha1, b + self.alpha1 + self.alpha2)

    def sector_of(self, theta_rel):
        """Sector index (1..3) for relative angles."""
        t = np.mod(np.asarray(theta_rel, dtype=float), TWO_PI)
        out = np.where(t < self.alpha1, 1, np.where(t < self.alpha1 + self.alpha2, 2, 3))
        return out if out.ndim else int(out)


# ---------------------------------------------------------------------------
# classification


def classify(t: PhaseTriple, tol: float | None = None, eps: float | None = None,
             interfaces=None, junctions=None) -> RegionMap:
    """Label every node with its bulk region by thresholding.

    tol defaults to 1e-8 times the max field amplitude.  Nodes where all
    three components exceed tol are flagged as constraint violations and
    labeled by their two largest components.  When eps is given, nodes within
    sqrt(eps) of supplied interfaces/junctions/boundary get Near* overlays.
    """
    u1, u2, u3 = t.arrays()
    if tol is None:
        scale = max(float(np.max(np.abs(a))) for a in t.arrays())
        tol = 1e-8 * (scale if scale > 0.0 else 1.0)
    if tol <= 0.0:
        raise InvalidArgument("tol must be positive")

    p1 = u1 > tol
    p2 = u2 > tol
    p3 = u3 > tol
    violation = p1 & p2 & p3

    code = p1.astype(np.int8) + 2 * p2.astype(np.int8) + 4 * p3.astype(np.int8)
    labels = np.empty(code.shape, dtype=np.int8)
    lut = np.array(
        [
            RegionLabel.ZERO,   # 0b000
            RegionLabel.PURE1,  # 0b001
            RegionLabel.PURE2,  # 0b010
            RegionLabel.TWO12,  # 0b011
            RegionLabel.PURE3,  # 0b100
            RegionLabel.TWO13,  # 0b101
            RegionLabel.TWO23,  # 0b110
            RegionLabel.ZERO,   # 0b111 placeholder, fixed below
        ],
        dtype=np.int8,
    )
    labels[:] = lut[code]
    if np.any(violation):
        # drop the smallest component (ties resolved toward lower index)
        stack = np.stack(t.arrays())
        smallest = np.argmin(stack, axis=0)
        viol_lut = np.array(
            [RegionLabel.TWO23, RegionLabel.TWO13, RegionLabel.TWO12], dtype=np.int8
        )
        labels[violation] = viol_lut[smallest[violation]]

    near_index = np.full(code.shape, -1, dtype=np.int32)
    if eps is not None:
        if eps <= 0.0:
            raise InvalidArgument("eps must be positive")
        w = math.sqrt(eps)
        g = t.grid
        x, y = g.nodes()
        if interfaces:
            for k, itf in enumerate(interfaces):
                near = itf.distance(x, y) < w
                labels[near] = RegionLabel.NEAR_INTERFACE
                near_index[near] = k
        if junctions:
            for k, j in enumerate(junctions):
                cx, cy = j.center
                near = np.hypot(x - cx, y - cy) < w
                labels[near] = RegionLabel.NEAR_JUNCTION
                near_index[near] = k
        d_bd = np.minimum(
            np.minimum(x - g.x0, g.x1 - x), np.minimum(y - g.y0, g.y1 - y)
        )
        near = d_bd < w
        labels[near] = RegionLabel.BOUNDARY_LAYER
        near_index[near] = -1

    return RegionMap(grid=t.grid, labels=labels, near_index=near_index,
                     violation=violation)


# ---------------------------------------------------------------------------
# analytic interfaces


@dataclass(frozen=True)
class SegmentInterface:
    """Straight interface segment with constant unit normal.

    Parametrized by arclength t in [0, length]; the normal points from the
    negative side (s < 0) to the positive side (s > 0).  side_neg/side_pos
    are the positive-component patterns of the adjacent bulk regions and
    determine the interface type tag.
    """

    p0: tuple[float, float]
    p1: tuple[float, float]
    side_neg: tuple[int, ...]
    side_pos: tuple[int, ...]
    type_tag: str = "I"

    def __post_init__(self):
        if self.length <= 0.0:
            raise InvalidArgument("segment endpoints must differ")
        if self.type_tag not in ("I", "IIa", "IIb", "III"):
            raise InvalidArgument(f"unknown interface type {self.type_tag!r}")

    @property
    def length(self) -> float:
        return math.hypot(self.p1[0] - self.p0[0], self.p1[1] - self.p0[1])

    @property
    def direction(self) -> tuple[float, float]:
        L = self.length
        return ((self.p1[0] - self.p0[0]) / L, (self.p1[1] - self.p0[1]) / L)

    def normal(self, t=None) -> tuple[float, float]:
        dx, dy = self.direction
        return (dy, -dx)

    def curvature(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def point(self, t):
        t = np.asarray(t, dtype=float)
        dx, dy = self.direction
        return (self.p0[0] + t * dx, self.p0[1] + t * dy)

    def coords(self, x, y):
        """Signed distance s and foot parameter t (t clamped to the segment)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        dx, dy = self.direction
        nx, ny = self.normal()
        rx = x - self.p0[0]
        ry = y - self.p0[1]
        t = rx * dx + ry * dy
        s = rx * nx + ry * ny
        return s, t

    def distance(self, x, y):
        s, t = self.coords(x, y)
        tc = np.clip(t, 0.0, self.length)
        fx, fy = self.point(tc)
        return np.hypot(np.asarray(x, dtype=float) - fx, np.asarray(y, dtype=float) - fy)

    def in_tube(self, x, y):
        s, t = self.coords(x, y)
        return (t >= 0.0) & (t <= self.length)

    def clamp_param(self, t):
        return np.clip(t, 0.0, self.length)

    @property
    def max_curvature(self) -> float:
        return 0.0


@dataclass(frozen=True)
class CircleInterface:
    """Circular interface; normal points radially outward (s > 0 outside)."""

    center: tuple[float, float]
    radius: float
    side_neg: tuple[int, ...]  # inside
    side_pos: tuple[int, ...]  # outside
    type_tag: str = "I"

    def __post_init__(self):
        if self.radius <= 0.0:
            raise InvalidArgument("radius must be positive")
        if self.type_tag not in ("I", "IIa", "IIb", "III"):
            raise InvalidArgument(f"unknown interface type {self.type_tag!r}")

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return (
            self.center[0] + self.radius * np.cos(t),
            self.center[1] + self.radius * np.sin(t),
        )

    def normal(self, t):
        t = np.asarray(t, dtype=float)
        return (np.cos(t), np.sin(t))

    def curvature(self, t):
        # outward normal: area element grows like (R + s)/R
        return np.full_like(np.asarray(t, dtype=float), 1.0 / self.radius)

    def coords(self, x, y):
        """Signed distance s = |x - c| - R and angular parameter t.

        The center point is equidistant from the whole circle; t = 0 is the
        deterministic convention there.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        dx = x - self.center[0]
        dy = y - self.center[1]
        r = np.hypot(dx, dy)
        s = r - self.radius
        t = np.where(r > 0.0, np.arctan2(dy, dx), 0.0)
        return s, np.mod(t, TWO_PI)

    def distance(self, x, y):
        s, _ = self.coords(x, y)
        return np.abs(s)

    def in_tube(self, x, y):
        s, _ = self.coords(x, y)
        return np.abs(s) < self.radius

    def clamp_param(self, t):
        # angular parameter: periodic, nothing to clamp
        return np.mod(t, TWO_PI)

    @property
    def length(self) -> float:
        return TWO_PI * self.radius

    @property
    def max_curvature(self) -> float:
        return 1.0 / self.radius


def interface_coords(g, x, y):
    """Unique closest-point coordinates (s, t); raises OutOfTube otherwise.

    For circles the projection is unique away from the center and within
    |s| < R; for segments the foot must fall inside the parameter range.
    """
    s, t = g.coords(x, y)
    ok = g.in_tube(x, y)
    if not np.all(ok):
        raise OutOfTube("point outside the unique-projection tube")
    return s, t


def jacobian(g, s, t):
    """Tubular coordinate area factor 1 + s*kappa(t) in the plane."""
    s = np.asarray(s, dtype=float)
    jac = 1.0 + s * g.curvature(t)
    if np.any(jac <= 0.0):
        raise DegenerateTube("tubular coordinates degenerate: 1 + s*kappa <= 0")
    return jac if jac.ndim else float(jac)


# ---------------------------------------------------------------------------
# junction detection from a region map


def detect_junctions(rm: RegionMap, ring_radius_cells: int = 10,
                     ring_samples: int = 720) -> list[JunctionSpec]:
    """Find points where three distinct bulk regions meet.

    Scans 2x2 node blocks for >= 3 distinct bulk labels, clusters adjacent
    hits, and estimates sector angles from label runs on a surrounding ring.
    Near*/boundary overlay labels are ignored.
    """
    labels = rm.labels
    bulk = labels <= int(RegionLabel.TWO23)
    work = np.where(bulk, labels, -1)

    a = work[:-1, :-1]
    b = work[:-1, 1:]
    c = work[1:, :-1]
    d = work[1:, 1:]
    stack = np.stack([a, b, c, d])
    valid = np.all(stack >= 0, axis=0)
    distinct = np.ones(a.shape, dtype=np.int8)
    for p in range(1, 4):
        newer = np.ones(a.shape, dtype=bool)
        for q in range(p):
            newer &= stack[p] != stack[q]
        distinct += newer.astype(np.int8)
    hits = valid & (distinct >= 3)
    if np.any(valid & (distinct > 3)):
        raise UnsupportedGeometry("more than three regions meet at a point")
    if not np.any(hits):
        return []

    g = rm.grid
    jj, ii = np.nonzero(hits)
    # block centers
    px = g.x0 + (ii + 0.5) * g.hx
    py = g.y0 + (jj + 0.5) * g.hy

    # greedy clustering by proximity (few hits expected)
    merge_r = 4.0 * max(g.hx, g.hy)
    clusters: list[list[int]] = []
    for k in range(px.size):
        placed = False
        for cl in clusters:
            if math.hypot(px[k] - px[cl[0]], py[k] - py[cl[0]]) < merge_r:
                cl.append(k)
                placed = True
                break
        if not placed:
            clusters.append([k])

    out = []
    for cl in clusters:
        cx = float(np.mean(px[cl]))
        cy = float(np.mean(py[cl]))
        rr = ring_radius_cells * max(g.hx, g.hy)
        th = TWO_PI * (np.arange(ring_samples) + 0.5) / ring_samples
        sx = cx + rr * np.cos(th)
        sy = cy + rr * np.sin(th)
        si = np.clip(np.rint((sx - g.x0) / g.hx).astype(int), 0, g.nx)
        sj = np.clip(np.rint((sy - g.y0) / g.hy).astype(int), 0, g.ny)
        ring = work[sj, si]
        # drop vacuum/invalid samples (rays carry exact zeros); keep angles
        valid = ring > 0
        if not np.any(valid):
            continue
        angles = th[valid]
        labs = ring[valid]
        if len({int(v) for v in labs}) < 3:
            continue
        # circular label-change boundaries
        boundaries = []
        m = labs.size
        for k in range(m):
            nxt = (k + 1) % m
            if labs[k] != labs[nxt]:
                a0 = angles[k]
                a1 = angles[nxt] if nxt != 0 else angles[nxt] + TWO_PI
                boundaries.append(((0.5 * (a0 + a1)) % TWO_PI, int(labs[nxt])))
        if len(boundaries) != 3:
            continue
        boundaries.sort()
        b_angles = [b for b, _ in boundaries]
        sector_labels = [lab for _, lab in boundaries]
        a1 = (b_angles[1] - b_angles[0]) % TWO_PI
        a2 = (b_angles[2] - b_angles[1]) % TWO_PI
        comps = [_label_component(v) for v in sector_labels]
        if any(c is None for c in comps) or sorted(comps) != [1, 2, 3]:
            comps = [1, 2, 3]
        out.append(
            JunctionSpec(
                center=(cx, cy),
                alpha1=float(a1),
                alpha2=float(a2),
                base_angle=float(b_angles[0]),
                components=tuple(comps),
            )
        )
    out.sort(key=lambda j: (j.center[0], j.center[1]))
    return out


def _label_component(v) -> int | None:
    lab = RegionLabel(int(v))
    pat = LABEL_PATTERN.get(lab)
    if pat and len(pat) == 1:
        return pat[0]
    return None


# ---------------------------------------------------------------------------
# serialization


def region_map_to_csv(rm: RegionMap, path) -> None:
    """CSV x,y,label with labels spelled as text."""
    g = rm.grid
    xs, ys = g.xs(), g.ys()
    with open(path, "w") as fh:
        fh.write("x,y,label\n")
        for j in range(g.ny + 1):
            y = ys[j]
            for i in range(g.nx + 1):
                name = RegionLabel(int(rm.labels[j, i])).name
                if rm.violation[j, i]:
                    name += "+ConstraintViolation"
                fh.write(f"{xs[i]:.17g},{ys[j]:.17g},{name}\n")
