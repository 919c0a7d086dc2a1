"""One-dimensional and angular transition profiles with closed-form integrals.

Two interchangeable profile families drive every smoothed transition in the
package:

* ``SmoothTanh`` -- tanh-based steps.  Transitions never vanish exactly; the
  overlap of adjacent cutoffs is exponentially small in 1/width.
* ``CompactRamp`` -- steps built from the integral of the standard bump
  mollifier.  Identically 0/1 outside a transition band of the same nominal
  width, so products of non-adjacent cutoffs vanish exactly.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DegenerateSector, InvalidArgument

__all__ = [
    "ProfileFamily",
    "h_plus",
    "h_minus",
    "psi_plus",
    "psi_minus",
    "mollifier_eta",
    "ramp_rho",
    "ramp_rho_deriv",
    "MOLLIFIER_NORM",
    "sech4_layer_integral",
    "sech4_first_moment",
    "step_up",
    "step_up_deriv",
    "angular_cutoff",
    "angular_cutoff_deriv",
    "radial_regularizer",
    "junction_profile",
    "junction_profile_positive",
    "junction_profile_dtheta",
]


class ProfileFamily(enum.Enum):
    SMOOTH_TANH = "tanh"
    COMPACT_RAMP = "ramp"


def _as_array(z):
    return np.asarray(z, dtype=float)


# ---------------------------------------------------------------------------
# tanh steps


def h_plus(z):
    """Rising unit step (1 + tanh z)/2, evaluated as a logistic sigmoid.

    The sigmoid form 1/(1 + exp(-2z)) degrades gracefully to tiny positive
    values for very negative z instead of cancelling to exactly zero, which
    keeps exponentially small cutoff overlaps measurable.
    """
    z = _as_array(z)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-2.0 * z[pos]))
    e = np.exp(2.0 * z[~pos])
    out[~pos] = e / (1.0 + e)
    return out if out.ndim else float(out)


def h_minus(z):
    """Falling unit step (1 - tanh z)/2."""
    return h_plus(-_as_array(z)) if np.ndim(z) else h_plus(-z)


def psi_plus(z):
    """max(0, tanh z): vanishes identically on z <= 0."""
    z = _as_array(z)
    out = np.where(z > 0.0, np.tanh(np.maximum(z, 0.0)), 0.0)
    return out if out.ndim else float(out)


def psi_minus(z):
    """max(0, -tanh z): vanishes identically on z >= 0."""
    z = _as_array(z)
    out = np.where(z < 0.0, np.tanh(np.maximum(-z, 0.0)), 0.0)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# mollifier and ramp

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def _bump_unnorm(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = (t > 0.0) & (t < 1.0)
    ti = t[inside]
    # clamp the tiny products near the endpoints so 1/x cannot overflow
    out[inside] = np.exp(-1.0 / np.maximum(ti * (1.0 - ti), 1e-300))
    return out


def _integrate_bump_0_to(t):
    """Integral of the unnormalized bump from 0 to t (t array in [0, 1/2])."""
    t = np.asarray(t, dtype=float)
    half = 0.5 * t
    nodes = half[..., None] * (_GL_NODES + 1.0)
    vals = _bump_unnorm(nodes)
    return half * (vals @ _GL_WEIGHTS)


# Normalization so that the mollifier integrates to one over (0, 1).
_HALF_MASS = float(_integrate_bump_0_to(np.array(0.5)))
MOLLIFIER_NORM = 1.0 / (2.0 * _HALF_MASS)


def mollifier_eta(t):
    """Standard bump mollifier on (0,1), normalized to unit mass."""
    t = _as_array(t)
    out = MOLLIFIER_NORM * _bump_unnorm(t)
    return out if out.ndim else float(out)


def ramp_rho(t):
    """Smooth ramp: 0 for t <= 0, 1 for t >= 1, integral of the mollifier.

    Evaluated on [0, 1/2] by Gauss-Legendre quadrature and reflected through
    rho(t) + rho(1-t) = 1, so the symmetry identity holds exactly.
    """
    t = _as_array(t)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.empty_like(t)
    out[t <= 0.0] = 0.0
    out[t >= 1.0] = 1.0
    lo = (t > 0.0) & (t <= 0.5)
    hi = (t > 0.5) & (t < 1.0)
    if np.any(lo):
        out[lo] = MOLLIFIER_NORM * _integrate_bump_0_to(t[lo])
    if np.any(hi):
        out[hi] = 1.0 - MOLLIFIER_NORM * _integrate_bump_0_to(1.0 - t[hi])
    return float(out[0]) if scalar else out


def ramp_rho_deriv(t):
    """d/dt of the ramp; equals the normalized mollifier."""
    return mollifier_eta(t)


# ---------------------------------------------------------------------------
# sech^4 layer integrals


def _tanh_poly(z):
    # antiderivative of sech^4: tanh - tanh^3/3
    th = np.tanh(z)
    return th - th**3 / 3.0


def sech4_layer_integral(a: float, b: float, eps: float) -> float:
    """Integral of sech^4(s/sqrt(eps)) over [a, b]; infinite bounds allowed.

    Closed form sqrt(eps) * [tanh(z) - tanh(z)^3/3] between a/sqrt(eps) and
    b/sqrt(eps).
    """
    if eps <= 0.0:
        raise InvalidArgument("eps must be positive")
    if a > b:
        raise InvalidArgument("need a <= b")
    w = math.sqrt(eps)

    def t_at(s):
        if s == math.inf:
            return 2.0 / 3.0
        if s == -math.inf:
            return -2.0 / 3.0
        return float(_tanh_poly(s / w))

    return w * (t_at(b) - t_at(a))


def _lncosh(z: float) -> float:
    az = abs(z)
    return az + math.log1p(math.exp(-2.0 * az)) - math.log(2.0)


_FIRST_MOMENT_LIMIT = (2.0 / 3.0) * math.log(2.0) - 1.0 / 6.0


def sech4_first_moment(a: float, b: float, eps: float) -> float:
    """Integral of s * sech^4(s/sqrt(eps)) over [a, b].

    The antiderivative F(z) = z*(tanh z - tanh^3 z/3) - (2/3) ln cosh z
    - tanh^2 z / 6 is even with equal limits at +-inf, so the full-line
    moment evaluates to exactly zero.
    """
    if eps <= 0.0:
        raise InvalidArgument("eps must be positive")
    if a > b:
        raise InvalidArgument("need a <= b")
    w = math.sqrt(eps)

    def f_at(s):
        if s == math.inf or s == -math.inf:
            return _FIRST_MOMENT_LIMIT
        z = s / w
        th = math.tanh(z)
        return z * (th - th**3 / 3.0) - (2.0 / 3.0) * _lncosh(z) - th * th / 6.0

    return eps * (f_at(b) - f_at(a))


# ---------------------------------------------------------------------------
# family-parametrized steps

def step_up(z, family: ProfileFamily):
    """Unit step 0 -> 1 for the given family.

    SmoothTanh uses (1+tanh z)/2; CompactRamp uses rho((z+1)/2), which is
    exactly 0 for z <= -1 and exactly 1 for z >= 1.
    """
    if family is ProfileFamily.SMOOTH_TANH:
        return h_plus(z)
    return ramp_rho((_as_array(z) + 1.0) * 0.5)


def step_up_deriv(z, family: ProfileFamily):
    if family is ProfileFamily.SMOOTH_TANH:
        hp = h_plus(z)
        return 2.0 * hp * (1.0 - hp)
    return 0.5 * mollifier_eta((_as_array(z) + 1.0) * 0.5)


def half_up(z, family: ProfileFamily):
    """Half-step vanishing identically on z <= 0 (the psi_+ analogue)."""
    if family is ProfileFamily.SMOOTH_TANH:
        return psi_plus(z)
    return ramp_rho(_as_array(z) * 0.5)


def half_up_deriv(z, family: ProfileFamily):
    if family is ProfileFamily.SMOOTH_TANH:
        z = _as_array(z)
        th = np.tanh(z)
        out = np.where(z > 0.0, 1.0 - th * th, 0.0)
        return out if out.ndim else float(out)
    return 0.5 * mollifier_eta(_as_array(z) * 0.5)


# ---------------------------------------------------------------------------
# junction sector cutoffs


def _sector_bounds(junction):
    a1 = junction.alpha1
    a2 = junction.alpha2
    return ((0.0, a1), (a1, a1 + a2), (a1 + a2, 2.0 * math.pi))


def _check_sector_widths(junction, eps):
    w = math.sqrt(eps)
    for lo, hi in _sector_bounds(junction):
        if hi - lo <= 4.0 * w:
            raise DegenerateSector(
                f"sector width {hi - lo:.6g} <= 4*sqrt(eps) = {4 * w:.6g}"
            )


def angular_cutoff(i: int, theta, eps: float, junction, family: ProfileFamily):
    """Sector cutoff chi_i(theta) for sector index i in {1, 2, 3}.

    theta is measured from the junction's first ray, normalized to [0, 2pi).
    The rising/falling steps have width sqrt(eps) in angle.  The cutoff is
    2pi-periodic: period images k in {-1, 0, 1} are summed so the transition
    across the theta = 0 ray is seamless.
    """
    if eps <= 0.0:
        raise InvalidArgument("eps must be positive")
    if i not in (1, 2, 3):
        raise InvalidArgument("sector index must be 1, 2 or 3")
    _check_sector_widths(junction, eps)
    w = math.sqrt(eps)
    lo, hi = _sector_bounds(junction)[i - 1]
    theta = _as_array(theta)
    scalar = theta.ndim == 0
    th = np.mod(np.atleast_1d(theta), 2.0 * math.pi)
    out = np.zeros_like(th)
    for k in (-1.0, 0.0, 1.0):
        t = th + 2.0 * math.pi * k
        out += np.asarray(
            step_up((t - lo) / w, family) * step_up(-(t - hi) / w, family)
        )
    return float(out[0]) if scalar else out


def angular_cutoff_deriv(i: int, theta, eps: float, junction, family: ProfileFamily):
    """d chi_i / d theta; O(1/sqrt(eps)) inside transition bands."""
    if eps <= 0.0:
        raise InvalidArgument("eps must be positive")
    _check_sector_widths(junction, eps)
    w = math.sqrt(eps)
    lo, hi = _sector_bounds(junction)[i - 1]
    theta = _as_array(theta)
    scalar = theta.ndim == 0
    th = np.mod(np.atleast_1d(theta), 2.0 * math.pi)
    out = np.zeros_like(th)
    for k in (-1.0, 0.0, 1.0):
        t = th + 2.0 * math.pi * k
        up = np.asarray(step_up((t - lo) / w, family))
        dn = np.asarray(step_up(-(t - hi) / w, family))
        dup = np.asarray(step_up_deriv((t - lo) / w, family)) / w
        ddn = -np.asarray(step_up_deriv(-(t - hi) / w, family)) / w
        out += dup * dn + up * ddn
    return float(out[0]) if scalar else out


def radial_regularizer(r, eps: float, delta: float):
    """(r / (2 sqrt(eps)))^delta clamped to 1 for r >= 2 sqrt(eps)."""
    if eps <= 0.0:
        raise InvalidArgument("eps must be positive")
    if delta < 1.0:
        raise InvalidArgument("delta must be >= 1")
    r = _as_array(r)
    if np.any(r < 0.0):
        raise InvalidArgument("r must be non-negative")
    r0 = 2.0 * math.sqrt(eps)
    out = np.minimum(r / r0, 1.0) ** delta
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# junction asymptotic profile


def junction_profile(i: int, r, theta):
    """Leading junction asymptotics r^{3/4} sin(3 theta/4 - 2(i-1) pi/3)."""
    if i not in (1, 2, 3):
        raise InvalidArgument("component index must be 1, 2 or 3")
    r = _as_array(r)
    theta = _as_array(theta)
    out = r**0.75 * np.sin(0.75 * theta - 2.0 * (i - 1) * math.pi / 3.0)
    return out if out.ndim else float(out)


def junction_profile_positive(i: int, r, theta):
    """Positive part of the junction profile (used by recovery patches)."""
    out = np.maximum(_as_array(junction_profile(i, r, theta)), 0.0)
    return out if out.ndim else float(out)


def junction_profile_dtheta(i: int, r, theta, positive_part: bool = True):
    """Angular derivative of the (optionally clipped) junction profile."""
    r = _as_array(r)
    theta = _as_array(theta)
    arg = 0.75 * theta - 2.0 * (i - 1) * math.pi / 3.0
    d = 0.75 * r**0.75 * np.cos(arg)
    if positive_part:
        d = np.where(np.sin(arg) > 0.0, d, 0.0)
    return d if d.ndim else float(d)
