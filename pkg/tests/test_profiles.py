import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from triseg.errors import DegenerateSector, InvalidArgument
from triseg.geometry import JunctionSpec
from triseg.profiles import (
    MOLLIFIER_NORM,
    ProfileFamily,
    angular_cutoff,
    angular_cutoff_deriv,
    h_minus,
    h_plus,
    junction_profile,
    junction_profile_positive,
    mollifier_eta,
    psi_minus,
    psi_plus,
    radial_regularizer,
    ramp_rho,
    sech4_first_moment,
    sech4_layer_integral,
    step_up,
)

RAMP = ProfileFamily.COMPACT_RAMP
TANH = ProfileFamily.SMOOTH_TANH


# frozen from a 50-digit mpmath evaluation (re-verified live below)
H_PLUS_AT_ONE = 0.8807970779778823
TANH_ONE = 0.7615941559557649


def test_h_plus_at_zero():
    assert h_plus(0.0) == 0.5


def test_h_plus_at_one_against_highprec():
    live = float((1 + mpmath.tanh(mpmath.mpf(1))) / 2)
    assert live == pytest.approx(H_PLUS_AT_ONE, abs=1e-15)
    assert h_plus(1.0) == pytest.approx(H_PLUS_AT_ONE, abs=1e-15)


@given(st.floats(-30, 30, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_h_sum_identity(z):
    assert h_plus(z) + h_minus(z) == pytest.approx(1.0, abs=1e-15)


def test_h_sum_at_listed_points():
    for z in (-3.0, -1.0, 0.0, 1.0, 3.0):
        assert h_plus(z) + h_minus(z) == pytest.approx(1.0, abs=1e-15)


def test_h_plus_graceful_tails():
    # sigmoid form keeps deep tails positive rather than cancelling to zero
    assert 0.0 < h_plus(-60.0) < 1e-50
    assert h_plus(60.0) == 1.0


def test_psi_plus_negative_is_zero():
    assert psi_plus(-2.0) == 0.0
    assert psi_minus(2.0) == 0.0


@given(st.floats(-20, 20, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_psi_sign_disjoint(z):
    assert psi_plus(z) * psi_minus(z) == 0.0


def test_psi_minus_value():
    assert psi_minus(-1.0) == pytest.approx(TANH_ONE, abs=1e-15)
    live = float(mpmath.tanh(mpmath.mpf(1)))
    assert abs(live - TANH_ONE) < 1e-16


def test_ramp_saturation():
    assert ramp_rho(-0.5) == 0.0
    assert ramp_rho(1.5) == 1.0
    assert ramp_rho(0.5) == 0.5


@given(st.floats(0.0, 1.0, allow_nan=False))
@settings(max_examples=80, deadline=None)
def test_ramp_symmetry(t):
    assert ramp_rho(t) + ramp_rho(1.0 - t) == pytest.approx(1.0, abs=1e-14)


def test_ramp_monotone():
    ts = np.linspace(-0.2, 1.2, 201)
    vals = ramp_rho(ts)
    assert np.all(np.diff(vals) >= 0.0)


def test_mollifier_normalization_against_quadrature():
    # C = 1 / integral of exp(-1/(t(1-t))); adaptive-quadrature oracle
    val, err = quad(lambda t: math.exp(-1.0 / (t * (1.0 - t))), 0.0, 1.0,
                    epsabs=1e-14, epsrel=1e-13)
    assert err < 1e-12
    assert 1.0 / MOLLIFIER_NORM == pytest.approx(val, abs=1e-12)
    total, _ = quad(mollifier_eta, 0.0, 1.0, epsabs=1e-13)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_sech4_full_line():
    # eps = 0.04: 4*sqrt(eps)/3 over the full line, half of that per side
    assert sech4_layer_integral(-math.inf, math.inf, 0.04) == pytest.approx(
        4 * 0.2 / 3, rel=1e-15
    )
    assert sech4_layer_integral(0.0, math.inf, 0.04) == pytest.approx(
        2 * 0.2 / 3, rel=1e-15
    )


def test_sech4_first_moment_vanishes():
    assert abs(sech4_first_moment(-math.inf, math.inf, 0.04)) <= 1e-14
    assert abs(sech4_first_moment(-math.inf, math.inf, 3.7e-3)) <= 1e-14


def test_sech4_against_adaptive_quadrature():
    rng = np.random.default_rng(42)
    for _ in range(100):
        eps = float(10.0 ** rng.uniform(-4, 0))
        a, b = sorted(rng.uniform(-1.0, 1.0, size=2))
        w = math.sqrt(eps)
        ref, err = quad(lambda s: 1.0 / math.cosh(s / w) ** 4, a, b,
                        epsabs=1e-13, epsrel=1e-12)
        got = sech4_layer_integral(a, b, eps)
        assert abs(got - ref) <= 1e-10


def test_sech4_first_moment_against_quadrature():
    rng = np.random.default_rng(43)
    for _ in range(50):
        eps = float(10.0 ** rng.uniform(-3, 0))
        a, b = sorted(rng.uniform(-1.0, 1.0, size=2))
        w = math.sqrt(eps)
        ref, _ = quad(lambda s: s / math.cosh(s / w) ** 4, a, b,
                      epsabs=1e-13, epsrel=1e-12)
        assert abs(sech4_first_moment(a, b, eps) - ref) <= 1e-10


def test_sech4_preconditions():
    with pytest.raises(InvalidArgument):
        sech4_layer_integral(1.0, 0.0, 0.1)
    with pytest.raises(InvalidArgument):
        sech4_layer_integral(0.0, 1.0, -0.1)


SYM = JunctionSpec(center=(0.0, 0.0), alpha1=2 * math.pi / 3,
                   alpha2=2 * math.pi / 3)


def test_cutoff_midpoint_approaches_one():
    mid = math.pi / 3
    prev = 0.0
    for eps in (1e-1, 1e-2, 1e-3):
        v = angular_cutoff(1, mid, eps, SYM, TANH)
        assert v >= prev
        prev = v
    assert angular_cutoff(1, mid, 1e-3, SYM, TANH) == pytest.approx(1.0, abs=1e-12)
    assert angular_cutoff(1, mid, 1e-2, SYM, RAMP) == 1.0


def test_cutoff_at_sector_boundary_is_half():
    v = angular_cutoff(1, 0.0, 1e-2, SYM, TANH)
    assert v == pytest.approx(0.5, abs=1e-3)


def test_cutoff_degenerate_sector():
    narrow = JunctionSpec(center=(0.0, 0.0), alpha1=0.2, alpha2=2.0)
    with pytest.raises(DegenerateSector):
        angular_cutoff(1, 0.1, 1e-2, narrow, TANH)


def test_ramp_cutoffs_nonadjacent_disjoint():
    theta = np.linspace(0.0, 2 * math.pi, 4096, endpoint=False)
    eps = 1e-2
    c1 = angular_cutoff(1, theta, eps, SYM, RAMP)
    c2 = angular_cutoff(2, theta, eps, SYM, RAMP)
    c3 = angular_cutoff(3, theta, eps, SYM, RAMP)
    assert float(np.max(c1 * c2 * c3)) == 0.0
    # sector 1 and the far half of sector 3 cannot both be active
    assert float(np.max(np.minimum(c1, 1.0) * np.where((theta > 3.5) & (theta < 5.0), c3, 0.0))) == 0.0


def test_tanh_cutoffs_exponentially_small_overlap():
    theta = np.linspace(0.0, 2 * math.pi, 4096, endpoint=False)
    for eps in (1e-2, 1e-3):
        c1 = angular_cutoff(1, theta, eps, SYM, TANH)
        c3 = angular_cutoff(3, theta, eps, SYM, TANH)
        gap = SYM.alpha2  # angular distance between sectors 1 and 3
        bound = math.exp(-gap / math.sqrt(eps))
        inner = (theta > SYM.alpha1 + 0.3) & (theta < SYM.alpha1 + SYM.alpha2 - 0.3)
        assert float(np.max((c1 * c3)[inner])) <= bound


def test_cutoff_wraparound_continuity():
    eps = 1e-2
    lo = angular_cutoff(3, 2 * math.pi - 1e-9, eps, SYM, TANH)
    hi = angular_cutoff(3, 1e-9, eps, SYM, TANH)
    assert lo == pytest.approx(hi, abs=1e-6)
    assert lo == pytest.approx(0.5, abs=1e-3)


def test_cutoff_derivative_band_bound():
    eps = 1e-2
    w = math.sqrt(eps)
    theta = np.linspace(0.0, 2 * math.pi, 8192, endpoint=False)
    bounds = np.array([0.0, SYM.alpha1])
    dist = np.min(
        np.minimum(
            np.abs(theta[:, None] - bounds[None, :]),
            2 * math.pi - np.abs(theta[:, None] - bounds[None, :]),
        ),
        axis=1,
    )
    for fam in (TANH, RAMP):
        d = np.abs(angular_cutoff_deriv(1, theta, eps, SYM, fam))
        assert float(np.max(d)) <= 3.0 / w
    # ramp derivative has hard support in the width-sqrt(eps) bands
    d_ramp = np.abs(angular_cutoff_deriv(1, theta, eps, SYM, RAMP))
    assert float(np.max(d_ramp[dist > w * (1 + 1e-12)])) == 0.0
    # tanh derivative decays under the 2 exp(-2 dist/w)/w tail envelope
    d_tanh = np.abs(angular_cutoff_deriv(1, theta, eps, SYM, TANH))
    far = dist > 2.0 * w
    envelope = (2.2 / w) * np.exp(-2.0 * dist[far] / w)
    assert np.all(d_tanh[far] <= envelope)


def test_cutoff_derivative_matches_fd():
    eps = 1e-2
    theta = np.linspace(0.1, 2 * math.pi - 0.1, 500)
    h = 1e-7
    for fam in (TANH, RAMP):
        d = angular_cutoff_deriv(2, theta, eps, SYM, fam)
        fd = (
            np.asarray(angular_cutoff(2, theta + h, eps, SYM, fam))
            - np.asarray(angular_cutoff(2, theta - h, eps, SYM, fam))
        ) / (2 * h)
        assert np.max(np.abs(d - fd)) < 1e-4


def test_radial_regularizer_values():
    eps = 0.04
    assert radial_regularizer(0.0, eps, 1.0) == 0.0
    assert radial_regularizer(2 * math.sqrt(eps), eps, 1.0) == 1.0
    assert radial_regularizer(math.sqrt(eps), eps, 1.0) == 0.5
    assert radial_regularizer(10.0, eps, 2.0) == 1.0


def test_radial_regularizer_rejects_small_delta():
    with pytest.raises(InvalidArgument):
        radial_regularizer(0.1, 0.04, 0.5)


def test_junction_profile_values():
    assert junction_profile(1, 1.0, 0.0) == 0.0
    assert junction_profile(1, 1.0, 2 * math.pi / 3) == pytest.approx(1.0, rel=1e-15)
    assert junction_profile(2, 1.0, 2 * math.pi / 3) == pytest.approx(-0.5, rel=1e-12)
    assert junction_profile_positive(2, 1.0, 2 * math.pi / 3) == 0.0


def test_junction_profile_scaling():
    # leading term is homogeneous of degree 3/4
    v1 = junction_profile(1, 1.0, 1.0)
    v2 = junction_profile(1, 16.0, 1.0)
    assert v2 == pytest.approx(8.0 * v1, rel=1e-13)


def test_step_families_agree_at_midpoint():
    assert step_up(0.0, TANH) == 0.5
    assert step_up(0.0, RAMP) == 0.5
    assert step_up(1.0, RAMP) == 1.0
    assert step_up(-1.0, RAMP) == 0.0
