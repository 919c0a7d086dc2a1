import math

import numpy as np
import pytest

from triseg.energy import (
    band_halfwidth_factor,
    energy_constrained,
    energy_eps,
    energy_gradient,
    junction_ball_split,
    penalty,
)
from triseg.errors import InvalidArgument, InvalidGeometry
from triseg.field import PhaseTriple, ScalarField, make_grid
from triseg.geometry import JunctionSpec
from triseg.presets import get_preset
from triseg.profiles import ProfileFamily
from triseg.recovery import JunctionScalingPatch


def _constants(g, a, b, c):
    return PhaseTriple(
        ScalarField.from_function(g, lambda x, y: a + 0 * x),
        ScalarField.from_function(g, lambda x, y: b + 0 * x),
        ScalarField.from_function(g, lambda x, y: c + 0 * x),
    )


def test_penalty_examples():
    g = make_grid((0, 1, 0, 1), (8, 8))
    assert penalty(_constants(g, 1, 1, 0), 0.5) == 0.0
    assert penalty(_constants(g, 1, 1, 1), 0.1) == pytest.approx(10.0, rel=1e-12)
    t = _constants(g, 1, 1, 1)
    assert penalty(t, 0.05) == pytest.approx(2 * penalty(t, 0.1), rel=1e-12)


def test_energy_constrained_examples():
    g = make_grid((0, 1, 0, 1), (16, 16))
    t = PhaseTriple(
        ScalarField.from_function(g, lambda x, y: x),
        ScalarField.from_function(g, lambda x, y: 1 - x),
        ScalarField.zeros(g),
    )
    assert energy_constrained(t) == 2.0
    assert energy_constrained(_constants(g, 1, 1, 1)) == math.inf


def test_energy_eps_equals_constrained_on_feasible():
    g = make_grid((0, 1, 0, 1), (16, 16))
    t = PhaseTriple(
        ScalarField.from_function(g, lambda x, y: x),
        ScalarField.from_function(g, lambda x, y: 1 - x),
        ScalarField.zeros(g),
    )
    b = energy_eps(t, 1e-3)
    assert b.penalty == 0.0
    assert b.total_eps == b.total_constrained == 2.0


def test_energy_eps_monotone_in_eps():
    g = make_grid((0, 1, 0, 1), (8, 8))
    t = _constants(g, 1, 1, 1)
    assert energy_eps(t, 0.05).total_eps > energy_eps(t, 0.1).total_eps


def test_per_region_breakdown_sums():
    p = get_preset("junction_symmetric")
    g = make_grid(p.recovery.extent, (48, 48))
    t = p.recovery.input.sample(g)
    b = energy_eps(t, 1e-2, with_regions=True)
    total = sum(b.per_region.values())
    assert total == pytest.approx(b.dirichlet_total, abs=1e-10)


def test_gradient_matches_finite_differences():
    # acceptance criterion: 100 random 8x8 non-negative fields, rel err <= 1e-6
    rng = np.random.default_rng(2024)
    g = make_grid((0, 1, 0, 1), (8, 8))
    worst = 0.0
    for _ in range(100):
        vals = [np.abs(rng.standard_normal(g.shape)) for _ in range(3)]
        t = PhaseTriple(*(ScalarField(g, v) for v in vals))
        eps = float(10.0 ** rng.uniform(-2, 0))
        grads = energy_gradient(t, eps)
        h = 1e-6
        fd = [np.zeros(g.shape) for _ in range(3)]
        for ci in range(3):
            for j in range(1, g.ny):
                for i in range(1, g.nx):
                    tp = t.copy()
                    tp.arrays()[ci][j, i] += h
                    tm = t.copy()
                    tm.arrays()[ci][j, i] -= h
                    fd[ci][j, i] = (
                        energy_eps(tp, eps).total_eps - energy_eps(tm, eps).total_eps
                    ) / (2 * h)
        num = max(float(np.max(np.abs(a - b))) for a, b in zip(grads, fd))
        den = max(float(np.max(np.abs(a))) for a in grads)
        worst = max(worst, num / den)
    assert worst <= 1e-6


def test_junction_ball_split_constant_zero():
    g = make_grid((0, 2, 0, 2), (32, 32))
    t = _constants(g, 1.0, 0.0, 0.0)
    j = JunctionSpec(center=(1.0, 1.0), alpha1=2 * math.pi / 3, alpha2=2 * math.pi / 3)
    assert junction_ball_split(t, j, 1e-2) == (0.0, 0.0)


def test_junction_ball_exits_domain():
    g = make_grid((0, 1, 0, 1), (16, 16))
    t = _constants(g, 1.0, 0.0, 0.0)
    j = JunctionSpec(center=(0.05, 0.5), alpha1=2.0, alpha2=2.0)
    with pytest.raises(InvalidGeometry):
        junction_ball_split(t, j, 1e-1)


def test_band_halfwidth_factors():
    assert band_halfwidth_factor(ProfileFamily.COMPACT_RAMP) == 1.0
    assert band_halfwidth_factor(ProfileFamily.SMOOTH_TANH) == 2.0


SYM = JunctionSpec(center=(1.0, 1.0), alpha1=2 * math.pi / 3, alpha2=2 * math.pi / 3)


def _separable_oracle(patch):
    """Angular quadrature times the closed-form radial factor.

    The patch is chi_i(theta) A_i(theta) (r / 2 sqrt(eps))^delta, so the
    sqrt(eps)-ball energy separates: int r^(2 delta - 1) dr / (2 sqrt(eps))^(2 delta)
    = 1/(2 delta 4^delta), an eps-free factor.
    """
    eps, delta = patch.eps, patch.delta
    radial = 1.0 / (2.0 * delta * 4.0**delta)
    xa, wa = np.polynomial.legendre.leggauss(48)
    value, deriv, _ = patch.ring
    e_a = e_b = 0.0
    for lo, hi, in_band in patch.angular_pieces():
        th = 0.5 * (hi - lo) * (xa + 1.0) + lo
        wth = 0.5 * (hi - lo) * wa
        tot = np.zeros_like(th)
        for i in (1, 2, 3):
            sector = 1 + patch.junction.components.index(i)
            chi = patch._chi(sector, th)
            chi_d = patch._chi_d(sector, th)
            a = np.asarray(value(i, th))
            a_d = np.asarray(deriv(i, th))
            tot += delta**2 * (chi * a) ** 2 + (chi_d * a + chi * a_d) ** 2
        v = float(np.sum(tot * wth)) * radial
        if in_band:
            e_b += v
        else:
            e_a += v
    return e_a, e_b


@pytest.mark.parametrize("family", [ProfileFamily.COMPACT_RAMP,
                                    ProfileFamily.SMOOTH_TANH])
@pytest.mark.parametrize("delta", [1.0, 1.5, 2.0])
def test_patch_quadrature_against_separable_oracle(family, delta):
    patch = JunctionScalingPatch(junction=SYM, eps=1e-2, delta=delta, family=family)
    e_a, e_b = patch.ball_energy_split()
    o_a, o_b = _separable_oracle(patch)
    assert e_a == pytest.approx(o_a, rel=1e-10)
    assert e_b == pytest.approx(o_b, rel=1e-10)


def test_transition_bands_dominate_as_eps_shrinks():
    ratios = []
    for eps in (1e-1, 1e-2, 1e-3):
        patch = JunctionScalingPatch(junction=SYM, eps=eps, delta=1.0,
                                     family=ProfileFamily.COMPACT_RAMP)
        e_a, e_b = patch.ball_energy_split()
        ratios.append(e_b / e_a)
    assert ratios[0] < ratios[1] < ratios[2]


def test_grid_ball_split_roughly_matches_patch():
    eps = 4e-2
    patch = JunctionScalingPatch(junction=SYM, eps=eps, delta=1.0,
                                 family=ProfileFamily.COMPACT_RAMP)
    e_a_ref, e_b_ref = patch.ball_energy_split()

    g = make_grid((0, 2, 0, 2), (512, 512))
    x, y = g.nodes()
    r = np.hypot(x - 1.0, y - 1.0)
    th = np.mod(np.arctan2(y - 1.0, x - 1.0), 2 * math.pi)
    fields = []
    for i in (1, 2, 3):
        vals = np.asarray(patch.component_polar(i, np.maximum(r, 1e-300), th))
        fields.append(ScalarField(g, vals))
    t = PhaseTriple(*fields)
    e_a, e_b = junction_ball_split(t, SYM, eps, band_factor=1.0)
    assert e_a == pytest.approx(e_a_ref, rel=0.08)
    assert e_b == pytest.approx(e_b_ref, rel=0.08)


def test_energy_eps_with_junction_balls():
    p = get_preset("junction_symmetric")
    g = make_grid(p.recovery.extent, (128, 128))
    t = p.recovery.input.sample(g)
    j = p.recovery.junctions[0]
    b = energy_eps(t, 1e-2, junctions=[j])
    assert len(b.junction_balls) == 1
    e_a, e_b = b.junction_balls[0]
    assert e_a > 0.0 and e_b >= 0.0
    assert e_a + e_b < b.dirichlet_total


def test_penalty_rejects_bad_eps():
    g = make_grid((0, 1, 0, 1), (8, 8))
    with pytest.raises(InvalidArgument):
        penalty(_constants(g, 1, 1, 1), 0.0)
