import math

import numpy as np
import pytest

from triseg.errors import InvalidArgument, InvalidGeometry
from triseg.field import ScalarField, l2_norm, make_grid, product_field
from triseg.geometry import JunctionSpec, RegionLabel, SegmentInterface
from triseg.presets import get_preset, grid_for_eps, recovery_config
from triseg.profiles import ProfileFamily
from triseg.recovery import (
    AnalyticTriple,
    RecoveryConfig,
    assemble_recovery,
    build_boundary_layer,
    build_interface_patch,
    build_junction_patch,
    cutoff_triple_overlap,
    halton_points,
    partition_weights,
)

RAMP = ProfileFamily.COMPACT_RAMP
TANH = ProfileFamily.SMOOTH_TANH

ALL_FIXTURE_PRESETS = (
    "one_phase_harmonic",
    "two_phase_linear",
    "circle_interface",
    "three_sector",
    "junction_symmetric",
    "junction_asymmetric",
)


# ---------------------------------------------------------------------------
# partition of unity


def test_partition_boundary_core():
    cfg = recovery_config(get_preset("circle_interface"), 1e-2)
    w = math.sqrt(cfg.eps)
    x = np.array([0.5, 0.5])
    y = np.array([w / 4.0, 0.2 * w])
    weights = partition_weights(x, y, cfg)
    assert np.all(weights.psi_boundary == 1.0)
    assert np.all(weights.psi_junction == 0.0)
    assert np.all(weights.psi_interface == 0.0)
    assert np.all(weights.psi_bulk == 0.0)


def test_partition_interior_bulk():
    cfg = recovery_config(get_preset("circle_interface"), 1e-2)
    weights = partition_weights(np.array([0.1]), np.array([0.5]), cfg)
    # far from boundary, circle and junctions: the bulk weight is everything
    assert weights.psi_bulk[0] == 1.0
    assert weights.total()[0] == 1.0


def test_partition_boundary_transition_complementary():
    cfg = recovery_config(get_preset("circle_interface"), 1e-2)
    w = math.sqrt(cfg.eps)
    d = 0.75 * w  # inside the sqrt(eps)/2 .. sqrt(eps) shell
    weights = partition_weights(np.array([0.5]), np.array([d]), cfg)
    b = weights.psi_boundary[0]
    assert 0.0 < b < 1.0
    assert weights.psi_bulk[0] == pytest.approx(1.0 - b, abs=1e-15)
    assert weights.total()[0] == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("name", ALL_FIXTURE_PRESETS)
@pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3])
def test_partition_suite(name, eps):
    # acceptance criterion: sum = 1 within 1e-12, at most two active,
    # support containment, on 1e4 quasirandom points
    cfg = recovery_config(get_preset(name), eps)
    x, y = halton_points(10_000, cfg.extent)
    weights = partition_weights(x, y, cfg)
    assert float(np.max(np.abs(weights.total() - 1.0))) <= 1e-12
    assert int(np.max(weights.active_counts())) <= 2
    w = math.sqrt(eps)
    assert not np.any((weights.psi_boundary > 0) & (weights.d_boundary >= w))
    assert not np.any((weights.psi_junction > 0) & (weights.d_junction >= w))
    assert not np.any((weights.psi_interface > 0) & (weights.d_interface >= w))


def test_partition_hierarchy_suppression():
    cfg = recovery_config(get_preset("junction_symmetric"), 1e-2)
    x, y = halton_points(20_000, cfg.extent)
    weights = partition_weights(x, y, cfg)
    b = weights.psi_boundary
    m = b > 0.0
    assert np.all(weights.psi_junction[m] <= 1.0 - b[m] + 1e-15)
    assert np.all(weights.psi_interface[m] <= 1.0 - b[m] + 1e-15)


# ---------------------------------------------------------------------------
# interface patches


def _line_fixture(type_tag, side_neg, side_pos, funcs, pattern_label):
    itf = SegmentInterface(p0=(0.5, 0.0), p1=(0.5, 1.0), side_neg=side_neg,
                           side_pos=side_pos, type_tag=type_tag)
    inp = AnalyticTriple(
        funcs=funcs,
        pattern=lambda x, y: np.full(
            np.broadcast(np.asarray(x), np.asarray(y)).shape,
            int(pattern_label), dtype=np.int8,
        ),
    )
    return itf, inp


def test_type_I_patch_midline():
    # pure1 (x < 0.5, s < 0 along the +x normal) to pure2
    zero = lambda x, y: 0.0 * np.asarray(x, dtype=float)
    itf, inp = _line_fixture(
        "I", (1,), (2,),
        (lambda x, y: np.maximum(0.5 - np.asarray(x), 0.0),
         lambda x, y: np.maximum(np.asarray(x) - 0.5, 0.0), zero),
        RegionLabel.PURE1,
    )
    eps = 1e-2
    off = 2.0 * math.sqrt(eps)
    u1, u2, u3 = build_interface_patch(itf, inp, eps, RAMP,
                                       np.array([0.5]), np.array([0.4]))
    # on the interface both steps are 1/2 of the sampled levels
    assert u1[0] == pytest.approx(0.5 * off, rel=1e-12)
    assert u2[0] == pytest.approx(0.5 * off, rel=1e-12)
    assert u3[0] == 0.0


def test_type_IIa_patch_limits():
    one = lambda x, y: 1.0 + 0.0 * np.asarray(x, dtype=float)
    zero = lambda x, y: 0.0 * np.asarray(x, dtype=float)
    itf, inp = _line_fixture(
        "IIa", (1,), (1, 2),
        (one, lambda x, y: np.maximum(np.asarray(x) - 0.5, 0.0), zero),
        RegionLabel.PURE1,
    )
    eps = 1e-2
    w = math.sqrt(eps)
    xs = np.array([0.5 - 3 * w, 0.5 + 3 * w])
    ys = np.array([0.5, 0.5])
    u1, u2, u3 = build_interface_patch(itf, inp, eps, RAMP, xs, ys)
    assert u2[0] == 0.0  # pure side: switching component off exactly
    assert u2[1] > 0.0
    assert np.all(u3 == 0.0)
    assert u1 == pytest.approx([1.0, 1.0], rel=1e-12)


def test_type_III_patch_product_zero_dense_scan():
    one = lambda x, y: 1.0 + 0.0 * np.asarray(x, dtype=float)
    itf, inp = _line_fixture(
        "III", (1, 2), (1, 3),
        (one,
         lambda x, y: np.maximum(0.5 - np.asarray(x), 0.0),
         lambda x, y: np.maximum(np.asarray(x) - 0.5, 0.0)),
        RegionLabel.TWO12,
    )
    eps = 1e-2
    xs = np.linspace(0.3, 0.7, 2001)
    ys = np.full_like(xs, 0.5)
    for fam in (RAMP, TANH):
        u1, u2, u3 = build_interface_patch(itf, inp, eps, fam, xs, ys)
        assert float(np.max(np.abs(u1 * u2 * u3))) == 0.0
        # u1 blends between its one-sided levels
        assert np.all(u1 > 0.0)


def test_circle_patch_samples_correct_foot_points():
    # angularly modulated input around a circle: foot points must track the
    # full angle range, not just the first arc-length-worth of parameters
    cx, cy, R = 0.5, 0.5, 0.25

    def rad(x, y):
        return np.hypot(np.asarray(x) - cx, np.asarray(y) - cy)

    def ang(x, y):
        return np.arctan2(np.asarray(y) - cy, np.asarray(x) - cx)

    mod = lambda x, y: 2.0 + np.cos(ang(x, y))
    f1 = lambda x, y: np.maximum(R - rad(x, y), 0.0) * mod(x, y)
    f2 = lambda x, y: np.maximum(rad(x, y) - R, 0.0) * mod(x, y)
    zero = lambda x, y: 0.0 * np.asarray(x, dtype=float)
    inp = AnalyticTriple(
        funcs=(f1, f2, zero),
        pattern=lambda x, y: np.where(
            rad(x, y) < R, np.int8(RegionLabel.PURE1), np.int8(RegionLabel.PURE2)
        ),
    )
    from triseg.geometry import CircleInterface

    circle = CircleInterface(center=(cx, cy), radius=R, side_neg=(1,),
                             side_pos=(2,), type_tag="I")
    eps = 1e-2
    off = min(2.0 * math.sqrt(eps), 0.5 * R)  # circle sampling offset clamp
    for theta in (0.0, math.pi / 2, math.pi, 4.5):
        x = np.array([cx + R * math.cos(theta)])
        y = np.array([cy + R * math.sin(theta)])
        u1, u2, u3 = build_interface_patch(circle, inp, eps, RAMP, x, y)
        expect = 0.5 * off * (2.0 + math.cos(theta))
        assert u1[0] == pytest.approx(expect, rel=1e-12)
        assert u2[0] == pytest.approx(expect, rel=1e-12)


# ---------------------------------------------------------------------------
# junction patch


def test_junction_patch_center_and_ring():
    p = get_preset("junction_symmetric")
    cfg = recovery_config(p, 1e-2)
    j = cfg.junctions[0]
    cx, cy = j.center
    vals = build_junction_patch(j, cfg.input, cfg,
                                np.array([cx]), np.array([cy]))
    assert all(v[0] == 0.0 for v in vals)

    # at r = 2 sqrt(eps) in a sector interior the input value is reproduced
    r0 = 2.0 * math.sqrt(cfg.eps)
    theta_abs = j.base_angle + j.alpha1 / 2.0
    x = np.array([cx + r0 * math.cos(theta_abs)])
    y = np.array([cy + r0 * math.sin(theta_abs)])
    vals = build_junction_patch(j, cfg.input, cfg, x, y)
    comp = j.components[0]
    expect = cfg.input.component(comp, x, y)
    assert vals[comp - 1][0] == pytest.approx(float(expect[0]), rel=1e-12)


def test_junction_patch_product_zero_polar_scan():
    p = get_preset("junction_symmetric")
    cfg = recovery_config(p, 1e-2, family=RAMP)
    j = cfg.junctions[0]
    cx, cy = j.center
    r = np.linspace(0.0, 2.0 * math.sqrt(cfg.eps), 120)
    th = np.linspace(0.0, 2.0 * math.pi, 720, endpoint=False)
    R, TH = np.meshgrid(r, th)
    x = cx + R * np.cos(TH)
    y = cy + R * np.sin(TH)
    u1, u2, u3 = build_junction_patch(j, cfg.input, cfg, x.ravel(), y.ravel())
    assert float(np.max(np.abs((u1 * u2) * u3))) == 0.0


def test_ball_must_fit_inside_domain():
    p = get_preset("junction_symmetric")
    fx = p.recovery
    tight = JunctionSpec(center=(0.1, 0.1), alpha1=2 * math.pi / 3,
                         alpha2=2 * math.pi / 3)
    with pytest.raises(InvalidGeometry):
        RecoveryConfig(
            eps=1e-1, extent=fx.extent, input=fx.input, phi=fx.phi,
            interfaces=fx.interfaces, junctions=(tight,),
        )


def test_sector_width_validation():
    fx = get_preset("junction_symmetric").recovery
    narrow = JunctionSpec(center=(1.0, 1.0), alpha1=0.3, alpha2=2.8)
    with pytest.raises(InvalidGeometry):
        RecoveryConfig(
            eps=1e-1, extent=fx.extent, input=fx.input, phi=fx.phi,
            junctions=(narrow,),
        )


# ---------------------------------------------------------------------------
# boundary layer


def test_boundary_layer_trace_and_interior():
    p = get_preset("two_phase_linear")
    fx = p.recovery
    eps = 1e-2
    w = math.sqrt(eps)
    x = np.array([0.3, 0.3])
    y = np.array([0.0, 2.0 * w])
    vals = build_boundary_layer(fx.input, fx.phi, eps, fx.extent, x, y)
    # on the boundary: exactly the trace
    assert vals[0][0] == fx.phi[0](0.3, 0.0)
    assert vals[1][0] == fx.phi[1](0.3, 0.0)
    # beyond sqrt(eps): exactly the input
    assert vals[0][1] == fx.input.component(1, 0.3, 2.0 * w)


def test_boundary_layer_constant_input_unchanged():
    # input constant along boundary normals: the blend is the identity
    g = lambda x, y: 0.7 + 0.0 * np.asarray(x, dtype=float)
    zero = lambda x, y: 0.0 * np.asarray(x, dtype=float)
    inp = AnalyticTriple(
        funcs=(g, zero, zero),
        pattern=lambda x, y: np.full(
            np.broadcast(np.asarray(x), np.asarray(y)).shape,
            int(RegionLabel.PURE1), dtype=np.int8,
        ),
    )
    x, y = halton_points(500, (0, 1, 0, 1))
    vals = build_boundary_layer(inp, (g, zero, zero), 1e-2, (0, 1, 0, 1), x, y)
    assert np.max(np.abs(vals[0] - 0.7)) == 0.0
    assert np.all(vals[1] == 0.0)


# ---------------------------------------------------------------------------
# global assembly


def test_assemble_two_phase_linear():
    p = get_preset("two_phase_linear")
    for eps in (1e-1, 1e-2, 1e-3):
        cfg = recovery_config(p, eps)
        grid = grid_for_eps(cfg.extent, eps)
        rec = assemble_recovery(cfg, grid)
        assert float(np.max(np.abs(product_field(rec).values))) == 0.0
        ref = cfg.input.sample(grid)
        err = math.sqrt(
            sum(
                l2_norm(ScalarField(grid, a.values - b.values)) ** 2
                for a, b in zip(rec.components(), ref.components())
            )
        )
        assert err <= 0.2 * math.sqrt(eps)


def test_assemble_constant_bulk_away_from_boundary():
    g = lambda x, y: 0.7 + 0.0 * np.asarray(x, dtype=float)
    zero = lambda x, y: 0.0 * np.asarray(x, dtype=float)
    inp = AnalyticTriple(
        funcs=(g, zero, zero),
        pattern=lambda x, y: np.full(
            np.broadcast(np.asarray(x), np.asarray(y)).shape,
            int(RegionLabel.PURE1), dtype=np.int8,
        ),
    )
    eps = 1e-2
    cfg = RecoveryConfig(eps=eps, extent=(0, 1, 0, 1), input=inp,
                         phi=(g, zero, zero))
    grid = make_grid((0, 1, 0, 1), (64, 64))
    rec = assemble_recovery(cfg, grid)
    x, y = grid.nodes()
    interior = (
        (x > math.sqrt(eps)) & (x < 1 - math.sqrt(eps))
        & (y > math.sqrt(eps)) & (y < 1 - math.sqrt(eps))
    )
    assert np.max(np.abs(rec.u1.values[interior] - 0.7)) == 0.0


def test_assemble_rejects_infeasible_input():
    one = lambda x, y: 1.0 + 0.0 * np.asarray(x, dtype=float)
    inp = AnalyticTriple(
        funcs=(one, one, one),
        pattern=lambda x, y: np.full(
            np.broadcast(np.asarray(x), np.asarray(y)).shape,
            int(RegionLabel.TWO12), dtype=np.int8,
        ),
    )
    cfg = RecoveryConfig(eps=1e-2, extent=(0, 1, 0, 1), input=inp,
                         phi=(one, one, one))
    grid = make_grid((0, 1, 0, 1), (16, 16))
    with pytest.raises(InvalidArgument):
        assemble_recovery(cfg, grid)


def test_assemble_trace_bit_exact():
    for name in ("circle_interface", "three_sector"):
        p = get_preset(name)
        eps = 1e-2
        cfg = recovery_config(p, eps)
        grid = grid_for_eps(cfg.extent, eps)
        rec = assemble_recovery(cfg, grid)
        x, y = grid.nodes()
        mask = grid.boundary_mask()
        for i, u in enumerate(rec.components(), start=1):
            expect = np.asarray(cfg.phi[i - 1](x[mask], y[mask]), dtype=float)
            assert np.array_equal(u.values[mask], expect)


@pytest.mark.parametrize("name", ALL_FIXTURE_PRESETS)
def test_assemble_constraint_exact_ramp(name):
    p = get_preset(name)
    for eps in (1e-1, 1e-3):
        cfg = recovery_config(p, eps, family=RAMP)
        grid = grid_for_eps(cfg.extent, eps)
        rec = assemble_recovery(cfg, grid)
        assert float(np.max(np.abs(product_field(rec).values))) == 0.0


def test_assemble_l2_convergence():
    for name in ("circle_interface", "three_sector"):
        p = get_preset(name)
        errs = []
        for eps in (1e-1, 1e-2, 1e-3):
            cfg = recovery_config(p, eps)
            grid = grid_for_eps(cfg.extent, eps)
            rec = assemble_recovery(cfg, grid)
            ref = cfg.input.sample(grid)
            errs.append(
                math.sqrt(
                    sum(
                        l2_norm(ScalarField(grid, a.values - b.values)) ** 2
                        for a, b in zip(rec.components(), ref.components())
                    )
                )
            )
        assert errs[0] > errs[1] > errs[2]


def test_cutoff_overlap_zero_for_ramp():
    j = get_preset("junction_symmetric").recovery.junctions[0]
    for eps in (1e-1, 1e-2, 1e-3):
        assert cutoff_triple_overlap(j, eps, RAMP) == 0.0


def test_cutoff_overlap_tanh_positive_and_tiny():
    j = get_preset("junction_symmetric").recovery.junctions[0]
    vals = [cutoff_triple_overlap(j, eps, TANH) for eps in (1e-1, 1e-2, 1e-3)]
    assert all(v > 0.0 for v in vals)
    assert vals[0] > vals[1] > vals[2]
    assert vals[0] < 1e-4


def test_halton_points_deterministic_and_inside():
    x1, y1 = halton_points(100, (0, 2, 0, 2))
    x2, y2 = halton_points(100, (0, 2, 0, 2))
    assert np.array_equal(x1, x2) and np.array_equal(y1, y2)
    assert np.all((x1 > 0) & (x1 < 2) & (y1 > 0) & (y1 < 2))
