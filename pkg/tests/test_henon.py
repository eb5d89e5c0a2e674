"""Map family: iteration, tangent products, Lyapunov exponents, and the
sampled expansion / norm-bound / collapse condition checks."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from henonshift.henon import (
    ConeField,
    HenonMap,
    check_G6,
    check_expansion_G4,
    h_times_check,
    iterate,
    load_map,
    lyapunov,
    map_from_dict,
    map_to_dict,
    most_contracted_direction,
    pce_check,
    region_sample_U,
    tangent_cocycle,
)
from henonshift.params import Params


# ---------------------------------------------------------------------------
# the map itself


def test_apply_classical():
    m = HenonMap(a=-1.4, b=0.3, perturbation="classical")
    x, y = m.apply(0.5, 0.1)
    assert x == pytest.approx(0.5**2 - 1.4 + 0.1)
    assert y == pytest.approx(0.3 * 0.5)


def test_apply_zero_perturbation_keeps_second_coordinate_trivial():
    m = HenonMap(a=-2.0, b=0.0, perturbation="zero")
    x, y = m.apply(0.7, 123.0)  # y feeds in, nothing comes back out
    assert x == pytest.approx(0.7**2 - 2.0 + 123.0)
    assert y == 0.0


def test_jacobian_classical():
    m = HenonMap(a=-1.4, b=0.3, perturbation="classical")
    J = m.jacobian(0.5, 0.1)
    assert np.allclose(J, [[1.0, 1.0], [0.3, 0.0]])
    assert np.linalg.det(J) == pytest.approx(-0.3)


def test_custom_perturbation_requires_derivative():
    with pytest.raises(ValueError):
        HenonMap(a=-2.0, b=1e-3, perturbation="custom", custom_B=lambda x, y: (0.0, 0.0))


def test_custom_perturbation_applies():
    m = HenonMap(
        a=-2.0,
        b=0.0,
        perturbation="custom",
        custom_B=lambda x, y: (0.1 * y, 0.0),
        custom_dB=lambda x, y: np.array([[0.0, 0.1], [0.0, 0.0]]),
    )
    # custom term adds on top of the unperturbed (x^2 + a + y, .)
    x, y = m.apply(0.0, 1.0)
    assert x == pytest.approx(-2.0 + 1.0 + 0.1)
    assert y == 0.0
    assert np.allclose(m.jacobian(0.0, 1.0), [[0.0, 1.1], [0.0, 0.0]])


def test_iterate_period_two_orbit():
    # x^2 - 1 swaps 0 and -1
    m = HenonMap(a=-1.0, b=0.0)
    seg = iterate(m, (0.0, 0.0), 6)
    assert not seg.escaped
    xs = seg.points[:, 0]
    assert np.allclose(xs, [0, -1, 0, -1, 0, -1, 0])


def test_iterate_reports_escape_time():
    m = HenonMap(a=3.0, b=0.0)
    seg = iterate(m, (3.0, 0.0), 50)
    assert seg.escaped
    assert seg.escape_time is not None and seg.escape_time < 5
    assert len(seg.points) == seg.escape_time  # only in-radius points kept


# ---------------------------------------------------------------------------
# Lyapunov exponents


def test_lyapunov_chebyshev_log2():
    m = HenonMap(a=-2.0, b=0.0)
    l1, l2 = lyapunov(m, (0.13817, 0.0), 200_000)
    assert l1 == pytest.approx(math.log(2.0), abs=5e-3)
    assert l2 == -math.inf


def test_lyapunov_classical_attractor_benchmark():
    m = HenonMap(a=-1.4, b=0.3, perturbation="classical")
    l1, l2 = lyapunov(m, (0.0, 0.0), 300_000)
    assert l1 == pytest.approx(0.419, abs=0.01)
    # constant-determinant identity: l1 + l2 = log |det Df| = log b
    assert l1 + l2 == pytest.approx(math.log(0.3), abs=1e-9)


def test_lyapunov_escaping_orbit_raises():
    m = HenonMap(a=3.0, b=0.0)
    with pytest.raises(RuntimeError):
        lyapunov(m, (3.0, 0.0), 1000)


def test_tangent_cocycle_logdets_match_jacobians():
    m = HenonMap(a=-1.4, b=0.3, perturbation="classical")
    tp = tangent_cocycle(m, (0.1, 0.05), (1.0, 0.0), 20)
    assert not tp.escaped
    assert tp.logdets.shape == (20,)
    assert np.allclose(tp.logdets, math.log(0.3))
    # ladder is the log norm of the running product applied to u
    seg = iterate(m, (0.1, 0.05), 20)
    J = np.eye(2)
    for x, y in seg.points[:-1]:
        J = m.jacobian(x, y) @ J
    assert tp.ell[-1] == pytest.approx(math.log(np.linalg.norm(J @ np.array([1.0, 0.0]))))


def test_tangent_cocycle_directions_unit():
    m = HenonMap(a=-1.31, b=0.2, perturbation="classical")
    tp = tangent_cocycle(m, (0.2, 0.0), (0.6, 0.8), 30)
    norms = np.linalg.norm(tp.directions, axis=1)
    assert np.allclose(norms[~np.isinf(tp.ell)], 1.0)


# ---------------------------------------------------------------------------
# condition checks


def test_g6_norm_bounds_on_sampled_region():
    params = Params(M=100)
    m = HenonMap(a=-2.0 + 1e-4, b=params.b, perturbation="classical")
    sample = region_sample_U(m, params, 4000, seed=7)
    rep = check_G6(m, sample, params)
    assert rep.ok
    assert rep.bound == pytest.approx(5.0)
    assert 4.0 < rep.sup_Tf < 5.0
    assert rep.sup_T2f <= rep.bound


def test_g6_flags_violation_outside_region():
    params = Params(M=100)
    m = HenonMap(a=-2.0, b=0.0)
    rep = check_G6(m, [(4.0, 0.0)], params)  # |2x| = 8 > 5
    assert not rep.ok
    assert rep.argmax == (4.0, 0.0)


def test_g4_expansion_near_right_end():
    params = Params(M=100)
    m = HenonMap(a=-2.0, b=0.0)
    xs = np.linspace(1.7, 1.99, 40)
    sample = [((x, 0.0), (1.0, 0.0)) for x in xs]
    rep = check_expansion_G4(m, sample, n_s=2, params=params)
    assert rep.pass_fraction == 1.0
    assert rep.worst_margin > 0.2
    assert rep.count == 40


def test_g4_detects_contraction_near_turning_point():
    params = Params(M=100)
    m = HenonMap(a=-2.0, b=0.0)
    sample = [((0.01, 0.0), (1.0, 0.0))]  # |2x| = 0.02 << e^c
    rep = check_expansion_G4(m, sample, n_s=1, params=params)
    assert rep.pass_fraction == 0.0
    assert not rep.expansion_ok[0]


def test_g4_cone_invariance_flagged():
    params = Params(M=100)
    m = HenonMap(a=-1.4, b=0.3, perturbation="classical")
    cone = ConeField(center=(0.0, 1.0), half_angle=0.1)  # vertical cone: image leaves it
    sample = [((1.5, 0.1), (0.0, 1.0))]
    rep = check_expansion_G4(m, sample, n_s=1, params=params, cone=cone)
    assert not rep.cone_ok[0]


def test_hyperbolic_times_at_expanding_fixed_point():
    params = Params(M=100)
    m = HenonMap(a=-2.0, b=0.0)
    tp = tangent_cocycle(m, (-1.0, 0.0), (1.0, 0.0), 40)  # |2x| = 2 every step
    assert all(h_times_check(tp, n, params) for n in range(1, 41))


def test_hyperbolic_times_fail_after_contraction():
    params = Params(M=100)
    m = HenonMap(a=-2.0, b=0.0)
    # 1.8 -> 1.24 -> -0.4624: third step multiplies by |2x| ~ 0.92
    tp = tangent_cocycle(m, (1.8, 0.0), (1.0, 0.0), 6)
    assert not h_times_check(tp, 3, params)


def test_pce_holds_for_generic_vector():
    params = Params(M=9)
    m = HenonMap(a=-2.0, b=0.0)
    tp = tangent_cocycle(m, (0.3, 0.0), (1.0, 0.0), 30)
    assert all(pce_check(tp, k, params) for k in range(1, 31))


def test_pce_fails_only_on_exact_collapse():
    params = Params(M=9)
    m = HenonMap(a=-2.0, b=0.0)
    x0 = 0.3
    tp = tangent_cocycle(m, (x0, 0.0), (1.0, -2.0 * x0), 5)  # kernel direction
    assert tp.ell[1] == -math.inf
    assert not pce_check(tp, 1, params)


def test_most_contracted_direction_is_kernel_at_b_zero():
    m = HenonMap(a=-2.0, b=0.0)
    x0 = 0.4
    e1, gap = most_contracted_direction(m, (x0, 0.0), 1)
    want = np.array([1.0, -2.0 * x0])
    want /= np.linalg.norm(want)
    assert min(np.linalg.norm(e1 - want), np.linalg.norm(e1 + want)) < 1e-12
    assert gap > 0


def test_most_contracted_direction_rejects_conformal_jacobian():
    m = HenonMap(
        a=0.0,
        b=0.0,
        perturbation="custom",
        custom_B=lambda x, y: (0.5 * x - 1.25 * y, 0.25 * x + 0.5 * y),
        custom_dB=lambda x, y: np.array([[0.5, -1.25], [0.25, 0.5]]),
    )
    # total Jacobian at the origin is a similarity: equal singular values
    with pytest.raises(ValueError):
        most_contracted_direction(m, (0.0, 0.0), 1)


def test_region_sample_collapses_to_segment_at_b_zero():
    params = Params(M=100, b=0.0)  # theta = 0: no vertical thickening
    m = HenonMap(a=-2.0, b=0.0)
    pts = region_sample_U(m, params, 500, seed=3)
    assert pts.shape == (500, 2)
    assert np.all(pts[:, 1] == 0.0)
    assert pts[:, 0].min() >= -2.0 - 1e-9
    assert pts[:, 0].max() <= 2.0 + 1e-9


def test_region_sample_deterministic_in_seed():
    params = Params(M=64)
    m = HenonMap(a=-1.9, b=params.b, perturbation="classical")
    p1 = region_sample_U(m, params, 100, seed=11)
    p2 = region_sample_U(m, params, 100, seed=11)
    p3 = region_sample_U(m, params, 100, seed=12)
    assert np.array_equal(p1, p2)
    assert not np.array_equal(p1, p3)


# ---------------------------------------------------------------------------
# cones and serialization


def test_cone_contains_symmetric():
    cone = ConeField(center=(1.0, 0.0), half_angle=0.3)
    assert cone.contains((1.0, 0.1))
    assert cone.contains((-1.0, -0.1))  # same line
    assert not cone.contains((1.0, 1.0))


def test_cone_rejects_flat_half_angle():
    with pytest.raises(ValueError):
        ConeField(center=(1.0, 0.0), half_angle=1.5)


def test_map_json_roundtrip(tmp_path):
    m = HenonMap(a=-1.99, b=1e-6, perturbation="classical")
    d = map_to_dict(m)
    assert d == {"a": -1.99, "b": 1e-6, "perturbation": "classical"}
    m2 = map_from_dict(json.loads(json.dumps(d)))
    assert (m2.a, m2.b, m2.perturbation) == (m.a, m.b, m.perturbation)
    path = tmp_path / "map.json"
    path.write_text(json.dumps(d))
    m3 = load_map(str(path))
    assert m3.a == m.a


def test_map_from_dict_rejects_custom():
    with pytest.raises(ValueError):
        map_from_dict({"a": -2.0, "b": 0.0, "perturbation": "custom"})


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-2.0, 0.0),
    st.floats(0.0, 0.3),
    st.floats(-1.0, 1.0),
    st.floats(-0.3, 0.3),
)
def test_jacobian_is_derivative_of_apply(a, b, x, y):
    m = HenonMap(a=a, b=b, perturbation="classical" if b else "zero")
    J = m.jacobian(x, y)
    h = 1e-6
    for i, (dx, dy) in enumerate(((h, 0.0), (0.0, h))):
        fp = np.array(m.apply(x + dx, y + dy))
        fm = np.array(m.apply(x - dx, y - dy))
        assert np.allclose((fp - fm) / (2 * h), J[:, i], atol=1e-5)
