import math

import numpy as np
import pytest

from canadaday.peakon import (
    PeakonState,
    build_matrices,
    char_poly_coefficients,
    constants_of_motion,
    ode_rhs,
    rk4_step,
    simulate,
    waveform,
)

E1 = math.exp(-1.0)


def test_rhs_single_peakon():
    dx, dm = ode_rhs(PeakonState(0.0, [2.0], [1.5]))
    assert dx[0] == pytest.approx(1.5**2, abs=0)
    assert dm[0] == 0.0


def test_rhs_zero_amplitudes():
    dx, dm = ode_rhs(PeakonState(0.0, [0.0, 1.0, 2.0], [0.0, 0.0, 0.0]))
    assert np.all(dx == 0) and np.all(dm == 0)


def test_rhs_two_peakons_hand_values():
    dx, dm = ode_rhs(PeakonState(0.0, [0.0, 1.0], [1.0, 1.0]))
    assert dx[0] == pytest.approx((1 + E1) ** 2, rel=1e-15)
    assert dm[0] == pytest.approx((1 + E1) * (-E1), rel=1e-15)
    # mirror peakon sees the opposite slope
    assert dm[1] == pytest.approx((1 + E1) * E1, rel=1e-15)


def test_rk4_zero_amplitudes_only_advances_time():
    s = PeakonState(0.0, [0.0, 1.0], [0.0, 0.0])
    s2 = rk4_step(s, 1e-3)
    assert s2.t == pytest.approx(1e-3)
    assert np.array_equal(s2.x, s.x) and np.array_equal(s2.m, s.m)


def test_rk4_single_peakon_closed_form():
    s = PeakonState(0.0, [-1.0], [2.0])
    dt = 1e-3
    for _ in range(1000):
        s = rk4_step(s, dt)
    assert s.x[0] == pytest.approx(-1.0 + 4.0 * 1.0, abs=1e-10)
    assert s.m[0] == 2.0


def test_rk4_step_back_recovers_state():
    s = PeakonState(0.0, [-1.0, 0.5, 2.0], [1.0, 0.5, 2.0])
    back = rk4_step(rk4_step(s, 1e-3), -1e-3)
    assert np.allclose(back.x, s.x, atol=1e-10)
    assert np.allclose(back.m, s.m, atol=1e-10)


def test_build_matrices_two_peakons():
    mats = build_matrices(PeakonState(0.0, [0.0, 1.0], [2.0, 3.0]))
    assert np.array_equal(mats.P, np.diag([2.0, 3.0]))
    assert np.allclose(mats.E, [[1.0, E1], [E1, 1.0]], rtol=0, atol=0)
    assert np.array_equal(mats.T, [[1.0, 0.0], [2.0, 1.0]])


def test_build_matrices_coincident_positions():
    # not reachable from a valid initial state, but e^0 = 1 regardless
    mats = build_matrices(PeakonState(0.0, [2.0, 2.0], [1.0, 1.0]))
    assert mats.E.tolist() == [[1.0, 1.0], [1.0, 1.0]]


def test_build_matrices_single():
    mats = build_matrices(PeakonState(0.0, [3.0], [4.0]))
    assert mats.P.tolist() == [[4.0]]
    assert mats.E.tolist() == [[1.0]]
    assert mats.T.tolist() == [[1.0]]


def test_constants_single_peakon():
    h = constants_of_motion(PeakonState(0.0, [0.0], [3.0]))
    assert h.tolist() == [9.0]


def test_constants_zero_amplitudes():
    h = constants_of_motion(PeakonState(0.0, [0.0, 1.0], [0.0, 0.0]))
    assert h.tolist() == [0.0, 0.0]


def test_constants_two_peakons_hand_values():
    h = constants_of_motion(PeakonState(0.0, [0.0, 1.0], [1.0, 1.0]))
    assert h[0] == pytest.approx(2 + 2 * E1, rel=1e-15)
    assert h[1] == pytest.approx(1 - E1**2, rel=1e-14)


def test_constants_guard():
    with pytest.raises(ValueError):
        constants_of_motion(PeakonState(0.0, list(range(9)), [1.0] * 9))


def test_char_poly_single_peakon():
    c = char_poly_coefficients(PeakonState(0.0, [0.0], [3.0]))
    assert c.tolist() == [1.0, -9.0]


def test_char_poly_zero_amplitudes():
    c = char_poly_coefficients(PeakonState(0.0, [0.0, 1.0, 2.0], [0.0, 0.0, 0.0]))
    assert c.tolist() == [1.0, 0.0, 0.0, 0.0]


def test_char_poly_magnitudes_match_constants():
    s = PeakonState(0.0, [-2.0, 0.3, 1.7], [0.8, 1.1, 0.4])
    h = constants_of_motion(s)
    c = char_poly_coefficients(s)
    for k in range(1, 4):
        assert abs(c[k]) == pytest.approx(h[k - 1], rel=1e-10)
        assert c[k] == pytest.approx((-1) ** k * h[k - 1], rel=1e-10)


def test_waveform_peak_values():
    s = PeakonState(0.0, [0.0, 2.0], [1.0, 3.0])
    u = waveform(s, np.array([0.0, 2.0, 10.0]))
    assert u[0] == pytest.approx(1.0 + 3.0 * math.exp(-2.0), rel=1e-15)
    assert u[1] == pytest.approx(math.exp(-2.0) + 3.0, rel=1e-15)
    assert u[2] == pytest.approx(math.exp(-10.0) + 3.0 * math.exp(-8.0), rel=1e-15)


def test_simulate_single_peakon_zero_drift():
    r = simulate(PeakonState(0.0, [0.0], [1.3]), 1e-3, 10.0, sample_every=200)
    assert r.status == "ok"
    assert max(r.max_rel_drift) <= 1e-15


def test_simulate_two_peakons_conserves():
    r = simulate(PeakonState(0.0, [-1.0, 1.0], [1.0, 2.0]), 1e-3, 2.0, sample_every=50)
    assert r.status == "ok"
    assert max(r.max_rel_drift) <= 1e-8


def test_simulate_preserves_ordering_and_symmetry():
    r = simulate(PeakonState(0.0, [-5.0, 0.0, 3.0], [1.0, 2.0, 0.5]), 1e-2, 2.0, sample_every=20)
    assert r.status == "ok"
    for s in r.sampled_states:
        assert s.is_ordered()
        mats = build_matrices(s)
        assert np.array_equal(mats.E, mats.E.T)
        assert np.array_equal(np.diag(mats.E), np.ones(3))
        pep = mats.P @ mats.E @ mats.P
        # matmul rounding breaks bit-exactness, not symmetry
        assert np.allclose(pep, pep.T, rtol=1e-14, atol=0)


def test_simulate_drift_shrinks_sixteenfold():
    s = PeakonState(0.0, [-5.0, 0.0, 3.0], [1.0, 2.0, 0.5])
    coarse = max(simulate(s, 4e-2, 2.0, sample_every=1).max_rel_drift)
    fine = max(simulate(s, 2e-2, 2.0, sample_every=1).max_rel_drift)
    assert 8 <= coarse / fine <= 32


def test_simulate_flags_near_collision():
    r = simulate(PeakonState(0.0, [0.0, 5e-7], [1.0, 1.0]), 1e-3, 1.0)
    assert r.status == "collision"
    assert r.samples == [] and r.max_rel_drift == []


def test_simulate_flags_numerical_failure():
    r = simulate(PeakonState(0.0, [0.0, 1.0], [1e200, 1e200]), 1e-3, 1.0)
    assert r.status == "numerical failure"


def test_simulate_validates_inputs():
    good = PeakonState(0.0, [0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        simulate(good, -1e-3, 1.0)
    with pytest.raises(ValueError):
        simulate(good, 1e-3, 0.0)
    with pytest.raises(ValueError):
        simulate(PeakonState(0.0, [1.0, 0.0], [1.0, 1.0]), 1e-3, 1.0)
    with pytest.raises(ValueError):
        simulate(PeakonState(0.0, [0.0, 1.0], [1.0, -1.0]), 1e-3, 1.0)


def test_report_json_schema():
    r = simulate(PeakonState(0.0, [0.0], [1.0]), 1e-2, 0.1)
    d = r.to_json_dict()
    assert set(d) == {"n", "dt", "samples", "max_rel_drift", "status"}
    assert set(d["samples"][0]) == {"t", "H", "c"}
    assert d["status"] == "ok"


def test_state_validation():
    with pytest.raises(ValueError):
        PeakonState(0.0, [0.0, 1.0], [1.0])
    with pytest.raises(ValueError):
        PeakonState(0.0, [], [])
