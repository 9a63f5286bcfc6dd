import math

import numpy as np
import pytest

from smaforce.thermal import (
    DiscreteCoeffs,
    ThermalParams,
    analytic_response,
    discretize,
    step_temperature,
)


def test_discretize_reference_coefficients(ref_params):
    c = discretize(ref_params)
    assert c.a1 == pytest.approx(0.9842, abs=1e-12)
    assert c.a2 == pytest.approx(5.844, abs=1e-12)
    assert c.a3 == pytest.approx(0.555528, rel=1e-9)


def test_ambient_is_fixed_point(ref_params, ref_coeffs):
    assert step_temperature(ref_coeffs, ref_params.t_amb, 0.0) == pytest.approx(
        ref_params.t_amb, abs=1e-9
    )
    assert ref_coeffs.ambient == pytest.approx(ref_params.t_amb, abs=1e-9)


def test_fixed_point_property_random_params():
    rng = np.random.default_rng(3)
    for _ in range(200):
        p = ThermalParams(
            alpha1=-rng.uniform(0.01, 0.5),
            alpha2=rng.uniform(1.0, 60.0),
            t_amb=rng.uniform(-10.0, 60.0),
            dt=rng.uniform(0.05, 1.0),
        )
        c = discretize(p)
        assert step_temperature(c, p.t_amb, 0.0) == pytest.approx(
            p.t_amb, abs=1e-9
        )


def test_one_step_update_value(ref_coeffs):
    # 0.9842 * 35.16 + 5.844 * 0.5 + 0.555528
    assert step_temperature(ref_coeffs, 35.16, 0.5) == pytest.approx(
        38.082, abs=1e-9
    )


def test_equilibrium_half_duty(ref_params):
    assert ref_params.equilibrium(0.5) == pytest.approx(220.0967, abs=1e-3)
    assert ref_params.equilibrium(0.0) == ref_params.t_amb


def test_steady_duty_holds_setpoint(ref_params, ref_coeffs):
    u = -ref_params.alpha1 * (140.0 - ref_params.t_amb) / ref_params.alpha2
    assert u == pytest.approx(0.28345, abs=5e-5)
    temp = ref_params.t_amb
    for _ in range(8000):
        temp = step_temperature(ref_coeffs, temp, u)
    assert temp == pytest.approx(140.0, abs=1e-3)


def test_discrete_tracks_analytic_response(ref_params, ref_coeffs):
    # forward-Euler at dt = 0.2 stays within half a degree of the exact
    # solution for duties up to 0.4 over a full 120 s heating transient
    for u in (0.0, 0.2, 0.4):
        temp = ref_params.t_amb
        worst = 0.0
        for k in range(600):
            temp = step_temperature(ref_coeffs, temp, u)
            exact = analytic_response(ref_params, ref_params.t_amb, u,
                                      (k + 1) * ref_params.dt)
            worst = max(worst, abs(temp - exact))
        assert worst <= 0.5


def test_analytic_response_limits(ref_params):
    assert analytic_response(ref_params, 35.16, 0.5, 0.0) == pytest.approx(35.16)
    assert analytic_response(ref_params, 35.16, 0.5, 1e6) == pytest.approx(
        ref_params.equilibrium(0.5), abs=1e-9
    )
    # monotone approach from below
    ts = [analytic_response(ref_params, 35.16, 0.5, t) for t in (1, 5, 20, 60)]
    assert all(b > a for a, b in zip(ts, ts[1:]))


def test_heating_monotone_to_equilibrium(ref_params, ref_coeffs):
    t_eq = ref_params.equilibrium(0.3)
    temp = ref_params.t_amb
    prev = temp
    for _ in range(3000):
        temp = step_temperature(ref_coeffs, temp, 0.3)
        assert temp < t_eq + 1e-9
        if t_eq - prev > 1e-6:      # strictly increasing until converged
            assert temp > prev
        prev = temp


def test_parameter_validation():
    with pytest.raises(ValueError):
        ThermalParams(alpha1=0.1, alpha2=29.22, t_amb=35.16, dt=0.2)
    with pytest.raises(ValueError):
        ThermalParams(alpha1=-0.079, alpha2=-1.0, t_amb=35.16, dt=0.2)
    with pytest.raises(ValueError):
        ThermalParams(alpha1=-0.079, alpha2=29.22, t_amb=35.16, dt=0.0)
    with pytest.raises(ValueError):
        # |alpha1| * dt >= 1 would flip the discrete pole sign
        ThermalParams(alpha1=-6.0, alpha2=29.22, t_amb=35.16, dt=0.2)
    with pytest.raises(ValueError):
        DiscreteCoeffs(a1=1.01, a2=5.844, a3=0.5)


def test_analytic_response_rejects_negative_time(ref_params):
    with pytest.raises(ValueError):
        analytic_response(ref_params, 35.16, 0.5, -1.0)


def test_time_constant_matches_pole(ref_params):
    # after one time constant 1/|alpha1| the gap to equilibrium is 1/e
    tau = 1.0 / abs(ref_params.alpha1)
    t_eq = ref_params.equilibrium(0.5)
    gap0 = t_eq - ref_params.t_amb
    gap = t_eq - analytic_response(ref_params, ref_params.t_amb, 0.5, tau)
    assert gap / gap0 == pytest.approx(math.exp(-1.0), rel=1e-12)
