import numpy as np
import pytest

from smaforce.analysis import (
    CurvePoint,
    CycleWindow,
    ForceCurve,
    build_force_curve,
    extract_windows,
    filter_outliers,
    max_force_per_cycle,
    plateau_knee,
    select_limit,
    windows_c1,
    windows_c2,
)
from smaforce.fitting import DecayFit
from smaforce.harness import TrialLog, run_trial


def _synthetic_log(profile, temps, cycles, meta_extra=None, forces=None):
    n = len(temps)
    meta = {
        "format": "smaforce-trial-v1",
        "generator.kind": profile,
        "t_set": "140",
        "generator.c1.tol": "8",
        "generator.c2.heat_s": "45",
        "thermal.dt": "0.2",
    }
    meta.update(meta_extra or {})
    forces = np.ones(n) if forces is None else np.asarray(forces, float)
    return TrialLog(
        meta=meta,
        time=0.2 * np.arange(n),
        cycle=np.asarray(cycles, dtype=int),
        phase=["heating"] * n,
        duty_nominal=np.zeros(n),
        duty_applied=np.zeros(n),
        temp_true=np.asarray(temps, float),
        temp_meas=np.asarray(temps, float),
        force_true=forces,
        force_meas=forces,
    )


def test_windows_c1_discards_first_half_of_dwell():
    # one cycle: in band (above 132) from index 50 to 149 inclusive
    temps = np.full(250, 100.0)
    temps[50:150] = 135.0
    log = _synthetic_log("c1", temps, np.ones(250))
    windows, warns = windows_c1(log)
    assert not warns
    assert len(windows) == 1
    assert (windows[0].start, windows[0].end) == (100, 150)


def test_windows_c1_warns_when_band_never_reached():
    temps = np.full(100, 100.0)
    log = _synthetic_log("c1", temps, np.ones(100))
    windows, warns = windows_c1(log)
    assert windows == []
    assert any("never entered" in w for w in warns)


def test_windows_c1_drops_cycle_still_in_band():
    temps = np.concatenate([np.full(50, 100.0), np.full(50, 135.0)])
    log = _synthetic_log("c1", temps, np.ones(100))
    windows, warns = windows_c1(log)
    assert windows == []
    assert any("never left" in w for w in warns)


def test_windows_c2_fixed_heating_span(make_trial):
    log = run_trial(make_trial(profile="c2", t_set=140.0, v_max=3))
    windows, warns = windows_c2(log)
    assert not warns
    assert len(windows) == 3
    for w in windows:
        assert w.end - w.start == 225      # 45 s at 0.2 s
    assert windows[0].start == 0


def test_windows_c2_drops_truncated_final_cycle():
    cycles = np.concatenate([np.ones(550), np.full(100, 2)])
    temps = np.full(650, 100.0)
    log = _synthetic_log("c2", temps, cycles)
    windows, warns = windows_c2(log)
    assert len(windows) == 1
    assert any("truncated" in w for w in warns)


def test_extract_windows_dispatch(make_trial):
    log1 = run_trial(make_trial(profile="c1", t_set=140.0, v_max=2))
    log2 = run_trial(make_trial(profile="c2", t_set=140.0, v_max=2))
    assert all(w.profile == "c1" for w in extract_windows(log1)[0])
    assert all(w.profile == "c2" for w in extract_windows(log2)[0])
    with pytest.raises(ValueError):
        windows_c1(log2)
    with pytest.raises(ValueError):
        windows_c2(log1)


def test_filter_outliers_clean_passes_through():
    f = np.full(50, 1.5)
    out, diag = filter_outliers(f)
    assert np.array_equal(out, f) and diag is None


def test_filter_outliers_removes_spike():
    rng = np.random.default_rng(0)
    f = 1.5 + 0.01 * rng.standard_normal(100)
    f[40] = 9.0
    out, diag = filter_outliers(f)
    assert diag is None
    assert out.size == 99
    assert out.max() < 2.0


def test_filter_outliers_cap_passes_through_with_diagnostic():
    # over a fifth of the window flagged: refuse to discard that much
    f = np.concatenate([np.ones(39), np.full(11, 10.0)])
    out, diag = filter_outliers(f)
    assert np.array_equal(out, f)
    assert diag is not None and "cap" in diag


def test_filter_outliers_needs_five_samples():
    with pytest.raises(ValueError):
        filter_outliers(np.ones(4))


def test_max_force_per_cycle_spike_immune():
    temps = np.full(250, 100.0)
    temps[50:150] = 135.0
    forces = np.full(250, 1.5)
    forces[120] = 7.0                      # sensor glitch inside the window
    log = _synthetic_log("c1", temps, np.ones(250), forces=forces)
    windows, _ = windows_c1(log)
    series, warns = max_force_per_cycle(log, windows)
    assert not warns
    assert series.forces[0] == pytest.approx(1.5)
    assert series.cycles[0] == 1
    assert series.t_set == 140.0


def test_max_force_windows_disjoint_and_ordered(make_trial):
    log = run_trial(make_trial(profile="c2", t_set=140.0, v_max=5))
    windows, _ = windows_c2(log)
    for a, b in zip(windows, windows[1:]):
        assert a.end <= b.start
    series, _ = max_force_per_cycle(log, windows)
    assert list(series.cycles) == [1, 2, 3, 4, 5]


def _flat_fit(c):
    return DecayFit(family="single", a=0.1, b=0.05, c=c, rmse=0.001)


def test_build_force_curve_sorts_and_rejects_duplicates():
    fits = [(150.0, _flat_fit(1.5)), (118.0, _flat_fit(1.52))]
    curve = build_force_curve(fits, "c1")
    assert list(curve.temps) == [118.0, 150.0]
    with pytest.raises(ValueError):
        build_force_curve([(118.0, _flat_fit(1.5)), (118.0, _flat_fit(1.4))],
                          "c1")
    with pytest.raises(ValueError):
        build_force_curve([(118.0, _flat_fit(1.5))], "c1")


def _curve(profile, pairs):
    return ForceCurve(profile=profile, points=tuple(
        CurvePoint(t_set=t, f_inf=f, family="single", rmse=0.001)
        for t, f in pairs
    ))


def test_plateau_knee_departure():
    c = _curve("c1", [(118, 1.50), (140, 1.55), (175, 1.48), (230, 0.9)])
    knee, plateau = plateau_knee(c, delta=0.1)
    assert knee == 175.0 and plateau
    # flat curve: knee at the top of the tested range
    knee, plateau = plateau_knee(_curve("c1", [(118, 1.5), (230, 1.5)]), 0.1)
    assert knee == 230.0 and plateau


def test_select_limit_takes_minimum():
    c1 = _curve("c1", [(118, 1.5), (150, 1.55), (175, 1.52), (230, 0.9)])
    c2 = _curve("c2", [(118, 1.5), (150, 1.55), (200, 1.1), (230, 0.8)])
    res = select_limit(c1, c2)
    assert (res.knee_c1, res.knee_c2, res.t_limit) == (175.0, 150.0, 150.0)


def test_select_limit_scale_invariant_around_delta():
    # shrinking everything well below delta makes the curve look flat
    c1 = _curve("c1", [(118, 0.15), (150, 0.155), (230, 0.09)])
    c2 = _curve("c2", [(118, 0.15), (150, 0.155), (230, 0.14)])
    res = select_limit(c1, c2, delta=0.1)
    assert res.t_limit == 230.0


def test_select_limit_no_plateau_diagnostic():
    c1 = _curve("c1", [(118, 2.0), (150, 1.5), (230, 1.0)])
    c2 = _curve("c2", [(118, 2.0), (150, 1.9), (230, 1.8)])
    res = select_limit(c1, c2, delta=0.1)
    assert res.t_limit == 118.0
    assert any("no plateau" in d for d in res.diagnostics)


def test_select_limit_input_checks():
    short = _curve("c1", [(118, 1.5), (150, 1.5)])
    full = _curve("c2", [(118, 1.5), (150, 1.5), (230, 1.0)])
    with pytest.raises(ValueError):
        select_limit(short, full)
    lo = _curve("c1", [(50, 1.5), (60, 1.5), (70, 1.5)])
    hi = _curve("c2", [(200, 1.5), (215, 1.5), (230, 1.0)])
    with pytest.raises(ValueError):
        select_limit(lo, hi)


def test_cycle_window_validation():
    with pytest.raises(ValueError):
        CycleWindow(cycle=1, start=10, end=10, profile="c1")
    with pytest.raises(ValueError):
        ForceCurve(profile="c1", points=(
            CurvePoint(150.0, 1.5, "single", 0.0),
            CurvePoint(118.0, 1.5, "single", 0.0),
        ))
