"""From cycling trials to a conservative temperature limit.

Runs a reduced sweep (four temperatures, both cycling profiles, 40
cycles each), extracts per-cycle peak forces, fits exponential decays,
and selects the limit where the long-life force curve departs its
plateau. The full-size sweep lives behind `smaforce sweep`; this demo
trades resolution for a few seconds of runtime.
"""

import os

from smaforce import (
    build_force_curve,
    load_defaults,
    max_force_per_cycle,
    run_sweep,
    select_limit,
    select_model,
    trial_config_from_dict,
)
from smaforce.analysis import extract_windows
from smaforce.svgplot import line_plot

OUT = os.path.join(os.path.dirname(__file__), "output")

t_sets = [130.0, 150.0, 175.0, 230.0]
base = trial_config_from_dict(load_defaults(), profile="c1", v_max=40)
logs = run_sweep(base, t_sets)

fits = {"c1": [], "c2": []}
series_by_profile = {"c1": [], "c2": []}
for log in logs:
    windows, _ = extract_windows(log)
    series, _ = max_force_per_cycle(log, windows)
    fit = select_model(series)
    t_set = float(log.meta["t_set"])
    print(f"{log.profile}@{t_set:g} degC: {fit.family} fit, "
          f"F_inf = {fit.f_infinity:.3f} N (rmse {fit.rmse:.3g})")
    fits[log.profile].append((t_set, fit))
    series_by_profile[log.profile].append(series)

curves = {p: build_force_curve(f, p) for p, f in fits.items()}
result = select_limit(curves["c1"], curves["c2"])
print(f"\nplateau knees: c1 at {result.knee_c1:g} degC, "
      f"c2 at {result.knee_c2:g} degC")
print(f"conservative limit: {result.t_limit:g} degC")

os.makedirs(OUT, exist_ok=True)
line_plot(
    [(p, list(c.temps), list(c.forces)) for p, c in sorted(curves.items())],
    os.path.join(OUT, "force_curve.svg"),
    title="Long-life force vs temperature limit",
    xlabel="temperature limit (degC)", ylabel="F_inf (N)",
)
line_plot(
    [(s.label, list(s.cycles), list(s.forces))
     for s in series_by_profile["c1"]],
    os.path.join(OUT, "peak_decay.svg"),
    title="Per-cycle peak force, setpoint profile",
    xlabel="cycle", ylabel="peak force (N)",
)
print(f"wrote figures to {OUT}")
