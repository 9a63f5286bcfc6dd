"""Heating a wire with and without the supervisory temperature cap.

Runs the electrothermal model at full duty for five minutes, once open
loop and once through the supervisor with a 140 degC limit, and plots
both trajectories. Open loop the wire shoots toward its ~405 degC full-
duty equilibrium; supervised, it settles exactly on the limit without
ever crossing it.
"""

import os

from smaforce import (
    SupervisorConfig,
    ThermalParams,
    discretize,
    saturate,
    step_temperature,
)
from smaforce.svgplot import line_plot

OUT = os.path.join(os.path.dirname(__file__), "output")

params = ThermalParams(alpha1=-0.079, alpha2=29.22, t_amb=35.16, dt=0.2)
coeffs = discretize(params)
sup = SupervisorConfig(t_set=140.0, gamma=0.15, coeffs=coeffs)

print(f"full-duty equilibrium: {params.equilibrium(1.0):.1f} degC")
print(f"corrected internal setpoint: {sup.t_set_adj:.4f} degC")

t_open = t_capped = params.t_amb
times, opens, capped = [], [], []
peak = t_capped
for k in range(int(300.0 / params.dt)):
    t_open = step_temperature(coeffs, t_open, 1.0)
    u = saturate(1.0, t_capped, sup)
    t_capped = step_temperature(coeffs, t_capped, u)
    peak = max(peak, t_capped)
    times.append(k * params.dt)
    opens.append(t_open)
    capped.append(t_capped)

print(f"open loop after 300 s: {t_open:.1f} degC")
print(f"supervised after 300 s: {t_capped:.4f} degC "
      f"(peak {peak:.4f}, never above the limit)")

os.makedirs(OUT, exist_ok=True)
line_plot(
    [("open loop, duty 1.0", times, opens),
     ("supervised, limit 140", times, capped)],
    os.path.join(OUT, "supervisor.svg"),
    title="Supervisory temperature cap at full nominal duty",
    xlabel="time (s)", ylabel="temperature (degC)",
)
print(f"wrote {os.path.join(OUT, 'supervisor.svg')}")
