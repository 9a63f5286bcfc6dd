"""First-order electrothermal temperature model of a Joule-heated SMA wire.

Continuous form:  dT/dt = alpha1 * (T - T_amb) + alpha2 * u
Discrete form:    T[k+1] = a1 * T[k] + a2 * u[k] + a3

with a1 = 1 + alpha1*dt, a2 = alpha2*dt, a3 = -alpha1*T_amb*dt.
The zero-input fixed point of both forms is the ambient temperature.
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ThermalParams:
    """Continuous-time model parameters.

    alpha1: cooling rate coefficient, 1/s (negative)
    alpha2: heating gain, degC/s per unit duty
    t_amb:  ambient temperature constant, degC
    dt:     control period, s
    """

    alpha1: float
    alpha2: float
    t_amb: float
    dt: float

    def __post_init__(self):
        if not self.alpha1 < 0:
            raise ValueError(f"alpha1 must be negative, got {self.alpha1}")
        if not self.alpha2 > 0:
            raise ValueError(f"alpha2 must be positive, got {self.alpha2}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not abs(self.alpha1) * self.dt < 1:
            raise ValueError(
                f"|alpha1|*dt = {abs(self.alpha1) * self.dt} >= 1, "
                "discretization unstable"
            )

    def equilibrium(self, u_const: float) -> float:
        """Steady-state temperature under a constant duty."""
        return self.t_amb - self.alpha2 * u_const / self.alpha1


@dataclass(frozen=True)
class DiscreteCoeffs:
    """Discrete-time affine coefficients, valid for one fixed dt."""

    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        if not 0 < self.a1 < 1:
            raise ValueError(f"a1 must lie in (0,1), got {self.a1}")
        if not self.a2 > 0:
            raise ValueError(f"a2 must be positive, got {self.a2}")

    @property
    def ambient(self) -> float:
        """Zero-input fixed point a3 / (1 - a1)."""
        return self.a3 / (1.0 - self.a1)


def discretize(p: ThermalParams) -> DiscreteCoeffs:
    """Exact-coefficient forward-Euler discretization at period p.dt."""
    return DiscreteCoeffs(
        a1=1.0 + p.alpha1 * p.dt,
        a2=p.alpha2 * p.dt,
        a3=-p.alpha1 * p.t_amb * p.dt,
    )


def step_temperature(c: DiscreteCoeffs, t_k: float, u_k: float) -> float:
    """One control-period update of the wire temperature."""
    return c.a1 * t_k + c.a2 * u_k + c.a3


def analytic_response(p: ThermalParams, t0: float, u_const: float, t: float) -> float:
    """Closed-form temperature at time t under constant duty (test oracle)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    t_eq = p.equilibrium(u_const)
    return t_eq + (t0 - t_eq) * math.exp(p.alpha1 * t)
