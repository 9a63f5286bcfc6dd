"""One-step predictive supervisory controller for the wire temperature.

The supervisor never raises the nominal duty; it caps it at gamma * u*,
where u* is the duty that would bring the predicted next-step temperature
exactly to the (equilibrium-corrected) limit. The correction keeps the
closed-loop fixed point at the configured limit despite the discount.
"""

from dataclasses import dataclass, field

from .thermal import DiscreteCoeffs


def adjusted_setpoint(t_set: float, gamma: float, c: DiscreteCoeffs) -> float:
    """Equilibrium-corrected setpoint so the discounted loop settles at t_set."""
    if not 0 < gamma <= 1:
        raise ValueError(f"gamma must lie in (0,1], got {gamma}")
    k = (1.0 - gamma) / gamma
    return (1.0 / gamma - c.a1 * k) * t_set - c.a3 * k


@dataclass(frozen=True)
class SupervisorConfig:
    t_set: float
    gamma: float
    coeffs: DiscreteCoeffs
    t_set_adj: float = field(init=False)

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must lie in (0,1], got {self.gamma}")
        if not self.t_set > self.coeffs.ambient:
            raise ValueError(
                f"t_set={self.t_set} must exceed the ambient fixed point "
                f"{self.coeffs.ambient:.2f}"
            )
        object.__setattr__(
            self, "t_set_adj", adjusted_setpoint(self.t_set, self.gamma, self.coeffs)
        )


def max_input(t_k: float, cfg: SupervisorConfig) -> float:
    """Duty that drives the predicted next temperature to the corrected setpoint.

    Unclamped: negative when the current temperature already exceeds the limit.
    """
    c = cfg.coeffs
    return (cfg.t_set_adj - c.a1 * t_k - c.a3) / c.a2


def saturate(u_nom: float, t_k: float, cfg: SupervisorConfig) -> float:
    """Apply the discounted cap and the physical PWM bounds [0, 1]."""
    u = min(u_nom, cfg.gamma * max_input(t_k, cfg))
    return min(max(u, 0.0), 1.0)
