"""Nominal input-profile generators for cyclic fatigue trials.

Two state machines produce the nominal duty each control step:

C1 (temperature setpoint): heat at a fixed duty until the measured
temperature enters a tolerance band around the limit, hold there for a
fixed duration (the supervisor maintains the ceiling), then cool to a
cooling temperature before starting the next cycle.

C2 (fixed time): heat at a fixed duty for a fixed duration, then cool for
a fixed duration; the cycle period is exact regardless of temperature.
"""

from dataclasses import dataclass, replace

_EPS = 1e-9  # timer comparisons tolerate accumulated float error in dt sums

HEATING = "heating"
HOLDING = "holding"
COOLING = "cooling"


class StuckTrialError(RuntimeError):
    """Raised when C1 cooling fails to reach its target within the timeout."""


@dataclass(frozen=True)
class C1Config:
    t_set: float
    tol: float = 8.0
    hold_s: float = 20.0
    t_cool: float = 36.16        # slightly above ambient; see module notes
    duty: float = 0.5
    v_max: int = 100
    cooling_timeout_s: float = 600.0

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.hold_s > 0:
            raise ValueError("hold_s must be positive")
        if not 0 < self.duty <= 1:
            raise ValueError("duty must lie in (0,1]")
        if not self.t_cool < self.t_set - self.tol:
            raise ValueError("t_cool must be below the setpoint band")
        if self.v_max < 1:
            raise ValueError("v_max must be at least 1")


@dataclass(frozen=True)
class C1State:
    phase: str = HEATING
    hold_elapsed: float = 0.0
    cool_elapsed: float = 0.0
    cycle: int = 1


@dataclass(frozen=True)
class C2Config:
    heat_s: float = 45.0
    cool_s: float = 65.0
    duty: float = 0.5
    v_max: int = 100

    def __post_init__(self):
        if not (self.heat_s > 0 and self.cool_s > 0):
            raise ValueError("heat_s and cool_s must be positive")
        if not 0 < self.duty <= 1:
            raise ValueError("duty must lie in (0,1]")
        if self.v_max < 1:
            raise ValueError("v_max must be at least 1")


@dataclass(frozen=True)
class C2State:
    phase: str = HEATING
    phase_elapsed: float = 0.0
    cycle: int = 1


def c1_step(
    st: C1State, cfg: C1Config, t_meas: float, dt: float
) -> tuple[float, C1State, bool]:
    """Advance the temperature-setpoint generator by one control period.

    Returns (nominal duty, next state, done). The hold timer accumulates
    wall time once started and is not reset by momentary band exits.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if st.cycle > cfg.v_max:
        return 0.0, st, True

    in_band = abs(t_meas - cfg.t_set) < cfg.tol

    if st.phase == HEATING:
        if in_band:
            return cfg.duty, replace(st, phase=HOLDING, hold_elapsed=0.0), False
        return cfg.duty, st, False

    if st.phase == HOLDING:
        hold = st.hold_elapsed + dt
        if hold >= cfg.hold_s - _EPS:
            return 0.0, replace(st, phase=COOLING, hold_elapsed=hold,
                                cool_elapsed=0.0), False
        return cfg.duty, replace(st, hold_elapsed=hold), False

    # COOLING
    if t_meas < cfg.t_cool:
        nxt = C1State(phase=HEATING, cycle=st.cycle + 1)
        return 0.0, nxt, nxt.cycle > cfg.v_max
    cool = st.cool_elapsed + dt
    if cool > cfg.cooling_timeout_s:
        raise StuckTrialError(
            f"cycle {st.cycle}: cooling did not reach {cfg.t_cool} degC "
            f"within {cfg.cooling_timeout_s} s"
        )
    return 0.0, replace(st, cool_elapsed=cool), False


def c2_step(st: C2State, cfg: C2Config, dt: float) -> tuple[float, C2State, bool]:
    """Advance the fixed-time generator by one control period."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if st.cycle > cfg.v_max:
        return 0.0, st, True

    elapsed = st.phase_elapsed + dt
    if st.phase == HEATING:
        if elapsed >= cfg.heat_s - _EPS:
            return 0.0, replace(st, phase=COOLING, phase_elapsed=0.0), False
        return cfg.duty, replace(st, phase_elapsed=elapsed), False

    # COOLING
    if elapsed >= cfg.cool_s - _EPS:
        nxt = C2State(phase=HEATING, cycle=st.cycle + 1)
        return 0.0, nxt, nxt.cycle > cfg.v_max
    return 0.0, replace(st, phase_elapsed=elapsed), False
