"""Synthetic SMA hardware stand-in.

Combines the shared thermal model with a phase-dependent blocked-force law
and a temperature-driven functional-fatigue state. The degradation fraction
d relaxes toward a temperature-dependent floor and never recovers, so the
per-cycle peak force decays toward a known asymptote the analysis pipeline
must recover:

    F = f0 * phase_fraction(T) * d
    floor(T) = 1 below the damage onset, a plateau up to the knee
               temperature, then a linear decline down to an absolute floor.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .thermal import DiscreteCoeffs, step_temperature


@dataclass(frozen=True)
class FatigueParams:
    f0: float        # fresh peak force, N
    t_act: float     # logistic activation center, degC
    w: float         # logistic width, degC
    t_dmg: float     # damage onset temperature, degC
    t_knee: float    # plateau knee temperature, degC
    d_plateau: float  # plateau degradation floor, fraction
    kappa: float     # floor slope above the knee, 1/degC
    d_min: float     # absolute floor, fraction
    eta: float       # relaxation rate, 1/(degC*s)

    def __post_init__(self):
        if not self.f0 > 0:
            raise ValueError(f"f0 must be positive, got {self.f0}")
        if not self.w > 0:
            raise ValueError(f"w must be positive, got {self.w}")
        if not self.t_dmg < self.t_knee:
            raise ValueError("t_dmg must be below t_knee")
        if not 0 < self.d_min <= self.d_plateau <= 1:
            raise ValueError("need 0 < d_min <= d_plateau <= 1")
        if self.kappa < 0:
            raise ValueError("kappa must be non-negative")
        if not self.eta > 0:
            raise ValueError("eta must be positive")


@dataclass(frozen=True)
class PlantState:
    temp: float      # degC
    d: float         # degradation fraction in [d_min, 1]
    elapsed: float   # s


@dataclass(frozen=True)
class NoiseParams:
    sigma_t: float   # temperature noise std, degC
    sigma_f: float   # force noise std, N
    seed: int

    def __post_init__(self):
        if self.sigma_t < 0 or self.sigma_f < 0:
            raise ValueError("noise sigmas must be non-negative")


class NoiseStream:
    """Buffered Gaussian draws for one trial; deterministic given its seed.

    Zero-sigma streams return exact zeros without consuming any draws.
    """

    _BLOCK = 8192

    def __init__(self, noise: NoiseParams, seed_seq=None):
        self.sigma_t = noise.sigma_t
        self.sigma_f = noise.sigma_f
        self._rng = np.random.default_rng(
            seed_seq if seed_seq is not None else noise.seed
        )
        self._buf = np.empty(0)
        self._i = 0

    def pair(self) -> tuple[float, float]:
        if self.sigma_t == 0.0 and self.sigma_f == 0.0:
            return 0.0, 0.0
        if self._i + 2 > self._buf.size:
            self._buf = self._rng.standard_normal(self._BLOCK)
            self._i = 0
        i = self._i
        self._i = i + 2
        return self.sigma_t * self._buf[i], self.sigma_f * self._buf[i + 1]


def phase_fraction(t: float, fp: FatigueParams) -> float:
    """Logistic austenite fraction surrogate, strictly increasing in t."""
    return 1.0 / (1.0 + math.exp(-(t - fp.t_act) / fp.w))


def degradation_floor(t: float, fp: FatigueParams) -> float:
    """Lowest degradation fraction reachable at a given temperature."""
    if t <= fp.t_dmg:
        return 1.0
    if t <= fp.t_knee:
        return fp.d_plateau
    return max(fp.d_plateau - fp.kappa * (t - fp.t_knee), fp.d_min)


def degrade_step(s: PlantState, fp: FatigueParams, dt: float) -> PlantState:
    """First-order relaxation of d toward the floor; no recovery ever."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    excess = max(s.temp - fp.t_dmg, 0.0)
    gap = max(s.d - degradation_floor(s.temp, fp), 0.0)
    d_new = s.d - dt * fp.eta * excess * gap
    return replace(s, d=max(d_new, fp.d_min))


def blocked_force(s: PlantState, fp: FatigueParams) -> float:
    """Blocked force at the current temperature and degradation state."""
    return fp.f0 * phase_fraction(s.temp, fp) * s.d


def plant_step(
    s: PlantState,
    u: float,
    coeffs: DiscreteCoeffs,
    fp: FatigueParams,
    dt: float,
    noise: NoiseStream,
) -> tuple[PlantState, float, float]:
    """Advance the true state one control period and return noisy measurements.

    Returns (new_state, measured_temp, measured_force). The true state
    evolves noiselessly; measurement noise is additive Gaussian from the
    trial's seeded stream.
    """
    t_next = step_temperature(coeffs, s.temp, u)
    s_next = degrade_step(
        PlantState(temp=t_next, d=s.d, elapsed=s.elapsed + dt), fp, dt
    )
    nt, nf = noise.pair()
    return s_next, s_next.temp + nt, blocked_force(s_next, fp) + nf
