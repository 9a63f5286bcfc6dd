"""Linear identification of the electrothermal model from logged data.

A piecewise-constant random duty sequence excites the wire; the discrete
coefficients are then recovered by one-step-ahead least squares on
(T[k], u[k]) -> T[k+1] and mapped back to the continuous parameters.
"""

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .thermal import ThermalParams, discretize


class IdentifiabilityError(ValueError):
    """Regressors are rank-deficient; the data cannot pin down the model."""


@dataclass(frozen=True)
class ExcitationConfig:
    duration: float = 600.0
    dt: float = 0.2
    segment_s: float = 2.0
    duty_lo: float = 0.0
    duty_hi: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.duration < 10 * self.segment_s:
            raise ValueError("duration must cover at least 10 segments")
        n = self.segment_s / self.dt
        if abs(n - round(n)) > 1e-9:
            raise ValueError("dt must divide segment_s")
        if not 0 <= self.duty_lo <= self.duty_hi <= 1:
            raise ValueError("duty range must satisfy 0 <= lo <= hi <= 1")


@dataclass(frozen=True)
class IdResult:
    params: ThermalParams
    residual_rmse: float
    sample_count: int
    diagnostics: tuple[str, ...] = ()


def excite(cfg: ExcitationConfig) -> np.ndarray:
    """Segment-held random duty sequence; deterministic given the seed."""
    rng = np.random.default_rng(cfg.seed)
    n_seg = int(round(cfg.duration / cfg.segment_s))
    per_seg = int(round(cfg.segment_s / cfg.dt))
    levels = rng.uniform(cfg.duty_lo, cfg.duty_hi, size=n_seg)
    return np.repeat(levels, per_seg)


def simulate_temperature(
    p: ThermalParams, duties: np.ndarray, t0: float | None = None
) -> np.ndarray:
    """Noise-free temperature rollout; returns len(duties)+1 samples."""
    c = discretize(p)
    if t0 is None:
        t0 = p.t_amb
    forcing = c.a2 * np.asarray(duties, dtype=float) + c.a3
    # T[k+1] = a1*T[k] + forcing[k] is an order-1 IIR filter
    zi = np.array([c.a1 * t0])
    out, _ = lfilter([1.0], [1.0, -c.a1], forcing, zi=zi)
    return np.concatenate(([t0], out))


def fit_linear(
    temps: np.ndarray, duties: np.ndarray, dt: float, filter_window: int = 9
) -> IdResult:
    """Least-squares fit of the one-step dynamics, mapped to ThermalParams.

    temps has one more sample than duties (duties[k] acts between temps[k]
    and temps[k+1]); a trailing unused duty sample is tolerated.

    Both channels are pre-smoothed with a centered moving average. The
    dynamics are linear, so the recursion holds exactly for the filtered
    signals (noiseless fits are unaffected), while the reduced and
    lag-correlated measurement noise largely cancels the regression bias
    that raw noisy temperatures induce on the ambient estimate.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    temps = np.asarray(temps, dtype=float)
    duties = np.asarray(duties, dtype=float)
    if temps.size == duties.size:
        duties = duties[:-1]
    if temps.size != duties.size + 1:
        raise ValueError("need len(temps) == len(duties) + 1")
    if temps.size < 4:
        raise IdentifiabilityError("need at least 3 transitions")
    if np.any(duties < 0) or np.any(duties > 1):
        raise ValueError("duties must lie in [0,1]")

    if filter_window > 1 and temps.size > 3 * filter_window:
        kernel = np.full(filter_window, 1.0 / filter_window)
        temps = np.convolve(temps, kernel, mode="valid")
        duties = np.convolve(duties, kernel, mode="valid")[: temps.size - 1]

    x = np.column_stack([temps[:-1], duties, np.ones(duties.size)])
    y = temps[1:]
    # SVD-based solve for conditioning; also yields the rank check
    coef, _, rank, sv = np.linalg.lstsq(x, y, rcond=None)
    if rank < 3 or sv[-1] < 1e-10 * sv[0]:
        raise IdentifiabilityError(
            "rank-deficient regressors (constant duty and settled temperature?)"
        )
    a1, a2, a3 = coef
    residual = y - x @ coef
    rmse = float(np.sqrt(np.mean(residual**2)))

    alpha1 = (a1 - 1.0) / dt
    alpha2 = a2 / dt
    diagnostics: list[str] = []
    if alpha1 >= 0 or alpha2 <= 0:
        diagnostics.append(
            f"recovered coefficients violate model structure: "
            f"alpha1={alpha1:.4g}, alpha2={alpha2:.4g}"
        )
        raise IdentifiabilityError("; ".join(diagnostics))
    t_amb = -a3 / (alpha1 * dt)
    try:
        params = ThermalParams(alpha1=alpha1, alpha2=alpha2, t_amb=t_amb, dt=dt)
    except ValueError as exc:
        raise IdentifiabilityError(str(exc)) from exc
    return IdResult(
        params=params,
        residual_rmse=rmse,
        sample_count=int(duties.size),
        diagnostics=tuple(diagnostics),
    )


def identify_synthetic(
    p: ThermalParams, cfg: ExcitationConfig, noise_sigma: float = 0.0
) -> IdResult:
    """Generate an excitation, simulate, optionally corrupt, and fit."""
    duties = excite(cfg)
    temps = simulate_temperature(p, duties)
    if noise_sigma > 0:
        rng = np.random.default_rng(cfg.seed + 1)
        temps = temps + rng.normal(0.0, noise_sigma, size=temps.size)
    return fit_linear(temps, duties, cfg.dt)
