"""From raw trial logs to per-cycle peak forces and the long-life limit.

Per cycle, a window of force samples is extracted (fixed heating span for
the time-based profile; the in-band span with its first half discarded for
the setpoint profile), outliers are removed by a Hampel rule, and the
window maximum becomes one point of the decay series. Fitted asymptotes
per setpoint form a force curve per profile; the conservative temperature
limit is the lower of the two curves' plateau-departure knees.
"""

from dataclasses import dataclass

import numpy as np

from .fitting import DecayFit, DecaySeries
from .harness import TrialLog


@dataclass(frozen=True)
class CycleWindow:
    cycle: int
    start: int       # log index, inclusive
    end: int         # log index, exclusive
    profile: str

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError("window start must precede its end")


@dataclass(frozen=True)
class CurvePoint:
    t_set: float
    f_inf: float
    family: str
    rmse: float


@dataclass(frozen=True)
class ForceCurve:
    profile: str
    points: tuple[CurvePoint, ...]

    def __post_init__(self):
        temps = [p.t_set for p in self.points]
        if any(b <= a for a, b in zip(temps, temps[1:])):
            raise ValueError("curve temperatures must be strictly increasing")

    @property
    def temps(self) -> np.ndarray:
        return np.array([p.t_set for p in self.points])

    @property
    def forces(self) -> np.ndarray:
        return np.array([p.f_inf for p in self.points])


@dataclass(frozen=True)
class LimitResult:
    t_limit: float
    knee_c1: float
    knee_c2: float
    diagnostics: tuple[str, ...] = ()


def windows_c2(log: TrialLog) -> tuple[list[CycleWindow], list[str]]:
    """One window per cycle: heating start to start + heat_s, from the
    logged phase column. A truncated final cycle is dropped with a warning."""
    if log.profile != "c2":
        raise ValueError("log was not produced by the c2 generator")
    if not log.phase or any(not p for p in log.phase):
        raise ValueError("log lacks controller phase annotations")
    dt = log.meta_float("thermal.dt")
    span = int(round(log.meta_float("generator.c2.heat_s") / dt))

    windows: list[CycleWindow] = []
    warnings: list[str] = []
    n = len(log)
    for v in np.unique(log.cycle):
        idx = np.flatnonzero(log.cycle == v)
        start = int(idx[0])
        if start + span > n:
            warnings.append(f"cycle {v}: truncated, window dropped")
            continue
        windows.append(CycleWindow(int(v), start, start + span, "c2"))
    return windows, warnings


def windows_c1(log: TrialLog) -> tuple[list[CycleWindow], list[str]]:
    """Per cycle, the span where the measured temperature sits above
    t_set - tol, with the first half discarded as controller transient."""
    if log.profile != "c1":
        raise ValueError("log was not produced by the c1 generator")
    band = log.meta_float("t_set") - log.meta_float("generator.c1.tol")
    temps = log.temp_meas

    windows: list[CycleWindow] = []
    warnings: list[str] = []
    for v in np.unique(log.cycle):
        idx = np.flatnonzero(log.cycle == v)
        above = temps[idx] > band
        k_rel = np.flatnonzero(above)
        if k_rel.size == 0:
            warnings.append(f"cycle {v}: never entered the temperature band")
            continue
        k = int(k_rel[0])
        exit_rel = np.flatnonzero(~above[k:])
        if exit_rel.size == 0:
            warnings.append(f"cycle {v}: never left the band, window dropped")
            continue
        k_end = k + int(exit_rel[0])       # first index back below the band
        span = k_end - k
        start = int(idx[0]) + k + span // 2
        end = int(idx[0]) + k_end
        if start >= end:
            warnings.append(f"cycle {v}: band dwell too short, window dropped")
            continue
        windows.append(CycleWindow(int(v), start, end, "c1"))
    return windows, warnings


def extract_windows(log: TrialLog) -> tuple[list[CycleWindow], list[str]]:
    return windows_c1(log) if log.profile == "c1" else windows_c2(log)


def filter_outliers(
    forces: np.ndarray, n_mads: float = 5.0, max_discard: float = 0.2
) -> tuple[np.ndarray, str | None]:
    """Hampel rule around the window median.

    Never discards more than ``max_discard`` of the window; in that case
    the data pass through untouched with a diagnostic.
    """
    forces = np.asarray(forces, dtype=float)
    if forces.size < 5:
        raise ValueError("need at least 5 samples to filter")
    med = np.median(forces)
    mad = 1.4826 * np.median(np.abs(forces - med))
    keep = np.abs(forces - med) <= n_mads * mad
    n_drop = int(np.count_nonzero(~keep))
    if n_drop == 0:
        return forces, None
    if n_drop > max_discard * forces.size:
        return forces, (
            f"{n_drop}/{forces.size} samples flagged, above the "
            f"{max_discard:.0%} cap; passing window through unfiltered"
        )
    return forces[keep], None


def max_force_per_cycle(
    log: TrialLog, windows: list[CycleWindow]
) -> tuple[DecaySeries, list[str]]:
    """Per-cycle maximum of the filtered measured force inside each window."""
    cycles: list[int] = []
    peaks: list[float] = []
    warnings: list[str] = []
    for w in windows:
        seg = log.force_meas[w.start:w.end]
        if seg.size >= 5:
            seg, diag = filter_outliers(seg)
            if diag:
                warnings.append(f"cycle {w.cycle}: {diag}")
        if seg.size == 0:
            warnings.append(f"cycle {w.cycle}: empty window, cycle omitted")
            continue
        cycles.append(w.cycle)
        peaks.append(float(np.max(seg)))
    series = DecaySeries(
        cycles=np.array(cycles, dtype=float),
        forces=np.array(peaks),
        label=f"{log.profile}@{log.meta.get('t_set', '?')}",
        t_set=log.meta_float("t_set"),
    )
    return series, warnings


def build_force_curve(
    fits: list[tuple[float, DecayFit]], profile: str
) -> ForceCurve:
    """Sorted (t_set, f_infinity) pairs with fit metadata attached."""
    if len(fits) < 2:
        raise ValueError("a force curve needs at least 2 temperatures")
    temps = [t for t, _ in fits]
    if len(set(temps)) != len(temps):
        raise ValueError("duplicate t_set entries in curve input")
    pts = tuple(
        CurvePoint(t_set=t, f_inf=fit.f_infinity, family=fit.family,
                   rmse=fit.rmse)
        for t, fit in sorted(fits, key=lambda tf: tf[0])
    )
    return ForceCurve(profile=profile, points=pts)


def plateau_knee(curve: ForceCurve, delta: float) -> tuple[float, bool]:
    """Highest tested temperature before the curve departs its running
    maximum by more than delta. Returns (knee, plateau_found)."""
    f = curve.forces
    runmax = np.maximum.accumulate(f)
    departed = np.flatnonzero(runmax - f > delta)
    if departed.size == 0:
        return float(curve.temps[-1]), True
    i = int(departed[0])
    return float(curve.temps[i - 1]), i > 1 or f.size == 1


def select_limit(
    c1_curve: ForceCurve, c2_curve: ForceCurve, delta: float = 0.1
) -> LimitResult:
    """Conservative long-life limit: the lower of the two profiles' knees."""
    for curve in (c1_curve, c2_curve):
        if len(curve.points) < 3:
            raise ValueError(
                f"{curve.profile} curve has fewer than 3 temperatures"
            )
    lo = max(c1_curve.temps[0], c2_curve.temps[0])
    hi = min(c1_curve.temps[-1], c2_curve.temps[-1])
    if lo >= hi:
        raise ValueError("curves do not cover an overlapping temperature range")

    diagnostics: list[str] = []
    knees = {}
    for curve in (c1_curve, c2_curve):
        knee, plateau = plateau_knee(curve, delta)
        knees[curve.profile] = knee
        if not plateau and knee == curve.temps[0]:
            diagnostics.append(
                f"{curve.profile}: no plateau detected, curve departs "
                "immediately; knee set to the lowest tested temperature"
            )
    return LimitResult(
        t_limit=min(knees["c1"], knees["c2"]),
        knee_c1=knees["c1"],
        knee_c2=knees["c2"],
        diagnostics=tuple(diagnostics),
    )
