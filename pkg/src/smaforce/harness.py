"""Trial and sweep orchestration.

Wires plant, supervisor, and input generator at the fixed control period,
logs every step, and persists logs as self-describing CSV (a ``#``-prefixed
key=value metadata block echoing the full configuration, then the data).

Per-cell RNG streams are derived from (base seed, profile, setpoint), so a
sweep produces identical results whether cells run serially or in parallel.
"""

import concurrent.futures
import io
from dataclasses import dataclass, replace

import numpy as np

from . import plant as plant_mod
from .generators import (
    C1Config,
    C1State,
    C2Config,
    C2State,
    StuckTrialError,
    c1_step,
    c2_step,
)
from .plant import FatigueParams, NoiseParams, NoiseStream, PlantState, blocked_force
from .supervisor import SupervisorConfig, saturate
from .thermal import ThermalParams, discretize

COLUMNS = (
    "time_s",
    "cycle",
    "phase",
    "duty_nominal",
    "duty_applied",
    "temp_true_C",
    "temp_meas_C",
    "force_true_N",
    "force_meas_N",
)


class CsvFormatError(ValueError):
    """Structural problem in a trial CSV; carries the offending line number."""

    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class TrialStuckError(RuntimeError):
    """A trial could not finish; the partial log is preserved."""

    def __init__(self, msg: str, partial_log: "TrialLog"):
        super().__init__(msg)
        self.partial_log = partial_log


@dataclass(frozen=True)
class TrialConfig:
    thermal: ThermalParams
    fatigue: FatigueParams
    noise: NoiseParams
    t_set: float
    gamma: float
    kind: str                 # active generator, "c1" or "c2"
    c1: C1Config
    c2: C2Config
    v_max: int

    def __post_init__(self):
        if self.kind not in ("c1", "c2"):
            raise ValueError(f"generator kind must be c1 or c2, got {self.kind}")
        if self.v_max < 1:
            raise ValueError("v_max must be at least 1")

    @property
    def dt(self) -> float:
        return self.thermal.dt


@dataclass
class TrialLog:
    meta: dict[str, str]
    time: np.ndarray
    cycle: np.ndarray
    phase: list[str]
    duty_nominal: np.ndarray
    duty_applied: np.ndarray
    temp_true: np.ndarray
    temp_meas: np.ndarray
    force_true: np.ndarray
    force_meas: np.ndarray
    final_state: PlantState | None = None   # not serialized

    def __len__(self) -> int:
        return int(self.time.size)

    def meta_float(self, key: str) -> float:
        return float(self.meta[key])

    @property
    def profile(self) -> str:
        return self.meta["generator.kind"]


def trial_config_from_dict(
    cfg: dict,
    profile: str | None = None,
    t_set: float | None = None,
    v_max: int | None = None,
    seed: int | None = None,
) -> TrialConfig:
    """Build a TrialConfig from a merged configuration dictionary."""
    th = cfg["thermal"]
    thermal = ThermalParams(
        alpha1=th["alpha1"], alpha2=th["alpha2"], t_amb=th["t_amb"], dt=th["dt"]
    )
    fg = cfg["fatigue"]
    fatigue = FatigueParams(
        f0=fg["f0"], t_act=fg["t_act"], w=fg["w"], t_dmg=fg["t_dmg"],
        t_knee=fg["t_knee"], d_plateau=fg["d_plateau"], kappa=fg["kappa"],
        d_min=fg["d_min"], eta=fg["eta"],
    )
    nz = cfg["noise"]
    noise = NoiseParams(
        sigma_t=nz["sigma_t"], sigma_f=nz["sigma_f"],
        seed=seed if seed is not None else nz["seed"],
    )
    t_set = float(t_set if t_set is not None else cfg["supervisor"]["t_set"])
    v_max = int(v_max if v_max is not None else cfg["trial"]["v_max"])
    kind = profile if profile is not None else cfg["generator"]["kind"]

    g1 = cfg["generator"]["c1"]
    c1 = C1Config(
        t_set=t_set,
        tol=g1["tol"],
        hold_s=g1["hold_s"],
        t_cool=g1.get("t_cool", thermal.t_amb + 1.0),
        duty=g1["duty"],
        v_max=v_max,
        cooling_timeout_s=g1["cooling_timeout_s"],
    )
    g2 = cfg["generator"]["c2"]
    c2 = C2Config(
        heat_s=g2["heat_s"], cool_s=g2["cool_s"], duty=g2["duty"], v_max=v_max
    )
    return TrialConfig(
        thermal=thermal, fatigue=fatigue, noise=noise, t_set=t_set,
        gamma=cfg["supervisor"]["gamma"], kind=kind, c1=c1, c2=c2, v_max=v_max,
    )


def config_meta(cfg: TrialConfig) -> dict[str, str]:
    """Flattened key=value echo of the full configuration."""
    th, fg, nz = cfg.thermal, cfg.fatigue, cfg.noise
    meta = {
        "format": "smaforce-trial-v1",
        "generator.kind": cfg.kind,
        "t_set": _fmt(cfg.t_set),
        "supervisor.t_set": _fmt(cfg.t_set),
        "supervisor.gamma": _fmt(cfg.gamma),
        "trial.v_max": str(cfg.v_max),
        "thermal.alpha1": _fmt(th.alpha1),
        "thermal.alpha2": _fmt(th.alpha2),
        "thermal.t_amb": _fmt(th.t_amb),
        "thermal.dt": _fmt(th.dt),
        "fatigue.f0": _fmt(fg.f0),
        "fatigue.t_act": _fmt(fg.t_act),
        "fatigue.w": _fmt(fg.w),
        "fatigue.t_dmg": _fmt(fg.t_dmg),
        "fatigue.t_knee": _fmt(fg.t_knee),
        "fatigue.d_plateau": _fmt(fg.d_plateau),
        "fatigue.kappa": _fmt(fg.kappa),
        "fatigue.d_min": _fmt(fg.d_min),
        "fatigue.eta": _fmt(fg.eta),
        "noise.sigma_t": _fmt(nz.sigma_t),
        "noise.sigma_f": _fmt(nz.sigma_f),
        "noise.seed": str(nz.seed),
        "generator.c1.tol": _fmt(cfg.c1.tol),
        "generator.c1.hold_s": _fmt(cfg.c1.hold_s),
        "generator.c1.t_cool": _fmt(cfg.c1.t_cool),
        "generator.c1.duty": _fmt(cfg.c1.duty),
        "generator.c1.cooling_timeout_s": _fmt(cfg.c1.cooling_timeout_s),
        "generator.c2.heat_s": _fmt(cfg.c2.heat_s),
        "generator.c2.cool_s": _fmt(cfg.c2.cool_s),
        "generator.c2.duty": _fmt(cfg.c2.duty),
    }
    return meta


def run_trial(
    cfg: TrialConfig,
    initial_state: PlantState | None = None,
    seed_seq=None,
) -> TrialLog:
    """Execute one cycling trial; deterministic given the seed.

    The loop per control step: read the measured temperature, let the
    generator emit its nominal duty, saturate it through the supervisor,
    advance the plant, and log one row. Measured (not true) values feed
    the controllers; true values are logged alongside for oracle checks.
    """
    coeffs = discretize(cfg.thermal)
    sup = SupervisorConfig(t_set=cfg.t_set, gamma=cfg.gamma, coeffs=coeffs)
    fp = cfg.fatigue
    dt = cfg.dt
    stream = NoiseStream(cfg.noise, seed_seq=seed_seq)

    state = initial_state or PlantState(temp=cfg.thermal.t_amb, d=1.0, elapsed=0.0)
    gen_c1 = cfg.kind == "c1"
    gst = C1State() if gen_c1 else C2State()

    nt, nf = stream.pair()
    t_meas = state.temp + nt
    f_meas = blocked_force(state, fp) + nf

    time_l: list[float] = []
    cyc_l: list[int] = []
    ph_l: list[str] = []
    un_l: list[float] = []
    ua_l: list[float] = []
    tt_l: list[float] = []
    tm_l: list[float] = []
    ft_l: list[float] = []
    fm_l: list[float] = []

    k = 0
    stuck_msg = None
    while True:
        try:
            if gen_c1:
                u_nom, gst, done = c1_step(gst, cfg.c1, t_meas, dt)
            else:
                u_nom, gst, done = c2_step(gst, cfg.c2, dt)
        except StuckTrialError as exc:
            stuck_msg = str(exc)
            break
        u = 0.0 if done else saturate(u_nom, t_meas, sup)
        time_l.append(k * dt)
        cyc_l.append(min(gst.cycle, cfg.v_max))
        ph_l.append(gst.phase)
        un_l.append(u_nom)
        ua_l.append(u)
        tt_l.append(state.temp)
        tm_l.append(t_meas)
        ft_l.append(blocked_force(state, fp))
        fm_l.append(f_meas)
        if done:
            break
        state, t_meas, f_meas = plant_mod.plant_step(
            state, u, coeffs, fp, dt, stream
        )
        k += 1

    log = TrialLog(
        meta=config_meta(cfg),
        time=np.asarray(time_l),
        cycle=np.asarray(cyc_l, dtype=int),
        phase=ph_l,
        duty_nominal=np.asarray(un_l),
        duty_applied=np.asarray(ua_l),
        temp_true=np.asarray(tt_l),
        temp_meas=np.asarray(tm_l),
        force_true=np.asarray(ft_l),
        force_meas=np.asarray(fm_l),
        final_state=state,
    )
    if stuck_msg is not None:
        raise TrialStuckError(stuck_msg, log)
    return log


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class CellResult:
    profile: str
    t_set: float
    seed_key: tuple[int, ...]
    log: TrialLog | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.log is not None


def cell_seed_key(base_seed: int, profile: str, t_set: float) -> tuple[int, ...]:
    return (int(base_seed), 0 if profile == "c1" else 1, int(round(t_set * 1000)))


def reachable_duty(thermal: ThermalParams, t_set: float, duty: float) -> float:
    """Raise the nominal duty when its equilibrium cannot reach the setpoint.

    With the identified coefficients a 50% duty tops out near 220 degC, so
    high setpoints would leave the heater short of the temperature band.
    The supervisor still guarantees containment at any duty.
    """
    if thermal.equilibrium(duty) >= t_set + 1.0:
        return duty
    need = -thermal.alpha1 * (t_set + 15.0 - thermal.t_amb) / thermal.alpha2
    return min(1.0, max(duty, need))


def derive_cell(base: TrialConfig, profile: str, t_set: float) -> TrialConfig:
    """Per-cell configuration: fresh plant, cell seed, reachable duty."""
    c1 = replace(
        base.c1,
        t_set=t_set,
        duty=reachable_duty(base.thermal, t_set, base.c1.duty),
        v_max=base.v_max,
    )
    c2 = replace(
        base.c2,
        duty=reachable_duty(base.thermal, t_set, base.c2.duty),
        v_max=base.v_max,
    )
    return replace(base, kind=profile, t_set=t_set, c1=c1, c2=c2)


def _run_cell(args) -> CellResult:
    base, profile, t_set = args
    key = cell_seed_key(base.noise.seed, profile, t_set)
    cell = derive_cell(base, profile, t_set)
    try:
        log = run_trial(cell, seed_seq=np.random.SeedSequence(key))
        log.meta["cell.seed_key"] = ":".join(str(k) for k in key)
        return CellResult(profile=profile, t_set=t_set, seed_key=key, log=log)
    except (TrialStuckError, ValueError, RuntimeError) as exc:
        return CellResult(profile=profile, t_set=t_set, seed_key=key,
                          error=f"{type(exc).__name__}: {exc}")


def run_cells(
    base: TrialConfig,
    cells: list[tuple[str, float]],
    jobs: int = 1,
) -> list[CellResult]:
    """Run independent sweep cells, serially or in parallel.

    Results are returned in the order of ``cells`` regardless of execution
    order; per-cell failures are recorded and do not abort the sweep.
    """
    if not cells:
        raise ValueError("empty sweep grid")
    work = [(base, p, t) for p, t in cells]
    if jobs <= 1:
        return [_run_cell(w) for w in work]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_cell, work))


def run_sweep(
    base: TrialConfig,
    t_sets: list[float],
    profiles: tuple[str, ...] = ("c1", "c2"),
    jobs: int = 1,
) -> list[TrialLog]:
    """Cross product of profiles and setpoints; returns successful logs."""
    cells = [(p, float(t)) for p in profiles for t in t_sets]
    return [r.log for r in run_cells(base, cells, jobs=jobs) if r.ok]


def ab_comparison(
    base: TrialConfig, t_low: float, t_high: float, cycles: int
) -> dict:
    """Condition two fresh specimens at t_low / t_high, re-cycle both at
    t_low, and compare blocked forces at the matched temperature.

    Of ``cycles`` total per specimen, the last (up to) 50 are the re-cycle
    phase at t_low; the rest condition at the specimen's own temperature.
    """
    n_recycle = min(cycles, 50)
    n_condition = max(cycles - n_recycle, 0)

    forces = {}
    for t_cond in (t_low, t_high):
        state = PlantState(temp=base.thermal.t_amb, d=1.0, elapsed=0.0)
        for t_set, n in ((t_cond, n_condition), (t_low, n_recycle)):
            if n < 1:
                continue
            cell = derive_cell(replace(base, v_max=n), "c1", t_set)
            cell = replace(cell, c1=replace(cell.c1, v_max=n))
            key = cell_seed_key(base.noise.seed, "c1", t_set)
            log = run_trial(
                cell, initial_state=state,
                seed_seq=np.random.SeedSequence(key),
            )
            state = log.final_state
        probe = PlantState(temp=t_low, d=state.d, elapsed=state.elapsed)
        forces[t_cond] = blocked_force(probe, base.fatigue)

    return {
        "f_low": forces[t_low],
        "f_high": forces[t_high],
        "ratio": forces[t_high] / forces[t_low],
        "n_condition": n_condition,
        "n_recycle": n_recycle,
    }


# ---------------------------------------------------------------------------
# CSV persistence


def _fmt(x: float) -> str:
    # 12 significant digits: 9 is not enough to guarantee 1e-9 relative
    # round-trip fidelity when the leading mantissa digit is small
    return f"{x:.12g}"


def write_csv(log: TrialLog, path: str) -> None:
    """Serialize with 12 significant digits and the metadata header block."""
    buf = io.StringIO()
    for key in sorted(log.meta):
        buf.write(f"# {key}={log.meta[key]}\n")
    buf.write(",".join(COLUMNS) + "\n")
    for i in range(len(log)):
        buf.write(
            f"{_fmt(log.time[i])},{log.cycle[i]},{log.phase[i]},"
            f"{_fmt(log.duty_nominal[i])},{_fmt(log.duty_applied[i])},"
            f"{_fmt(log.temp_true[i])},{_fmt(log.temp_meas[i])},"
            f"{_fmt(log.force_true[i])},{_fmt(log.force_meas[i])}\n"
        )
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def read_csv(path: str) -> TrialLog:
    """Parse a trial CSV; structural errors report the offending line."""
    meta: dict[str, str] = {}
    rows: list[tuple] = []
    header_seen = False
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                if header_seen:
                    raise CsvFormatError(lineno, "metadata after the header row")
                body = line[1:].strip()
                if "=" not in body:
                    raise CsvFormatError(lineno, f"malformed metadata: {body!r}")
                key, _, val = body.partition("=")
                meta[key.strip()] = val.strip()
                continue
            if not header_seen:
                if tuple(line.split(",")) != COLUMNS:
                    raise CsvFormatError(
                        lineno, f"unexpected column header: {line!r}"
                    )
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) != len(COLUMNS):
                raise CsvFormatError(
                    lineno, f"expected {len(COLUMNS)} fields, got {len(parts)}"
                )
            try:
                rows.append((
                    lineno,
                    float(parts[0]), int(parts[1]), parts[2],
                    float(parts[3]), float(parts[4]), float(parts[5]),
                    float(parts[6]), float(parts[7]), float(parts[8]),
                ))
            except ValueError as exc:
                raise CsvFormatError(lineno, f"bad numeric field: {exc}") from exc
    if not header_seen:
        raise CsvFormatError(1, "missing column header row")
    if not rows:
        raise CsvFormatError(1, "no data rows")

    linenos = [r[0] for r in rows]
    rows = [r[1:] for r in rows]
    time = np.array([r[0] for r in rows])
    bad = np.flatnonzero(np.diff(time) <= 0)
    if bad.size:
        raise CsvFormatError(linenos[int(bad[0]) + 1], "non-monotone time")
    cycle = np.array([r[1] for r in rows], dtype=int)
    bad = np.flatnonzero(np.diff(cycle) < 0)
    if bad.size:
        raise CsvFormatError(linenos[int(bad[0]) + 1], "cycle column decreases")
    return TrialLog(
        meta=meta,
        time=time,
        cycle=cycle,
        phase=[r[2] for r in rows],
        duty_nominal=np.array([r[3] for r in rows]),
        duty_applied=np.array([r[4] for r in rows]),
        temp_true=np.array([r[5] for r in rows]),
        temp_meas=np.array([r[6] for r in rows]),
        force_true=np.array([r[7] for r in rows]),
        force_meas=np.array([r[8] for r in rows]),
    )
