"""Command-line front end.

Subcommands cover the full pipeline: identify (system ID), simulate (one
trial), sweep (temperature x profile grid with manifest), analyze (per-cycle
peaks, decay fits, force curves, SVG figures), limit (conservative
temperature limit), validate (A/B degradation comparison), and plot
(regenerate figures from analysis CSVs).

Every command is deterministic given its inputs and seed; outputs are
written only under the requested output location. Failures exit nonzero
with a single machine-parsable ``category: message`` line on stderr.
"""

import argparse
import csv
import hashlib
import os
import sys

import numpy as np

from . import analysis, fitting, harness, svgplot, sysid
from .config import ConfigError, load_config
from .harness import CsvFormatError, TrialStuckError
from .sysid import ExcitationConfig, IdentifiabilityError


class CliError(Exception):
    def __init__(self, category: str, msg: str, code: int = 1):
        super().__init__(msg)
        self.category = category
        self.code = code


# ---------------------------------------------------------------------------
# aux CSV formats


def write_fmax_csv(series: fitting.DecaySeries, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# label={series.label}\n")
        fh.write(f"# t_set={series.t_set:.9g}\n")
        fh.write("cycle,f_max_N\n")
        for v, f in zip(series.cycles, series.forces):
            fh.write(f"{int(v)},{f:.9g}\n")


def write_curve_csv(curve: analysis.ForceCurve, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("profile,t_set_C,f_inf_N,family,rmse\n")
        for p in curve.points:
            fh.write(
                f"{curve.profile},{p.t_set:.9g},{p.f_inf:.9g},"
                f"{p.family},{p.rmse:.9g}\n"
            )


def read_curve_csv(path: str) -> analysis.ForceCurve:
    points = []
    profile = None
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            profile = row["profile"]
            points.append(analysis.CurvePoint(
                t_set=float(row["t_set_C"]),
                f_inf=float(row["f_inf_N"]),
                family=row["family"],
                rmse=float(row["rmse"]),
            ))
    if profile is None:
        raise CliError("parse-error", f"empty curve file: {path}")
    return analysis.ForceCurve(profile=profile, points=tuple(points))


def _config_hash(cfg: harness.TrialConfig) -> str:
    meta = harness.config_meta(cfg)
    blob = "\n".join(f"{k}={meta[k]}" for k in sorted(meta))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# commands


def cmd_identify(args) -> int:
    if args.log:
        log_path = args.log
        if not os.path.exists(log_path):
            raise CliError("io-error", f"no such file: {log_path}")
        temps, duties, dt = _load_id_data(log_path)
        result = sysid.fit_linear(temps, duties, dt)
    else:
        cfg = load_config(args.config)
        th = cfg["thermal"]
        params = sysid.ThermalParams(
            alpha1=th["alpha1"], alpha2=th["alpha2"],
            t_amb=th["t_amb"], dt=th["dt"],
        )
        exc = ExcitationConfig(dt=th["dt"], seed=args.seed)
        result = sysid.identify_synthetic(params, exc, noise_sigma=args.noise)
    p = result.params
    print(f"alpha1 = {p.alpha1:.6g} 1/s")
    print(f"alpha2 = {p.alpha2:.6g} degC/s per unit duty")
    print(f"t_amb  = {p.t_amb:.6g} degC")
    print(f"residual_rmse = {result.residual_rmse:.6g} degC "
          f"over {result.sample_count} samples")
    with open(args.out, "w", newline="") as fh:
        fh.write("alpha1,alpha2,t_amb,dt,residual_rmse,sample_count\n")
        fh.write(f"{p.alpha1:.9g},{p.alpha2:.9g},{p.t_amb:.9g},"
                 f"{p.dt:.9g},{result.residual_rmse:.9g},"
                 f"{result.sample_count}\n")
    return 0


def _load_id_data(path: str):
    with open(path) as fh:
        first = fh.readline()
    if first.startswith("#") or first.startswith("time_s,"):
        log = harness.read_csv(path)
        return log.temp_meas, log.duty_applied, log.meta_float("thermal.dt")
    # bare two-column format: temp_C,duty at an assumed 0.2 s period
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 2:
        raise CliError("parse-error", f"{path}: expected columns temp_C,duty")
    return data[:, 0], data[:, 1], 0.2


def cmd_simulate(args) -> int:
    cfg_dict = load_config(args.config)
    base = harness.trial_config_from_dict(
        cfg_dict, profile=args.profile, t_set=args.t_set,
        v_max=args.v_max, seed=args.seed,
    )
    cell = harness.derive_cell(base, base.kind, base.t_set)
    key = harness.cell_seed_key(cell.noise.seed, cell.kind, cell.t_set)
    try:
        log = harness.run_trial(cell, seed_seq=np.random.SeedSequence(key))
    except TrialStuckError as exc:
        harness.write_csv(exc.partial_log, args.out)
        raise CliError("stuck-trial", f"{exc} (partial log written)") from exc
    log.meta["cell.seed_key"] = ":".join(str(k) for k in key)
    harness.write_csv(log, args.out)
    print(f"wrote {args.out}: {len(log)} rows, {log.cycle[-1]} cycles")
    return 0


def cmd_sweep(args) -> int:
    cfg_dict = load_config(args.config)
    base = harness.trial_config_from_dict(cfg_dict, seed=args.seed)
    cells = [("c1", float(t)) for t in cfg_dict["sweep"]["c1_t_sets"]]
    cells += [("c2", float(t)) for t in cfg_dict["sweep"]["c2_t_sets"]]

    os.makedirs(args.out, exist_ok=True)
    manifest_path = os.path.join(args.out, "manifest.csv")
    done: dict[tuple[str, float], dict] = {}
    if args.resume and os.path.exists(manifest_path):
        with open(manifest_path, newline="") as fh:
            for row in csv.DictReader(fh):
                done[(row["profile"], float(row["t_set"]))] = row

    rows = []
    todo = []
    for profile, t_set in cells:
        cell_cfg = harness.derive_cell(base, profile, t_set)
        chash = _config_hash(cell_cfg)
        path = os.path.join(args.out, f"trial_{profile}_{t_set:g}.csv")
        prev = done.get((profile, t_set))
        if (prev and prev["status"] == "ok" and prev["config_hash"] == chash
                and os.path.exists(prev["path"])):
            rows.append(prev)
            continue
        todo.append((profile, t_set, chash, path))

    results = harness.run_cells(
        base, [(p, t) for p, t, _, _ in todo], jobs=args.jobs
    ) if todo else []
    n_failed = 0
    for (profile, t_set, chash, path), res in zip(todo, results):
        if res.ok:
            harness.write_csv(res.log, path)
            status = "ok"
        else:
            status = "failed"
            n_failed += 1
            print(f"cell {profile}@{t_set:g} failed: {res.error}",
                  file=sys.stderr)
        rows.append({
            "profile": profile, "t_set": f"{t_set:g}",
            "seed_key": ":".join(str(k) for k in res.seed_key),
            "config_hash": chash, "status": status, "path": path,
        })

    rows.sort(key=lambda r: (r["profile"], float(r["t_set"])))
    with open(manifest_path, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["profile", "t_set", "seed_key", "config_hash",
                            "status", "path"])
        writer.writeheader()
        writer.writerows(rows)
    n_ok = sum(1 for r in rows if r["status"] == "ok")
    print(f"sweep: {n_ok} ok, {n_failed} failed; manifest at {manifest_path}")
    return 3 if n_failed else 0


def cmd_analyze(args) -> int:
    paths = sorted(
        os.path.join(args.in_dir, f)
        for f in os.listdir(args.in_dir)
        if f.startswith("trial_") and f.endswith(".csv")
    ) if os.path.isdir(args.in_dir) else []
    if not paths:
        raise CliError("input-error", f"no trial CSVs found in {args.in_dir}")
    os.makedirs(args.out, exist_ok=True)

    per_profile: dict[str, list] = {"c1": [], "c2": []}
    fmax_series: dict[str, list] = {"c1": [], "c2": []}
    for path in paths:
        log = harness.read_csv(path)
        windows, warns = analysis.extract_windows(log)
        series, more = analysis.max_force_per_cycle(log, windows)
        for w in warns + more:
            print(f"{os.path.basename(path)}: {w}", file=sys.stderr)
        stem = os.path.splitext(os.path.basename(path))[0]
        write_fmax_csv(series, os.path.join(args.out, f"fmax_{stem}.csv"))
        fit = fitting.select_model(series)
        per_profile[log.profile].append((log.meta_float("t_set"), fit))
        fmax_series[log.profile].append(series)

    curves = {}
    for profile, fits in per_profile.items():
        if len(fits) >= 2:
            curve = analysis.build_force_curve(fits, profile)
            curves[profile] = curve
            write_curve_csv(
                curve, os.path.join(args.out, f"curve_{profile}.csv")
            )
        if fmax_series[profile]:
            svgplot.line_plot(
                [(f"{s.t_set:g} degC", list(s.cycles), list(s.forces))
                 for s in sorted(fmax_series[profile], key=lambda s: s.t_set)],
                os.path.join(args.out, f"fmax_{profile}.svg"),
                title=f"Per-cycle peak force, {profile} profile",
                xlabel="cycle", ylabel="peak force (N)",
            )
    if curves:
        svgplot.line_plot(
            [(p, list(c.temps), list(c.forces))
             for p, c in sorted(curves.items())],
            os.path.join(args.out, "curve.svg"),
            title="Predicted long-life force vs temperature limit",
            xlabel="temperature limit (degC)", ylabel="F_inf (N)",
        )
    print(f"analyzed {len(paths)} trials into {args.out}")
    return 0


def cmd_limit(args) -> int:
    c1_path = os.path.join(args.curves, "curve_c1.csv")
    c2_path = os.path.join(args.curves, "curve_c2.csv")
    missing = [p for p in (c1_path, c2_path) if not os.path.exists(p)]
    if missing:
        raise CliError(
            "input-error",
            "limit selection needs both profiles; missing "
            + ", ".join(missing),
        )
    result = analysis.select_limit(
        read_curve_csv(c1_path), read_curve_csv(c2_path), delta=args.delta
    )
    for d in result.diagnostics:
        print(d, file=sys.stderr)
    out = args.out or os.path.join(args.curves, "limit.txt")
    with open(out, "w") as fh:
        fh.write(f"{result.t_limit:g}\n")
    print(f"{result.t_limit:g}")
    print(f"(knee c1 = {result.knee_c1:g}, knee c2 = {result.knee_c2:g}; "
          f"wrote {out})", file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    cfg_dict = load_config(args.config)
    base = harness.trial_config_from_dict(cfg_dict, profile="c1",
                                          seed=args.seed)
    res = harness.ab_comparison(base, args.t_low, args.t_high, args.cycles)
    print(f"conditioned {res['n_condition']} cycles + {res['n_recycle']} "
          f"cycles at {args.t_low:g} degC")
    print(f"blocked force at {args.t_low:g} degC: "
          f"low-T specimen {res['f_low']:.4g} N, "
          f"high-T specimen {res['f_high']:.4g} N")
    print(f"high/low force ratio = {res['ratio']:.4g}")
    return 0


def cmd_plot(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    made = 0
    curves = []
    for profile in ("c1", "c2"):
        path = os.path.join(args.in_dir, f"curve_{profile}.csv")
        if os.path.exists(path):
            curves.append(read_curve_csv(path))
    if curves:
        svgplot.line_plot(
            [(c.profile, list(c.temps), list(c.forces)) for c in curves],
            os.path.join(args.out, "curve.svg"),
            title="Predicted long-life force vs temperature limit",
            xlabel="temperature limit (degC)", ylabel="F_inf (N)",
        )
        made += 1
    fmax_files = sorted(
        f for f in os.listdir(args.in_dir)
        if f.startswith("fmax_") and f.endswith(".csv")
    )
    series = []
    for f in fmax_files:
        label, xs, ys = _read_fmax(os.path.join(args.in_dir, f))
        series.append((label, xs, ys))
    if series:
        svgplot.line_plot(
            series, os.path.join(args.out, "fmax.svg"),
            title="Per-cycle peak force",
            xlabel="cycle", ylabel="peak force (N)",
        )
        made += 1
    if not made:
        raise CliError("input-error", f"nothing to plot in {args.in_dir}")
    print(f"wrote {made} figure(s) to {args.out}")
    return 0


def _read_fmax(path: str):
    label = os.path.basename(path)
    xs, ys = [], []
    with open(path) as fh:
        for line in fh:
            if line.startswith("# label="):
                label = line.split("=", 1)[1].strip()
            elif line.startswith("#") or line.startswith("cycle,"):
                continue
            else:
                v, f = line.strip().split(",")
                xs.append(float(v))
                ys.append(float(f))
    return label, xs, ys


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="smaforce",
        description="Simulated SMA muscle fatigue workbench",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identify", help="identify thermal model parameters")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--log", help="trial CSV or bare temp_C,duty CSV")
    src.add_argument("--synthetic", action="store_true",
                     help="generate the 10-minute random excitation first")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0,
                   help="temperature noise std for synthetic mode (degC)")
    p.add_argument("--out", default="id.csv")
    p.set_defaults(fn=cmd_identify)

    p = sub.add_parser("simulate", help="run a single cycling trial")
    p.add_argument("--config", default=None)
    p.add_argument("--profile", choices=("c1", "c2"), default=None)
    p.add_argument("--t-set", type=float, default=None)
    p.add_argument("--v-max", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("sweep", help="run the temperature x profile grid")
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--resume", action="store_true")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("analyze", help="extract peak forces and fit decays")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("limit", help="select the conservative limit")
    p.add_argument("--curves", required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_limit)

    p = sub.add_parser("validate", help="A/B degradation comparison")
    p.add_argument("--t-low", type=float, default=140.0)
    p.add_argument("--t-high", type=float, default=230.0)
    p.add_argument("--cycles", type=int, default=150)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("plot", help="regenerate SVG figures from CSVs")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_plot)

    return ap


_CATEGORIES = {
    ConfigError: "config-error",
    CsvFormatError: "parse-error",
    IdentifiabilityError: "identifiability-error",
    TrialStuckError: "stuck-trial",
    FileNotFoundError: "io-error",
    ValueError: "input-error",
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return exc.code
    except tuple(_CATEGORIES) as exc:
        for etype, category in _CATEGORIES.items():
            if isinstance(exc, etype):
                print(f"{category}: {exc}", file=sys.stderr)
                break
        return 1


if __name__ == "__main__":
    sys.exit(main())
