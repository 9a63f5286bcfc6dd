"""End-to-end command-line pipeline tests on a reduced, fast configuration."""

import pytest

from smaforce import cli
from smaforce.svgplot import line_plot

SMALL_CFG = """\
[noise]
sigma_t = 0.1
sigma_f = 0.01

[trial]
v_max = 4

[sweep]
c1_t_sets = [130.0, 140.0, 150.0]
c2_t_sets = [130.0, 140.0, 150.0]
"""


@pytest.fixture
def small_config(tmp_path):
    p = tmp_path / "small.toml"
    p.write_text(SMALL_CFG)
    return str(p)


def test_identify_synthetic_noiseless(tmp_path, capsys):
    out = tmp_path / "id.csv"
    rc = cli.main(["identify", "--synthetic", "--out", str(out)])
    assert rc == 0
    row = out.read_text().splitlines()[1].split(",")
    assert float(row[0]) == pytest.approx(-0.079, rel=1e-6)
    assert float(row[1]) == pytest.approx(29.22, rel=1e-6)
    assert float(row[2]) == pytest.approx(35.16, rel=1e-6)
    assert "alpha1" in capsys.readouterr().out


def test_identify_from_trial_log(tmp_path, capsys):
    trial = tmp_path / "trial.csv"
    assert cli.main(["simulate", "--profile", "c2", "--t-set", "118",
                     "--v-max", "3", "--out", str(trial)]) == 0
    capsys.readouterr()
    rc = cli.main(["identify", "--log", str(trial),
                   "--out", str(tmp_path / "id.csv")])
    assert rc == 0
    # closed-loop cycling data is less exciting than the random probe,
    # but the fit should still land near the configured plant
    out = capsys.readouterr().out
    assert "alpha1" in out


def test_identify_missing_file(tmp_path, capsys):
    rc = cli.main(["identify", "--log", str(tmp_path / "nope.csv"),
                   "--out", str(tmp_path / "id.csv")])
    assert rc == 1
    assert "io-error" in capsys.readouterr().err


def test_identify_bare_two_column_csv(tmp_path, capsys):
    from smaforce.sysid import ExcitationConfig, excite, simulate_temperature
    from smaforce.thermal import ThermalParams

    p = ThermalParams(alpha1=-0.079, alpha2=29.22, t_amb=35.16, dt=0.2)
    duties = excite(ExcitationConfig(seed=2))
    temps = simulate_temperature(p, duties)
    bare = tmp_path / "bare.csv"
    with open(bare, "w") as fh:
        fh.write("temp_C,duty\n")
        for t, u in zip(temps, duties):
            fh.write(f"{t:.9g},{u:.9g}\n")
    out = tmp_path / "id.csv"
    assert cli.main(["identify", "--log", str(bare), "--out", str(out)]) == 0
    assert float(out.read_text().splitlines()[1].split(",")[0]) == \
        pytest.approx(-0.079, rel=1e-6)


def test_identify_constant_duty_fails(tmp_path, capsys):
    bare = tmp_path / "flat.csv"
    with open(bare, "w") as fh:
        fh.write("temp_C,duty\n")
        for _ in range(500):
            fh.write("35.16,0\n")
    rc = cli.main(["identify", "--log", str(bare),
                   "--out", str(tmp_path / "id.csv")])
    assert rc == 1
    assert "identifiability-error" in capsys.readouterr().err


def test_simulate_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["simulate", "--profile", "c1", "--t-set", "140",
            "--v-max", "2", "--seed", "7"]
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "rows" in capsys.readouterr().out


def test_sweep_manifest_and_resume(tmp_path, small_config, capsys):
    out = tmp_path / "sweep"
    rc = cli.main(["sweep", "--config", small_config, "--out", str(out)])
    assert rc == 0
    manifest = (out / "manifest.csv").read_text().splitlines()
    assert len(manifest) == 1 + 6          # header + 3 temps x 2 profiles
    assert all("ok" in row for row in manifest[1:])
    trial_files = sorted(f.name for f in out.glob("trial_*.csv"))
    assert len(trial_files) == 6

    # resume with an unchanged config re-runs nothing: byte-identical
    before = {f.name: f.read_bytes() for f in out.glob("*.csv")}
    mtimes = {f.name: f.stat().st_mtime_ns for f in out.glob("trial_*.csv")}
    assert cli.main(["sweep", "--config", small_config, "--out", str(out),
                     "--resume"]) == 0
    after = {f.name: f.read_bytes() for f in out.glob("*.csv")}
    assert before == after
    assert mtimes == {f.name: f.stat().st_mtime_ns
                      for f in out.glob("trial_*.csv")}
    capsys.readouterr()


def test_sweep_parallel_matches_serial(tmp_path, small_config, capsys):
    s, p = tmp_path / "serial", tmp_path / "par"
    assert cli.main(["sweep", "--config", small_config, "--out", str(s)]) == 0
    assert cli.main(["sweep", "--config", small_config, "--out", str(p),
                     "--jobs", "3"]) == 0
    # manifests embed their own directory paths; compare trial data only
    for f in sorted(s.glob("trial_*.csv")):
        assert f.read_bytes() == (p / f.name).read_bytes(), f.name
    capsys.readouterr()


def test_analyze_limit_plot_pipeline(tmp_path, small_config, capsys):
    sweep = tmp_path / "sweep"
    out = tmp_path / "analysis"
    assert cli.main(["sweep", "--config", small_config,
                     "--out", str(sweep)]) == 0
    assert cli.main(["analyze", "--in", str(sweep), "--out", str(out)]) == 0
    for name in ("curve_c1.csv", "curve_c2.csv", "fmax_c1.svg",
                 "fmax_c2.svg", "curve.svg"):
        assert (out / name).exists(), name
    assert len(list(out.glob("fmax_trial_*.csv"))) == 6
    # one polyline per temperature in the per-profile figure
    svg = (out / "fmax_c1.svg").read_text()
    assert svg.count("<polyline") == 3
    assert "</svg>" in svg

    assert cli.main(["limit", "--curves", str(out)]) == 0
    t_limit = float((out / "limit.txt").read_text().strip())
    assert t_limit in (130.0, 140.0, 150.0)
    printed = capsys.readouterr().out.strip().splitlines()[-1]
    assert float(printed) == t_limit

    figs = tmp_path / "figs"
    assert cli.main(["plot", "--in", str(out), "--out", str(figs)]) == 0
    assert (figs / "curve.svg").exists() and (figs / "fmax.svg").exists()


def test_analyze_empty_dir_fails(tmp_path, capsys):
    rc = cli.main(["analyze", "--in", str(tmp_path), "--out",
                   str(tmp_path / "out")])
    assert rc == 1
    assert "input-error" in capsys.readouterr().err


def test_limit_needs_both_profiles(tmp_path, small_config, capsys):
    sweep = tmp_path / "sweep"
    out = tmp_path / "analysis"
    assert cli.main(["sweep", "--config", small_config,
                     "--out", str(sweep)]) == 0
    assert cli.main(["analyze", "--in", str(sweep), "--out", str(out)]) == 0
    (out / "curve_c2.csv").unlink()
    rc = cli.main(["limit", "--curves", str(out)])
    assert rc == 1
    assert "both profiles" in capsys.readouterr().err


def test_validate_reports_ratio(small_config, capsys):
    rc = cli.main(["validate", "--config", small_config, "--t-low", "140",
                   "--t-high", "230", "--cycles", "20"])
    assert rc == 0
    out = capsys.readouterr().out
    ratio = float(out.strip().splitlines()[-1].split("=")[1])
    assert 0.0 < ratio <= 1.0
    # conditioning at the same temperature is a null experiment
    cli.main(["validate", "--config", small_config, "--t-low", "140",
              "--t-high", "140", "--cycles", "10"])
    out = capsys.readouterr().out
    assert float(out.strip().splitlines()[-1].split("=")[1]) == \
        pytest.approx(1.0, abs=1e-12)


def test_bad_config_file(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("this is { not toml")
    rc = cli.main(["simulate", "--config", str(bad),
                   "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "config-error" in capsys.readouterr().err
    rc = cli.main(["simulate", "--config", str(tmp_path / "absent.toml"),
                   "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "config-error" in capsys.readouterr().err


def test_config_overrides_merge_deeply(small_config):
    from smaforce.config import load_config, load_defaults
    cfg = load_config(small_config)
    base = load_defaults()
    assert cfg["trial"]["v_max"] == 4
    assert cfg["noise"]["sigma_t"] == 0.1
    # untouched subkeys survive the merge
    assert cfg["noise"]["seed"] == base["noise"]["seed"]
    assert cfg["thermal"] == base["thermal"]


def test_svg_plot_structure(tmp_path):
    path = tmp_path / "p.svg"
    line_plot(
        [("a", [0, 1, 2], [0.0, 1.0, 0.5]), ("b", [0, 1, 2], [1.0, 0.2, 0.9])],
        str(path), title="t", xlabel="x", ylabel="y",
    )
    svg = path.read_text()
    assert svg.startswith("<svg ") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 2
    assert ">a</text>" in svg and ">b</text>" in svg
    # deterministic output
    path2 = tmp_path / "q.svg"
    line_plot(
        [("a", [0, 1, 2], [0.0, 1.0, 0.5]), ("b", [0, 1, 2], [1.0, 0.2, 0.9])],
        str(path2),  title="t", xlabel="x", ylabel="y",
    )
    assert path.read_bytes() == path2.read_bytes()
    with pytest.raises(ValueError):
        line_plot([("a", [], [])], str(tmp_path / "r.svg"))
