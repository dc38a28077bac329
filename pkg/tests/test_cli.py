import csv
import json

import pytest

from srs.cli import build_parser, main, parse_config
from srs.experiment import ConfigError, build_config, derive_seed, read_config_file, run_experiment
from srs.metrics import records_from_csv, success_rate

SMALL = ["--width", "30", "--height", "30", "--t-max", "15"]


def cfg_from(argv):
    return parse_config(build_parser().parse_args(argv))


def test_flag_sets_value():
    cfg = cfg_from(["run", "--preset", "ackley-speed", "--v", "2", "--seed", "7"])
    assert (cfg.v, cfg.seed, cfg.t_max) == (2.0, 7, 100)


def test_preset_overrides():
    cfg = cfg_from(["run", "--preset", "control"])
    assert (cfg.delta_e, cfg.t_max, cfg.s, cfg.uf) == (0.01, 400, 0.1, 50)
    assert cfg_from(["run", "--preset", "schaffer-frequency"]).s == 1.0


def test_flag_beats_file_beats_preset(tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text("# sweep setup\npreset = schaffer-frequency\nuf = 25\ns = 0.5  # trailing comment\n")
    cfg = cfg_from(["run", "--config", str(f), "--uf", "10"])
    assert (cfg.preset, cfg.uf, cfg.s) == ("schaffer-frequency", 10, 0.5)


def test_config_file_errors(tmp_path):
    f = tmp_path / "bad.cfg"
    f.write_text("bogus = 1\n")
    with pytest.raises(ConfigError) as exc:
        read_config_file(f)
    assert exc.value.key == "bogus"
    f.write_text("uf = 5\nuf = 6\n")
    with pytest.raises(ConfigError):
        read_config_file(f)
    f.write_text("uf 5\n")
    with pytest.raises(ConfigError):
        read_config_file(f)


@pytest.mark.parametrize(
    "overrides, key",
    [
        ({"delta_e": "-0.1"}, "delta_e"),
        ({"t_max": "0"}, "t_max"),
        ({"k": "1.5"}, "k"),
        ({"uf": "2.5"}, "uf"),
        ({"dynamics": "severity_drift"}, "dynamics"),
        ({"survival_mode": "maybe"}, "survival_mode"),
    ],
)
def test_range_checks_name_the_key(overrides, key):
    with pytest.raises(ConfigError) as exc:
        build_config("ackley-speed", {}, overrides)
    assert exc.value.key == key


def test_conflicting_presets():
    with pytest.raises(ConfigError):
        build_config("ackley-speed", {"preset": "control"})
    with pytest.raises(ConfigError):
        build_config("no-such-preset")


def test_exit_codes(tmp_path, capsys):
    assert main(["run", "--preset", "ackley-speed", "--delta-e", "-0.1", "--out", str(tmp_path)]) == 2
    assert "delta_e" in capsys.readouterr().err
    assert main(["run", "--out", str(tmp_path)]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["run", "--preset", "ackley-speed", "--no-such-flag", "1"])
    assert exc.value.code == 2
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["run", "--preset", "ackley-speed", *SMALL, "--out", str(blocker / "sub"), "-q"]) == 2
    assert main(["sweep", "--preset", "ackley-speed", "--param", "width", "--values", "1", "--out", str(tmp_path)]) == 2


def test_runtime_failure_exit_code(tmp_path, monkeypatch):
    import srs.cli

    def boom(*args, **kwargs):
        raise RuntimeError("simulated failure")

    monkeypatch.setattr(srs.cli, "run_experiment", boom)
    assert main(["run", "--preset", "ackley-speed", "--out", str(tmp_path)]) == 1


def test_sweep_outputs_and_summary_recomputation(tmp_path):
    out = tmp_path / "out"
    argv = ["sweep", "--preset", "ackley-speed", *SMALL, "--param", "v", "--values", "0,1.5",
            "--repeats", "2", "--seed", "3", "--out", str(out), "-q"]  # fmt: skip
    assert main(argv) == 0
    runs = sorted(p.name for p in (out / "runs").iterdir())
    assert runs == [f"ackley-speed_v={v}_r0{r}.csv" for v in ("0", "1.5") for r in (0, 1)]
    with open(out / "summary.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["param"] for r in rows] == ["0", "0", "1.5", "1.5"]
    for row in rows:
        records = records_from_csv((out / "runs" / f"{row['run_id']}.csv").read_text())
        assert len(records) == 15
        assert float(row["success_rate"]) == pytest.approx(success_rate(records), abs=1e-9)
        assert int(row["final_population"]) == records[-1].population
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["sweep"] == {"param": "v", "values": [0.0, 1.5]}
    assert manifest["seeds"]["ackley-speed_v=0_r01"] == derive_seed(3, 1)
    assert manifest["config"]["seed"] == 3


def test_identical_invocations_are_byte_identical(tmp_path):
    def run(dest):
        assert main(["run", "--preset", "ackley-jump", *SMALL, "--seed", "11", "--out", str(dest), "-q"]) == 0
        return {p.name: p.read_bytes() for p in (dest / "runs").iterdir()} | {"summary": (dest / "summary.csv").read_bytes()}

    assert run(tmp_path / "a") == run(tmp_path / "b")


def test_parallel_matches_serial(tmp_path):
    base = build_config("schaffer-frequency", {}, {"width": 20, "height": 20, "t_max": 12, "uf": 4, "repeats": 2})
    serial = run_experiment(base, "s", [0.5, 1.0], write=False)
    base.jobs = 2
    parallel = run_experiment(base, "s", [0.5, 1.0], write=False)
    assert [r.csv_text for r in serial] == [r.csv_text for r in parallel]
    assert [r.run_id for r in serial] == [r.run_id for r in parallel]


def test_snapshots_written(tmp_path):
    assert main(["run", "--preset", "schaffer-severity", *SMALL, "--snapshots", "5", "--out", str(tmp_path), "-q"]) == 0
    snaps = sorted(p.name for p in (tmp_path / "snapshots").rglob("*.pgm"))
    assert snaps == ["pheromone_t0.pgm", "pheromone_t10.pgm", "pheromone_t5.pgm"]


def test_derive_seed_distinct():
    seeds = {derive_seed(0, r) for r in range(100)} | {derive_seed(1, r) for r in range(100)}
    assert len(seeds) == 200
    assert derive_seed(5, 2) == derive_seed(5, 2)
