import json
from pathlib import Path

import pytest

from nonautodyn import cli
from nonautodyn.config import ExperimentConfig
from nonautodyn.corpus import corpus_ids
from nonautodyn.errors import ConfigError, MissingSeries

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
SHIPPED = sorted(CONFIGS.glob("*.json"))


def _config(entry, detectors, output, seed=0):
    return ExperimentConfig.from_dict(
        {"version": 1, "system": {"entry": entry}, "seed": seed, "output": str(output), "detectors": detectors}
    )


@pytest.mark.parametrize("path", SHIPPED, ids=[p.stem for p in SHIPPED])
def test_shipped_configs_round_trip(path):
    cfg = ExperimentConfig.load(str(path))
    again = ExperimentConfig.loads(cfg.dumps())
    assert again == cfg
    assert again.dumps() == cfg.dumps()


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.update(colour="red"), "config.colour"),
        (lambda d: d["system"].update(flavour=1), "config.system.flavour"),
        (lambda d: d["detectors"][0]["params"].update(bogus=1), "config.detectors[0].params.bogus"),
        (lambda d: d["detectors"][0]["args"].update(extra=1), "config.detectors[0].args.extra"),
        (lambda d: d["detectors"][0].update(detector="nope"), "config.detectors[0].detector"),
        (lambda d: d["detectors"][0]["params"].update(horizon=0), "config.detectors[0].params"),
        (lambda d: d.update(version=7), "config.version"),
    ],
)
def test_invalid_configs_name_the_field(mutate, path):
    d = json.loads((CONFIGS / "e1_visit_times.json").read_text())
    mutate(d)
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_dict(d)
    assert err.value.path == path


def test_corpus_list(capsys):
    assert cli.main(["corpus", "list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert [ln.split(":")[0] for ln in lines] == corpus_ids()
    assert "[" in lines[0]  # anchors are shown


def test_empty_detector_list(tmp_path):
    cfg = ExperimentConfig.load(str(CONFIGS / "empty.json"))
    rep = cli.run_experiment(cfg, write=False)
    assert rep["rows"] == [] and rep["consistency"] == []
    assert rep["config"] == cfg.to_dict()


def test_e1_visit_times_report(tmp_path):
    det = [{"detector": "visit_times", "which": ["f", "g"],
            "args": {"point": "iso:(3,0)", "targets": [{"center": "iso:(2,0)", "radius": 0.5}]},
            "params": {"horizon": 5000}}]
    rep = cli.run_experiment(_config("E1", det, tmp_path), write=True)
    by_id = {r["id"]: r for r in rep["rows"]}
    assert by_id["0:f"]["result"]["first_hits"] == [1]
    assert by_id["0:g"]["result"]["first_hits"] == ["inf"]
    assert (tmp_path / "report.json").exists()
    assert cli.emit_plot_data(rep, "first-hit", "0:g") == "target,first_hit\n0,inf\n"


def test_plot_series(tmp_path):
    det = [{"detector": "separation_hitting_set",
            "args": {"center": "sym:1011010110110101@sturmian(rho=q(-1,5,2),gamma=r(0/1),k=1)", "radius": 0.03125},
            "params": {"horizon": 300}}]
    rep = cli.run_experiment(_config("sturmian-shift", det, tmp_path))
    assert cli.emit_plot_data(rep, "gaps").startswith("gap,count\n")
    assert cli.emit_plot_data(rep, "runs").startswith("run,count\n")
    sep = cli.emit_plot_data(rep, "separation").splitlines()
    assert sep[0] == "n,distance" and len(sep) == 302
    with pytest.raises(MissingSeries):
        cli.emit_plot_data(rep, "first-hit")
    with pytest.raises(ValueError):
        cli.emit_plot_data(rep, "pie")
    files = sorted(p.name for p in tmp_path.iterdir())
    assert "row0_f_members.csv" in files and "row0_f_separation.csv" in files


def test_minimality_first_hit_table(tmp_path):
    det = [{"detector": "minimality", "params": {"horizon": 5000, "starts": 2, "target_eps": 0.5}}]
    rep = cli.run_experiment(_config("E2", det, tmp_path), write=False)
    lines = cli.emit_plot_data(rep, "first-hit").splitlines()
    assert lines[0] == "target,first_hit"
    assert all(ln.split(",")[1] != "inf" for ln in lines[1:])


def test_detector_errors_stay_in_their_row(tmp_path):
    det = [{"detector": "visit_times", "args": {"point": "not a point", "targets": []}},
           {"detector": "visit_times", "args": {"point": "iso:(3,0)", "targets": []}}]
    rep = cli.run_experiment(_config("E1", det, tmp_path), write=False)
    assert [r["status"] for r in rep["rows"]] == ["error", "ok"]


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 1, "system": {"entry": "E1"}, "surprise": 1}')
    assert cli.main(["run", str(bad)]) == 2
    assert "config.surprise" in capsys.readouterr().err
    assert cli.main(["run", str(tmp_path / "missing.json")]) == 2
    assert cli.main(["run", str(CONFIGS / "empty.json"), "--output", str(tmp_path / "o")]) == 0
    report = tmp_path / "o" / "report.json"
    assert cli.main(["plot", str(report), "--kind", "gaps"]) == 2
    assert cli.exit_status({"consistency": [{"flag": "INFO"}, {"flag": "VIOLATION"}]}) == 1
    assert cli.exit_status({"consistency": [{"flag": "CONSISTENT"}, {"flag": "INCONCLUSIVE"}]}) == 0


def test_plot_subcommand_writes_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"version": 1, "system": {"entry": "E1"}, "output": str(tmp_path / "o"), "detectors": [
        {"detector": "visit_times", "args": {"point": "iso:(3,0)", "targets": [{"center": "iso:(2,0)", "radius": 0.5}]},
         "params": {"horizon": 10}}]}))
    assert cli.main(["run", str(cfg)]) == 0
    out = tmp_path / "hits.csv"
    assert cli.main(["plot", str(tmp_path / "o" / "report.json"), "--kind", "first-hit", "--out", str(out)]) == 0
    assert out.read_text() == "target,first_hit\n0,1\n"


def test_seeds_change_witnesses_not_flags(tmp_path):
    det = [{"detector": "dichotomy_report",
            "args": {"rows": ["sensitive-or-equicontinuous"]},
            "params": {"horizon": 500, "net_eps": 0.2, "separation_eps": 0.1, "stability_eps": 0.1,
                       "target_eps": 0.2, "basis_depth": 4, "starts": 3}}]
    reps = [cli.run_experiment(_config("E2", det, tmp_path, seed=s), write=False) for s in (0, 1)]
    flags = [[(c["row"], c["flag"]) for c in r["consistency"]] for r in reps]
    assert flags[0] == flags[1]
    assert reps[0]["rows"][0]["result"]["params"]["seed"] == 0
    assert reps[1]["rows"][0]["result"]["params"]["seed"] == 1
