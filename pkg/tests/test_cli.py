import json
import os

import pytest

from aqt.cli import builtin_scenario_names, builtin_scenario_path, main
from aqt.pipelines import Scenario
from aqt.errors import SpecError


def scenario_dict(**over):
    d = {"family": {"kind": "landau_zener", "name": "lz"},
         "pipeline": "audit", "T_grid": [8, 16, 32, 64]}
    d.update(over)
    return d


def test_scenario_validation_errors():
    for bad in (
        scenario_dict(pipeline="nope"),
        scenario_dict(T_grid=[]),
        scenario_dict(T_grid=[8, 4]),
        scenario_dict(N=10),
        scenario_dict(levels=[-1]),
        scenario_dict(expect={"k": 3}),
        scenario_dict(typo_field=1),
        {"pipeline": "audit"},
    ):
        with pytest.raises(SpecError):
            Scenario.from_dict(bad)


def test_scenario_defaults():
    scn = Scenario.from_dict(scenario_dict())
    assert scn.levels == (0,)
    assert scn.N is None and scn.seed == 0 and not scn.emit_plots
    assert scn.T_grid == (8.0, 16.0, 32.0, 64.0)


def test_version_and_families(capsys):
    assert main(["version"]) == 0
    assert main(["families"]) == 0
    out = capsys.readouterr().out
    assert "landau_zener" in out
    assert "rotating_cone" in out
    assert "dual_of" in out


def test_builtin_scenarios_present():
    names = builtin_scenario_names()
    assert "lz_audit" in names and "ms_counterexample" in names
    assert os.path.exists(builtin_scenario_path("lz_audit"))


def test_run_audit_exit_zero(tmp_path):
    out = tmp_path / "out"
    code = main(["run", builtin_scenario_path("lz_audit"),
                 "--jobs", "2", "--output", str(out)])
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["verdicts"]["condition_d"] == "vanishes"
    assert (out / "condition_d.csv").read_text().startswith("T,value,slope_running")
    assert (out / "run_meta.json").exists()


def test_run_expect_mismatch_exit_one(tmp_path):
    d = scenario_dict(expect={"condition_d": "persists"}, T_grid=[8, 16, 32])
    p = tmp_path / "scn.json"
    p.write_text(json.dumps(d))
    assert main(["run", str(p), "--output", str(tmp_path / "o")]) == 1


def test_run_malformed_kind_exit_two(tmp_path, capsys):
    d = scenario_dict(family={"kind": "nonsense"})
    p = tmp_path / "scn.json"
    p.write_text(json.dumps(d))
    out = tmp_path / "o"
    assert main(["run", str(p), "--output", str(out)]) == 2
    assert not out.exists()  # no outputs on config errors
    assert "configuration error" in capsys.readouterr().err


def test_run_missing_file_exit_two(tmp_path):
    assert main(["run", str(tmp_path / "absent.json")]) == 2


def test_run_numerical_failure_exit_three(tmp_path, capsys):
    # level crossing without coupling: degenerate spectrum mid-sweep
    d = {"family": {"kind": "custom_matrix_polynomial", "name": "crossing",
                    "basis": [[[1.0, 0.0], [0.0, -1.0]]],
                    "coefficients": [[{"c": -1.0}, {"c": 2.0, "s_pow": 1}]]},
         "pipeline": "audit", "T_grid": [8, 16]}
    p = tmp_path / "scn.json"
    p.write_text(json.dumps(d))
    assert main(["run", str(p), "--output", str(tmp_path / "o")]) == 3
    assert "s=" in capsys.readouterr().err


def test_env_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("AQT_OUTPUT_DIR", str(tmp_path))
    code = main(["run", builtin_scenario_path("lz_evolve")])
    assert code == 0
    assert (tmp_path / "lz_evolve" / "report.json").exists()


def test_emit_plots_writes_svg(tmp_path):
    d = scenario_dict(emit_plots=True, T_grid=[8, 16, 32])
    p = tmp_path / "scn.json"
    p.write_text(json.dumps(d))
    out = tmp_path / "o"
    assert main(["run", str(p), "--output", str(out)]) == 0
    assert (out / "condition_d.svg").read_text().startswith("<svg")
