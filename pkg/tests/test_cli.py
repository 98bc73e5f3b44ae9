import json
import subprocess
import sys
import textwrap
from pathlib import Path

import pytest

from agelab import __version__
from agelab.cli import (
    Check,
    RunSummary,
    emit_report,
    load_config,
    main,
    parse_profile,
    parse_schedule,
    run,
)
from agelab.errors import ConfigError

GRID = """
n_nu = {n_nu}
nu_max = 16
sigma_min = 8
sigma_max = 8
n_sigma = 1
n_omega = 1024
omega_max = 24
channels = 1
profiles =
    weight=1 channel=0 gaussian(omega0=8, width=0.70710678118654752)
"""


def write_config(tmp_path, body, name="run.ini"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(body))
    return path


def theorem_config(tmp_path, n_nu=4096, extra=""):
    return write_config(
        tmp_path,
        "[theorem]\n" + GRID.format(n_nu=n_nu) + "t_schedule = 0:10:1\noracle = erfc\n" + extra,
    )


# -- configuration ------------------------------------------------------------


def test_non_power_of_two_grid_names_the_field(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(theorem_config(tmp_path, n_nu=1000), "theorem")
    assert info.value.field == "theorem.n_nu"


def test_grid_sizes_have_no_defaults(tmp_path):
    path = write_config(tmp_path, "[packets-evolve]\nnu_max = 16\nt_schedule = 0:1:1\n")
    with pytest.raises(ConfigError) as info:
        load_config(path, "packets-evolve")
    assert info.value.field.startswith("packets-evolve.")


def test_unknown_key_and_bad_values(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_config(theorem_config(tmp_path, extra="bogus = 1\n"), "theorem")
    assert info.value.field == "theorem.bogus"
    with pytest.raises(ConfigError) as info:
        load_config(theorem_config(tmp_path, extra="certification_threshold = -1\n"), "theorem")
    assert info.value.field == "theorem.certification_threshold"


def test_missing_section(tmp_path):
    with pytest.raises(ConfigError):
        load_config(theorem_config(tmp_path), "packets-evolve")


def test_schedule_parsing():
    assert parse_schedule("0:2:0.5", "k") == (0.0, 0.5, 1.0, 1.5, 2.0)
    assert parse_schedule("1, 2,5", "k") == (1.0, 2.0, 5.0)
    with pytest.raises(ConfigError):
        parse_schedule("3,2", "k")
    with pytest.raises(ConfigError):
        parse_schedule("0:1:0", "k")


def test_profile_parsing():
    p = parse_profile("weight=0.25 channel=1 gaussian(omega0=5, width=1, power=2) + gaussian(omega0=6, width=0.5)", "k")
    assert p.weight == 0.25 and p.channel == 1 and len(p.monomials) == 2
    assert p.monomials[0].power == 2
    with pytest.raises(ConfigError):
        parse_profile("gaussian(omega0=5)", "k")
    with pytest.raises(ConfigError):
        parse_profile("weight=1", "k")


def test_overrides_win(tmp_path):
    cfg = load_config(theorem_config(tmp_path, extra="seed = 4\n"), "theorem", {"seed": 9})
    assert cfg.seed == 9


# -- experiments ----------------------------------------------------------------


def test_theorem_experiment_passes(tmp_path):
    out = tmp_path / "out"
    code = main(["theorem", "--config", str(theorem_config(tmp_path)), "--out", str(out), "--quiet"])
    assert code == 0
    summary = json.loads((out / "theorem_summary.json").read_text())
    assert summary["certified"] is True
    checks = {c["name"]: c for c in json.loads((out / "summary.json").read_text())["checks"]}
    assert checks["oracle_erfc"]["passed"] and checks["oracle_erfc"]["value"] < 1e-6


def test_outputs_are_byte_identical(tmp_path):
    cfg = theorem_config(tmp_path, extra="horizon = true\n")
    for sub in ("a", "b"):
        assert main(["theorem", "--config", str(cfg), "--out", str(tmp_path / sub), "--quiet"]) == 0
    for name in ("theorem.csv", "theorem_summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_failing_check_gives_nonzero_exit(tmp_path):
    cfg = theorem_config(tmp_path, extra="certification_threshold = 1e-300\n")
    assert main(["theorem", "--config", str(cfg), "--out", str(tmp_path / "o"), "--quiet"]) == 1


def test_module_error_is_reported_with_context(tmp_path):
    cfg = write_config(
        tmp_path,
        "[theorem]\n" + GRID.format(n_nu=256) + "t_schedule = 0, 1000\n",
    )
    summary = run(load_config(cfg, "theorem", {"out": tmp_path / "o"}))
    assert not summary.passed
    assert summary.error.startswith("theorem: WindowOverflow")


def test_config_error_exit_code(tmp_path):
    assert main(["theorem", "--config", str(theorem_config(tmp_path, n_nu=100)), "--quiet"]) == 2


def test_packets_evolve(tmp_path):
    cfg = write_config(tmp_path, "[packets-evolve]\n" + GRID.format(n_nu=1024) + "t_schedule = 0:5:0.5\n")
    out = tmp_path / "o"
    assert main(["packets", "evolve", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
    assert (out / "packets_evolve.csv").read_text().startswith("t,mass,mass_drift,two_route_error\n")


def test_baker_converge(tmp_path):
    cfg = write_config(
        tmp_path,
        """
        [baker-converge]
        n_max = 6
        expansion = F={-3,0} 1 0; F={-1} 1/2 -1/4
        """,
    )
    out = tmp_path / "o"
    assert main(["baker", "converge", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
    lines = (out / "baker_converge.csv").read_text().splitlines()
    assert lines[0] == "n,minus_norm,plus_norm"
    assert len(lines) == 8


def test_baker_converge_expansion_file(tmp_path):
    (tmp_path / "rho.txt").write_text("F={2} 1 0\n")
    cfg = write_config(tmp_path, "[baker-converge]\nexpansion_file = rho.txt\n")
    assert load_config(cfg, "baker-converge").expansion is not None


@pytest.mark.slow
def test_baker_verify_depth_12(tmp_path):
    out = tmp_path / "o"
    assert main(["baker", "verify", "--seed", "1", "--out", str(out), "--quiet"]) == 0
    checks = json.loads((out / "summary.json").read_text())["checks"]
    assert len(checks) == 8 and all(c["passed"] for c in checks)


# -- reports --------------------------------------------------------------------


def test_empty_report(tmp_path):
    doc = json.loads(emit_report([], tmp_path / "r.json").read_text())
    assert doc == {"count": 0, "experiments": [], "overall": "pass"}


def test_report_failure_and_duplicates(tmp_path):
    good = RunSummary("theorem", [Check("x", True, 0.0, 1.0)])
    bad = RunSummary("theorem", [Check("x", False, 2.0, 1.0)])
    other = RunSummary("baker-verify", [Check("y", True, 0, 0)])
    path = emit_report([good, other, bad], tmp_path / "r.json")
    doc = json.loads(path.read_text())
    assert doc["overall"] == "fail"
    assert [e["experiment"] for e in doc["experiments"]] == ["theorem#0", "baker-verify", "theorem#2"]
    again = emit_report([good, other, bad], tmp_path / "r2.json")
    assert path.read_bytes() == again.read_bytes()


def test_report_subcommand(tmp_path):
    s = tmp_path / "s.json"
    s.write_text(json.dumps(RunSummary("theorem", [Check("x", True, 0.0, 1.0)]).to_dict()))
    assert main(["report", str(s), "--out", str(tmp_path / "r.json"), "--quiet"]) == 0
    assert json.loads((tmp_path / "r.json").read_text())["count"] == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "agelab", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and __version__ in out.stdout
