"""End-to-end tests for the command-line front end."""

import os

import pytest

from ristrace import cli
from ristrace.cli import ConfigParseError, config_to_text, parse_scenario_text
from ristrace.designs import DesignKind
from ristrace.experiments import preset_by_name


TINY = """
# comment line
name = smoke
n_tx = 3
n_rx = 3
n_ris = 4
n_paths_h = 3
n_paths_g = 3
los = false
n_realizations = 2
base_seed = 5
snr_grid_db = -10, 0, 10
designs = RAND, OPT-DIAG, GH
"""


# ---------------------------------------------------------------------------
# scenario file parsing
# ---------------------------------------------------------------------------


def test_parse_minimal_preset_reference():
    cfg = parse_scenario_text("preset = nlos_sparse\n")
    assert cfg == preset_by_name("nlos_sparse")


def test_parse_preset_with_override():
    cfg = parse_scenario_text("preset = los_sparse\nn_ris = 43\n")
    base = preset_by_name("los_sparse")
    assert cfg.channel.n_ris == 43
    assert cfg.channel.n_paths_h == base.channel.n_paths_h
    assert cfg.name == "los_sparse"
    assert cfg.designs == base.designs


def test_parse_full_file():
    cfg = parse_scenario_text(TINY)
    assert cfg.name == "smoke"
    assert cfg.channel.n_ris == 4
    assert cfg.n_realizations == 2
    assert cfg.snr_grid_db == (-10.0, 0.0, 10.0)
    assert cfg.designs == (DesignKind.RAND, DesignKind.OPT_DIAG,
                           DesignKind.IDENTITY)
    assert cfg.base_seed == 5
    assert cfg.channel.seed == 5


def test_parse_unknown_key_has_line_number():
    with pytest.raises(ConfigParseError, match="line 2: unknown key 'n_elves'"):
        parse_scenario_text("preset = nlos_sparse\nn_elves = 3\n")


def test_parse_duplicate_key():
    with pytest.raises(ConfigParseError, match="duplicate key"):
        parse_scenario_text("preset = nlos_sparse\npreset = nlos_rich\n")


def test_parse_bad_value_reports_line():
    with pytest.raises(ConfigParseError, match="line 2: bad value for n_ris"):
        parse_scenario_text("preset = nlos_sparse\nn_ris = many\n")


def test_parse_zero_realizations_rejected():
    with pytest.raises(ConfigParseError, match="n_realizations"):
        parse_scenario_text("preset = nlos_sparse\nn_realizations = 0\n")


def test_parse_unknown_preset():
    with pytest.raises(ConfigParseError, match="unknown preset"):
        parse_scenario_text("preset = nonexistent\n")


def test_parse_unknown_design_label():
    with pytest.raises(ConfigParseError, match="bad value for designs"):
        parse_scenario_text("preset = nlos_sparse\ndesigns = RAND, WAT\n")


def test_parse_needs_channel_keys_without_preset():
    with pytest.raises(ConfigParseError, match="channel keys missing"):
        parse_scenario_text("name = x\nn_tx = 2\n")


def test_parse_missing_equals():
    with pytest.raises(ConfigParseError, match="line 1"):
        parse_scenario_text("just words\n")


def test_config_echo_roundtrip():
    cfg = parse_scenario_text(TINY)
    assert parse_scenario_text(config_to_text(cfg)) == cfg
    full = preset_by_name("los_ris43_rich")
    assert parse_scenario_text(config_to_text(full)) == full


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def write_tiny(tmp_path):
    path = tmp_path / "smoke.cfg"
    path.write_text(TINY)
    return str(path)


def test_run_writes_outputs(tmp_path, capsys):
    cfg_path = write_tiny(tmp_path)
    out = tmp_path / "results"
    code = cli.main(["run", "--scenario", cfg_path, "--out", str(out)])
    assert code == 0
    target = out / "smoke"
    for name in ("power.csv", "capacity.csv", "eigs.csv", "summary.csv",
                 "manifest.txt"):
        assert (target / name).is_file()
    # the manifest parses back to the executed config
    manifest_cfg = cli.parse_scenario_file(str(target / "manifest.txt"))
    assert manifest_cfg == parse_scenario_text(TINY)
    assert "smoke" in capsys.readouterr().out


def test_run_refuses_non_empty_target(tmp_path, capsys):
    cfg_path = write_tiny(tmp_path)
    out = tmp_path / "results"
    assert cli.main(["run", "--scenario", cfg_path, "--out", str(out)]) == 0
    sentinel = out / "smoke" / "keep.txt"
    sentinel.write_text("do not clobber")
    code = cli.main(["run", "--scenario", cfg_path, "--out", str(out)])
    assert code != 0
    assert sentinel.read_text() == "do not clobber"
    assert "--force" in capsys.readouterr().err


def test_run_force_replaces(tmp_path):
    cfg_path = write_tiny(tmp_path)
    out = tmp_path / "results"
    assert cli.main(["run", "--scenario", cfg_path, "--out", str(out)]) == 0
    (out / "smoke" / "stale.txt").write_text("old")
    code = cli.main(["run", "--scenario", cfg_path, "--out", str(out), "--force"])
    assert code == 0
    assert not (out / "smoke" / "stale.txt").exists()
    assert (out / "smoke" / "power.csv").is_file()


def test_run_seed_and_realization_overrides(tmp_path):
    cfg_path = write_tiny(tmp_path)
    out = tmp_path / "results"
    code = cli.main(["run", "--scenario", cfg_path, "--out", str(out),
                     "--seed", "99", "--realizations", "3"])
    assert code == 0
    cfg = cli.parse_scenario_file(str(out / "smoke" / "manifest.txt"))
    assert cfg.base_seed == 99
    assert cfg.channel.seed == 99
    assert cfg.n_realizations == 3


def test_run_deterministic_bytes(tmp_path):
    cfg_path = write_tiny(tmp_path)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert cli.main(["run", "--scenario", cfg_path, "--out", str(out_a)]) == 0
    assert cli.main(["run", "--scenario", cfg_path, "--out", str(out_b),
                     "--threads", "2"]) == 0
    for name in ("power.csv", "capacity.csv", "eigs.csv", "summary.csv"):
        a = (out_a / "smoke" / name).read_bytes()
        b = (out_b / "smoke" / name).read_bytes()
        assert a == b


def test_run_unknown_scenario(tmp_path, capsys):
    code = cli.main(["run", "--scenario", "no_such_thing",
                     "--out", str(tmp_path)])
    assert code == 2
    err = capsys.readouterr().err
    assert err.count("\n") == 1  # one-line diagnostic
    assert "preset" in err


def test_run_preset_by_name(tmp_path):
    # cut the preset down so the smoke run stays fast
    code = cli.main(["run", "--scenario", "nlos_sparse", "--out", str(tmp_path),
                     "--realizations", "1"])
    assert code == 0
    assert (tmp_path / "nlos_sparse" / "summary.csv").is_file()


def test_list_presets(capsys):
    assert cli.main(["list-presets"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 6
    assert out[0].startswith("nlos_sparse")
    assert any("n_ris=43" in line for line in out)


def test_verify_passes(capsys):
    assert cli.main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.count("PASS") >= 8
