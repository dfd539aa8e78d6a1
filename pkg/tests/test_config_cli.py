"""Config parsing, presets, and the command-line interface.

Verifies:
  - serialize/parse round trips reproduce the config exactly
  - the validator reports every problem at once with exit code 2
  - built-in presets load, list, and run end to end
  - CLI outputs: CSV columns, manifest fields, and rerun byte-identity
  - exit codes 2 (bad input) and 3 (domain violation)
"""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from lcse import ConfigError, InvalidInputError
from lcse.config import config_to_dict, parse_config, serialize_config
from lcse.presets import load_preset, preset_description, preset_names, preset_text

PRESET_NAMES = ["fig2-collision", "fig2-frozen", "fig2-reversed",
                "fig3-portraits", "fig4-cpt", "fig4-ensemble"]


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "lcse.cli", *args],
                          capture_output=True, text=True, cwd=cwd)


def test_preset_registry():
    assert preset_names() == PRESET_NAMES
    for name in PRESET_NAMES:
        assert preset_description(name)
    with pytest.raises(InvalidInputError):
        load_preset("fig9-unknown")


def test_load_preset_fields():
    cfg = load_preset("fig2-collision")
    assert cfg.mode == "effective"
    assert cfg.params["q"] == pytest.approx(0.01)
    assert cfg.params["omega_p"] == 0.0
    assert cfg.initial["n_zero"] == pytest.approx(0.9)
    assert cfg.integration["tau_end"] == 50.0


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_round_trip_presets(name):
    cfg = load_preset(name)
    again = parse_config(serialize_config(cfg))
    assert again == cfg
    # and the dict view is JSON-serializable
    json.dumps(config_to_dict(cfg))


def test_round_trip_is_stable_text():
    for name in PRESET_NAMES:
        text = serialize_config(load_preset(name))
        assert serialize_config(parse_config(text)) == text


def test_parse_rejects_empty():
    with pytest.raises(ConfigError, match="mode"):
        parse_config("")


def test_parse_reports_all_problems_at_once():
    text = preset_text("fig2-collision")
    broken = text.replace("q = 0.01", "q = hello\nmystery = 3")
    broken += "\n[unknown-section]\nx = 1\n"
    with pytest.raises(ConfigError) as err:
        parse_config(broken)
    msg = str(err.value)
    assert "q" in msg
    assert "mystery" in msg
    assert "unknown-section" in msg


def test_parse_rejects_irrelevant_section():
    text = preset_text("fig2-collision") + "\n[pulse]\nomega_p = 1\n"
    with pytest.raises(ConfigError, match="pulse"):
        parse_config(text)


def test_parse_rejects_unnormalized_initial():
    text = preset_text("fig2-collision").replace("n_zero = 0.9",
                                                 "n_zero = 1.5")
    with pytest.raises(ConfigError, match="sum to"):
        parse_config(text)


def test_parse_rejects_bad_time_window():
    text = preset_text("fig2-collision").replace("tau_end = 50",
                                                 "tau_end = 0")
    with pytest.raises(ConfigError, match="tau"):
        parse_config(text)


def test_parse_rejects_too_few_samples():
    text = preset_text("fig2-collision").replace("samples = 1001",
                                                 "samples = 1")
    with pytest.raises(ConfigError, match="samples"):
        parse_config(text)


def test_parse_rejects_fixed_lock_without_value():
    text = preset_text("fig4-cpt").replace(
        "omega_p = 1", "omega_p = 1\ntheta_variant = fixed")
    with pytest.raises(ConfigError, match="theta_fixed"):
        parse_config(text)


def test_parse_rejects_bad_enum():
    text = preset_text("fig4-cpt").replace(
        "omega_p = 1", "omega_p = 1\ntheta_variant = resonant")
    with pytest.raises(ConfigError, match="theta_variant"):
        parse_config(text)


def test_parse_rejects_non_numeric():
    text = preset_text("fig2-collision").replace("q = 0.01", "q = fast")
    with pytest.raises(ConfigError, match="q"):
        parse_config(text)


def test_cli_presets_listing():
    proc = run_cli("presets")
    assert proc.returncode == 0
    for name in PRESET_NAMES:
        assert name in proc.stdout


def test_cli_validate_ok(tmp_path):
    path = tmp_path / "scenario.ini"
    path.write_text(preset_text("fig2-frozen"))
    proc = run_cli("validate", "--config", str(path))
    assert proc.returncode == 0
    assert "OK" in proc.stdout


def test_cli_validate_bad_config_exits_2(tmp_path):
    path = tmp_path / "broken.ini"
    path.write_text(preset_text("fig2-frozen").replace("n_zero = 0.9",
                                                       "n_zero = oops"))
    proc = run_cli("validate", "--config", str(path))
    assert proc.returncode == 2
    assert "n_zero" in proc.stderr


def test_cli_run_frozen_preset(tmp_path):
    out = tmp_path / "frozen"
    proc = run_cli("run", "--preset", "fig2-frozen", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    data = np.genfromtxt(out / "trajectory.csv", delimiter=",", names=True,
                         skip_header=2)
    assert abs(data["n_zero"] - 0.9).max() < 1e-6
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["mode"] == "effective"
    assert "library_version" in manifest
    assert "wall_clock_seconds" in manifest
    assert "trajectory.csv" in manifest["outputs"]
    assert manifest["conservation"]["max_total_n_drift"] < 1e-8


def test_cli_run_domain_violation_exits_3(tmp_path):
    text = preset_text("fig3-portraits")
    cfg = parse_config(text)
    # rebuild a single-coupling pendulum run that starts on the boundary
    pend = """
[scenario]
mode = pendulum

[params]
q = 0.01
omega_p = 0
omega_d = 0
big_delta_prime = 1

[initial]
theta = 0
n_zero = 1.0

[integration]
tau_start = 0
tau_end = 10
samples = 101
"""
    path = tmp_path / "boundary.ini"
    path.write_text(pend)
    proc = run_cli("run", "--config", str(path), "--out",
                   str(tmp_path / "o"))
    assert proc.returncode == 3
    assert cfg.mode == "landscape"


def test_cli_seed_flag_restricted(tmp_path):
    proc = run_cli("run", "--preset", "fig2-frozen", "--seed", "5",
                   "--out", str(tmp_path / "x"))
    assert proc.returncode == 2
    assert "seed" in proc.stderr.lower()


def test_cli_variant_flag_restricted(tmp_path):
    proc = run_cli("run", "--preset", "fig2-frozen", "--variant", "literal",
                   "--out", str(tmp_path / "x"))
    assert proc.returncode == 2


def test_cli_rerun_byte_identical(tmp_path):
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        proc = run_cli("run", "--preset", "fig2-collision", "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        outs.append(out)
    csv_a = (outs[0] / "trajectory.csv").read_bytes()
    csv_b = (outs[1] / "trajectory.csv").read_bytes()
    assert csv_a == csv_b
    ma = json.loads((outs[0] / "manifest.json").read_text())
    mb = json.loads((outs[1] / "manifest.json").read_text())
    ma.pop("wall_clock_seconds"), mb.pop("wall_clock_seconds")
    assert ma == mb
