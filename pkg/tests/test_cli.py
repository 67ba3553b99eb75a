import json
import logging
from pathlib import Path

import pytest
from click.testing import CliRunner

from src.config import load_config
from src.main import build_config, cli, main

DATA = Path(__file__).resolve().parent.parent / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"

CFG = {
    "LOG_LEVEL": "INFO",
    "VILENKIN_DEPTH": 24,
    "VILENKIN_REGION": 3,
    "VILENKIN_RESOLUTION": 4,
    "VILENKIN_FORMAT": "text",
    "VILENKIN_FLOAT_TOLERANCE": 1e-9,
    "VILENKIN_MAX_CELLS": 1 << 20,
}


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    for key in CFG:
        monkeypatch.delenv(key, raising=False)
    monkeypatch.delenv("VILENKIN_SETTINGS_PATH", raising=False)


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def sets(name):
    return str(DATA / "sets" / name)


def masks(name):
    return str(DATA / "masks" / name)


def invoke_json(runner, *argv):
    result = runner.invoke(cli, [*argv, "--format", "json"])
    return result.exit_code, json.loads(result.stdout) if result.stdout else None


class TestVerify:
    def test_shannon_wavelet_set(self, runner):
        code, doc = invoke_json(runner, "verify", "wavelet-set", "-i", sets("shannon_p2.set"))
        assert code == 0
        assert doc["verdict"] == "pass"
        assert doc["prime"] == 2
        assert set(doc) == {
            "command", "prime", "verdict", "name", "uncovered", "conditions",
            "witnesses", "measures", "depth", "decisions", "payload",
        }

    def test_multiwavelet_pair(self, runner):
        code, doc = invoke_json(
            runner, "verify", "multiwavelet-set", "-i", sets("shannon_p3_1.set"), "-i", sets("shannon_p3_2.set")
        )
        assert code == 0
        assert doc["prime"] == 3

    def test_multiwavelet_prime_mismatch(self, runner):
        result = runner.invoke(
            cli, ["verify", "multiwavelet-set", "-i", sets("shannon_p2.set"), "-i", sets("shannon_p3_1.set")]
        )
        assert result.exit_code == 3
        assert "different primes" in result.stderr

    def test_unit_subgroup_is_not_a_gss_for_p3(self, runner):
        code, doc = invoke_json(runner, "verify", "gss", "-i", sets("unit_p3.set"))
        assert code == 1
        assert doc["verdict"] == "fail"
        assert doc["witnesses"]

    def test_certified_scaling_stream(self, runner):
        code, doc = invoke_json(runner, "verify", "gss", "-i", sets("scaling_stream_p2.set"), "--depth", "24")
        assert code == 0
        assert doc["verdict"] == "pass-certified"
        assert doc["uncovered"] == "1/16777216"
        assert doc["depth"] == 24

    def test_invariance_command(self, runner):
        code, doc = invoke_json(runner, "verify", "invariance", "-i", sets("unit_p2.set"))
        assert code == 0
        assert doc["command"] == "verify invariance"

    def test_text_output(self, runner):
        result = runner.invoke(cli, ["verify", "wavelet-set", "-i", sets("shannon_p2.set"), "--format", "text"])
        assert result.exit_code == 0
        assert result.stdout.startswith("verify wavelet-set (p=2)\n✅ PASS")


class TestMask:
    def test_blocked_mask(self, runner):
        code, doc = invoke_json(runner, "mask", "blocked", "-i", masks("blocked.mask"))
        assert code == 0
        assert doc["payload"] == {"mra": "no", "blocked_set": ["0.1"]}

    def test_haar_phihat(self, runner):
        code, doc = invoke_json(runner, "mask", "phihat", "-i", masks("haar.mask"), "-R", "3")
        assert code == 0
        assert doc["payload"]["phi_hat"] == ["0/1\t1/1\t1", "1/1\t8/1\t0"]

    def test_blocked_phihat_is_undecided(self, runner):
        code, doc = invoke_json(runner, "mask", "phihat", "-i", masks("blocked.mask"), "-R", "1")
        assert code == 2
        assert doc["verdict"] == "undecided"

    def test_phihat_export(self, runner, tmp_path):
        out = tmp_path / "phi.tsv"
        result = runner.invoke(cli, ["mask", "phihat", "-i", masks("haar.mask"), "-R", "1", "--export", str(out)])
        assert result.exit_code == 0
        assert out.read_text() == "lo\thi\tvalue\n0/1\t1/1\t1\n1/1\t2/1\t0\n"
        assert "Wrote" in result.stderr


class TestConstruct:
    def test_gss_with_closure(self, runner, tmp_path):
        out = tmp_path / "s.set"
        code, doc = invoke_json(
            runner,
            "construct", "gss",
            "--from-wavelet-set", sets("shannon_p2.set"),
            "--closure-candidate", sets("unit_p2.set"),
            "--out", str(out),
        )
        assert code == 0
        assert doc["payload"]["set"] == ["p 2", "tail r 1 from 1 anchor 0. body { cyl 1. }"]
        assert out.read_text() == "p 2\ntail r 1 from 1 anchor 0. body { cyl 1. }\n"

    def test_upsilon(self, runner):
        code, doc = invoke_json(runner, "construct", "upsilon", "-i", sets("upsilon_p2.set"), "-n", "1")
        assert code == 0
        assert "upsilon_1: {0.000, 0.111}" in doc["payload"]["sets"]


def test_export_intervals(runner, tmp_path):
    out = tmp_path / "w.tsv"
    result = runner.invoke(cli, ["export", "intervals", "-i", sets("shannon_p2.set"), "--out", str(out)])
    assert result.exit_code == 0
    assert out.read_text() == "lo\thi\tvalue\n1/1\t2/1\t1\n"
    assert "interval export" in result.stdout


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "wavelet-set", "-i", "no-such-file.set"],
        ["verify", "wavelet-set", "--bogus"],
        ["verify", "nonsense", "-i", "x.set"],
        ["launch", "gss"],
        ["verify", "wavelet-set"],
        ["export", "intervals", "-i", "x.set"],
        ["mask", "phihat", "-i", "x.mask", "-R", "-1"],
        ["verify", "gss", "-i", "x.set", "--depth", "deep"],
    ],
)
def test_input_errors(runner, argv):
    result = runner.invoke(cli, argv)
    assert result.exit_code == 3
    assert result.stderr.startswith("❌")


def test_help_exits_cleanly(runner):
    result = runner.invoke(cli, ["verify", "--help"])
    assert result.exit_code == 0
    assert "wavelet-set" in result.stdout


def test_main_returns_exit_code(capsys):
    assert main(["verify", "wavelet-set", "-i", sets("shannon_p2.set")]) == 0
    assert main(["verify", "nonsense"]) == 3
    assert "verify wavelet-set (p=2)" in capsys.readouterr().out


def test_output_is_deterministic(runner):
    argv = ["verify", "gss", "-i", sets("scaling_stream_p2.set"), "--format", "json"]
    first = runner.invoke(cli, argv).stdout
    assert runner.invoke(cli, argv).stdout == first


def test_settings_override(tmp_path, monkeypatch, caplog):
    settings = tmp_path / "settings.json"
    settings.write_text(json.dumps({"VILENKIN_DEPTH": 7, "UNKNOWN": 1}))
    monkeypatch.setenv("VILENKIN_SETTINGS_PATH", str(settings))

    with caplog.at_level(logging.WARNING, logger="src.config.config_manager"):
        cfg = load_config()
    assert cfg["VILENKIN_DEPTH"] == 7
    assert "UNKNOWN" not in cfg
    assert "UNKNOWN" in caplog.text

    config = build_config(cfg, "verify", "gss", inputs=("s.set",))
    assert config.depth == 7
    assert config.resolution == 4


def test_phihat_keeps_resolution_open():
    config = build_config(CFG, "mask", "phihat", inputs=("m.mask",))
    assert config.resolution is None
    assert config.region == 3


@pytest.mark.parametrize("case", sorted(GOLDEN.glob("*.json")), ids=lambda p: p.stem)
def test_golden(runner, case):
    golden = json.loads(case.read_text(encoding="utf-8"))
    argv = [a.replace("{data}", str(DATA)) for a in golden["argv"]]
    code, doc = invoke_json(runner, *argv)
    assert code == golden["exit"]
    for key, value in golden["expect"].items():
        assert doc[key] == value, key
