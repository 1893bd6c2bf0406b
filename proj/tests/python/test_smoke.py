import json
import os
import subprocess

import pytest

import treelip


def test_opnorm_report():
    r = treelip.report("opnorm", "--tree", "path", "--map", "affine-path:a=2,b=0,fixzero")
    assert r["schema"] == "treelip.report/1"
    assert r["result"]["best_ratio"]["value"] == "2"
    assert r["result"]["upper"]["value"] == "2"


def test_dynamics_verdict_keys_are_registered():
    r = treelip.report("dynamics", "report", "--map", "affine-path:a=2,b=1", "--lambda", "1")
    assert r["result"]["verdict"] == "MixingCertified"
    keys = {k for k, _ in treelip.theorem_keys()}
    assert all(v["theorem_key"] in keys for v in r["verdicts"])


def test_errors_carry_exit_status():
    with pytest.raises(treelip.CliError) as info:
        treelip.report("norm", "--function", "nonsense")
    assert info.value.status == 2
    assert info.value.kind == "SpecError"


def test_helpers():
    assert treelip.distance([0, 1], [0, 0, 0]) == 3
    assert treelip.affine_orbit(2, 1, steps=4) == [0, 1, 3, 7, 15]
    assert treelip.comb_map([0]) == []


@pytest.mark.skipif("TREELIP_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_binary_matches_module():
    args = ["orbit", "--map", "comb", "--vertex", "[0,0,0]", "--steps", "6"]
    proc = subprocess.run([os.environ["TREELIP_CLI"], *args], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout) == treelip.report(*args)
