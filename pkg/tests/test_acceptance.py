"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Criteria 7, 11 and 12 currently fail and are left failing on purpose: the
shipped reference tables are internally inconsistent at two points (the
max-load row's savings column does not match its own energy pair, and the
recorded low-supply savings exceed what the mandated scaling laws allow),
and the aggregate verification exit mirrors those. The assertions state
the required behavior, not the current one.
"""

import json
import subprocess
import sys

import pytest

from acnsim import fixtures, mapper
from acnsim.verify import run_verification

CLI = [sys.executable, "-m", "acnsim"]


@pytest.fixture(scope="session")
def report():
    return run_verification()


@pytest.fixture(scope="session")
def by_id(report):
    return {c.check_id: c for c in report.results}


def _criterion(n: int, ok: bool, detail: str):
    print(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def _check(n: int, check):
    detail = check.actual if check.passed else "; ".join(check.detail) or check.actual
    _criterion(n, check.passed, f"{check.description}: {detail}")


def test_criterion_01_weight_mapping(by_id, tmp_path):
    # the CLI compile path must land on the recorded capacitor values
    weights = tmp_path / "weights.json"
    weights.write_text(json.dumps(fixtures.reference_neuron().to_dict()))
    tech = tmp_path / "tech.json"
    tech.write_text(json.dumps(fixtures.reference_tech().to_dict()))
    out = tmp_path / "config.json"
    res = subprocess.run(
        CLI + ["map", str(weights), str(tech), "--ct", "2115", "-o", str(out)],
        capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    cfg = mapper.load_config(out)
    bad = []
    for i, want in fixtures.REFERENCE_SYNAPSES_FF.items():
        sign, got = cfg.tree_of_input(i)
        if abs(got - want) > 1.0:
            bad.append(f"synapse {i}: {got:g} vs {want:g}")
    if abs(cfg.pos.bias_fF - 35.0) > 1.0 or abs(cfg.neg.bias_fF - 56.0) > 1.0:
        bad.append(f"bias pair {cfg.pos.bias_fF:g}/{cfg.neg.bias_fF:g} vs 35/56")
    if abs(cfg.pos.ballast_fF - 1159.0) > 5.0:
        bad.append(f"pos ballast {cfg.pos.ballast_fF:g} vs 1159")
    if abs(cfg.neg.ballast_fF - 543.0) > 5.0:
        bad.append(f"neg ballast {cfg.neg.ballast_fF:g} vs 543")
    ok = not bad and by_id["c01-table3-map"].passed
    _criterion(1, ok, "; ".join(bad) or
               "12 synapses within 1 fF, bias within 1 fF, ballast within 5 fF")


def test_criterion_02_membrane_voltages(by_id):
    _check(2, by_id["c02-table4-model"])


def test_criterion_03_hardware_outputs(by_id):
    _check(3, by_id["c03-table4-hardware"])


def test_criterion_04_capacitive_loads(by_id):
    _check(4, by_id["c04-table5-loads"])


def test_criterion_05_load_maximizer(by_id):
    _check(5, by_id["c05-maximizer"])


def test_criterion_06_operating_frequency(by_id):
    _check(6, by_id["c06-frequency"])


def test_criterion_07_energy_calibration(by_id):
    model, fixture = by_id["c07-energy-model"], by_id["c07-energy-fixture"]
    ok = model.passed and fixture.passed
    parts = []
    for label, check in (("model", model), ("fixture savings", fixture)):
        state = "ok" if check.passed else "; ".join(check.detail)
        parts.append(f"{label}: {state}")
    _criterion(7, ok, " | ".join(parts))


def test_criterion_08_offset_tables(by_id):
    _check(8, by_id["c08-offset-tables"])


def test_criterion_09_software_equivalence(by_id):
    _check(9, by_id["c09-equivalence"])


def test_criterion_10_montecarlo_shape(by_id):
    _check(10, by_id["c10-montecarlo"])


def test_criterion_11_voltage_sweep(by_id):
    _check(11, by_id["c11-voltage-sweep"])


def test_criterion_12_verify_command(tmp_path):
    out = tmp_path / "report.json"
    res = subprocess.run(CLI + ["verify", "-o", str(out)],
                         capture_output=True, text=True)
    payload = json.loads(out.read_text())
    failing = [c["check"] for c in payload["checks"] if not c["pass"]]
    ok = res.returncode == 0 and not failing
    _criterion(12, ok, "verification exits 0" if ok else
               f"exit {res.returncode}, failing: {', '.join(failing)}")
