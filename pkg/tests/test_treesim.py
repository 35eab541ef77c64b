import itertools
import math
import random

import pytest

from acnsim import fixtures
from acnsim.mapper import map_weights
from acnsim.neuron import NeuronSpec, TechProfile
from acnsim.treesim import (PowerClock, capacitive_load, max_load_search,
                            membrane_voltages, operating_frequency,
                            peak_membrane_voltages, scale_power_clock,
                            swing_range, tree_capacitances)


def test_unloaded_resonance():
    # 1 mH with 25 pF: 1/(2*pi*sqrt(LC)) = 1006.584 kHz
    f0 = operating_frequency(PowerClock(), 0.0)
    assert f0 == pytest.approx(1006584.2, abs=0.5)


def test_frequency_droops_under_load():
    pc = PowerClock()
    f_loaded = operating_frequency(pc, 961.0)
    assert f_loaded == pytest.approx(987777.8, abs=0.5)
    assert f_loaded < operating_frequency(pc, 0.0)
    with pytest.raises(ValueError):
        operating_frequency(pc, -1.0)


def test_power_clock_validation():
    with pytest.raises(ValueError):
        PowerClock(vmax_V=0.0)
    with pytest.raises(ValueError):
        PowerClock(nominal_freq_hz=2.0e6)  # tank still resonates near 1 MHz


def test_scale_power_clock_matches_recorded_designs():
    base = PowerClock()
    for row in fixtures.FREQUENCY_TABLE:
        pc = scale_power_clock(base, row.nominal_mhz * 1e6)
        assert pc.l_pc_H == pytest.approx(row.l_pc_mH * 1e-3, rel=1e-9)
        assert pc.t_on_s == pytest.approx(row.t_on_ns * 1e-9, rel=1e-9)
        assert pc.c_e_F == base.c_e_F


def test_tree_split_accounts_for_every_capacitor(ref_config, vector_bits):
    cfg = ref_config
    for name in fixtures.TEST_VECTORS:
        bits = vector_bits(name)
        st = tree_capacitances(cfg, bits)
        on_p = cfg.pos.bias_fF + sum(c for i, c in cfg.pos.synapses_fF.items() if bits[i])
        assert st.con_pos_fF == pytest.approx(on_p, abs=1e-9)
        assert st.con_pos_fF + st.coff_pos_fF == pytest.approx(cfg.ca_pos_fF, abs=1e-9)
        assert st.con_neg_fF + st.coff_neg_fF == pytest.approx(cfg.ca_neg_fF, abs=1e-9)


def test_membrane_voltage_is_capacitive_division(ref_config, vector_bits):
    bits = vector_bits("TV8")  # all zero: only the bias rides the clock
    vm_p, vm_m = membrane_voltages(ref_config, bits, 1.8)
    assert vm_p * 1e3 == pytest.approx(1800.0 * 35.0 / ref_config.ca_pos_fF, abs=1e-6)
    assert vm_m * 1e3 == pytest.approx(1800.0 * 56.0 / ref_config.ca_neg_fF, abs=1e-6)
    # half clock level halves both voltages
    hp, hm = membrane_voltages(ref_config, bits, 0.9)
    assert hp == pytest.approx(vm_p / 2.0) and hm == pytest.approx(vm_m / 2.0)
    with pytest.raises(ValueError):
        membrane_voltages(ref_config, bits, -0.1)
    with pytest.raises(ValueError):
        membrane_voltages(ref_config, bits, 1.9)


def test_peak_membrane_voltages_and_swing_range(ref_config):
    n = ref_config.n_inputs
    lo_hi_p, lo_hi_n = swing_range(ref_config)
    zp, zm = peak_membrane_voltages(ref_config, (0,) * n)
    fp, fm = peak_membrane_voltages(ref_config, (1,) * n)
    assert lo_hi_p == pytest.approx((zp, fp))
    assert lo_hi_n == pytest.approx((zm, fm))
    # ballast quantization may overshoot the window by two grid steps
    for hi, ca in ((lo_hi_p[1], ref_config.ca_pos_fF), (lo_hi_n[1], ref_config.ca_neg_fF)):
        assert hi <= ref_config.tech.vcut_V + 1.8 * 2.0 / ca + 1e-9


def test_capacitive_load_series_formula(ref_config, vector_bits):
    for name in ("TV1", "TV4", "TV8", "TV16"):
        bits = vector_bits(name)
        st = tree_capacitances(ref_config, bits)
        want = (st.con_pos_fF * st.coff_pos_fF / ref_config.ca_pos_fF
                + st.con_neg_fF * st.coff_neg_fF / ref_config.ca_neg_fF)
        assert capacitive_load(ref_config, bits) == pytest.approx(want, abs=1e-9)


def _random_config(rng):
    n = rng.randint(1, 8)
    weights = []
    for _ in range(n):
        w = 0.0
        while abs(w) < 0.05:
            w = rng.uniform(-1.0, 1.0)
        weights.append(w)
    spec = NeuronSpec(weights=tuple(weights), bias=rng.uniform(-0.4, 0.4))
    tech = TechProfile(c_parasitic_fF=rng.choice([0.0, 30.0]))
    ct = spec.total_weight * tech.c_min_fF / min(map(abs, weights)) * 1.1
    # tiny budgets cannot absorb the node parasitic in the ballast
    return map_weights(spec, tech, max(ct, 120.0))


def test_max_load_search_matches_brute_force():
    rng = random.Random(99)
    for _ in range(25):
        cfg = _random_config(rng)
        res = max_load_search(cfg)
        assert res.exhaustive
        brute = max(capacitive_load(cfg, bits)
                    for bits in itertools.product((0, 1), repeat=cfg.n_inputs))
        assert res.load_fF == pytest.approx(brute, abs=1e-9)
        assert capacitive_load(cfg, res.bits) == pytest.approx(res.load_fF, abs=1e-9)


def test_max_load_greedy_fallback():
    rng = random.Random(7)
    for _ in range(10):
        cfg = _random_config(rng)
        exact = max_load_search(cfg)
        greedy = max_load_search(cfg, exhaustive_limit=0)
        assert not greedy.exhaustive
        assert greedy.load_fF <= exact.load_fF + 1e-9
        # single-bit swaps close small gaps; demand near-optimality
        assert greedy.load_fF >= 0.95 * exact.load_fF
        assert max_load_search(cfg, exhaustive_limit=0) == greedy


def test_max_load_on_reference_design(ref_config, vector_bits):
    res = max_load_search(ref_config)
    # the recorded worst-case vector attains the exact maximum (ties exist)
    assert capacitive_load(ref_config, vector_bits("TV4")) == pytest.approx(
        res.load_fF, abs=1e-9)
    assert res.load_fF == pytest.approx(fixtures.ENERGY_TABLE["TV4"].cl_fF, abs=0.05)


def test_operating_point_against_recorded_droop(ref_config):
    pc = PowerClock()
    load = max_load_search(ref_config).load_fF
    f_op = operating_frequency(pc, load)
    droop = 100.0 * (1.0 - f_op / operating_frequency(pc, 0.0))
    assert 1.5 <= droop <= 2.5
    recorded = fixtures.FREQUENCY_TABLE[2].operating_mhz * 1e6
    assert abs(f_op - recorded) / recorded < 0.015
    assert math.isclose(pc.nominal_ramp_s, 500e-9, rel_tol=1e-12)
