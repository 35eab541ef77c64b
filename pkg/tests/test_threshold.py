import pytest

from acnsim import threshold
from acnsim.threshold import (CONVENTIONAL, FALLING, IDEAL, PROPOSED, RISING,
                              TlModel, decide, offset_lookup, tl_energy_fJ)


def test_variant_constructors():
    assert TlModel.ideal().variant == IDEAL
    assert TlModel.ideal().theta_mV == 0.0
    assert TlModel.proposed().theta_mV == 5.0
    assert TlModel.conventional().theta_mV == 20.0
    for name in (IDEAL, PROPOSED, CONVENTIONAL):
        assert threshold.from_name(name).variant == name
    with pytest.raises(ValueError):
        threshold.from_name("bogus")


def test_offset_grid_points_are_exact():
    prop, conv = TlModel.proposed(), TlModel.conventional()
    assert offset_lookup(prop, "FF", 27.0, RISING) == 9.004
    assert offset_lookup(prop, "SS", 100.0, RISING) == 9.008
    assert offset_lookup(conv, "TT", 100.0, RISING) == 23.01
    assert offset_lookup(conv, "FF", -55.0, RISING) == 23.00


def test_offset_interpolates_linearly_between_temps():
    for model in (TlModel.proposed(), TlModel.conventional()):
        for corner in ("FF", "TT", "SS"):
            for direction in (RISING, FALLING):
                lo = offset_lookup(model, corner, 27.0, direction)
                hi = offset_lookup(model, corner, 100.0, direction)
                mid = offset_lookup(model, corner, 63.5, direction)
                assert mid == pytest.approx((lo + hi) / 2.0, abs=1e-12)
                between = offset_lookup(model, corner, 50.0, direction)
                assert min(lo, hi) - 1e-12 <= between <= max(lo, hi) + 1e-12


def test_offset_lookup_rejects_bad_queries():
    model = TlModel.proposed()
    with pytest.raises(ValueError):
        offset_lookup(model, "tt", 27.0, RISING)  # corners are upper-case
    with pytest.raises(ValueError):
        offset_lookup(model, "TT", 27.0, "sideways")
    with pytest.raises(ValueError):
        offset_lookup(model, "TT", -56.0, RISING)
    with pytest.raises(ValueError):
        offset_lookup(model, "TT", 126.0, RISING)


def test_proposed_offsets_beat_conventional_rising():
    prop, conv = TlModel.proposed(), TlModel.conventional()
    worst = 0.0
    for corner in ("FF", "TT", "SS"):
        for temp in (-55.0, 0.0, 27.0, 100.0, 125.0):
            p = offset_lookup(prop, corner, temp, RISING)
            c = offset_lookup(conv, corner, temp, RISING)
            assert p < c
            worst = max(worst, p)
    assert worst <= 9.008


def test_decide_threshold_semantics():
    prop, conv = TlModel.proposed(), TlModel.conventional()
    assert decide(prop, 500.0, 496.0).output == 0   # v_md 4 < 5
    assert decide(prop, 500.0, 495.0).output == 1   # tie with theta fires
    assert decide(conv, 500.0, 480.1).output == 0   # 19.9 < 20
    assert decide(conv, 500.0, 480.0).output == 1
    ideal = TlModel.ideal()
    assert decide(ideal, 500.0, 500.0).output == 1  # exact tie fires
    assert decide(ideal, 499.999, 500.0).output == 0
    d = decide(prop, 510.0, 500.0)
    assert d.v_md_mV == pytest.approx(10.0)
    assert d.limiting_offset_mV == pytest.approx(5.0)


def test_latch_energy_scales_with_supply_squared():
    model = TlModel.proposed()
    assert tl_energy_fJ(model, 1.8) == pytest.approx(324.0)
    assert tl_energy_fJ(model, 1.0) == pytest.approx(100.0)
    assert tl_energy_fJ(model, 0.9) == pytest.approx(tl_energy_fJ(model, 1.8) / 4.0)


def test_hardware_outputs_match_recorded_table(ref_config, vector_bits):
    from acnsim import fixtures
    from acnsim.treesim import peak_membrane_voltages
    prop, conv = TlModel.proposed(), TlModel.conventional()
    for name, row in fixtures.VOLTAGE_TABLE.items():
        bits = vector_bits(name)
        vm_p, vm_m = peak_membrane_voltages(ref_config, bits)
        assert decide(prop, vm_p * 1e3, vm_m * 1e3).output == row.out_proposed
        assert decide(conv, vm_p * 1e3, vm_m * 1e3).output == row.out_conventional
