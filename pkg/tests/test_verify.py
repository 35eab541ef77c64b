import numpy as np
import pytest

from acnsim.mapper import map_weights
from acnsim.verify import check_ids, random_feasible_neuron, run_verification


def test_check_ids_are_unique_and_ordered():
    ids = check_ids()
    assert len(ids) == 12
    assert len(set(ids)) == 12
    assert ids[0].startswith("c01") and ids[-1].startswith("c11")


def test_only_filter_selects_substring():
    report = run_verification(only="c06")
    assert [c.check_id for c in report.results] == ["c06-frequency"]
    assert report.passed
    with pytest.raises(ValueError):
        run_verification(only="c99")


def test_random_feasible_neuron_maps_cleanly():
    rng = np.random.default_rng(4)
    for _ in range(20):
        spec, tech, ct = random_feasible_neuron(rng)
        assert 1 <= spec.n <= 8
        cfg = map_weights(spec, tech, ct)
        assert cfg.validate() == []
    # same seed, same designs
    a = random_feasible_neuron(np.random.default_rng(8))
    b = random_feasible_neuron(np.random.default_rng(8))
    assert a == b


def test_report_table_has_verdict_line():
    report = run_verification(only="table4")
    table = report.format_table()
    assert table.splitlines()[0].startswith("check")
    assert table.rstrip().endswith("all checks passed")
