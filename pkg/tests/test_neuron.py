import math
import random

import pytest

from acnsim.errors import DimensionError, ParseError
from acnsim.neuron import (NeuronSpec, TechProfile, format_input_vector,
                           parse_input_vector, software_output)


def test_margin_and_output():
    spec = NeuronSpec(weights=(0.5, -0.25), bias=0.1)
    assert spec.margin((1, 0)) == pytest.approx(0.4)
    assert software_output(spec, (1, 0)) == 1
    assert software_output(spec, (0, 1)) == 0


def test_tie_fires():
    spec = NeuronSpec(weights=(0.5, 0.5), bias=1.0)
    assert spec.margin((1, 1)) == pytest.approx(0.0)
    assert software_output(spec, (1, 1)) == 1


def test_weight_partition():
    spec = NeuronSpec(weights=(0.9, -1.0, 0.0, 0.2))
    assert spec.positive_indices == (0, 3)
    assert spec.negative_indices == (1,)
    assert spec.total_weight == pytest.approx(2.1)


def test_rejects_bad_weights():
    with pytest.raises(ValueError):
        NeuronSpec(weights=())
    with pytest.raises(ValueError):
        NeuronSpec(weights=(0.0, 0.0))
    with pytest.raises(ValueError):
        NeuronSpec(weights=(1.0, math.nan))


def test_spec_round_trip():
    spec = NeuronSpec(weights=(0.937, -1.0, 0.169), bias=0.1)
    again = NeuronSpec.from_dict(spec.to_dict())
    assert again == spec
    with pytest.raises(ParseError):
        NeuronSpec.from_dict({"bias": 0.1})


def test_parse_vector():
    assert parse_input_vector("0001_1010", 8) == (0, 0, 0, 1, 1, 0, 1, 0)
    assert parse_input_vector("01 10", 4) == (0, 1, 1, 0)
    with pytest.raises(ParseError):
        parse_input_vector("01x0", 4)
    with pytest.raises(DimensionError):
        parse_input_vector("0110", 5)


def test_format_parse_round_trip():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 16)
        bits = tuple(rng.randint(0, 1) for _ in range(n))
        assert parse_input_vector(format_input_vector(bits), n) == bits


def test_tech_profile_validation():
    tech = TechProfile()
    assert tech.vdd_V == 1.8 and tech.c_min_fF == 35.0
    # comparator window must stay consistent with the rail minus V_thp
    with pytest.raises(ValueError):
        TechProfile(vcut_V=0.9)
    with pytest.raises(ValueError):
        TechProfile(c_min_fF=-1.0)
    assert TechProfile.from_dict(tech.to_dict()) == tech
