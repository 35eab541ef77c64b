import json

import pytest

from acnsim import energy, fixtures
from acnsim.neuron import parse_input_vector
from acnsim.treesim import PowerClock


@pytest.fixture(scope="session")
def ref_config():
    return fixtures.reference_config()


@pytest.fixture(scope="session")
def power_clock():
    return PowerClock()


@pytest.fixture(scope="session")
def calibrated(power_clock):
    return energy.calibrate_energy(fixtures.ENERGY_TABLE, power_clock)


@pytest.fixture(scope="session")
def vector_bits():
    def lookup(name: str):
        return parse_input_vector(fixtures.TEST_VECTORS[name], 12)
    return lookup


@pytest.fixture()
def cli_files(tmp_path):
    """Reference weight/tech/vector files for CLI invocations."""
    weights = tmp_path / "weights.json"
    weights.write_text(json.dumps(fixtures.reference_neuron().to_dict()))
    tech = tmp_path / "tech.json"
    tech.write_text(json.dumps(fixtures.reference_tech().to_dict()))
    vectors = tmp_path / "vectors.txt"
    vectors.write_text("".join(f"{name} {bits}\n"
                               for name, bits in fixtures.TEST_VECTORS.items()))
    return {"weights": weights, "tech": tech, "vectors": vectors, "dir": tmp_path}
