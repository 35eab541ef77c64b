"""Reference design and measurement tables shipped with the package.

One 12-input neuron, its hand-verified capacitor configuration, sixteen
characterization vectors and the recorded voltages, loads, energies,
frequency pairings, voltage-scaling savings and comparator offsets.
The verification suite replays the models against these tables; the
energy calibration anchors to two of the rows.

Values are stored exactly as recorded. Where a table is internally
inconsistent at the last printed digit, the checks carry the tolerance;
the data here is never retouched.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from .errors import ParseError
from .mapper import AcnConfig, CapacitiveTree
from .neuron import NeuronSpec, TechProfile

# ---------------------------------------------------------------------------
# table3: reference neuron and its capacitor realization
# ---------------------------------------------------------------------------

REFERENCE_WEIGHTS = (
    0.937, -1.000, -1.000, -1.000, -1.000, 0.169,
    0.600, -1.000, -0.529, 0.992, 0.961, -1.000,
)
REFERENCE_BIAS = 0.1
REFERENCE_CT_TOTAL_FF = 2115.0   # synapse budget used by the compiler

REFERENCE_SYNAPSES_FF = {
    0: 195.0, 1: 208.0, 2: 208.0, 3: 208.0, 4: 208.0, 5: 35.0,
    6: 125.0, 7: 208.0, 8: 110.0, 9: 206.0, 10: 200.0, 11: 208.0,
}
REFERENCE_CB_FF = (35.0, 56.0)      # (positive, negative)
REFERENCE_CD_FF = (1159.0, 543.0)   # (positive, negative)


def reference_neuron() -> NeuronSpec:
    return NeuronSpec(weights=REFERENCE_WEIGHTS, bias=REFERENCE_BIAS)


def reference_tech() -> TechProfile:
    # the recorded configuration folds extraction parasitics into the
    # capacitor values, so the profile models none explicitly
    return TechProfile(c_parasitic_fF=0.0)


def reference_config() -> AcnConfig:
    """The recorded capacitor configuration, verbatim."""
    spec = reference_neuron()
    pos = {i: REFERENCE_SYNAPSES_FF[i] for i in spec.positive_indices}
    neg = {i: REFERENCE_SYNAPSES_FF[i] for i in spec.negative_indices}
    return AcnConfig(
        n_inputs=spec.n,
        tech=reference_tech(),
        pos=CapacitiveTree(pos, REFERENCE_CB_FF[0], REFERENCE_CD_FF[0]),
        neg=CapacitiveTree(neg, REFERENCE_CB_FF[1], REFERENCE_CD_FF[1]),
        k_fF_per_weight=REFERENCE_CT_TOTAL_FF / spec.total_weight,
        source=spec,
    )


# ---------------------------------------------------------------------------
# characterization vectors (index 0 leftmost)
# ---------------------------------------------------------------------------

TEST_VECTORS: dict[str, str] = {
    "TV1": "0111_1001_1001",
    "TV2": "1111_1111_1111",
    "TV3": "0001_1010_0000",
    "TV4": "1111_1110_1110",
    "TV5": "0000_0000_1000",
    "TV6": "1011_0110_0101",
    "TV7": "1011_1010_1110",
    "TV8": "0000_0000_0000",
    "TV9": "0000_0010_1000",
    "TV10": "1000_0101_0000",
    "TV11": "1011_0111_1110",
    "TV12": "0011_0110_1110",
    "TV13": "1001_0000_1111",
    "TV14": "1100_0110_0000",
    "TV15": "1000_0010_0000",
    "TV16": "1000_0110_0110",
}


# ---------------------------------------------------------------------------
# table4: membrane voltages and outputs per vector
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VoltageRow:
    vm_p_mV: float
    vm_m_mV: float
    vmd_mV: float
    out_ideal: int          # sign of the theoretical differential
    out_proposed: int       # measured, low-offset comparator
    out_conventional: int   # measured, conventional comparator


VOLTAGE_TABLE: dict[str, VoltageRow] = {
    "TV1": VoltageRow(32.0, 1301.0, -1268.0, 0, 0, 0),
    "TV2": VoltageRow(733.0, 1301.0, -568.0, 0, 0, 0),
    "TV3": VoltageRow(147.0, 434.0, -287.0, 0, 0, 0),
    "TV4": VoltageRow(733.0, 918.0, -185.0, 0, 0, 0),
    "TV5": VoltageRow(32.0, 153.0, -120.0, 0, 0, 0),
    "TV6": VoltageRow(549.0, 625.0, -77.0, 0, 0, 0),
    "TV7": VoltageRow(701.0, 727.0, -26.0, 0, 0, 0),
    "TV8": VoltageRow(32.2, 51.5, -19.3, 0, 0, 0),
    "TV9": VoltageRow(147.0, 153.0, -5.0, 0, 0, 0),
    "TV10": VoltageRow(244.0, 243.0, 1.0, 1, 0, 0),
    "TV11": VoltageRow(733.0, 727.0, 6.0, 1, 1, 0),
    "TV12": VoltageRow(553.0, 535.0, 18.0, 1, 1, 0),
    "TV13": VoltageRow(586.0, 535.0, 50.0, 1, 1, 1),
    "TV14": VoltageRow(359.0, 243.0, 116.0, 1, 1, 1),
    "TV15": VoltageRow(327.0, 52.0, 275.0, 1, 1, 1),
    "TV16": VoltageRow(733.0, 52.0, 681.0, 1, 1, 1),
}


# ---------------------------------------------------------------------------
# table5: capacitive load and per-operation energy per vector
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyRow:
    cl_fF: float
    acn_fJ: float       # adiabatic neuron synapse energy (clock + switches)
    ccn_fJ: float       # conventional switched-capacitor equivalent
    savings_pct: float


ENERGY_TABLE: dict[str, EnergyRow] = {
    "TV1": EnergyRow(426.7, 127.2, 1439.1, 91.2),
    "TV2": EnergyRow(864.2, 151.4, 3006.7, 94.9),
    "TV3": EnergyRow(505.1, 130.7, 1498.2, 91.3),
    "TV4": EnergyRow(961.0, 188.5, 3456.1, 94.2),
    "TV5": EnergyRow(186.3, 95.1, 365.3, 73.9),
    "TV6": EnergyRow(858.0, 130.0, 2805.2, 95.4),
    "TV7": EnergyRow(935.9, 154.4, 3109.3, 95.0),
    "TV8": EnergyRow(88.8, 92.6, 341.2, 72.9),
    "TV9": EnergyRow(298.8, 116.0, 769.7, 84.9),
    "TV10": EnergyRow(457.5, 114.4, 1308.1, 91.3),
    "TV11": EnergyRow(943.0, 159.7, 3143.4, 94.9),
    "TV12": EnergyRow(825.2, 137.9, 2693.6, 94.9),
    "TV13": EnergyRow(838.0, 143.9, 2714.3, 94.7),
    "TV14": EnergyRow(540.6, 119.5, 1605.7, 92.6),
    "TV15": EnergyRow(344.9, 118.5, 905.4, 86.9),
    "TV16": EnergyRow(526.3, 111.7, 1588.5, 92.9),
}

ALL_ZERO_VECTOR = "TV8"   # calibration anchor: clock-generator floor
MAX_LOAD_VECTOR = "TV4"   # calibration anchor: heaviest loading


# ---------------------------------------------------------------------------
# table6: clock re-targeting schedule (frequency sweep)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrequencyRow:
    nominal_mhz: float
    operating_mhz: float    # recorded under maximum loading
    t_on_ns: float
    l_pc_mH: float


FREQUENCY_TABLE: tuple[FrequencyRow, ...] = (
    FrequencyRow(0.10, 0.0986, 600.0, 100.0),
    FrequencyRow(0.50, 0.4902, 120.0, 4.0),
    FrequencyRow(1.0, 0.9794, 60.0, 1.0),
    FrequencyRow(10.0, 9.8100, 6.0, 0.010),
    FrequencyRow(100.0, 98.0400, 0.6, 0.0001),
)


# ---------------------------------------------------------------------------
# table7: recorded savings under supply scaling (percent)
# ---------------------------------------------------------------------------

VOLTAGE_SCALING_TABLE: dict[float, dict[str, float]] = {
    1.8: {"TV4": 94.2, "TV8": 72.9, "TV13": 94.7},
    1.7: {"TV4": 94.1, "TV8": 71.4, "TV13": 94.6},
    1.6: {"TV4": 94.0, "TV8": 71.6, "TV13": 94.6},
    1.5: {"TV4": 94.0, "TV8": 71.3, "TV13": 94.2},
    1.4: {"TV4": 94.2, "TV8": 71.5, "TV13": 94.1},
    1.3: {"TV4": 94.3, "TV8": 69.5, "TV13": 94.5},
    1.2: {"TV4": 94.9, "TV8": 71.4, "TV13": 94.4},
    1.1: {"TV4": 95.8, "TV8": 71.5, "TV13": 95.7},
    1.0: {"TV4": 96.4, "TV8": 69.2, "TV13": 95.2},
}


# ---------------------------------------------------------------------------
# table1/table2: comparator input-referred offsets (CSV fixture)
# ---------------------------------------------------------------------------

OFFSET_CORNERS = ("FF", "TT", "SS")
OFFSET_TEMPS_C = (-55.0, 0.0, 27.0, 100.0, 125.0)

# measured average comparator energy advantage of the low-offset design
TL_ENERGY_SAVINGS_PCT = {"SS": 1.5, "FF": 2.3}


def load_offset_table() -> dict[tuple[str, str, float, str], float]:
    """All 60 offset entries keyed by (design, corner, temp_C, direction)."""
    table = {}
    path = resources.files("acnsim").joinpath("data/tl_offsets.csv")
    with path.open("r", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (row["design"], row["corner"], float(row["temp_C"]), row["direction"])
            table[key] = float(row["offset_mV"])
    return table


def fixture_vectors() -> dict[str, str]:
    return dict(TEST_VECTORS)


def load_energy_fixture(path) -> dict[str, EnergyRow]:
    """Parse an external calibration table (same shape as the embedded one).

    Columns: vector, CL_fF, ACN_fJ, CCN_fJ and optionally savings_pct;
    a missing savings column is filled from the two energy columns.
    """
    rows: dict[str, EnergyRow] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            try:
                acn, ccn = float(row["ACN_fJ"]), float(row["CCN_fJ"])
                savings = (float(row["savings_pct"]) if row.get("savings_pct")
                           else 100.0 * (ccn - acn) / ccn)
                rows[row["vector"]] = EnergyRow(
                    cl_fF=float(row["CL_fF"]), acn_fJ=acn, ccn_fJ=ccn,
                    savings_pct=savings)
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"{path}: bad calibration row {row!r}: {exc}") from exc
    return rows
