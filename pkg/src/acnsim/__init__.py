"""Adiabatic capacitive-neuron design compiler and energy simulator.

A signed-weight threshold neuron is compiled onto two capacitive trees
driven by one sinusoidal power clock; the package models the resulting
membrane voltages, comparator decisions, per-operation energy, clock
retargeting, supply scaling and process variation, and verifies itself
against the shipped reference tables.
"""

from .errors import (AcnError, CalibrationError, DimensionError,
                     FeasibilityError, ParseError)
from .mapper import (AcnConfig, CapacitiveTree, FeasibilityReport,
                     check_feasibility, load_config, map_weights,
                     quantization_margin, quantize_capacitance, save_config)
from .energy import (EnergyBreakdown, EnergyParams, calibrate_energy,
                     default_params, energy_adiabatic, energy_ccn, energy_pcg,
                     sweep, total_energy)
from .montecarlo import (McSummary, VariationModel, mc_run, mc_stats,
                         sample_variation)
from .netlist import export_netlist
from .neuron import (InputBits, NeuronSpec, TechProfile, format_input_vector,
                     parse_input_vector, software_output)
from .threshold import TlDecision, TlModel, decide, offset_lookup, tl_energy_fJ
from .treesim import (MaxLoadResult, PowerClock, TreeState, capacitive_load,
                      max_load_search, membrane_voltages, operating_frequency,
                      peak_membrane_voltages, scale_power_clock,
                      tree_capacitances)
from .verify import VerifyReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "AcnError", "ParseError", "DimensionError", "FeasibilityError",
    "CalibrationError",
    "NeuronSpec", "TechProfile", "InputBits", "software_output",
    "parse_input_vector", "format_input_vector",
    "AcnConfig", "CapacitiveTree", "FeasibilityReport", "map_weights",
    "check_feasibility", "quantize_capacitance", "quantization_margin",
    "load_config", "save_config",
    "PowerClock", "TreeState", "MaxLoadResult", "membrane_voltages",
    "peak_membrane_voltages", "tree_capacitances", "capacitive_load",
    "max_load_search", "operating_frequency", "scale_power_clock",
    "TlModel", "TlDecision", "decide", "offset_lookup", "tl_energy_fJ",
    "EnergyParams", "EnergyBreakdown", "energy_pcg", "energy_adiabatic",
    "energy_ccn", "total_energy", "calibrate_energy", "default_params", "sweep",
    "VariationModel", "McSummary", "sample_variation", "mc_run", "mc_stats",
    "export_netlist",
    "VerifyReport", "run_verification",
    "__version__",
]
