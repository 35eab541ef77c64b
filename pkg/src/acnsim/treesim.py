"""Capacitive-tree electrical model.

Closed-form behavior of the two capacitor trees under a shared sinusoidal
power clock: membrane voltages by capacitive division, the load the trees
reflect back onto the clock, and the LC operating frequency of the
resonant clock generator under that load.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .mapper import AcnConfig, CapacitiveTree
from .neuron import InputBits, check_bits

FF = 1e-15  # farads per femtofarad


@dataclass(frozen=True)
class TreeState:
    """Clock-side / ground-side capacitance split for one input vector (fF)."""

    con_pos_fF: float
    coff_pos_fF: float
    con_neg_fF: float
    coff_neg_fF: float

    @property
    def con_total_fF(self) -> float:
        return self.con_pos_fF + self.con_neg_fF


@dataclass(frozen=True)
class PowerClock:
    """Resonant sinusoidal supply (LC tank with a bypass switch).

    The nominal frequency is the design label; the tank resonates at
    1/(2*pi*sqrt(L*C_E)) unloaded and droops as the trees add load.
    freq_calibration absorbs the residual percent-level offset of a real
    generator against the ideal LC formula.
    """

    vmax_V: float = 1.8
    nominal_freq_hz: float = 1.0e6
    l_pc_H: float = 1.0e-3
    c_e_F: float = 25.0e-12
    t_on_s: float = 60.0e-9      # bypass-switch on-time per cycle
    r_pc_ohm: float = 1.0e3
    freq_calibration: float = 1.0

    def __post_init__(self):
        for name in ("vmax_V", "nominal_freq_hz", "l_pc_H", "c_e_F", "t_on_s", "r_pc_ohm"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        lc = self.freq_calibration / (2.0 * math.pi * math.sqrt(self.l_pc_H * self.c_e_F))
        if abs(lc - self.nominal_freq_hz) > 0.05 * self.nominal_freq_hz:
            raise ValueError(
                f"nominal frequency {self.nominal_freq_hz:g} Hz is more than 5% away "
                f"from the unloaded tank resonance {lc:g} Hz")

    @property
    def nominal_ramp_s(self) -> float:
        """Half the nominal period (one evaluate or recover ramp)."""
        return 1.0 / (2.0 * self.nominal_freq_hz)


def scale_power_clock(pc: PowerClock, nominal_freq_hz: float) -> PowerClock:
    """Re-target the clock to another nominal frequency.

    The tank inductor scales with 1/f^2 (same C_E) and the bypass on-time
    with 1/f, keeping the duty of the bypass phase constant.
    """
    ratio = pc.nominal_freq_hz / nominal_freq_hz
    return PowerClock(
        vmax_V=pc.vmax_V,
        nominal_freq_hz=nominal_freq_hz,
        l_pc_H=pc.l_pc_H * ratio * ratio,
        c_e_F=pc.c_e_F,
        t_on_s=pc.t_on_s * ratio,
        r_pc_ohm=pc.r_pc_ohm,
        freq_calibration=pc.freq_calibration,
    )


# ---------------------------------------------------------------------------
# per-vector tree quantities
# ---------------------------------------------------------------------------

def _tree_on_capacitance(tree: CapacitiveTree, bits: InputBits) -> float:
    # bias capacitor hangs on the clock permanently; synapses join per bit
    return tree.bias_fF + sum(c for i, c in tree.synapses_fF.items() if bits[i])


def tree_capacitances(config: AcnConfig, bits: InputBits) -> TreeState:
    """Split each tree into clock-connected and grounded capacitance.

    The grounded side includes off synapses, the ballast and the node
    parasitic, so con + coff equals the full node capacitance exactly.
    """
    check_bits(bits, config.n_inputs)
    con_p = _tree_on_capacitance(config.pos, bits)
    con_n = _tree_on_capacitance(config.neg, bits)
    return TreeState(
        con_pos_fF=con_p,
        coff_pos_fF=config.ca_pos_fF - con_p,
        con_neg_fF=con_n,
        coff_neg_fF=config.ca_neg_fF - con_n,
    )


def membrane_voltages(config: AcnConfig, bits: InputBits, v_pc_V: float) -> tuple[float, float]:
    """Membrane voltages (V) at clock level v_pc_V by capacitive division."""
    if not 0.0 <= v_pc_V <= config.tech.vmax_V + 1e-12:
        raise ValueError(f"clock voltage {v_pc_V!r} outside [0, vmax]")
    state = tree_capacitances(config, bits)
    vm_p = config.pos.bias_voltage_V + v_pc_V * state.con_pos_fF / config.ca_pos_fF
    vm_m = config.neg.bias_voltage_V + v_pc_V * state.con_neg_fF / config.ca_neg_fF
    return vm_p, vm_m


def peak_membrane_voltages(config: AcnConfig, bits: InputBits) -> tuple[float, float]:
    """Membrane voltages at the clock crest, where the comparator samples."""
    return membrane_voltages(config, bits, config.tech.vmax_V)


def swing_range(config: AcnConfig) -> tuple[tuple[float, float], tuple[float, float]]:
    """Per-tree (lowest, highest) peak membrane voltage over all inputs (V).

    The low end is the all-zero vector (bias capacitor only), the high end
    all synapses active; both are affine in the tree's on-capacitance.
    """
    out = []
    for tree, ca in ((config.pos, config.ca_pos_fF), (config.neg, config.ca_neg_fF)):
        lo = tree.bias_voltage_V + config.tech.vmax_V * tree.bias_fF / ca
        hi = tree.bias_voltage_V + config.tech.vmax_V * (tree.synapse_total_fF + tree.bias_fF) / ca
        out.append((lo, hi))
    return out[0], out[1]


def capacitive_load(config: AcnConfig, bits: InputBits) -> float:
    """Capacitance the trees present to the power clock (fF).

    Each tree reduces to its clock-side capacitance in series with the
    grounded remainder: con*(ca - con)/ca, summed over both trees.
    """
    state = tree_capacitances(config, bits)
    load = 0.0
    for con, ca in ((state.con_pos_fF, config.ca_pos_fF),
                    (state.con_neg_fF, config.ca_neg_fF)):
        if ca > 0:
            load += con * (ca - con) / ca
    return load


@dataclass(frozen=True)
class MaxLoadResult:
    bits: InputBits
    load_fF: float
    exhaustive: bool


def max_load_search(config: AcnConfig, exhaustive_limit: int = 24) -> MaxLoadResult:
    """Input vector that maximizes the clock load.

    The total load separates per tree (each input feeds exactly one tree),
    so the search enumerates each tree's synapse subsets independently;
    that is exact and far cheaper than walking all 2^n vectors. Above
    exhaustive_limit inputs a greedy-plus-swap heuristic is used and the
    result is flagged non-exhaustive. Per tree, the load is a downward
    parabola in the on-capacitance peaking at half the node capacitance,
    so the winner is the achievable subset sum nearest that midpoint.
    """
    bits = [0] * config.n_inputs
    total = 0.0
    exact = config.n_inputs <= exhaustive_limit
    for tree, ca in ((config.pos, config.ca_pos_fF), (config.neg, config.ca_neg_fF)):
        indices = sorted(tree.synapses_fF)
        caps = [tree.synapses_fF[i] for i in indices]
        if exact:
            chosen, load = _best_subset_exhaustive(caps, tree.bias_fF, ca)
        else:
            chosen, load = _best_subset_greedy(caps, tree.bias_fF, ca)
        for j in chosen:
            bits[indices[j]] = 1
        total += load
    return MaxLoadResult(tuple(bits), total, exact)


def _series_load(con: float, ca: float) -> float:
    return con * (ca - con) / ca if ca > 0 else 0.0


def _best_subset_exhaustive(caps: list[float], cb: float, ca: float):
    best_mask, best = 0, _series_load(cb, ca)
    for mask in range(1, 1 << len(caps)):
        con = cb + sum(c for j, c in enumerate(caps) if mask >> j & 1)
        load = _series_load(con, ca)
        if load > best:
            best_mask, best = mask, load
    return [j for j in range(len(caps)) if best_mask >> j & 1], best


def _best_subset_greedy(caps: list[float], cb: float, ca: float):
    # aim the on-capacitance at ca/2, then try single-bit flips
    target = ca / 2.0
    order = sorted(range(len(caps)), key=lambda j: -caps[j])
    chosen, con = set(), cb
    for j in order:
        if abs(con + caps[j] - target) < abs(con - target):
            chosen.add(j)
            con += caps[j]
    improved = True
    while improved:
        improved = False
        for j in range(len(caps)):
            trial = con - caps[j] if j in chosen else con + caps[j]
            if _series_load(trial, ca) > _series_load(con, ca) + 1e-12:
                chosen.symmetric_difference_update({j})
                con = trial
                improved = True
    return sorted(chosen), _series_load(con, ca)


def operating_frequency(pc: PowerClock, cl_fF: float) -> float:
    """Loaded tank frequency (Hz): the trees' load adds to the tank capacitor."""
    if cl_fF < 0:
        raise ValueError("capacitive load cannot be negative")
    c_total = pc.c_e_F + cl_fF * FF
    return pc.freq_calibration / (2.0 * math.pi * math.sqrt(pc.l_pc_H * c_total))
