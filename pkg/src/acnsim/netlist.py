"""Behavioral netlist export.

Emits the compiled capacitor network as plain-text cards: one capacitor
per synapse/bias/ballast, one ideal SPDT switch per input, and the
sinusoidal clock source. Node names are fixed (vmP, vmN, pc, gnd) and
cards are ordered by input index, so identical configs produce identical
bytes; the header carries a hash of the config for traceability.
"""

from __future__ import annotations

import hashlib
import json

from . import treesim
from .mapper import AcnConfig
from .treesim import PowerClock

_POS_NODE = "vmP"
_NEG_NODE = "vmN"


def config_hash(config: AcnConfig) -> str:
    canonical = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _fmt(value_fF: float) -> str:
    return f"{value_fF:.6g}f"


def export_netlist(config: AcnConfig, pc: PowerClock | None = None) -> str:
    """Render the network; the clock frequency is the worst-case-load one."""
    pc = pc or PowerClock()
    worst = treesim.max_load_search(config)
    f_op = treesim.operating_frequency(pc, worst.load_fF)

    lines = [
        "* behavioral capacitive-neuron netlist",
        f"* config sha256: {config_hash(config)}",
        f"* inputs: {config.n_inputs}  nodes: {_POS_NODE} {_NEG_NODE} pc gnd",
        f"* clock: {pc.vmax_V:.6g} V peak, {f_op:.3f} Hz at worst-case load "
        f"{worst.load_fF:.1f}fF",
    ]

    # capacitor cards: synapse caps sit behind their SPDT pole node
    for index in range(config.n_inputs):
        placed = config.tree_of_input(index)
        if placed is None:
            continue
        sign, value = placed
        tree = "P" if sign > 0 else "N"
        node = _POS_NODE if sign > 0 else _NEG_NODE
        lines.append(f"C{tree}{index} {node} sw{index} {_fmt(value)}")
    for tree, node, half in (("P", _POS_NODE, config.pos), ("N", _NEG_NODE, config.neg)):
        lines.append(f"CB{tree} {node} pc {_fmt(half.bias_fF)}")
        lines.append(f"CD{tree} {node} gnd {_fmt(half.ballast_fF)}")

    # one SPDT per input: pole to the clock when x=1, to ground when x=0
    for index in range(config.n_inputs):
        if config.tree_of_input(index) is not None:
            lines.append(f"S{index} sw{index} pc gnd x{index}")

    lines.append(f"VPC pc gnd SIN(0 {pc.vmax_V:.6g} {f_op:.3f})")
    lines.append(".end")
    return "\n".join(lines) + "\n"
