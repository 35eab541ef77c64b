"""Abstract threshold neuron, input-vector parsing and technology constants.

The software neuron is the functional reference for everything downstream:
a hardware realization is correct exactly when it reproduces
``software_output`` for every input vector (up to the quantization margin
of the capacitor grid).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import DimensionError, ParseError

# An input vector is an ordered tuple of 0/1 ints, index 0 first.
InputBits = tuple[int, ...]


@dataclass(frozen=True)
class NeuronSpec:
    """Signed-weight binary neuron: fires when sum(w_i * x_i) >= bias.

    Ties fire: the comparison is >= by convention, so a weighted sum exactly
    at the bias produces output 1.
    """

    weights: tuple[float, ...]
    bias: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.weights) < 1:
            raise ValueError("neuron needs at least one weight")
        if not all(math.isfinite(w) for w in self.weights):
            raise ValueError("weights must be finite")
        if not math.isfinite(self.bias):
            raise ValueError("bias must be finite")
        if self.total_weight == 0.0:
            raise ValueError("all weights are zero")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def positive_indices(self) -> tuple[int, ...]:
        """Indices driven onto the positive (excitatory) tree."""
        return tuple(i for i, w in enumerate(self.weights) if w > 0)

    @property
    def negative_indices(self) -> tuple[int, ...]:
        """Indices driven onto the negative (inhibitory) tree."""
        return tuple(i for i, w in enumerate(self.weights) if w < 0)

    @property
    def total_weight(self) -> float:
        """Sum of absolute weights; sets the capacitance-per-weight scale."""
        return sum(abs(w) for w in self.weights)

    def margin(self, bits: InputBits) -> float:
        """Weighted sum minus bias; the sign decides the output."""
        check_bits(bits, self.n)
        return sum(w * x for w, x in zip(self.weights, bits)) - self.bias

    def to_dict(self) -> dict:
        return {"weights": list(self.weights), "bias": self.bias}

    @classmethod
    def from_dict(cls, data: dict) -> "NeuronSpec":
        try:
            return cls(weights=tuple(data["weights"]), bias=float(data.get("bias", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"invalid neuron description: {exc}") from exc


def software_output(spec: NeuronSpec, bits: InputBits) -> int:
    """Reference output of the abstract neuron (1 fires, 0 does not)."""
    return 1 if spec.margin(bits) >= 0.0 else 0


def check_bits(bits, n: int) -> None:
    if len(bits) != n:
        raise DimensionError(f"expected {n} input bits, got {len(bits)}")
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise DimensionError(f"input bit at position {i} is {b!r}, not 0/1")


def parse_input_vector(text: str, n: int) -> InputBits:
    """Parse a vector string such as ``0001_1010_0000`` (index 0 leftmost).

    Underscores and whitespace are grouping sugar and are ignored. Any other
    non-binary character is rejected with its position in the original string.
    """
    bits = []
    for pos, ch in enumerate(text):
        if ch in "_ \t":
            continue
        if ch == "0":
            bits.append(0)
        elif ch == "1":
            bits.append(1)
        else:
            raise ParseError(f"invalid character {ch!r} at position {pos} in vector {text!r}")
    if len(bits) != n:
        raise DimensionError(f"expected {n} bits, got {len(bits)} in vector {text!r}")
    return tuple(bits)


def format_input_vector(bits: InputBits, group: int = 4) -> str:
    """Inverse of parse_input_vector, grouping digits for readability."""
    s = "".join(str(b) for b in bits)
    if group <= 0:
        return s
    return "_".join(s[i:i + group] for i in range(0, len(s), group))


@dataclass(frozen=True)
class TechProfile:
    """Process constants for capacitor synthesis and the comparator window.

    vcut_V is the highest membrane voltage the threshold-logic input stage
    tolerates; it must track vdd_V - vthp_V (the comparator's input devices
    stay saturated only below that point).
    """

    vdd_V: float = 1.8
    vmax_V: float = 1.8          # power-clock peak amplitude
    vcut_V: float = 1.3
    vthp_V: float = 0.5
    c_min_fF: float = 35.0       # smallest manufacturable capacitor
    cap_grid_fF: float = 1.0     # layout grid for capacitor values
    c_parasitic_fF: float = 30.0  # per membrane node, lumped with the ballast

    def __post_init__(self):
        if self.vdd_V <= 0 or self.vmax_V <= 0:
            raise ValueError("supply and clock amplitudes must be positive")
        if not 0 < self.vcut_V <= self.vdd_V:
            raise ValueError("vcut_V must lie in (0, vdd_V]")
        if abs(self.vcut_V - (self.vdd_V - self.vthp_V)) > 0.1 + 1e-12:
            raise ValueError("vcut_V must track vdd_V - vthp_V within 0.1 V")
        if self.c_min_fF <= 0:
            raise ValueError("c_min_fF must be positive")
        if self.cap_grid_fF <= 0:
            raise ValueError("cap_grid_fF must be positive")
        if self.c_parasitic_fF < 0:
            raise ValueError("c_parasitic_fF cannot be negative")

    def to_dict(self) -> dict:
        return {
            "vdd_V": self.vdd_V,
            "vmax_V": self.vmax_V,
            "vcut_V": self.vcut_V,
            "vthp_V": self.vthp_V,
            "c_min_fF": self.c_min_fF,
            "cap_grid_fF": self.cap_grid_fF,
            "c_parasitic_fF": self.c_parasitic_fF,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TechProfile":
        try:
            return cls(**{k: float(v) for k, v in data.items()})
        except (TypeError, ValueError) as exc:
            raise ParseError(f"invalid technology profile: {exc}") from exc


def load_neuron(path: str | Path) -> NeuronSpec:
    """Read a neuron description file: {"weights": [...], "bias": t}."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read neuron file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"neuron file {path} is not valid JSON: {exc}") from exc
    return NeuronSpec.from_dict(data)


def load_tech(path: str | Path) -> TechProfile:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read technology file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"technology file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"technology file {path} must hold a JSON object")
    return TechProfile.from_dict(data)
