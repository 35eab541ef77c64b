"""Weight-to-capacitor compiler.

Maps a signed-weight neuron onto two capacitive trees: synapse capacitors
proportional to the weight magnitudes, a bias capacitor pair encoding the
firing threshold, and ballast capacitors that equalize both trees' total
capacitance while capping the membrane swing at the comparator window.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import FeasibilityError, ParseError
from .neuron import NeuronSpec, TechProfile

SYNAPSE = "synapse"
BIAS = "bias"
BALLAST = "ballast"

_EPS_FF = 1e-9  # absolute slack for float comparisons on capacitances


@dataclass(frozen=True)
class CapacitiveTree:
    """One half of the dual-tree divider (all values in fF)."""

    synapses_fF: Mapping[int, float]   # original input index -> capacitance
    bias_fF: float
    ballast_fF: float
    bias_voltage_V: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "synapses_fF", dict(self.synapses_fF))

    @property
    def synapse_total_fF(self) -> float:
        return sum(self.synapses_fF.values())


@dataclass(frozen=True)
class AcnConfig:
    """A compiled neuron: every capacitor value, plus the mapping scale.

    The per-tree node capacitance (ca_pos_fF / ca_neg_fF) includes the
    extracted parasitic of the membrane node, which sits in parallel with
    the ballast.
    """

    n_inputs: int
    tech: TechProfile
    pos: CapacitiveTree
    neg: CapacitiveTree
    k_fF_per_weight: float          # capacitance per unit weight magnitude
    source: NeuronSpec | None = None

    @property
    def ct_pos_fF(self) -> float:
        return self.pos.synapse_total_fF

    @property
    def ct_neg_fF(self) -> float:
        return self.neg.synapse_total_fF

    @property
    def ca_pos_fF(self) -> float:
        return self.ct_pos_fF + self.pos.bias_fF + self.pos.ballast_fF + self.tech.c_parasitic_fF

    @property
    def ca_neg_fF(self) -> float:
        return self.ct_neg_fF + self.neg.bias_fF + self.neg.ballast_fF + self.tech.c_parasitic_fF

    @property
    def total_capacitance_fF(self) -> float:
        """Everything that gets laid out (synapses, bias, ballast; no parasitics)."""
        return (self.ct_pos_fF + self.ct_neg_fF
                + self.pos.bias_fF + self.neg.bias_fF
                + self.pos.ballast_fF + self.neg.ballast_fF)

    def tree_of_input(self, index: int) -> tuple[int, float] | None:
        """(+1/-1, capacitance) for a connected input, None for weight 0."""
        if index in self.pos.synapses_fF:
            return (+1, self.pos.synapses_fF[index])
        if index in self.neg.synapses_fF:
            return (-1, self.neg.synapses_fF[index])
        return None

    def validate(self) -> list[str]:
        """Invariant check; returns human-readable violations (empty = valid)."""
        tech = self.tech
        msgs = []
        seen = set()
        for name, tree in (("positive", self.pos), ("negative", self.neg)):
            for i, c in sorted(tree.synapses_fF.items()):
                if not 0 <= i < self.n_inputs:
                    msgs.append(f"{name} tree references input {i} outside 0..{self.n_inputs - 1}")
                if i in seen:
                    msgs.append(f"input {i} appears in both trees")
                seen.add(i)
                if c < tech.c_min_fF - _EPS_FF:
                    msgs.append(f"synapse capacitor {i} ({c:g} fF) below minimum {tech.c_min_fF:g} fF")
            if tree.bias_fF < tech.c_min_fF - _EPS_FF:
                msgs.append(f"{name} bias capacitor ({tree.bias_fF:g} fF) below minimum")
            if tree.ballast_fF < -_EPS_FF:
                msgs.append(f"{name} ballast capacitor is negative ({tree.ballast_fF:g} fF)")
        imbalance = abs(self.ca_pos_fF - self.ca_neg_fF)
        if imbalance > 2.0 * tech.cap_grid_fF + _EPS_FF:
            msgs.append(f"tree capacitance imbalance {imbalance:g} fF exceeds two grid steps")
        for name, ct, cb, ca in (
            ("positive", self.ct_pos_fF, self.pos.bias_fF, self.ca_pos_fF),
            ("negative", self.ct_neg_fF, self.neg.bias_fF, self.ca_neg_fF),
        ):
            if ca <= 0:
                msgs.append(f"{name} tree has non-positive node capacitance")
                continue
            swing = tech.vmax_V * (ct + cb) / ca
            # quantization of the ballast can overshoot by up to two grid steps
            eps = tech.vmax_V * 2.0 * tech.cap_grid_fF / ca
            if swing > tech.vcut_V + eps + 1e-12:
                msgs.append(
                    f"{name} tree swing {swing * 1e3:.1f} mV exceeds comparator window "
                    f"{tech.vcut_V * 1e3:.1f} mV")
        return msgs

    def to_dict(self) -> dict:
        d = {
            "n_inputs": self.n_inputs,
            "tech": self.tech.to_dict(),
            "k_fF_per_weight": self.k_fF_per_weight,
            "pos_tree": _tree_to_dict(self.pos),
            "neg_tree": _tree_to_dict(self.neg),
            "derived": {
                "ct_pos_fF": self.ct_pos_fF,
                "ct_neg_fF": self.ct_neg_fF,
                "ca_pos_fF": self.ca_pos_fF,
                "ca_neg_fF": self.ca_neg_fF,
                "total_capacitance_fF": self.total_capacitance_fF,
            },
        }
        if self.source is not None:
            d["neuron"] = self.source.to_dict()
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "AcnConfig":
        try:
            config = cls(
                n_inputs=int(data["n_inputs"]),
                tech=TechProfile.from_dict(data["tech"]),
                pos=_tree_from_dict(data["pos_tree"]),
                neg=_tree_from_dict(data["neg_tree"]),
                k_fF_per_weight=float(data["k_fF_per_weight"]),
                source=NeuronSpec.from_dict(data["neuron"]) if "neuron" in data else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"invalid configuration: {exc}") from exc
        derived = data.get("derived")
        if derived:
            _check_derived_block(config, derived)
        problems = config.validate()
        if problems:
            raise FeasibilityError("configuration violates invariants: " + "; ".join(problems))
        return config


def _tree_to_dict(tree: CapacitiveTree) -> dict:
    return {
        "synapses_fF": {str(i): c for i, c in sorted(tree.synapses_fF.items())},
        "bias_fF": tree.bias_fF,
        "ballast_fF": tree.ballast_fF,
        "bias_voltage_V": tree.bias_voltage_V,
    }


def _tree_from_dict(data: dict) -> CapacitiveTree:
    return CapacitiveTree(
        synapses_fF={int(i): float(c) for i, c in data["synapses_fF"].items()},
        bias_fF=float(data["bias_fF"]),
        ballast_fF=float(data["ballast_fF"]),
        bias_voltage_V=float(data.get("bias_voltage_V", 0.0)),
    )


def _check_derived_block(config: AcnConfig, derived: dict) -> None:
    # the derived block is emitted for auditability; a stale copy means the
    # file was edited by hand, so refuse to trust it
    expected = {
        "ct_pos_fF": config.ct_pos_fF,
        "ct_neg_fF": config.ct_neg_fF,
        "ca_pos_fF": config.ca_pos_fF,
        "ca_neg_fF": config.ca_neg_fF,
        "total_capacitance_fF": config.total_capacitance_fF,
    }
    for key, want in expected.items():
        if key in derived and abs(float(derived[key]) - want) > 1e-6 * max(1.0, abs(want)):
            raise ParseError(
                f"derived field {key} = {derived[key]} does not match capacitor list ({want:g})")


# ---------------------------------------------------------------------------
# feasibility reporting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str            # "c_min" | "negative_ballast" | "swing" | "degenerate"
    where: str           # "input 3", "negative tree", ...
    message: str


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "feasible: no violations"
        lines = [f"infeasible: {len(self.violations)} violation(s)"]
        lines += [f"  [{v.kind}] {v.where}: {v.message}" for v in self.violations]
        return "\n".join(lines)


def quantize_capacitance(value_fF: float, tech: TechProfile, role: str = SYNAPSE) -> float:
    """Snap a capacitance to the layout grid (half-grid ties round up).

    Synapse and bias capacitors must come out at or above the manufacturable
    minimum; ballast capacitors may take any non-negative grid value.
    """
    if role not in (SYNAPSE, BIAS, BALLAST):
        raise ValueError(f"unknown capacitor role {role!r}")
    if not math.isfinite(value_fF) or value_fF < 0:
        raise ValueError(f"capacitance to quantize must be finite and >= 0, got {value_fF!r}")
    grid = tech.cap_grid_fF
    q = math.floor(value_fF / grid + 0.5) * grid
    if role in (SYNAPSE, BIAS) and 0 < q < tech.c_min_fF - _EPS_FF:
        raise FeasibilityError(
            f"{role} capacitor {q:g} fF is below the {tech.c_min_fF:g} fF minimum")
    return q


def _mapping_plan(spec: NeuronSpec, tech: TechProfile, ct_total_fF: float):
    """Shared math for map_weights / check_feasibility (no quantization errors raised)."""
    if ct_total_fF <= 0:
        raise ValueError("ct_total_fF must be positive")
    k = ct_total_fF / spec.total_weight
    raw_caps = {i: k * abs(spec.weights[i])
                for i in (*spec.positive_indices, *spec.negative_indices)}
    # bias pair: the tree working against the firing condition carries the
    # extra k*|bias| so that cb_neg - cb_pos equals k*bias
    cb_small = tech.c_min_fF
    cb_large = tech.c_min_fF + k * abs(spec.bias)
    if spec.bias >= 0:
        raw_cb = {"pos": cb_small, "neg": cb_large}
    else:
        raw_cb = {"pos": cb_large, "neg": cb_small}
    return k, raw_caps, raw_cb


def map_weights(spec: NeuronSpec, tech: TechProfile, ct_total_fF: float) -> AcnConfig:
    """Compile a neuron into a capacitor configuration.

    ct_total_fF is the synapse capacitance budget for both trees together;
    it fixes the scale k = ct_total_fF / sum(|w|).
    """
    report = check_feasibility(spec, tech, ct_total_fF)
    if not report.ok:
        raise FeasibilityError(str(report), report.violations)

    k, raw_caps, raw_cb = _mapping_plan(spec, tech, ct_total_fF)
    pos_caps = {i: quantize_capacitance(raw_caps[i], tech, SYNAPSE) for i in spec.positive_indices}
    neg_caps = {i: quantize_capacitance(raw_caps[i], tech, SYNAPSE) for i in spec.negative_indices}
    cb_pos = quantize_capacitance(raw_cb["pos"], tech, BIAS)
    cb_neg = quantize_capacitance(raw_cb["neg"], tech, BIAS)

    ct_pos = sum(pos_caps.values())
    ct_neg = sum(neg_caps.values())
    # ballast solve: pull both trees to a common node capacitance chosen so
    # the fuller tree's peak swing saturates the comparator window
    ca_target = tech.vmax_V * max(ct_pos + cb_pos, ct_neg + cb_neg) / tech.vcut_V
    cd = {}
    for name, ct, cb in (("pos", ct_pos, cb_pos), ("neg", ct_neg, cb_neg)):
        raw = ca_target - ct - cb - tech.c_parasitic_fF
        if raw < -_EPS_FF:
            raise FeasibilityError(
                f"{name} tree ballast solves negative ({raw:.3f} fF); "
                f"parasitics exceed the required ballast")
        cd[name] = quantize_capacitance(max(raw, 0.0), tech, BALLAST)

    config = AcnConfig(
        n_inputs=spec.n,
        tech=tech,
        pos=CapacitiveTree(pos_caps, cb_pos, cd["pos"]),
        neg=CapacitiveTree(neg_caps, cb_neg, cd["neg"]),
        k_fF_per_weight=k,
        source=spec,
    )
    problems = config.validate()
    if problems:
        raise FeasibilityError("mapped configuration violates invariants: " + "; ".join(problems))
    return config


def check_feasibility(spec: NeuronSpec, tech: TechProfile, ct_total_fF: float) -> FeasibilityReport:
    """Dry-run the mapping and report every constraint violation."""
    violations = []
    k, raw_caps, raw_cb = _mapping_plan(spec, tech, ct_total_fF)
    for i in sorted(raw_caps):
        if raw_caps[i] < tech.c_min_fF - _EPS_FF:
            violations.append(Violation(
                "c_min", f"input {i}",
                f"weight {spec.weights[i]:+g} maps to {raw_caps[i]:.2f} fF, "
                f"below the {tech.c_min_fF:g} fF minimum"))
    # quantize what we can to probe the ballast solve
    q = lambda v: math.floor(v / tech.cap_grid_fF + 0.5) * tech.cap_grid_fF
    ct_pos = sum(q(raw_caps[i]) for i in spec.positive_indices)
    ct_neg = sum(q(raw_caps[i]) for i in spec.negative_indices)
    cb_pos, cb_neg = q(raw_cb["pos"]), q(raw_cb["neg"])
    ca_target = tech.vmax_V * max(ct_pos + cb_pos, ct_neg + cb_neg) / tech.vcut_V
    for name, ct, cb in (("positive tree", ct_pos, cb_pos), ("negative tree", ct_neg, cb_neg)):
        raw = ca_target - ct - cb - tech.c_parasitic_fF
        if raw < -_EPS_FF:
            violations.append(Violation(
                "negative_ballast", name,
                f"ballast solves to {raw:.2f} fF (parasitic {tech.c_parasitic_fF:g} fF "
                f"exceeds the required padding)"))
            continue
        ca = ct + cb + q(max(raw, 0.0)) + tech.c_parasitic_fF
        swing = tech.vmax_V * (ct + cb) / ca if ca > 0 else float("inf")
        eps = tech.vmax_V * 2.0 * tech.cap_grid_fF / ca if ca > 0 else 0.0
        if swing > tech.vcut_V + eps + 1e-12:
            violations.append(Violation(
                "swing", name,
                f"peak swing {swing * 1e3:.1f} mV exceeds the "
                f"{tech.vcut_V * 1e3:.1f} mV comparator window"))
    return FeasibilityReport(tuple(violations))


def quantization_margin(spec: NeuronSpec, tech: TechProfile, ct_total_fF: float) -> float:
    """Weighted-sum margin below which grid rounding may flip the output.

    Equals n * cap_grid / k: inputs whose |margin| exceeds this are
    guaranteed to survive the round trip through the capacitor grid.
    """
    k = ct_total_fF / spec.total_weight
    return spec.n * tech.cap_grid_fF / k


def load_config(path: str | Path) -> AcnConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read configuration {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"configuration {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"configuration {path} must hold a JSON object")
    return AcnConfig.from_dict(data)


def save_config(config: AcnConfig, path: str | Path) -> None:
    from .io_utils import atomic_write_text
    atomic_write_text(path, json.dumps(config.to_dict(), indent=2) + "\n")
