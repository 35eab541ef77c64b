"""Threshold-logic stage: clocked comparator plus latch.

Two comparator designs are modeled. Decisions use a single calibrated
threshold on the membrane differential; the corner/temperature offset
tables ship as data for lookup and characterization (the offset stimulus
is a slow ramp, so the tables are not applied inside the peak-sampling
decision itself).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import fixtures

IDEAL = "ideal"
PROPOSED = "proposed"
CONVENTIONAL = "conventional"

RISING = "rising"
FALLING = "falling"

# calibrated decision thresholds on the membrane differential
THETA_PROPOSED_MV = 5.0
THETA_CONVENTIONAL_MV = 20.0

_OffsetKey = tuple[str, float, str]  # (corner, temp_C, direction)


@dataclass(frozen=True)
class TlModel:
    variant: str
    theta_mV: float
    c_tl_fF: float = 100.0          # comparator + latch switched load
    offsets: Mapping[_OffsetKey, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in (IDEAL, PROPOSED, CONVENTIONAL):
            raise ValueError(f"unknown threshold-logic variant {self.variant!r}")
        if self.c_tl_fF < 0:
            raise ValueError("c_tl_fF cannot be negative")
        object.__setattr__(self, "offsets", dict(self.offsets))

    @classmethod
    def ideal(cls) -> "TlModel":
        """Zero-offset comparator: fires on any non-negative differential."""
        return cls(variant=IDEAL, theta_mV=0.0)

    @classmethod
    def proposed(cls, theta_mV: float = THETA_PROPOSED_MV, c_tl_fF: float = 100.0) -> "TlModel":
        return cls(variant=PROPOSED, theta_mV=theta_mV, c_tl_fF=c_tl_fF,
                   offsets=_design_offsets(PROPOSED))

    @classmethod
    def conventional(cls, theta_mV: float = THETA_CONVENTIONAL_MV,
                     c_tl_fF: float = 100.0) -> "TlModel":
        return cls(variant=CONVENTIONAL, theta_mV=theta_mV, c_tl_fF=c_tl_fF,
                   offsets=_design_offsets(CONVENTIONAL))


def from_name(name: str) -> TlModel:
    factory = {IDEAL: TlModel.ideal, PROPOSED: TlModel.proposed,
               CONVENTIONAL: TlModel.conventional}.get(name)
    if factory is None:
        raise ValueError(f"unknown threshold-logic variant {name!r}")
    return factory()


def _design_offsets(design: str) -> dict[_OffsetKey, float]:
    return {(corner, temp, direction): mv
            for (d, corner, temp, direction), mv in fixtures.load_offset_table().items()
            if d == design}


@dataclass(frozen=True)
class TlDecision:
    output: int
    v_md_mV: float
    limiting_offset_mV: float   # threshold the differential was held against


def offset_lookup(model: TlModel, corner: str, temp_c: float, direction: str) -> float:
    """Input-referred offset (mV) at a corner/temperature/clock direction.

    Exact grid points return the recorded value bit-exactly; temperatures
    between grid points interpolate linearly. No extrapolation: the grid
    spans -55..125 C.
    """
    if not model.offsets:
        raise ValueError(f"{model.variant} threshold logic has no offset data")
    if corner not in fixtures.OFFSET_CORNERS:
        raise ValueError(f"unknown corner {corner!r}, expected one of {fixtures.OFFSET_CORNERS}")
    if direction not in (RISING, FALLING):
        raise ValueError(f"direction must be '{RISING}' or '{FALLING}', got {direction!r}")
    temps = fixtures.OFFSET_TEMPS_C
    if not temps[0] <= temp_c <= temps[-1]:
        raise ValueError(f"temperature {temp_c:g} C outside the {temps[0]:g}..{temps[-1]:g} C grid")
    if temp_c in temps:
        return model.offsets[(corner, float(temp_c), direction)]
    hi = next(t for t in temps if t > temp_c)
    lo = temps[temps.index(hi) - 1]
    y_lo = model.offsets[(corner, lo, direction)]
    y_hi = model.offsets[(corner, hi, direction)]
    return y_lo + (y_hi - y_lo) * (temp_c - lo) / (hi - lo)


def decide(model: TlModel, vm_p_mV: float, vm_m_mV: float) -> TlDecision:
    """Latch the comparator at the clock crest.

    Fires when the differential clears the model's decision threshold;
    the ideal variant therefore fires on ties (threshold zero).
    """
    v_md = vm_p_mV - vm_m_mV
    return TlDecision(
        output=1 if v_md >= model.theta_mV else 0,
        v_md_mV=v_md,
        limiting_offset_mV=model.theta_mV,
    )


def tl_energy_fJ(model: TlModel, vdd_V: float) -> float:
    """Per-decision comparator energy: full-swing CV^2 on its switched load."""
    if vdd_V < 0:
        raise ValueError("supply voltage cannot be negative")
    return model.c_tl_fF * vdd_V * vdd_V
