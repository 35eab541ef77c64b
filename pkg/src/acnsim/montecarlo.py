"""Seeded variation engine over capacitors and switch resistance.

Every draw is generated counter-based from (seed, draw index), so a
parallel evaluation produces the exact sample set of a serial one, and
rerunning any single draw is cheap. Capacitors share a per-draw global
factor plus independent per-capacitor mismatch; the switch resistance
takes a lognormal factor, which is what skews the adiabatic energy tail
to the right.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats
from scipy.special import ndtri

from . import threshold
from .energy import EnergyParams, total_energy
from .mapper import AcnConfig, CapacitiveTree
from .neuron import InputBits
from .treesim import PowerClock

PSEUDORANDOM = "pseudorandom"
LOW_DISCREPANCY = "low-discrepancy"

ACN_TARGET = "acn"
CCN_TARGET = "ccn"

_MAX_RESAMPLE = 100
_LDS_RETRY_STRIDE = 1 << 20
_QQ_NORMAL_MIN = 0.99


@dataclass(frozen=True)
class VariationModel:
    sigma_cap_mismatch: float = 0.01   # per capacitor, relative
    sigma_cap_global: float = 0.03     # shared per draw, relative
    sigma_rsyn: float = 0.15           # per draw, lognormal
    sampler: str = PSEUDORANDOM
    seed: int = 0

    def __post_init__(self):
        if min(self.sigma_cap_mismatch, self.sigma_cap_global, self.sigma_rsyn) < 0:
            raise ValueError("variation sigmas cannot be negative")
        if self.sampler not in (PSEUDORANDOM, LOW_DISCREPANCY):
            raise ValueError(f"unknown sampler {self.sampler!r}")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


def _capacitor_values(config: AcnConfig) -> list[float]:
    """Flat deterministic ordering: synapses by index per tree, bias, ballast."""
    out = []
    for tree in (config.pos, config.neg):
        out.extend(tree.synapses_fF[i] for i in sorted(tree.synapses_fF))
        out.append(tree.bias_fF)
        out.append(tree.ballast_fF)
    return out


def _rebuild_tree(tree: CapacitiveTree, values: list[float]) -> CapacitiveTree:
    n = len(tree.synapses_fF)
    synapses = dict(zip(sorted(tree.synapses_fF), values[:n]))
    return CapacitiveTree(synapses, bias_fF=values[n], ballast_fF=values[n + 1],
                          bias_voltage_V=tree.bias_voltage_V)


def _standard_normals(model: VariationModel, draw_index: int, attempt: int,
                      count: int) -> np.ndarray:
    if model.sampler == PSEUDORANDOM:
        seq = np.random.SeedSequence((model.seed, draw_index, attempt))
        return np.random.Generator(np.random.Philox(seq)).standard_normal(count)
    sampler = stats.qmc.Sobol(d=count, scramble=True, seed=model.seed)
    skip = draw_index + attempt * _LDS_RETRY_STRIDE
    if skip:   # scipy rejects a zero-length fast-forward
        sampler.fast_forward(skip)
    with warnings.catch_warnings():
        # single-point reads trade the balance property for counter addressing
        warnings.simplefilter("ignore", UserWarning)
        u = sampler.random(1)[0]
    eps = np.finfo(float).tiny
    return ndtri(np.clip(u, eps, 1.0 - eps))


def sample_variation(config: AcnConfig, params: EnergyParams,
                     model: VariationModel, draw_index: int,
                     ) -> tuple[AcnConfig, EnergyParams]:
    """One perturbed (config, params) pair, reproducible from the indices."""
    nominal = _capacitor_values(config)
    n_caps = len(nominal)
    for attempt in range(_MAX_RESAMPLE):
        z = _standard_normals(model, draw_index, attempt, n_caps + 2)
        g = 1.0 + model.sigma_cap_global * z[0]
        factors = g * (1.0 + model.sigma_cap_mismatch * z[1:1 + n_caps])
        perturbed = [c * f for c, f in zip(nominal, factors)]
        if any(c <= 0.0 for c in perturbed):
            continue
        n_pos = len(config.pos.synapses_fF) + 2
        cfg = replace(config,
                      pos=_rebuild_tree(config.pos, perturbed[:n_pos]),
                      neg=_rebuild_tree(config.neg, perturbed[n_pos:]))
        r_factor = math.exp(model.sigma_rsyn * z[-1])
        return cfg, replace(params, r_syn_ohm=params.r_syn_ohm * r_factor)
    raise RuntimeError(
        f"draw {draw_index} kept producing non-positive capacitors after "
        f"{_MAX_RESAMPLE} attempts; variation sigmas are implausibly large")


def mc_run(config: AcnConfig, bits: InputBits, model: VariationModel, n: int,
           target: str, params: EnergyParams, pc: PowerClock | None = None,
           tl: threshold.TlModel | None = None) -> np.ndarray:
    """n per-operation synapse energies (fJ) under variation, in draw order."""
    if n < 1:
        raise ValueError("need at least one draw")
    if target not in (ACN_TARGET, CCN_TARGET):
        raise ValueError(f"unknown target {target!r}; expected "
                         f"'{ACN_TARGET}' or '{CCN_TARGET}'")
    pc = pc or PowerClock()
    samples = np.empty(n)
    for i in range(n):
        cfg, prm = sample_variation(config, params, model, i)
        bd = total_energy(cfg, bits, pc, prm, tl=tl)
        samples[i] = bd.e_acn_syn_fJ if target == ACN_TARGET else bd.e_ccn_fJ
    return samples


@dataclass(frozen=True)
class McSummary:
    n: int
    mean_fJ: float
    std_fJ: float
    cv: float                  # percent
    skewness: float            # bias-corrected sample skewness
    qq_corr: float             # sorted samples vs normal quantiles
    classified_normal: bool
    degenerate: bool = False   # zero spread: shape statistics meaningless

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean_fJ": self.mean_fJ,
            "std_fJ": self.std_fJ,
            "cv": self.cv,
            "skewness": self.skewness,
            "qq_corr": self.qq_corr,
            "classified_normal": self.classified_normal,
            "degenerate": self.degenerate,
        }


def normal_quantiles(n: int) -> np.ndarray:
    """Inverse normal CDF at the plotting positions (i - 0.5) / n."""
    return ndtri((np.arange(1, n + 1) - 0.5) / n)


def mc_stats(samples: np.ndarray) -> McSummary:
    """Distribution summary with a correlation-based normality call."""
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.size < 8:
        raise ValueError("shape statistics need at least 8 samples")
    n = samples.size
    mean = float(np.mean(samples))
    std = float(np.std(samples, ddof=1))
    if std == 0.0:
        return McSummary(n=n, mean_fJ=mean, std_fJ=0.0, cv=0.0, skewness=0.0,
                         qq_corr=0.0, classified_normal=False, degenerate=True)
    qq = float(np.corrcoef(np.sort(samples), normal_quantiles(n))[0, 1])
    return McSummary(
        n=n,
        mean_fJ=mean,
        std_fJ=std,
        cv=100.0 * std / mean,
        skewness=float(stats.skew(samples, bias=False)),
        qq_corr=qq,
        classified_normal=qq >= _QQ_NORMAL_MIN,
    )
