"""Built-in verification: replays the models against every shipped table.

Each check compares freshly computed values with the recorded fixtures
at the tolerance the fixture's resolution supports. The runner never
mutates fixtures; a failing check means the model and the recorded data
disagree, and the report says by how much.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import energy, fixtures, mapper, montecarlo, threshold, treesim
from .neuron import NeuronSpec, TechProfile, parse_input_vector, software_output
from .treesim import PowerClock

# pinned so every run exercises the identical random designs and draws
EQUIVALENCE_SEED = 20260815
MC_SEED = 21
MC_DRAWS = 1000

_RES_FF = 0.05   # half of the energy table's printed 0.1 fF step


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    table_id: str
    description: str
    expected: str
    actual: str
    tolerance: str
    passed: bool
    detail: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "check": self.check_id,
            "table": self.table_id,
            "description": self.description,
            "expected": self.expected,
            "actual": self.actual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "detail": list(self.detail),
        }


@dataclass(frozen=True)
class VerifyReport:
    results: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"pass": self.passed, "checks": [r.to_dict() for r in self.results]}

    def format_table(self) -> str:
        head = ("check", "table", "status", "expected", "actual", "tolerance")
        rows = [head]
        for r in self.results:
            rows.append((r.check_id, r.table_id, "pass" if r.passed else "FAIL",
                         r.expected, r.actual, r.tolerance))
        widths = [max(len(row[i]) for row in rows) for i in range(len(head))]
        lines = []
        for j, row in enumerate(rows):
            lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
            if j == 0:
                lines.append("  ".join("-" * w for w in widths))
        for r in self.results:
            for note in r.detail:
                lines.append(f"    {r.check_id}: {note}")
        verdict = "all checks passed" if self.passed else \
            f"{sum(not r.passed for r in self.results)} check(s) FAILED"
        lines.append(verdict)
        return "\n".join(lines) + "\n"


def _vector_bits(name: str, n: int = 12):
    return parse_input_vector(fixtures.TEST_VECTORS[name], n)


def _check_mapping() -> CheckResult:
    spec = fixtures.reference_neuron()
    cfg = mapper.map_weights(spec, fixtures.reference_tech(),
                             fixtures.REFERENCE_CT_TOTAL_FF)
    bad: list[str] = []
    worst_syn = 0.0
    for i, want in fixtures.REFERENCE_SYNAPSES_FF.items():
        placed = cfg.tree_of_input(i)
        got = placed[1] if placed else 0.0
        worst_syn = max(worst_syn, abs(got - want))
        if abs(got - want) > 1.0:
            bad.append(f"synapse {i}: {got:.1f} fF vs recorded {want:.1f} fF")
    for label, got, want, tol in (
            ("bias+", cfg.pos.bias_fF, fixtures.REFERENCE_CB_FF[0], 1.0),
            ("bias-", cfg.neg.bias_fF, fixtures.REFERENCE_CB_FF[1], 1.0),
            ("ballast+", cfg.pos.ballast_fF, fixtures.REFERENCE_CD_FF[0], 5.0),
            ("ballast-", cfg.neg.ballast_fF, fixtures.REFERENCE_CD_FF[1], 5.0)):
        if abs(got - want) > tol:
            bad.append(f"{label}: {got:.1f} fF vs recorded {want:.1f} fF (tol {tol:g})")
    return CheckResult(
        "c01-table3-map", "table3", "compiled capacitors match the recorded design",
        expected="16 capacitors at recorded values",
        actual=f"max synapse deviation {worst_syn:.2f} fF, "
               f"ballast {cfg.pos.ballast_fF:.0f}/{cfg.neg.ballast_fF:.0f} fF",
        tolerance="synapse/bias 1 fF, ballast 5 fF",
        passed=not bad, detail=tuple(bad))


def _check_voltages() -> CheckResult:
    cfg = fixtures.reference_config()
    ideal = threshold.TlModel.ideal()
    bad: list[str] = []
    worst = 0.0
    for name, row in fixtures.VOLTAGE_TABLE.items():
        bits = _vector_bits(name)
        vm_p, vm_m = treesim.peak_membrane_voltages(cfg, bits)
        vm_p_mV, vm_m_mV = vm_p * 1e3, vm_m * 1e3
        worst = max(worst, abs(vm_p_mV - row.vm_p_mV), abs(vm_m_mV - row.vm_m_mV))
        if abs(vm_p_mV - row.vm_p_mV) > 1.0 or abs(vm_m_mV - row.vm_m_mV) > 1.0:
            bad.append(f"{name}: computed {vm_p_mV:.1f}/{vm_m_mV:.1f} mV vs "
                       f"recorded {row.vm_p_mV:.1f}/{row.vm_m_mV:.1f} mV")
        out = threshold.decide(ideal, vm_p_mV, vm_m_mV).output
        if out != row.out_ideal:
            bad.append(f"{name}: ideal output {out} vs recorded {row.out_ideal}")
    return CheckResult(
        "c02-table4-model", "table4", "membrane voltages and sign outputs",
        expected="16/16 voltages and outputs",
        actual=f"max voltage deviation {worst:.2f} mV, {len(bad)} mismatch(es)",
        tolerance="1 mV", passed=not bad, detail=tuple(bad))


def _check_hardware_outputs() -> CheckResult:
    cfg = fixtures.reference_config()
    models = (("proposed", threshold.TlModel.proposed(), lambda r: r.out_proposed),
              ("conventional", threshold.TlModel.conventional(), lambda r: r.out_conventional))
    bad: list[str] = []
    for label, model, pick in models:
        for name, row in fixtures.VOLTAGE_TABLE.items():
            vm_p, vm_m = treesim.peak_membrane_voltages(cfg, _vector_bits(name))
            out = threshold.decide(model, vm_p * 1e3, vm_m * 1e3).output
            if out != pick(row):
                bad.append(f"{name} ({label}): output {out} vs recorded {pick(row)}")
    return CheckResult(
        "c03-table4-hardware", "table4", "comparator outputs at both decision thresholds",
        expected="32/32 outputs (both designs)",
        actual=f"{32 - len(bad)}/32 match",
        tolerance="exact", passed=not bad, detail=tuple(bad))


def _check_loads() -> CheckResult:
    cfg = fixtures.reference_config()
    bad: list[str] = []
    worst = 0.0
    for name, row in fixtures.ENERGY_TABLE.items():
        got = treesim.capacitive_load(cfg, _vector_bits(name))
        worst = max(worst, abs(got - row.cl_fF))
        if abs(got - row.cl_fF) > 0.5:
            bad.append(f"{name}: load {got:.2f} fF vs recorded {row.cl_fF:.1f} fF")
    return CheckResult(
        "c04-table5-loads", "table5", "per-vector clock loading",
        expected="16/16 loads", actual=f"max deviation {worst:.3f} fF",
        tolerance="0.5 fF", passed=not bad, detail=tuple(bad))


def _achievable_on_sums(tree: mapper.CapacitiveTree) -> set[float]:
    sums = {0.0}
    for c in tree.synapses_fF.values():
        sums |= {s + c for s in sums}
    return {s + tree.bias_fF for s in sums}


def _check_maximizer() -> CheckResult:
    cfg = fixtures.reference_config()
    best_load = -1.0
    best_bits = None
    for bits in itertools.product((0, 1), repeat=cfg.n_inputs):
        load = treesim.capacitive_load(cfg, bits)
        if load > best_load:
            best_load, best_bits = load, bits
    search = treesim.max_load_search(cfg)
    bad: list[str] = []
    if abs(search.load_fF - best_load) > 1e-9:
        bad.append(f"tree search {search.load_fF:.4f} fF != brute force {best_load:.4f} fF")
    state = treesim.tree_capacitances(cfg, best_bits)
    for label, con, ca, tree in (
            ("positive", state.con_pos_fF, cfg.ca_pos_fF, cfg.pos),
            ("negative", state.con_neg_fF, cfg.ca_neg_fF, cfg.neg)):
        nearest = min(_achievable_on_sums(tree), key=lambda s: abs(s - ca / 2.0))
        if abs(con - nearest) > 1e-9:
            bad.append(f"{label} tree: argmax on-capacitance {con:.1f} fF is not the "
                       f"achievable sum nearest C_A/2 ({nearest:.1f} fF)")
    recorded = fixtures.ENERGY_TABLE[fixtures.MAX_LOAD_VECTOR].cl_fF
    if best_load < recorded - _RES_FF:
        bad.append(f"global max {best_load:.4f} fF below recorded maximum-load "
                   f"vector ({recorded:.1f} fF)")
    # the argmax is a tie set (equal-valued capacitors); the recorded
    # vector must attain the maximum, not be its unique witness
    recorded_load = treesim.capacitive_load(cfg, _vector_bits(fixtures.MAX_LOAD_VECTOR))
    if abs(recorded_load - best_load) > 1e-9:
        bad.append(f"recorded maximum-load vector reaches {recorded_load:.4f} fF, "
                   f"not the global max {best_load:.4f} fF")
    return CheckResult(
        "c05-maximizer", "table5", "worst-case load search over all 4096 inputs",
        expected=f"argmax at C_A/2 per tree, max >= {recorded:.1f} fF",
        actual=f"global max {best_load:.2f} fF",
        tolerance=f"{_RES_FF:g} fF (fixture resolution)",
        passed=not bad, detail=tuple(bad))


def _check_frequency() -> CheckResult:
    pc = PowerClock()
    row = next(r for r in fixtures.FREQUENCY_TABLE if r.nominal_mhz == 1.0)
    max_cl = fixtures.ENERGY_TABLE[fixtures.MAX_LOAD_VECTOR].cl_fF
    f_loaded = treesim.operating_frequency(pc, max_cl)
    f_zero = treesim.operating_frequency(pc, 0.0)
    rel = abs(f_loaded - row.operating_mhz * 1e6) / (row.operating_mhz * 1e6)
    droop = 100.0 * (1.0 - f_loaded / f_zero)
    bad: list[str] = []
    if rel > 0.015:
        bad.append(f"loaded frequency {f_loaded / 1e3:.2f} kHz is {100 * rel:.2f}% from "
                   f"the recorded {row.operating_mhz * 1e3:.1f} kHz")
    if not 1.5 <= droop <= 2.5:
        bad.append(f"droop {droop:.2f}% outside 1.5..2.5%")
    return CheckResult(
        "c06-frequency", "table6", "loaded clock frequency and droop",
        expected=f"{row.operating_mhz * 1e3:.1f} kHz (+-1.5%), droop 1.5..2.5%",
        actual=f"{f_loaded / 1e3:.2f} kHz, droop {droop:.2f}%",
        tolerance="1.5% / droop band", passed=not bad, detail=tuple(bad))


def _check_energy_model() -> CheckResult:
    cfg = fixtures.reference_config()
    pc = PowerClock()
    params = energy.calibrate_energy(fixtures.ENERGY_TABLE, pc)
    tl = threshold.TlModel.ideal()
    bad: list[str] = []
    worst_rel = 0.0
    for name, row in fixtures.ENERGY_TABLE.items():
        bd = energy.total_energy(cfg, _vector_bits(name), pc, params, tl=tl, label=name)
        got = bd.e_acn_syn_fJ
        if name in (fixtures.ALL_ZERO_VECTOR, fixtures.MAX_LOAD_VECTOR):
            if abs(got - row.acn_fJ) > 0.05:
                bad.append(f"{name}: anchor energy {got:.3f} fJ vs recorded "
                           f"{row.acn_fJ:.1f} fJ (must reproduce)")
            continue
        rel = abs(got - row.acn_fJ) / row.acn_fJ
        worst_rel = max(worst_rel, rel)
        if rel > 0.35:
            bad.append(f"{name}: model {got:.1f} fJ vs recorded {row.acn_fJ:.1f} fJ "
                       f"({100 * rel:.1f}% off)")
    for name in fixtures.ENERGY_TABLE:
        bd = energy.total_energy(cfg, _vector_bits(name), pc, params, tl=tl, label=name)
        if bd.savings_pct < 70.0:
            bad.append(f"{name}: model savings {bd.savings_pct:.1f}% below 70%")
        if bd.cl_fF > 400.0 and bd.savings_pct < 90.0:
            bad.append(f"{name}: model savings {bd.savings_pct:.1f}% below 90% "
                       f"at {bd.cl_fF:.0f} fF load")
    return CheckResult(
        "c07-energy-model", "table5", "calibrated energies: anchors, band, savings floors",
        expected="anchors exact, others within 35%, savings >=70% (>=90% above 400 fF)",
        actual=f"max non-anchor deviation {100 * worst_rel:.1f}%",
        tolerance="0.05 fJ anchors / 35% band",
        passed=not bad, detail=tuple(bad))


def _check_energy_fixture() -> CheckResult:
    bad: list[str] = []
    worst = 0.0
    for name, row in fixtures.ENERGY_TABLE.items():
        implied = energy.fixture_savings_pct(row)
        dev = abs(implied - row.savings_pct)
        worst = max(worst, dev)
        if dev > 0.1:
            bad.append(f"{name}: recorded energies imply {implied:.3f}% savings, "
                       f"savings column prints {row.savings_pct:.1f}%")
    return CheckResult(
        "c07-energy-fixture", "table5", "savings column consistent with its energy columns",
        expected="16/16 within 0.1 points",
        actual=f"max inconsistency {worst:.3f} points",
        tolerance="0.1 points", passed=not bad, detail=tuple(bad))


def _check_offsets() -> CheckResult:
    table = fixtures.load_offset_table()
    models = {"proposed": threshold.TlModel.proposed(),
              "conventional": threshold.TlModel.conventional()}
    bad: list[str] = []
    for (design, corner, temp, direction), want in table.items():
        got = threshold.offset_lookup(models[design], corner, temp, direction)
        if got != want:
            bad.append(f"{design}/{corner}/{temp:g}C/{direction}: {got} vs {want}")
    for corner in fixtures.OFFSET_CORNERS:
        for temp in fixtures.OFFSET_TEMPS_C:
            prop = threshold.offset_lookup(models["proposed"], corner, temp, "rising")
            conv = threshold.offset_lookup(models["conventional"], corner, temp, "rising")
            if not abs(prop) < abs(conv):
                bad.append(f"{corner}/{temp:g}C: proposed rising {prop} mV not below "
                           f"conventional {conv} mV")
    peak = max(abs(v) for (d, *_), v in table.items() if d == "proposed")
    if peak > 9.01:
        bad.append(f"proposed peak offset {peak} mV exceeds 9.01 mV")
    return CheckResult(
        "c08-offset-tables", "table1-2", "offset lookup and design-margin properties",
        expected="60/60 bit-exact, proposed < conventional, peak <= 9.01 mV",
        actual=f"peak proposed offset {peak:.3f} mV, {len(bad)} issue(s)",
        tolerance="exact", passed=not bad, detail=tuple(bad))


def random_feasible_neuron(rng: np.random.Generator) -> tuple[NeuronSpec, TechProfile, float]:
    """A random design sized so every synapse clears the minimum capacitor."""
    tech = TechProfile(c_parasitic_fF=0.0)
    while True:
        n = int(rng.integers(1, 9))
        weights = rng.uniform(-1.0, 1.0, size=n)
        if min(abs(weights)) < 1e-3:     # keep the capacitance budget sane
            continue
        bias = float(rng.uniform(-0.5, 0.5))
        spec = NeuronSpec(weights=tuple(weights), bias=bias)
        ct_total = spec.total_weight * tech.c_min_fF / min(abs(weights)) * 1.05
        return spec, tech, ct_total


def _check_equivalence() -> CheckResult:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(EQUIVALENCE_SEED)))
    ideal = threshold.TlModel.ideal()
    disagreements: list[str] = []
    checked = 0
    for _ in range(100):
        spec, tech, ct_total = random_feasible_neuron(rng)
        cfg = mapper.map_weights(spec, tech, ct_total)
        delta = mapper.quantization_margin(spec, tech, ct_total)
        for bits in itertools.product((0, 1), repeat=spec.n):
            margin = spec.margin(bits)
            if abs(margin) <= delta:
                continue
            checked += 1
            vm_p, vm_m = treesim.peak_membrane_voltages(cfg, bits)
            hw = threshold.decide(ideal, vm_p * 1e3, vm_m * 1e3).output
            sw = software_output(spec, bits)
            if hw != sw:
                disagreements.append(
                    f"weights {np.round(spec.weights, 3).tolist()} bias {spec.bias:.3f} "
                    f"input {''.join(map(str, bits))}: software {sw}, hardware {hw} "
                    f"(margin {margin:.4f}, guard {delta:.4f})")
    return CheckResult(
        "c09-equivalence", "generated", "compiled hardware agrees with the weighted-sum rule",
        expected="0 disagreements above the quantization guard",
        actual=f"{len(disagreements)} disagreement(s) in {checked} decisive vectors "
               f"across 100 designs",
        tolerance="margin guard only",
        passed=not disagreements, detail=tuple(disagreements[:8]))


def _check_montecarlo() -> CheckResult:
    cfg = fixtures.reference_config()
    pc = PowerClock()
    params = energy.calibrate_energy(fixtures.ENERGY_TABLE, pc)
    bits = _vector_bits(fixtures.MAX_LOAD_VECTOR)
    model = montecarlo.VariationModel(seed=MC_SEED)
    acn = montecarlo.mc_run(cfg, bits, model, MC_DRAWS, montecarlo.ACN_TARGET, params, pc)
    rerun = montecarlo.mc_run(cfg, bits, model, MC_DRAWS, montecarlo.ACN_TARGET, params, pc)
    ccn = montecarlo.mc_run(cfg, bits, model, MC_DRAWS, montecarlo.CCN_TARGET, params, pc)
    s_acn, s_ccn = montecarlo.mc_stats(acn), montecarlo.mc_stats(ccn)
    bad: list[str] = []
    if not np.array_equal(acn, rerun):
        bad.append("rerun with the same seed produced different samples")
    if not s_acn.skewness > 0.5:
        bad.append(f"adiabatic skewness {s_acn.skewness:.3f} not above 0.5")
    if not s_acn.qq_corr < 0.99:
        bad.append(f"adiabatic qq correlation {s_acn.qq_corr:.4f} not below 0.99")
    if s_acn.classified_normal:
        bad.append("adiabatic tail misclassified as normal")
    if not abs(s_ccn.skewness) < 0.3:
        bad.append(f"benchmark skewness {s_ccn.skewness:.3f} not within 0.3")
    if not (s_ccn.qq_corr > 0.99 and s_ccn.classified_normal):
        bad.append(f"benchmark qq correlation {s_ccn.qq_corr:.4f} not above 0.99")
    if not s_acn.cv > s_ccn.cv:
        bad.append(f"adiabatic cv {s_acn.cv:.2f}% not above benchmark {s_ccn.cv:.2f}%")
    nominal_ccn = energy.total_energy(cfg, bits, pc, params).e_ccn_fJ
    if float(np.max(acn)) >= nominal_ccn:
        bad.append(f"an adiabatic tail sample {np.max(acn):.1f} fJ reached the nominal "
                   f"benchmark energy {nominal_ccn:.1f} fJ")
    return CheckResult(
        "c10-montecarlo", "generated", "variation shape: skewed adiabatic, normal benchmark",
        expected="skew>0.5/qq<0.99 vs |skew|<0.3/qq>0.99, cv ordering, reruns identical",
        actual=f"skew {s_acn.skewness:.2f}/{s_ccn.skewness:.2f}, "
               f"qq {s_acn.qq_corr:.4f}/{s_ccn.qq_corr:.4f}, "
               f"cv {s_acn.cv:.2f}%/{s_ccn.cv:.2f}%",
        tolerance="shape thresholds", passed=not bad, detail=tuple(bad))


def _check_voltage_sweep() -> CheckResult:
    cfg = fixtures.reference_config()
    pc = PowerClock()
    params = energy.calibrate_energy(fixtures.ENERGY_TABLE, pc)
    points = [round(1.8 - 0.1 * i, 1) for i in range(9)]
    vectors = {name: _vector_bits(name) for name in ("TV4", "TV8", "TV13")}
    rows = energy.sweep(cfg, vectors, energy.VOLTAGE_AXIS, points, pc, params)
    bad: list[str] = []
    outputs: dict[str, set[int]] = {}
    floor: dict[str, float] = {}
    for row in rows:
        name = row.breakdown.vector
        sav = row.breakdown.savings_pct
        floor[name] = min(floor.get(name, 100.0), sav)
        outputs.setdefault(name, set()).add(row.out_ideal)
        if name in ("TV4", "TV13") and sav < 90.0:
            bad.append(f"{name} at {row.axis_value:.1f} V: savings {sav:.2f}% below 90%")
        if name == "TV8" and not 60.0 <= sav <= 80.0:
            bad.append(f"TV8 at {row.axis_value:.1f} V: savings {sav:.2f}% outside 60..80%")
    for name, outs in outputs.items():
        if len(outs) != 1:
            bad.append(f"{name}: output bit changed across the sweep")
    return CheckResult(
        "c11-voltage-sweep", "table7", "savings floors and functionality under supply scaling",
        expected="TV4/TV13 >=90% at every step, TV8 within 60..80%, outputs constant",
        actual=f"minimum savings TV4 {floor.get('TV4', 0):.2f}%, "
               f"TV13 {floor.get('TV13', 0):.2f}%, TV8 {floor.get('TV8', 0):.2f}%",
        tolerance="absolute floors", passed=not bad, detail=tuple(bad))


_CHECKS: tuple[tuple[str, Callable[[], CheckResult]], ...] = (
    ("c01-table3-map", _check_mapping),
    ("c02-table4-model", _check_voltages),
    ("c03-table4-hardware", _check_hardware_outputs),
    ("c04-table5-loads", _check_loads),
    ("c05-maximizer", _check_maximizer),
    ("c06-frequency", _check_frequency),
    ("c07-energy-model", _check_energy_model),
    ("c07-energy-fixture", _check_energy_fixture),
    ("c08-offset-tables", _check_offsets),
    ("c09-equivalence", _check_equivalence),
    ("c10-montecarlo", _check_montecarlo),
    ("c11-voltage-sweep", _check_voltage_sweep),
)


def check_ids() -> tuple[str, ...]:
    return tuple(cid for cid, _ in _CHECKS)


def run_verification(only: str | None = None) -> VerifyReport:
    """Run every check, or the subset whose id contains `only`."""
    selected = [(cid, fn) for cid, fn in _CHECKS if not only or only in cid]
    if only and not selected:
        raise ValueError(f"no check id contains {only!r}; known: {', '.join(check_ids())}")
    return VerifyReport(results=tuple(fn() for _, fn in selected))
