"""Command-line surface.

Subcommands mirror the library stages: compile a weight file to a
capacitor config, replay input vectors through the voltage and energy
models, sweep clock frequency or supply, run seeded variation analysis,
verify the shipped tables, and export a behavioral netlist. Reports are
CSV/JSON written atomically; report commands also render a figure next
to the delimited file unless --no-plot is given.

Exit codes: 1 parse/I-O, 2 infeasible design, 3 dimension mismatch,
4 calibration failure, 5 failed verification.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import energy, fixtures, mapper, montecarlo, netlist, threshold, treesim
from .errors import (AcnError, CalibrationError, DimensionError,
                     FeasibilityError, ParseError)
from .io_utils import atomic_write_text, write_csv, write_json
from .neuron import (InputBits, load_neuron, load_tech, parse_input_vector,
                     software_output)
from .treesim import PowerClock

EXIT_PARSE = 1
EXIT_INFEASIBLE = 2
EXIT_DIMENSION = 3
EXIT_CALIBRATION = 4
EXIT_VERIFY = 5

# bad flags and missing arguments are parse failures, not "infeasible design"
click.exceptions.UsageError.exit_code = EXIT_PARSE

_EXIT_BY_ERROR = (
    (FeasibilityError, EXIT_INFEASIBLE),
    (DimensionError, EXIT_DIMENSION),
    (CalibrationError, EXIT_CALIBRATION),
    (ParseError, EXIT_PARSE),
    (AcnError, EXIT_PARSE),
)


def _fail(exc: BaseException):
    click.echo(f"error: {exc}", err=True)
    for klass, code in _EXIT_BY_ERROR:
        if isinstance(exc, klass):
            sys.exit(code)
    sys.exit(EXIT_PARSE)


def _guarded(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (AcnError, OSError, ValueError, json.JSONDecodeError) as exc:
        _fail(exc)


def _load_config(path: str) -> mapper.AcnConfig:
    return _guarded(mapper.load_config, path)


def _read_vectors(path: str, n: int) -> dict[str, InputBits]:
    """One vector per line: optional label, whitespace, then the bits."""
    out: dict[str, InputBits] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) == 1:
            name, bits_text = f"V{len(out) + 1}", parts[0]
        elif len(parts) == 2:
            name, bits_text = parts
        else:
            raise ParseError(f"{path}:{lineno}: expected 'bits' or 'name bits'")
        if name in out:
            raise ParseError(f"{path}:{lineno}: duplicate vector name {name!r}")
        out[name] = parse_input_vector(bits_text, n)
    if not out:
        raise ParseError(f"{path}: no input vectors found")
    return out


def _calibrated_params(params_file: str | None, fixture_file: str | None,
                       pc: PowerClock) -> energy.EnergyParams:
    if params_file is not None:
        payload = json.loads(Path(params_file).read_text(encoding="utf-8"))
        try:
            return energy.EnergyParams(**payload)
        except TypeError as exc:
            raise ParseError(f"{params_file}: {exc}") from None
    table = (fixtures.load_energy_fixture(fixture_file) if fixture_file
             else fixtures.ENERGY_TABLE)
    return energy.calibrate_energy(table, pc)


def _params_options(fn):
    fn = click.option(
        "--params", "params_file", default=None,
        help="Energy parameter JSON; overrides calibration.")(fn)
    return click.option(
        "--fixture", "fixture_file", default=None,
        help="Calibration table CSV; defaults to the shipped one.")(fn)


def _maybe_plot(enabled: bool, render, out_path: str) -> None:
    if not enabled:
        return
    figure = Path(out_path).with_suffix(".png")
    render(figure)
    click.echo(f"figure written to {figure}")


_TL_CHOICE = click.Choice([threshold.IDEAL, threshold.PROPOSED, threshold.CONVENTIONAL])


@click.group()
@click.version_option(package_name="acnsim", prog_name="acnsim")
def main():
    """Capacitive-neuron design compiler, simulator and energy reporter."""


@main.command("map")
@click.argument("weights_file", type=click.Path(exists=False))
@click.argument("tech_file", type=click.Path(exists=False), required=False)
@click.option("--ct", "ct_total", type=float, required=True,
              help="Total synapse capacitance budget (fF).")
@click.option("-o", "--output", default="config.json", show_default=True,
              help="Compiled configuration file.")
def cmd_map(weights_file, tech_file, ct_total, output):
    """Compile a weight file onto the dual capacitive trees."""
    spec = _guarded(load_neuron, weights_file)
    tech = _guarded(load_tech, tech_file) if tech_file else _guarded(
        lambda: fixtures.reference_tech())
    try:
        config = mapper.map_weights(spec, tech, ct_total)
    except FeasibilityError as exc:
        click.echo("infeasible design:", err=True)
        click.echo(str(exc), err=True)
        sys.exit(EXIT_INFEASIBLE)
    except AcnError as exc:
        _fail(exc)
    _guarded(mapper.save_config, config, output)
    click.echo(f"config written to {output}")


@main.command("sim")
@click.argument("config_file")
@click.argument("vectors_file")
@click.option("--tl", "tl_name", type=_TL_CHOICE, default=threshold.IDEAL,
              show_default=True, help="Comparator model deciding the output bit.")
@click.option("--corner", type=click.Choice(fixtures.OFFSET_CORNERS), default=None,
              help="Report the comparator offset at this process corner.")
@click.option("--temp", "temp_c", type=float, default=27.0, show_default=True,
              help="Temperature (C) for the offset columns.")
@click.option("-o", "--output", default="sim.csv", show_default=True)
def cmd_sim(config_file, vectors_file, tl_name, corner, temp_c, output):
    """Membrane voltages and output bits for each input vector."""
    config = _load_config(config_file)
    vectors = _guarded(_read_vectors, vectors_file, config.n_inputs)
    tl = threshold.from_name(tl_name)

    header = ["vector", "Con_p_fF", "Con_m_fF", "CL_fF",
              "vm_p_mV", "vm_m_mV", "vmd_mV", "out_software", "out_tl"]
    offsets = None
    if corner is not None and tl.offsets:
        offsets = tuple(
            _guarded(threshold.offset_lookup, tl, corner, temp_c, direction)
            for direction in (threshold.RISING, threshold.FALLING))
        header += ["offset_rising_mV", "offset_falling_mV"]

    rows = []
    for name, bits in vectors.items():
        state = treesim.tree_capacitances(config, bits)
        vm_p, vm_m = treesim.peak_membrane_voltages(config, bits)
        decision = threshold.decide(tl, vm_p * 1e3, vm_m * 1e3)
        software = ""
        if config.source is not None:
            software = software_output(config.source, bits)
        row = [name, f"{state.con_pos_fF:.1f}", f"{state.con_neg_fF:.1f}",
               f"{treesim.capacitive_load(config, bits):.1f}",
               f"{vm_p * 1e3:.1f}", f"{vm_m * 1e3:.1f}",
               f"{(vm_p - vm_m) * 1e3:.1f}", software, decision.output]
        if offsets is not None:
            row += [f"{offsets[0]:.3f}", f"{offsets[1]:.3f}"]
        rows.append(row)
    write_csv(output, header, rows)
    click.echo(f"{len(rows)} vectors written to {output}")


_ENERGY_HEADER = ["vector", "CL_fF", "f_op_kHz", "E_PCG_fJ", "E_AL_fJ", "E_TL_fJ",
                  "E_ACN_syn_fJ", "E_CCN_fJ", "savings_pct"]


def _energy_row(bd: energy.EnergyBreakdown, savings: float | None = None) -> list:
    if savings is None:
        savings = bd.savings_pct
    return [bd.vector, f"{bd.cl_fF:.1f}", f"{bd.f_op_hz / 1e3:.2f}",
            f"{bd.e_pcg_fJ:.1f}", f"{bd.e_al_fJ:.1f}", f"{bd.e_tl_fJ:.1f}",
            f"{bd.e_acn_syn_fJ:.1f}", f"{bd.e_ccn_fJ:.1f}", f"{savings:.2f}"]


@main.command("energy")
@click.argument("config_file")
@click.argument("vectors_file")
@_params_options
@click.option("--tl", "tl_name", type=_TL_CHOICE, default=threshold.PROPOSED,
              show_default=True)
@click.option("--savings-basis", type=click.Choice(["model", "fixture"]),
              default="model", show_default=True,
              help="Compute the savings column from the model energies, or "
                   "from the calibration table's recorded energy pair for "
                   "vectors named in it.")
@click.option("-o", "--output", default="energy.csv", show_default=True)
@click.option("--plot/--no-plot", default=True, show_default=True,
              help="Render a figure next to the CSV.")
def cmd_energy(config_file, vectors_file, params_file, fixture_file, tl_name,
               savings_basis, output, plot):
    """Per-vector energy breakdown at nominal clock and supply."""
    config = _load_config(config_file)
    vectors = _guarded(_read_vectors, vectors_file, config.n_inputs)
    pc = PowerClock()
    params = _guarded(_calibrated_params, params_file, fixture_file, pc)
    tl = threshold.from_name(tl_name)
    table = _guarded(energy.energy_table, config, vectors, pc, params, tl)

    fixture_table = None
    if savings_basis == "fixture":
        fixture_table = (fixtures.load_energy_fixture(fixture_file)
                         if fixture_file else fixtures.ENERGY_TABLE)
    rows = []
    for bd in table:
        savings = None
        if fixture_table is not None:
            if bd.vector not in fixture_table:
                _fail(CalibrationError(
                    f"vector {bd.vector!r} has no recorded energies to base "
                    f"the savings column on"))
            savings = energy.fixture_savings_pct(fixture_table[bd.vector])
        rows.append(_energy_row(bd, savings))
    write_csv(output, _ENERGY_HEADER, rows)
    click.echo(f"{len(table)} vectors written to {output}")

    def render(path):
        from . import plots
        plots.plot_energy_table(table, path)

    _maybe_plot(plot, render, output)


@main.command("sweep")
@click.argument("config_file")
@click.argument("vectors_file")
@click.option("--axis", type=click.Choice(["freq", "vdd"]), required=True,
              help="Sweep nominal clock frequency or supply voltage.")
@click.option("--start", type=float, default=None,
              help="First axis point (Hz or V).")
@click.option("--stop", type=float, default=None,
              help="Last axis point (Hz or V).")
@click.option("--num", type=int, default=None, help="Number of points.")
@_params_options
@click.option("-o", "--output", default="sweep.csv", show_default=True)
@click.option("--plot/--no-plot", default=True, show_default=True)
def cmd_sweep(config_file, vectors_file, axis, start, stop, num, params_file,
              fixture_file, output, plot):
    """Energy table across clock-frequency or supply-voltage points."""
    config = _load_config(config_file)
    vectors = _guarded(_read_vectors, vectors_file, config.n_inputs)
    pc = PowerClock()
    params = _guarded(_calibrated_params, params_file, fixture_file, pc)

    axis_name = energy.FREQUENCY_AXIS if axis == "freq" else energy.VOLTAGE_AXIS
    if start is None and stop is None and num is None:
        if axis == "freq":
            points = [row.nominal_mhz * 1e6 for row in fixtures.FREQUENCY_TABLE]
        else:
            points = [round(1.8 - 0.1 * i, 1) for i in range(9)]
    elif None in (start, stop, num):
        _fail(ParseError("--start, --stop and --num must be given together"))
    else:
        if num < 1:
            _fail(ParseError("--num must be at least 1"))
        step = (stop - start) / (num - 1) if num > 1 else 0.0
        points = [start + step * i for i in range(num)]

    rows = _guarded(energy.sweep, config, vectors, axis_name, points, pc, params)
    unit_scale = 1e-3 if axis == "freq" else 1.0   # report kHz, not Hz
    header = ["axis", "axis_value"] + _ENERGY_HEADER + ["out_ideal"]
    csv_rows = [[axis, f"{row.axis_value * unit_scale:.6g}"]
                + _energy_row(row.breakdown) + [row.out_ideal] for row in rows]
    write_csv(output, header, csv_rows)
    click.echo(f"{len(rows)} rows written to {output}")

    def render(path):
        from . import plots
        plots.plot_sweep(rows, path)

    _maybe_plot(plot, render, output)


@main.command("mc")
@click.argument("config_file")
@click.argument("vector")
@click.option("--n", "n_draws", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--target", type=click.Choice([montecarlo.ACN_TARGET,
                                             montecarlo.CCN_TARGET]),
              default=montecarlo.ACN_TARGET, show_default=True)
@click.option("--sampler", type=click.Choice([montecarlo.PSEUDORANDOM,
                                              montecarlo.LOW_DISCREPANCY]),
              default=montecarlo.PSEUDORANDOM, show_default=True)
@_params_options
@click.option("-o", "--output", default="mc.json", show_default=True)
@click.option("--samples-csv", default=None,
              help="Also write raw samples with their normal quantiles.")
@click.option("--plot/--no-plot", default=True, show_default=True)
def cmd_mc(config_file, vector, n_draws, seed, target, sampler, params_file,
           fixture_file, output, samples_csv, plot):
    """Seeded variation analysis of one input vector's energy."""
    config = _load_config(config_file)
    bits = _guarded(parse_input_vector, vector, config.n_inputs)
    pc = PowerClock()
    params = _guarded(_calibrated_params, params_file, fixture_file, pc)
    model = _guarded(montecarlo.VariationModel, sampler=sampler, seed=seed)
    samples = _guarded(montecarlo.mc_run, config, bits, model, n_draws, target,
                       params, pc)
    summary = _guarded(montecarlo.mc_stats, samples)

    payload = {"n": summary.n, "seed": seed, "target": target, "vector": vector}
    payload.update(summary.to_dict())
    if not summary.degenerate:
        payload.pop("degenerate")
    write_json(output, payload)
    click.echo(f"summary written to {output}")

    if samples_csv:
        quantiles = montecarlo.normal_quantiles(summary.n)
        order = np.argsort(samples, kind="stable")
        write_csv(samples_csv, ["draw", "energy_fJ", "normal_quantile"],
                  [[int(i), f"{samples[i]:.6f}", f"{quantiles[rank]:.8f}"]
                   for rank, i in enumerate(order)])
        click.echo(f"samples written to {samples_csv}")

    def render(path):
        from . import plots
        plots.plot_mc(samples, summary, path, title=f"{target} {vector}")

    _maybe_plot(plot, render, output)


@main.command("verify")
@click.option("--only", default=None,
              help="Run only checks whose id contains this substring.")
@click.option("-o", "--output", default=None,
              help="Also write the report as JSON.")
def cmd_verify(only, output):
    """Replay the models against every shipped reference table."""
    try:
        report = verify_module().run_verification(only=only)
    except ValueError as exc:
        _fail(ParseError(str(exc)))
    click.echo(report.format_table(), nl=False)
    if output:
        write_json(output, report.to_dict())
        click.echo(f"report written to {output}")
    if not report.passed:
        sys.exit(EXIT_VERIFY)


def verify_module():
    # deferred: verification pulls in the whole stack, most commands don't
    from . import verify
    return verify


@main.command("netlist")
@click.argument("config_file")
@click.option("-o", "--output", default="acn.sp", show_default=True)
def cmd_netlist(config_file, output):
    """Export the compiled network as a behavioral netlist."""
    config = _load_config(config_file)
    text = netlist.export_netlist(config, PowerClock())
    atomic_write_text(output, text)
    click.echo(f"netlist written to {output}")


if __name__ == "__main__":
    main()
