import csv
import json
import subprocess
import sys

from acnsim import fixtures, mapper

CLI = [sys.executable, "-m", "acnsim"]


def run_cli(*args, cwd=None):
    return subprocess.run(CLI + [str(a) for a in args],
                          capture_output=True, text=True, cwd=cwd)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_ref_config(tmp_path):
    path = tmp_path / "ref_config.json"
    mapper.save_config(fixtures.reference_config(), path)
    return path


def test_help_lists_subcommands():
    res = run_cli("--help")
    assert res.returncode == 0
    for name in ("map", "sim", "energy", "sweep", "mc", "verify", "netlist"):
        assert name in res.stdout


def test_map_reproduces_recorded_design(cli_files):
    out = cli_files["dir"] / "cfg.json"
    res = run_cli("map", cli_files["weights"], cli_files["tech"],
                  "--ct", 2115, "-o", out)
    assert res.returncode == 0, res.stderr
    data = json.loads(out.read_text())
    for idx, want in fixtures.REFERENCE_SYNAPSES_FF.items():
        tree = "pos_tree" if fixtures.REFERENCE_WEIGHTS[idx] > 0 else "neg_tree"
        assert abs(data[tree]["synapses_fF"][str(idx)] - want) <= 1.0
    assert abs(data["pos_tree"]["bias_fF"] - 35.0) <= 1.0
    assert abs(data["neg_tree"]["bias_fF"] - 56.0) <= 1.0
    assert abs(data["pos_tree"]["ballast_fF"] - 1159.0) <= 5.0
    assert abs(data["neg_tree"]["ballast_fF"] - 543.0) <= 5.0
    # both trees land on the same node capacitance
    assert abs(data["derived"]["ca_pos_fF"] - data["derived"]["ca_neg_fF"]) <= 2.0


def test_map_uses_builtin_tech_when_omitted(cli_files):
    out = cli_files["dir"] / "cfg.json"
    res = run_cli("map", cli_files["weights"], "--ct", 2115, "-o", out)
    assert res.returncode == 0, res.stderr
    assert out.exists()


def test_map_infeasible_design_exits_2(cli_files):
    bad = cli_files["dir"] / "bad.json"
    bad.write_text(json.dumps({"weights": [1.0, 0.0001], "bias": 0.0}))
    res = run_cli("map", bad, "--ct", 1000, "-o", cli_files["dir"] / "x.json")
    assert res.returncode == 2
    assert "infeasible" in res.stderr
    assert "input 1" in res.stderr


def test_missing_input_file_exits_1(tmp_path):
    res = run_cli("map", tmp_path / "nope.json", "--ct", 100,
                  "-o", tmp_path / "x.json")
    assert res.returncode == 1
    assert "error:" in res.stderr


def test_sim_reproduces_voltage_table(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    out = tmp_path / "sim.csv"
    res = run_cli("sim", cfg, cli_files["vectors"], "--tl", "ideal", "-o", out)
    assert res.returncode == 0, res.stderr
    rows = read_rows(out)
    assert len(rows) == 16
    for row in rows:
        want = fixtures.VOLTAGE_TABLE[row["vector"]]
        assert abs(float(row["vm_p_mV"]) - want.vm_p_mV) <= 1.0
        assert abs(float(row["vm_m_mV"]) - want.vm_m_mV) <= 1.0
        assert abs(float(row["vmd_mV"]) - want.vmd_mV) <= 1.0
        assert int(row["out_tl"]) == want.out_ideal
        assert int(row["out_software"]) == want.out_ideal
    for tl, attr in (("proposed", "out_proposed"), ("conventional", "out_conventional")):
        res = run_cli("sim", cfg, cli_files["vectors"], "--tl", tl, "-o", out)
        assert res.returncode == 0
        for row in read_rows(out):
            assert int(row["out_tl"]) == getattr(fixtures.VOLTAGE_TABLE[row["vector"]], attr)


def test_sim_reports_corner_offsets(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    out = tmp_path / "sim.csv"
    res = run_cli("sim", cfg, cli_files["vectors"], "--tl", "proposed",
                  "--corner", "TT", "--temp", 27, "-o", out)
    assert res.returncode == 0, res.stderr
    rows = read_rows(out)
    assert float(rows[0]["offset_rising_mV"]) == 9.005
    assert float(rows[0]["offset_falling_mV"]) == 6.995
    # the ideal comparator has no offset table, so no extra columns
    res = run_cli("sim", cfg, cli_files["vectors"], "--tl", "ideal",
                  "--corner", "TT", "-o", out)
    assert res.returncode == 0
    assert "offset_rising_mV" not in read_rows(out)[0]


def test_sim_wrong_width_exits_3(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    short = tmp_path / "short.txt"
    short.write_text("TVX 0101\n")
    res = run_cli("sim", cfg, short, "-o", tmp_path / "sim.csv")
    assert res.returncode == 3


def test_energy_report_model_and_fixture_savings(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    out = tmp_path / "energy.csv"
    res = run_cli("energy", cfg, cli_files["vectors"], "--no-plot", "-o", out)
    assert res.returncode == 0, res.stderr
    by_name = {r["vector"]: r for r in read_rows(out)}
    assert len(by_name) == 16
    assert float(by_name["TV8"]["E_ACN_syn_fJ"]) == 92.6
    assert float(by_name["TV8"]["E_AL_fJ"]) == 0.0
    assert abs(float(by_name["TV8"]["savings_pct"]) - 72.85) <= 0.01
    assert abs(float(by_name["TV4"]["E_ACN_syn_fJ"]) - 188.5) <= 0.05
    assert abs(float(by_name["TV4"]["f_op_kHz"]) - 987.78) <= 0.01
    res = run_cli("energy", cfg, cli_files["vectors"], "--no-plot",
                  "--savings-basis", "fixture", "-o", out)
    assert res.returncode == 0, res.stderr
    by_name = {r["vector"]: r for r in read_rows(out)}
    # recorded energy pair for TV2 implies the published 94.9 percent
    assert abs(float(by_name["TV2"]["savings_pct"]) - 94.9) <= 0.1


def test_energy_fixture_basis_needs_recorded_rows(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    vecs = tmp_path / "custom.txt"
    vecs.write_text("MINE 1111_1110_1110\n")
    res = run_cli("energy", cfg, vecs, "--no-plot", "--savings-basis", "fixture",
                  "-o", tmp_path / "energy.csv")
    assert res.returncode == 4
    assert "MINE" in res.stderr


def test_energy_custom_fixture_missing_anchor_exits_4(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    fixture = tmp_path / "table.csv"
    fixture.write_text("vector,CL_fF,ACN_fJ,CCN_fJ\nTV4,961.0,188.5,3456.1\n")
    res = run_cli("energy", cfg, cli_files["vectors"], "--no-plot",
                  "--fixture", fixture, "-o", tmp_path / "energy.csv")
    assert res.returncode == 4


def test_sweep_default_supply_grid(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    out = tmp_path / "sweep.csv"
    res = run_cli("sweep", cfg, cli_files["vectors"], "--axis", "vdd",
                  "--no-plot", "-o", out)
    assert res.returncode == 0, res.stderr
    rows = read_rows(out)
    assert len(rows) == 9 * 16
    values = [float(r["axis_value"]) for r in rows]
    assert values[0] == 1.8 and values[-1] == 1.0
    assert values == sorted(values, reverse=True)
    tv8 = [r for r in rows if r["vector"] == "TV8"]
    saved = {r["savings_pct"] for r in tv8}
    assert len(saved) == 1  # V^2 cancels when nothing conducts
    assert {r["out_ideal"] for r in rows if r["vector"] == "TV16"} == {"1"}


def test_sweep_explicit_frequency_points(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    out = tmp_path / "sweep.csv"
    res = run_cli("sweep", cfg, cli_files["vectors"], "--axis", "freq",
                  "--start", 1e6, "--stop", 4e6, "--num", 3,
                  "--no-plot", "-o", out)
    assert res.returncode == 0, res.stderr
    rows = [r for r in read_rows(out) if r["vector"] == "TV4"]
    assert [float(r["axis_value"]) for r in rows] == [1000.0, 2500.0, 4000.0]
    energies = [float(r["E_ACN_syn_fJ"]) for r in rows]
    assert energies == sorted(energies)
    res = run_cli("sweep", cfg, cli_files["vectors"], "--axis", "freq",
                  "--start", 1e6, "--num", 3, "--no-plot", "-o", out)
    assert res.returncode == 1  # start/stop/num travel together


def test_mc_summary_is_reproducible(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    args = ("mc", cfg, "1111_1110_1110", "--n", 64, "--seed", 21, "--no-plot")
    out1, out2 = tmp_path / "mc1.json", tmp_path / "mc2.json"
    assert run_cli(*args, "-o", out1).returncode == 0
    assert run_cli(*args, "-o", out2).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    for key in ("n", "seed", "target", "vector", "mean_fJ", "std_fJ", "cv",
                "skewness", "qq_corr", "classified_normal"):
        assert key in payload
    assert payload["n"] == 64 and payload["seed"] == 21
    assert payload["vector"] == "1111_1110_1110"
    assert "degenerate" not in payload


def test_mc_samples_csv_orders_by_quantile(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    samples = tmp_path / "samples.csv"
    res = run_cli("mc", cfg, "1111_1110_1110", "--n", 32, "--seed", 7,
                  "--sampler", "low-discrepancy", "--no-plot",
                  "-o", tmp_path / "mc.json", "--samples-csv", samples)
    assert res.returncode == 0, res.stderr
    rows = read_rows(samples)
    assert len(rows) == 32
    energies = [float(r["energy_fJ"]) for r in rows]
    quantiles = [float(r["normal_quantile"]) for r in rows]
    assert energies == sorted(energies)
    assert quantiles == sorted(quantiles)


def test_netlist_from_compiled_config(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    out = tmp_path / "acn.sp"
    res = run_cli("netlist", cfg, "-o", out)
    assert res.returncode == 0, res.stderr
    text = out.read_text()
    assert sum(1 for l in text.splitlines() if l.startswith("C")) == 16
    assert text.rstrip().endswith(".end")


def test_verify_subset_and_report(tmp_path):
    res = run_cli("verify", "--only", "table4")
    assert res.returncode == 0, res.stderr
    body = [l for l in res.stdout.splitlines() if l.startswith("c0")]
    assert len(body) == 2
    assert all("table4" in l for l in body)
    res = run_cli("verify", "--only", "no-such-check")
    assert res.returncode == 1


def test_verify_exit_code_matches_report(tmp_path):
    out = tmp_path / "report.json"
    res = run_cli("verify", "-o", out)
    report = json.loads(out.read_text())
    assert len(report["checks"]) == 12
    all_pass = all(r["pass"] for r in report["checks"])
    assert report["pass"] == all_pass
    assert res.returncode == (0 if all_pass else 5)
    status_lines = [l for l in res.stdout.splitlines()
                    if l.startswith(("c0", "c1"))]
    assert len(status_lines) == 12


def test_report_commands_render_figures(cli_files, tmp_path):
    cfg = write_ref_config(tmp_path)
    out = tmp_path / "energy.csv"
    res = run_cli("energy", cfg, cli_files["vectors"], "-o", out)
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "energy.png").exists()
    assert "figure written" in res.stdout
