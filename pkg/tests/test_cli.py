"""Command line behaviour end to end: exit codes and file products."""

import xml.etree.ElementTree as ET

import pytest

from pairmac.cli import main

SCN = """\
scenario_id = demo
num_pairs = 2
sim_slots = 20000
seed = 3

[traffic]
arrival_rate = 0.4
"""

SWP = SCN + """
[sweep]
num_pairs = 1, 2
arrival_rate = 0.2, 0.6
seeds = 1, 2
"""


@pytest.fixture
def scn_file(tmp_path):
    p = tmp_path / "demo.scn"
    p.write_text(SCN)
    return str(p)


@pytest.fixture
def swp_file(tmp_path):
    p = tmp_path / "demo.swp"
    p.write_text(SWP)
    return str(p)


def test_run_writes_results(scn_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", scn_file, "--out", str(out)]) == 0
    lines = (out / "results.csv").read_text().splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("scenario_id,protocol,")
    assert lines[1].startswith("demo,gsdma,2,")
    assert "eff=" in capsys.readouterr().out


def test_run_same_seed_byte_identical(scn_file, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", scn_file, "--out", str(a)]) == 0
    assert main(["run", scn_file, "--out", str(b)]) == 0
    assert (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()


def test_run_seed_flag_changes_output(scn_file, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["run", scn_file, "--out", str(a)])
    main(["run", scn_file, "--seed", "99", "--out", str(b)])
    assert (a / "results.csv").read_text() != (b / "results.csv").read_text()


def test_run_set_override_lands_in_csv(scn_file, tmp_path):
    out = tmp_path / "out"
    assert main(["run", scn_file, "--set", "traffic.arrival_rate=0.8",
                 "--out", str(out)]) == 0
    row = (out / "results.csv").read_text().splitlines()[1]
    assert row.split(",")[5] == "0.8"


def test_missing_scenario_is_io_error(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.scn"), "--out", str(tmp_path)]) == 3
    assert "not found" in capsys.readouterr().err


def test_bad_key_is_config_error(tmp_path, capsys):
    p = tmp_path / "bad.scn"
    p.write_text("bogus = 1\n")
    assert main(["run", str(p), "--out", str(tmp_path)]) == 2
    assert "bogus" in capsys.readouterr().err


def test_bad_override_is_config_error(scn_file, tmp_path):
    assert main(["run", scn_file, "--set", "nope=1", "--out", str(tmp_path)]) == 2


def test_sweep_products(swp_file, tmp_path):
    out = tmp_path / "out"
    assert main(["sweep", swp_file, "--out", str(out)]) == 0
    res = (out / "results.csv").read_text().splitlines()
    assert len(res) == 1 + 4 * 2  # 4 points x 2 seeds
    assert res[1].startswith("demo.p000,")
    assert res[1].split(",")[6] == "1"  # ordered by point, then seed
    assert res[2].split(",")[6] == "2"
    summ = (out / "summary.csv").read_text().splitlines()
    assert len(summ) == 1 + 4
    assert summ[0].startswith("scenario_id,protocol,")
    assert "efficiency_mean" in summ[0]


def test_sweep_missing_file(tmp_path):
    assert main(["sweep", str(tmp_path / "no.swp"), "--out", str(tmp_path)]) == 3


def test_sweep_without_axes_is_config_error(tmp_path):
    p = tmp_path / "empty.swp"
    p.write_text(SCN + "\n[sweep]\nseeds = 1, 2\n")
    assert main(["sweep", str(p), "--out", str(tmp_path)]) == 2


def test_compare_products(scn_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["compare", scn_file, "--seeds", "1,2", "--out", str(out)]) == 0
    lines = (out / "comparison.csv").read_text().splitlines()
    assert lines[0] == ("metric,num_pairs,topology,gsdma,csmaca,"
                        "ratio_gsdma_over_csmaca")
    metrics = [ln.split(",")[0] for ln in lines[1:]]
    assert metrics == ["efficiency", "mean_access_delay_us",
                       "hidden_delay_inflation"]
    assert "efficiency:" in capsys.readouterr().out


def test_compare_bad_seed_list(scn_file, tmp_path):
    assert main(["compare", scn_file, "--seeds", "1,x",
                 "--out", str(tmp_path)]) == 2


def test_analyze_prints_estimates(scn_file, capsys):
    code = main(["analyze", scn_file, "--set", "traffic.saturated=true",
                 "--set", "sim_slots=100000"])
    assert code == 0
    out = capsys.readouterr().out
    assert "p_c=" in out and "p_s=" in out
    assert "pair 0:" in out and "predicted_delay=" in out


def test_analyze_needs_enough_cycles(scn_file, capsys):
    # 20000 lightly loaded slots yield far fewer than the minimum cycle count
    assert main(["analyze", scn_file]) == 2
    assert "cycles" in capsys.readouterr().err


def test_analyze_rejects_csma(scn_file):
    assert main(["analyze", scn_file, "--set", "protocol=csmaca"]) == 2


def test_plot_svg(swp_file, tmp_path):
    out = tmp_path / "out"
    main(["sweep", swp_file, "--out", str(out)])
    svg = out / "chart.svg"
    assert main(["plot", str(out / "summary.csv"), "--kind", "eff_vs_pairs",
                 "--out", str(svg)]) == 0
    root = ET.parse(svg).getroot()
    assert root.tag.endswith("svg")


def test_plot_rejects_results_csv(swp_file, tmp_path):
    out = tmp_path / "out"
    main(["sweep", swp_file, "--out", str(out)])
    assert main(["plot", str(out / "results.csv"), "--kind", "eff_vs_pairs",
                 "--out", str(out / "x.svg")]) == 2


def test_plot_missing_summary(tmp_path):
    assert main(["plot", str(tmp_path / "no.csv"), "--kind", "eff_vs_pairs",
                 "--out", str(tmp_path / "x.svg")]) == 3


def test_plot_unknown_kind_rejected():
    with pytest.raises(SystemExit):
        main(["plot", "x.csv", "--kind", "pie", "--out", "y.svg"])
