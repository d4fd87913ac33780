"""End-to-end runs of every subcommand through main(argv).

Each test drives the real entry point with a temp config file and inspects
exit codes, report JSON, and CSV tables — the same surface a shell user sees.
"""

import json
import math

import pytest

from ifsdim.cli import main

TERNARY_H = math.log(2.0) / math.log(3.0)
GOLDEN_H6 = 0.669031641539660
GOLDEN_LIMIT = 0.694241913630617
CF2_H = 0.531280506367
PHI = (1.0 + math.sqrt(5.0)) / 2.0


def run(tmp_path, command, text, extra=()):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(text)
    code = main([command, "--config", str(cfg), "--out", str(tmp_path), *extra])
    report_path = tmp_path / f"{command}-report.json"
    report = json.loads(report_path.read_text()) if report_path.exists() else None
    return code, report


# ---------------------------------------------------------------------------
# bowen


def test_bowen_cantor_thirds(tmp_path):
    code, report = run(
        tmp_path,
        "bowen",
        "system.family = cantor\nsystem.ratios = "
        "0.3333333333333333, 0.3333333333333333\n",
    )
    assert code == 0
    assert report["results"]["h"] == pytest.approx(TERNARY_H, abs=1e-10)
    assert report["results"]["regular"] is True


def test_bowen_golden_family_analytic(tmp_path):
    code, report = run(tmp_path, "bowen", "system.family = golden\n")
    assert code == 0
    assert report["results"]["h"] == pytest.approx(GOLDEN_LIMIT, abs=1e-8)
    assert report["results"]["method"] == "analytic"


def test_bowen_borderline_is_irregular_exit_4(tmp_path):
    code, report = run(tmp_path, "bowen", "system.family = borderline\n")
    assert code == 4
    assert report["results"]["regular"] is False
    assert report["results"]["h"] == pytest.approx(0.5, abs=1e-6)
    assert report["warnings"]


def test_bowen_unknown_family_exits_2(tmp_path):
    code, report = run(tmp_path, "bowen", "system.family = pentagon\n")
    assert code == 2
    assert report is None


def test_bowen_unknown_section_key_exits_2(tmp_path):
    code, report = run(
        tmp_path, "bowen", "system.family = golden\nbowen.depht = 3\n"
    )
    assert code == 2
    assert report is None


def test_missing_config_file_exits_2(tmp_path):
    code = main(["bowen", "--config", str(tmp_path / "ghost.cfg")])
    assert code == 2


# ---------------------------------------------------------------------------
# scan


def test_scan_golden_monotone_to_limit(tmp_path):
    code, report = run(
        tmp_path, "scan", "system.family = golden\nscan.levels = 2:12\n"
    )
    assert code == 0
    res = report["results"]
    assert res["monotone"] is True
    assert res["limit_h"] == pytest.approx(GOLDEN_LIMIT, abs=1e-8)
    assert res["last_h"] == pytest.approx(0.692989243639961, abs=1e-8)
    assert 0.0 < res["final_gap_to_limit"] < 1e-2
    csv_text = (tmp_path / "scan-levels.csv").read_text()
    assert csv_text.splitlines()[0] == "level,h,pressure_gap,residual,regular,depth,note"
    assert len(csv_text.splitlines()) == 12  # header + 11 levels


def test_scan_continued_fraction_small_levels(tmp_path):
    code, report = run(
        tmp_path,
        "scan",
        "system.family = continued-fraction\nscan.levels = 2,3\n",
    )
    assert code == 0
    res = report["results"]
    assert res["first_h"] == pytest.approx(CF2_H, abs=5e-3)
    assert res["monotone"] is True
    assert res["limit_h"] is None  # no closed-form family limit here


def test_scan_reversed_levels_exit_2(tmp_path):
    code, _ = run(tmp_path, "scan", "system.family = golden\nscan.levels = 9:3\n")
    assert code == 2


def test_scan_needs_a_family_exit_2(tmp_path):
    code, _ = run(
        tmp_path,
        "scan",
        "system.family = cantor\nsystem.ratios = 0.3, 0.3\nscan.levels = 2:4\n",
    )
    assert code == 2


def test_config_error_writes_no_files(tmp_path):
    code, report = run(
        tmp_path, "scan", "system.family = golden\nscan.levels = 9:3\n"
    )
    assert code == 2 and report is None
    leftovers = [p for p in tmp_path.iterdir() if p.suffix in (".json", ".csv")]
    assert leftovers == []


# ---------------------------------------------------------------------------
# converge


def test_converge_golden_cylinder_table(tmp_path):
    code, report = run(
        tmp_path,
        "converge",
        "system.family = golden\nconverge.levels = 2:12\n"
        "converge.cylinder_depths = 1,2\n",
    )
    assert code == 0
    res = report["results"]
    assert res["regular"] is True
    assert res["limit_h"] == pytest.approx(GOLDEN_LIMIT, abs=1e-8)
    assert res["final_discrepancies"]["depth2"] < 1e-3
    rows = (tmp_path / "converge-levels.csv").read_text().splitlines()[1:]
    discrepancies = [float(r.split(",")[2]) for r in rows]
    assert discrepancies == sorted(discrepancies, reverse=True)


def test_converge_borderline_reports_irregular(tmp_path):
    code, report = run(
        tmp_path, "converge", "system.family = borderline\nconverge.levels = 2:4\n"
    )
    assert code == 4
    assert report["results"]["regular"] is False
    assert report["warnings"]
    assert report["tables"] == {}


def test_converge_leaking_block_tv_is_one_over_n(tmp_path):
    code, report = run(
        tmp_path,
        "converge",
        "system.family = gallery:leaking-block\nconverge.levels = 1,2,4,8,16\n",
    )
    assert code == 0
    rows = (tmp_path / "converge-levels.csv").read_text().splitlines()[1:]
    for row in rows:
        cells = row.split(",")
        n, tv = int(cells[0]), float(cells[1])
        assert tv == pytest.approx(1.0 / n, abs=1e-15)


def test_converge_lattice_comb_weak_but_not_setwise(tmp_path):
    code, report = run(
        tmp_path,
        "converge",
        "system.family = gallery:lattice-comb\nconverge.levels = 4,16,64\n",
    )
    assert code == 0
    rows = (tmp_path / "converge-levels.csv").read_text().splitlines()[1:]
    weak = [float(r.split(",")[2]) for r in rows]
    tv = [float(r.split(",")[1]) for r in rows]
    setwise = [float(r.split(",")[3]) for r in rows]
    assert weak == sorted(weak, reverse=True)
    assert weak[-1] < 0.1
    assert all(v == 1.0 for v in tv)  # atoms vs Lebesgue never mix in TV
    assert all(v == 1.0 for v in setwise)  # the atom grid itself is the witness


def test_converge_gallery_without_limit_exit_2(tmp_path):
    code, _ = run(
        tmp_path, "converge", "system.family = gallery:cantor-mass-stages\n"
    )
    assert code == 2


def test_converge_unknown_gallery_exit_2(tmp_path):
    code, _ = run(tmp_path, "converge", "system.family = gallery:escalator\n")
    assert code == 2


# ---------------------------------------------------------------------------
# dimension


CANTOR_DIM_CFG = """
system.family = cantor
system.ratios = 0.3333333333333333, 0.3333333333333333
sample.seed = 202
sample.count = 10000
dimension.r_min = 5.6450292694767615e-05
dimension.r_max = 0.012345679012345678
dimension.r_count = 30
dimension.density_r_min = 1.6935087808430284e-06
dimension.density_r_max = 0.012345679012345678
dimension.density_points = 300
"""


def test_dimension_cantor_estimates_agree(tmp_path):
    code, report = run(tmp_path, "dimension", CANTOR_DIM_CFG)
    assert code == 0
    res = report["results"]
    summary = res["report"]
    assert summary["bowen_root"] == pytest.approx(TERNARY_H, abs=1e-9)
    assert summary["ratio"] == pytest.approx(TERNARY_H, abs=1e-9)
    assert summary["correlation_slope"] == pytest.approx(TERNARY_H, abs=0.05)
    assert summary["gamma_lower"] <= TERNARY_H <= summary["gamma_upper"]
    assert summary["consistent"] is True
    assert res["young_exponent"] == pytest.approx(TERNARY_H, abs=0.05)
    assert res["young_fraction"] >= 0.95
    assert (tmp_path / "dimension-correlation.csv").exists()
    assert (tmp_path / "dimension-density.csv").exists()


def test_dimension_requires_seed(tmp_path):
    code, _ = run(
        tmp_path,
        "dimension",
        "system.family = cantor\nsystem.ratios = 0.3, 0.3\n",
    )
    assert code == 2


def test_dimension_staircase_flat_and_slow_slope(tmp_path):
    code, report = run(
        tmp_path,
        "dimension",
        """
        system.family = gallery:staircase
        system.a = 0.5
        sample.seed = 404
        sample.count = 10000
        dimension.r_min = 1e-21
        dimension.r_max = 1e-7
        dimension.r_count = 25
        dimension.fit_lo = 1e-20
        dimension.fit_hi = 1e-8
        dimension.density_r_min = 1e-10
        dimension.density_r_max = 0.2
        dimension.density_points = 200
        """,
    )
    assert code == 0
    res = report["results"]
    assert res["slope"] < 0.1
    assert res["flatness"]["fired"] is True
    assert res["report"]["consistent"] is False
    assert (tmp_path / "dimension-flatness.csv").exists()


def test_dimension_alternating_even_member_degenerates(tmp_path):
    base = """
    system.family = gallery:alternating-collapse
    dimension.member = {member}
    sample.seed = 5
    sample.count = {count}
    dimension.r_min = {rmin}
    dimension.r_max = {rmax}
    dimension.density_r_min = {rmin}
    dimension.density_r_max = {rmax}
    """
    code, report = run(
        tmp_path,
        "dimension",
        base.format(member=4, count=2000, rmin=1e-3, rmax=0.3),
    )
    assert code == 0
    assert report["results"]["degenerate_cloud"] is True
    assert report["results"]["slope"] == 0.0

    code, report = run(
        tmp_path,
        "dimension",
        base.format(member=5, count=4000, rmin=1e-4, rmax=0.04),
    )
    assert code == 0
    assert report["results"]["slope"] == pytest.approx(1.0, abs=0.08)


def test_dimension_member_validation(tmp_path):
    bad = "system.family = gallery:staircase\nsample.seed = 1\ndimension.member = soon\n"
    assert run(tmp_path, "dimension", bad)[0] == 2
    bad0 = "system.family = gallery:staircase\nsample.seed = 1\ndimension.member = 0\n"
    assert run(tmp_path, "dimension", bad0)[0] == 2


def test_dimension_family_without_size_exit_2(tmp_path):
    code, _ = run(tmp_path, "dimension", "system.family = golden\nsample.seed = 1\n")
    assert code == 2


# ---------------------------------------------------------------------------
# gibbs


def test_gibbs_full_shift_zero_exponent(tmp_path):
    code, report = run(
        tmp_path,
        "gibbs",
        "system.family = cantor\nsystem.ratios = 0.5, 0.5\n"
        "gibbs.exponent = 0\ngibbs.depth = 1\n",
    )
    assert code == 0
    res = report["results"]
    assert res["eigenvalue"] == pytest.approx(2.0, abs=1e-10)
    assert res["entropy"] == pytest.approx(math.log(2.0), abs=1e-10)
    assert res["dimension_interpretation"] is False


def test_gibbs_golden_truncation_at_bowen_root(tmp_path):
    code, report = run(
        tmp_path, "gibbs", "system.family = golden\nsystem.size = 6\n"
    )
    assert code == 0
    res = report["results"]
    assert res["exponent"] == pytest.approx(GOLDEN_H6, abs=1e-9)
    assert abs(res["eigenvalue"] - 1.0) < 1e-6
    assert res["ratio"] == pytest.approx(GOLDEN_H6, abs=1e-6)
    assert res["dimension_interpretation"] is True
    rows = (tmp_path / "gibbs-masses.csv").read_text().splitlines()[1:]
    assert len(rows) == 6
    total = sum(float(r.split(",")[1]) for r in rows)
    assert total == pytest.approx(1.0, abs=1e-12)


def test_gibbs_custom_incidence_spectral_radius(tmp_path):
    code, report = run(
        tmp_path,
        "gibbs",
        "system.family = custom\n"
        "system.maps = similitude:0.4:0.0; similitude:0.3:0.5\n"
        "system.incidence = 11;10\n"
        "gibbs.exponent = 0\ngibbs.depth = 1\n",
    )
    assert code == 0
    assert report["results"]["eigenvalue"] == pytest.approx(PHI, abs=1e-8)


def test_gibbs_reducible_incidence_exit_4(tmp_path):
    code, _ = run(
        tmp_path,
        "gibbs",
        "system.family = custom\n"
        "system.maps = similitude:0.4:0.0; similitude:0.3:0.5\n"
        "system.incidence = 10;01\n"
        "gibbs.exponent = 0\n",
    )
    assert code == 4


def test_gibbs_bad_map_spec_exit_2(tmp_path):
    code, _ = run(
        tmp_path,
        "gibbs",
        "system.family = custom\nsystem.maps = parabola:0.4\ngibbs.exponent = 0\n",
    )
    assert code == 2


def test_gibbs_continued_fraction_operator_root(tmp_path):
    code, report = run(
        tmp_path,
        "gibbs",
        "system.family = continued-fraction\nsystem.size = 2\ngibbs.depth = 4\n",
    )
    assert code == 0
    res = report["results"]
    assert abs(res["eigenvalue"] - 1.0) < 1e-6
    assert res["exponent"] == pytest.approx(CF2_H, abs=5e-3)


# ---------------------------------------------------------------------------
# report mechanics


def test_reports_are_deterministic_up_to_timestamp(tmp_path):
    cfg = tmp_path / "d.cfg"
    cfg.write_text(CANTOR_DIM_CFG)
    out1, out2, out3 = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert main(["dimension", "--config", str(cfg), "--out", str(out1)]) == 0
    assert main(["dimension", "--config", str(cfg), "--out", str(out2)]) == 0
    assert main(["dimension", "--config", str(cfg), "--out", str(out3), "--seed", "777"]) == 0
    a = json.loads((out1 / "dimension-report.json").read_text())
    b = json.loads((out2 / "dimension-report.json").read_text())
    c = json.loads((out3 / "dimension-report.json").read_text())
    for blob in (a, b, c):
        blob.pop("timestamp")
    assert a == b
    assert a != c
    assert a["config_hash"] == b["config_hash"] != c["config_hash"]
    assert (out1 / "dimension-correlation.csv").read_text() == (
        out2 / "dimension-correlation.csv"
    ).read_text()


def test_json_format_embeds_tables_without_csv_files(tmp_path):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("system.family = golden\nsystem.size = 3\n")
    assert main(
        ["gibbs", "--config", str(cfg), "--out", str(tmp_path), "--format", "json"]
    ) == 0
    report = json.loads((tmp_path / "gibbs-report.json").read_text())
    assert "masses" in report["tables"]
    assert not list(tmp_path.glob("*.csv"))


def test_gallery_list_names_every_family(capsys):
    assert main(["gallery-list"]) == 0
    out = capsys.readouterr().out
    for name in (
        "alternating-collapse",
        "cantor-mass-stages",
        "lattice-comb",
        "atom-vs-uniform",
        "leaking-block",
        "staircase",
    ):
        assert name in out
