"""End-to-end command line behavior: outputs, precedence, exit codes."""

import json
import re

import pytest

from pct_impact.cli import main

HEADER = "id,institution,pub_year,category,citations,inv_percentile\n"

# three institutions with pre-supplied inverted percentiles
ROWS = [
    ("A", [4.0, 8.0, 15.0, 40.0, 60.0, 75.0]),
    ("B", [2.0, 5.0, 9.0, 10.0, 30.0]),
    ("C", [20.0, 35.0, 55.0, 80.0]),
]

TIE_SET = [61] * 3 + [58] * 7 + [1] * 40


@pytest.fixture
def inst_csv(tmp_path):
    lines = [HEADER]
    k = 0
    for inst, pcts in ROWS:
        for p in pcts:
            lines.append(f"p{k},{inst},2001,CAT,{100 - int(p)},{p}\n")
            k += 1
    path = tmp_path / "input.csv"
    path.write_text("".join(lines), encoding="utf-8")
    return path


@pytest.fixture
def tie_csv(tmp_path):
    lines = ["id,institution,pub_year,category,citations\n"]
    for i, c in enumerate(TIE_SET):
        inst = "X" if i % 2 == 0 else "Y"
        lines.append(f"t{i},{inst},2001,CAT,{c}\n")
    path = tmp_path / "ties.csv"
    path.write_text("".join(lines), encoding="utf-8")
    return path


def run(*argv):
    return main([str(a) for a in argv])


class TestSummaryCommand:
    def test_writes_all_formats(self, inst_csv, tmp_path, capsys):
        out = tmp_path / "out"
        code = run("summary", "--input", inst_csv, "--out-dir", out,
                   "--format", "tsv,json,svg")
        assert code == 0
        assert (out / "summary.tsv").exists()
        assert (out / "summary.json").exists()
        assert (out / "summary_ci.svg").exists()
        stdout = capsys.readouterr().out
        assert "Mean" in stdout and "Cohen's d" in stdout

    def test_byte_identical_reruns(self, inst_csv, tmp_path):
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        for out in (out1, out2):
            assert run("summary", "--input", inst_csv, "--out-dir", out,
                       "--format", "tsv,json,svg") == 0
        for name in ("summary.tsv", "summary.json", "summary_ci.svg"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_figure_matches_table_cells(self, inst_csv, tmp_path):
        out = tmp_path / "out"
        run("summary", "--input", inst_csv, "--out-dir", out, "--format", "json,svg")
        table = json.loads((out / "summary.json").read_text())
        rows = {r["label"]: r["values"] for r in table["rows"]}
        svg = (out / "summary_ci.svg").read_text()
        points = [float(m) for m in re.findall(r'class="ci-point" cx="[0-9.]+" cy="([0-9.]+)"', svg)]
        # means must map to marker y positions monotonically (pixel y flips sign)
        means = rows["Mean"]
        order_means = sorted(range(3), key=lambda i: means[i])
        order_pixels = sorted(range(3), key=lambda i: -points[i])
        assert order_means == order_pixels

    def test_mu0_flag_beats_config_file(self, inst_csv, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"input={inst_csv}\nmu0=40\nformat=tsv\n", encoding="utf-8")
        run("summary", "--config", cfg, "--out-dir", tmp_path / "a")
        assert "mean = 40" in capsys.readouterr().out
        run("summary", "--config", cfg, "--mu0", "45", "--out-dir", tmp_path / "b")
        assert "mean = 45" in capsys.readouterr().out


class TestCompareCommand:
    def test_pairs_and_optional_rows(self, inst_csv, tmp_path, capsys):
        code = run("compare", "--input", inst_csv, "--pairs", "A:B,A:C,C:B",
                   "--welch", "--mann-whitney", "--out-dir", tmp_path,
                   "--format", "tsv")
        assert code == 0
        tsv = (tmp_path / "compare.tsv").read_text()
        header = tsv.splitlines()[0]
        assert header.split("\t")[1:] == ["A vs B", "A vs C", "C vs B"]
        assert "Welch t" in tsv and "Mann-Whitney z" in tsv

    def test_missing_pairs_is_config_error(self, inst_csv, tmp_path, capsys):
        assert run("compare", "--input", inst_csv, "--out-dir", tmp_path) == 2
        assert "pairs" in capsys.readouterr().err

    def test_unknown_institution_is_data_error(self, inst_csv, tmp_path, capsys):
        code = run("compare", "--input", inst_csv, "--pairs", "A:NOPE",
                   "--out-dir", tmp_path)
        assert code == 1
        err = capsys.readouterr().err
        assert "NOPE" in err and "A" in err


class TestTopShareCommands:
    def test_binary_topshare(self, inst_csv, tmp_path):
        code = run("topshare", "--input", inst_csv, "--out-dir", tmp_path,
                   "--format", "json,svg")
        assert code == 0
        table = json.loads((tmp_path / "topshare.json").read_text())
        rows = {r["label"]: dict(zip(table["columns"], r["values"])) for r in table["rows"]}
        # B has percentiles {2, 5, 9, 10, 30}: four of five at or below 10
        assert rows["Share in top 10% (x100)"]["B"] == pytest.approx(80.0)
        assert (tmp_path / "topshare_ci.svg").exists()

    def test_fractional_on_tie_file(self, tie_csv, tmp_path):
        code = run("topshare", "--input", tie_csv, "--counting", "fractional",
                   "--scheme", "incites", "--inverted", "--out-dir", tmp_path,
                   "--format", "json")
        assert code == 0
        table = json.loads((tmp_path / "topshare.json").read_text())
        rows = {r["label"]: dict(zip(table["columns"], r["values"])) for r in table["rows"]}
        # X holds two 61s (weight 1) and three 58s (weight 2/7) among 25 papers
        expected_x = (2 + 3 * 2 / 7) / 25
        assert rows["Share in top 10% (x100)"]["X"] == pytest.approx(100 * expected_x)

    def test_binary_without_inverted_is_config_error(self, tie_csv, tmp_path, capsys):
        code = run("topshare", "--input", tie_csv, "--out-dir", tmp_path)
        assert code == 2
        assert "inverted" in capsys.readouterr().err

    def test_binary_equals_fractional_on_untied_data(self, tmp_path):
        from pct_impact.percentiles import (
            PercentileFormula,
            PercentileScheme,
            percentile_rank,
        )

        citations = [3 * i for i in range(20)]  # strictly distinct
        scheme = PercentileScheme(PercentileFormula.INCITES, inverted=True)
        pcts = [a.percentile for a in percentile_rank(citations, scheme)]
        lines = [HEADER]
        for i, (c, p) in enumerate(zip(citations, pcts)):
            lines.append(f"u{i},{'A' if i % 2 else 'B'},2001,CAT,{c},{p}\n")
        path = tmp_path / "untied.csv"
        path.write_text("".join(lines), encoding="utf-8")

        shares = {}
        for counting in ("binary", "fractional"):
            out = tmp_path / counting
            assert run("topshare", "--input", path, "--counting", counting,
                       "--scheme", "incites", "--inverted",
                       "--out-dir", out, "--format", "json") == 0
            table = json.loads((out / "topshare.json").read_text())
            shares[counting] = next(
                r["values"] for r in table["rows"] if r["label"].startswith("Share")
            )
        assert shares["binary"] == shares["fractional"]

    def test_topcompare(self, inst_csv, tmp_path):
        code = run("topcompare", "--input", inst_csv, "--pairs", "A:B",
                   "--out-dir", tmp_path, "--format", "json")
        assert code == 0
        table = json.loads((tmp_path / "topcompare.json").read_text())
        assert table["columns"] == ["A vs B"]


class TestPercentilesCommand:
    def test_tie_file_weights(self, tie_csv, tmp_path, capsys):
        code = run("percentiles", "--input", tie_csv, "--scheme", "incites",
                   "--inverted", "--out-dir", tmp_path)
        assert code == 0
        lines = (tmp_path / "percentiles.csv").read_text().splitlines()
        assert lines[0] == "paper_id,reference_set,rank,percentile,tie_group_size,top_x_weight"
        weights = [line.split(",")[-1] for line in lines[1:]]
        assert weights.count("1") == 3
        assert weights.count("0.285714") == 7
        assert weights.count("0") == 40
        err = capsys.readouterr().err
        assert "50 papers" in err  # set size logged

    def test_multi_category_best_wins(self, tmp_path):
        csv_path = tmp_path / "multi.csv"
        # paper m sits mid-field in HOT but at the top of COLD
        rows = ["id,institution,pub_year,category,citations\n",
                "m,I,2001,HOT|COLD,50\n"]
        for i in range(9):
            rows.append(f"h{i},I,2001,HOT,{100 + i}\n")
        for i in range(9):
            rows.append(f"c{i},I,2001,COLD,{i}\n")
        csv_path.write_text("".join(rows), encoding="utf-8")
        out = tmp_path / "out"
        run("percentiles", "--input", csv_path, "--scheme", "incites",
            "--inverted", "--out-dir", out)
        lines = (out / "percentiles.csv").read_text().splitlines()
        row_m = next(line for line in lines if line.startswith("m,"))
        assert row_m.split(",")[1] == "COLD:2001"
        assert float(row_m.split(",")[3]) == 10.0  # rank 1 of 10, inverted InCites


class TestRobustnessCommand:
    def test_reports_per_institution(self, tie_csv, tmp_path, capsys):
        code = run("robustness", "--input", tie_csv, "--out-dir", tmp_path,
                   "--format", "json")
        assert code == 0
        payload = json.loads((tmp_path / "robustness.json").read_text())
        assert set(payload) == {"X", "Y"}
        for rep in payload.values():
            assert {"mncs", "top_share", "n"} <= set(rep)
        stdout = capsys.readouterr().out
        assert stdout.index("Institution X") < stdout.index("Institution Y")


class TestBootstrapCommand:
    def test_mean_bootstrap_json(self, inst_csv, tmp_path, capsys):
        code = run("bootstrap", "--input", inst_csv, "--statistic", "mean",
                   "--institution", "A", "--bootstrap-reps", "200", "--seed", "5",
                   "--out-dir", tmp_path, "--format", "json")
        assert code == 0
        payload = json.loads((tmp_path / "bootstrap.json").read_text())
        assert payload["statistic"] == "mean"
        assert payload["replicates"] == 200 and payload["seed"] == 5
        assert payload["ci_low"] <= payload["point"] <= payload["ci_high"]
        assert payload["null_value"] == 50.0
        assert payload["ci_excludes_null"] == (
            not payload["ci_low"] <= 50.0 <= payload["ci_high"]
        )

    def test_env_seed_is_default_only(self, inst_csv, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("PCT_IMPACT_SEED", "777")
        run("bootstrap", "--input", inst_csv, "--statistic", "mean",
            "--institution", "A", "--bootstrap-reps", "50",
            "--out-dir", tmp_path, "--format", "json")
        assert json.loads((tmp_path / "bootstrap.json").read_text())["seed"] == 777
        run("bootstrap", "--input", inst_csv, "--statistic", "mean",
            "--institution", "A", "--bootstrap-reps", "50", "--seed", "3",
            "--out-dir", tmp_path, "--format", "json")
        assert json.loads((tmp_path / "bootstrap.json").read_text())["seed"] == 3

    def test_mean_diff_uses_pairs(self, inst_csv, tmp_path):
        code = run("bootstrap", "--input", inst_csv, "--statistic", "mean-diff",
                   "--pairs", "A:B", "--bootstrap-reps", "100",
                   "--out-dir", tmp_path, "--format", "json")
        assert code == 0
        payload = json.loads((tmp_path / "bootstrap.json").read_text())
        assert payload["statistic"] == "mean_diff"


class TestErrorPaths:
    def test_missing_input_flag(self, tmp_path, capsys):
        assert run("summary", "--out-dir", tmp_path) == 2

    def test_missing_input_file(self, tmp_path):
        assert run("summary", "--input", tmp_path / "nope.csv",
                   "--out-dir", tmp_path) == 2

    def test_missing_column_file(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("id,institution\n1,a\n", encoding="utf-8")
        assert run("summary", "--input", bad, "--out-dir", tmp_path) == 2

    def test_bad_top_x(self, inst_csv, tmp_path):
        assert run("topshare", "--input", inst_csv, "--top-x", "0",
                   "--out-dir", tmp_path) == 2

    def test_rejects_written(self, tmp_path, capsys):
        messy = tmp_path / "messy.csv"
        messy.write_text(
            HEADER + "p1,i,2001,A,5,\n" + "p2,i,2001,A,-3,\n" * 1
            + "".join(f"q{i},i,2001,A,1,\n" for i in range(9)),
            encoding="utf-8",
        )
        out = tmp_path / "out"
        code = run("percentiles", "--input", messy, "--out-dir", out)
        assert code == 0
        rejects = (out / "rejects.csv").read_text().splitlines()
        assert rejects[0] == "row,reason"
        assert len(rejects) == 2

    def test_last_year_filter(self, tmp_path, capsys):
        csv_path = tmp_path / "years.csv"
        csv_path.write_text(
            HEADER
            + "a,i,2001,A,5,10\n" + "b,i,2002,A,5,20\n" + "c,i,2003,A,5,30\n",
            encoding="utf-8",
        )
        out = tmp_path / "out"
        code = run("percentiles", "--input", csv_path, "--last-year", "2002",
                   "--out-dir", out)
        assert code == 0
        lines = (out / "percentiles.csv").read_text().splitlines()
        assert len(lines) == 3  # header + 2 surviving rows
