"""End-to-end tests of the command line interface via main()."""

import json

import pytest

from logicgen.cli import main

FIXTURE_PREDICTIONS = (
    "&UabUa!b\t&a!b;b;{1}\t&a!b;b;{1}\n"
    "&UbaUa!a\ta;!a;{1}\t&!ab;a;{1}\n"
    "&&&Ua&bcUa&!bcUa&b!cUa&!b!c\t&&abc;&&a!b!c;&bc;{1}\n"
)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --------------------------------------------------------------------------
# solve


def test_solve_ltl_single(capsys):
    code, out, _ = run(capsys, ["solve", "--ltl", "&UabUa!b"])
    assert code == 0
    answer = out.strip()
    code, out, _ = run(capsys, ["check", "--ltl", "&UabUa!b", answer])
    assert code == 0
    assert out.strip() == "HOLDS"


def test_solve_prop_single(capsys):
    assert run(capsys, ["solve", "--prop", "a"]) [:2] == (0, "a1\n")


def test_solve_unsat_exits_one(capsys):
    code, out, _ = run(capsys, ["solve", "--ltl", "&a!a"])
    assert (code, out) == (1, "UNSAT\n")
    code, out, _ = run(capsys, ["solve", "--prop", "&a!a"])
    assert (code, out) == (1, "UNSAT\n")


def test_solve_timeout_marker(capsys):
    code, out, _ = run(capsys, ["solve", "--ltl", "--timeout-ms", "1",
                                "G>aU!a&aWbW!bWbG!b"])
    assert (code, out) == (1, "TIMEOUT\n")


def test_solve_parse_error_exits_two(capsys):
    code, _, err = run(capsys, ["solve", "--ltl", "&a"])
    assert code == 2
    assert "error" in err


def test_solve_missing_formula(capsys):
    code, _, err = run(capsys, ["solve", "--ltl"])
    assert code == 2


def test_solve_file_reports_line_numbers(tmp_path, capsys):
    src = tmp_path / "formulas.txt"
    src.write_text("a\n&a\nXb\n")
    out_path = tmp_path / "answers.tsv"
    code, _, err = run(capsys, ["solve", "--ltl", "--file", str(src), "-o", str(out_path)])
    assert code == 2
    assert "line 2" in err
    lines = out_path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("a\t")
    manifest = json.loads((tmp_path / "answers.tsv.manifest.json").read_text())
    assert manifest["counts"] == {"solved": 2, "unsat": 0, "timeout": 0, "parse_errors": 1}
    assert manifest["subcommand"] == "solve"


# --------------------------------------------------------------------------
# check


def test_check_verdicts_and_exit_codes(capsys):
    assert run(capsys, ["check", "--ltl", "&UabUa!b", "&a!b;b;{1}"])[:2] == (0, "HOLDS\n")
    code, out, _ = run(capsys, ["check", "--ltl", "&&&Ua&bcUa&!bcUa&b!cUa&!b!c",
                                "&&abc;&&a!b!c;&bc;{1}"])
    assert code == 1
    assert out.startswith("VIOLATED ")
    code, out, _ = run(capsys, ["check", "--ltl", "a", ";;{"])
    assert code == 1
    assert out.startswith("INVALID")


def test_check_prop_witness(capsys):
    code, out, _ = run(capsys, ["check", "--prop", "|b!&ad", "a1"])
    assert code == 1
    verdict, witness = out.split(maxsplit=1)
    assert verdict == "VIOLATED"
    assert "a1" in witness and "b0" in witness
    assert run(capsys, ["check", "--prop", "|b!&ad", "a0"])[:2] == (0, "HOLDS\n")


def test_check_concrete_semantics(capsys):
    assert run(capsys, ["check", "--ltl", "--concrete", "XXGa", "!a;!a;{a}"])[0] == 0
    code, out, _ = run(capsys, ["check", "--ltl", "--concrete", "XXGa", "a;a;{!a}"])
    assert code == 1
    assert out.startswith("VIOLATED")
    code, out, _ = run(capsys, ["check", "--ltl", "--concrete", "XXGa", "1;1;{a}"])
    assert code == 1
    assert out.startswith("INVALID")
    assert run(capsys, ["check", "--prop", "--concrete", "a", "a1"])[0] == 2


def test_check_formula_parse_error_exits_two(capsys):
    assert run(capsys, ["check", "--ltl", "&a", "a;{1}"])[0] == 2


def test_check_file_batch(tmp_path, capsys):
    src = tmp_path / "pairs.tsv"
    src.write_text("a\ta;{1}\nGa\tb;{1}\nb\t;;{\n")
    code, out, _ = run(capsys, ["check", "--ltl", "--file", str(src)])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "a\tHOLDS"
    assert lines[1].startswith("Ga\tVIOLATED\t")
    assert lines[2].startswith("b\tINVALID")

    dst = tmp_path / "verdicts.tsv"
    code, _, _ = run(capsys, ["check", "--ltl", "--file", str(src), "-o", str(dst)])
    assert code == 0
    assert dst.read_text().splitlines() == lines
    manifest = json.loads((tmp_path / "verdicts.tsv.manifest.json").read_text())
    assert manifest["subcommand"] == "check"
    assert manifest["counts"] == {
        "holds": 1, "violated": 1, "invalid": 1, "timeout": 0, "parse_errors": 0,
    }


# --------------------------------------------------------------------------
# generation


def test_gen_random_ltl_writes_dataset_and_manifest(tmp_path, capsys):
    out = tmp_path / "data.tsv"
    code, _, _ = run(capsys, ["gen-random-ltl", "--count", "40", "--seed", "5",
                              "--max-size", "12", "-o", str(out)])
    assert code == 0
    assert len(out.read_text().splitlines()) == 40
    manifest = json.loads((tmp_path / "data.tsv.manifest.json").read_text())
    assert manifest["subcommand"] == "gen-random-ltl"
    assert manifest["seed"] == 5
    assert manifest["config"]["max_size"] == 12
    assert manifest["counts"]["emitted"] == 40
    assert "wall_clock_s" in manifest


def test_gen_is_deterministic_across_runs_and_jobs(tmp_path, capsys):
    texts = {}
    for name, jobs in (("a.tsv", "1"), ("b.tsv", "1"), ("c.tsv", "3"), ("d.tsv", "3")):
        out = tmp_path / name
        assert run(capsys, ["gen-random-ltl", "--count", "60", "--seed", "11",
                            "--jobs", jobs, "-o", str(out)])[0] == 0
        texts[name] = out.read_text()
    assert texts["a.tsv"] == texts["b.tsv"]
    assert texts["c.tsv"] == texts["d.tsv"]
    # Shards draw from independent streams; identical small formulas arising
    # in two shards merge away, so the yield may fall just short of count.
    merged = texts["c.tsv"].splitlines()
    assert 55 <= len(merged) <= 60
    manifest = json.loads((tmp_path / "c.tsv.manifest.json").read_text())
    assert manifest["counts"]["emitted"] == len(merged)


def test_gen_prop_and_cnf(tmp_path, capsys):
    prop_out = tmp_path / "prop.tsv"
    assert run(capsys, ["gen-prop", "--count", "25", "--seed", "2", "-o", str(prop_out)])[0] == 0
    assert len(prop_out.read_text().splitlines()) == 25
    cnf_out = tmp_path / "cnf.tsv"
    assert run(capsys, ["gen-cnf", "--count", "8", "--seed", "2", "-o", str(cnf_out)])[0] == 0
    lines = cnf_out.read_text().splitlines()
    assert len(lines) == 8
    assert all("\t" in line for line in lines)


def test_gen_pattern_and_unsolved(tmp_path, capsys):
    pat_out = tmp_path / "pat.tsv"
    code, _, _ = run(capsys, ["gen-pattern", "--catalog", "eh", "--count", "4",
                              "--seed", "3", "--timeout-ms", "100", "-o", str(pat_out)])
    assert code == 0
    assert len(pat_out.read_text().splitlines()) == 4
    uns_out = tmp_path / "uns.tsv"
    code, _, _ = run(capsys, ["gen-unsolved", "--catalog", "dac", "--count", "3",
                              "--seed", "3", "--timeout-ms", "2", "-o", str(uns_out)])
    assert code == 0
    lines = uns_out.read_text().splitlines()
    assert len(lines) == 3
    assert all(line.endswith("\t") for line in lines)


def test_gen_config_errors_exit_two(tmp_path, capsys):
    out = tmp_path / "x.tsv"
    code, _, err = run(capsys, ["gen-random-ltl", "--min-size", "0", "-o", str(out)])
    assert code == 2
    assert "error" in err
    code, _, _ = run(capsys, ["gen-random-ltl", "--props", ",", "-o", str(out)])
    assert code == 2


def test_gen_pattern_bad_catalog_exits_two(tmp_path, capsys):
    code, _, err = run(capsys, ["gen-pattern", "--catalog", str(tmp_path / "nope"),
                                "-o", str(tmp_path / "x.tsv")])
    assert code == 2


# --------------------------------------------------------------------------
# split / stats / eval


def test_split_and_stats(tmp_path, capsys):
    data = tmp_path / "data.tsv"
    assert run(capsys, ["gen-prop", "--count", "50", "--seed", "4", "-o", str(data)])[0] == 0
    code, _, _ = run(capsys, ["split", "--prop", str(data), "--seed", "1",
                              "-o", str(tmp_path / "data")])
    assert code == 0
    sizes = [len((tmp_path / f"data.{part}.tsv").read_text().splitlines())
             for part in ("train", "val", "test")]
    assert sizes == [40, 5, 5]
    code, out, _ = run(capsys, ["stats", "--prop", str(data)])
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "bucket,count"
    assert sum(int(r.split(",")[1]) for r in rows[1:]) == 50
    code, out, _ = run(capsys, ["stats", "--prop", "--answer-tokens", str(data)])
    assert sum(int(r.split(",")[1]) for r in out.splitlines()[1:]) == 50


def test_eval_fixture_file(tmp_path, capsys):
    preds = tmp_path / "preds.tsv"
    preds.write_text(FIXTURE_PREDICTIONS)
    code, out, _ = run(capsys, ["eval", "--ltl", str(preds)])
    assert code == 0
    assert out.splitlines()[-1] == "total,1,1,1,0"
    report_path = tmp_path / "report.json"
    code, _, _ = run(capsys, ["eval", "--ltl", str(preds), "--format", "json",
                              "-o", str(report_path)])
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["totals"] == {"syntactic": 1, "semantic_only": 1,
                                "incorrect": 1, "invalid": 0}
    manifest = json.loads((tmp_path / "report.json.manifest.json").read_text())
    assert manifest["counts"]["rejected"] == 0


def test_eval_surfaces_beam_mode(tmp_path, capsys):
    preds = tmp_path / "preds.tsv"
    preds.write_text(FIXTURE_PREDICTIONS)
    _, out, _ = run(capsys, ["eval", "--ltl", str(preds), "--any-beam"])
    assert "beam=any-beam" in out.splitlines()[0]


def test_missing_input_file_exits_two(tmp_path, capsys):
    assert run(capsys, ["stats", "--ltl", str(tmp_path / "missing.tsv")])[0] == 2
    assert run(capsys, ["eval", "--ltl", str(tmp_path / "missing.tsv")])[0] == 2


def test_usage_errors_raise_system_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["solve", "a"])
    assert exc.value.code == 2
