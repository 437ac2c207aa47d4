import csv
import json

import pytest

from citemetric.cli import main
from citemetric.synth import researcher_a_corpus

from conftest import write_files


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def files_bytes(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


@pytest.fixture
def ra(tmp_path):
    d = tmp_path / "ra"
    assert main(["synth", "--scenario", "researcher-a", "--out", str(d)]) == 0
    return d


def test_baseline_writes_file(tmp_path, ra):
    assert main(["baseline", "--corpus", str(ra), "--window-end", "2006", "--out", str(tmp_path / "o")]) == 0
    rows = read_csv(tmp_path / "o" / "baselines.csv")
    assert {r["mode"] for r in rows} == {"field"}
    assert any(r["class_id"] == "F2" and r["pub_year"] == "2006" and r["mean_citations"] == "0.400000"
               for r in rows)


def test_malformed_csv_exit_1(tmp_path, capsys):
    write_files(tmp_path, "pub_id,journal_id,pub_year,doc_type,field_ids\nP1,J,year,article,F\n",
                "pub_id,year,count\n", "researcher_id,pub_id\n")
    code = main(["baseline", "--corpus", str(tmp_path), "--window-end", "2006", "--out", str(tmp_path / "o")])
    assert code == 1
    assert "publications.csv:2" in capsys.readouterr().err


def test_unwritable_output_exit_2(tmp_path, ra, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code = main(["baseline", "--corpus", str(ra), "--window-end", "2006", "--out", str(blocker / "sub")])
    assert code == 2
    assert "I/O error" in capsys.readouterr().err


def test_missing_corpus_file_exit_2(tmp_path):
    assert main(["baseline", "--corpus", str(tmp_path), "--window-end", "2006", "--out", str(tmp_path)]) == 2


def test_missing_window_end_exit_1(tmp_path, ra):
    assert main(["baseline", "--corpus", str(ra), "--out", str(tmp_path / "o")]) == 1


def test_score_researcher_a(tmp_path, ra):
    out = tmp_path / "o"
    assert main(["score", "--corpus", str(ra), "--window-end", "2006", "--out", str(out)]) == 0
    (row,) = read_csv(out / "scores.csv")
    assert float(row["crown"]) < 1.0 < float(row["mncs"])
    assert row["n_total"] == "53" and row["sum_c"] == "349"
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["window_end"] == 2006
    assert set(manifest["fingerprints"]) == {"algorithm", "corpus", "baselines", "config"}


def test_min_pubs_moves_researcher_to_excluded_file(tmp_path):
    pubs = ["pub_id,journal_id,pub_year,doc_type,field_ids"]
    oeuvres = ["researcher_id,pub_id"]
    for r, n in (("BIG", 20), ("SMALL", 19)):
        for i in range(n):
            pubs.append(f"{r}{i},J,2004,article,F")
            oeuvres.append(f"{r},{r}{i}")
    cites = ["pub_id,year,count"] + [f"{p.split(',')[0]},2005,{1 + i % 4}" for i, p in enumerate(pubs[1:])]
    write_files(tmp_path, *("\n".join(x) + "\n" for x in (pubs, cites, oeuvres)))
    out = tmp_path / "o"
    assert main(["score", "--corpus", str(tmp_path), "--window-end", "2006", "--min-pubs", "20",
                 "--out", str(out)]) == 0
    assert [r["researcher_id"] for r in read_csv(out / "scores.csv")] == ["BIG"]
    assert read_csv(out / "excluded_researchers.csv") == [
        {"researcher_id": "SMALL", "n_total": "19", "reason": "below_min_pubs"}
    ]


def test_journal_and_field_modes_agree_on_one_to_one_corpus(tmp_path):
    pubs = ["pub_id,journal_id,pub_year,doc_type,field_ids"]
    cites = ["pub_id,year,count"]
    oeuvres = ["researcher_id,pub_id"]
    for i in range(30):
        f = "FGH"[i % 3]
        pubs.append(f"P{i},J{f},{2002 + i % 4},{'article' if i % 5 else 'review'},{f}")
        cites.append(f"P{i},2006,{(7 * i) % 11}")
        oeuvres.append(f"R{i % 2},P{i}")
    write_files(tmp_path, *("\n".join(x) + "\n" for x in (pubs, cites, oeuvres)))
    rows = {}
    for mode in ("field", "journal"):
        out = tmp_path / mode
        assert main(["score", "--corpus", str(tmp_path), "--window-end", "2006", "--min-pubs", "1",
                     "--baseline-mode", mode, "--out", str(out)]) == 0
        rows[mode] = read_csv(out / "scores.csv")
    assert rows["field"] == rows["journal"]


def test_bootstrap_requires_seed(tmp_path, ra, capsys):
    code = main(["score", "--corpus", str(ra), "--window-end", "2006", "--bootstrap", "100",
                 "--out", str(tmp_path / "o")])
    assert code == 1
    assert "--seed" in capsys.readouterr().err


def test_bootstrap_columns_and_thread_independence(tmp_path):
    corpus = tmp_path / "c"
    assert main(["synth", "--seed", "11", "--n-researchers", "6", "--spike", "2,6",
                 "--background-pubs", "200", "--out", str(corpus)]) == 0
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"t{threads}"
        assert main(["score", "--corpus", str(corpus), "--window-end", "2006", "--bootstrap", "300",
                     "--seed", "5", "--threads", threads, "--format", "both", "--out", str(out)]) == 0
        outs.append(files_bytes(out))
    assert outs[0] == outs[1]
    rows = read_csv(tmp_path / "t1" / "scores.csv")
    assert len(rows) == 6
    for r in rows:
        assert float(r["crown_ci_low"]) <= float(r["crown_ci_high"])
        assert r["z_sg"] != ""


def test_score_is_idempotent(tmp_path, ra):
    args = ["score", "--corpus", str(ra), "--window-end", "2006", "--format", "both"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    assert files_bytes(tmp_path / "a") == files_bytes(tmp_path / "b")


def test_config_precedence(tmp_path, ra, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"window_end": 2006, "min_pubs": 60}))
    out = tmp_path / "file"
    assert main(["score", "--corpus", str(ra), "--config", str(cfg), "--out", str(out)]) == 0
    assert not (out / "scores.csv").exists()
    assert read_csv(out / "excluded_researchers.csv")[0]["researcher_id"] == "A"

    out = tmp_path / "flag"
    assert main(["score", "--corpus", str(ra), "--config", str(cfg), "--min-pubs", "50", "--out", str(out)]) == 0
    assert (out / "scores.csv").exists()

    monkeypatch.setenv("CITEMETRIC_CONFIG", str(cfg))
    out = tmp_path / "env"
    assert main(["score", "--corpus", str(ra), "--out", str(out)]) == 0
    assert not (out / "scores.csv").exists()


def test_bad_config_exit_1(tmp_path, ra):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"window_end": 2006, "min_pub": 5}))
    assert main(["score", "--corpus", str(ra), "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1


def test_window_sweep_outputs(tmp_path, ra):
    out = tmp_path / "o"
    assert main(["window-sweep", "--corpus", str(ra), "--windows", "2006,2008", "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["compare_2006.csv", "compare_2008.csv", "sweep.csv"]
    sweep = read_csv(out / "sweep.csv")
    assert [r["window_end"] for r in sweep] == ["2006", "2008"]
    (c6,) = read_csv(out / "compare_2006.csv")
    (c8,) = read_csv(out / "compare_2008.csv")
    assert float(c8["divergence"]) < float(c6["divergence"])
    assert c6["n_recent"] == str(sum(p.pub_year >= 2005 for p in researcher_a_corpus().oeuvre("A")))


def test_window_sweep_rejects_unordered_windows(tmp_path, ra):
    assert main(["window-sweep", "--corpus", str(ra), "--windows", "2008,2006", "--out", str(tmp_path)]) == 1


def test_compare_command(tmp_path, ra):
    assert main(["compare", "--corpus", str(ra), "--window-end", "2006", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "compare_2006.csv").exists()


def test_synth_requires_seed(tmp_path):
    assert main(["synth", "--out", str(tmp_path)]) == 1


def test_synth_invalid_spec_exit_1(tmp_path):
    assert main(["synth", "--seed", "1", "--n-fields", "0", "--out", str(tmp_path)]) == 1


def test_synth_spec_file_and_provenance(tmp_path):
    spec = tmp_path / "spec_in.json"
    spec.write_text(json.dumps({"seed": 4, "n_researchers": 3, "pubs_per_researcher": 4}))
    out = tmp_path / "o"
    assert main(["synth", "--spec", str(spec), "--n-researchers", "2", "--out", str(out)]) == 0
    record = json.loads((out / "spec.json").read_text())
    assert record["seed"] == 4 and record["n_researchers"] == 2
    assert set(record["field_citation_rates"]) == {"F01", "F02", "F03", "F04", "F05"}
    # the provenance record regenerates the same corpus
    again = tmp_path / "again"
    assert main(["synth", "--spec", str(out / "spec.json"), "--out", str(again)]) == 0
    assert files_bytes(out) == files_bytes(again)


@pytest.mark.parametrize("command", ["baseline", "score", "compare", "window-sweep"])
def test_help_documents_defaults(command, capsys):
    with pytest.raises(SystemExit) as exc:
        main([command, "--help"])
    assert exc.value.code == 0
    text = " ".join(capsys.readouterr().out.split())
    for fragment in ("(default: field)", "(default: 20)", "(default: 0.1)", "(default: 5.0)",
                     "(default: false)", "(default: 0.5)", "(default: 1)"):
        assert fragment in text
    if command == "score":
        assert "(default when enabled: 1000)" in text
        assert "(default: 0.95)" in text


def test_help_synth(capsys):
    with pytest.raises(SystemExit):
        main(["synth", "--help"])
    assert "--seed" in capsys.readouterr().out


def test_usage_error_exit_1():
    with pytest.raises(SystemExit) as exc:
        main(["score", "--bogus"])
    assert exc.value.code == 1
