import csv
import sys

import pytest

from factharness.cli import main
from factharness.evaluator import parse_report_scores
from helpers import CRIME, FIXTURES, STREET

ECHO_CMD = f"{sys.executable} {FIXTURES / 'echo_backend.py'}"

CORPUS = """\
1\tA\ta\tdeterminer\t-\t3\tdet
2\tblue\tblue\tadjective\t-\t3\tamod
3\tjacket\tjacket\tnoun\t-\t4\tnsubj
4\tappeared\tappear\tverb\t-\t0\troot
"""


def run(argv):
    return main([str(a) for a in argv])


class TestAnalyze:
    def test_fixture_counts(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.tsv"
        corpus.write_text(CORPUS)
        out = tmp_path / "freq.tsv"
        assert run(["analyze", corpus, out]) == 0
        body = out.read_text()
        assert "adjective\tblue\t1" in body
        assert "noun-modifier-pair\tblue|jacket\t1" in body

    def test_missing_file_names_path(self, tmp_path, capsys):
        missing = tmp_path / "nope.tsv"
        assert run(["analyze", missing, tmp_path / "out.tsv"]) == 1
        assert str(missing) in capsys.readouterr().err

    def test_empty_corpus_is_valid(self, tmp_path):
        corpus = tmp_path / "empty.tsv"
        corpus.write_text("")
        out = tmp_path / "freq.tsv"
        assert run(["analyze", corpus, out]) == 0
        assert out.read_text().startswith("#")

    def test_parse_failure_nonzero(self, tmp_path, capsys):
        corpus = tmp_path / "bad.tsv"
        corpus.write_text("only two\tcolumns\n")
        assert run(["analyze", corpus, tmp_path / "out.tsv"]) == 1
        assert "line 1" in capsys.readouterr().err


class TestGenerate:
    def test_golden_bundle_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "one", tmp_path / "two"
        for out in (out1, out2):
            assert run(["generate", CRIME / "config.json", out,
                        "--seed", 7, "--documents", 2]) == 0
        names = sorted(p.name for p in out1.iterdir())
        assert names == sorted(p.name for p in out2.iterdir())
        for name in names:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_zero_documents(self, tmp_path):
        out = tmp_path / "empty"
        assert run(["generate", STREET / "config.json", out, "--documents", 0]) == 0
        assert list(out.glob("*.txt")) == []

    def test_bad_grammar_path(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(
            '{"domain": "x", "fact_tree": "%s", "grammar": "missing.cfg",'
            ' "frequency_table": "%s", "seed": 1}'
            % (CRIME / "tree.json", CRIME / "freq.tsv")
        )
        assert run(["generate", config, tmp_path / "out"]) == 1
        assert "missing" in capsys.readouterr().err


@pytest.fixture
def street_bundle(tmp_path):
    bundle = tmp_path / "bundle"
    assert run(["generate", STREET / "config.json", bundle,
                "--seed", 300, "--documents", 3]) == 0
    return bundle


class TestEvaluate:
    def test_echo_backend_identity_scores(self, street_bundle, tmp_path):
        out = tmp_path / "reports"
        assert run(["evaluate", street_bundle, out,
                    "--backend-cmd", ECHO_CMD, "--backend-id", "echo"]) == 0
        reports = sorted(out.glob("*.report"))
        assert len(reports) == 3
        for path in reports:
            scores = parse_report_scores(path.read_text())
            assert scores["consistency"] == 1.0
            assert scores["comprehensiveness"] == 1.0
            assert scores["compression-rate"] == 100.0
            assert scores["overall"] == 0.0
        rows = list(csv.DictReader((out / "aggregate.csv").open()))
        assert len(rows) == 3 and all(r["backend"] == "echo" for r in rows)

    def test_truncated_summaries_via_file_transport(self, street_bundle, tmp_path):
        summaries = tmp_path / "summaries"
        summaries.mkdir()
        for txt in street_bundle.glob("*.txt"):
            first_sentence = txt.read_text().split(". ")[0] + "."
            (summaries / f"{txt.stem}.summary").write_text(first_sentence + "\n")
        out = tmp_path / "reports"
        assert run(["evaluate", street_bundle, out, "--summaries-dir", summaries]) == 0
        for path in out.glob("*.report"):
            scores = parse_report_scores(path.read_text())
            assert scores["consistency"] == 1.0
            assert scores["comprehensiveness"] < 1.0

    def test_unreachable_http_backend_all_fail(self, street_bundle, tmp_path, capsys):
        out = tmp_path / "reports"
        status = run(["evaluate", street_bundle, out,
                      "--backend-http", "http://127.0.0.1:9/",
                      "--timeout", 0.5, "--retries", 0])
        assert status == 1
        assert "failed" in capsys.readouterr().err

    def test_requires_exactly_one_transport(self, street_bundle, tmp_path, capsys):
        assert run(["evaluate", street_bundle, tmp_path / "r"]) == 2
        assert run(["evaluate", street_bundle, tmp_path / "r",
                    "--backend-cmd", ECHO_CMD,
                    "--backend-http", "http://x/"]) == 2

    def test_parallel_jobs_match_serial(self, street_bundle, tmp_path):
        serial, parallel = tmp_path / "serial", tmp_path / "parallel"
        for out, jobs in ((serial, 1), (parallel, 3)):
            assert run(["evaluate", street_bundle, out,
                        "--backend-cmd", ECHO_CMD, "--jobs", jobs]) == 0
        assert (serial / "aggregate.csv").read_bytes() == \
            (parallel / "aggregate.csv").read_bytes()


class TestRun:
    def test_end_to_end_determinism(self, tmp_path):
        csvs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert run(["run", "--config", STREET / "config.json", "--out", out,
                        "--seed", 12, "--documents", 2,
                        "--backend-cmd", ECHO_CMD]) == 0
            csvs.append((out / "reports" / "aggregate.csv").read_bytes())
        assert csvs[0] == csvs[1]

    def test_resources_env_var(self, tmp_path, monkeypatch):
        from helpers import RESOURCES

        monkeypatch.setenv("FACTHARNESS_RESOURCES", str(RESOURCES))
        out = tmp_path / "run"
        assert run(["run", "--config", STREET / "config.json", "--out", out,
                    "--seed", 5, "--documents", 1,
                    "--backend-cmd", ECHO_CMD]) == 0
        assert (out / "reports" / "aggregate.csv").is_file()
