"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py``; the PASS/FAIL lines appear in
the "acceptance criteria" section of the terminal summary.
"""

import csv
import random
import sys
import time

import pytest

from conftest import ACCEPTANCE_LINES

from factharness.analyzer import FrequencyTable, sample_key
from factharness.cli import main as cli_main
from factharness.evaluator import build_report, compression_rate, parse_report_scores
from factharness.extractor import extract_facts
from factharness.generator import generate_documents, load_config
from factharness.grammar import BoundGrammar, derive, parse_grammar
from factharness.matcher import fact_match, load_resources, overlap
from helpers import (
    CRIME,
    FIXTURES,
    STREET,
    max_matching_count,
    pack_vocabulary,
    resource_paths,
)

ECHO_CMD = f"{sys.executable} {FIXTURES / 'echo_backend.py'}"


def verdict(number: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def res():
    return load_resources(*resource_paths())


@pytest.fixture(scope="module")
def crime_vocab():
    return pack_vocabulary(CRIME)


@pytest.fixture(scope="module")
def street_vocab():
    return pack_vocabulary(STREET)


@pytest.fixture(scope="module")
def street_doc():
    config = load_config(STREET / "config.json", seed=101, document_count=1)
    return generate_documents(config)[0]


def test_criterion_1_roundtrip_exactness(crime_vocab):
    """extract_facts(doc.text) == doc.truth for 100 documents, 10 seeds."""
    start = time.monotonic()
    mismatches = 0
    total = 0
    for seed in range(0, 1000, 100):
        config = load_config(CRIME / "config.json", seed=seed, document_count=10)
        for doc in generate_documents(config):
            total += 1
            if extract_facts(doc.text, crime_vocab) != doc.truth:
                mismatches += 1
    elapsed = time.monotonic() - start
    ok = total == 100 and mismatches == 0 and elapsed < 10.0
    verdict(1, ok, f"round-trip {total - mismatches}/{total} exact in {elapsed:.2f}s")


def test_criterion_2_formula_identities(street_doc, street_vocab, res):
    """Eq 1-3 recomputed from each report's raw counts match to 1e-9."""
    summaries = [
        street_doc.text,
        street_doc.text + " A stranger laughed.",
        street_doc.text.split(". ")[0] + ".",
        "",
        street_doc.text + " " + street_doc.text.split(". ")[0] + ".",
    ]
    worst = 0.0
    for summary in summaries:
        table = extract_facts(summary, street_vocab)
        report = build_report(street_doc, summary,
                              overlap(street_doc.truth, table, res), "check")
        if report.summary_facts:
            worst = max(worst, abs(report.consistency -
                                   report.overlap / report.summary_facts))
        worst = max(worst, abs(report.comprehensiveness -
                               report.overlap / report.source_facts))
        worst = max(worst, abs(report.compression_rate -
                               100.0 * report.summary_tokens / report.source_tokens))
    verdict(2, worst <= 1e-9, f"max identity error {worst:.2e} over {len(summaries)} reports")


def test_criterion_3_identity_summary(tmp_path):
    """Echo backend over 20 documents: 1.0 / 1.0 / 100.0 / 0.0 exactly."""
    bundle = tmp_path / "bundle"
    reports = tmp_path / "reports"
    assert cli_main(["generate", str(CRIME / "config.json"), str(bundle),
                     "--seed", "500", "--documents", "20"]) == 0
    assert cli_main(["evaluate", str(bundle), str(reports),
                     "--backend-cmd", ECHO_CMD, "--backend-id", "echo"]) == 0
    paths = sorted(reports.glob("*.report"))
    exact = 0
    for path in paths:
        scores = parse_report_scores(path.read_text())
        if (scores["consistency"] == 1.0 and scores["comprehensiveness"] == 1.0
                and scores["compression-rate"] == 100.0 and scores["overall"] == 0.0):
            exact += 1
    ok = len(paths) == 20 and exact == 20
    verdict(3, ok, f"{exact}/20 identity summaries scored (1, 1, 100, 0) exactly")


FABRICATION_GRAMMAR = """
Fab1 -> "A" "stranger" "laughed" "."
Fab2 -> "A" "child" "slept" "."
Fab3 -> "A" "dog" "barked" "."
Fab4 -> "A" "driver" "waited" "."
"""


def _fabricated_sentences(k: int) -> list[str]:
    grammar = parse_grammar(FABRICATION_GRAMMAR)
    bound = BoundGrammar(grammar, {})
    sentences = []
    for i in range(k):
        tokens = derive(bound, random.Random(i), start=f"Fab{i + 1}")
        from factharness.generator import detokenize
        sentences.append(detokenize(tokens))
    return sentences


def test_criterion_4_hallucination_proportionality(street_doc, street_vocab, res):
    """n truth facts + k one-fact fabrications: consistency == n/(n+k)."""
    n = len(street_doc.truth)
    assert n == 8
    results = []
    for k in (1, 2, 4):
        summary = street_doc.text + " " + " ".join(_fabricated_sentences(k))
        table = extract_facts(summary, street_vocab)
        result = overlap(street_doc.truth, table, res)
        # independent oracle: exhaustive pairwise matching count
        oracle = max_matching_count(street_doc.truth, table, res)
        report = build_report(street_doc, summary, result, "fab")
        results.append(
            report.summary_facts == n + k
            and oracle == n
            and report.consistency == n / (n + k)
        )
    verdict(4, all(results),
            f"consistency == n/(n+k) for k in (1, 2, 4) with n={n}")


def test_criterion_5_omission_proportionality(street_doc, street_vocab, res):
    """Rendering m of n=8 truth facts: comprehensiveness == m/n, consistency 1."""
    sentences = street_doc.text.split(". ")
    checks = []
    for keep, m in ((1, 2), (2, 4), (4, 8)):
        summary = ". ".join(sentences[:keep])
        if not summary.endswith("."):
            summary += "."
        table = extract_facts(summary, street_vocab)
        report = build_report(street_doc, summary,
                              overlap(street_doc.truth, table, res), "omit")
        checks.append(report.comprehensiveness == m / 8 and report.consistency == 1.0)
    verdict(5, all(checks), "comprehensiveness == m/8 for m in (2, 4, 8), consistency 1.0")


def test_criterion_6_compression_formula(street_doc, street_vocab, res):
    """Token counts (100, 20) -> 20.0, (100, 100) -> 100.0, (100, 120) -> 120.0."""
    exact = (
        compression_rate(100, 20) == 20.0
        and compression_rate(100, 100) == 100.0
        and compression_rate(100, 120) == 120.0
    )
    longer = street_doc.text + " The man smiled. The woman arrived. The man smiled."
    table = extract_facts(longer, street_vocab)
    report = build_report(street_doc, longer,
                          overlap(street_doc.truth, table, res), "long")
    flagged = report.over_length and report.compression_rate > 100.0
    verdict(6, exact and flagged,
            "compression values exact; over-length summaries flagged")


def test_criterion_7_greedy_matches_bruteforce(res):
    """Greedy overlap equals maximum matching on 50 random small instances."""
    from factharness.facts import EMPTY, FactTable, RelationKind, lexeme, make_fact

    def svo(s, v):
        return make_fact(RelationKind.SUBJECT_VERB_OBJECT,
                         [lexeme(s, "noun"), lexeme(v, "verb"), EMPTY])

    def nm(m, h):
        return make_fact(RelationKind.NOUN_MODIFIER,
                         [lexeme(m, "adjective"), lexeme(h, "noun")])

    pool = (
        [svo(s, v) for s in ("woman", "victim", "man", "waiter")
         for v in ("stab", "attack", "flee", "escape", "call")]
        + [nm(m, h) for m in ("young", "old", "female", "male", "asian")
           for h in ("restaurant", "diner", "bag", "victim")]
    )
    rng = random.Random(7777)
    disagreements = 0
    for _ in range(50):
        source = FactTable(rng.sample(pool, rng.randint(1, 6)))
        summary = FactTable(rng.sample(pool, rng.randint(1, 6)))
        greedy = overlap(source, summary, res).overlap_count
        optimal = max_matching_count(source, summary, res)
        if greedy != optimal:
            disagreements += 1
    verdict(7, disagreements == 0,
            f"greedy == brute-force maximum on 50/50 instances ({disagreements} off)")


def test_criterion_8_end_to_end_determinism(tmp_path):
    """Two full runs, same manifest/seed/file summaries: identical bytes."""
    probe = tmp_path / "probe"
    assert cli_main(["generate", str(STREET / "config.json"), str(probe),
                     "--seed", "900", "--documents", "4"]) == 0
    summaries = tmp_path / "summaries"
    summaries.mkdir()
    for txt in probe.glob("*.txt"):
        first = txt.read_text().split(". ")[0] + "."
        (summaries / f"{txt.stem}.summary").write_text(first + "\n")
    blobs = []
    for name in ("run1", "run2"):
        out = tmp_path / name
        assert cli_main(["run", "--config", str(STREET / "config.json"),
                         "--out", str(out), "--seed", "900", "--documents", "4",
                         "--summaries-dir", str(summaries)]) == 0
        blobs.append((out / "reports" / "aggregate.csv").read_bytes())
    rows = list(csv.reader(blobs[0].decode().splitlines()))
    ok = blobs[0] == blobs[1] and len(rows) == 5
    verdict(8, ok, "byte-identical aggregate tables across two full runs")


def test_criterion_9_sampling_fidelity():
    """Weighted sampling over {a: 3, b: 1}: 10,000 draws inside 0.72..0.78."""
    table = FrequencyTable({("noun", "a"): 3, ("noun", "b"): 1})
    rng = random.Random(31415)
    hits = sum(sample_key(table, "noun", rng) == "a" for _ in range(10_000))
    freq = hits / 10_000
    verdict(9, 0.72 <= freq <= 0.78, f"empirical frequency of a = {freq:.4f}")
