"""Evaluator: turns a fact overlap into the three scores and a report.

factual consistency  = overlap / facts in summary   (hallucination penalty)
comprehensiveness    = overlap / facts in source    (omission penalty)
compression rate     = 100 * summary tokens / source tokens

The overall score is an artifact default, surfaced in the report: the
(weighted) harmonic mean of consistency and comprehensiveness times a
linear length penalty (1 - rate/100), clamped to [0, 1]. A verbatim copy
therefore scores 0 even though it is perfectly consistent and complete.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .extractor import tokenize
from .facts import Fact, FactTable, encode_fact
from .matcher import MatchResult, OverlapResult


class EvaluatorError(ValueError):
    pass


class EmptySourceError(EvaluatorError):
    """A source table with no facts signals harness misuse upstream."""


class ZeroSourceTokensError(EvaluatorError):
    pass


@dataclass(frozen=True)
class ScoreWeights:
    consistency: float = 1.0
    comprehensiveness: float = 1.0
    penalty_exponent: float = 1.0


@dataclass
class EvaluationReport:
    document_id: str
    backend_id: str
    consistency: float
    comprehensiveness: float
    compression_rate: float
    overall: float
    source_facts: int
    summary_facts: int
    overlap: int
    source_tokens: int
    summary_tokens: int
    matched: list[tuple[Fact, Fact, MatchResult]] = field(default_factory=list)
    hallucinated: list[tuple[Fact, str]] = field(default_factory=list)  # fact, intrinsic|extrinsic
    missed: list[Fact] = field(default_factory=list)
    empty_summary: bool = False
    over_length: bool = False


def factual_consistency(result: OverlapResult, summary: FactTable) -> float:
    """Fraction of summary facts that also appear in the source; an empty
    summary is vacuously consistent (1.0) and flagged in the report."""
    total = result.overlap_count + len(result.unmatched_summary)
    assert total == len(summary), "overlap result does not belong to this summary"
    if total == 0:
        return 1.0
    return result.overlap_count / total


def comprehensiveness(result: OverlapResult, source: FactTable) -> float:
    """Fraction of source facts recovered in the summary."""
    total = result.overlap_count + len(result.unmatched_source)
    assert total == len(source), "overlap result does not belong to this source"
    if total == 0:
        raise EmptySourceError("source fact table is empty")
    return result.overlap_count / total


def compression_rate(source_tokens: int, summary_tokens: int) -> float:
    """100 * summary tokens / source tokens; may exceed 100."""
    if source_tokens <= 0:
        raise ZeroSourceTokensError("source document has no tokens")
    return 100.0 * summary_tokens / source_tokens


def overall_score(
    consistency: float,
    comprehensiveness_: float,
    compression_rate_: float,
    weights: ScoreWeights = ScoreWeights(),
) -> float:
    """Harmonic mean of the quality scores times the length penalty.

    The harmonic mean of (0, x) is 0, and any compression rate at or above
    100 zeroes the result.
    """
    if consistency <= 0.0 or comprehensiveness_ <= 0.0:
        quality = 0.0
    else:
        wc, wm = weights.consistency, weights.comprehensiveness
        quality = (wc + wm) / (wc / consistency + wm / comprehensiveness_)
    penalty = max(0.0, 1.0 - compression_rate_ / 100.0) ** weights.penalty_exponent
    return min(1.0, max(0.0, quality * penalty))


def _source_lemmas(source: FactTable) -> set[str]:
    from .facts import ClausePair, Conjunction, Lexeme, Phrase

    lemmas: set[str] = set()

    def visit(arg: object) -> None:
        if isinstance(arg, Lexeme):
            lemmas.add(arg.lemma)
        elif isinstance(arg, Phrase):
            for w in arg.words:
                lemmas.add(w.lemma)
        elif isinstance(arg, ClausePair):
            lemmas.add(arg.noun.lemma)
            lemmas.add(arg.verb.lemma)
        elif isinstance(arg, Conjunction):
            for c in arg.conjuncts:
                visit(c)

    for fact in source:
        for arg in fact.args:
            visit(arg)
    return lemmas


def _fact_lemmas(fact: Fact) -> set[str]:
    table = FactTable([fact])
    return _source_lemmas(table)


def build_report(
    document,
    summary: str,
    result: OverlapResult,
    backend_id: str,
    weights: ScoreWeights = ScoreWeights(),
) -> EvaluationReport:
    """Assemble scores, counts, and the matched / hallucinated / missed
    listings for one document.

    Hallucinated facts built entirely from source vocabulary are marked
    intrinsic; facts introducing novel content are extrinsic.
    """
    source: FactTable = document.truth
    source_tokens = len(tokenize(document.text))
    summary_tokens = len(tokenize(summary))

    summary_fact_count = result.overlap_count + len(result.unmatched_summary)
    consistency = factual_consistency_from_counts(result.overlap_count, summary_fact_count)
    comp = comprehensiveness(result, source)
    rate = compression_rate(source_tokens, summary_tokens)
    overall = overall_score(consistency, comp, rate, weights)

    known = _source_lemmas(source)
    hallucinated = [
        (fact, "intrinsic" if _fact_lemmas(fact) <= known else "extrinsic")
        for fact in result.unmatched_summary
    ]
    return EvaluationReport(
        document_id=document.id,
        backend_id=backend_id,
        consistency=consistency,
        comprehensiveness=comp,
        compression_rate=rate,
        overall=overall,
        source_facts=len(source),
        summary_facts=summary_fact_count,
        overlap=result.overlap_count,
        source_tokens=source_tokens,
        summary_tokens=summary_tokens,
        matched=list(result.matched_pairs),
        hallucinated=hallucinated,
        missed=list(result.unmatched_source),
        empty_summary=summary_fact_count == 0,
        over_length=rate > 100.0,
    )


def factual_consistency_from_counts(overlap: int, summary_facts: int) -> float:
    if summary_facts == 0:
        return 1.0
    return overlap / summary_facts


# --- serialization ----------------------------------------------------------------


def _fact_str(fact: Fact) -> str:
    return encode_fact(fact).split("\t", 1)[1]


def report_to_text(report: EvaluationReport) -> str:
    flags = []
    if report.empty_summary:
        flags.append("empty-summary")
    if report.over_length:
        flags.append("over-length")
    lines = [
        "# factharness evaluation report v1",
        f"document: {report.document_id}",
        f"backend: {report.backend_id}",
        f"consistency: {report.consistency:.9f}",
        f"comprehensiveness: {report.comprehensiveness:.9f}",
        f"compression-rate: {report.compression_rate:.9f}",
        f"overall: {report.overall:.9f}",
        f"source-facts: {report.source_facts}",
        f"summary-facts: {report.summary_facts}",
        f"overlap: {report.overlap}",
        f"source-tokens: {report.source_tokens}",
        f"summary-tokens: {report.summary_tokens}",
        "flags: " + (" ".join(flags) if flags else "-"),
        "[matched]",
    ]
    for src, summ, match in report.matched:
        lines.append(f"{match.verdict}\t{match.score:.9f}\t{_fact_str(summ)}\t<=\t{_fact_str(src)}")
    lines.append("[hallucinated]")
    for fact, kind in report.hallucinated:
        lines.append(f"{kind}\t{_fact_str(fact)}")
    lines.append("[missed]")
    for fact in report.missed:
        lines.append(_fact_str(fact))
    return "\n".join(lines) + "\n"


def parse_report_scores(text: str) -> dict[str, float | int | str]:
    """Read back the header metrics of a serialized report."""
    out: dict[str, float | int | str] = {}
    for line in text.splitlines():
        if line.startswith("["):
            break
        if line.startswith("#") or ": " not in line:
            continue
        key, _, value = line.partition(": ")
        if key in ("document", "backend", "flags"):
            out[key] = value
        elif key in ("consistency", "comprehensiveness", "compression-rate", "overall"):
            out[key] = float(value)
        else:
            out[key] = int(value)
    return out


AGGREGATE_HEADER = ["id", "backend", "consistency", "comprehensiveness",
                    "compression", "overall"]


def aggregate_csv(reports: list[EvaluationReport]) -> str:
    """One row per document x backend, ordered by document id."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(AGGREGATE_HEADER)
    for report in sorted(reports, key=lambda r: (r.document_id, r.backend_id)):
        writer.writerow([
            report.document_id,
            report.backend_id,
            f"{report.consistency:.9f}",
            f"{report.comprehensiveness:.9f}",
            f"{report.compression_rate:.9f}",
            f"{report.overall:.9f}",
        ])
    return buf.getvalue()
