"""Corpus analyzer: mines lexeme and relation frequencies from a
pre-annotated token stream and samples from them.

The input is plain text, one token per line with tab-separated columns
(index, surface, lemma, pos, ne-label, head-index, dep-label) and a blank
line between sentences; no model inference happens here. Counts feed
frequency-weighted sampling during document generation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .facts import POS_TAGS, Lexeme

NE_CATEGORIES = {
    "person": "named-entity:person",
    "place": "named-entity:place",
    "org": "named-entity:org",
}
OPEN_CLASS = ("noun", "verb", "adjective", "adverb")
PAIR_CATEGORIES = ("noun-modifier-pair", "verb-modifier-pair")
CATEGORIES = tuple(NE_CATEGORIES.values()) + OPEN_CLASS + PAIR_CATEGORIES

# Dependency labels that mark adjectival / adverbial modification.
ADJ_MOD_DEP = "amod"
ADV_MOD_DEP = "advmod"

_NO_ENTITY = {"", "-", "O", "o"}


class AnalyzerError(ValueError):
    """Corpus or frequency-table input the analyzer cannot use."""


class MalformedRowError(AnalyzerError):
    def __init__(self, lineno: int, message: str) -> None:
        super().__init__(f"corpus line {lineno}: {message}")
        self.lineno = lineno


class EmptyCategoryError(AnalyzerError):
    """Sampling was asked for a category with no entries."""


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    ne_label: str
    head: int      # 1-based index within the sentence, 0 = root
    dep: str


class FrequencyTable:
    """Counts of lexemes and modifier pairs keyed by (category, key).

    Keys are lemmas; pair categories use "modifier|head"; multi-word named
    entities join lemmas with single spaces. Immutable after construction.
    """

    def __init__(self, entries: dict[tuple[str, str], int] | None = None) -> None:
        self._entries: dict[tuple[str, str], int] = {}
        for (category, key), count in (entries or {}).items():
            if count < 1:
                raise AnalyzerError(f"count for {category}/{key} must be >= 1, got {count}")
            self._entries[(category, key)] = count

    @property
    def entries(self) -> dict[tuple[str, str], int]:
        return dict(self._entries)

    def count(self, category: str, key: str) -> int:
        return self._entries.get((category, key), 0)

    def total(self, category: str) -> int:
        return sum(c for (cat, _), c in self._entries.items() if cat == category)

    def totals(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for (cat, _), c in self._entries.items():
            out[cat] = out.get(cat, 0) + c
        return out

    def keys(self, category: str) -> list[str]:
        return sorted(key for (cat, key) in self._entries if cat == category)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FrequencyTable):
            return NotImplemented
        return self._entries == other._entries

    __hash__ = None  # type: ignore[assignment]

    def filtered(self, min_count: int) -> "FrequencyTable":
        """Drop entries below min_count (no smoothing is ever applied)."""
        return FrequencyTable(
            {k: c for k, c in self._entries.items() if c >= min_count}
        )

    def to_text(self) -> str:
        lines = ["# factharness frequency table v1"]
        for (category, key) in sorted(self._entries):
            lines.append(f"{category}\t{key}\t{self._entries[(category, key)]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FrequencyTable":
        entries: dict[tuple[str, str], int] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise AnalyzerError(f"frequency line {lineno}: expected 3 columns")
            category, key, count = parts
            try:
                entries[(category, key)] = entries.get((category, key), 0) + int(count)
            except ValueError as exc:
                raise AnalyzerError(f"frequency line {lineno}: bad count {count!r}") from exc
        return cls(entries)


def parse_corpus(lines: Iterable[str]) -> list[list[Token]]:
    """Parse the tab-separated annotated corpus into sentences of tokens."""
    sentences: list[list[Token]] = []
    current: list[Token] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if line.startswith("#"):
            continue
        if not line.strip():
            if current:
                sentences.append(current)
                current = []
            continue
        cols = line.split("\t")
        if len(cols) != 7:
            raise MalformedRowError(lineno, f"expected 7 columns, got {len(cols)}")
        index_s, surface, lemma, pos, ne, head_s, dep = cols
        try:
            index = int(index_s)
            head = int(head_s)
        except ValueError:
            raise MalformedRowError(lineno, "index and head-index must be integers") from None
        if index != len(current) + 1:
            raise MalformedRowError(lineno, f"token index {index} out of sequence")
        if pos not in POS_TAGS:
            raise MalformedRowError(lineno, f"unknown pos tag {pos!r}")
        if not surface or not lemma:
            raise MalformedRowError(lineno, "surface and lemma must be non-empty")
        current.append(Token(surface, lemma.lower(), pos, ne.strip(), head, dep))
    if current:
        sentences.append(current)
    for si, sentence in enumerate(sentences):
        for token in sentence:
            if token.head < 0 or token.head > len(sentence):
                raise MalformedRowError(0, f"sentence {si + 1}: head index {token.head} out of range")
    return sentences


def ingest_annotated_corpus(lines: Iterable[str]) -> FrequencyTable:
    """Count named entities, open-class lemmas, and modifier pairs.

    Consecutive tokens sharing a named-entity label merge into one span
    keyed by their joined lemmas. An empty stream is a valid empty table.
    """
    entries: dict[tuple[str, str], int] = {}

    def bump(category: str, key: str) -> None:
        entries[(category, key)] = entries.get((category, key), 0) + 1

    for sentence in parse_corpus(lines):
        span_label = ""
        span_lemmas: list[str] = []

        def flush_span() -> None:
            nonlocal span_label, span_lemmas
            if span_label:
                bump(NE_CATEGORIES[span_label], " ".join(span_lemmas))
            span_label = ""
            span_lemmas = []

        for token in sentence:
            label = token.ne_label if token.ne_label not in _NO_ENTITY else ""
            if label and label not in NE_CATEGORIES:
                raise AnalyzerError(f"unknown named-entity label {label!r}")
            if label == span_label and label:
                span_lemmas.append(token.lemma)
            else:
                flush_span()
                if label:
                    span_label = label
                    span_lemmas = [token.lemma]
            if token.pos in OPEN_CLASS:
                bump(token.pos, token.lemma)
            if token.dep == ADJ_MOD_DEP and 1 <= token.head <= len(sentence):
                head = sentence[token.head - 1]
                if head.pos in ("noun", "proper-noun"):
                    bump("noun-modifier-pair", f"{token.lemma}|{head.lemma}")
            if token.dep == ADV_MOD_DEP and 1 <= token.head <= len(sentence):
                head = sentence[token.head - 1]
                if head.pos == "verb":
                    bump("verb-modifier-pair", f"{token.lemma}|{head.lemma}")
        flush_span()
    return FrequencyTable(entries)


def merge(a: FrequencyTable, b: FrequencyTable) -> FrequencyTable:
    """Pointwise sum of two tables; commutative and associative."""
    entries = a.entries
    for key, count in b.entries.items():
        entries[key] = entries.get(key, 0) + count
    return FrequencyTable(entries)


_CATEGORY_POS = {
    "noun": "noun",
    "verb": "verb",
    "adjective": "adjective",
    "adverb": "adverb",
    "named-entity:person": "proper-noun",
    "named-entity:place": "proper-noun",
    "named-entity:org": "proper-noun",
}


def sample_key(table: FrequencyTable, category: str, rng: random.Random) -> str:
    """Pick a key with probability proportional to its count.

    Entries are walked in lexicographic key order, so a fixed seed and a
    fixed table give the same sequence everywhere.
    """
    keys = table.keys(category)
    if not keys:
        raise EmptyCategoryError(f"no entries for category {category!r}")
    counts = [table.count(category, k) for k in keys]
    pick = rng.randrange(sum(counts))
    for key, count in zip(keys, counts):
        pick -= count
        if pick < 0:
            return key
    return keys[-1]  # unreachable; randrange is bounded by the total


def sample_lexeme(table: FrequencyTable, category: str, rng: random.Random) -> Lexeme:
    """Sample a lexeme for the category; named entities come back
    title-cased. Multi-word named-entity keys keep their space-joined
    lemma (callers that need word-level arguments split them)."""
    if category in PAIR_CATEGORIES:
        raise AnalyzerError(f"cannot sample a lexeme from pair category {category!r}")
    if category not in _CATEGORY_POS:
        raise AnalyzerError(f"unknown sampling category {category!r}")
    key = sample_key(table, category, rng)
    pos = _CATEGORY_POS[category]
    surface = key.title() if pos == "proper-noun" else key
    return Lexeme(surface, pos, key)
