"""Semantic matcher: decides whether two facts denote the same content.

Nouns and verbs match through the synset taxonomy (shared synset, or path
similarity 1/(1 + shortest path) between their nearest synsets); adjectives
and adverbs match through word-vector cosine mapped to [0, 1]. A listed
antonym pair is a hard contradiction and vetoes the match regardless of
vector similarity.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .facts import (
    ClausePair,
    EmptySlot,
    Fact,
    FactArg,
    FactTable,
    Lexeme,
    Phrase,
    RelationKind,
)

DEFAULT_THRESHOLD = 0.5

EXACT = "exact"
SYNONYM = "synonym"
SIMILAR = "similar"
ANTONYM_CONFLICT = "antonym-conflict"
NO_MATCH = "no-match"

_POSITIVE = {EXACT: 3, SYNONYM: 2, SIMILAR: 1}


class ResourceError(ValueError):
    """Unparseable or inconsistent semantic resource file."""


@dataclass(frozen=True)
class MatchResult:
    verdict: str
    score: float


_NO = MatchResult(NO_MATCH, 0.0)


@dataclass
class SemanticResources:
    """Lexical data backing the matcher; immutable after loading."""

    synsets: dict[str, frozenset[str]] = field(default_factory=dict)
    antonyms: set[frozenset[str]] = field(default_factory=set)
    parents: dict[str, str] = field(default_factory=dict)
    vectors: dict[str, tuple[float, ...]] = field(default_factory=dict)
    members: dict[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.members:
            rev: dict[str, set[str]] = {}
            for lemma, sids in self.synsets.items():
                for sid in sids:
                    rev.setdefault(sid, set()).add(lemma)
            self.members = {sid: frozenset(ls) for sid, ls in rev.items()}
        self._adjacency: dict[str, set[str]] = {}
        for child, parent in self.parents.items():
            self._adjacency.setdefault(child, set()).add(parent)
            self._adjacency.setdefault(parent, set()).add(child)

    def synset_distance(self, a_sids: frozenset[str], b_sids: frozenset[str]) -> int | None:
        """Shortest undirected taxonomy path between the nearest synsets."""
        if not a_sids or not b_sids:
            return None
        if a_sids & b_sids:
            return 0
        seen = set(a_sids)
        queue = deque((sid, 0) for sid in a_sids)
        while queue:
            sid, dist = queue.popleft()
            for nxt in self._adjacency.get(sid, ()):
                if nxt in b_sids:
                    return dist + 1
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, dist + 1))
        return None


def load_resources(
    synonym_path: str,
    antonym_path: str,
    taxonomy_path: str,
    vectors_path: str,
) -> SemanticResources:
    """Load the four resource files; lemmas are lowercased on the way in."""
    synsets: dict[str, frozenset[str]] = {}
    for lineno, parts in _tsv_rows(synonym_path, 2):
        lemma, sids = parts
        ids = frozenset(s.strip() for s in sids.split(",") if s.strip())
        if not ids:
            raise ResourceError(f"{synonym_path}:{lineno}: no synset ids for {lemma!r}")
        synsets[lemma.lower()] = synsets.get(lemma.lower(), frozenset()) | ids

    antonyms: set[frozenset[str]] = set()
    for lineno, parts in _tsv_rows(antonym_path, 2):
        a, b = (p.lower() for p in parts)
        if a == b:
            raise ResourceError(f"{antonym_path}:{lineno}: a lemma cannot antonym itself")
        antonyms.add(frozenset((a, b)))

    parents: dict[str, str] = {}
    for lineno, parts in _tsv_rows(taxonomy_path, 2):
        child, parent = parts
        parents[child] = parent

    vectors: dict[str, tuple[float, ...]] = {}
    dim: int | None = None
    with open(vectors_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            word = fields[0].lower()
            try:
                vec = tuple(float(x) for x in fields[1:])
            except ValueError as exc:
                raise ResourceError(f"{vectors_path}:{lineno}: {exc}") from exc
            if not vec:
                raise ResourceError(f"{vectors_path}:{lineno}: vector has no components")
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise ResourceError(
                    f"{vectors_path}:{lineno}: dimension {len(vec)} != {dim}"
                )
            vectors[word] = vec
    return SemanticResources(synsets, antonyms, parents, vectors)


def _tsv_rows(path: str, width: int):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != width:
                raise ResourceError(f"{path}:{lineno}: expected {width} tab-separated columns")
            yield lineno, parts


# --- term and fact matching ----------------------------------------------------

_TAXONOMY_POS = ("noun", "proper-noun", "verb")
_VECTOR_POS = ("adjective", "adverb")


def term_match(
    a: Lexeme,
    b: Lexeme,
    res: SemanticResources,
    threshold: float = DEFAULT_THRESHOLD,
) -> MatchResult:
    """Symmetric lexical comparison of two words."""
    if a.lemma == b.lemma:
        return MatchResult(EXACT, 1.0)
    sa = res.synsets.get(a.lemma, frozenset())
    sb = res.synsets.get(b.lemma, frozenset())
    if sa & sb:
        return MatchResult(SYNONYM, 1.0)
    if frozenset((a.lemma, b.lemma)) in res.antonyms:
        return MatchResult(ANTONYM_CONFLICT, 0.0)
    score = 0.0
    if a.pos in _TAXONOMY_POS and b.pos in _TAXONOMY_POS:
        dist = res.synset_distance(sa, sb)
        if dist is not None:
            score = 1.0 / (1.0 + dist)
    elif a.pos in _VECTOR_POS and b.pos in _VECTOR_POS:
        va = res.vectors.get(a.lemma)
        vb = res.vectors.get(b.lemma)
        if va is not None and vb is not None:
            score = (_cosine(va, vb) + 1.0) / 2.0
    if score >= threshold:
        return MatchResult(SIMILAR, score)
    return MatchResult(NO_MATCH, min(score, threshold - 1e-12))


def _cosine(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def _arg_match(a: FactArg, b: FactArg, res: SemanticResources, threshold: float) -> MatchResult:
    if isinstance(a, EmptySlot) or isinstance(b, EmptySlot):
        if isinstance(a, EmptySlot) and isinstance(b, EmptySlot):
            return MatchResult(EXACT, 1.0)
        return _NO
    if isinstance(a, Lexeme) and isinstance(b, Lexeme):
        return term_match(a, b, res, threshold)
    if isinstance(a, Phrase) and isinstance(b, Phrase):
        if len(a.words) != len(b.words):
            return _NO
        return _combine(
            term_match(x, y, res, threshold) for x, y in zip(a.words, b.words)
        )
    if isinstance(a, ClausePair) and isinstance(b, ClausePair):
        return _combine((
            term_match(a.noun, b.noun, res, threshold),
            term_match(a.verb, b.verb, res, threshold),
        ))
    return _NO


def _combine(results) -> MatchResult:
    verdict_rank = _POSITIVE[EXACT]
    verdict = EXACT
    score = 1.0
    for r in results:
        if r.verdict == ANTONYM_CONFLICT:
            return MatchResult(ANTONYM_CONFLICT, 0.0)
        if r.verdict == NO_MATCH:
            return MatchResult(NO_MATCH, min(0.0, r.score))
        score = min(score, r.score)
        if _POSITIVE[r.verdict] < verdict_rank:
            verdict_rank = _POSITIVE[r.verdict]
            verdict = r.verdict
    return MatchResult(verdict, score)


def _canonical_args(fact: Fact) -> tuple[FactArg, ...]:
    args = fact.args
    if (
        fact.kind is RelationKind.SUBJECT_VERB_OBJECT
        and fact.passive
        and not isinstance(args[2], EmptySlot)
    ):
        return (args[2], args[1], args[0])
    return args


def fact_match(
    f: Fact,
    g: Fact,
    res: SemanticResources,
    threshold: float = DEFAULT_THRESHOLD,
) -> MatchResult:
    """Positional comparison of two facts of the same kind.

    Every argument pair must match (exact, synonym, or similar); a single
    antonym-conflict argument makes the whole fact a conflict. The score is
    the minimum argument score; voice normalization is applied first.
    """
    if f.kind is not g.kind:
        return _NO
    return _combine(
        _arg_match(a, b, res, threshold)
        for a, b in zip(_canonical_args(f), _canonical_args(g))
    )


# --- source/summary overlap -----------------------------------------------------


@dataclass
class OverlapResult:
    matched_pairs: list[tuple[Fact, Fact, MatchResult]]
    unmatched_summary: list[Fact]
    unmatched_source: list[Fact]

    @property
    def overlap_count(self) -> int:
        return len(self.matched_pairs)


def overlap(
    source: FactTable,
    summary: FactTable,
    res: SemanticResources,
    threshold: float = DEFAULT_THRESHOLD,
) -> OverlapResult:
    """Greedy one-to-one matching of summary facts onto source facts.

    Summary facts, in serialization order, each claim the highest-scoring
    still-unclaimed source fact; ties go to the earlier source fact. Each
    fact appears in at most one matched pair.
    """
    source_facts = source.ordered()
    claimed = [False] * len(source_facts)
    matched: list[tuple[Fact, Fact, MatchResult]] = []
    unmatched_summary: list[Fact] = []
    for sfact in summary.ordered():
        best_idx = -1
        best: MatchResult | None = None
        for i, src in enumerate(source_facts):
            if claimed[i]:
                continue
            result = fact_match(sfact, src, res, threshold)
            if result.verdict not in _POSITIVE:
                continue
            if best is None or result.score > best.score:
                best = result
                best_idx = i
        if best is None:
            unmatched_summary.append(sfact)
        else:
            claimed[best_idx] = True
            matched.append((source_facts[best_idx], sfact, best))
    unmatched_source = [f for f, c in zip(source_facts, claimed) if not c]
    return OverlapResult(matched, unmatched_summary, unmatched_source)
