"""Shared test oracles and fixture paths.

The oracles here are deliberately independent of the implementation paths
they check: an Earley recognizer for grammar membership and exhaustive
bipartite matching for overlap counts.
"""

from __future__ import annotations

from pathlib import Path

from factharness.facts import FactTable
from factharness.grammar import BoundGrammar, Literal, NonTerminal, Slot
from factharness.matcher import SemanticResources, fact_match

DATA = Path(__file__).resolve().parent.parent / "src" / "factharness" / "data"
RESOURCES = DATA / "resources"
CRIME = DATA / "packs" / "crime"
STREET = DATA / "packs" / "street"
PROTOCOL_VECTORS = DATA / "protocol" / "conformance_vectors.txt"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


def resource_paths() -> tuple[str, str, str, str]:
    return (
        str(RESOURCES / "synonyms.tsv"),
        str(RESOURCES / "antonyms.tsv"),
        str(RESOURCES / "taxonomy.tsv"),
        str(RESOURCES / "vectors.txt"),
    )


def pack_vocabulary(pack: Path, resources: SemanticResources | None = None):
    """Extraction vocabulary for a fixture pack, as evaluate builds it."""
    from factharness.analyzer import FrequencyTable
    from factharness.extractor import ExtractionVocabulary, load_lexicon
    from factharness.generator import collect_lexicon, load_fact_tree

    tree = load_fact_tree(pack / "tree.json")
    freq = FrequencyTable.from_text((pack / "freq.tsv").read_text())
    extra = load_lexicon(str(pack / "lexicon-extra.tsv"))
    vocab = ExtractionVocabulary(collect_lexicon(tree, freq, extra))
    if resources is not None:
        vocab.expand_synonyms(resources)
    return vocab


def earley_accepts(bound: BoundGrammar, tokens: list[str], start: str | None = None) -> bool:
    """Chart-parser recognition oracle over the bound grammar.

    Slots expand to their binding's whitespace-split tokens and literals to
    theirs, mirroring how derivation linearizes symbols, but recognition
    itself is classic Earley over the token sequence.
    """
    grammar = bound.grammar
    start = start or grammar.start

    def expand(symbols) -> list:
        out = []
        for sym in symbols:
            if isinstance(sym, NonTerminal):
                out.append(("nt", sym.name))
            elif isinstance(sym, Literal):
                out.extend(("t", tok) for tok in sym.text.split())
            elif isinstance(sym, Slot):
                out.extend(("t", tok) for tok in bound.bindings[sym.ref].split())
        return out

    rules: dict[str, list[list]] = {
        name: [expand(alt.symbols) for alt in alts]
        for name, alts in grammar.productions.items()
    }

    # Earley items: (lhs, rhs tuple, dot, origin)
    n = len(tokens)
    chart: list[set] = [set() for _ in range(n + 1)]
    for rhs in rules[start]:
        chart[0].add((start, tuple(rhs), 0, 0))
    for i in range(n + 1):
        added = True
        while added:
            added = False
            for item in list(chart[i]):
                lhs, rhs, dot, origin = item
                if dot < len(rhs):
                    kind, value = rhs[dot]
                    if kind == "nt":
                        for sub in rules[value]:
                            new = (value, tuple(sub), 0, i)
                            if new not in chart[i]:
                                chart[i].add(new)
                                added = True
                    elif i < n and value == tokens[i]:
                        new = (lhs, rhs, dot + 1, origin)
                        if new not in chart[i + 1]:
                            chart[i + 1].add(new)
                else:
                    for other in list(chart[origin]):
                        olhs, orhs, odot, oorigin = other
                        if odot < len(orhs) and orhs[odot] == ("nt", lhs):
                            new = (olhs, orhs, odot + 1, oorigin)
                            if new not in chart[i]:
                                chart[i].add(new)
                                added = True
    return any(
        lhs == start and dot == len(rhs) and origin == 0
        for (lhs, rhs, dot, origin) in chart[n]
    )


def max_matching_count(source: FactTable, summary: FactTable,
                       res: SemanticResources, threshold: float = 0.5) -> int:
    """Maximum bipartite matching size over the boolean fact-match graph,
    via augmenting paths; the independent check for greedy overlap."""
    src = source.ordered()
    summ = summary.ordered()
    edges = [
        [j for j, s in enumerate(src)
         if fact_match(f, s, res, threshold).verdict in ("exact", "synonym", "similar")]
        for f in summ
    ]
    match_of_src: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for j in edges[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_of_src or augment(match_of_src[j], seen):
                match_of_src[j] = i
                return True
        return False

    count = 0
    for i in range(len(summ)):
        if augment(i, set()):
            count += 1
    return count
