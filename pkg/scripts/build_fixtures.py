#!/usr/bin/env python3
"""Regenerate the bundled fixture data deterministically.

Produces, under src/factharness/data/:
  resources/{synonyms,antonyms,taxonomy}.tsv, resources/vectors.txt
  packs/crime/corpus.tsv   (200 annotated sentences)
  packs/crime/freq.tsv     (analyzer output over that corpus)
  protocol/conformance_vectors.txt

Vector construction: each meaning group sits on a corner of a regular
simplex, so words from different groups have slightly negative cosine
(scaled score just under 0.5) while words in the same group stay close
(score ~0.99). That keeps "similar" judgments under the matcher's default
threshold fully controlled.
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "factharness" / "data"
sys.path.insert(0, str(ROOT / "src"))

from factharness.analyzer import ingest_annotated_corpus  # noqa: E402
from factharness.bridge import encode_line, escape_payload  # noqa: E402

# --- semantic resources ---------------------------------------------------------

SYNSETS = {
    "person": ["syn-person"],
    "victim": ["syn-victim"],
    "woman": ["syn-woman", "syn-victim"],
    "man": ["syn-man"],
    "teenager": ["syn-youth"],
    "youth": ["syn-youth"],
    "robber": ["syn-criminal"],
    "thief": ["syn-criminal"],
    "police": ["syn-police"],
    "officer": ["syn-police"],
    "detective": ["syn-detective"],
    "witness": ["syn-witness"],
    "waiter": ["syn-waiter"],
    "restaurant": ["syn-restaurant"],
    "diner": ["syn-restaurant"],
    "bar": ["syn-bar"],
    "place": ["syn-place"],
    "kill": ["syn-kill"],
    "murder": ["syn-kill"],
    "stab": ["syn-stab"],
    "attack": ["syn-attack"],
    "assault": ["syn-attack"],
    "harm": ["syn-harm"],
    "injure": ["syn-injure"],
    "hurt": ["syn-injure"],
    "rob": ["syn-rob"],
    "flee": ["syn-flee"],
    "escape": ["syn-flee"],
    "run": ["syn-run"],
    "say": ["syn-say"],
    "report": ["syn-say"],
    "confirm": ["syn-confirm"],
    "survive": ["syn-survive"],
    "recover": ["syn-survive"],
    "arrive": ["syn-arrive"],
    "respond": ["syn-respond"],
    "treat": ["syn-treat"],
    "hospitalize": ["syn-treat"],
    "call": ["syn-call"],
    "alert": ["syn-call"],
    "carry": ["syn-carry"],
    "hold": ["syn-carry"],
    "large": ["syn-large"],
    "big": ["syn-large"],
}

TAXONOMY = [
    ("syn-victim", "syn-person"),
    ("syn-woman", "syn-person"),
    ("syn-man", "syn-person"),
    ("syn-youth", "syn-person"),
    ("syn-criminal", "syn-person"),
    ("syn-police", "syn-person"),
    ("syn-detective", "syn-police"),
    ("syn-witness", "syn-person"),
    ("syn-waiter", "syn-person"),
    ("syn-restaurant", "syn-place"),
    ("syn-bar", "syn-place"),
    ("syn-stab", "syn-attack"),
    ("syn-rob", "syn-attack"),
    ("syn-attack", "syn-harm"),
    ("syn-injure", "syn-harm"),
    ("syn-kill", "syn-harm"),
    ("syn-run", "syn-flee"),
    ("syn-confirm", "syn-say"),
    ("syn-respond", "syn-arrive"),
]

ANTONYMS = [
    ("large", "small"),
    ("young", "old"),
    ("tall", "short"),
    ("male", "female"),
    ("black", "white"),
    ("quickly", "slowly"),
    ("open", "closed"),
    ("loud", "quiet"),
    ("day", "night"),
    ("survive", "die"),
]

# 33 meaning groups, 50 words, dimension 50.
VECTOR_GROUPS = [
    ["quickly", "swiftly"],
    ["slowly"],
    ["immediately", "promptly"],
    ["suddenly"],
    ["silently", "quietly"],
    ["warmly", "kindly"],
    ["loudly"],
    ["young", "youthful"],
    ["old", "elderly"],
    ["tall"],
    ["short"],
    ["female"],
    ["male"],
    ["asian"],
    ["italian"],
    ["greek"],
    ["mexican"],
    ["black"],
    ["white"],
    ["blue", "navy"],
    ["red", "crimson"],
    ["steel", "metal"],
    ["torn", "ripped"],
    ["armed"],
    ["violent", "brutal"],
    ["calm", "gentle"],
    ["nervous", "scared"],
    ["angry", "upset"],
    ["large", "huge"],
    ["small", "tiny"],
    ["dark", "gloomy"],
    ["bright"],
    ["local"],
]

DIM = 50


def _simplex_corner(index: int, count: int) -> list[float]:
    vec = [-1.0 / count] * count + [0.0] * (DIM - count)
    vec[index] += 1.0
    norm = math.sqrt(sum(x * x for x in vec))
    return [x / norm for x in vec]


def build_vectors() -> dict[str, list[float]]:
    count = len(VECTOR_GROUPS)
    vectors: dict[str, list[float]] = {}
    for gi, group in enumerate(VECTOR_GROUPS):
        corner = _simplex_corner(gi, count)
        for wi, word in enumerate(group):
            vec = list(corner)
            if wi > 0:
                # nudge along an unused axis: same-group cosine ~0.989
                axis = count + ((gi + wi) % (DIM - count))
                vec[axis] += 0.15
                norm = math.sqrt(sum(x * x for x in vec))
                vec = [x / norm for x in vec]
            vectors[word] = vec
    return vectors


def write_resources() -> None:
    out = DATA / "resources"
    out.mkdir(parents=True, exist_ok=True)
    lines = ["# lemma<TAB>synset-id[,synset-id...]"]
    for lemma in sorted(SYNSETS):
        lines.append(f"{lemma}\t{','.join(SYNSETS[lemma])}")
    (out / "synonyms.tsv").write_text("\n".join(lines) + "\n")

    lines = ["# lemmaA<TAB>lemmaB"]
    for a, b in ANTONYMS:
        lines.append(f"{a}\t{b}")
    (out / "antonyms.tsv").write_text("\n".join(lines) + "\n")

    lines = ["# synset-id<TAB>parent-id"]
    for child, parent in TAXONOMY:
        lines.append(f"{child}\t{parent}")
    (out / "taxonomy.tsv").write_text("\n".join(lines) + "\n")

    vectors = build_vectors()
    vec_lines = []
    for word in sorted(vectors):
        comps = " ".join(f"{x:.6f}" for x in vectors[word])
        vec_lines.append(f"{word} {comps}")
    (out / "vectors.txt").write_text("\n".join(vec_lines) + "\n")
    ids = {sid for sids in SYNSETS.values() for sid in sids}
    print(f"resources: {len(ids)} synsets, {len(ANTONYMS)} antonym pairs, "
          f"{len(vectors)} vectors of dimension {DIM}")


# --- annotated corpus ------------------------------------------------------------

PLACES = ["new jersey", "new jersey", "newark", "new jersey", "trenton",
          "camden", "newark", "hoboken"]
PERSONS = ["david chen", "maria lopez", "james cole", "david chen"]
ORGS = ["county police", "city council"]
ADVERBS = ["quickly", "quickly", "quickly", "swiftly", "swiftly",
           "immediately", "silently", "suddenly"]
SUBJECTS = [("victim", "victim"), ("suspect", "suspect"), ("witness", "witness"),
            ("officer", "officer"), ("waiter", "waiter")]
ADJS = ["young", "armed", "local", "violent", "nervous"]
VERBS = [("fled", "flee"), ("escaped", "escape"), ("arrived", "arrive"),
         ("testified", "testify"), ("collapsed", "collapse")]
NOUNS = [("store", "store"), ("street", "street"), ("knife", "knife"),
         ("bag", "bag"), ("report", "report")]


def _rows(rows: list[tuple]) -> str:
    return "\n".join(
        f"{i + 1}\t{s}\t{l}\t{p}\t{ne}\t{h}\t{d}" for i, (s, l, p, ne, h, d) in enumerate(rows)
    )


def build_corpus() -> str:
    sentences: list[str] = []
    n = 0
    while len(sentences) < 200:
        adj = ADJS[(n + n // 5) % len(ADJS)]
        subj_s, subj_l = SUBJECTS[(n + n // 7) % len(SUBJECTS)]
        verb_s, verb_l = VERBS[n % len(VERBS)]
        adv = ADVERBS[n % len(ADVERBS)]
        place = PLACES[n % len(PLACES)]
        person = PERSONS[n % len(PERSONS)]
        org = ORGS[n % len(ORGS)]
        noun_s, noun_l = NOUNS[n % len(NOUNS)]
        kind = n % 5
        if kind == 0:
            # A young victim fled quickly
            sentences.append(_rows([
                ("A", "a", "determiner", "-", 3, "det"),
                (adj.capitalize() if False else adj, adj, "adjective", "-", 3, "amod"),
                (subj_s, subj_l, "noun", "-", 4, "nsubj"),
                (verb_s, verb_l, "verb", "-", 0, "root"),
                (adv, adv, "adverb", "-", 4, "advmod"),
            ]))
        elif kind == 1:
            # The suspect escaped in <Place>
            place_words = place.split()
            rows = [
                ("The", "the", "determiner", "-", 2, "det"),
                (subj_s, subj_l, "noun", "-", 3, "nsubj"),
                (verb_s, verb_l, "verb", "-", 0, "root"),
                ("in", "in", "preposition", "-", 4 + len(place_words), "case"),
            ]
            for word in place_words:
                rows.append((word.title(), word, "proper-noun", "place", 3, "obl"))
            sentences.append(_rows(rows))
        elif kind == 2:
            # <Person> testified <adv>
            person_words = person.split()
            rows = []
            head = len(person_words) + 1
            for word in person_words:
                rows.append((word.title(), word, "proper-noun", "person", head, "nsubj"))
            rows.append((verb_s, verb_l, "verb", "-", 0, "root"))
            rows.append((adv, adv, "adverb", "-", head, "advmod"))
            sentences.append(_rows(rows))
        elif kind == 3:
            # The <org> found a <adj> <noun>
            org_words = org.split()
            rows = [("The", "the", "determiner", "-", len(org_words) + 1, "det")]
            for word in org_words:
                rows.append((word.title(), word, "proper-noun", "org", len(org_words) + 2, "nsubj"))
            verb_idx = len(rows) + 1
            rows.append(("found", "find", "verb", "-", 0, "root"))
            rows.append(("a", "a", "determiner", "-", verb_idx + 3, "det"))
            rows.append((adj, adj, "adjective", "-", verb_idx + 3, "amod"))
            rows.append((noun_s, noun_l, "noun", "-", verb_idx, "dobj"))
            sentences.append(_rows(rows))
        else:
            # A <adj> <noun> appeared in <Place> : amod + place NE
            place_words = place.split()
            rows = [
                ("A", "a", "determiner", "-", 3, "det"),
                (adj, adj, "adjective", "-", 3, "amod"),
                (noun_s, noun_l, "noun", "-", 4, "nsubj"),
                ("appeared", "appear", "verb", "-", 0, "root"),
                ("in", "in", "preposition", "-", 5 + len(place_words), "case"),
            ]
            for word in place_words:
                rows.append((word.title(), word, "proper-noun", "place", 4, "obl"))
            sentences.append(_rows(rows))
        n += 1
    return "\n\n".join(sentences) + "\n"


def write_corpus() -> None:
    out = DATA / "packs" / "crime"
    corpus = build_corpus()
    (out / "corpus.tsv").write_text(corpus)
    table = ingest_annotated_corpus(corpus.splitlines())
    (out / "freq.tsv").write_text(table.to_text())
    sentence_count = corpus.strip().count("\n\n") + 1
    print(f"corpus: {sentence_count} sentences, {len(table)} frequency entries")


# --- protocol conformance vectors -------------------------------------------------


def build_documents() -> list[str]:
    big_block = (
        "A 44 years old female victim got stabbed by 3 men at a Asian "
        "restaurant in New Jersey at 8 p.m. on Friday.\n"
        "The men fled quickly. Police said that the victim survived.\n"
    )
    big = big_block * (50_000 // len(big_block.encode("utf-8")) + 1)
    assert len(big.encode("utf-8")) > 50_000
    return [
        "hello",
        "two\nlines",
        "trailing spaces   ",
        "backslash \\ and \\n literal",
        "carriage\rreturn and mix\r\nline",
        "unicode: café münchen 東京",
        "",
        "A 44 years old female victim got stabbed by 3 men at a Asian "
        "restaurant in New Jersey at 8 p.m. on Friday.",
        "paragraph one.\n\nparagraph two has more text.\n\nparagraph three.",
        big,
    ]


def write_vectors_file() -> None:
    out = DATA / "protocol"
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for doc in build_documents():
        line = encode_line(doc)
        records.append(
            f"doc: {escape_payload(doc)}\nrequest: {line}\nresponse: {line}"
        )
    header = (
        "# factharness protocol conformance vectors v1\n"
        "# Each record: the escaped document, the exact request line, and the\n"
        "# exact response an identity (echo) backend must produce.\n\n"
    )
    (out / "conformance_vectors.txt").write_text(header + "\n\n".join(records) + "\n")
    print(f"protocol: {len(records)} conformance vectors")


if __name__ == "__main__":
    write_resources()
    write_corpus()
    write_vectors_file()
