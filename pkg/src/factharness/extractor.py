"""Fact extractor: recovers relation instances from free summary text.

Extraction is lexicon-guided: tokens are tagged by lookup against the
generation vocabulary (longest phrase match first, then single words, then
an -ly adverb / digit fallback; anything else is skipped), and finite
clause patterns walk the tagged sentence. Clause-level patterns apply
before plain subject-verb-object so a span is never counted twice for the
same relation. The extractor can only emit arguments it saw in the text,
so it cannot hallucinate content itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .facts import (
    EMPTY,
    ClausePair,
    Conjunction,
    Fact,
    FactArg,
    FactTable,
    Lexeme,
    Phrase,
    RelationKind,
    decode_arg,
    lexeme,
    make_fact,
)
from .matcher import SemanticResources

ABBREVIATIONS = frozenset({"p.m.", "a.m.", "mr.", "mrs.", "dr.", "st.", "no."})
PUNCTUATION = frozenset(".,;:!?()[]'\"")
SENTENCE_END = frozenset(".!?")

DETERMINERS = frozenset({"a", "an", "the"})
AUXILIARIES = frozenset({"is", "are", "was", "were", "am", "be", "been",
                         "being", "got", "get", "gets", "has", "have", "had"})
PREPOSITIONS = frozenset({"at", "in", "on", "by", "to", "from", "with",
                          "near", "of", "into", "during"})
COORDINATORS = frozenset({"and"})
COMPLEMENTIZERS = frozenset({"that"})
RELATIVES = frozenset({"who", "which"})
SUBORDINATORS = frozenset({"before", "after", "because", "while"})
PRONOUNS = frozenset({"she", "he", "they", "it"})


def tokenize(text: str) -> list[str]:
    """Whitespace-and-punctuation tokenization; punctuation marks are their
    own tokens and listed abbreviations ("p.m.") stay whole."""
    tokens: list[str] = []
    for chunk in text.split():
        tokens.extend(_split_chunk(chunk))
    return tokens


def _split_chunk(chunk: str) -> list[str]:
    if not chunk:
        return []
    if chunk.lower() in ABBREVIATIONS:
        return [chunk]
    if chunk[0] in PUNCTUATION:
        return [chunk[0]] + _split_chunk(chunk[1:])
    if chunk[-1] in PUNCTUATION:
        return _split_chunk(chunk[:-1]) + [chunk[-1]]
    return [chunk]


class ExtractionVocabulary:
    """The known lexicon: single words and multi-word phrases, indexed by
    lowercased surface and by lemma, optionally grown with synonyms from
    the semantic resources so paraphrased summaries still tag."""

    def __init__(self, entries: Iterable[Lexeme | Phrase] = ()) -> None:
        self.words: dict[str, Lexeme] = {}
        self.phrases: dict[tuple[str, ...], Phrase] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: Lexeme | Phrase) -> None:
        if isinstance(entry, Phrase):
            self.phrases[tuple(w.surface.lower() for w in entry.words)] = entry
            self.phrases.setdefault(tuple(w.lemma for w in entry.words), entry)
            return
        self.words.setdefault(entry.surface.lower(), entry)
        self.words.setdefault(entry.lemma, entry)

    def lookup(self, token: str) -> Lexeme | None:
        entry = self.words.get(token.lower())
        if entry is None:
            entry = self._verb_from_inflection(token.lower())
        if entry is None:
            return None
        return Lexeme(token, entry.pos, entry.lemma)

    def _verb_from_inflection(self, low: str) -> Lexeme | None:
        """Map unseen -ing/-ed forms onto known verb lemmas."""
        for suffix in ("ing", "ed"):
            if not low.endswith(suffix) or len(low) <= len(suffix) + 1:
                continue
            stem = low[: -len(suffix)]
            candidates = [stem, stem + "e"]
            if len(stem) > 2 and stem[-1] == stem[-2]:
                candidates.append(stem[:-1])
            for candidate in candidates:
                entry = self.words.get(candidate)
                if entry is not None and entry.pos == "verb":
                    return entry
        return None

    def match_phrase(self, tokens: list[str], start: int) -> tuple[Phrase, int] | None:
        """Longest phrase match at tokens[start:], or None."""
        best: tuple[Phrase, int] | None = None
        for key, phrase in self.phrases.items():
            n = len(key)
            if start + n > len(tokens):
                continue
            if tuple(t.lower() for t in tokens[start:start + n]) == key:
                if best is None or n > best[1]:
                    best = (phrase, n)
        return best

    def expand_synonyms(self, resources: SemanticResources) -> None:
        """Add co-synset lemmas of known words so synonym swaps in a summary
        still resolve to taggable lexemes."""
        additions: list[Lexeme] = []
        for entry in set(self.words.values()):
            for sid in resources.synsets.get(entry.lemma, ()):
                for other in resources.members.get(sid, ()):
                    if other != entry.lemma and other not in self.words:
                        additions.append(Lexeme(other, entry.pos, other))
        for lex in additions:
            self.add(lex)

    @classmethod
    def from_lexicon_file(cls, path: str, resources: SemanticResources | None = None
                          ) -> "ExtractionVocabulary":
        vocab = cls(load_lexicon(path))
        if resources is not None:
            vocab.expand_synonyms(resources)
        return vocab


def load_lexicon(path: str) -> list[Lexeme | Phrase]:
    """Read a lexicon file: one encoded argument per line (see facts)."""
    entries: list[Lexeme | Phrase] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            value = decode_arg(line)
            if not isinstance(value, (Lexeme, Phrase)):
                raise ValueError(f"lexicon entries must be words or phrases: {line!r}")
            entries.append(value)
    return entries


def save_lexicon(path: str, entries: Iterable[Lexeme | Phrase]) -> None:
    from .facts import encode_arg

    seen: dict[str, None] = {}
    for entry in entries:
        seen.setdefault(encode_arg(entry), None)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# factharness lexicon v1\n")
        for line in sorted(seen):
            fh.write(line + "\n")


# --- tagging -------------------------------------------------------------------


@dataclass
class _Unit:
    kind: str  # word | phrase | func | punct | unknown
    surface: str
    lexeme: Lexeme | None = None
    phrase: Phrase | None = None
    func: str = ""  # det | prep | aux | coord | comp | rel | subord | pron

    @property
    def pos(self) -> str:
        return self.lexeme.pos if self.lexeme else ""


_FUNC_CLASSES = (
    ("det", DETERMINERS),
    ("prep", PREPOSITIONS),
    ("aux", AUXILIARIES),
    ("coord", COORDINATORS),
    ("comp", COMPLEMENTIZERS),
    ("rel", RELATIVES),
    ("subord", SUBORDINATORS),
    ("pron", PRONOUNS),
)


def _tag(tokens: list[str], vocab: ExtractionVocabulary) -> list[_Unit]:
    units: list[_Unit] = []
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if token in PUNCTUATION:
            units.append(_Unit("punct", token))
            i += 1
            continue
        matched = vocab.match_phrase(tokens, i)
        if matched is not None:
            phrase, length = matched
            units.append(_Unit("phrase", " ".join(tokens[i:i + length]), phrase=phrase))
            i += length
            continue
        low = token.lower()
        func = next((name for name, words in _FUNC_CLASSES if low in words), "")
        if func:
            units.append(_Unit("func", token, func=func))
        else:
            lex = vocab.lookup(token)
            if lex is not None:
                units.append(_Unit("word", token, lexeme=lex))
            elif low in _NUMBER_WORDS:
                units.append(_Unit("word", token,
                                   lexeme=Lexeme(token, "number", _NUMBER_WORDS[low])))
            elif low.endswith("ly") and len(low) > 3 and low.isalpha():
                units.append(_Unit("word", token, lexeme=lexeme(token, "adverb")))
            elif low.isdigit():
                units.append(_Unit("word", token, lexeme=lexeme(token, "number")))
            else:
                units.append(_Unit("unknown", token))
        i += 1
    return units


# Spelled-out counts normalize to digit lemmas so "three men" matches "3 men".
_NUMBER_WORDS = {
    "one": "1", "two": "2", "three": "3", "four": "4", "five": "5",
    "six": "6", "seven": "7", "eight": "8", "nine": "9", "ten": "10",
    "eleven": "11", "twelve": "12",
}


_NOUNISH = ("noun", "proper-noun")
_MODIFIER_POS = ("adjective", "number")


@dataclass
class _Mentions:
    """Noun heads seen so far, for pronoun and definite-mention resolution."""

    order: list[Lexeme] = field(default_factory=list)

    def register(self, lex: Lexeme) -> None:
        self.order = [m for m in self.order if m.lemma != lex.lemma]
        self.order.append(lex)

    def resolve(self, pronoun: str) -> Lexeme | None:
        """Nearest preceding number-compatible mention; None rather than a
        wrong binding when nothing fits."""
        plural = pronoun.lower() == "they"
        for lex in reversed(self.order):
            looks_plural = lex.surface.lower() != lex.lemma or lex.lemma in ("police",)
            if plural == looks_plural:
                return lex
        return None


@dataclass
class _NounPhrase:
    head: Lexeme | Phrase
    modifiers: list[Lexeme | Phrase]
    end: int  # index just past the last unit consumed

    @property
    def head_lexeme(self) -> Lexeme | None:
        return self.head if isinstance(self.head, Lexeme) else None

    def head_words(self) -> list[Lexeme]:
        if isinstance(self.head, Phrase):
            return list(self.head.words)
        return [self.head]

    def folded(self) -> Lexeme | Phrase:
        """Single argument for coordinated contexts: modifiers fold into
        the head as one phrase ("blue jacket")."""
        if not self.modifiers:
            return self.head
        words: list[Lexeme] = []
        for mod in self.modifiers:
            words.extend(mod.words if isinstance(mod, Phrase) else [mod])
        words.extend(self.head_words())
        return Phrase(tuple(words))


class _SentenceParser:
    """Pattern cascade over one tagged sentence."""

    def __init__(self, units: list[_Unit], mentions: _Mentions) -> None:
        self.units = [u for u in units if u.kind not in ("punct", "unknown")]
        self.mentions = mentions
        self.facts: list[Fact] = []

    # -- fact emission helpers

    def _entity_of(self, arg: FactArg) -> str | None:
        if isinstance(arg, Lexeme) and arg.pos in _NOUNISH:
            return arg.lemma
        if isinstance(arg, Phrase) and arg.words[-1].pos in _NOUNISH:
            return arg.words[-1].lemma
        return None

    def emit(self, kind: RelationKind, args: list[FactArg], passive: bool = False) -> None:
        entities = [self._entity_of(a) for a in args]
        self.facts.append(make_fact(kind, args, passive=passive, entities=entities))

    # -- entry point

    def parse(self) -> list[Fact]:
        if self.units:
            self._split_coordination(self.units, None)
        return self.facts

    def _split_coordination(self, units: list[_Unit],
                            subject: Lexeme | Phrase | None) -> None:
        """Coordinated clauses ("X arrived and Y smiled") parse separately;
        a right side with no subject of its own borrows the left one."""
        for k, u in enumerate(units):
            if u.func == "coord" and self._has_verb(units[:k]) and self._has_verb(units[k + 1:]):
                left = self._cascade(units[:k], subject)
                carried = left[0] if left else subject
                self._split_coordination(units[k + 1:], carried)
                return
        self._cascade(units, subject)

    def _cascade(self, units: list[_Unit], subject: Lexeme | Phrase | None
                 ) -> tuple[Lexeme | Phrase, Lexeme] | None:
        comp = next((i for i, u in enumerate(units)
                     if u.func == "comp" and self._has_verb(units[:i])), None)
        if comp is not None:
            after = units[comp + 1:]
            if self._starts_clause(after):
                main = self._parse_clause(units[:comp], object_is_clause=True,
                                          default_subject=subject)
                sub = self._parse_clause(after)
                if main and sub:
                    self.emit(RelationKind.MAIN_SUBORDINATE_CLAUSE, [
                        ClausePair(_clause_noun(main[0]), main[1]),
                        ClausePair(_clause_noun(sub[0]), sub[1]),
                    ])
                return main
            # bare "that" + verb is a relative fragment; keep the main clause
            units = units[:comp]
        sub_at = next((i for i, u in enumerate(units) if u.func == "subord"), None)
        if sub_at is not None and sub_at > 0:
            main = self._parse_clause(units[:sub_at], default_subject=subject)
            sub = self._parse_clause(units[sub_at + 1:])
            if main and sub:
                self.emit(RelationKind.CLAUSE_MODIFIER_VERB, [
                    ClausePair(_clause_noun(sub[0]), sub[1]), main[1],
                ])
            return main
        return self._parse_clause(units, default_subject=subject)

    def _starts_clause(self, units: list[_Unit]) -> bool:
        if not units or not self._has_verb(units):
            return False
        head = units[0]
        return head.func in ("det", "pron") or (
            head.kind in ("word", "phrase") and head.pos != "verb"
        )

    @staticmethod
    def _has_verb(units: list[_Unit]) -> bool:
        return any(u.pos == "verb" for u in units)

    # -- clause and phrase parsers

    def _parse_clause(self, units: list[_Unit], object_is_clause: bool = False,
                      default_subject: Lexeme | Phrase | None = None,
                      ) -> tuple[Lexeme | Phrase, Lexeme] | None:
        """Parse subject, verb group, object, and verb attachments.

        Returns (subject head, main verb) when both were found; all facts
        are emitted as a side effect. A clause starting directly at its
        verb group uses default_subject (shared-subject coordination).
        """
        subject = self._parse_subject(units)
        if subject is None:
            starts_verbish = units and (units[0].pos in ("verb", "adverb")
                                        or units[0].func == "aux")
            if default_subject is None or not starts_verbish:
                return None
            subject = (default_subject, 0)
        subj_arg, i = subject

        # verb group: auxiliaries, pre-verb adverbs, the verb itself
        passive = False
        pre_adverbs: list[Lexeme] = []
        verb: Lexeme | None = None
        while i < len(units):
            u = units[i]
            if u.func == "aux":
                passive = True
                i += 1
            elif u.pos == "adverb":
                pre_adverbs.append(u.lexeme)  # type: ignore[arg-type]
                i += 1
            elif u.pos == "verb":
                verb = u.lexeme
                i += 1
                break
            else:
                return None
        if verb is None:
            return None
        # progressive forms after an auxiliary are active ("is wearing")
        if passive and verb.surface.lower().endswith("ing"):
            passive = False

        for adv in pre_adverbs:
            self.emit(RelationKind.VERB_MODIFIER, [adv, verb])
        while i < len(units) and units[i].pos == "adverb":
            self.emit(RelationKind.VERB_MODIFIER, [units[i].lexeme, verb])
            i += 1

        # object: plain noun phrase(s), a pronoun, or the agent of a passive
        obj: FactArg = EMPTY
        if not object_is_clause and i < len(units):
            if passive and units[i].func == "prep" and units[i].surface.lower() == "by":
                np = self._parse_np(units, i + 1)
                if np is not None:
                    self._emit_np_modifiers(np)
                    obj = np.head
                    self._mention(np.head)
                    i = np.end
            elif units[i].func == "pron":
                resolved = self.mentions.resolve(units[i].surface)
                if resolved is not None:
                    obj = resolved
                i += 1
            elif units[i].func == "det" or units[i].kind in ("word", "phrase"):
                conjuncts, i = self._parse_np_list(units, i)
                if len(conjuncts) == 1:
                    np = conjuncts[0]
                    self._emit_np_modifiers(np)
                    obj = np.head
                    self._mention(np.head)
                else:
                    obj = Conjunction(tuple(np.folded() for np in conjuncts))
                    for np in conjuncts:
                        self._mention(np.head)

        # complement with an elided "that": "said the victim survived"
        attach_verb = verb
        complement: tuple[Lexeme | Phrase, Lexeme] | None = None
        if (isinstance(obj, (Lexeme, Phrase)) and i < len(units)
                and units[i].pos == "verb"):
            comp_verb = units[i].lexeme
            assert comp_verb is not None
            complement = (obj, comp_verb)
            obj = EMPTY
            attach_verb = comp_verb
            i += 1
        self.emit(RelationKind.SUBJECT_VERB_OBJECT, [subj_arg, verb, obj], passive=passive)
        if complement is not None:
            sub_subj, comp_verb = complement
            self.emit(RelationKind.MAIN_SUBORDINATE_CLAUSE, [
                ClausePair(_clause_noun(subj_arg), verb),
                ClausePair(_clause_noun(sub_subj), comp_verb),
            ])
            self.emit(RelationKind.SUBJECT_VERB_OBJECT, [sub_subj, comp_verb, EMPTY])

        # remaining prepositional phrases and stray adverbs attach to the
        # nearest verb (the complement's when one was found)
        while i < len(units):
            u = units[i]
            if u.func == "prep":
                pp = self._parse_pp(units, i)
                if pp is None:
                    i += 1
                    continue
                phrase, i = pp
                self.emit(RelationKind.PHRASE_MODIFIER_VERB, [phrase, attach_verb])
            elif u.pos == "adverb":
                self.emit(RelationKind.VERB_MODIFIER, [u.lexeme, attach_verb])
                i += 1
            else:
                i += 1
        return (subj_arg, verb)

    def _parse_subject(self, units: list[_Unit]) -> tuple[Lexeme | Phrase, int] | None:
        if units and units[0].func == "pron":
            resolved = self.mentions.resolve(units[0].surface)
            if resolved is None:
                return None
            return resolved, 1
        np = self._parse_np(units, 0)
        if np is None:
            return None
        self._emit_np_modifiers(np)
        self._mention(np.head)
        i = np.end
        head = np.head_lexeme
        # prepositional phrases before the verb attach to the subject noun
        while head is not None and i < len(units) and units[i].func == "prep":
            pp = self._parse_pp(units, i)
            if pp is None:
                break
            phrase, i = pp
            self.emit(RelationKind.PHRASE_MODIFIER_NOUN, [phrase, head])
        # relative clause: "<noun> who <verb>"
        if head is not None and i < len(units) and units[i].func == "rel":
            j = i + 1
            rel_adverbs: list[Lexeme] = []
            while j < len(units) and units[j].pos == "adverb":
                rel_adverbs.append(units[j].lexeme)  # type: ignore[arg-type]
                j += 1
            if j < len(units) and units[j].pos == "verb":
                rel_verb = units[j].lexeme
                assert rel_verb is not None
                self.emit(RelationKind.CLAUSE_MODIFIER_NOUN,
                          [ClausePair(head, rel_verb), head])
                self.emit(RelationKind.SUBJECT_VERB_OBJECT, [head, rel_verb, EMPTY])
                for adv in rel_adverbs:
                    self.emit(RelationKind.VERB_MODIFIER, [adv, rel_verb])
                i = j + 1
        return np.head, i

    def _parse_np(self, units: list[_Unit], i: int) -> _NounPhrase | None:
        while i < len(units) and units[i].func == "det":
            i += 1
        collected: list[_Unit] = []
        while i < len(units):
            u = units[i]
            if u.kind == "phrase" or (u.kind == "word" and u.pos in _NOUNISH + _MODIFIER_POS):
                collected.append(u)
                i += 1
            else:
                break
        if not collected:
            return None
        head_unit = collected[-1]
        if head_unit.kind == "word" and head_unit.pos not in _NOUNISH:
            return None
        head: Lexeme | Phrase = head_unit.phrase if head_unit.kind == "phrase" else head_unit.lexeme  # type: ignore[assignment]
        modifiers: list[Lexeme | Phrase] = [
            (u.phrase if u.kind == "phrase" else u.lexeme) for u in collected[:-1]  # type: ignore[misc]
        ]
        return _NounPhrase(head, modifiers, i)

    def _parse_np_list(self, units: list[_Unit], i: int) -> tuple[list[_NounPhrase], int]:
        conjuncts: list[_NounPhrase] = []
        np = self._parse_np(units, i)
        while np is not None:
            conjuncts.append(np)
            i = np.end
            if i < len(units) and units[i].func == "coord":
                np = self._parse_np(units, i + 1)
                if np is None:
                    break
            else:
                break
        return conjuncts, i

    def _parse_pp(self, units: list[_Unit], i: int) -> tuple[Phrase, int] | None:
        prep = units[i]
        np = self._parse_np(units, i + 1)
        if np is None:
            return None
        self._emit_np_modifiers(np)
        self._mention(np.head)
        words = [lexeme(prep.surface, "preposition")] + np.head_words()
        return Phrase(tuple(words)), np.end

    def _emit_np_modifiers(self, np: _NounPhrase) -> None:
        head = np.head_lexeme
        if head is None:
            return
        for mod in np.modifiers:
            self.emit(RelationKind.NOUN_MODIFIER, [mod, head])

    def _mention(self, head: Lexeme | Phrase) -> None:
        lex = head if isinstance(head, Lexeme) else head.words[-1]
        if lex.pos in _NOUNISH:
            self.mentions.register(lex)


def _clause_noun(subject: Lexeme | Phrase) -> Lexeme:
    return subject if isinstance(subject, Lexeme) else subject.words[-1]


def extract_facts(summary: str, vocab: ExtractionVocabulary) -> FactTable:
    """Extract every relation instance the patterns recognize.

    Unmatchable text yields fewer facts, never an error; determinism and
    insensitivity to surrounding whitespace hold by construction.
    """
    units = _tag(tokenize(summary), vocab)
    sentences: list[list[_Unit]] = [[]]
    for unit in units:
        sentences[-1].append(unit)
        if unit.kind == "punct" and unit.surface in SENTENCE_END:
            sentences.append([])
    mentions = _Mentions()
    facts: list[Fact] = []
    for sentence in sentences:
        if sentence:
            facts.extend(_SentenceParser(sentence, mentions).parse())
    return FactTable(facts)


def extract_facts_from_annotated(lines) -> FactTable:
    """Extract facts from a pre-annotated summary (the analyzer's column
    format), bypassing internal tagging entirely.

    The pos and lemma columns drive the same pattern cascade; consecutive
    tokens sharing a named-entity label merge into one phrase. This is the
    hook for plugging an external tagger or parser.
    """
    from .analyzer import parse_corpus

    mentions = _Mentions()
    facts: list[Fact] = []
    for sentence in parse_corpus(lines):
        units: list[_Unit] = []
        i = 0
        while i < len(sentence):
            token = sentence[i]
            label = token.ne_label if token.ne_label not in ("", "-", "O", "o") else ""
            if label:
                span = [token]
                while (i + 1 < len(sentence)
                       and sentence[i + 1].ne_label == token.ne_label):
                    i += 1
                    span.append(sentence[i])
                if len(span) > 1:
                    words = tuple(
                        Lexeme(t.surface, t.pos, t.lemma) for t in span
                    )
                    units.append(_Unit("phrase", " ".join(t.surface for t in span),
                                       phrase=Phrase(words)))
                    i += 1
                    continue
            low = token.surface.lower()
            func = next((name for name, words in _FUNC_CLASSES if low in words), "")
            if func:
                units.append(_Unit("func", token.surface, func=func))
            else:
                units.append(_Unit("word", token.surface,
                                   lexeme=Lexeme(token.surface, token.pos, token.lemma)))
            i += 1
        facts.extend(_SentenceParser(units, mentions).parse())
    return FactTable(facts)


def extract_facts_from_annotated_file(path: str) -> FactTable:
    with open(path, encoding="utf-8") as fh:
        return extract_facts_from_annotated(fh)
