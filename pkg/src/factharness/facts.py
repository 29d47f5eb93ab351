"""Fact model: linguistic relations, fact tables, and abstract fact trees.

A fact is one instance of a closed set of eight binary/ternary linguistic
relations over lexemes (subject-verb-object, modifier attachments, clause
links). Fact tables collect the facts a document or summary expresses and
are the unit of comparison for scoring.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Union

POS_TAGS = frozenset({
    "noun", "verb", "adjective", "adverb", "preposition",
    "determiner", "number", "proper-noun",
})

_WS = re.compile(r"\s+")

# Reserved by the fact-table text format; may not appear inside tokens.
_RESERVED = set("/+,&\t")


class FactError(ValueError):
    """Malformed fact, argument, or serialized fact table."""


class ArityError(FactError):
    """Argument list does not fit the relation kind."""


@dataclass(frozen=True)
class Lexeme:
    """A single word: surface form as written, coarse POS, lowercase lemma.

    Equality and hashing use (pos, lemma) only, so "men" equals "man" once
    both carry the lemma "man"; the surface is presentation detail.
    """

    surface: str = field(compare=False)
    pos: str
    lemma: str

    def __post_init__(self) -> None:
        if not self.surface:
            raise FactError("lexeme surface must be non-empty")
        if self.pos not in POS_TAGS:
            raise FactError(f"unknown pos tag {self.pos!r}")
        if not self.lemma or self.lemma != self.lemma.lower():
            raise FactError(f"lemma must be lowercase and non-empty, got {self.lemma!r}")

    def __repr__(self) -> str:
        return f"Lexeme({self.surface}:{self.pos}:{self.lemma})"


def lexeme(surface: str, pos: str, lemma: str | None = None) -> Lexeme:
    """Build a normalized Lexeme; the lemma defaults to the lowercased surface."""
    surface = _WS.sub(" ", surface.strip())
    if lemma is None:
        lemma = surface.lower()
    return Lexeme(surface, pos, _WS.sub(" ", lemma.strip()).lower())


@dataclass(frozen=True)
class Phrase:
    """A multi-word value ("8 p.m.", "New Jersey") treated as one argument."""

    words: tuple[Lexeme, ...]

    def __post_init__(self) -> None:
        if len(self.words) < 2:
            raise FactError("a phrase needs at least two words")

    @property
    def surface(self) -> str:
        return " ".join(w.surface for w in self.words)

    def __repr__(self) -> str:
        return f"Phrase({self.surface})"


@dataclass(frozen=True)
class ClausePair:
    """A (noun, verb) clause skeleton, the unit of clause-level relations."""

    noun: Lexeme
    verb: Lexeme


@dataclass(frozen=True)
class EmptySlot:
    """Explicit empty object slot for intransitive subject-verb facts."""

    def __repr__(self) -> str:
        return "EMPTY"


EMPTY = EmptySlot()


@dataclass(frozen=True)
class Conjunction:
    """A coordinated argument; table insertion splits it into partial facts."""

    conjuncts: tuple[Union[Lexeme, Phrase], ...]

    def __post_init__(self) -> None:
        if len(self.conjuncts) < 2:
            raise FactError("a conjunction needs at least two conjuncts")
        for c in self.conjuncts:
            if not isinstance(c, (Lexeme, Phrase)):
                raise FactError("conjuncts must be lexemes or phrases")


FactArg = Union[Lexeme, Phrase, ClausePair, EmptySlot, Conjunction]


class RelationKind(Enum):
    """The closed set of linguistic relations facts are drawn from."""

    SUBJECT_VERB_OBJECT = "svo"
    NOUN_MODIFIER = "noun-mod"
    VERB_MODIFIER = "verb-mod"
    PHRASE_MODIFIER_VERB = "phrase-mod-verb"
    PHRASE_MODIFIER_NOUN = "phrase-mod-noun"
    CLAUSE_MODIFIER_VERB = "clause-mod-verb"
    CLAUSE_MODIFIER_NOUN = "clause-mod-noun"
    MAIN_SUBORDINATE_CLAUSE = "main-sub"


ARITY = {
    RelationKind.SUBJECT_VERB_OBJECT: 3,
    RelationKind.NOUN_MODIFIER: 2,
    RelationKind.VERB_MODIFIER: 2,
    RelationKind.PHRASE_MODIFIER_VERB: 2,
    RelationKind.PHRASE_MODIFIER_NOUN: 2,
    RelationKind.CLAUSE_MODIFIER_VERB: 2,
    RelationKind.CLAUSE_MODIFIER_NOUN: 2,
    RelationKind.MAIN_SUBORDINATE_CLAUSE: 2,
}

_KIND_ORDER = {kind: i for i, kind in enumerate(RelationKind)}
_KIND_BY_TAG = {kind.value: kind for kind in RelationKind}


def _arg_key(arg: FactArg) -> tuple:
    if isinstance(arg, Lexeme):
        return ("lex", arg.pos, arg.lemma)
    if isinstance(arg, Phrase):
        return ("phr",) + tuple((w.pos, w.lemma) for w in arg.words)
    if isinstance(arg, ClausePair):
        return ("cls", arg.noun.pos, arg.noun.lemma, arg.verb.pos, arg.verb.lemma)
    if isinstance(arg, EmptySlot):
        return ("empty",)
    if isinstance(arg, Conjunction):
        return ("conj",) + tuple(_arg_key(c) for c in arg.conjuncts)
    raise FactError(f"not a fact argument: {arg!r}")


@dataclass(frozen=True, eq=False)
class Fact:
    """One relation instance.

    Equality is structural over lemmas, voice-normalized: a passive
    subject-verb-object fact with an agent equals the corresponding active
    fact. Entity labels and surfaces never affect equality.
    """

    kind: RelationKind
    args: tuple[FactArg, ...]
    passive: bool = False
    entities: tuple[str | None, ...] = field(default=(), compare=False)

    def identity(self) -> tuple:
        args = self.args
        if (
            self.kind is RelationKind.SUBJECT_VERB_OBJECT
            and self.passive
            and not isinstance(args[2], EmptySlot)
        ):
            args = (args[2], args[1], args[0])
        return (self.kind.value, tuple(_arg_key(a) for a in args))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fact):
            return NotImplemented
        return self.identity() == other.identity()

    def __hash__(self) -> int:
        return hash(self.identity())

    def __repr__(self) -> str:
        inner = ", ".join(_arg_surface(a) for a in self.args)
        voice = ", passive" if self.passive else ""
        return f"Fact({self.kind.value}: {inner}{voice})"


def _arg_surface(arg: FactArg) -> str:
    if isinstance(arg, Lexeme):
        return arg.surface
    if isinstance(arg, Phrase):
        return arg.surface
    if isinstance(arg, ClausePair):
        return f"({arg.noun.surface}, {arg.verb.surface})"
    if isinstance(arg, EmptySlot):
        return "-"
    if isinstance(arg, Conjunction):
        return " & ".join(_arg_surface(c) for c in arg.conjuncts)
    return repr(arg)


_HEAD_SHAPES = (Lexeme,)
_VALUE_SHAPES = (Lexeme, Phrase, Conjunction)


def make_fact(
    kind: RelationKind,
    args: Iterable[FactArg],
    passive: bool = False,
    entities: Iterable[str | None] | None = None,
) -> Fact:
    """Build a validated fact of the given kind.

    Raises ArityError when the argument count or argument shapes do not fit
    the relation: subject-verb-object takes (subject, verb, object-or-EMPTY),
    modifier kinds take (modifier, head), phrase modifiers take a Phrase,
    clause kinds take ClausePair arguments.
    """
    args = tuple(args)
    expected = ARITY[kind]
    if len(args) != expected:
        raise ArityError(f"{kind.value} takes {expected} arguments, got {len(args)}")
    if passive and kind is not RelationKind.SUBJECT_VERB_OBJECT:
        raise ArityError(f"only svo facts can be passive, not {kind.value}")

    k = RelationKind
    if kind is k.SUBJECT_VERB_OBJECT:
        subj, verb, obj = args
        if not isinstance(subj, _VALUE_SHAPES):
            raise ArityError("svo subject must be a lexeme, phrase, or conjunction")
        if not isinstance(verb, Lexeme):
            raise ArityError("svo verb must be a single lexeme")
        if not isinstance(obj, (Lexeme, Phrase, Conjunction, EmptySlot)):
            raise ArityError("svo object must be a lexeme, phrase, conjunction, or EMPTY")
    elif kind in (k.NOUN_MODIFIER, k.VERB_MODIFIER):
        mod, head = args
        if not isinstance(mod, _VALUE_SHAPES):
            raise ArityError(f"{kind.value} modifier must be a lexeme, phrase, or conjunction")
        if not isinstance(head, _HEAD_SHAPES):
            raise ArityError(f"{kind.value} head must be a single lexeme")
    elif kind in (k.PHRASE_MODIFIER_VERB, k.PHRASE_MODIFIER_NOUN):
        mod, head = args
        if not isinstance(mod, (Phrase, Conjunction)):
            raise ArityError(f"{kind.value} modifier must be a phrase")
        if not isinstance(head, _HEAD_SHAPES):
            raise ArityError(f"{kind.value} head must be a single lexeme")
    elif kind in (k.CLAUSE_MODIFIER_VERB, k.CLAUSE_MODIFIER_NOUN):
        clause, head = args
        if not isinstance(clause, ClausePair):
            raise ArityError(f"{kind.value} modifier must be a clause pair")
        if not isinstance(head, _HEAD_SHAPES):
            raise ArityError(f"{kind.value} head must be a single lexeme")
    else:  # MAIN_SUBORDINATE_CLAUSE
        if not all(isinstance(a, ClausePair) for a in args):
            raise ArityError("main-sub takes two (noun, verb) clause pairs")

    ent = tuple(entities) if entities is not None else (None,) * len(args)
    if len(ent) != len(args):
        raise ArityError("entity labels must align with arguments")
    return Fact(kind, args, passive, ent)


def decompose_conjunction(fact: Fact) -> list[Fact]:
    """Split coordinated arguments into one partial fact per conjunct.

    A fact without coordination comes back as a singleton list. Multiple
    coordinated arguments expand to the cartesian product of their conjuncts.
    """
    out = [fact]
    for i, arg in enumerate(fact.args):
        if not isinstance(arg, Conjunction):
            continue
        expanded = []
        for f in out:
            for conjunct in arg.conjuncts:
                new_args = f.args[:i] + (conjunct,) + f.args[i + 1:]
                expanded.append(Fact(f.kind, new_args, f.passive, f.entities))
        out = expanded
    return out


class FactTable:
    """The set of facts in a document or summary.

    Alongside the facts it keeps the entity registry (entity id to canonical
    lexeme, so repeated mentions resolve to one thing) and the slot bindings
    produced at instantiation time (``object.attribute`` to argument value),
    which grammar binding reads. Tables are immutable after construction;
    equality compares the fact sets only, insertion-order independent.
    """

    def __init__(
        self,
        facts: Iterable[Fact] = (),
        entities: dict[str, Lexeme] | None = None,
        slots: dict[str, FactArg] | None = None,
    ) -> None:
        self._facts: dict[Fact, None] = {}
        self.entities: dict[str, Lexeme] = dict(entities or {})
        self.slots: dict[str, FactArg] = dict(slots or {})
        for fact in facts:
            for part in decompose_conjunction(fact):
                self._facts.setdefault(part, None)
                self._register_entities(part)

    def _register_entities(self, fact: Fact) -> None:
        for arg, eid in zip(fact.args, fact.entities):
            if eid is None or eid in self.entities:
                continue
            head = _entity_head(arg)
            if head is not None:
                self.entities[eid] = head

    @property
    def facts(self) -> tuple[Fact, ...]:
        return tuple(self._facts)

    def __len__(self) -> int:
        return len(self._facts)

    def __iter__(self) -> Iterator[Fact]:
        return iter(self._facts)

    def __contains__(self, fact: object) -> bool:
        return fact in self._facts

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FactTable):
            return NotImplemented
        return frozenset(self._facts) == frozenset(other._facts)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FactTable({len(self)} facts, {len(self.entities)} entities)"

    def ordered(self) -> list[Fact]:
        """Facts in canonical serialization order (kind, then argument key)."""
        return sorted(self._facts, key=_sort_key)

    def difference(self, other: "FactTable") -> list[Fact]:
        return [f for f in self.ordered() if f not in other]

    def to_text(self) -> str:
        """Serialize to the documented line format (see module docs)."""
        lines = ["# factharness fact table v1"]
        for eid in sorted(self.entities):
            lines.append(f"entity\t{eid}\t{encode_arg(self.entities[eid])}")
        for fact in self.ordered():
            lines.append(encode_fact(fact))
        for name in sorted(self.slots):
            lines.append(f"slot\t{name}\t{encode_arg(self.slots[name])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FactTable":
        entities: dict[str, Lexeme] = {}
        slots: dict[str, FactArg] = {}
        facts: list[Fact] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            kind, _, rest = line.partition("\t")
            try:
                if kind == "entity":
                    eid, enc = rest.split("\t")
                    value = decode_arg(enc)
                    if not isinstance(value, Lexeme):
                        raise FactError("entity value must be a single lexeme")
                    entities[eid] = value
                elif kind == "slot":
                    name, enc = rest.split("\t", 1)
                    slots[name] = decode_arg(enc)
                elif kind == "fact":
                    facts.append(decode_fact(line))
                else:
                    raise FactError(f"unknown record type {kind!r}")
            except (FactError, ValueError) as exc:
                raise FactError(f"fact table line {lineno}: {exc}") from exc
        # Entity ids referenced by facts but not declared in the file are
        # registered from the facts themselves, keeping the registry total.
        return cls(facts, entities, slots)


def _entity_head(arg: FactArg) -> Lexeme | None:
    if isinstance(arg, Lexeme):
        return arg
    if isinstance(arg, Phrase):
        return arg.words[-1]
    if isinstance(arg, ClausePair):
        return arg.noun
    return None


def _sort_key(fact: Fact) -> tuple:
    return (_KIND_ORDER[fact.kind], repr(fact.identity()))


def table_insert(table: FactTable, fact: Fact) -> FactTable:
    """Return a new table containing the fact (conjunctions decomposed)."""
    return FactTable(list(table.facts) + [fact], table.entities, table.slots)


# --- text encoding -----------------------------------------------------------
#
# One record per line, tab-separated:
#   entity <TAB> id <TAB> lemma/surface/pos
#   fact   <TAB> kind <TAB> arg [<TAB> arg ...] [<TAB> voice=passive]
#                [<TAB> entities=id,id,...]
#   slot   <TAB> object.attribute <TAB> arg
# Argument encoding: lexeme = lemma/surface/pos; phrase = lexemes joined
# with "+"; clause pair = noun-lexeme,verb-lexeme; empty slot = "-";
# conjunction = parts joined with "&". The characters / + , & and tab are
# reserved and may not appear inside tokens.


def _check_token(token: str) -> str:
    if any(ch in _RESERVED for ch in token):
        raise FactError(f"token contains reserved character: {token!r}")
    return token


def encode_lexeme(lex: Lexeme) -> str:
    return "/".join(_check_token(t) for t in (lex.lemma, lex.surface, lex.pos))


def decode_lexeme(enc: str) -> Lexeme:
    parts = enc.split("/")
    if len(parts) != 3:
        raise FactError(f"bad lexeme encoding {enc!r}")
    lemma, surface, pos = parts
    return Lexeme(surface, pos, lemma)


def encode_arg(arg: FactArg) -> str:
    if isinstance(arg, Lexeme):
        return encode_lexeme(arg)
    if isinstance(arg, Phrase):
        return "+".join(encode_lexeme(w) for w in arg.words)
    if isinstance(arg, ClausePair):
        return f"{encode_lexeme(arg.noun)},{encode_lexeme(arg.verb)}"
    if isinstance(arg, EmptySlot):
        return "-"
    if isinstance(arg, Conjunction):
        return "&".join(encode_arg(c) for c in arg.conjuncts)
    raise FactError(f"not a fact argument: {arg!r}")


def decode_arg(enc: str) -> FactArg:
    if enc == "-":
        return EMPTY
    if "&" in enc:
        parts = [decode_arg(p) for p in enc.split("&")]
        return Conjunction(tuple(parts))  # type: ignore[arg-type]
    if "," in enc:
        noun_enc, verb_enc = enc.split(",")
        return ClausePair(decode_lexeme(noun_enc), decode_lexeme(verb_enc))
    if "+" in enc:
        return Phrase(tuple(decode_lexeme(p) for p in enc.split("+")))
    return decode_lexeme(enc)


def encode_fact(fact: Fact) -> str:
    fields = ["fact", fact.kind.value]
    fields.extend(encode_arg(a) for a in fact.args)
    if fact.passive:
        fields.append("voice=passive")
    if any(e is not None for e in fact.entities):
        fields.append("entities=" + ",".join(e or "" for e in fact.entities))
    return "\t".join(fields)


def decode_fact(line: str) -> Fact:
    fields = line.split("\t")
    if len(fields) < 2 or fields[0] != "fact":
        raise FactError(f"not a fact record: {line!r}")
    tag = fields[1]
    if tag not in _KIND_BY_TAG:
        raise FactError(f"unknown relation kind {tag!r}")
    kind = _KIND_BY_TAG[tag]
    arity = ARITY[kind]
    arg_fields = fields[2:2 + arity]
    if len(arg_fields) != arity:
        raise FactError(f"{tag} record needs {arity} argument fields")
    passive = False
    entities: list[str | None] | None = None
    for extra in fields[2 + arity:]:
        if extra == "voice=passive":
            passive = True
        elif extra.startswith("entities="):
            entities = [e or None for e in extra[len("entities="):].split(",")]
        else:
            raise FactError(f"unknown fact annotation {extra!r}")
    args = [decode_arg(enc) for enc in arg_fields]
    return make_fact(kind, args, passive=passive, entities=entities)


# --- abstract fact trees ------------------------------------------------------


@dataclass(frozen=True)
class ValueSpec:
    """Where an attribute value comes from: literal candidates or a
    frequency-table category sampled at instantiation time."""

    choices: tuple[FactArg, ...] = ()
    category: str = ""

    def __post_init__(self) -> None:
        if bool(self.choices) == bool(self.category):
            raise FactError("value spec needs exactly one of choices or category")


@dataclass(frozen=True)
class Attribute:
    """One attribute slot on a tree node.

    role is one of noun-mod, verb-mod, phrase-mod (with prep), or value (a
    bare slot that contributes no fact of its own, e.g. a conjunction part);
    the value comes from its value spec or, for phrase-mod, from another node's
    head (ref).
    """

    name: str
    role: str
    value: ValueSpec | None = None
    prep: str = ""
    ref: str = ""

    def __post_init__(self) -> None:
        if self.role not in ("noun-mod", "verb-mod", "phrase-mod", "value"):
            raise FactError(f"unknown attribute role {self.role!r}")
        if self.role == "phrase-mod" and not self.prep:
            raise FactError(f"attribute {self.name!r}: phrase-mod needs a preposition")
        if bool(self.value) == bool(self.ref):
            raise FactError(f"attribute {self.name!r} needs exactly one of value or ref")


@dataclass(frozen=True)
class ClauseSpec:
    """A dependent clause attached to a node: relative clauses on nouns,
    adverbial clauses and that-complements on verbs."""

    name: str
    marker: str
    verb: ValueSpec
    noun_ref: str = ""  # empty on noun nodes: the clause noun is the node itself


@dataclass(frozen=True)
class FactNode:
    """An object in the abstract fact tree with its attribute slots."""

    object_name: str
    object_pos: str
    head: ValueSpec
    attributes: tuple[Attribute, ...] = ()
    subject_ref: str = ""          # verb nodes: SVO subject node
    object_ref: str = ""           # verb nodes: SVO object node (active)
    agent_ref: str = ""            # verb nodes: passive by-agent node
    object_parts: tuple[str, ...] = ()  # verb nodes: attr names conjoined as object
    clause: ClauseSpec | None = None
    subordinate: ClauseSpec | None = None  # verb nodes: that-complement clause

    def __post_init__(self) -> None:
        if self.object_pos not in ("noun", "verb"):
            raise FactError(f"node pos must be noun or verb, got {self.object_pos!r}")
        if self.object_pos == "noun" and (self.subject_ref or self.object_ref or self.agent_ref):
            raise FactError(f"noun node {self.object_name!r} cannot take clause roles")
        if self.object_ref and self.agent_ref:
            raise FactError(f"node {self.object_name!r}: object and agent are exclusive")
        names = [a.name for a in self.attributes]
        if len(names) != len(set(names)):
            raise FactError(f"node {self.object_name!r} has duplicate attribute names")


@dataclass(frozen=True)
class SentenceUnit:
    """One sentence template: the grammar symbol that renders it and the
    nodes whose facts it realizes."""

    name: str
    symbol: str
    nodes: tuple[str, ...]


@dataclass(frozen=True)
class AbstractFactTree:
    """The authored template a fact table is instantiated from."""

    nodes: tuple[FactNode, ...]
    units: tuple[SentenceUnit, ...]

    def __post_init__(self) -> None:
        names = [n.object_name for n in self.nodes]
        if len(names) != len(set(names)):
            dup = sorted(n for n in names if names.count(n) > 1)[0]
            raise FactError(f"duplicate node object-name {dup!r}")
        known = set(names)
        for node in self.nodes:
            for ref in (node.subject_ref, node.object_ref, node.agent_ref):
                if ref and ref not in known:
                    raise FactError(f"node {node.object_name!r} references unknown node {ref!r}")
            for attr in node.attributes:
                if attr.ref and attr.ref not in known:
                    raise FactError(
                        f"attribute {node.object_name}.{attr.name} references unknown node {attr.ref!r}"
                    )
            for cl in (node.clause, node.subordinate):
                if cl and cl.noun_ref and cl.noun_ref not in known:
                    raise FactError(
                        f"clause {node.object_name}.{cl.name} references unknown node {cl.noun_ref!r}"
                    )
        for unit in self.units:
            for ref in unit.nodes:
                if ref not in known:
                    raise FactError(f"unit {unit.name!r} references unknown node {ref!r}")

    def node(self, name: str) -> FactNode:
        for n in self.nodes:
            if n.object_name == name:
                return n
        raise KeyError(name)
