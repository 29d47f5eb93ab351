"""Document generator: instantiates abstract fact trees into ground-truth
fact tables and renders multi-sentence synthetic documents through the
grammar.

Each sentence unit of a tree renders one sentence; a document with N
sentences walks the unit list round-robin, so its truth table is exactly
the facts of the rendered units. Document i of a batch is produced by an
rng seeded with seed + i.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path

from .analyzer import EmptyCategoryError, FrequencyTable, sample_lexeme
from .extractor import save_lexicon, tokenize
from .facts import (
    EMPTY,
    AbstractFactTree,
    Attribute,
    ClausePair,
    ClauseSpec,
    Conjunction,
    decompose_conjunction,
    Fact,
    FactArg,
    FactError,
    FactNode,
    FactTable,
    Lexeme,
    Phrase,
    RelationKind,
    SentenceUnit,
    ValueSpec,
    lexeme,
    make_fact,
)
from .grammar import bind_slots, derive, parse_grammar


class GenerationError(ValueError):
    """Configuration, tree, or rendering problem during generation."""


class UnresolvableConstraintError(GenerationError):
    def __init__(self, node: str, attribute: str, reason: str) -> None:
        super().__init__(f"node {node!r}, attribute {attribute!r}: {reason}")
        self.node = node
        self.attribute = attribute


@dataclass(frozen=True)
class GenerationConfig:
    domain: str
    fact_tree: Path
    grammar: Path
    frequency_table: Path
    seed: int
    sentence_range: tuple[int, int]
    document_count: int
    extra_lexicon: Path | None = None
    max_depth: int = 100

    def __post_init__(self) -> None:
        lo, hi = self.sentence_range
        if not (1 <= lo <= hi):
            raise GenerationError(f"bad sentence range [{lo}, {hi}]")
        if self.document_count < 0:
            raise GenerationError("document count cannot be negative")
        for path in (self.fact_tree, self.grammar, self.frequency_table):
            if not Path(path).is_file():
                raise GenerationError(f"missing generation input: {path}")


def load_config(path: str | Path, seed: int | None = None,
                document_count: int | None = None) -> GenerationConfig:
    """Read a generation config; relative paths resolve against the file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise GenerationError(f"cannot read config {path}: {exc}") from exc
    base = path.parent

    def resolve(key: str) -> Path:
        if key not in raw:
            raise GenerationError(f"config {path} is missing {key!r}")
        return (base / raw[key]).resolve()

    rng_range = raw.get("sentences_per_document", [1, 1])
    extra = raw.get("extra_lexicon")
    return GenerationConfig(
        domain=raw.get("domain", path.stem),
        fact_tree=resolve("fact_tree"),
        grammar=resolve("grammar"),
        frequency_table=resolve("frequency_table"),
        seed=int(raw["seed"]) if seed is None else seed,
        sentence_range=(int(rng_range[0]), int(rng_range[1])),
        document_count=int(raw.get("document_count", 1)) if document_count is None
        else document_count,
        extra_lexicon=(base / extra).resolve() if extra else None,
        max_depth=int(raw.get("max_depth", 100)),
    )


# --- fact tree loading ---------------------------------------------------------


def _parse_lexeme_spec(spec: list, where: str) -> Lexeme:
    if not isinstance(spec, list) or len(spec) not in (2, 3):
        raise GenerationError(f"{where}: lexeme must be [surface, pos] or [surface, pos, lemma]")
    surface, pos = spec[0], spec[1]
    lemma = spec[2] if len(spec) == 3 else None
    try:
        return lexeme(surface, pos, lemma)
    except FactError as exc:
        raise GenerationError(f"{where}: {exc}") from exc


def _parse_choice(choice: list, where: str) -> FactArg:
    if choice and isinstance(choice[0], list):
        return Phrase(tuple(_parse_lexeme_spec(w, where) for w in choice))
    return _parse_lexeme_spec(choice, where)


def _parse_value_spec(obj: dict, where: str) -> ValueSpec:
    if "category" in obj:
        return ValueSpec(category=obj["category"])
    choices = obj.get("choices")
    if not choices:
        raise GenerationError(f"{where}: value needs 'choices' or 'category'")
    return ValueSpec(choices=tuple(_parse_choice(c, where) for c in choices))


def _parse_clause_spec(obj: dict, where: str) -> ClauseSpec:
    for key in ("name", "marker", "verb"):
        if key not in obj:
            raise GenerationError(f"{where}: clause needs {key!r}")
    return ClauseSpec(
        name=obj["name"],
        marker=obj["marker"],
        verb=_parse_value_spec(obj["verb"], f"{where}.{obj['name']}"),
        noun_ref=obj.get("noun", ""),
    )


def load_fact_tree(path: str | Path) -> AbstractFactTree:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise GenerationError(f"cannot read fact tree {path}: {exc}") from exc
    nodes = []
    for nobj in raw.get("nodes", []):
        name = nobj.get("object", "")
        where = f"node {name!r}"
        if not name:
            raise GenerationError("fact tree node is missing 'object'")
        attributes = []
        for aobj in nobj.get("attributes", []):
            awhere = f"{name}.{aobj.get('name', '?')}"
            value = None
            if "choices" in aobj or "category" in aobj:
                value = _parse_value_spec(aobj, awhere)
            attributes.append(Attribute(
                name=aobj.get("name", ""),
                role=aobj.get("role", ""),
                value=value,
                prep=aobj.get("prep", ""),
                ref=aobj.get("ref", ""),
            ))
        clause = nobj.get("clause")
        subordinate = nobj.get("subordinate")
        nodes.append(FactNode(
            object_name=name,
            object_pos=nobj.get("pos", ""),
            head=_parse_value_spec(nobj.get("head", {}), f"{where} head"),
            attributes=tuple(attributes),
            subject_ref=nobj.get("subject", ""),
            object_ref=nobj.get("object-ref", ""),
            agent_ref=nobj.get("agent", ""),
            object_parts=tuple(nobj.get("object-parts", ())),
            clause=_parse_clause_spec(clause, where) if clause else None,
            subordinate=_parse_clause_spec(subordinate, where) if subordinate else None,
        ))
    units = tuple(
        SentenceUnit(u["name"], u["symbol"], tuple(u["nodes"]))
        for u in raw.get("units", [])
    )
    try:
        return AbstractFactTree(tuple(nodes), units)
    except FactError as exc:
        raise GenerationError(f"fact tree {path}: {exc}") from exc


# --- instantiation -------------------------------------------------------------


@dataclass
class Instantiation:
    table: FactTable
    node_facts: dict[str, list[Fact]]
    heads: dict[str, Lexeme | Phrase]


def _pick(spec: ValueSpec, freq: FrequencyTable, rng: random.Random,
          node: str, attribute: str) -> FactArg:
    if spec.category:
        try:
            lex = sample_lexeme(freq, spec.category, rng)
        except EmptyCategoryError as exc:
            raise UnresolvableConstraintError(node, attribute, str(exc)) from exc
        if " " in lex.lemma:
            surfaces = lex.surface.split()
            lemmas = lex.lemma.split()
            return Phrase(tuple(
                Lexeme(s, lex.pos, l) for s, l in zip(surfaces, lemmas)
            ))
        return lex
    if not spec.choices:
        raise UnresolvableConstraintError(node, attribute, "empty candidate set")
    return spec.choices[rng.randrange(len(spec.choices))]


def _head_lexeme(arg: FactArg) -> Lexeme:
    if isinstance(arg, Lexeme):
        return arg
    if isinstance(arg, Phrase):
        return arg.words[-1]
    raise GenerationError(f"{arg!r} cannot head a relation")


def instantiate(tree: AbstractFactTree, freq: FrequencyTable,
                rng: random.Random) -> Instantiation:
    """Fill every slot of the tree and emit all relations it implies.

    Sampling order is fixed (nodes, then attributes, in declaration order)
    so a seeded rng reproduces the same table.
    """
    heads: dict[str, Lexeme | Phrase] = {}
    slots: dict[str, FactArg] = {}
    entities: dict[str, Lexeme] = {}
    for node in tree.nodes:
        head = _pick(node.head, freq, rng, node.object_name, "head")
        heads[node.object_name] = head
        slots[f"{node.object_name}.head"] = head
        if node.object_pos == "noun":
            entities[node.object_name] = _head_lexeme(head)

    node_facts: dict[str, list[Fact]] = {n.object_name: [] for n in tree.nodes}

    def emit(owner: str, kind: RelationKind, args: list[FactArg],
             passive: bool = False, entity_tags: list[str | None] | None = None) -> None:
        fact = make_fact(kind, args, passive=passive, entities=entity_tags)
        node_facts[owner].extend(decompose_conjunction(fact))

    for node in tree.nodes:
        name = node.object_name
        head = heads[name]
        head_lex = _head_lexeme(head)
        self_tag = name if node.object_pos == "noun" else None

        for attr in node.attributes:
            if attr.ref:
                value = heads[attr.ref]
            else:
                value = _pick(attr.value, freq, rng, name, attr.name)
                slots[f"{name}.{attr.name}"] = value
            if attr.role == "value":
                continue
            if attr.role == "noun-mod":
                emit(name, RelationKind.NOUN_MODIFIER, [value, head_lex],
                     entity_tags=[None, self_tag])
            elif attr.role == "verb-mod":
                emit(name, RelationKind.VERB_MODIFIER, [value, head_lex])
            elif attr.role == "phrase-mod":
                prep = lexeme(attr.prep, "preposition")
                words = [prep] + (
                    list(value.words) if isinstance(value, Phrase) else [value]
                )
                kind = (RelationKind.PHRASE_MODIFIER_VERB if node.object_pos == "verb"
                        else RelationKind.PHRASE_MODIFIER_NOUN)
                emit(name, kind, [Phrase(tuple(words)), head_lex],
                     entity_tags=[attr.ref or None, self_tag])

        if node.object_pos == "verb" and node.subject_ref:
            subject = heads[node.subject_ref]
            passive = False
            obj: FactArg = EMPTY
            obj_tag: str | None = None
            if node.agent_ref:
                obj = heads[node.agent_ref]
                obj_tag = node.agent_ref
                passive = True
            elif node.object_ref:
                obj = heads[node.object_ref]
                obj_tag = node.object_ref
            elif node.object_parts:
                parts = []
                for part in node.object_parts:
                    value = slots.get(f"{name}.{part}")
                    if value is None:
                        raise UnresolvableConstraintError(name, part, "conjunction part not defined")
                    parts.append(value)
                obj = Conjunction(tuple(parts))  # type: ignore[arg-type]
            emit(name, RelationKind.SUBJECT_VERB_OBJECT, [subject, head_lex, obj],
                 passive=passive, entity_tags=[node.subject_ref, None, obj_tag])

        if node.clause is not None:
            cl = node.clause
            verb = _pick(cl.verb, freq, rng, name, cl.name)
            slots[f"{name}.{cl.name}"] = verb
            verb_lex = _head_lexeme(verb)
            if node.object_pos == "noun":
                pair = ClausePair(head_lex, verb_lex)
                emit(name, RelationKind.CLAUSE_MODIFIER_NOUN, [pair, head_lex],
                     entity_tags=[name, name])
            else:
                noun_lex = _head_lexeme(heads[cl.noun_ref])
                pair = ClausePair(noun_lex, verb_lex)
                emit(name, RelationKind.CLAUSE_MODIFIER_VERB, [pair, head_lex],
                     entity_tags=[cl.noun_ref or None, None])
            emit(name, RelationKind.SUBJECT_VERB_OBJECT, [pair.noun, verb_lex, EMPTY])

        if node.subordinate is not None:
            sub = node.subordinate
            if node.object_pos != "verb" or not node.subject_ref:
                raise GenerationError(
                    f"node {name!r}: subordinate clauses need a verb node with a subject"
                )
            verb = _pick(sub.verb, freq, rng, name, sub.name)
            slots[f"{name}.{sub.name}"] = verb
            sub_noun = _head_lexeme(heads[sub.noun_ref])
            sub_verb = _head_lexeme(verb)
            main_pair = ClausePair(_head_lexeme(heads[node.subject_ref]), head_lex)
            emit(name, RelationKind.MAIN_SUBORDINATE_CLAUSE,
                 [main_pair, ClausePair(sub_noun, sub_verb)])
            emit(name, RelationKind.SUBJECT_VERB_OBJECT, [sub_noun, sub_verb, EMPTY],
                 entity_tags=[sub.noun_ref or None, None, None])

    all_facts = [f for node in tree.nodes for f in node_facts[node.object_name]]
    table = FactTable(all_facts, entities, slots)
    return Instantiation(table, node_facts, heads)


def instantiate_fact_tree(tree: AbstractFactTree, freq: FrequencyTable,
                          rng: random.Random) -> FactTable:
    """The complete fact table the tree implies, with slots and entities."""
    return instantiate(tree, freq, rng).table


# --- document rendering ---------------------------------------------------------


@dataclass
class SyntheticDocument:
    id: str
    text: str
    truth: FactTable
    token_count: int
    config_hash: str
    seed: int
    sentence_units: tuple[str, ...]
    realization: tuple[tuple[str, tuple[Fact, ...]], ...]


def detokenize(tokens: list[str]) -> str:
    """Join tokens with single spaces, attaching punctuation to the left
    and capitalizing the sentence-initial character."""
    out = ""
    for token in tokens:
        if not out:
            out = token
        elif token in ".,;:!?":
            out += token
        else:
            out += " " + token
    if out and out[0].isalpha():
        out = out[0].upper() + out[1:]
    return out


def _unit_cycle(units: tuple[SentenceUnit, ...], count: int) -> list[SentenceUnit]:
    return [units[i % len(units)] for i in range(count)]


def generate_documents(config: GenerationConfig) -> list[SyntheticDocument]:
    """Render the configured batch deterministically."""
    tree = load_fact_tree(config.fact_tree)
    if not tree.units:
        raise GenerationError("fact tree declares no sentence units")
    grammar = parse_grammar(Path(config.grammar).read_text(encoding="utf-8"))
    freq = FrequencyTable.from_text(
        Path(config.frequency_table).read_text(encoding="utf-8")
    )
    config_hash = _config_hash(config)
    documents = []
    lo, hi = config.sentence_range
    for index in range(config.document_count):
        doc_seed = config.seed + index
        rng = random.Random(doc_seed)
        try:
            inst = instantiate(tree, freq, rng)
            bound = bind_slots(grammar, inst.table)
            count = rng.randint(lo, hi)
            rendered = _unit_cycle(tree.units, count)
            sentences = []
            realization = []
            facts: list[Fact] = []
            for unit in rendered:
                tokens = derive(bound, rng, config.max_depth, start=unit.symbol)
                sentences.append(detokenize(tokens))
                unit_facts = tuple(
                    f for node in unit.nodes for f in inst.node_facts[node]
                )
                realization.append((unit.name, unit_facts))
                facts.extend(unit_facts)
        except (GenerationError, ValueError) as exc:
            raise GenerationError(f"document {index}: {exc}") from exc
        text = " ".join(sentences)
        truth = FactTable(facts, slots=inst.table.slots)
        documents.append(SyntheticDocument(
            id=f"{config.domain}-{doc_seed:08d}",
            text=text,
            truth=truth,
            token_count=len(tokenize(text)),
            config_hash=config_hash,
            seed=doc_seed,
            sentence_units=tuple(u.name for u in rendered),
            realization=tuple(realization),
        ))
    return documents


def _config_hash(config: GenerationConfig) -> str:
    h = hashlib.sha256()
    h.update(repr((config.domain, config.sentence_range, config.max_depth)).encode())
    for path in (config.fact_tree, config.grammar, config.frequency_table):
        h.update(Path(path).read_bytes())
    if config.extra_lexicon:
        h.update(Path(config.extra_lexicon).read_bytes())
    return h.hexdigest()[:16]


# --- bundle I/O ------------------------------------------------------------------


def collect_lexicon(tree: AbstractFactTree, freq: FrequencyTable,
                    extra: list[Lexeme | Phrase] | None = None) -> list[Lexeme | Phrase]:
    """Every word or phrase generation could put in a document: all literal
    candidates, all candidates of referenced frequency categories, and any
    extra pack entries."""
    entries: list[Lexeme | Phrase] = list(extra or [])
    specs: list[ValueSpec] = []
    for node in tree.nodes:
        specs.append(node.head)
        for attr in node.attributes:
            if attr.value is not None:
                specs.append(attr.value)
        for cl in (node.clause, node.subordinate):
            if cl is not None:
                specs.append(cl.verb)
    seen_categories = set()
    stub_rng = random.Random(0)
    for spec in specs:
        if spec.category:
            if spec.category in seen_categories:
                continue
            seen_categories.add(spec.category)
            for key in freq.keys(spec.category):
                one = FrequencyTable({(spec.category, key): 1})
                entries.append(_pick(ValueSpec(category=spec.category), one,
                                     stub_rng, "lexicon", spec.category))
        else:
            entries.extend(a for a in spec.choices if isinstance(a, (Lexeme, Phrase)))
    return entries


def write_bundle(documents: list[SyntheticDocument], outdir: str | Path,
                 lexicon: list[Lexeme | Phrase]) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    save_lexicon(str(out / "lexicon.tsv"), lexicon)
    for doc in documents:
        (out / f"{doc.id}.txt").write_text(doc.text + "\n", encoding="utf-8")
        (out / f"{doc.id}.facts").write_text(doc.truth.to_text(), encoding="utf-8")
        meta = [
            "# factharness document meta v1",
            f"id: {doc.id}",
            f"seed: {doc.seed}",
            f"config-hash: {doc.config_hash}",
            f"token-count: {doc.token_count}",
            f"sentences: {len(doc.sentence_units)}",
            "sentence-units: " + " ".join(doc.sentence_units),
        ]
        (out / f"{doc.id}.meta").write_text("\n".join(meta) + "\n", encoding="utf-8")


@dataclass
class BundleDocument:
    id: str
    text: str
    truth: FactTable
    meta: dict[str, str]


def read_bundle(bundle_dir: str | Path) -> list[BundleDocument]:
    """Load every document of a generated bundle, ordered by id."""
    bundle = Path(bundle_dir)
    if not bundle.is_dir():
        raise GenerationError(f"bundle directory not found: {bundle}")
    docs = []
    for txt in sorted(bundle.glob("*.txt")):
        doc_id = txt.stem
        facts_path = bundle / f"{doc_id}.facts"
        if not facts_path.is_file():
            raise GenerationError(f"bundle document {doc_id} is missing its .facts file")
        meta: dict[str, str] = {}
        meta_path = bundle / f"{doc_id}.meta"
        if meta_path.is_file():
            for line in meta_path.read_text(encoding="utf-8").splitlines():
                if line.startswith("#") or ": " not in line:
                    continue
                key, _, value = line.partition(": ")
                meta[key] = value
        docs.append(BundleDocument(
            id=doc_id,
            text=txt.read_text(encoding="utf-8").rstrip("\n"),
            truth=FactTable.from_text(facts_path.read_text(encoding="utf-8")),
            meta=meta,
        ))
    return docs
