import random

import pytest

from factharness.extractor import (
    ExtractionVocabulary,
    extract_facts,
    tokenize,
)
from factharness.facts import (
    EMPTY,
    ClausePair,
    Lexeme,
    Phrase,
    RelationKind,
    lexeme,
    make_fact,
)
from factharness.generator import generate_documents, load_config
from factharness.matcher import load_resources
from helpers import CRIME, STREET, pack_vocabulary, resource_paths

K = RelationKind


@pytest.fixture(scope="module")
def crime_vocab():
    return pack_vocabulary(CRIME)


@pytest.fixture(scope="module")
def street_vocab():
    return pack_vocabulary(STREET)


class TestTokenize:
    def test_simple_sentence(self):
        assert tokenize("A woman is killed.") == ["A", "woman", "is", "killed", "."]

    def test_empty_text(self):
        assert tokenize("") == []

    def test_abbreviations_stay_whole(self):
        assert tokenize("8 p.m. on Friday") == ["8", "p.m.", "on", "Friday"]

    def test_punctuation_is_own_token(self):
        assert tokenize("fled, quickly!") == ["fled", ",", "quickly", "!"]

    def test_abbreviation_with_trailing_comma(self):
        assert tokenize("at 8 p.m., police came") == \
            ["at", "8", "p.m.", ",", "police", "came"]

    def test_deterministic(self):
        text = "The men fled quickly. Police said so."
        assert tokenize(text) == tokenize(text)


FIG2_SENTENCE = ("A 44 years old female victim got stabbed by 3 men at a "
                 "Asian restaurant in New Jersey at 8 p.m. on Friday.")


class TestExtractFacts:
    def test_fig2_style_sentence(self, crime_vocab):
        table = extract_facts(FIG2_SENTENCE, crime_vocab)
        age = Phrase((lexeme("44", "number"), lexeme("years", "noun", "year"),
                      lexeme("old", "adjective")))
        victim = lexeme("victim", "noun")
        men = lexeme("men", "noun", "man")
        stab = lexeme("stabbed", "verb", "stab")
        assert make_fact(K.NOUN_MODIFIER, [age, victim]) in table
        assert make_fact(K.NOUN_MODIFIER, [lexeme("female", "adjective"), victim]) in table
        assert make_fact(K.SUBJECT_VERB_OBJECT, [victim, stab, men], passive=True) in table
        assert make_fact(K.NOUN_MODIFIER, [lexeme("3", "number"), men]) in table
        assert make_fact(K.NOUN_MODIFIER,
                         [lexeme("Asian", "adjective", "asian"),
                          lexeme("restaurant", "noun")]) in table
        # four prepositional attachments to the verb
        pmv = [f for f in table if f.kind is K.PHRASE_MODIFIER_VERB]
        assert len(pmv) == 4

    def test_partial_facts_from_coordination(self, crime_vocab):
        vocab = ExtractionVocabulary(
            [lexeme("man", "noun"), lexeme("wearing", "verb", "wear"),
             lexeme("blue", "adjective"), lexeme("jacket", "noun"),
             lexeme("black", "adjective"), lexeme("jeans", "noun")]
        )
        table = extract_facts("A man is wearing a blue jacket and black jeans.", vocab)
        man = lexeme("man", "noun")
        wear = lexeme("wearing", "verb", "wear")
        jacket = Phrase((lexeme("blue", "adjective"), lexeme("jacket", "noun")))
        jeans = Phrase((lexeme("black", "adjective"), lexeme("jeans", "noun")))
        assert make_fact(K.SUBJECT_VERB_OBJECT, [man, wear, jacket]) in table
        assert make_fact(K.SUBJECT_VERB_OBJECT, [man, wear, jeans]) in table
        assert len(table) == 2

    def test_out_of_vocabulary_text(self, crime_vocab):
        assert len(extract_facts("Zorgon blipped the frumious quxx.", crime_vocab)) == 0

    def test_whitespace_insensitive(self, street_vocab):
        a = extract_facts("A young woman arrived.", street_vocab)
        b = extract_facts("   A young    woman arrived.  \n", street_vocab)
        assert a == b

    def test_deterministic(self, crime_vocab):
        text = "The men fled quickly. Police said that the victim survived."
        assert extract_facts(text, crime_vocab) == extract_facts(text, crime_vocab)

    def test_progressive_is_not_passive(self, street_vocab):
        table = extract_facts("The man was carrying a red bag.", street_vocab)
        facts = [f for f in table if f.kind is K.SUBJECT_VERB_OBJECT]
        assert len(facts) == 1
        assert not facts[0].passive

    def test_passive_equals_active_form(self, crime_vocab):
        active = extract_facts("3 men stabbed a victim.", crime_vocab)
        passive = extract_facts("A victim got stabbed by 3 men.", crime_vocab)
        assert active == passive

    def test_main_subordinate_clause(self, crime_vocab):
        table = extract_facts("Police said that the victim survived.", crime_vocab)
        police = lexeme("police", "noun")
        say = lexeme("said", "verb", "say")
        victim = lexeme("victim", "noun")
        survive = lexeme("survived", "verb", "survive")
        assert make_fact(K.MAIN_SUBORDINATE_CLAUSE,
                         [ClausePair(police, say), ClausePair(victim, survive)]) in table
        assert make_fact(K.SUBJECT_VERB_OBJECT, [police, say, EMPTY]) in table
        assert make_fact(K.SUBJECT_VERB_OBJECT, [victim, survive, EMPTY]) in table
        assert len(table) == 3

    def test_adverbial_clause(self, crime_vocab):
        table = extract_facts("The victim was treated before the police arrived.", crime_vocab)
        treat = lexeme("treated", "verb", "treat")
        pair = ClausePair(lexeme("police", "noun"), lexeme("arrived", "verb", "arrive"))
        assert make_fact(K.CLAUSE_MODIFIER_VERB, [pair, treat]) in table
        assert len(table) == 3

    def test_relative_clause_and_noun_pp(self, crime_vocab):
        text = "A waiter from the restaurant who trembled called the police."
        table = extract_facts(text, crime_vocab)
        waiter = lexeme("waiter", "noun")
        assert make_fact(
            K.PHRASE_MODIFIER_NOUN,
            [Phrase((lexeme("from", "preposition"), lexeme("restaurant", "noun"))), waiter],
        ) in table
        assert make_fact(
            K.CLAUSE_MODIFIER_NOUN,
            [ClausePair(waiter, lexeme("trembled", "verb", "tremble")), waiter],
        ) in table
        assert make_fact(
            K.SUBJECT_VERB_OBJECT,
            [waiter, lexeme("called", "verb", "call"), lexeme("police", "noun")],
        ) in table
        assert len(table) == 4

    def test_pronoun_resolves_to_nearest_entity(self, street_vocab):
        table = extract_facts("A young woman arrived. She smiled.", street_vocab)
        assert make_fact(
            K.SUBJECT_VERB_OBJECT,
            [lexeme("woman", "noun"), lexeme("smiled", "verb", "smile"), EMPTY],
        ) in table

    def test_plural_pronoun_prefers_plural_mention(self, crime_vocab):
        table = extract_facts("The victim collapsed. The men fled. They escaped.", crime_vocab)
        assert make_fact(
            K.SUBJECT_VERB_OBJECT,
            [lexeme("men", "noun", "man"), lexeme("escaped", "verb", "escape"), EMPTY],
        ) in table

    def test_definite_re_mention_shares_entity(self, street_vocab):
        table = extract_facts("A young woman arrived. The woman smiled.", street_vocab)
        assert table.entities.get("woman") == lexeme("woman", "noun")
        svo = [f for f in table if f.kind is K.SUBJECT_VERB_OBJECT]
        assert len(svo) == 2

    def test_unknown_tokens_are_skipped(self, crime_vocab):
        with_noise = extract_facts("The men certainly fled quickly.", crime_vocab)
        # "certainly" is out of vocabulary but -ly tags it as an adverb
        vm = [f for f in with_noise if f.kind is K.VERB_MODIFIER]
        assert len(vm) == 2

    def test_synonym_expansion_tags_paraphrase(self, crime_vocab):
        res = load_resources(*resource_paths())
        vocab = pack_vocabulary(CRIME, res)
        table = extract_facts("Officers reported that the victim recovered.", vocab)
        kinds = {f.kind for f in table}
        assert K.MAIN_SUBORDINATE_CLAUSE in kinds


class TestNoInventedArguments:
    def test_extracted_lemmas_all_tagged_from_text(self, crime_vocab):
        config = load_config(CRIME / "config.json", seed=55, document_count=5)
        for doc in generate_documents(config):
            table = extract_facts(doc.text, crime_vocab)
            tokens = {t.lower() for t in tokenize(doc.text)}
            for fact in table:
                for surface in _fact_surfaces(fact):
                    for word in surface.lower().split():
                        assert word in tokens, (word, doc.text)


def _fact_surfaces(fact):
    from factharness.facts import ClausePair, Conjunction, EmptySlot

    for arg in fact.args:
        if isinstance(arg, EmptySlot):
            continue
        if isinstance(arg, Lexeme):
            yield arg.surface
        elif isinstance(arg, Phrase):
            # prepositions come from the text; phrase words as well
            yield arg.surface
        elif isinstance(arg, ClausePair):
            yield arg.noun.surface
            yield arg.verb.surface
        elif isinstance(arg, Conjunction):
            for c in arg.conjuncts:
                yield c.surface


class TestAnnotatedInput:
    ROWS = """\
1\tA\ta\tdeterminer\t-\t3\tdet
2\tyoung\tyoung\tadjective\t-\t3\tamod
3\twoman\twoman\tnoun\t-\t4\tnsubj
4\tarrived\tarrive\tverb\t-\t0\troot
5\tquickly\tquickly\tadverb\t-\t4\tadvmod

1\tDavid\tdavid\tproper-noun\tperson\t3\tnsubj
2\tChen\tchen\tproper-noun\tperson\t3\tnsubj
3\ttestified\ttestify\tverb\t-\t0\troot
"""

    def test_bypasses_vocabulary(self):
        from factharness.extractor import extract_facts_from_annotated

        table = extract_facts_from_annotated(self.ROWS.splitlines())
        woman = lexeme("woman", "noun")
        arrive = lexeme("arrived", "verb", "arrive")
        assert make_fact(K.NOUN_MODIFIER, [lexeme("young", "adjective"), woman]) in table
        assert make_fact(K.SUBJECT_VERB_OBJECT, [woman, arrive, EMPTY]) in table
        assert make_fact(K.VERB_MODIFIER, [lexeme("quickly", "adverb"), arrive]) in table

    def test_entity_spans_become_phrases(self):
        from factharness.extractor import extract_facts_from_annotated

        table = extract_facts_from_annotated(self.ROWS.splitlines())
        name = Phrase((lexeme("David", "proper-noun", "david"),
                       lexeme("Chen", "proper-noun", "chen")))
        assert make_fact(K.SUBJECT_VERB_OBJECT,
                         [name, lexeme("testified", "verb", "testify"), EMPTY]) in table

    def test_file_variant(self, tmp_path):
        from factharness.extractor import extract_facts_from_annotated_file

        path = tmp_path / "summary.tsv"
        path.write_text(self.ROWS)
        table = extract_facts_from_annotated_file(str(path))
        assert len(table) == 4


class TestSummaryStylePatterns:
    """Constructions model summaries use that generated text does not."""

    def test_elided_that_complement(self, crime_vocab):
        explicit = extract_facts("Police said that the victim survived.", crime_vocab)
        elided = extract_facts("Police said the victim survived.", crime_vocab)
        assert elided == explicit

    def test_coordinated_clauses(self, street_vocab):
        table = extract_facts("The woman arrived and the man smiled.", street_vocab)
        assert make_fact(K.SUBJECT_VERB_OBJECT,
                         [lexeme("woman", "noun"), lexeme("arrived", "verb", "arrive"),
                          EMPTY]) in table
        assert make_fact(K.SUBJECT_VERB_OBJECT,
                         [lexeme("man", "noun"), lexeme("smiled", "verb", "smile"),
                          EMPTY]) in table

    def test_shared_subject_verb_coordination(self, crime_vocab):
        table = extract_facts("The men fled and escaped.", crime_vocab)
        men = lexeme("men", "noun", "man")
        assert make_fact(K.SUBJECT_VERB_OBJECT,
                         [men, lexeme("fled", "verb", "flee"), EMPTY]) in table
        assert make_fact(K.SUBJECT_VERB_OBJECT,
                         [men, lexeme("escaped", "verb", "escape"), EMPTY]) in table

    def test_object_conjunction_not_split_as_clauses(self, crime_vocab):
        table = extract_facts("The men carried a black bag and a steel pipe.", crime_vocab)
        assert len(table) == 2
        assert all(f.kind is K.SUBJECT_VERB_OBJECT for f in table)

    def test_number_words_normalize_to_digits(self, crime_vocab):
        table = extract_facts("A victim got stabbed by three men.", crime_vocab)
        men = lexeme("men", "noun", "man")
        assert make_fact(K.NOUN_MODIFIER, [lexeme("three", "number", "3"), men]) in table

    def test_incompatible_pronoun_is_dropped_not_misbound(self, crime_vocab):
        # "she" cannot refer to the plural officers; no fabricated fact
        table = extract_facts("Officers said she recovered.", crime_vocab)
        say = lexeme("said", "verb", "say")
        assert make_fact(K.SUBJECT_VERB_OBJECT,
                         [lexeme("officers", "noun", "officer"), say, EMPTY]) in table
        recovered = [f for f in table
                     if f.kind is K.SUBJECT_VERB_OBJECT
                     and f.args[1] == lexeme("recovered", "verb", "recover")]
        assert recovered == []

    def test_tokens_with_reserved_characters_never_enter_facts(self, crime_vocab):
        # "suddenly/quickly" must not sneak into a fact through the -ly
        # fallback; reserved characters would break serialization later
        table = extract_facts("The men fled suddenly/quickly.", crime_vocab)
        table.to_text()  # must not raise
        vm = [f for f in table if f.kind is K.VERB_MODIFIER]
        assert vm == []
