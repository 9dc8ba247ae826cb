"""Shared builders and fixtures for the test suite."""

import random

import pytest

from ruleparse import MorphAnalysis, Sentence, Token, default_lexicon_dir, load_lexicon

DEPRELS = ("nsubj", "obj", "nmod", "amod", "advmod", "det", "punct", "conj")


def tok(i, form, upos=None, lemma=None, feats=(), head=None, deprel=None,
        xpos=None, deps=None, misc=()):
    return Token(id=i, form=form, lemma=lemma, upos=upos, xpos=xpos,
                 feats=tuple(feats), head=head, deprel=deprel, deps=deps,
                 misc=tuple(misc))


def sent(*tokens, comments=(), ranges=()):
    return Sentence(tuple(tokens), tuple(comments), tuple(ranges))


def ma(lemma, pos, *tags):
    return MorphAnalysis(lemma=lemma, pos=pos, tags=tuple(tags))


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(default_lexicon_dir())


# --------------------------------------------------------------------------
# Random sentence generation for the engine invariant suite.
#
# Each vocabulary item is (form, lemma, upos, analysis).  The pools include
# words that hit the packaged lexicons so random sentences exercise every
# rule, not just the POS-driven ones.

_NOUNS = [
    ("makine", "makine", ("A3sg", "Nom")),
    ("makinenin", "makine", ("A3sg", "Gen")),
    ("yağı", "yağ", ("A3sg", "P3sg", "Nom")),
    ("yağını", "yağ", ("A3sg", "P3sg", "Acc")),
    ("ev", "ev", ("A3sg", "Nom")),
    ("evin", "ev", ("A3sg", "Gen")),
    ("eve", "ev", ("A3sg", "Dat")),
    ("göz", "göz", ("A3sg", "Nom")),
    ("kuru", "kuru", ("A3sg", "Nom")),
    ("yemiş", "yemiş", ("A3sg", "Nom")),
    ("arka", "arka", ("A3sg", "Nom")),
    ("arkaya", "arka", ("A3sg", "Dat")),
    ("diş", "diş", ("A3sg", "Nom")),
    ("fırçası", "fırça", ("A3sg", "P3sg", "Nom")),
    ("kapı", "kapı", ("A3sg", "Nom")),
    ("söz", "söz", ("A3sg", "Nom")),
]
_VERBS = [
    ("geldi", "gel", ("Past", "A3sg")),
    ("etti", "et", ("Past", "A3sg")),
    ("verdi", "ver", ("Past", "A3sg")),
    ("getiriyordum", "getir", ("Prog1", "Past", "A1sg")),
    ("inceledi", "incele", ("Past", "A3sg")),
    ("oldu", "ol", ("Past", "A3sg")),
]
_ADJS = [
    ("küçük", "küçük", ()),
    ("eski", "eski", ()),
    ("kırmızı", "kırmızı", ()),
    ("anlamsız", "anlamsız", ()),
    ("bulanık", "bulanık", ()),
]
_ADVS = [
    ("çok", "çok", ()),
    ("daha", "daha", ()),
    ("dün", "dün", ()),
    ("yine", "yine", ()),
    ("bile", "bile", ()),
    ("sonra", "sonra", ()),
    ("dikkatlice", "dikkatlice", ()),
]
_OTHERS = [
    ("Ahmet", "Ahmet", "PROPN", ("Prop", "A3sg", "Nom")),
    ("Ayşe", "Ayşe", "PROPN", ("Prop", "A3sg", "Nom")),
    ("İstanbul", "İstanbul", "PROPN", ("Prop", "A3sg", "Nom")),
    ("bu", "bu", "DET", ()),
    ("her", "her", "DET", ()),
    ("ben", "ben", "PRON", ("A1sg", "Nom")),
    ("bunu", "bu", "PRON", ("A3sg", "Acc")),
    ("ama", "ama", "CCONJ", ()),
    ("ve", "ve", "CCONJ", ()),
    (".", ".", "PUNCT", ()),
    (",", ",", "PUNCT", ()),
]

_POOL = (
    [(f, l, "NOUN", t) for f, l, t in _NOUNS]
    + [(f, l, "VERB", t) for f, l, t in _VERBS]
    + [(f, l, "ADJ", t) for f, l, t in _ADJS]
    + [(f, l, "ADV", t) for f, l, t in _ADVS]
    + _OTHERS
)

_POS_OF = {"NOUN": "Noun", "VERB": "Verb", "ADJ": "Adj", "ADV": "Adv",
           "PROPN": "Noun", "DET": "Det", "PRON": "Pron", "CCONJ": "Conj",
           "PUNCT": "Punc"}

# Multi-word stretches that hit lexicon entries, spliced in at random.
_SPLICES = [
    [("yerine", "yer", "NOUN", ("A3sg", "P3sg", "Dat")),
     ("getiriyordum", "getir", "VERB", ("Prog1", "Past", "A1sg"))],
    [("kabul", "kabul", "NOUN", ("A3sg", "Nom")),
     ("etti", "et", "VERB", ("Past", "A3sg"))],
    [("göz", "göz", "NOUN", ("A3sg", "Nom")),
     ("kulak", "kulak", "NOUN", ("A3sg", "Nom")),
     ("oldu", "ol", "VERB", ("Past", "A3sg"))],
    [("kuru", "kuru", "NOUN", ("A3sg", "Nom")),
     ("yemiş", "yemiş", "NOUN", ("A3sg", "Nom"))],
    [("arka", "arka", "NOUN", ("A3sg", "Nom")),
     ("arkaya", "arka", "NOUN", ("A3sg", "Dat"))],
    [("diş", "diş", "NOUN", ("A3sg", "Nom")),
     ("fırçası", "fırça", "NOUN", ("A3sg", "P3sg", "Nom"))],
    [("çok", "çok", "ADV", ()),
     ("küçük", "küçük", "ADJ", ())],
]


def random_sentence(rng: random.Random, max_len: int = 30):
    """A random sentence plus its analyses, with occasional lexicon hits."""
    items = []
    while len(items) < rng.randint(1, max_len):
        if rng.random() < 0.25:
            items.extend(rng.choice(_SPLICES))
        else:
            items.append(rng.choice(_POOL))
    items = items[:max_len]
    tokens = []
    analyses = {}
    for i, (form, lemma, upos, tags) in enumerate(items, start=1):
        tokens.append(tok(i, form, upos, lemma))
        analyses[i] = ma(lemma, _POS_OF[upos], *tags)
    return sent(*tokens), analyses


def random_tree_heads(rng: random.Random, n: int) -> list:
    """Heads of a uniformly grown random tree: token order is shuffled and
    every token after the first attaches to an earlier one."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = {order[0]: 0}
    for pos, token_id in enumerate(order[1:], start=1):
        heads[token_id] = order[rng.randrange(pos)]
    return [heads[i] for i in range(1, n + 1)]


def with_random_tree(rng: random.Random, sentence: Sentence) -> Sentence:
    """The same tokens re-headed with a random valid tree and labels."""
    heads = random_tree_heads(rng, len(sentence))
    tokens = []
    for token, head in zip(sentence.tokens, heads):
        deprel = "root" if head == 0 else rng.choice(DEPRELS)
        tokens.append(tok(token.id, token.form, token.upos, token.lemma,
                          feats=token.feats, head=head, deprel=deprel))
    return sent(*tokens, comments=sentence.comments, ranges=sentence.ranges)


def random_treebank(rng: random.Random, n_sentences: int, max_len: int = 30):
    """Parallel (gold_sentences, bare_sentences, analyses) for eval tests."""
    gold, bare, analyses = [], [], {}
    for ordinal in range(1, n_sentences + 1):
        sentence, sent_analyses = random_sentence(rng, max_len)
        gold.append(with_random_tree(rng, sentence))
        bare.append(sentence)
        for token_id, analysis in sent_analyses.items():
            analyses[(ordinal, token_id)] = analysis
    return gold, bare, analyses


def sidecar_text(analyses: dict) -> str:
    lines = []
    for (ordinal, token_id), analysis in sorted(analyses.items()):
        tags = "+".join((analysis.pos,) + analysis.tags)
        lines.append(f"{ordinal}\t{token_id}\t{analysis.lemma}\t{tags}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Fuzzed CoNLL-U sentences for serialization round-trip tests.

_SAFE = "abcdefghijklmnopqrstuvwxyzçğıöşüABCÇDEĞİIÖŞÜ0123456789.-'"
_UPOS = ("NOUN", "VERB", "ADJ", "ADV", "PROPN", "DET", "PRON", "PUNCT", None)
_FEAT_KEYS = ("Case", "Number", "Person", "Tense", "Number[psor]")
_FEAT_VALUES = ("Nom", "Acc", "Gen", "Sing", "Plur", "3", "Past")
_MISC_KEYS = ("SpaceAfter", "Translit", "Note")


def _word(rng: random.Random) -> str:
    return "".join(rng.choice(_SAFE) for _ in range(rng.randint(1, 10)))


def random_conllu_sentence(rng: random.Random, max_len: int = 12) -> Sentence:
    """A structurally varied sentence: optional fields, feats, misc values
    with and without '=', comments, multiword-token ranges, and either a
    full random tree or entirely absent heads."""
    n = rng.randint(1, max_len)
    heads = random_tree_heads(rng, n) if rng.random() < 0.7 else [None] * n
    tokens = []
    for i in range(1, n + 1):
        feats = ()
        if rng.random() < 0.4:
            keys = rng.sample(_FEAT_KEYS, rng.randint(1, 3))
            feats = tuple(sorted((k, rng.choice(_FEAT_VALUES)) for k in keys))
        misc = ()
        if rng.random() < 0.3:
            misc = tuple((rng.choice(_MISC_KEYS),
                          rng.choice((None, "No", "a=b", _word(rng))))
                         for _ in range(rng.randint(1, 2)))
        head = heads[i - 1]
        tokens.append(tok(
            i, _word(rng),
            upos=rng.choice(_UPOS),
            lemma=_word(rng) if rng.random() < 0.8 else None,
            xpos=_word(rng) if rng.random() < 0.2 else None,
            feats=feats,
            head=head,
            deprel=("root" if head == 0 else rng.choice(DEPRELS))
            if head is not None else None,
            deps=None,
            misc=misc,
        ))
    comments = tuple(f"# {key} = {_word(rng)}"
                     for key in rng.sample(("sent_id", "text", "source"),
                                           rng.randint(0, 2)))
    ranges = ()
    if rng.random() < 0.15:
        at = rng.randint(0, n - 1)
        raw = f"{at + 1}-{at + 2}\t{_word(rng)}\t_\t_\t_\t_\t_\t_\t_\t_"
        ranges = ((at, raw),)
    return sent(*tokens, comments=comments, ranges=ranges)
