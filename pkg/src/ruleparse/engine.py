"""Rule-based unlabeled dependency pre-annotation for Turkish.

Nine rules assign heads to tokens before a statistical parser ever sees
the sentence.  A sentence is processed over a *remaining* list that
initially holds every token; whenever a token receives a head (or is
deferred by a consecutive-adverb/adjective rule) it is removed, so rule
adjacency is adjacency in the shrinking remaining list, not surface
adjacency.

Scheduling is fixed:

1. AC scans adverb pairs: a degree adverb attaches to the adverb after
   it; any other adverb pair is queued for late binding.
2. AJC queues every adjacent adjective pair for late binding.
3. CPI (complex predicates/idioms) and NC (lexicon compounds) each run
   once.
4. PC, AAJ, AV, AJN, NV repeat in that order until a full pass assigns
   nothing.

Queued pairs resolve as soon as the second member receives a head from
any rule: the first member then attaches to the same head with code AC
(adverbs) or AJC (adjectives).  Disabling a rule skips it without
reordering the others; AV and NV are disabled by default because they
overgenerate on free word order.

Every assignment is checked against the partial head graph and skipped
(counted in diagnostics) if it would create a cycle.  Rule codes are
recorded on the dependent token.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .conllu import Sentence, Token
from .errors import EngineError
from .lexicon import Lexicon
from .morpho import MorphAnalysis, ROOT_POS_TO_UPOS


class RuleCode(str, Enum):
    CPI = "CPI"   # complex predicate / idiom
    NC = "NC"     # lexicon noun compound (bare, possessive, reduplicated)
    PC = "PC"     # possessive/genitive construction, proper-noun run, determiner
    AC = "AC"     # consecutive adverbs (direct or late-bound)
    AJC = "AJC"   # consecutive adjectives (late-bound)
    AAJ = "AAJ"   # degree adverb before adjective
    AV = "AV"     # adverb before verb
    AJN = "AJN"   # adjective before noun
    NV = "NV"     # noun or pronoun before verb
    NONE = "NONE"

    def __str__(self) -> str:
        return self.value


DEFAULT_RULES = frozenset({
    RuleCode.CPI, RuleCode.NC, RuleCode.PC, RuleCode.AC,
    RuleCode.AAJ, RuleCode.AJC, RuleCode.AJN,
})
ALL_RULES = DEFAULT_RULES | {RuleCode.AV, RuleCode.NV}

_NOMINAL = {"NOUN", "PROPN"}
_NV_DEPENDENTS = {"NOUN", "PROPN", "PRON"}
_POSSESSIVE_TAGS = {"P1sg", "P2sg", "P3sg", "P1pl", "P2pl", "P3pl"}
_OVERT_CASE_TAGS = {"Acc", "Dat", "Loc", "Abl", "Gen", "Ins", "Equ"}


@dataclass(frozen=True)
class RuleConfig:
    """Which rules run, and a defensive bound on engine iterations."""

    enabled: frozenset[RuleCode] = DEFAULT_RULES
    max_iterations: int = 1000

    def __post_init__(self):
        if RuleCode.NONE in self.enabled:
            raise ValueError("NONE is not a rule")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class RuleAssignment:
    """One head decision: ``dependent`` attaches to ``head`` via ``code``."""

    dependent: int
    head: int
    code: RuleCode

    def __post_init__(self):
        if self.dependent == self.head:
            raise ValueError("a token cannot head itself")


@dataclass
class Diagnostics:
    """Per-rule fire counts plus the number of cycle-avoiding skips."""

    fire_counts: Counter = field(default_factory=Counter)
    skipped_cycles: int = 0

    def merge(self, other: "Diagnostics") -> None:
        self.fire_counts.update(other.fire_counts)
        self.skipped_cycles += other.skipped_cycles

    def to_dict(self) -> dict:
        return {
            "fire_counts": {code: self.fire_counts[code]
                            for code in sorted(self.fire_counts)},
            "skipped_cycles": self.skipped_cycles,
        }


class _DeferredPair:
    __slots__ = ("first", "second", "resolved")

    def __init__(self, first: int, second: int):
        self.first = first
        self.second = second
        self.resolved = False


class EngineState:
    """Mutable per-sentence working state of a rule run."""

    def __init__(self, sentence: Sentence, analyses: Mapping[int, MorphAnalysis],
                 lexicon: Lexicon, diagnostics: Diagnostics):
        self.tokens: dict[int, Token] = {t.id: t for t in sentence.tokens}
        self.analyses = analyses
        self.lexicon = lexicon
        self.remaining: list[int] = [t.id for t in sentence.tokens]
        self.heads: dict[int, int] = {}
        self.assignments: list[RuleAssignment] = []
        self.consecutive_adverbs: list[_DeferredPair] = []
        self.consecutive_adjectives: list[_DeferredPair] = []
        self.cp_marked: set[int] = set()
        self.diagnostics = diagnostics

    # -- token views ---------------------------------------------------

    def pos(self, token_id: int) -> str | None:
        token = self.tokens[token_id]
        if token.upos is not None:
            return token.upos
        return ROOT_POS_TO_UPOS.get(self.analyses[token_id].pos)

    def _word_forms(self, token_id: int) -> tuple[str, ...]:
        token = self.tokens[token_id]
        forms = [token.form, self.analyses[token_id].lemma]
        if token.lemma:
            forms.append(token.lemma)
        return tuple(dict.fromkeys(forms))

    def pair_in(self, cls: str, first_id: int, second_id: int) -> bool:
        """Lexicon pair match over every surface/lemma combination."""
        for first in self._word_forms(first_id):
            for second in self._word_forms(second_id):
                if self.lexicon.match_pair(cls, first, second):
                    return True
        return False

    def _tags(self, token_id: int) -> tuple[str, ...]:
        return self.analyses[token_id].tags

    def _feat(self, token_id: int, key: str) -> str | None:
        for k, v in self.tokens[token_id].feats:
            if k == key:
                return v
        return None

    def has_genitive(self, token_id: int) -> bool:
        return "Gen" in self._tags(token_id) or self._feat(token_id, "Case") == "Gen"

    def has_accusative(self, token_id: int) -> bool:
        return "Acc" in self._tags(token_id) or self._feat(token_id, "Case") == "Acc"

    def has_possessive(self, token_id: int) -> bool:
        if any(tag in _POSSESSIVE_TAGS for tag in self._tags(token_id)):
            return True
        return any(k.endswith("[psor]") for k, _ in self.tokens[token_id].feats)

    def is_bare(self, token_id: int) -> bool:
        """No overt case marking and no possessive suffix."""
        if any(tag in _OVERT_CASE_TAGS for tag in self._tags(token_id)):
            return False
        case = self._feat(token_id, "Case")
        if case is not None and case != "Nom":
            return False
        return not self.has_possessive(token_id)

    # -- assignment ----------------------------------------------------

    def _would_cycle(self, dependent: int, head: int) -> bool:
        cur = head
        while cur is not None:
            if cur == dependent:
                return True
            cur = self.heads.get(cur)
        return False

    def assign(self, dependent: int, head: int, code: RuleCode) -> bool:
        """Record ``dependent -> head`` unless it would break an invariant.

        Returns False (and counts a diagnostic) when the edge would close
        a cycle.  On success the dependent leaves the remaining list and
        any deferred pair waiting on it is resolved recursively.
        """
        if dependent == head or dependent in self.heads:
            return False
        if self._would_cycle(dependent, head):
            self.diagnostics.skipped_cycles += 1
            return False
        self.heads[dependent] = head
        self.assignments.append(RuleAssignment(dependent, head, code))
        self.diagnostics.fire_counts[code.value] += 1
        if dependent in self.remaining:
            self.remaining.remove(dependent)
        self._resolve_deferred(dependent, head)
        return True

    def _resolve_deferred(self, resolved_id: int, head: int) -> None:
        for pairs, code in ((self.consecutive_adverbs, RuleCode.AC),
                            (self.consecutive_adjectives, RuleCode.AJC)):
            for pair in pairs:
                if pair.resolved or pair.second != resolved_id:
                    continue
                pair.resolved = True
                if pair.first != head and pair.first not in self.heads:
                    self.assign(pair.first, head, code)

    def defer(self, pairs: list[_DeferredPair], first: int, second: int) -> None:
        pairs.append(_DeferredPair(first, second))
        self.remaining.remove(first)

    def is_deferred_first(self, token_id: int) -> bool:
        return any(not p.resolved and p.first == token_id
                   for p in self.consecutive_adjectives)


def _scan(state: EngineState, try_pair) -> None:
    """One left-to-right pass over adjacent remaining pairs.

    ``try_pair(first, second) -> bool`` reports whether it consumed the
    pair; a consumed pair always shrinks the remaining list, so the scan
    stays at the same index to examine the freshly adjacent pair next.
    """
    i = 0
    while i + 1 < len(state.remaining):
        before = len(state.remaining)
        fired = try_pair(state.remaining[i], state.remaining[i + 1])
        if not fired or len(state.remaining) == before:
            i += 1


def _rule_ac(state: EngineState) -> None:
    """Consecutive adverbs: attach degree adverbs, queue the rest."""
    def try_pair(x: int, y: int) -> bool:
        if state.pos(x) != "ADV" or state.pos(y) != "ADV":
            return False
        if state.lexicon.is_degree_adverb(*state._word_forms(x)):
            return state.assign(x, y, RuleCode.AC)
        state.defer(state.consecutive_adverbs, x, y)
        return True

    _scan(state, try_pair)


def _rule_ajc(state: EngineState) -> None:
    """Consecutive adjectives: queue every adjacent pair for late binding."""
    def try_pair(x: int, y: int) -> bool:
        if state.pos(x) != "ADJ" or state.pos(y) != "ADJ":
            return False
        state.defer(state.consecutive_adjectives, x, y)
        return True

    _scan(state, try_pair)


def _chain_forward(state: EngineState, cls: str, code: RuleCode,
                   anchor: int, dependent: int) -> None:
    """Greedy continuation for lexicon entries longer than two words.

    After ``dependent`` attaches to ``anchor``, the word now adjacent to
    ``anchor`` may continue the same entry as a pair with ``dependent``
    (e.g. a three-word idiom chains head-to-head).
    """
    cursor = dependent
    while True:
        idx = state.remaining.index(anchor)
        if idx + 1 >= len(state.remaining):
            return
        nxt = state.remaining[idx + 1]
        if not state.pair_in(cls, cursor, nxt):
            return
        if not state.assign(nxt, cursor, code):
            return
        cursor = nxt


def _rule_cpi(state: EngineState) -> None:
    """Complex predicates and idioms: second word attaches to the first.

    The first word, when it is a noun, is marked CP so the noun-verb
    rule never reattaches it later.
    """
    def try_pair(x: int, y: int) -> bool:
        if not state.pair_in("cpi", x, y):
            return False
        if not state.assign(y, x, RuleCode.CPI):
            return False
        if state.pos(x) == "NOUN":
            state.cp_marked.add(x)
        _chain_forward(state, "cpi", RuleCode.CPI, x, y)
        return True

    _scan(state, try_pair)


def _rule_nc(state: EngineState) -> None:
    """Lexicon compounds: bare and reduplicated compounds are headed by
    their first member, possessive-marked compounds by their second."""
    def try_pair(x: int, y: int) -> bool:
        for cls in ("nc", "redup"):
            if state.pair_in(cls, x, y):
                if state.assign(y, x, RuleCode.NC):
                    _chain_forward(state, cls, RuleCode.NC, x, y)
                    return True
                return False
        if state.pair_in("pc", x, y):
            return state.assign(x, y, RuleCode.NC)
        return False

    _scan(state, try_pair)


def _rule_pc(state: EngineState) -> None:
    """Possessive constructions, proper-noun runs, and determiners.

    For adjacent nominals the first attaches to the second when it is
    genitive-marked, or when it is bare and the second carries a
    possessive suffix without being accusative.  Runs of proper nouns
    collapse onto the first proper noun, and a determiner attaches to
    the nominal after it.
    """
    def try_pair(x: int, y: int) -> bool:
        pos_x, pos_y = state.pos(x), state.pos(y)
        if pos_x in _NOMINAL and pos_y in _NOMINAL:
            if state.has_genitive(x):
                return state.assign(x, y, RuleCode.PC)
            if state.is_bare(x) and state.has_possessive(y) \
                    and not state.has_accusative(y):
                return state.assign(x, y, RuleCode.PC)
        if pos_x == "PROPN" and pos_y == "PROPN":
            return state.assign(y, x, RuleCode.PC)
        if pos_x == "DET" and pos_y in _NOMINAL:
            return state.assign(x, y, RuleCode.PC)
        return False

    _scan(state, try_pair)


def _rule_aaj(state: EngineState) -> None:
    """A degree adverb attaches to the adjective directly after it."""
    def try_pair(x: int, y: int) -> bool:
        if state.pos(x) == "ADV" and state.pos(y) == "ADJ" \
                and state.lexicon.is_degree_adverb(*state._word_forms(x)):
            return state.assign(x, y, RuleCode.AAJ)
        return False

    _scan(state, try_pair)


def _rule_av(state: EngineState) -> None:
    """An adverb attaches to the verb after it, unless it is one of the
    adverbs that emphasize the preceding word, which attach backwards."""
    def try_pair(x: int, y: int) -> bool:
        if state.pos(x) != "ADV" or state.pos(y) != "VERB":
            return False
        if state.lexicon.is_emphasizing_adverb(*state._word_forms(x)):
            if x == 1:
                return False
            return state.assign(x, x - 1, RuleCode.AV)
        return state.assign(x, y, RuleCode.AV)

    _scan(state, try_pair)


def _rule_ajn(state: EngineState) -> None:
    """An adjective attaches to the nominal directly after it."""
    def try_pair(x: int, y: int) -> bool:
        if state.pos(x) == "ADJ" and state.pos(y) in _NOMINAL \
                and not state.is_deferred_first(x):
            return state.assign(x, y, RuleCode.AJN)
        return False

    _scan(state, try_pair)


def _rule_nv(state: EngineState) -> None:
    """An unassigned noun or pronoun attaches to the verb after it,
    unless it was marked as part of a complex predicate."""
    def try_pair(x: int, y: int) -> bool:
        if state.pos(x) in _NV_DEPENDENTS and x not in state.cp_marked \
                and state.pos(y) == "VERB":
            return state.assign(x, y, RuleCode.NV)
        return False

    _scan(state, try_pair)


_LOOP_RULES = (
    (RuleCode.PC, _rule_pc),
    (RuleCode.AAJ, _rule_aaj),
    (RuleCode.AV, _rule_av),
    (RuleCode.AJN, _rule_ajn),
    (RuleCode.NV, _rule_nv),
)


def run(sentence: Sentence,
        analyses: Mapping[int, MorphAnalysis],
        lexicon: Lexicon,
        config: RuleConfig | None = None,
        diagnostics: Diagnostics | None = None) -> list[RuleAssignment]:
    """Apply the enabled rules to one sentence.

    ``analyses`` must map every token id to its morphological analysis.
    Returns the assignments in the order they were made; pass a
    :class:`Diagnostics` to accumulate fire counts across sentences.
    """
    config = config or RuleConfig()
    for token in sentence.tokens:
        if token.id not in analyses:
            raise ValueError(
                f"token {token.id} ({token.form!r}) has no morphological analysis")
    state = EngineState(sentence, analyses,
                        lexicon, diagnostics if diagnostics is not None else Diagnostics())

    if RuleCode.AC in config.enabled:
        _rule_ac(state)
    if RuleCode.AJC in config.enabled:
        _rule_ajc(state)
    if RuleCode.CPI in config.enabled:
        _rule_cpi(state)
    if RuleCode.NC in config.enabled:
        _rule_nc(state)

    iterations = 0
    while state.remaining:
        iterations += 1
        if iterations > config.max_iterations:
            raise EngineError(
                f"rule loop exceeded {config.max_iterations} iterations")
        before = len(state.assignments)
        for code, rule in _LOOP_RULES:
            if code in config.enabled:
                rule(state)
        if len(state.assignments) == before:
            break
    return list(state.assignments)


def assigned_heads(assignments: list[RuleAssignment]) -> dict[int, int]:
    """Dependent-to-head map over a run's assignments."""
    return {a.dependent: a.head for a in assignments}
