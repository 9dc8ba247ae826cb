"""Morphological analyses, the suffix inventory, and lemma-suffix statistics.

An analysis is a lemma plus the ordered morpheme tags produced by a
morphological disambiguator (``insan+Noun+A3pl+Gen`` style).  The leading
element of the tag sequence is the root part of speech and is kept apart
from the suffix tags proper, so a bare root has an empty tag tuple.

The suffix inventory is the fixed list of suffix tags that defines the
column order of the lemma-suffix co-occurrence matrix.  The default
inventory shipped with the package has 81 entries, each classified as
inflectional or derivational.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import IO, Iterable

from .errors import InputFormatError

INFLECTIONAL = "inflectional"
DERIVATIONAL = "derivational"

# Root part-of-speech categories that may open (or, after a derivation
# boundary, appear inside) a morpheme tag sequence.  They are not suffixes
# and never occupy matrix columns.
ROOT_POS_TAGS = frozenset({
    "Noun", "Verb", "Adj", "Adv", "Pron", "Det", "Conj", "Postp",
    "Num", "Interj", "Ques", "Dup", "Punc",
})

# Root POS tag -> Universal Dependencies POS, used when a token carries no
# UPOS of its own.
ROOT_POS_TO_UPOS = {
    "Noun": "NOUN",
    "Verb": "VERB",
    "Adj": "ADJ",
    "Adv": "ADV",
    "Pron": "PRON",
    "Det": "DET",
    "Conj": "CCONJ",
    "Postp": "ADP",
    "Num": "NUM",
    "Interj": "INTJ",
    "Ques": "PART",
    "Dup": "X",
    "Punc": "PUNCT",
}


@dataclass(frozen=True)
class MorphAnalysis:
    """A disambiguated morphological analysis of one token.

    ``tags`` holds the suffix tags only; the root part of speech lives in
    ``pos``.  ``insan+Noun+A3pl+Gen`` therefore becomes
    ``MorphAnalysis("insan", "Noun", ("A3pl", "Gen"))``.
    """

    lemma: str
    pos: str
    tags: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.lemma:
            raise ValueError("analysis lemma must be non-empty")
        if not self.pos:
            raise ValueError("analysis root POS must be non-empty")


@dataclass(frozen=True)
class SuffixInventory:
    """Ordered suffix tags with their inflectional/derivational class.

    The position of a tag in ``entries`` is its column index in every
    matrix built against this inventory.
    """

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self):
        tags = [tag for tag, _ in self.entries]
        if len(set(tags)) != len(tags):
            raise ValueError("duplicate tags in suffix inventory")
        for tag, cls in self.entries:
            if cls not in (INFLECTIONAL, DERIVATIONAL):
                raise ValueError(f"tag {tag!r} has unknown class {cls!r}")

    @cached_property
    def tags(self) -> tuple[str, ...]:
        return tuple(tag for tag, _ in self.entries)

    @cached_property
    def index(self) -> dict[str, int]:
        return {tag: i for i, (tag, _) in enumerate(self.entries)}

    @cached_property
    def inflectional(self) -> frozenset[str]:
        return frozenset(t for t, c in self.entries if c == INFLECTIONAL)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, tag: str) -> bool:
        return tag in self.index


def load_inventory(source: str | IO[str] | None = None) -> SuffixInventory:
    """Load a suffix inventory from a ``tag<TAB>class`` stream.

    With no argument the packaged default (81 tags) is loaded.  Lines
    starting with ``#`` and blank lines are ignored; entry order defines
    column order.
    """
    if source is None:
        source = resources.files("ruleparse").joinpath(
            "data/suffix_inventory.txt").read_text(encoding="utf-8")
    text = source.read() if hasattr(source, "read") else source
    entries = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise InputFormatError(
                f"inventory line {line_no}: expected 'tag<TAB>class', got {line!r}")
        entries.append((parts[0], parts[1]))
    try:
        return SuffixInventory(tuple(entries))
    except ValueError as exc:
        raise InputFormatError(f"invalid suffix inventory: {exc}") from exc


_DEFAULT_INVENTORY: SuffixInventory | None = None


def default_inventory() -> SuffixInventory:
    """The packaged 81-tag inventory, loaded once and cached."""
    global _DEFAULT_INVENTORY
    if _DEFAULT_INVENTORY is None:
        _DEFAULT_INVENTORY = load_inventory()
    return _DEFAULT_INVENTORY


def inflectional_suffixes(analysis: MorphAnalysis,
                          inventory: SuffixInventory | None = None) -> tuple[str, ...]:
    """The subsequence of the analysis tags classified as inflectional.

    Root-POS tags inside the sequence (derivation boundaries) are passed
    over; any other tag missing from the inventory raises.
    """
    inventory = inventory or default_inventory()
    keep = []
    for tag in analysis.tags:
        if tag in ROOT_POS_TAGS:
            continue
        if tag not in inventory:
            raise InputFormatError(f"unknown morpheme tag: {tag!r}")
        if tag in inventory.inflectional:
            keep.append(tag)
    return tuple(keep)


def last_suffix(analysis: MorphAnalysis) -> str | None:
    """The final morpheme tag regardless of class; None for a bare root."""
    return analysis.tags[-1] if analysis.tags else None


@dataclass(frozen=True)
class LemmaSuffixMatrix:
    """Row-normalized lemma/suffix co-occurrence counts.

    ``rows`` maps a lemma to its vector, one entry per inventory tag.
    Rows are normalized to sum to one unless the lemma was never seen
    with a suffix, in which case the row is all zeros.  Treat as
    read-only after construction.
    """

    inventory: SuffixInventory
    rows: dict[str, tuple[float, ...]]

    def __len__(self) -> int:
        return len(self.rows)

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.rows


def suffix_vector(matrix: LemmaSuffixMatrix, lemma: str) -> tuple[float, ...]:
    """The stored row for ``lemma``, or an all-zero vector if unseen."""
    row = matrix.rows.get(lemma)
    if row is None:
        return (0.0,) * len(matrix.inventory)
    return row


class MatrixBuilder:
    """Incremental, mergeable counting stage for ``build_matrix``.

    Partial builders over corpus shards can be merged in any order; the
    final matrix depends only on the combined counts.
    """

    def __init__(self, inventory: SuffixInventory | None = None):
        self.inventory = inventory or default_inventory()
        self.counts: dict[str, Counter] = {}
        self.freq: Counter = Counter()
        self.unknown_tags: Counter = Counter()

    def update(self, analysis: MorphAnalysis) -> None:
        self.freq[analysis.lemma] += 1
        row = self.counts.setdefault(analysis.lemma, Counter())
        for tag in analysis.tags:
            if tag in self.inventory:
                row[tag] += 1
            elif tag not in ROOT_POS_TAGS:
                self.unknown_tags[tag] += 1

    def merge(self, other: "MatrixBuilder") -> None:
        if other.inventory.tags != self.inventory.tags:
            raise InputFormatError("cannot merge builders over different inventories")
        self.freq.update(other.freq)
        self.unknown_tags.update(other.unknown_tags)
        for lemma, row in other.counts.items():
            self.counts.setdefault(lemma, Counter()).update(row)

    def build(self, cap: int = 40000) -> LemmaSuffixMatrix:
        if cap < 1:
            raise ValueError("cap must be a positive integer")
        # Most frequent lemmas first; lexicographic order breaks ties so
        # the kept set is deterministic.
        ranked = sorted(self.freq, key=lambda lemma: (-self.freq[lemma], lemma))
        kept = ranked[:cap]
        tags = self.inventory.tags
        rows = {}
        for lemma in sorted(kept):
            row = self.counts[lemma]
            total = sum(row[tag] for tag in tags)
            if total:
                rows[lemma] = tuple(row[tag] / total for tag in tags)
            else:
                rows[lemma] = (0.0,) * len(tags)
        return LemmaSuffixMatrix(self.inventory, rows)


def build_matrix(corpus: Iterable[MorphAnalysis],
                 cap: int = 40000,
                 inventory: SuffixInventory | None = None,
                 unknown_tags: Counter | None = None) -> LemmaSuffixMatrix:
    """Count suffix tags per lemma over ``corpus`` and normalize rows.

    Keeps the ``cap`` most frequent lemmas (ties broken lexicographically).
    Tags absent from the inventory are skipped; pass a Counter as
    ``unknown_tags`` to collect them for diagnostics.
    """
    builder = MatrixBuilder(inventory)
    for analysis in corpus:
        builder.update(analysis)
    matrix = builder.build(cap)
    if unknown_tags is not None:
        unknown_tags.update(builder.unknown_tags)
    return matrix


def write_matrix(matrix: LemmaSuffixMatrix) -> str:
    """Serialize a matrix: a tag header row, then one 9-decimal row per lemma."""
    lines = ["lemma\t" + "\t".join(matrix.inventory.tags)]
    for lemma in sorted(matrix.rows):
        values = "\t".join(f"{v:.9f}" for v in matrix.rows[lemma])
        lines.append(f"{lemma}\t{values}")
    return "\n".join(lines) + "\n"


def read_matrix(source: str | IO[str],
                inventory: SuffixInventory | None = None) -> LemmaSuffixMatrix:
    """Parse a matrix file written by :func:`write_matrix`.

    The header must list the inventory tags in order; rows reload to the
    exact floats that reserialize to the same bytes.
    """
    inventory = inventory or default_inventory()
    text = source.read() if hasattr(source, "read") else source
    lines = text.splitlines()
    if not lines:
        raise InputFormatError("matrix stream is empty")
    header = lines[0].split("\t")
    if header[:1] != ["lemma"] or tuple(header[1:]) != inventory.tags:
        raise InputFormatError("matrix header does not match the suffix inventory")
    width = len(inventory)
    rows: dict[str, tuple[float, ...]] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != width + 1:
            raise InputFormatError(
                f"matrix line {line_no}: expected {width + 1} columns, got {len(cols)}")
        try:
            rows[cols[0]] = tuple(float(v) for v in cols[1:])
        except ValueError as exc:
            raise InputFormatError(f"matrix line {line_no}: bad value ({exc})") from exc
    return LemmaSuffixMatrix(inventory, rows)
