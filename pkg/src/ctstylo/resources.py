"""Lexicon and reference-corpus resources used by the feature extractors.

All files are UTF-8 with ``#`` comment lines allowed anywhere. Loaded
objects are immutable and safe to share across threads. Lookups are total:
a missing entry yields None / 0, never a fabricated value.

File formats
    pinyin      char<TAB>initial<TAB>final<TAB>tone   (one row per reading)
    wordlist    one entry per line
    scalar      word<TAB>score; optional header ``# range = LO HI``
    ngrams      kind<TAB>n<TAB>gram<TAB>count, gram parts joined by U+241F
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Document, ParseError

GRAM_SEP = "␟"  # visible unit-separator symbol used to join gram parts
NGRAM_KINDS = ("word", "pos")
NGRAM_NS = (1, 2, 3)


def _data_lines(path: str | Path) -> Iterable[tuple[int, str]]:
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield line_no, line


@dataclass(frozen=True)
class Syllable:
    initial: str  # may be empty (zero-initial syllables)
    final: str
    tone: int  # 0 = neutral, 1-4 = full tones


class PinyinLexicon:
    """Character -> readings table; the first listed reading is the default."""

    def __init__(self, table: dict[str, tuple[Syllable, ...]]):
        self._table = dict(table)

    def readings(self, char: str) -> tuple[Syllable, ...]:
        return self._table.get(char, ())

    def default(self, char: str) -> Syllable | None:
        """Default reading, or None when the character is unknown."""
        readings = self._table.get(char)
        return readings[0] if readings else None

    def __contains__(self, char: str) -> bool:
        return char in self._table

    def __len__(self) -> int:
        return len(self._table)


def load_pinyin_lexicon(path: str | Path) -> PinyinLexicon:
    table: dict[str, list[Syllable]] = {}
    for line_no, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) != 4:
            raise ParseError("pinyin row needs 4 columns", line_no)
        char, initial, final, tone_s = (c.strip() for c in cols)
        if len(char) != 1:
            raise ParseError(f"pinyin key must be a single character: {char!r}", line_no)
        if not final:
            raise ParseError("empty final", line_no)
        try:
            tone = int(tone_s)
        except ValueError:
            raise ParseError(f"bad tone value {tone_s!r}", line_no)
        if tone not in (0, 1, 2, 3, 4):
            raise ParseError(f"bad tone value {tone}", line_no)
        syl = Syllable(initial=initial, final=final, tone=tone)
        readings = table.setdefault(char, [])
        if syl not in readings:  # duplicate identical rows collapse silently
            readings.append(syl)
    if not table:
        raise ParseError("empty lexicon")
    return PinyinLexicon({char: tuple(rs) for char, rs in table.items()})


@dataclass(frozen=True)
class WordList:
    name: str
    entries: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def load_wordlist(path: str | Path, name: str) -> WordList:
    entries = set()
    for _, line in _data_lines(path):
        entries.add(line.strip())
    entries.discard("")
    if not entries:
        raise ParseError(f"empty lexicon: {name}")
    return WordList(name=name, entries=frozenset(entries))


@dataclass(frozen=True)
class ScalarLexicon:
    """Word -> real score map (e.g. concreteness) with a documented range."""

    name: str
    scores: dict[str, float]
    lo: float
    hi: float

    @property
    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2.0

    def score(self, word: str) -> float | None:
        return self.scores.get(word)

    def __contains__(self, word: str) -> bool:
        return word in self.scores


def load_scalar_lexicon(path: str | Path, name: str) -> ScalarLexicon:
    scores: dict[str, float] = {}
    lo = hi = None
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                parts = stripped.lstrip("#").split("=")
                if len(parts) == 2 and parts[0].strip() == "range":
                    bounds = parts[1].split()
                    if len(bounds) != 2:
                        raise ParseError("range header needs two numbers", line_no)
                    lo, hi = float(bounds[0]), float(bounds[1])
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ParseError("scalar row needs word<TAB>score", line_no)
            word = cols[0].strip()
            try:
                value = float(cols[1])
            except ValueError:
                raise ParseError(f"bad score {cols[1]!r}", line_no)
            if not math.isfinite(value):
                raise ParseError(f"non-finite score {cols[1]!r}", line_no)
            scores[word] = value
    if not scores:
        raise ParseError(f"empty lexicon: {name}")
    if lo is None or hi is None:
        lo, hi = min(scores.values()), max(scores.values())
    return ScalarLexicon(name=name, scores=scores, lo=lo, hi=hi)


class RefNgramTable:
    """Reference-corpus n-gram counts, keyed by (kind, n) buckets.

    Totals are the per-kind sums of the n=1 counts and stand in for the
    reference size at every n.
    """

    def __init__(self, counts: dict[tuple[str, int], dict[tuple[str, ...], int]]):
        self._counts = {key: dict(table) for key, table in counts.items()}
        self.totals = {
            kind: sum(self._counts.get((kind, 1), {}).values()) for kind in NGRAM_KINDS
        }

    def count(self, kind: str, n: int, gram: tuple[str, ...]) -> int:
        return self._counts.get((kind, n), {}).get(gram, 0)

    def bucket(self, kind: str, n: int) -> dict[tuple[str, ...], int]:
        return self._counts.get((kind, n), {})

    def total(self, kind: str) -> int:
        return self.totals.get(kind, 0)

    def top_unigrams(self, kind: str, k: int) -> frozenset[str]:
        """The k most frequent unigrams (count desc, then gram asc)."""
        items = sorted(self.bucket(kind, 1).items(), key=lambda kv: (-kv[1], kv[0]))
        return frozenset(gram[0] for gram, _ in items[:k])


def load_reference_counts(path: str | Path) -> RefNgramTable:
    counts: dict[tuple[str, int], dict[tuple[str, ...], int]] = {}
    for line_no, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) != 4:
            raise ParseError("ngram row needs kind<TAB>n<TAB>gram<TAB>count", line_no)
        kind, n_s, gram_s, count_s = cols
        if kind not in NGRAM_KINDS:
            raise ParseError(f"unknown unit kind {kind!r}", line_no)
        try:
            n = int(n_s)
            count = int(count_s)
        except ValueError:
            raise ParseError("n and count must be integers", line_no)
        if n not in NGRAM_NS:
            raise ParseError(f"n must be 1, 2 or 3, got {n}", line_no)
        if count < 1:
            raise ParseError(f"count must be >= 1, got {count}", line_no)
        gram = tuple(gram_s.split(GRAM_SEP))
        if len(gram) != n:
            raise ParseError(f"gram has {len(gram)} parts, expected {n}", line_no)
        bucket = counts.setdefault((kind, n), {})
        bucket[gram] = bucket.get(gram, 0) + count
    if not counts:
        raise ParseError("empty reference table")
    return RefNgramTable(counts)


def save_reference_counts(table: RefNgramTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("# kind\tn\tgram\tcount\n")
        for kind in NGRAM_KINDS:
            for n in NGRAM_NS:
                bucket = table.bucket(kind, n)
                for gram in sorted(bucket):
                    handle.write(f"{kind}\t{n}\t{GRAM_SEP.join(gram)}\t{bucket[gram]}\n")


def build_reference_table(docs: Sequence[Document]) -> RefNgramTable:
    """Tabulate word and PoS n-grams (n = 1..3, within sentences) offline."""
    counts: dict[tuple[str, int], Counter] = {
        (kind, n): Counter() for kind in NGRAM_KINDS for n in NGRAM_NS
    }
    for doc in docs:
        for sent in doc.sentences:
            words = [tok.surface for tok in sent.tokens]
            tags = [tok.pos for tok in sent.tokens]
            for kind, units in (("word", words), ("pos", tags)):
                for n in NGRAM_NS:
                    bucket = counts[(kind, n)]
                    for i in range(len(units) - n + 1):
                        bucket[tuple(units[i : i + n])] += 1
    return RefNgramTable({key: dict(c) for key, c in counts.items() if c})
