"""Creative-text-translation features: repetition, rhythm, translatability,
and miscellaneous markers of Chinese children's prose.

Sparse counts are normalized per 1,000 sample tokens so chi-square inputs
stay non-negative and comparably scaled. Character-level scans run over
contiguous CJK runs inside each sentence, so punctuation or script changes
never create false adjacency.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import Chunk, Document, Sentence, iter_tokens
from .feat_generic import FeatureBlock
from .resources import PinyinLexicon, WordList

Sample = Document | Chunk

REPETITION_PATTERNS = ("AA", "AAA", "ABAB", "AABB")

_LATIN = "A-Za-zＡ-Ｚａ-ｚ"
_CJK = "㐀-䶿一-鿿豈-﫿"
_CJK_RUN = re.compile(f"[{_CJK}]+")
_LATIN_RUN = re.compile(f"[{_LATIN}]+(?: +[{_LATIN}]+)*")
_SPAN_RE = re.compile(f"(?P<latin>[{_LATIN}]+(?: +[{_LATIN}]+)*)|(?P<cjk>[{_CJK}]+)")
_ABBREV_RE = re.compile(r"^[A-ZＡ-Ｚ]{2,5}$")

OPENING_QUOTES = ("“", "「", "『")  # left double, corner, white corner
NEUTRAL_QUOTES = ('"', "'")

VOWEL_LETTERS = set("aeiouvü")  # v doubles for u-umlaut in ascii schemes
LEVEL_TONES = {1, 2}
OBLIQUE_TONES = {3, 4}


def is_cjk(char: str) -> bool:
    code = ord(char)
    return (
        0x4E00 <= code <= 0x9FFF
        or 0x3400 <= code <= 0x4DBF
        or 0xF900 <= code <= 0xFAFF
    )


def is_latin(char: str) -> bool:
    code = ord(char)
    return (
        0x41 <= code <= 0x5A
        or 0x61 <= code <= 0x7A
        or 0xFF21 <= code <= 0xFF3A
        or 0xFF41 <= code <= 0xFF5A
    )


def sentence_text(sentence: Sentence) -> str:
    """Surface text of a sentence.

    Segmented corpora drop the spaces between Latin words, so a space is
    restored wherever two adjacent tokens both touch the joint with Latin
    letters ("perfectly" + "safe" -> "perfectly safe").
    """
    parts: list[str] = []
    prev = ""
    for tok in sentence.tokens:
        surf = tok.surface
        if parts and prev and surf and is_latin(prev[-1]) and is_latin(surf[0]):
            parts.append(" ")
        parts.append(surf)
        prev = surf
    return "".join(parts)


def _per_mille(count: float, tokens: int) -> float:
    return count / tokens * 1000.0 if tokens else 0.0


@dataclass(frozen=True)
class RepetitionConfig:
    """Which reduplication templates to count and what to skip.

    The stoplist holds fixed lexicalized forms (kinship terms such as
    妈妈) whose reduplicated shape is not a stylistic choice.
    """

    stoplist: frozenset[str] = frozenset()
    patterns: tuple[str, ...] = REPETITION_PATTERNS

    @staticmethod
    def from_wordlist(words: WordList | None, patterns=REPETITION_PATTERNS):
        entries = frozenset(words.entries) if words is not None else frozenset()
        for entry in entries:
            if not 2 <= len(entry) <= 4:
                raise ValueError(f"repetition stoplist entry {entry!r} not 2-4 chars")
        return RepetitionConfig(stoplist=entries, patterns=tuple(patterns))


def scan_repetitions(stream: str, cfg: RepetitionConfig) -> Counter:
    """Count reduplication matches in one CJK character run.

    Left-to-right, non-overlapping, longest match wins: the 4-char
    templates are tried first, then AAA, then AA (which must not extend
    into an AAA). A match whose substring is stoplisted is consumed but
    not counted.
    """
    enabled = set(cfg.patterns)
    counts: Counter = Counter()
    i = 0
    n = len(stream)
    while i < n:
        matched = None
        a, b, c, d = (stream[i : i + 4] + "    ")[:4]
        if i + 3 < n:
            if "ABAB" in enabled and a == c and b == d and a != b:
                matched = ("ABAB", 4)
            elif "AABB" in enabled and a == b and c == d and a != c:
                matched = ("AABB", 4)
        if matched is None and i + 2 < n and "AAA" in enabled:
            if a == b == c:
                matched = ("AAA", 3)
        if matched is None and i + 1 < n and "AA" in enabled:
            if a == b and (i + 2 >= n or stream[i + 2] != a):
                matched = ("AA", 2)
        if matched is None:
            i += 1
            continue
        pattern, length = matched
        if stream[i : i + length] not in cfg.stoplist:
            counts[pattern] += 1
        i += length
    return counts


def repetition_features(sample: Sample, cfg: RepetitionConfig) -> FeatureBlock:
    tokens = sum(1 for _ in iter_tokens(sample))
    counts: Counter = Counter()
    for sent in sample.sentences:
        for run in _CJK_RUN.findall(sentence_text(sent)):
            counts.update(scan_repetitions(run, cfg))
    block = FeatureBlock()
    for pattern in cfg.patterns:
        block.values[f"rep_{pattern}"] = _per_mille(counts.get(pattern, 0), tokens)
    return block


def _sentence_syllables(sentence: Sentence, pinyin: PinyinLexicon):
    """Default readings for the sentence's CJK characters, skipping unknowns."""
    known = []
    for char in sentence_text(sentence):
        if is_cjk(char):
            syl = pinyin.default(char)
            if syl is not None:
                known.append(syl)
    return known


def rhythm_features(sample: Sample, pinyin: PinyinLexicon) -> FeatureBlock:
    """Phonetic-pattern features from default pinyin readings.

    Adjacency is over the known-syllable sequence of each sentence;
    characters without a reading drop out of every denominator.
    """
    per_sentence = [_sentence_syllables(s, pinyin) for s in sample.sentences]
    all_syllables = [syl for sent in per_sentence for syl in sent]

    block = FeatureBlock()
    names = (
        "rhy_open_syllable_ratio",
        "rhy_rhyme_ratio",
        "rhy_rhyme_density",
        "rhy_vowel_balance",
        "rhy_tonal_alternation",
    )
    if not all_syllables:
        for name in names:
            block.values[name] = 0.0
        block.flags.append("no-pinyin")
        return block

    opens = sum(1 for s in all_syllables if s.final[-1].lower() in VOWEL_LETTERS)
    block.values["rhy_open_syllable_ratio"] = opens / len(all_syllables)

    finals_at_end = [sent[-1].final for sent in per_sentence if sent]
    pairs = list(zip(finals_at_end, finals_at_end[1:]))
    block.values["rhy_rhyme_ratio"] = (
        sum(1 for a, b in pairs if a == b) / len(pairs) if pairs else 0.0
    )

    within_pairs = 0
    within_same = 0
    tone_pairs = 0
    tone_flips = 0
    for sent in per_sentence:
        for left, right in zip(sent, sent[1:]):
            within_pairs += 1
            if left.final == right.final:
                within_same += 1
            if left.tone in (1, 2, 3, 4) and right.tone in (1, 2, 3, 4):
                tone_pairs += 1
                left_level = left.tone in LEVEL_TONES
                if left_level != (right.tone in LEVEL_TONES):
                    tone_flips += 1
    block.values["rhy_rhyme_density"] = within_same / within_pairs if within_pairs else 0.0

    final_counts = Counter(s.final for s in all_syllables)
    if len(final_counts) <= 1:
        block.values["rhy_vowel_balance"] = 0.0
    else:
        total = sum(final_counts.values())
        entropy = -sum(
            (c / total) * math.log(c / total) for c in final_counts.values()
        )
        block.values["rhy_vowel_balance"] = entropy / math.log(len(final_counts))

    block.values["rhy_tonal_alternation"] = tone_flips / tone_pairs if tone_pairs else 0.0
    return block


@dataclass(frozen=True)
class ScriptSpan:
    kind: str  # CJK | LATIN | OTHER
    char_count: int  # letters only for LATIN (internal spaces excluded)
    word_count: int = 0  # LATIN only: whitespace-delimited words
    text: str = ""


def segment_scripts(text: str) -> list[ScriptSpan]:
    """Split text into CJK, LATIN, and OTHER spans.

    A LATIN span may absorb single-space word separators; whitespace
    outside Latin runs is dropped rather than reported.
    """
    spans: list[ScriptSpan] = []
    pos = 0

    def push_other(chunk: str) -> None:
        chunk = "".join(ch for ch in chunk if not ch.isspace())
        if chunk:
            spans.append(ScriptSpan(kind="OTHER", char_count=len(chunk), text=chunk))

    for match in _SPAN_RE.finditer(text):
        if match.start() > pos:
            push_other(text[pos : match.start()])
        if match.lastgroup == "latin":
            words = match.group().split()
            spans.append(
                ScriptSpan(
                    kind="LATIN",
                    char_count=sum(len(w) for w in words),
                    word_count=len(words),
                    text=match.group(),
                )
            )
        else:
            spans.append(
                ScriptSpan(kind="CJK", char_count=len(match.group()), text=match.group())
            )
        pos = match.end()
    push_other(text[pos:])
    return spans


def translatability_features(
    sample: Sample,
    untranslatable: WordList | None = None,
    completeness_min_words: int = 3,
) -> FeatureBlock:
    """Source-language residue measures.

    Foreignness is bounded as latin / (latin + cjk) so Latin-only samples
    stay finite; a code-switch is any CJK<->LATIN transition in the
    sentence's span sequence (other spans in between are transparent).
    """
    n_tokens = sum(1 for _ in iter_tokens(sample))
    latin_chars = 0
    cjk_chars = 0
    completeness = 0
    switches = 0
    abbreviations = 0
    for sent in sample.sentences:
        spans = segment_scripts(sentence_text(sent))
        scripted = [s for s in spans if s.kind in ("CJK", "LATIN")]
        for left, right in zip(scripted, scripted[1:]):
            if left.kind != right.kind:
                switches += 1
        for span in spans:
            if span.kind == "LATIN":
                latin_chars += span.char_count
                if span.word_count >= completeness_min_words:
                    completeness += 1
                for word in span.text.split():
                    if _ABBREV_RE.match(word):
                        abbreviations += 1
            elif span.kind == "CJK":
                cjk_chars += span.char_count

    residue = 0
    if untranslatable is not None:
        residue = sum(1 for tok in iter_tokens(sample) if tok.surface in untranslatable)

    block = FeatureBlock()
    block.values["trans_completeness"] = _per_mille(completeness, n_tokens)
    total_script = latin_chars + cjk_chars
    block.values["trans_foreignness"] = latin_chars / total_script if total_script else 0.0
    block.values["trans_code_switching"] = _per_mille(switches, n_tokens)
    block.values["trans_abbreviation"] = _per_mille(abbreviations, n_tokens)
    block.values["trans_untranslatable"] = _per_mille(residue, n_tokens)
    return block


def misc_features(
    sample: Sample,
    onomatopoeia: WordList,
    strong_modifiers: WordList,
    particles: WordList,
    er_stoplist: WordList | None = None,
) -> FeatureBlock:
    """Onomatopoeia, er-suffixation, final particles, intensifiers, quotes.

    The quote ratio counts opening directional quotes plus every
    occurrence of the neutral marks (which have no direction, so both
    sides count), divided by the sentence count.
    """
    tokens = list(iter_tokens(sample))
    n_tokens = len(tokens)
    n_sents = len(sample.sentences)
    if n_sents == 0:
        raise ValueError("sample has no sentences")

    onom = sum(1 for tok in tokens if tok.surface in onomatopoeia)
    strong = sum(1 for tok in tokens if tok.surface in strong_modifiers)
    er = 0
    for tok in tokens:
        surf = tok.surface
        if len(surf) >= 2 and surf.endswith("儿"):  # 儿
            if er_stoplist is None or surf not in er_stoplist:
                er += 1

    final_particle_sents = 0
    quote_hits = 0
    for sent in sample.sentences:
        text = sentence_text(sent)
        for char in text:
            if char in OPENING_QUOTES or char in NEUTRAL_QUOTES:
                quote_hits += 1
        last_cjk = next((c for c in reversed(text) if is_cjk(c)), None)
        if last_cjk is not None and last_cjk in particles:
            final_particle_sents += 1

    block = FeatureBlock()
    block.values["misc_ratio_onomatopoeia"] = _per_mille(onom, n_tokens)
    block.values["misc_ratio_er_suffix"] = _per_mille(er, n_tokens)
    block.values["misc_ratio_SentFinalParticle"] = final_particle_sents / n_sents
    block.values["misc_ratio_StrSentMdfyr"] = _per_mille(strong, n_tokens)
    block.values["misc_ratio_quote"] = quote_hits / n_sents
    return block
