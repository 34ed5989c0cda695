"""Generic textual features: lexical, syntactic, readability proxies,
concreteness, and reference-keyed n-gram features.

All extractors are pure functions over a document or chunk and return a
FeatureBlock whose values are finite, non-negative ratios or scores.
Readability outputs are explicit proxies and carry the ``rdprx_`` prefix so
they are never mistaken for an external tool's metrics.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import Chunk, Document, iter_tokens
from .resources import GRAM_SEP, NGRAM_KINDS, NGRAM_NS, RefNgramTable, ScalarLexicon, WordList

Sample = Document | Chunk

# LTP 863 PoS tagset; config may override any of these groupings.
DEFAULT_POS_TAGSET = (
    "a", "b", "c", "d", "e", "g", "h", "i", "j", "k", "m", "n", "nd", "nh",
    "ni", "nl", "ns", "nt", "nz", "o", "p", "q", "r", "u", "v", "wp", "ws", "x", "z",
)
DEFAULT_CONTENT_TAGS = frozenset(
    {"a", "b", "d", "i", "j", "n", "nd", "nh", "ni", "nl", "ns", "nt", "nz", "v", "z"}
)
DEFAULT_DESCRIPTIVE_TAGS = frozenset({"a", "z"})
DEFAULT_FUNCTION_TAGS = frozenset({"c", "e", "o", "p", "u"})
ADVERB_TAG = "d"
CONJUNCTION_TAG = "c"
PREPOSITION_TAG = "p"

# LTP dependency relations (per-relation ratios are emitted for each).
DEFAULT_DEPRELS = (
    "SBV", "VOB", "IOB", "FOB", "DBL", "ATT", "ADV", "CMP", "COO", "POB",
    "LAD", "RAD", "IS", "HED", "WP",
)

QUESTION_MARKS = ("？", "?")


@dataclass
class FeatureBlock:
    """Ordered name -> value map produced by one extractor family."""

    values: dict[str, float] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    def merge(self, other: "FeatureBlock") -> "FeatureBlock":
        for name, value in other.values.items():
            if name in self.values:
                raise ValueError(f"duplicate feature name {name!r}")
            self.values[name] = value
        self.flags.extend(other.flags)
        return self


def compute_ttr(tokens: Sequence[str]) -> float:
    """Type-token ratio."""
    if not tokens:
        raise ValueError("empty token list")
    return len(set(tokens)) / len(tokens)


def compute_sttr(tokens: Sequence[str], window: int = 1000) -> float:
    """Standardized TTR: mean TTR over consecutive full windows.

    A trailing partial window is ignored; texts shorter than one window
    fall back to the plain TTR.
    """
    if not tokens:
        raise ValueError("empty token list")
    if window < 1:
        raise ValueError("window must be >= 1")
    if len(tokens) < window:
        return compute_ttr(tokens)
    ttrs = []
    for start in range(0, len(tokens) - window + 1, window):
        ttrs.append(compute_ttr(tokens[start : start + window]))
    return sum(ttrs) / len(ttrs)


def _mtld_pass(tokens: Sequence[str], threshold: float) -> float:
    factors = 0.0
    types: set[str] = set()
    seg_len = 0
    ttr = 1.0
    for token in tokens:
        types.add(token)
        seg_len += 1
        ttr = len(types) / seg_len
        if ttr <= threshold:
            factors += 1.0
            types.clear()
            seg_len = 0
            ttr = 1.0
    if seg_len > 0:
        factors += (1.0 - ttr) / (1.0 - threshold)
    if factors == 0.0:
        return float(len(tokens))
    return len(tokens) / factors


def compute_mtld(tokens: Sequence[str], threshold: float = 0.72) -> float:
    """Measure of textual lexical diversity, bidirectional mean."""
    if not tokens:
        raise ValueError("empty token list")
    forward = _mtld_pass(tokens, threshold)
    backward = _mtld_pass(list(reversed(tokens)), threshold)
    return (forward + backward) / 2.0


def lexical_diversity_features(
    sample: Sample, sttr_window: int = 1000, mtld_threshold: float = 0.72
) -> FeatureBlock:
    tokens = [tok.surface for tok in iter_tokens(sample)]
    block = FeatureBlock()
    block.values["ttr"] = compute_ttr(tokens)
    block.values["sttr"] = compute_sttr(tokens, window=sttr_window)
    block.values["mtld"] = compute_mtld(tokens, threshold=mtld_threshold)
    return block


def pos_ratio_features(
    sample: Sample,
    idioms: WordList | None = None,
    tagset: Sequence[str] = DEFAULT_POS_TAGSET,
    content_tags: frozenset[str] = DEFAULT_CONTENT_TAGS,
    descriptive_tags: frozenset[str] = DEFAULT_DESCRIPTIVE_TAGS,
) -> FeatureBlock:
    """Per-tag ratios plus grouped word-class ratios.

    Tags observed outside the configured tagset still count toward the
    denominator; unseen tags get ratio 0. The idiom ratio is a word-list
    lookup (no detection rule beyond membership).
    """
    tokens = list(iter_tokens(sample))
    n = len(tokens)
    if n == 0:
        raise ValueError("sample has no tokens")
    counts = Counter(tok.pos for tok in tokens)
    block = FeatureBlock()
    for tag in tagset:
        block.values[f"ratio_pos_{tag}"] = counts.get(tag, 0) / n
    block.values["ratio_ContentWords"] = (
        sum(c for tag, c in counts.items() if tag in content_tags) / n
    )
    block.values["ratio_adverb"] = counts.get(ADVERB_TAG, 0) / n
    block.values["ratio_conjunction"] = counts.get(CONJUNCTION_TAG, 0) / n
    block.values["ratio_dscrptW"] = (
        sum(c for tag, c in counts.items() if tag in descriptive_tags) / n
    )
    block.values["ratio_prep"] = counts.get(PREPOSITION_TAG, 0) / n
    idiom_hits = sum(1 for tok in tokens if idioms and tok.surface in idioms)
    block.values["ratio_idiom"] = idiom_hits / n
    return block


def syntactic_features(
    sample: Sample, deprels: Sequence[str] = DEFAULT_DEPRELS
) -> FeatureBlock:
    """Sentence-shape and dependency-tree features.

    MDD averages |dependent - governor| over non-root arcs. Children per
    node is the mean out-degree over nodes that have at least one child.
    Per-relation ratios are normalized by the token count (every token
    carries exactly one arc, the root arc included).
    """
    sentences = sample.sentences
    n_sents = len(sentences)
    tokens = list(iter_tokens(sample))
    n_tokens = len(tokens)
    if n_sents == 0 or n_tokens == 0:
        raise ValueError("sample has no sentences")

    block = FeatureBlock()
    block.values["words_per_sent"] = n_tokens / n_sents

    question = 0
    for sent in sentences:
        last = sent.tokens[-1].surface
        if last and last[-1] in QUESTION_MARKS:
            question += 1
    block.values["question_sent_ratio"] = question / n_sents

    distances = []
    internal_degrees: Counter = Counter()
    for sent in sentences:
        for tok in sent.tokens:
            if tok.head != 0:
                distances.append(abs(tok.index - tok.head))
    if distances:
        block.values["mdd"] = sum(distances) / len(distances)
    else:
        block.values["mdd"] = 0.0
        block.flags.append("no-deps")

    internal_total = 0
    child_total = 0
    node_total = 0
    for sent in sentences:
        degrees = Counter(tok.head for tok in sent.tokens if tok.head != 0)
        internal_total += len(degrees)
        child_total += sum(degrees.values())
        node_total += len(sent.tokens)
    block.values["avg_children_per_node"] = (
        child_total / internal_total if internal_total else 0.0
    )
    block.values["head_node_ratio"] = internal_total / node_total

    rel_counts = Counter(tok.deprel for tok in tokens)
    for rel in deprels:
        block.values[f"deprel_{rel}"] = rel_counts.get(rel, 0) / n_tokens
    return block


def readability_features(
    sample: Sample,
    ref: RefNgramTable,
    function_tags: frozenset[str] = DEFAULT_FUNCTION_TAGS,
    common_top_k: int = 3000,
) -> FeatureBlock:
    """Documented readability proxies (``rdprx_`` prefix).

    Mean token surprisal is the negated mean natural log of the add-1
    smoothed reference relative frequency, so higher = rarer vocabulary
    and the value stays non-negative.
    """
    tokens = list(iter_tokens(sample))
    sentences = sample.sentences
    if not tokens:
        raise ValueError("sample has no tokens")
    n = len(tokens)

    block = FeatureBlock()
    char_total = sum(len(tok.surface) for tok in tokens)
    block.values["rdprx_mean_word_len"] = char_total / n
    sent_chars = [sum(len(tok.surface) for tok in s.tokens) for s in sentences]
    block.values["rdprx_chars_per_sent"] = sum(sent_chars) / len(sent_chars)
    mean_chars = sum(sent_chars) / len(sent_chars)
    block.values["rdprx_sent_len_sd"] = math.sqrt(
        sum((c - mean_chars) ** 2 for c in sent_chars) / len(sent_chars)
    )

    common = ref.top_unigrams("word", common_top_k)
    types = {tok.surface for tok in tokens}
    block.values["rdprx_lexical_richness"] = (
        sum(1 for t in types if t not in common) / len(types)
    )

    block.values["rdprx_function_word_ratio"] = (
        sum(1 for tok in tokens if tok.pos in function_tags) / n
    )

    total = ref.total("word") + 1
    log_sum = 0.0
    for tok in tokens:
        count = ref.count("word", 1, (tok.surface,))
        log_sum += math.log((count + 1) / total)
    block.values["rdprx_token_surprisal"] = -log_sum / n
    return block


def concreteness_features(sample: Sample, lexicon: ScalarLexicon) -> FeatureBlock:
    """Mean/SD/coverage/above-midpoint of scalar scores over covered tokens."""
    tokens = list(iter_tokens(sample))
    if not tokens:
        raise ValueError("sample has no tokens")
    scores = [s for s in (lexicon.score(tok.surface) for tok in tokens) if s is not None]
    block = FeatureBlock()
    if not scores:
        block.values["conc_mean"] = 0.0
        block.values["conc_sd"] = 0.0
        block.values["conc_coverage"] = 0.0
        block.values["conc_above_midpoint"] = 0.0
        block.flags.append("no-coverage")
        return block
    mean = sum(scores) / len(scores)
    var = sum((s - mean) ** 2 for s in scores) / len(scores)
    block.values["conc_mean"] = mean
    block.values["conc_sd"] = math.sqrt(var)
    block.values["conc_coverage"] = len(scores) / len(tokens)
    block.values["conc_above_midpoint"] = (
        sum(1 for s in scores if s > lexicon.midpoint) / len(scores)
    )
    return block


@dataclass(frozen=True)
class NgramFeatureSpec:
    kind: str  # word | pos
    n: int
    gram: tuple[str, ...]
    keyness: float

    def __post_init__(self):
        if len(self.gram) != self.n:
            raise ValueError("gram length must equal n")

    @property
    def name(self) -> str:
        return f"{self.kind}_{self.n}gram_{GRAM_SEP.join(self.gram)}"


def sentence_units(sentence, kind: str) -> list[str]:
    if kind == "word":
        return [tok.surface for tok in sentence.tokens]
    if kind == "pos":
        return [tok.pos for tok in sentence.tokens]
    raise ValueError(f"unknown unit kind {kind!r}")


def iter_ngrams(sample: Sample, kind: str, n: int) -> Iterable[tuple[str, ...]]:
    """Within-sentence n-grams of the sample in reading order."""
    for sent in sample.sentences:
        units = sentence_units(sent, kind)
        for i in range(len(units) - n + 1):
            yield tuple(units[i : i + n])


def g2_keyness(a: float, b: float, c: float, d: float) -> float:
    """Log-likelihood G2 for a gram with study/reference counts a/b and
    study/reference totals c/d. Callers apply 0.5-smoothing to zero counts."""
    if a <= 0 or b <= 0 or c <= 0 or d <= 0:
        raise ValueError("counts and totals must be positive (smooth zeros first)")
    e1 = c * (a + b) / (c + d)
    e2 = d * (a + b) / (c + d)
    return 2.0 * (a * math.log(a / e1) + b * math.log(b / e2))


def ngram_keyness_select(
    samples: Sequence[Sample],
    ref: RefNgramTable,
    per_bucket: int = 52,
    min_count: int = 5,
) -> list[NgramFeatureSpec]:
    """Pick the most corpus-typical grams per (kind, n) bucket by G2.

    Candidates must occur at least ``min_count`` times in the study corpus;
    zero reference counts are smoothed to 0.5. Ties break by corpus
    frequency (desc) then gram order (asc).
    """
    if not samples:
        raise ValueError("empty corpus")
    specs: list[NgramFeatureSpec] = []
    for kind in NGRAM_KINDS:
        ref_total = ref.total(kind)
        if ref_total <= 0:
            raise ValueError(f"reference table has no {kind} unigrams")
        for n in NGRAM_NS:
            counts: Counter = Counter()
            for sample in samples:
                counts.update(iter_ngrams(sample, kind, n))
            corpus_total = sum(counts.values())
            if corpus_total == 0:
                continue
            scored = []
            for gram, a in counts.items():
                if a < min_count:
                    continue
                b = ref.count(kind, n, gram)
                score = g2_keyness(a, b if b > 0 else 0.5, corpus_total, ref_total)
                scored.append((score, a, gram))
            scored.sort(key=lambda t: (-t[0], -t[1], t[2]))
            for score, _, gram in scored[:per_bucket]:
                specs.append(NgramFeatureSpec(kind=kind, n=n, gram=gram, keyness=score))
    return specs


def ngram_feature_values(sample: Sample, specs: Sequence[NgramFeatureSpec]) -> FeatureBlock:
    """Relative frequency of each selected gram within its (kind, n) bucket."""
    needed = {(spec.kind, spec.n) for spec in specs}
    counts: dict[tuple[str, int], Counter] = {}
    totals: dict[tuple[str, int], int] = {}
    for kind, n in needed:
        counter = Counter(iter_ngrams(sample, kind, n))
        counts[(kind, n)] = counter
        totals[(kind, n)] = sum(counter.values())
    block = FeatureBlock()
    for spec in specs:
        total = totals[(spec.kind, spec.n)]
        hit = counts[(spec.kind, spec.n)].get(spec.gram, 0)
        block.values[spec.name] = hit / total if total else 0.0
    return block
