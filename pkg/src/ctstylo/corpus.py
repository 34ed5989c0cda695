"""Annotated-corpus model: tokens, sentences, documents, chunk sampling.

Input files are UTF-8 text. Lines starting with ``#`` are comments;
``# id = HTL``, ``# group = HT`` and ``# engine = Liang`` are metadata for
the document that follows. A token line is TAB-separated::

    index<TAB>surface<TAB>pos<TAB>head<TAB>deprel

A blank line ends a sentence; two consecutive blank lines (or EOF) end a
document. One file may hold any number of documents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

GROUPS = ("HT", "NMT", "LLM", "UNLABELED")

_META_RE = re.compile(r"^#\s*(id|group|engine)\s*=\s*(.*?)\s*$")


class ParseError(ValueError):
    """Malformed corpus input; carries the 1-based source line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class Token:
    index: int  # 1-based position within the sentence
    surface: str
    pos: str
    head: int  # 0 = sentence root, else 1-based governor index
    deprel: str


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def root(self) -> Token:
        for tok in self.tokens:
            if tok.head == 0:
                return tok
        raise ValueError("sentence has no root")


@dataclass(frozen=True)
class Document:
    id: str
    group: str
    engine: str
    sentences: tuple[Sentence, ...]

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def tokens(self) -> Iterator[Token]:
        for sent in self.sentences:
            yield from sent.tokens


@dataclass(frozen=True)
class Chunk:
    """Contiguous slice of a document used as one learning sample."""

    parent_doc: str
    ordinal: int  # 0-based within the document
    sentences: tuple[Sentence, ...]
    token_count: int
    group: str
    engine: str
    undersized: bool = False

    @property
    def sample_id(self) -> str:
        return f"{self.parent_doc}:{self.ordinal}"

    def tokens(self) -> Iterator[Token]:
        for sent in self.sentences:
            yield from sent.tokens


def iter_tokens(sample: Document | Chunk) -> Iterator[Token]:
    """Tokens of a document or chunk in reading order."""
    for sent in sample.sentences:
        yield from sent.tokens


def surfaces(sample: Document | Chunk) -> list[str]:
    return [tok.surface for tok in iter_tokens(sample)]


def _sentence_violations(sentence: Sentence) -> list[str]:
    """Rule names broken by one sentence (empty list = well formed)."""
    violations = []
    n = len(sentence.tokens)
    if n == 0:
        return ["empty sentence"]
    seen = set()
    for pos, tok in enumerate(sentence.tokens, start=1):
        if tok.index != pos:
            violations.append(f"token index out of sequence at position {pos}")
        if tok.index < 1:
            violations.append(f"token index < 1 at position {pos}")
        if tok.index in seen:
            violations.append(f"duplicate token index {tok.index}")
        seen.add(tok.index)
        if tok.head < 0:
            violations.append(f"negative head at index {tok.index}")
        elif tok.head == tok.index:
            violations.append(f"self-headed token at index {tok.index}")
        elif tok.head > n:
            violations.append(f"head out of range at index {tok.index}")
    roots = [tok.index for tok in sentence.tokens if tok.head == 0]
    if len(roots) == 0:
        violations.append("no root")
    elif len(roots) > 1:
        violations.append("multiple roots")
    if violations:
        return violations
    # Single valid root and in-range heads: tree iff every node reaches it.
    children: dict[int, list[int]] = {i: [] for i in range(0, n + 1)}
    for tok in sentence.tokens:
        children[tok.head].append(tok.index)
    reached = set()
    stack = [0]
    while stack:
        node = stack.pop()
        for child in children[node]:
            if child not in reached:
                reached.add(child)
                stack.append(child)
    if len(reached) != n:
        violations.append("cyclic heads")
    return violations


def validate_document(doc: Document) -> list[str]:
    """Diagnostic check of all model invariants; empty list iff valid."""
    violations = []
    if doc.group not in GROUPS:
        violations.append(f"unknown group {doc.group!r}")
    if not doc.sentences:
        violations.append("zero sentences")
    for idx, sent in enumerate(doc.sentences, start=1):
        for rule in _sentence_violations(sent):
            violations.append(f"sentence {idx}: {rule}")
    return violations


def _parse_token_line(line: str, line_no: int) -> Token:
    cols = line.split("\t")
    if len(cols) != 5:
        raise ParseError(
            f"malformed line: expected 5 TAB-separated columns, got {len(cols)}",
            line_no,
        )
    idx_s, surface, pos, head_s, deprel = cols
    try:
        index = int(idx_s)
        head = int(head_s)
    except ValueError:
        raise ParseError("malformed line: index and head must be integers", line_no)
    if not surface:
        raise ParseError("malformed line: empty surface", line_no)
    return Token(index=index, surface=surface, pos=pos, head=head, deprel=deprel)


def _build_sentence(rows: list[tuple[int, Token]]) -> Sentence:
    """Assemble one sentence, raising ParseError at the offending line."""
    sentence = Sentence(tokens=tuple(tok for _, tok in rows))
    broken = _sentence_violations(sentence)
    if not broken:
        return sentence
    first = broken[0]
    # Point at the token whose index the rule names, else the sentence start.
    line_no = rows[0][0]
    match = re.search(r"(?:index|position) (\d+)", first)
    if match:
        pos = int(match.group(1))
        if 1 <= pos <= len(rows):
            line_no = rows[pos - 1][0]
    raise ParseError(first, line_no)


def parse_annotated_text(
    raw: str | Iterable[str],
    doc_id: str,
    group: str = "UNLABELED",
    engine: str = "",
) -> Document:
    """Parse one document from the token-line format.

    Comment lines are skipped; any blank line is a sentence boundary.
    Metadata comes from the arguments, not the stream.
    """
    if group not in GROUPS:
        raise ParseError(f"unknown group {group!r}")
    lines = raw.splitlines() if isinstance(raw, str) else raw
    sentences: list[Sentence] = []
    rows: list[tuple[int, Token]] = []
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if line.startswith("#"):
            continue
        if not line.strip():
            if rows:
                sentences.append(_build_sentence(rows))
                rows = []
            continue
        rows.append((line_no, _parse_token_line(line, line_no)))
    if rows:
        sentences.append(_build_sentence(rows))
    if not sentences:
        raise ParseError("zero sentences")
    return Document(id=doc_id, group=group, engine=engine, sentences=tuple(sentences))


def read_corpus_file(path: str | Path) -> list[Document]:
    """Read every document in a corpus file.

    Documents are separated by two consecutive blank lines; metadata
    comments apply to the document being accumulated. Missing ids are
    generated from the file name; a missing group defaults to UNLABELED.
    """
    path = Path(path)
    docs: list[Document] = []
    meta: dict[str, str] = {}
    sentences: list[Sentence] = []
    rows: list[tuple[int, Token]] = []
    blank_run = 0
    doc_start_line = 1

    def finalize(line_no: int) -> None:
        nonlocal meta, sentences, rows
        if rows:
            sentences.append(_build_sentence(rows))
            rows = []
        if not sentences and not meta:
            return
        if not sentences:
            raise ParseError("zero sentences", doc_start_line)
        group = meta.get("group", "UNLABELED")
        if group not in GROUPS:
            raise ParseError(f"unknown group {group!r}", doc_start_line)
        doc_id = meta.get("id", f"{path.stem}_{len(docs):03d}")
        docs.append(
            Document(
                id=doc_id,
                group=group,
                engine=meta.get("engine", ""),
                sentences=tuple(sentences),
            )
        )
        meta = {}
        sentences = []

    with open(path, encoding="utf-8") as handle:
        line_no = 0
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if line.startswith("#"):
                blank_run = 0
                m = _META_RE.match(line)
                if m:
                    if not meta and not sentences and not rows:
                        doc_start_line = line_no
                    meta[m.group(1)] = m.group(2)
                continue
            if not line.strip():
                if rows:
                    sentences.append(_build_sentence(rows))
                    rows = []
                blank_run += 1
                if blank_run >= 2:
                    finalize(line_no)
                    blank_run = 0
                continue
            if not meta and not sentences and not rows:
                doc_start_line = line_no
            blank_run = 0
            rows.append((line_no, _parse_token_line(line, line_no)))
        finalize(line_no)

    seen_ids = set()
    for doc in docs:
        if doc.id in seen_ids:
            raise ParseError(f"duplicate document id {doc.id!r} in {path.name}")
        seen_ids.add(doc.id)
    return docs


def serialize_document(doc: Document, include_meta: bool = True) -> str:
    """Write a document back to the input format (round-trip safe)."""
    out: list[str] = []
    if include_meta:
        out.append(f"# id = {doc.id}")
        out.append(f"# group = {doc.group}")
        out.append(f"# engine = {doc.engine}")
    for sent in doc.sentences:
        for tok in sent.tokens:
            out.append(f"{tok.index}\t{tok.surface}\t{tok.pos}\t{tok.head}\t{tok.deprel}")
        out.append("")
    return "\n".join(out) + "\n"


def chunk_document(
    doc: Document, target_tokens: int = 2000, min_tokens: int = 1000
) -> list[Chunk]:
    """Split a document into whole-sentence chunks of roughly target size.

    Sentences are accumulated until the running count reaches
    ``target_tokens``; a trailing remainder below ``min_tokens`` is merged
    into the previous chunk so no text is dropped. A document shorter than
    ``min_tokens`` becomes a single chunk flagged undersized.
    """
    if not (target_tokens >= min_tokens >= 1):
        raise ValueError("require target_tokens >= min_tokens >= 1")
    groups: list[list[Sentence]] = []
    current: list[Sentence] = []
    count = 0
    for sent in doc.sentences:
        current.append(sent)
        count += len(sent)
        if count >= target_tokens:
            groups.append(current)
            current = []
            count = 0
    if current:
        if count < min_tokens and groups:
            groups[-1].extend(current)
        else:
            groups.append(current)

    chunks = []
    for ordinal, sents in enumerate(groups):
        n = sum(len(s) for s in sents)
        chunks.append(
            Chunk(
                parent_doc=doc.id,
                ordinal=ordinal,
                sentences=tuple(sents),
                token_count=n,
                group=doc.group,
                engine=doc.engine,
                undersized=n < min_tokens,
            )
        )
    return chunks
