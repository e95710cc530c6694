"""Corpus ingestion: normalization, tokenization and token frequencies."""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator


@dataclass(frozen=True)
class TokenizerConfig:
    """Settings for the whitespace tokenizer."""

    lowercase: bool = True
    strip_punctuation: bool = True


DEFAULT_TOKENIZER = TokenizerConfig()


@dataclass
class TokenizedSentence:
    """A sentence together with its normalized token sequence.

    `token_set` is derived from `tokens` and is what overlap-based scoring
    operates on; duplicates within a sentence collapse there.
    """

    raw: str
    tokens: list[str]
    token_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if any(not token for token in self.tokens):
            raise ValueError("tokens must not contain empty strings")
        self.token_set = frozenset(self.tokens)

    def __len__(self):
        return len(self.tokens)


def _strip_edge_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(raw: str | bytes, config: TokenizerConfig = DEFAULT_TOKENIZER) -> TokenizedSentence:
    """Normalize and tokenize one sentence.

    Applies Unicode NFC normalization, optional lowercasing, splits on
    Unicode whitespace and strips leading/trailing punctuation from each
    token; empty tokens are dropped. The result is deterministic in the
    input and config. Bytes input is decoded as UTF-8 first; a decode
    failure raises UnicodeDecodeError carrying the offending byte offset.
    """
    if isinstance(raw, (bytes, bytearray)):
        raw = bytes(raw).decode("utf-8")
    text = unicodedata.normalize("NFC", raw)
    if config.lowercase:
        text = text.lower()
    tokens = []
    for piece in text.split():
        if config.strip_punctuation:
            piece = _strip_edge_punct(piece)
        if piece:
            tokens.append(piece)
    return TokenizedSentence(raw=raw, tokens=tokens)


class FrequencyTable:
    """Exact token occurrence counts with deterministic top-k selection."""

    def __init__(self, counts: dict[str, int] | None = None):
        self.counts: Counter = Counter()
        if counts:
            for token, count in counts.items():
                if count < 1:
                    raise ValueError(f"count for {token!r} must be >= 1, got {count}")
                self.counts[token] = count

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def add_sentence(self, sentence: TokenizedSentence) -> None:
        self.counts.update(sentence.tokens)

    def merge(self, other: "FrequencyTable") -> "FrequencyTable":
        """Associative combination of two tables (for sharded counting)."""
        merged = FrequencyTable()
        merged.counts = self.counts + other.counts
        return merged

    def top_k(self, n: int) -> list[str]:
        """The n most frequent tokens; ties broken lexicographically."""
        ranked = sorted(self.counts.items(), key=lambda item: (-item[1], item[0]))
        return [token for token, _ in ranked[:n]]

    def __getitem__(self, token: str) -> int:
        return self.counts[token]

    def __contains__(self, token) -> bool:
        return token in self.counts

    def __len__(self) -> int:
        return len(self.counts)


def count_frequencies(corpus: Iterable[TokenizedSentence]) -> FrequencyTable:
    """Count token multiplicities across a sentence stream."""
    table = FrequencyTable()
    for sentence in corpus:
        table.add_sentence(sentence)
    return table


def read_corpus(path, config: TokenizerConfig = DEFAULT_TOKENIZER) -> Iterator[TokenizedSentence]:
    """Tokenized sentences from a UTF-8 text file, one sentence per line.

    Empty lines yield empty sentences so line indices stay meaningful for
    seeded per-line processing.
    """
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            yield tokenize(line.rstrip("\n"), config)


def write_corpus(sentences: Iterable[TokenizedSentence], path) -> None:
    """Write sentences one per line, tokens joined by single spaces."""
    with open(path, "w", encoding="utf-8") as handle:
        for sentence in sentences:
            handle.write(" ".join(sentence.tokens) + "\n")
