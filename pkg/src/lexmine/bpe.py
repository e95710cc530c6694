"""Byte-pair encoding: learn merge operations and segment words."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .corpus import TokenizedSentence

END_OF_WORD = "</w>"

_NO_RANK = float("inf")


@dataclass
class BpeVocabulary:
    """Ordered merge operations plus the symbol set they produce.

    Treat instances as immutable once built: `merge_ranks` is cached on
    first use.
    """

    merges: list[tuple[str, str]]
    vocab: set[str]

    @property
    def num_merges(self) -> int:
        return len(self.merges)

    @cached_property
    def merge_ranks(self) -> dict[tuple[str, str], int]:
        return {pair: rank for rank, pair in enumerate(self.merges)}

    def save(self, path) -> None:
        """One merge per line, 'first second', in learned order."""
        with open(path, "w", encoding="utf-8") as handle:
            for first, second in self.merges:
                handle.write(f"{first} {second}\n")

    @classmethod
    def load(cls, path) -> "BpeVocabulary":
        """Read a merge file.

        The interchange format stores merges only, so the reconstructed
        vocab covers merge operands and products; the training corpus's
        character inventory is not recoverable.
        """
        merges = []
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split(" ")
                if len(parts) != 2:
                    raise ValueError(f"{path}:{lineno}: expected 'first second', got {line!r}")
                merges.append((parts[0], parts[1]))
        vocab = set()
        for first, second in merges:
            vocab.update((first, second, first + second))
        return cls(merges=merges, vocab=vocab)


def _word_symbols(word: str) -> list[str]:
    # final character carries the end-of-word suffix marker
    return list(word[:-1]) + [word[-1] + END_OF_WORD]


def _merge_symbols(symbols: Sequence[str], pair: tuple[str, str]) -> list[str]:
    first, second = pair
    joined = first + second
    out = []
    i = 0
    while i < len(symbols):
        if i + 1 < len(symbols) and symbols[i] == first and symbols[i + 1] == second:
            out.append(joined)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def learn_bpe(corpus: Iterable[TokenizedSentence], num_merges: int) -> BpeVocabulary:
    """Learn byte-pair merges from a tokenized corpus.

    Words start as character sequences whose final character carries the
    end-of-word marker. Each step merges the globally most frequent adjacent
    symbol pair, breaking ties by lexicographic pair order; learning stops
    early once no pair occurs at least twice. The resulting vocab is the
    initial symbol inventory plus one product symbol per merge.

    Pair counts are maintained incrementally (only words containing the
    merged pair are rewritten), which keeps large merge budgets tractable.
    """
    if num_merges < 0:
        raise ValueError(f"num_merges must be >= 0, got {num_merges}")
    word_freq: Counter = Counter()
    for sentence in corpus:
        word_freq.update(sentence.tokens)
    if not word_freq:
        raise ValueError("cannot learn BPE from an empty corpus")

    words = []
    freqs = []
    for word, freq in sorted(word_freq.items()):
        words.append(_word_symbols(word))
        freqs.append(freq)

    vocab = {symbol for symbols in words for symbol in symbols}
    stats: Counter = Counter()
    index = defaultdict(set)
    for wid, symbols in enumerate(words):
        for pair in zip(symbols, symbols[1:]):
            stats[pair] += freqs[wid]
            index[pair].add(wid)

    merges: list[tuple[str, str]] = []
    for _ in range(num_merges):
        best_pair = None
        best_count = 1  # pairs must occur at least twice to merge
        for pair, count in stats.items():
            if count < 2 or count < best_count:
                continue
            if count > best_count or pair < best_pair:
                best_pair, best_count = pair, count
        if best_pair is None:
            break
        merges.append(best_pair)
        vocab.add(best_pair[0] + best_pair[1])
        for wid in sorted(index[best_pair]):
            symbols = words[wid]
            freq = freqs[wid]
            for pair in zip(symbols, symbols[1:]):
                stats[pair] -= freq
                if stats[pair] <= 0:
                    del stats[pair]
                index[pair].discard(wid)
            rewritten = _merge_symbols(symbols, best_pair)
            words[wid] = rewritten
            for pair in zip(rewritten, rewritten[1:]):
                stats[pair] += freq
                index[pair].add(wid)
    return BpeVocabulary(merges=merges, vocab=vocab)


def apply_bpe(word: str, vocabulary: BpeVocabulary) -> list[str]:
    """Segment a word by replaying learned merges in order.

    Characters never seen in training pass through as singleton symbols, so
    desegmenting the output always reproduces the input word.
    """
    if not word:
        return []
    symbols = _word_symbols(word)
    ranks = vocabulary.merge_ranks
    while len(symbols) > 1:
        best = min(zip(symbols, symbols[1:]), key=lambda pair: ranks.get(pair, _NO_RANK))
        if best not in ranks:
            break
        symbols = _merge_symbols(symbols, best)
    return symbols


def desegment(symbols: Sequence[str]) -> str:
    """Invert apply_bpe: concatenate symbols and drop the end-of-word marker."""
    joined = "".join(symbols)
    return joined.removesuffix(END_OF_WORD)


class BpeEncoder(BaseEstimator):
    """Subword segmenter following the scikit-learn estimator protocol."""

    def __init__(self, num_merges: int = 8000):
        self.num_merges = num_merges

    def fit(self, corpus: Iterable[TokenizedSentence], y=None):
        self.vocabulary_ = learn_bpe(corpus, self.num_merges)
        return self

    def segment(self, word: str) -> list[str]:
        self._check_fitted()
        return apply_bpe(word, self.vocabulary_)

    def transform(self, sentences: Iterable[TokenizedSentence]) -> list[list[str]]:
        """Per sentence, the concatenation of its tokens' segmentations."""
        self._check_fitted()
        return [
            [symbol for token in sentence.tokens for symbol in apply_bpe(token, self.vocabulary_)]
            for sentence in sentences
        ]

    def _check_fitted(self):
        if not hasattr(self, "vocabulary_"):
            raise NotFittedError("BpeEncoder must be fitted before use")
