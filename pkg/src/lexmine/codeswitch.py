"""Synthetic code-switched corpora by seeded dictionary replacement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .corpus import TokenizedSentence
from .lexicon import Lexicon

SRC_TO_TGT = "src2tgt"
TGT_TO_SRC = "tgt2src"
_DIRECTIONS = (SRC_TO_TGT, TGT_TO_SRC)


@dataclass
class CodeSwitchConfig:
    """Replacement band, seed and direction for corpus code-switching."""

    min_ratio: float = 0.20
    max_ratio: float = 0.50
    rng_seed: int = 0
    direction: str = SRC_TO_TGT

    def __post_init__(self):
        if not 0.0 < self.min_ratio <= self.max_ratio <= 1.0:
            raise ValueError(
                f"need 0 < min_ratio <= max_ratio <= 1, got [{self.min_ratio}, {self.max_ratio}]"
            )
        if self.direction not in _DIRECTIONS:
            raise ValueError(f"direction must be one of {_DIRECTIONS}, got {self.direction!r}")
        if self.rng_seed < 0:
            raise ValueError(f"rng_seed must be >= 0, got {self.rng_seed}")


@dataclass
class CodeSwitchStats:
    emitted: int = 0
    skipped: int = 0
    mean_ratio: float = 0.0


def _count_bounds(length: int, config: CodeSwitchConfig) -> tuple[int, int]:
    # Smallest and largest replacement counts with count/length inside the
    # band; the +-1 adjustments undo float dust in ratio*length.
    low = math.ceil(config.min_ratio * length)
    if low >= 1 and (low - 1) / length >= config.min_ratio:
        low -= 1
    high = math.floor(config.max_ratio * length)
    if (high + 1) / length <= config.max_ratio:
        high += 1
    return low, high


def _switch(sentence: TokenizedSentence, entries: dict, config: CodeSwitchConfig, rng):
    length = len(sentence.tokens)
    if length == 0:
        return None
    covered = [i for i, token in enumerate(sentence.tokens) if token in entries]
    low, high = _count_bounds(length, config)
    high = min(high, len(covered))
    if high < low:
        return None
    ratio = rng.uniform(config.min_ratio, config.max_ratio)
    count = int(round(ratio * length))
    count = min(max(count, low), high)
    chosen = rng.choice(len(covered), size=count, replace=False)
    tokens = list(sentence.tokens)
    for pick in chosen:
        position = covered[int(pick)]
        tokens[position] = entries[tokens[position]]
    return TokenizedSentence(raw=" ".join(tokens), tokens=tokens), count


def codeswitch_sentence(sentence: TokenizedSentence, lexicon, config: CodeSwitchConfig, rng):
    """Replace a random in-band share of tokens with their translations.

    Draws a target ratio uniformly from [min_ratio, max_ratio], rounds it to
    a replacement count and samples that many lexicon-covered positions.
    Returns None when the sentence cannot reach the minimum ratio (too short
    or coverage too thin); emitted sentences keep their token count and
    their achieved ratio stays inside the band.
    """
    entries = lexicon.entries if isinstance(lexicon, Lexicon) else lexicon
    result = _switch(sentence, entries, config, rng)
    return None if result is None else result[0]


def codeswitch_corpus(
    corpus: Iterable[TokenizedSentence], lexicon, config: CodeSwitchConfig
) -> tuple[list[TokenizedSentence], CodeSwitchStats]:
    """Code-switch a corpus line by line with per-line derived RNGs.

    Each line's generator is seeded from (rng_seed, line index), so output
    is reproducible and independent of processing order or sharding.
    """
    entries = lexicon.entries if isinstance(lexicon, Lexicon) else lexicon
    emitted: list[TokenizedSentence] = []
    ratios: list[float] = []
    skipped = 0
    for line_index, sentence in enumerate(corpus):
        rng = np.random.default_rng([config.rng_seed, line_index])
        result = _switch(sentence, entries, config, rng)
        if result is None:
            skipped += 1
            continue
        switched, count = result
        emitted.append(switched)
        ratios.append(count / len(sentence.tokens))
    mean_ratio = float(np.mean(ratios)) if ratios else 0.0
    return emitted, CodeSwitchStats(emitted=len(emitted), skipped=skipped, mean_ratio=mean_ratio)


class CodeSwitcher(BaseEstimator, TransformerMixin):
    """Corpus transformer wrapping codeswitch_corpus.

    Stateless apart from `stats_`, which records the last transform's
    emitted/skipped counts and mean achieved ratio.
    """

    def __init__(
        self,
        lexicon=None,
        min_ratio: float = 0.20,
        max_ratio: float = 0.50,
        rng_seed: int = 0,
        direction: str = SRC_TO_TGT,
    ):
        self.lexicon = lexicon
        self.min_ratio = min_ratio
        self.max_ratio = max_ratio
        self.rng_seed = rng_seed
        self.direction = direction

    def fit(self, X=None, y=None):
        return self

    def transform(self, sentences: Iterable[TokenizedSentence]) -> list[TokenizedSentence]:
        if self.lexicon is None:
            raise ValueError("CodeSwitcher requires a lexicon")
        config = CodeSwitchConfig(
            min_ratio=self.min_ratio,
            max_ratio=self.max_ratio,
            rng_seed=self.rng_seed,
            direction=self.direction,
        )
        emitted, self.stats_ = codeswitch_corpus(sentences, self.lexicon, config)
        return emitted
