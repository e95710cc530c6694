"""Language-pair similarity metrics and online codelength evaluation."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .bpe import learn_bpe
from .corpus import TokenizedSentence, tokenize
from .mining import jaccard


@dataclass
class FeatureVector:
    """Continuous linguistic feature values; NaN marks missing entries."""

    language: str
    features: np.ndarray

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)

    @classmethod
    def from_json(cls, path) -> "FeatureVector":
        """JSON {"language": ..., "features": [numbers or null]}."""
        with open(path, "r", encoding="utf-8") as handle:
            record = json.load(handle)
        missing = {"language", "features"} - set(record)
        if missing:
            raise ValueError(f"{path}: missing keys {sorted(missing)}")
        values = [np.nan if value is None else float(value) for value in record["features"]]
        return cls(language=str(record["language"]), features=np.array(values))


def syntactic_distance(a: FeatureVector, b: FeatureVector) -> float:
    """Cosine distance over the jointly non-missing feature coordinates."""
    fa, fb = a.features, b.features
    if fa.shape != fb.shape:
        raise ValueError(f"feature vectors differ in length: {fa.shape} vs {fb.shape}")
    mask = ~(np.isnan(fa) | np.isnan(fb))
    if not mask.any():
        raise ValueError(f"no jointly non-missing coordinates for {a.language}/{b.language}")
    va, vb = fa[mask], fb[mask]
    norm_a, norm_b = np.linalg.norm(va), np.linalg.norm(vb)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("masked feature subvector is zero; cosine undefined")
    distance = 1.0 - float(np.dot(va, vb)) / (norm_a * norm_b)
    return min(max(distance, 0.0), 2.0)


def _char_set(corpus) -> tuple[set, int]:
    chars: set = set()
    n_texts = 0
    for text in corpus:
        if isinstance(text, TokenizedSentence):
            text = text.raw
        n_texts += 1
        chars.update(c for c in text if not c.isspace())
    return chars, n_texts


def char_overlap(corpus_a, corpus_b) -> float:
    """Jaccard of the two corpora's distinct character sets (whitespace excluded)."""
    set_a, count_a = _char_set(corpus_a)
    set_b, count_b = _char_set(corpus_b)
    if count_a == 0 or count_b == 0:
        raise ValueError("char_overlap requires non-empty corpora")
    return jaccard(set_a, set_b)


def _as_tokenized(corpus) -> list[TokenizedSentence]:
    return [text if isinstance(text, TokenizedSentence) else tokenize(text) for text in corpus]


def token_overlap(corpus_a, corpus_b, num_merges: int = 8000) -> float:
    """Jaccard of per-corpus BPE symbol sets learned with equal merge counts."""
    vocab_a = learn_bpe(_as_tokenized(corpus_a), num_merges).vocab
    vocab_b = learn_bpe(_as_tokenized(corpus_b), num_merges).vocab
    return jaccard(vocab_a, vocab_b)


@dataclass
class TypologyTable:
    """Categorical typological feature values for one language."""

    language: str
    wals: dict[str, str]


def shared_wals(a: TypologyTable, b: TypologyTable) -> int:
    """Count of feature ids present in both tables with equal values."""
    return sum(1 for feature_id, value in a.wals.items() if b.wals.get(feature_id) == value)


def load_wals(path) -> dict[str, TypologyTable]:
    """Parse a 'language,feature_id,value' CSV into per-language tables."""
    features: dict[str, dict[str, str]] = {}
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        for lineno, row in enumerate(reader, start=1):
            if not row:
                continue
            if lineno == 1 and [cell.strip().lower() for cell in row] == ["language", "feature_id", "value"]:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            language, feature_id, value = (cell.strip() for cell in row)
            features.setdefault(language, {})[feature_id] = value
    return {language: TypologyTable(language, table) for language, table in features.items()}


@dataclass
class LossLog:
    """Per-subset summed log-losses (bits) from an incremental training run.

    `subsets` lists (subset_size, loss_bits) for strictly growing training
    subsets; each loss is the summed log-loss of the model trained on the
    previous subset, evaluated on the increment. `first_subset_tokens` is
    the number of prediction targets in the first subset (subset sizes may
    count examples while losses sum over tokens).
    """

    num_classes: int
    first_subset_tokens: int
    subsets: list[tuple[int, float]]

    def __post_init__(self):
        if self.num_classes < 2:
            raise ValueError(f"num_classes must be >= 2, got {self.num_classes}")
        if self.first_subset_tokens < 0:
            raise ValueError("first_subset_tokens must be >= 0")
        if not self.subsets:
            raise ValueError("at least one subset is required")
        sizes = [size for size, _ in self.subsets]
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError(f"subset sizes must be strictly increasing, got {sizes}")
        if any(loss < 0 for _, loss in self.subsets):
            raise ValueError("losses must be non-negative")

    @classmethod
    def load(cls, path) -> "LossLog":
        """JSON {"num_classes", "first_subset_tokens", "subsets": [{"size", "loss_bits"}]}."""
        with open(path, "r", encoding="utf-8") as handle:
            record = json.load(handle)
        missing = {"num_classes", "first_subset_tokens", "subsets"} - set(record)
        if missing:
            raise ValueError(f"{path}: missing keys {sorted(missing)}")
        subsets = [(int(entry["size"]), float(entry["loss_bits"])) for entry in record["subsets"]]
        return cls(
            num_classes=int(record["num_classes"]),
            first_subset_tokens=int(record["first_subset_tokens"]),
            subsets=subsets,
        )


def online_codelength(log: LossLog) -> float:
    """Uniform-coding cost of the first subset plus later subsets' log-losses.

    The first subset is charged log2(num_classes) bits per prediction target
    (a uniform guess before any training); every later subset contributes
    its supplied summed log-loss under the model trained on the preceding
    subsets. The first subset's own loss entry is not part of the total. A
    model that learns quickly earns a short codelength.
    """
    initial = log.first_subset_tokens * math.log2(log.num_classes)
    return initial + sum(loss for _, loss in log.subsets[1:])
