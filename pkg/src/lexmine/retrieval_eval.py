"""Margin-based retrieval scoring and precision/recall evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import TokenizedSentence
from .embeddings import _read_text_vectors, _topk_mean, normalize_rows
from .mining import jaccard, translate_tokens

DEFAULT_RMSS_K = 4

SOURCE_SIDE = "source"
TARGET_SIDE = "target"


class SentenceEmbeddingSet:
    """Sentence identifiers with their embedding matrix.

    Vectors are kept as given; scoring normalizes internally, so any
    positive per-vector rescaling leaves scores unchanged. Zero vectors are
    rejected up front.
    """

    def __init__(self, ids: Sequence[str], vectors, side: str = SOURCE_SIDE):
        ids = list(ids)
        if len(set(ids)) != len(ids):
            raise ValueError("sentence ids must be unique")
        if side not in (SOURCE_SIDE, TARGET_SIDE):
            raise ValueError(f"side must be source or target, got {side!r}")
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(ids):
            raise ValueError(f"vectors must be a ({len(ids)}, d) matrix, got shape {vectors.shape}")
        if np.any(np.linalg.norm(vectors, axis=1) == 0.0):
            raise ValueError("zero vector in sentence embedding set")
        self.ids = ids
        self.vectors = vectors
        self.side = side

    def __len__(self) -> int:
        return len(self.ids)


def load_sentence_embeddings(path, side: str = SOURCE_SIDE, limit=None) -> SentenceEmbeddingSet:
    """Load sentence embeddings from the text vector format (ids as words)."""
    ids, vectors, _ = _read_text_vectors(path, limit)
    return SentenceEmbeddingSet(ids, vectors, side)


def rmss(src: SentenceEmbeddingSet, tgt: SentenceEmbeddingSet, k: int = DEFAULT_RMSS_K) -> np.ndarray:
    """Ratio margin-based similarity: cosine over mean neighborhood cosines.

    score(x, y) = cos(x, y) / ((m_t(x) + m_s(y)) / 2), where m_t(x) is the
    mean cosine of source x to its k nearest targets and m_s(y) the mean
    cosine of target y to its k nearest sources. Neighbor sets are not
    self-excluded. Scores are high when a pair stands out from both of its
    neighborhoods; the per-source argmax is the retrieval.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > len(src) or k > len(tgt):
        raise ValueError(f"k={k} exceeds a side's population ({len(src)} sources, {len(tgt)} targets)")
    src_unit = normalize_rows(src.vectors)
    tgt_unit = normalize_rows(tgt.vectors)
    if src_unit.shape[1] != tgt_unit.shape[1]:
        raise ValueError(
            f"dimension mismatch: sources {src_unit.shape[1]} vs targets {tgt_unit.shape[1]}"
        )
    cos = src_unit @ tgt_unit.T
    mean_to_targets = _topk_mean(cos, k, axis=1)
    mean_to_sources = _topk_mean(cos, k, axis=0)
    denom = (mean_to_targets[:, None] + mean_to_sources[None, :]) / 2.0
    return cos / denom


def rmss_top1(src, tgt, k: int = DEFAULT_RMSS_K) -> list[tuple[int, float]]:
    """Best target per source under RMSS, ties to the lowest index."""
    scores = rmss(src, tgt, k)
    best = np.argmax(scores, axis=1)
    return [(int(j), float(scores[i, j])) for i, j in enumerate(best)]


def jaccard_retrieve(
    src_sentences: Sequence[TokenizedSentence],
    tgt_sentences: Sequence[TokenizedSentence],
    lexicon,
) -> list[tuple[int, float]]:
    """Best target per source by Jaccard over word-translated token sets.

    Ties go to the lowest target index; returns (target index, score) per
    source sentence.
    """
    if not tgt_sentences:
        raise ValueError("no target sentences to retrieve from")
    tgt_sets = [sentence.token_set for sentence in tgt_sentences]
    results = []
    for src in src_sentences:
        translated = translate_tokens(src, lexicon)
        best_index = 0
        best_score = -1.0
        for j, tgt_set in enumerate(tgt_sets):
            score = jaccard(translated, tgt_set)
            if score > best_score:
                best_score, best_index = score, j
        results.append((best_index, best_score))
    return results


class GoldBitext:
    """Gold source-id to target-id bijection for retrieval benchmarks."""

    def __init__(self, gold: dict[str, str]):
        if len(set(gold.values())) != len(gold):
            raise ValueError("gold bitext must map distinct sources to distinct targets")
        self.gold = dict(gold)

    def __len__(self) -> int:
        return len(self.gold)

    def __contains__(self, source_id) -> bool:
        return source_id in self.gold

    @classmethod
    def load(cls, path) -> "GoldBitext":
        """TSV 'source-id<TAB>target-id', one pair per line."""
        gold = {}
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                fields = line.split("\t")
                if len(fields) != 2:
                    raise ValueError(f"{path}:{lineno}: expected 'source<TAB>target', got {line!r}")
                gold[fields[0]] = fields[1]
        return cls(gold)


@dataclass
class RetrievalReport:
    precision: float
    recall: float
    f1: float
    predicted_count: int
    correct_count: int
    gold_count: int
    threshold: float

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "predicted": self.predicted_count,
            "correct": self.correct_count,
            "gold": self.gold_count,
            "threshold": self.threshold,
        }


def evaluate_prf(
    predictions: dict[str, tuple[str, float]], gold: GoldBitext, threshold: float
) -> RetrievalReport:
    """Score thresholded best-match predictions against a gold bijection.

    A pair is asserted when its score >= threshold. Precision is correct
    asserted over asserted (0 when nothing is asserted); recall is correct
    asserted over the gold size.
    """
    unknown = [source for source in predictions if source not in gold.gold]
    if unknown:
        raise ValueError(f"predictions for ids outside the gold domain: {unknown[:5]}")
    asserted = 0
    correct = 0
    for source, (target, score) in predictions.items():
        if score >= threshold:
            asserted += 1
            if gold.gold[source] == target:
                correct += 1
    precision = correct / asserted if asserted else 0.0
    recall = correct / len(gold.gold) if gold.gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return RetrievalReport(
        precision=precision,
        recall=recall,
        f1=f1,
        predicted_count=asserted,
        correct_count=correct,
        gold_count=len(gold.gold),
        threshold=threshold,
    )


def prf_sweep(
    predictions: dict[str, tuple[str, float]],
    gold: GoldBitext,
    thresholds: Iterable[float] | None = None,
) -> list[RetrievalReport]:
    """Precision/recall curve across thresholds.

    Defaults to the observed prediction scores (ascending), which traces the
    full curve.
    """
    if thresholds is None:
        thresholds = sorted({score for _, score in predictions.values()})
    return [evaluate_prf(predictions, gold, threshold) for threshold in thresholds]
