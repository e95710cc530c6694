"""Dictionary-based comparable-sentence mining from linked documents."""

from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from sklearn.base import BaseEstimator

from .corpus import DEFAULT_TOKENIZER, TokenizedSentence, TokenizerConfig, tokenize
from .lexicon import Lexicon

DEFAULT_THRESHOLD = 0.1


@dataclass
class LinkedDocumentPair:
    """A source document and its linked target-language counterpart."""

    doc_id: str
    src_sentences: list[TokenizedSentence]
    tgt_sentences: list[TokenizedSentence]


@dataclass
class MinedPair:
    """A mined sentence pair with its overlap score and provenance."""

    src: TokenizedSentence
    tgt: TokenizedSentence
    score: float
    doc_id: str
    src_index: int
    tgt_index: int


def translate_tokens(sentence: TokenizedSentence, lexicon) -> frozenset:
    """Word-translate a sentence through the lexicon, as a token set.

    Out-of-vocabulary tokens pass through unchanged; duplicates collapse.
    """
    entries = lexicon.entries if isinstance(lexicon, Lexicon) else lexicon
    return frozenset(entries.get(token, token) for token in sentence.tokens)


def jaccard(s, t) -> float:
    """Set Jaccard similarity |intersection| / |union|; 0.0 for two empty sets."""
    if not s and not t:
        return 0.0
    return len(s & t) / len(s | t)


def _mine_document(doc: LinkedDocumentPair, entries: dict, threshold: float) -> list[MinedPair]:
    pairs = []
    tgt_sets = [sentence.token_set for sentence in doc.tgt_sentences]
    for src_index, src in enumerate(doc.src_sentences):
        translated = frozenset(entries.get(token, token) for token in src.tokens)
        best_score = None
        best_index = None
        for tgt_index, tgt_set in enumerate(tgt_sets):
            score = jaccard(translated, tgt_set)
            if score >= threshold and (best_score is None or score > best_score):
                best_score, best_index = score, tgt_index
        if best_index is not None:
            pairs.append(
                MinedPair(
                    src=src,
                    tgt=doc.tgt_sentences[best_index],
                    score=best_score,
                    doc_id=doc.doc_id,
                    src_index=src_index,
                    tgt_index=best_index,
                )
            )
    return pairs


def mine_documents(
    documents: Iterable[LinkedDocumentPair],
    lexicon,
    threshold: float = DEFAULT_THRESHOLD,
    jobs: int = 1,
) -> list[MinedPair]:
    """Mine comparable sentence pairs from linked document pairs.

    For each source sentence, the best-scoring target sentence within the
    linked document is kept when its Jaccard score over the word-translated
    source token set meets the threshold (inclusive). The first best wins on
    ties; target sentences may be matched by several source sentences.
    Output is sorted by (doc_id, src_index) so sequential and parallel runs
    agree byte for byte.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be within [0, 1], got {threshold}")
    entries = lexicon.entries if isinstance(lexicon, Lexicon) else dict(lexicon)
    documents = list(documents)
    if jobs is None or jobs < 1:
        jobs = os.cpu_count() or 1
    if jobs == 1 or len(documents) < 2:
        per_doc = [_mine_document(doc, entries, threshold) for doc in documents]
    else:
        chunksize = max(1, len(documents) // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_doc = list(
                pool.map(
                    _mine_document,
                    documents,
                    itertools.repeat(entries),
                    itertools.repeat(threshold),
                    chunksize=chunksize,
                )
            )
    mined = [pair for doc_pairs in per_doc for pair in doc_pairs]
    mined.sort(key=lambda pair: (pair.doc_id, pair.src_index))
    return mined


class DocumentMiner(BaseEstimator):
    """Configured miner over linked document streams."""

    def __init__(self, lexicon=None, threshold: float = DEFAULT_THRESHOLD, jobs: int = 1):
        self.lexicon = lexicon
        self.threshold = threshold
        self.jobs = jobs

    def fit(self, X=None, y=None):
        return self

    def transform(self, documents: Iterable[LinkedDocumentPair]) -> list[MinedPair]:
        if self.lexicon is None:
            raise ValueError("DocumentMiner requires a lexicon")
        return mine_documents(documents, self.lexicon, self.threshold, jobs=self.jobs)

    mine = transform


def read_linked_documents(
    path, config: TokenizerConfig = DEFAULT_TOKENIZER
) -> Iterator[LinkedDocumentPair]:
    """Linked documents from JSONL records or a paired-file directory.

    JSONL: one object {"doc_id": ..., "src": [...], "tgt": [...]} per line.
    Directory: every <id>.src file pairs with an <id>.tgt file, one sentence
    per line, document id taken from the stem.
    """
    path = Path(path)
    if path.is_dir():
        yield from _read_document_dir(path, config)
        return
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON record") from exc
            missing = {"doc_id", "src", "tgt"} - set(record)
            if missing:
                raise ValueError(f"{path}:{lineno}: record missing keys {sorted(missing)}")
            yield LinkedDocumentPair(
                doc_id=str(record["doc_id"]),
                src_sentences=[tokenize(text, config) for text in record["src"]],
                tgt_sentences=[tokenize(text, config) for text in record["tgt"]],
            )


def _read_document_dir(path: Path, config: TokenizerConfig) -> Iterator[LinkedDocumentPair]:
    for src_file in sorted(path.glob("*.src")):
        tgt_file = src_file.with_suffix(".tgt")
        if not tgt_file.exists():
            raise ValueError(f"{src_file}: missing paired target file {tgt_file.name}")
        yield LinkedDocumentPair(
            doc_id=src_file.stem,
            src_sentences=_read_lines(src_file, config),
            tgt_sentences=_read_lines(tgt_file, config),
        )


def _read_lines(path: Path, config: TokenizerConfig) -> list[TokenizedSentence]:
    with open(path, "r", encoding="utf-8") as handle:
        return [tokenize(line.rstrip("\n"), config) for line in handle]


def write_mined_pairs(pairs: Iterable[MinedPair], tsv_path, src_path=None, tgt_path=None) -> None:
    """Write mined pairs as TSV plus optional parallel .src/.tgt text files.

    TSV columns: doc_id, score, source sentence, target sentence (tokens
    joined by spaces). Scores use repr so they round-trip exactly.
    """
    pairs = list(pairs)
    with open(tsv_path, "w", encoding="utf-8") as handle:
        for pair in pairs:
            src_text = " ".join(pair.src.tokens)
            tgt_text = " ".join(pair.tgt.tokens)
            handle.write(f"{pair.doc_id}\t{pair.score!r}\t{src_text}\t{tgt_text}\n")
    if src_path is not None:
        with open(src_path, "w", encoding="utf-8") as handle:
            for pair in pairs:
                handle.write(" ".join(pair.src.tokens) + "\n")
    if tgt_path is not None:
        with open(tgt_path, "w", encoding="utf-8") as handle:
            for pair in pairs:
                handle.write(" ".join(pair.tgt.tokens) + "\n")
