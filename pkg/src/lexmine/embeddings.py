"""Word-vector tables, orthogonal alignment and CSLS lexicon induction."""

from __future__ import annotations

import logging
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .corpus import FrequencyTable
from .lexicon import PROJECTED, Lexicon

logger = logging.getLogger(__name__)

DEFAULT_CSLS_K = 10
DEFAULT_FREQUENT_WORD_CAP = 200_000


def normalize_rows(matrix) -> np.ndarray:
    """Rows scaled to unit L2 norm. Zero rows are rejected (cosine undefined)."""
    matrix = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    if np.any(norms == 0.0):
        raise ValueError("zero vector: cosine similarity is undefined")
    return matrix / norms


class EmbeddingTable:
    """Per-language word vectors, unit-normalized, with a vocabulary index."""

    def __init__(self, vocab: Sequence[str], vectors, skipped_duplicates: int = 0):
        vocab = list(vocab)
        if len(set(vocab)) != len(vocab):
            raise ValueError("vocabulary entries must be unique")
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(vocab):
            raise ValueError(
                f"vectors must be a ({len(vocab)}, d) matrix, got shape {vectors.shape}"
            )
        self.vocab = vocab
        self.vectors = normalize_rows(vectors)
        self.word2id = {word: i for i, word in enumerate(vocab)}
        self.skipped_duplicates = skipped_duplicates

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self.word2id[word]]

    def __contains__(self, word) -> bool:
        return word in self.word2id

    def __len__(self) -> int:
        return len(self.vocab)


def _read_text_vectors(path, limit: int | None = None):
    """Parse the text vector format: header 'count dim', then 'word v1 .. vd'."""
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline()
        fields = header.split()
        if len(fields) != 2:
            raise ValueError(f"{path}:1: malformed header {header.strip()!r}, expected 'count dim'")
        try:
            count, dim = int(fields[0]), int(fields[1])
        except ValueError as exc:
            raise ValueError(f"{path}:1: malformed header {header.strip()!r}") from exc
        if count < 0 or dim < 1:
            raise ValueError(f"{path}:1: invalid header values count={count} dim={dim}")
        words: list[str] = []
        rows: list[list[float]] = []
        seen: set[str] = set()
        skipped = 0
        for lineno, line in enumerate(handle, start=2):
            if limit is not None and len(words) >= limit:
                break
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if len(parts) != dim + 1:
                raise ValueError(
                    f"{path}:{lineno}: expected {dim} vector components, got {len(parts) - 1}"
                )
            try:
                values = [float(part) for part in parts[1:]]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric vector component") from exc
            word = parts[0]
            if word in seen:
                skipped += 1
                continue
            seen.add(word)
            words.append(word)
            rows.append(values)
    if not words:
        raise ValueError(f"{path}: no vectors loaded")
    if skipped:
        logger.warning("%s: skipped %d duplicate words (first occurrence wins)", path, skipped)
    return words, np.array(rows, dtype=np.float64), skipped


def load_vectors(path, limit: int | None = None) -> EmbeddingTable:
    """Load a text word-vector file and L2-normalize the rows.

    Duplicate words keep their first occurrence; the number skipped is
    logged and recorded on the returned table.
    """
    words, vectors, skipped = _read_text_vectors(path, limit)
    return EmbeddingTable(words, vectors, skipped_duplicates=skipped)


def save_vectors(table: EmbeddingTable, path) -> None:
    """Write the text vector format ('count dim' header, one word per line)."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(table)} {table.dim}\n")
        for word, row in zip(table.vocab, table.vectors):
            handle.write(word + " " + " ".join(f"{value:.9g}" for value in row) + "\n")


class LinearMap:
    """A d x d map between embedding spaces, applied to row vectors."""

    def __init__(self, matrix, orthogonal: bool = True, used_pairs: int = 0, skipped_pairs: int = 0):
        self.matrix = np.asarray(matrix, dtype=np.float64)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"map matrix must be square, got shape {self.matrix.shape}")
        self.orthogonal = orthogonal
        self.used_pairs = used_pairs
        self.skipped_pairs = skipped_pairs

    def __call__(self, vectors) -> np.ndarray:
        return np.asarray(vectors, dtype=np.float64) @ self.matrix.T


class OrthogonalAligner(BaseEstimator):
    """Closed-form least-squares rotation between paired vector sets.

    fit(X, Y) finds the orthogonal matrix minimizing the Frobenius distance
    between mapped X rows and Y rows, via the singular value decomposition
    of the cross-covariance. transform(X) lands rows in the Y space.
    """

    def fit(self, X, Y):
        X = np.asarray(X, dtype=np.float64)
        Y = np.asarray(Y, dtype=np.float64)
        if X.ndim != 2 or X.shape != Y.shape:
            raise ValueError(f"paired sets must share one (n, d) shape, got {X.shape} vs {Y.shape}")
        n, d = X.shape
        if n < d:
            raise ValueError(f"need at least {d} pairs to constrain a {d}-dim map, got {n}")
        u, _, vt = np.linalg.svd(Y.T @ X)
        self.matrix_ = u @ vt
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "matrix_"):
            raise NotFittedError("OrthogonalAligner must be fitted before transform")
        return np.asarray(X, dtype=np.float64) @ self.matrix_.T


def fit_procrustes(src: EmbeddingTable, tgt: EmbeddingTable, seed) -> LinearMap:
    """Fit the orthogonal source-to-target map from seed translation pairs.

    `seed` is a Lexicon or an iterable of (source, target) pairs; pairs with
    either word missing from its table are skipped and counted. Passing raw
    pairs allows several translations per source word to enter the stack.
    """
    if src.dim != tgt.dim:
        raise ValueError(f"dimension mismatch: source {src.dim} vs target {tgt.dim}")
    pairs = seed.items() if isinstance(seed, Lexicon) else seed
    src_ids: list[int] = []
    tgt_ids: list[int] = []
    skipped = 0
    for source, target in pairs:
        si = src.word2id.get(source)
        ti = tgt.word2id.get(target)
        if si is None or ti is None:
            skipped += 1
            continue
        src_ids.append(si)
        tgt_ids.append(ti)
    if len(src_ids) < src.dim:
        raise ValueError(
            f"only {len(src_ids)} usable seed pairs; need at least {src.dim} "
            f"({skipped} skipped as missing)"
        )
    if skipped:
        logger.info("fit_procrustes: skipped %d seed pairs missing from the tables", skipped)
    aligner = OrthogonalAligner().fit(src.vectors[src_ids], tgt.vectors[tgt_ids])
    return LinearMap(aligner.matrix_, orthogonal=True, used_pairs=len(src_ids), skipped_pairs=skipped)


def _topk_mean(matrix: np.ndarray, k: int, axis: int) -> np.ndarray:
    """Mean of the k largest entries along an axis."""
    size = matrix.shape[axis]
    if k >= size:
        return matrix.mean(axis=axis)
    part = np.partition(matrix, size - k, axis=axis)
    top = part[:, size - k:] if axis == 1 else part[size - k:, :]
    return top.mean(axis=axis)


def csls_scores(queries, candidates, k: int = DEFAULT_CSLS_K) -> np.ndarray:
    """Cross-domain similarity local scaling scores.

    score(x, y) = 2 cos(x, y) - r_c(x) - r_q(y), where r_c(x) is the mean
    cosine of query x to its k nearest candidates and r_q(y) the mean cosine
    of candidate y to its k nearest queries (capped at the query-batch
    size). Subtracting both local densities counteracts hubness in
    nearest-neighbor retrieval; the per-query argmax is the retrieval.

    `queries` is a vector or an (n, d) batch; `candidates` an EmbeddingTable
    or matrix. Returns one score per candidate, batched along axis 0.
    """
    if isinstance(candidates, EmbeddingTable):
        cand = candidates.vectors
    else:
        cand = normalize_rows(np.atleast_2d(candidates))
    queries = np.asarray(queries, dtype=np.float64)
    single = queries.ndim == 1
    q = normalize_rows(np.atleast_2d(queries))
    if not 1 <= k <= cand.shape[0]:
        raise ValueError(f"k must be within [1, {cand.shape[0]}], got {k}")
    if q.shape[1] != cand.shape[1]:
        raise ValueError(f"dimension mismatch: queries {q.shape[1]} vs candidates {cand.shape[1]}")
    sims = q @ cand.T
    r_query = _topk_mean(sims, k, axis=1)
    r_cand = _topk_mean(sims, min(k, q.shape[0]), axis=0)
    scores = 2.0 * sims - r_query[:, None] - r_cand[None, :]
    return scores[0] if single else scores


def _csls_argmax(projected: np.ndarray, tgt: EmbeddingTable, k: int, chunk_size: int) -> list[int]:
    """Per-query CSLS argmax over the target table, computed in chunks.

    Candidate-side density terms use the full query batch. Ties break
    lexicographically on the target word.
    """
    n_queries = projected.shape[0]
    if not 1 <= k <= len(tgt):
        raise ValueError(f"k must be within [1, {len(tgt)}], got {k}")
    k_query_side = min(k, n_queries)

    # pass 1: per-target running top-k cosines against the whole query batch
    running = np.full((0, len(tgt)), -np.inf)
    for start in range(0, n_queries, chunk_size):
        sims = projected[start : start + chunk_size] @ tgt.vectors.T
        stacked = np.vstack([running, sims])
        if stacked.shape[0] > k_query_side:
            cut = stacked.shape[0] - k_query_side
            stacked = np.partition(stacked, cut, axis=0)[cut:, :]
        running = stacked
    r_cand = running.mean(axis=0)

    # pass 2: scores and argmax per chunk
    best_ids: list[int] = []
    for start in range(0, n_queries, chunk_size):
        sims = projected[start : start + chunk_size] @ tgt.vectors.T
        r_query = _topk_mean(sims, k, axis=1)
        scores = 2.0 * sims - r_query[:, None] - r_cand[None, :]
        argmax = np.argmax(scores, axis=1)
        row_max = scores[np.arange(scores.shape[0]), argmax]
        tie_rows = np.flatnonzero((scores == row_max[:, None]).sum(axis=1) > 1)
        for row in tie_rows:
            tied = np.flatnonzero(scores[row] == row_max[row])
            argmax[row] = min(tied, key=lambda j: tgt.vocab[j])
        best_ids.extend(int(i) for i in argmax)
    return best_ids


def induce_lexicon(
    src: EmbeddingTable,
    tgt: EmbeddingTable,
    linear_map: LinearMap,
    src_freq: FrequencyTable,
    cap: int = DEFAULT_FREQUENT_WORD_CAP,
    k: int = DEFAULT_CSLS_K,
    chunk_size: int = 4096,
) -> Lexicon:
    """Induce a high-coverage top-1 lexicon for the most frequent source words.

    The top-`cap` most frequent source words present in the source table are
    projected into the target space and matched to their CSLS-argmax target
    word. Deterministic: frequency ties break lexicographically, CSLS ties
    break lexicographically on the target word.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    words = [word for word in src_freq.top_k(cap) if word in src.word2id]
    if not words:
        return Lexicon({}, provenance=PROJECTED)
    rows = src.vectors[[src.word2id[word] for word in words]]
    projected = normalize_rows(linear_map(rows))
    best_ids = _csls_argmax(projected, tgt, k, chunk_size)
    return Lexicon(
        {word: tgt.vocab[tid] for word, tid in zip(words, best_ids)},
        provenance=PROJECTED,
    )


class LexiconInducer(BaseEstimator):
    """End-to-end estimator: orthogonal alignment, then CSLS retrieval.

    `cap` bounds how many frequent source words receive translations and `k`
    is the CSLS neighborhood size.
    """

    def __init__(self, cap: int = DEFAULT_FREQUENT_WORD_CAP, k: int = DEFAULT_CSLS_K):
        self.cap = cap
        self.k = k

    def fit(self, src: EmbeddingTable, tgt: EmbeddingTable, seed):
        self.map_ = fit_procrustes(src, tgt, seed)
        self.src_ = src
        self.tgt_ = tgt
        return self

    def predict(self, words: Sequence[str]) -> list[str]:
        """Top-1 target translation per source word (CSLS argmax).

        Density terms are computed over the given batch of words.
        """
        self._check_fitted()
        missing = [word for word in words if word not in self.src_.word2id]
        if missing:
            raise KeyError(f"words missing from the source table: {missing[:5]}")
        rows = self.src_.vectors[[self.src_.word2id[word] for word in words]]
        projected = normalize_rows(self.map_(rows))
        best_ids = _csls_argmax(projected, self.tgt_, self.k, chunk_size=4096)
        return [self.tgt_.vocab[tid] for tid in best_ids]

    def induce(self, src_freq: FrequencyTable) -> Lexicon:
        self._check_fitted()
        return induce_lexicon(self.src_, self.tgt_, self.map_, src_freq, cap=self.cap, k=self.k)

    def _check_fitted(self):
        if not hasattr(self, "map_"):
            raise NotFittedError("LexiconInducer must be fitted before use")
