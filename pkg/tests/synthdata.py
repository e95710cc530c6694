"""Synthetic fixtures: planted rotations, linked documents, lexicons."""

from dataclasses import dataclass, field

import numpy as np

from lexmine.corpus import FrequencyTable, TokenizedSentence
from lexmine.embeddings import EmbeddingTable
from lexmine.lexicon import Lexicon, SEED
from lexmine.mining import LinkedDocumentPair


def random_orthogonal(dim, rng):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    return q * np.sign(np.diag(r))[None, :]


def sentence(tokens):
    return TokenizedSentence(raw=" ".join(tokens), tokens=list(tokens))


@dataclass
class PlantedWorld:
    """A bilingual toy world whose word alignment is known exactly.

    Source vectors are the target vectors carried through a planted
    orthogonal map (plus optional noise), so the true rotation and the true
    word correspondence are both available for checking.
    """

    src_table: EmbeddingTable
    tgt_table: EmbeddingTable
    rotation: np.ndarray  # maps source rows into the target space
    planted: dict  # src word -> tgt word, full alignment
    seed_lexicon: Lexicon
    held_out: dict = field(default_factory=dict)  # alignment minus seed pairs

    @property
    def frequencies(self):
        # ranks every source word so induction covers the whole vocabulary
        return FrequencyTable({word: i + 1 for i, word in enumerate(self.src_table.vocab)})


def planted_world(n_words=2000, dim=50, n_seed=1000, noise=0.0, seed=0) -> PlantedWorld:
    rng = np.random.default_rng(seed)
    tgt_words = [f"t{i:05d}" for i in range(n_words)]
    src_words = [f"s{i:05d}" for i in range(n_words)]
    tgt_vectors = rng.normal(size=(n_words, dim))
    tgt_vectors /= np.linalg.norm(tgt_vectors, axis=1, keepdims=True)
    rotation = random_orthogonal(dim, rng)
    # rows x satisfy x @ rotation.T = y, i.e. the fitted map should equal `rotation`
    src_vectors = tgt_vectors @ rotation
    if noise:
        src_vectors = src_vectors + rng.normal(scale=noise, size=src_vectors.shape)
    planted = dict(zip(src_words, tgt_words))
    seed_lexicon = Lexicon(
        {src_words[i]: tgt_words[i] for i in range(n_seed)}, provenance=SEED
    )
    held_out = {w: planted[w] for w in src_words[n_seed:]}
    return PlantedWorld(
        src_table=EmbeddingTable(src_words, src_vectors),
        tgt_table=EmbeddingTable(tgt_words, tgt_vectors),
        rotation=rotation,
        planted=planted,
        seed_lexicon=seed_lexicon,
        held_out=held_out,
    )


@dataclass
class LinkedCorpus:
    documents: list
    planted_pairs: set  # (doc_id, src_index, tgt_index) of true translations


def linked_documents(
    lexicon: dict,
    rng,
    n_docs=40,
    planted_per_doc=10,
    tgt_distractors=8,
    src_distractors=4,
    length_range=(6, 12),
) -> LinkedCorpus:
    """Documents pairing word-for-word translated sentences with distractors.

    `lexicon` is the true src->tgt word map; planted source sentences are
    exact word-for-word renderings of their target counterparts.
    """
    src_words = list(lexicon)
    tgt_words = [lexicon[w] for w in src_words]
    inverse = {t: s for s, t in lexicon.items()}
    lo, hi = length_range

    def random_tokens(words):
        length = int(rng.integers(lo, hi + 1))
        picks = rng.choice(len(words), size=length, replace=False)
        return [words[int(i)] for i in picks]

    documents = []
    planted_pairs = set()
    for d in range(n_docs):
        doc_id = f"doc{d:04d}"
        tgt_items = []  # (sentence, planted ordinal or None)
        src_items = []
        for p in range(planted_per_doc):
            tgt_tokens = random_tokens(tgt_words)
            src_tokens = [inverse[t] for t in tgt_tokens]
            tgt_items.append((sentence(tgt_tokens), p))
            src_items.append((sentence(src_tokens), p))
        for _ in range(tgt_distractors):
            tgt_items.append((sentence(random_tokens(tgt_words)), None))
        for _ in range(src_distractors):
            src_items.append((sentence(random_tokens(src_words)), None))
        tgt_order = [int(i) for i in rng.permutation(len(tgt_items))]
        src_order = [int(i) for i in rng.permutation(len(src_items))]
        tgt_items = [tgt_items[i] for i in tgt_order]
        src_items = [src_items[i] for i in src_order]
        tgt_pos = {ordinal: j for j, (_, ordinal) in enumerate(tgt_items) if ordinal is not None}
        for i, (_, ordinal) in enumerate(src_items):
            if ordinal is not None:
                planted_pairs.add((doc_id, i, tgt_pos[ordinal]))
        documents.append(
            LinkedDocumentPair(
                doc_id=doc_id,
                src_sentences=[s for s, _ in src_items],
                tgt_sentences=[t for t, _ in tgt_items],
            )
        )
    return LinkedCorpus(documents=documents, planted_pairs=planted_pairs)
