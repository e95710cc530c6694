"""Weak-supervision data tools for low-resource machine translation.

Builds high-coverage translation lexicons by orthogonal embedding alignment
and CSLS retrieval, mines comparable sentence pairs from linked documents by
dictionary overlap, generates code-switched corpora, scores candidate pairs
with margin-based retrieval, and evaluates retrieval quality and language
similarity.
"""

__version__ = "0.1.0"

from .bpe import BpeEncoder, BpeVocabulary, END_OF_WORD, apply_bpe, desegment, learn_bpe
from .codeswitch import (
    SRC_TO_TGT,
    TGT_TO_SRC,
    CodeSwitchConfig,
    CodeSwitchStats,
    CodeSwitcher,
    codeswitch_corpus,
    codeswitch_sentence,
)
from .corpus import (
    FrequencyTable,
    TokenizedSentence,
    TokenizerConfig,
    count_frequencies,
    read_corpus,
    tokenize,
    write_corpus,
)
from .embeddings import (
    EmbeddingTable,
    LexiconInducer,
    LinearMap,
    OrthogonalAligner,
    csls_scores,
    fit_procrustes,
    induce_lexicon,
    load_vectors,
    save_vectors,
)
from .lexicon import Lexicon, read_lexicon_pairs
from .lingmetrics import (
    FeatureVector,
    LossLog,
    TypologyTable,
    char_overlap,
    load_wals,
    online_codelength,
    shared_wals,
    syntactic_distance,
    token_overlap,
)
from .mining import (
    DocumentMiner,
    LinkedDocumentPair,
    MinedPair,
    jaccard,
    mine_documents,
    read_linked_documents,
    translate_tokens,
    write_mined_pairs,
)
from .retrieval_eval import (
    GoldBitext,
    RetrievalReport,
    SentenceEmbeddingSet,
    evaluate_prf,
    jaccard_retrieve,
    load_sentence_embeddings,
    prf_sweep,
    rmss,
    rmss_top1,
)

__all__ = [
    "__version__",
    "BpeEncoder",
    "BpeVocabulary",
    "END_OF_WORD",
    "apply_bpe",
    "desegment",
    "learn_bpe",
    "SRC_TO_TGT",
    "TGT_TO_SRC",
    "CodeSwitchConfig",
    "CodeSwitchStats",
    "CodeSwitcher",
    "codeswitch_corpus",
    "codeswitch_sentence",
    "FrequencyTable",
    "TokenizedSentence",
    "TokenizerConfig",
    "count_frequencies",
    "read_corpus",
    "tokenize",
    "write_corpus",
    "EmbeddingTable",
    "LexiconInducer",
    "LinearMap",
    "OrthogonalAligner",
    "csls_scores",
    "fit_procrustes",
    "induce_lexicon",
    "load_vectors",
    "save_vectors",
    "Lexicon",
    "read_lexicon_pairs",
    "FeatureVector",
    "LossLog",
    "TypologyTable",
    "char_overlap",
    "load_wals",
    "online_codelength",
    "shared_wals",
    "syntactic_distance",
    "token_overlap",
    "DocumentMiner",
    "LinkedDocumentPair",
    "MinedPair",
    "jaccard",
    "mine_documents",
    "read_linked_documents",
    "translate_tokens",
    "write_mined_pairs",
    "GoldBitext",
    "RetrievalReport",
    "SentenceEmbeddingSet",
    "evaluate_prf",
    "jaccard_retrieve",
    "load_sentence_embeddings",
    "prf_sweep",
    "rmss",
    "rmss_top1",
]
