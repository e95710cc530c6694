import random
import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexmine.corpus import (
    FrequencyTable,
    TokenizedSentence,
    TokenizerConfig,
    count_frequencies,
    read_corpus,
    tokenize,
    write_corpus,
)


class TestTokenize:
    def test_whitespace_and_punctuation(self):
        assert tokenize("The  bus, stopped.").tokens == ["the", "bus", "stopped"]

    def test_empty_input(self):
        assert tokenize("").tokens == []

    def test_whitespace_only(self):
        assert tokenize(" \t  \n").tokens == []

    def test_internal_punctuation_kept(self):
        assert tokenize("don't half-baked").tokens == ["don't", "half-baked"]

    def test_all_punctuation_token_dropped(self):
        assert tokenize("a -- b").tokens == ["a", "b"]

    def test_lowercase_configurable(self):
        config = TokenizerConfig(lowercase=False)
        assert tokenize("The Bus", config).tokens == ["The", "Bus"]

    def test_nfc_normalization(self):
        # e + combining acute composes to the precomposed form
        assert tokenize("café").tokens == tokenize("café").tokens

    def test_bytes_decode_error_reports_offset(self):
        with pytest.raises(UnicodeDecodeError) as err:
            tokenize(b"ab\xffcd")
        assert err.value.start == 2

    def test_token_set_matches_tokens(self):
        s = tokenize("a b a c b")
        assert s.token_set == frozenset({"a", "b", "c"})
        assert len(s) == 5

    def test_no_empty_tokens_allowed(self):
        with pytest.raises(ValueError):
            TokenizedSentence(raw="x", tokens=["a", ""])

    def test_determinism_on_synthetic_corpus(self):
        rng = random.Random(13)
        lines = []
        for _ in range(100):
            words = [
                "".join(rng.choice(string.ascii_letters + ".,;'") for _ in range(rng.randint(1, 8)))
                for _ in range(rng.randint(0, 12))
            ]
            lines.append("  ".join(words))
        first = [tokenize(line).tokens for line in lines]
        second = [tokenize(line).tokens for line in lines]
        assert first == second

    @given(st.text(alphabet=st.characters(codec="utf-8"), max_size=80))
    def test_idempotent_on_normalized_text(self, text):
        once = tokenize(text)
        again = tokenize(" ".join(once.tokens))
        assert again.tokens == once.tokens


class TestFrequencyTable:
    def test_hand_counts_and_tie_break(self):
        table = count_frequencies([tokenize("a a b"), tokenize("b c")])
        assert dict(table.counts) == {"a": 2, "b": 2, "c": 1}
        assert table.top_k(2) == ["a", "b"]
        assert table.total == 5

    def test_empty_stream(self):
        table = count_frequencies([])
        assert table.total == 0
        assert len(table) == 0
        assert table.top_k(3) == []

    def test_top_k_orders_by_count_then_token(self):
        table = FrequencyTable({"z": 3, "a": 1, "m": 3, "b": 1})
        assert table.top_k(4) == ["m", "z", "a", "b"]

    def test_counts_must_be_positive(self):
        with pytest.raises(ValueError):
            FrequencyTable({"a": 0})

    def test_merge_is_associative(self):
        parts = [
            count_frequencies([tokenize("a b")]),
            count_frequencies([tokenize("b c")]),
            count_frequencies([tokenize("c c d")]),
        ]
        left = parts[0].merge(parts[1]).merge(parts[2])
        right = parts[0].merge(parts[1].merge(parts[2]))
        assert left.counts == right.counts

    def test_total_matches_independent_recount(self):
        rng = random.Random(99)
        vocabulary = [f"w{i}" for i in range(200)]
        sentences = []
        for _ in range(500):
            sentences.append(
                TokenizedSentence(
                    raw="", tokens=[rng.choice(vocabulary) for _ in range(rng.randint(1, 40))]
                )
            )
        table = count_frequencies(sentences)
        # oracle: single flat pass over every token
        flat_total = 0
        flat_counts = {}
        for s in sentences:
            for token in s.tokens:
                flat_total += 1
                flat_counts[token] = flat_counts.get(token, 0) + 1
        assert table.total == flat_total
        assert dict(table.counts) == flat_counts


class TestCorpusIO:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text("a b c\n\nd e\n", encoding="utf-8")
        sentences = list(read_corpus(path))
        assert [s.tokens for s in sentences] == [["a", "b", "c"], [], ["d", "e"]]
        out = tmp_path / "out.txt"
        write_corpus(sentences, out)
        assert out.read_text(encoding="utf-8") == "a b c\n\nd e\n"
