import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.exceptions import NotFittedError

from lexmine.bpe import (
    BpeEncoder,
    BpeVocabulary,
    END_OF_WORD,
    apply_bpe,
    desegment,
    learn_bpe,
)
from lexmine.corpus import TokenizedSentence, tokenize


def sent(text):
    return tokenize(text)


# --- independent oracle: rescan every pair count from scratch each step ---


def oracle_word_symbols(word):
    return list(word[:-1]) + [word[-1] + END_OF_WORD]


def oracle_merge(symbols, pair):
    out = []
    i = 0
    while i < len(symbols):
        if i + 1 < len(symbols) and (symbols[i], symbols[i + 1]) == pair:
            out.append(pair[0] + pair[1])
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def oracle_merge_sequence(sentences, num_merges):
    word_freq = {}
    for s in sentences:
        for token in s.tokens:
            word_freq[token] = word_freq.get(token, 0) + 1
    words = {word: oracle_word_symbols(word) for word in word_freq}
    merges = []
    for _ in range(num_merges):
        counts = {}
        for word, freq in word_freq.items():
            symbols = words[word]
            for i in range(len(symbols) - 1):
                pair = (symbols[i], symbols[i + 1])
                counts[pair] = counts.get(pair, 0) + freq
        eligible = {pair: c for pair, c in counts.items() if c >= 2}
        if not eligible:
            break
        best_count = max(eligible.values())
        best = min(pair for pair, c in eligible.items() if c == best_count)
        merges.append(best)
        words = {word: oracle_merge(symbols, best) for word, symbols in words.items()}
    return merges


def random_corpus(rng, max_words=200):
    alphabet = "abcd"
    n_words = rng.randint(5, max_words)
    tokens = [
        "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 6))) for _ in range(n_words)
    ]
    sentences = []
    while tokens:
        take = min(len(tokens), rng.randint(1, 8))
        sentences.append(TokenizedSentence(raw="", tokens=tokens[:take]))
        tokens = tokens[take:]
    return sentences


class TestLearnBpe:
    def test_only_repeated_pair_merges_first(self):
        corpus = [sent("aaab")] * 10
        vocabulary = learn_bpe(corpus, 1)
        assert vocabulary.merges == [("a", "a")]

    def test_zero_merges_gives_character_inventory(self):
        vocabulary = learn_bpe([sent("ab"), sent("b")], 0)
        assert vocabulary.merges == []
        assert vocabulary.vocab == {"a", "b" + END_OF_WORD}

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            learn_bpe([], 5)
        with pytest.raises(ValueError):
            learn_bpe([sent("")], 5)

    def test_negative_merges_rejected(self):
        with pytest.raises(ValueError):
            learn_bpe([sent("ab")], -1)

    def test_stops_when_no_pair_repeats(self):
        vocabulary = learn_bpe([sent("ab cd")], 50)
        assert vocabulary.merges == []

    def test_lexicographic_tie_break(self):
        # "ba" and "ab" each occur twice; ("a","b...") sorts before ("b","a...")
        corpus = [sent("ab ab ba ba")]
        vocabulary = learn_bpe(corpus, 1)
        assert vocabulary.merges == [("a", "b" + END_OF_WORD)]

    def test_matches_bruteforce_oracle_on_random_corpora(self):
        rng = random.Random(7)
        for trial in range(30):
            corpus = random_corpus(rng)
            num_merges = rng.randint(1, 30)
            expected = oracle_merge_sequence(corpus, num_merges)
            got = learn_bpe(corpus, num_merges).merges
            assert got == expected, f"trial {trial}: {got} != {expected}"

    def test_num_merges_matches_length(self):
        vocabulary = learn_bpe([sent("aaaa aaaa")], 2)
        assert vocabulary.num_merges == len(vocabulary.merges)


class TestApplyBpe:
    def test_single_merge_segmentation(self):
        vocabulary = learn_bpe([sent("aaab")] * 10, 1)
        assert apply_bpe("aaab", vocabulary) == ["aa", "a", "b" + END_OF_WORD]

    def test_no_applicable_merges_gives_characters(self):
        vocabulary = BpeVocabulary(merges=[("x", "y")], vocab={"x", "y", "xy"})
        assert apply_bpe("abc", vocabulary) == ["a", "b", "c" + END_OF_WORD]

    def test_unseen_characters_pass_through(self):
        vocabulary = learn_bpe([sent("aaab")] * 10, 1)
        assert apply_bpe("zq", vocabulary) == ["z", "q" + END_OF_WORD]

    def test_round_trip_on_random_words(self):
        rng = random.Random(21)
        corpus = random_corpus(rng, max_words=150)
        vocabulary = learn_bpe(corpus, 40)
        words = [
            "".join(rng.choice("abcdef") for _ in range(rng.randint(1, 12))) for _ in range(1000)
        ]
        for word in words:
            assert desegment(apply_bpe(word, vocabulary)) == word

    def test_training_words_stay_inside_vocab(self):
        rng = random.Random(5)
        for _ in range(10):
            corpus = random_corpus(rng, max_words=80)
            vocabulary = learn_bpe(corpus, rng.randint(0, 25))
            for s in corpus:
                for token in s.tokens:
                    for symbol in apply_bpe(token, vocabulary):
                        assert symbol in vocabulary.vocab

    @given(st.text(alphabet="abcde", min_size=1, max_size=20))
    def test_round_trip_property(self, word):
        vocabulary = learn_bpe([sent("aab aab bcd bcd")], 5)
        assert desegment(apply_bpe(word, vocabulary)) == word

    def test_empty_word(self):
        vocabulary = learn_bpe([sent("ab")], 0)
        assert apply_bpe("", vocabulary) == []


class TestVocabularyIO:
    def test_save_load_round_trip(self, tmp_path):
        vocabulary = learn_bpe([sent("aaab aab ab")] * 4, 3)
        path = tmp_path / "merges.txt"
        vocabulary.save(path)
        loaded = BpeVocabulary.load(path)
        assert loaded.merges == vocabulary.merges

    def test_merge_file_format(self, tmp_path):
        vocabulary = BpeVocabulary(merges=[("a", "a"), ("aa", "b</w>")], vocab=set())
        path = tmp_path / "merges.txt"
        vocabulary.save(path)
        assert path.read_text(encoding="utf-8") == "a a\naa b</w>\n"

    def test_malformed_merge_line(self, tmp_path):
        path = tmp_path / "merges.txt"
        path.write_text("a b c\n", encoding="utf-8")
        with pytest.raises(ValueError, match="merges.txt:1"):
            BpeVocabulary.load(path)

    def test_loaded_merges_apply_identically(self, tmp_path):
        corpus = [sent("banana bandana ananas")] * 3
        vocabulary = learn_bpe(corpus, 10)
        path = tmp_path / "merges.txt"
        vocabulary.save(path)
        loaded = BpeVocabulary.load(path)
        for word in ("banana", "bandanas", "anab"):
            assert apply_bpe(word, loaded) == apply_bpe(word, vocabulary)


class TestBpeEncoder:
    def test_fit_segment_transform(self):
        encoder = BpeEncoder(num_merges=2).fit([sent("aaab aaab")])
        assert encoder.segment("aaab")
        out = encoder.transform([sent("aaab b")])
        assert len(out) == 1
        assert desegment(out[0][: len(encoder.segment("aaab"))]) == "aaab"

    def test_get_params(self):
        assert BpeEncoder(num_merges=17).get_params() == {"num_merges": 17}

    def test_unfitted_raises(self):
        with pytest.raises(NotFittedError):
            BpeEncoder().segment("ab")
