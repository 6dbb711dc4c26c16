import string

import pytest
from hypothesis import given, strategies as st

from sentpipe.errors import ConfigError, DataError
from sentpipe.tokenizer import (
    CLS_TOKEN,
    PAD_TOKEN,
    SEP_TOKEN,
    UNK_TOKEN,
    InputExample,
    Vocab,
    basic_tokenize,
    encode,
    tokenize,
    wordpiece_split,
)


def brute_force_split(token, vocab):
    """Independent reference: longest prefix in vocab, recurse on remainder."""

    def longest_prefix(text, continuation):
        for end in range(len(text), 0, -1):
            candidate = ("##" if continuation else "") + text[:end]
            if candidate in vocab:
                return candidate, text[end:]
        return None, text

    pieces = []
    rest = token
    continuation = False
    while rest:
        piece, rest = longest_prefix(rest, continuation)
        if piece is None:
            return [UNK_TOKEN]
        pieces.append(piece)
        continuation = True
    return pieces


class TestBasicTokenize:
    def test_paper_example_sentence(self):
        assert basic_tokenize("this is a very fantastic movie") == [
            "this", "is", "a", "very", "fantastic", "movie",
        ]

    def test_lowercase_and_punctuation(self):
        assert basic_tokenize("Great!") == ["great", "!"]

    def test_empty(self):
        assert basic_tokenize("") == []
        assert basic_tokenize("   \n\t ") == []

    def test_interior_punctuation(self):
        assert basic_tokenize("well-made, truly") == ["well", "-", "made", ",", "truly"]


class TestWordpieceSplit:
    def test_paper_example(self, fixture_vocab):
        assert wordpiece_split("interesting", fixture_vocab) == ["interest", "##ing"]

    def test_whole_token(self, fixture_vocab):
        assert wordpiece_split("movie", fixture_vocab) == ["movie"]

    def test_no_decomposition(self, fixture_vocab):
        assert wordpiece_split("qzxv", fixture_vocab) == [UNK_TOKEN]

    def test_oracle_equivalence_random_strings(self, fixture_vocab):
        import random

        rng = random.Random(123)
        alphabet = string.ascii_lowercase
        for _ in range(1000):
            token = "".join(
                rng.choice(alphabet) for _ in range(rng.randint(1, 15))
            )
            assert wordpiece_split(token, fixture_vocab) == brute_force_split(
                token, fixture_vocab
            )

    @given(st.text(alphabet=string.ascii_lowercase, min_size=1, max_size=20))
    def test_oracle_equivalence_property(self, token):
        vocab = _small_vocab()
        assert wordpiece_split(token, vocab) == brute_force_split(token, vocab)


def _small_vocab():
    tokens = [PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN]
    tokens += list("abcdefgh") + ["##a", "##b", "##c", "##d", "ab", "##ab", "abc"]
    return Vocab(tokens)


class TestEncode:
    def test_empty_text(self, fixture_vocab):
        e = encode(InputExample(""), fixture_vocab, 4)
        v = fixture_vocab
        assert e.input_ids == (v.cls_id, v.sep_id, v.pad_id, v.pad_id)
        assert e.attention_mask == (1, 1, 0, 0)

    def test_fixture_example(self, fixture_vocab):
        v = fixture_vocab
        e = encode(InputExample("interesting"), v, 8)
        expected = (
            v.cls_id, v.id_of("interest"), v.id_of("##ing"), v.sep_id,
        ) + (v.pad_id,) * 4
        assert e.input_ids == expected
        assert e.attention_mask == (1, 1, 1, 1, 0, 0, 0, 0)

    def test_truncation_keeps_specials(self, fixture_vocab):
        text = "a truly great movie with many many words beyond the limit"
        L = 6
        e = encode(InputExample(text), fixture_vocab, L)
        assert len(e.input_ids) == L
        assert e.input_ids[0] == fixture_vocab.cls_id
        assert e.input_ids[-1] == fixture_vocab.sep_id
        assert all(m == 1 for m in e.attention_mask)

    def test_mask_pad_duality(self, fixture_vocab):
        for text in ("", "great", "a very fantastic movie", "x" * 500):
            e = encode(InputExample(text), fixture_vocab, 16)
            for i, m in zip(e.input_ids, e.attention_mask):
                assert (m == 0) == (i == fixture_vocab.pad_id)

    def test_length_exactness(self, fixture_vocab):
        for L in (2, 3, 8, 64):
            e = encode(InputExample("good movie !"), fixture_vocab, L)
            assert len(e.input_ids) == L
            assert len(e.attention_mask) == L
            assert len(e.segment_ids) == L
            assert all(s == 0 for s in e.segment_ids)

    def test_min_length_rejected(self, fixture_vocab):
        with pytest.raises(ConfigError):
            encode(InputExample("x"), fixture_vocab, 1)

    @given(st.text(alphabet=string.printable, max_size=60))
    def test_lowercase_idempotence(self, text):
        vocab = _small_vocab()
        a = encode(InputExample(text), vocab, 16)
        b = encode(InputExample(text.lower()), vocab, 16)
        assert a.input_ids == b.input_ids
        assert a.attention_mask == b.attention_mask


class TestVocab:
    def test_missing_specials(self):
        with pytest.raises(DataError):
            Vocab(["just", "words"])

    def test_duplicate_tokens(self):
        with pytest.raises(DataError):
            Vocab([PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN, "a", "a"])

    def test_load(self, fixture_vocab_path):
        vocab = Vocab.load(fixture_vocab_path)
        assert vocab.pad_id == 0
        assert CLS_TOKEN in vocab
        assert vocab.id_of("nonexistenttokenxyz") == vocab.unk_id

    def test_full_chain(self, fixture_vocab):
        pieces = tokenize("An interesting, well acted movie!", fixture_vocab)
        assert "interest" in pieces and "##ing" in pieces and "!" in pieces
