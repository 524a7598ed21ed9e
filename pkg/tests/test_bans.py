"""Ban-set construction: surface expansion, trie layout, traversal."""

from __future__ import annotations

import numpy as np
import pytest

from mintox import (
    BanSet,
    BanSetError,
    EmptyBanSetError,
    PUNCT_PREFIXES,
    build_ban_set,
    load_vocab,
    tokenize,
)


class TestBanSetTrie:
    def test_dedup_and_order(self):
        ban = BanSet([(1,), (0, 1), (1,), (0, 0)])
        assert ban.sequences == ((1,), (0, 0), (0, 1))
        assert len(ban) == 3
        assert ban.max_depth == 2
        assert (0, 1) in ban and (1, 0) not in ban

    def test_root_terminals(self):
        ban = BanSet([(1,), (0, 1)])
        assert ban.banned_tokens(()) == [1]

    def test_advance_and_completion(self):
        ban = BanSet([(0,), (0, 1), (2, 3)])
        assert set(ban.banned_tokens(())) == {0}
        after_0 = ban.advance((), 0)
        assert len(after_0) == 1
        assert set(ban.banned_tokens(after_0)) == {0, 1}
        after_2 = ban.advance((), 2)
        assert set(ban.banned_tokens(after_2)) == {0, 3}
        # a fresh match can start mid-hypothesis via the implicit root
        assert ban.advance(after_2, 0) == ban.advance((), 0)
        # no child for this token anywhere: back to the root-only state
        assert ban.advance(after_2, 9) == ()

    def test_active_sets_accumulate_overlaps(self):
        ban = BanSet([(0, 0, 1)])
        active = ban.advance((), 0)
        active = ban.advance(active, 0)
        # both the depth-1 and depth-2 nodes are live after "0 0"
        assert len(active) == 2
        assert set(ban.banned_tokens(active)) == {1}

    def test_csr_layout(self):
        ban = BanSet([(3,), (1, 2), (1, 4), (5, 2)])
        offs = ban.child_offsets
        assert offs[0] == 0 and offs[-1] == len(ban.child_tokens)
        assert np.all(np.diff(offs) >= 0)
        assert ban.child_offsets.dtype == np.int32
        assert ban.child_tokens.dtype == np.int32
        assert ban.child_nodes.dtype == np.int32
        assert ban.child_terminal.dtype == np.uint8
        for n in range(len(offs) - 1):
            row = ban.child_tokens[offs[n]:offs[n + 1]]
            assert list(row) == sorted(row)
        # root children are the distinct first tokens
        root = ban.child_tokens[offs[0]:offs[1]]
        assert list(root) == [1, 3, 5]

    def test_contains_empty_is_false(self):
        assert BanSet([(1,)]).contains_empty is False

    def test_validation(self):
        with pytest.raises(EmptyBanSetError):
            BanSet([])
        with pytest.raises(BanSetError, match="empty"):
            BanSet([()])
        with pytest.raises(BanSetError, match="invalid token"):
            BanSet([(-1,)])
        with pytest.raises(BanSetError, match="invalid token"):
            BanSet([("x",)])
        with pytest.raises(BanSetError, match="EOS"):
            BanSet([(0, 3)], eos_id=3)
        # without an eos_id there is nothing to reject
        assert BanSet([(0, 3)]).sequences == ((0, 3),)


class TestBuildBanSet:
    def test_capitalization_variants(self):
        vocab = load_vocab(["▁bad", "▁Bad", "▁BAD"])
        ban = build_ban_set(["bad"], vocab)
        for surface in ("bad", "Bad", "BAD"):
            assert tokenize(surface, vocab) in ban
        off = build_ban_set(["bad"], vocab, capitalization_variants=False)
        assert tokenize("bad", vocab) in off
        assert tokenize("Bad", vocab) not in off

    def test_variants_fold_from_any_input_case(self):
        vocab = load_vocab(["▁bad", "▁Bad", "▁BAD"])
        a = build_ban_set(["BAD"], vocab)
        b = build_ban_set(["bad"], vocab)
        assert set(a.sequences) >= {tokenize(s, vocab) for s in ("bad", "Bad", "BAD")}
        assert set(b.sequences) == set(a.sequences) | {tokenize("BAD".casefold(), vocab)}

    def test_punctuation_prefixes(self):
        vocab = load_vocab(["▁bad", "▁*bad", "▁(bad"])
        ban = build_ban_set(["bad"], vocab, capitalization_variants=False)
        assert (vocab.id_of("▁*bad"),) in ban
        assert (vocab.id_of("▁(bad"),) in ban
        assert len(PUNCT_PREFIXES) == 6

    def test_all_segmentations_closes_subword_evasion(self, corpus_vocab):
        canonical = tokenize("porqueria", corpus_vocab)
        assert canonical == (corpus_vocab.id_of("▁porqueria"),)
        split_a = tuple(corpus_vocab.id_of(s) for s in ("▁por", "qu", "eria"))
        split_b = tuple(corpus_vocab.id_of(s) for s in ("▁por", "quer", "ia"))

        narrow = build_ban_set(["porqueria"], corpus_vocab)
        assert canonical in narrow and split_a not in narrow

        wide = build_ban_set(["porqueria"], corpus_vocab, all_segmentations=True)
        for seq in (canonical, split_a, split_b):
            assert seq in wide

    def test_multiword_phrase_concatenates(self):
        vocab = load_vocab(["▁fil", "▁de", "▁puta"])
        ban = build_ban_set(["fil de puta"], vocab, capitalization_variants=False)
        phrase = tokenize("fil de puta", vocab)
        assert len(phrase) == 3 and phrase in ban

    def test_cap_keeps_canonical(self, corpus_vocab):
        ban = build_ban_set(["porqueria"], corpus_vocab,
                            capitalization_variants=False,
                            all_segmentations=True, cap=1)
        assert tokenize("porqueria", corpus_vocab) in ban

    def test_eos_bearing_sequences_dropped(self):
        vocab = load_vocab(["▁a"])
        eos_word = "a" + "</s>"
        assert vocab.eos_id in tokenize(eos_word, vocab)
        ban = build_ban_set([eos_word, "a"], vocab, capitalization_variants=False)
        assert (vocab.id_of("▁a"), vocab.eos_id) in ban.dropped
        assert all(vocab.eos_id not in seq for seq in ban.sequences)

    def test_all_candidates_eos_raises(self):
        vocab = load_vocab(["▁a"])
        with pytest.raises(EmptyBanSetError, match="EOS"):
            build_ban_set(["a</s>"], vocab, capitalization_variants=False)

    def test_no_words(self):
        vocab = load_vocab(["▁a"])
        with pytest.raises(EmptyBanSetError):
            build_ban_set([], vocab)
        with pytest.raises(EmptyBanSetError):
            build_ban_set(["", "   "], vocab)

    def test_wordlist_entries_round_trip(self, corpus_vocab, cat_wordlist):
        # every fixture wordlist entry must be bannable canonically
        ban = build_ban_set(sorted(cat_wordlist.entries), corpus_vocab)
        for entry in cat_wordlist.entries:
            assert tokenize(entry, corpus_vocab) in ban
