from fractions import Fraction

import pytest

from mintox import (CorpusError, WordlistError, classify, corpus_etox,
                    load_wordlist, normalize_text, percent_string,
                    strip_symbols)


def wl(*entries):
    return load_wordlist(list(entries), language="tst")


class TestNormalization:
    def test_casefold(self):
        assert normalize_text("MERDA") == "merda"
        assert normalize_text("Estúpid") == "estúpid"

    def test_nfc_composition(self):
        assert normalize_text("café") == "café"

    def test_casefold_expansion_then_recompose(self):
        # ß casefolds to ss; the result must still be NFC.
        assert normalize_text("STRASSE") == "strasse"
        assert normalize_text("straße") == "strasse"


class TestStripSymbols:
    def test_leading_punctuation_stripped(self):
        assert strip_symbols("*idiota") == "idiota"
        assert strip_symbols("¿idiota?") == "idiota"

    def test_trailing_punctuation_stripped(self):
        assert strip_symbols("idiota.") == "idiota"
        assert strip_symbols('"idiota",') == "idiota"

    def test_interior_symbols_kept(self):
        assert strip_symbols("id*ota") == "id*ota"

    def test_digits_count_as_word_characters(self):
        assert strip_symbols("(3.5)") == "3.5"

    def test_all_symbols_becomes_empty(self):
        assert strip_symbols("***") == ""


class TestClassify:
    def test_plain_match_with_word_span(self):
        report = classify("Ets un idiota.", wl("idiota"))
        assert report.is_toxic
        assert len(report.matches) == 1
        match = report.matches[0]
        assert (match.entry, match.start, match.end) == ("idiota", 2, 3)

    def test_symbol_wrapped_word_matches(self):
        report = classify("Ets un *idiota.", wl("idiota"))
        assert report.is_toxic
        assert report.matches[0].start == 2

    def test_case_insensitive(self):
        assert classify("IDIOTA", wl("idiota")).is_toxic
        assert classify("idiota", wl("IDIOTA")).is_toxic

    def test_whole_word_only(self):
        assert not classify("assigned to the task", wl("ass")).is_toxic
        assert classify("he is an ass", wl("ass")).is_toxic
        assert classify("*ass", wl("ass")).is_toxic

    def test_multiword_phrase_contiguous(self):
        report = classify("ets un fill de puta malparit", wl("fill de puta"))
        assert report.is_toxic
        match = report.matches[0]
        assert (match.start, match.end) == (2, 5)

    def test_multiword_phrase_not_contiguous(self):
        assert not classify("fill bo de puta mare", wl("fill de puta")).is_toxic

    def test_phrase_matches_across_punctuation_wrapping(self):
        assert classify('va dir "fill de puta!"', wl("fill de puta")).is_toxic

    def test_matches_sorted_by_position(self):
        report = classify("merda i idiota i merda", wl("idiota", "merda"))
        spans = [(m.start, m.entry) for m in report.matches]
        assert spans == [(0, "merda"), (2, "idiota"), (4, "merda")]

    def test_matched_entries_deduplicated_in_order(self):
        report = classify("merda idiota merda", wl("idiota", "merda"))
        assert report.matched_entries == ("merda", "idiota")

    def test_clean_text(self):
        report = classify("una cosa bonica", wl("idiota"))
        assert not report.is_toxic
        assert report.matches == ()

    def test_empty_text(self):
        assert not classify("", wl("idiota")).is_toxic


class TestLoadWordlist:
    def test_entries_casefolded(self):
        wordlist = load_wordlist(["idiota", "MERDA"], language="cat")
        assert set(wordlist.entries) == {"idiota", "merda"}

    def test_duplicates_collapse(self):
        wordlist = load_wordlist(["# header", "idiota", "idiota"], language="cat")
        assert wordlist.entries == ("idiota",)

    def test_comments_and_blanks_skipped(self):
        wordlist = load_wordlist(["# x", "", "idiota", "  "], language="cat")
        assert wordlist.entries == ("idiota",)

    def test_internal_whitespace_collapsed(self):
        wordlist = load_wordlist(["fill   de  puta"], language="cat")
        assert wordlist.entries == ("fill de puta",)

    def test_empty_list_rejected(self):
        with pytest.raises(WordlistError):
            load_wordlist(["# only a comment"], language="cat")

    def test_fixture_has_fourteen_entries(self, cat_wordlist):
        assert len(cat_wordlist) == 14
        assert "porqueria" in cat_wordlist
        assert "cabró" in cat_wordlist
        assert cat_wordlist.language == "cat"


class TestCorpusEtox:
    def test_exact_fraction(self):
        reports = [classify(t, wl("merda")) for t in
                   ["merda", "net", "clar", "bo"]]
        rate = corpus_etox(reports)
        assert rate == Fraction(1, 4)
        assert isinstance(rate, Fraction)

    def test_thirds_stay_exact(self):
        reports = [classify(t, wl("merda")) for t in ["merda", "net", "bo"]]
        assert corpus_etox(reports) == Fraction(1, 3)

    def test_all_clean_is_zero(self):
        reports = [classify(t, wl("merda")) for t in ["net", "clar"]]
        assert corpus_etox(reports) == Fraction(0)

    def test_empty_corpus_rejected(self):
        with pytest.raises(CorpusError):
            corpus_etox([])


class TestPercentString:
    def test_three_decimals(self):
        assert percent_string(Fraction(3, 1000)) == "0.300"
        assert percent_string(Fraction(1, 4)) == "25.000"
        assert percent_string(0.0) == "0.000"

    def test_rounding(self):
        assert percent_string(Fraction(1, 3)) == "33.333"
