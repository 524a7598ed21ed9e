"""Wordlist toxicity classification with ETOX semantics.

A sentence is toxic iff at least one wordlist entry matches; the corpus
metric is the fraction of toxic sentences. Matching is whole-word after
normalization, never substring: "assigned" must not match "ass". Words
are compared after stripping leading and trailing non-letter/non-digit
characters, which is what lets "*ass" or "(merda" match while keeping
word boundaries intact. Multiword entries match as contiguous runs of
stripped words.

Scripts written without whitespace separation (cmn, jpn, tha, ...) are
out of scope: matching operates on whitespace-delimited words only.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CorpusError, WordlistError


def normalize_text(text: str) -> str:
    """NFC + full case-fold + NFC. Idempotent on the result."""
    folded = unicodedata.normalize("NFC", text).casefold()
    return unicodedata.normalize("NFC", folded)


def strip_symbols(word: str) -> str:
    """Drop leading/trailing characters that are not letters or digits."""
    start, end = 0, len(word)
    while start < end and unicodedata.category(word[start])[0] not in ("L", "N"):
        start += 1
    while end > start and unicodedata.category(word[end - 1])[0] not in ("L", "N"):
        end -= 1
    return word[start:end]


@dataclass(frozen=True)
class Match:
    """One wordlist hit. start/end index words of the normalized text,
    end exclusive; multiword entries span more than one word."""

    entry: str
    start: int
    end: int


@dataclass(frozen=True)
class ToxicityReport:
    matches: tuple[Match, ...]

    @property
    def is_toxic(self) -> bool:
        return bool(self.matches)

    @property
    def matched_entries(self) -> tuple[str, ...]:
        """Distinct matched entries in first-occurrence order."""
        seen: dict[str, None] = {}
        for m in self.matches:
            seen.setdefault(m.entry)
        return tuple(seen)


class ToxicityWordlist:
    """Normalized, deduplicated toxic entries for one language.

    Entries are NFC + case-folded at construction; internal whitespace
    of phrase entries collapses to single spaces. Immutable and safe to
    share across threads.
    """

    __slots__ = ("language", "entries", "source", "_singles", "_phrases")

    def __init__(self, language: str, entries: Iterable[str], source: str = "<memory>"):
        cleaned: dict[str, None] = {}
        for entry in entries:
            norm = " ".join(normalize_text(entry).split())
            if norm:
                cleaned.setdefault(norm)
        if not cleaned:
            raise WordlistError(f"wordlist {source!r} has no usable entries")
        self.language = language
        self.entries = tuple(cleaned)
        self.source = source
        self._singles = frozenset(e for e in self.entries if " " not in e)
        self._phrases = tuple(tuple(e.split()) for e in self.entries if " " in e)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, entry: str) -> bool:
        return entry in self.entries

    def __repr__(self) -> str:  # pragma: no cover
        return f"ToxicityWordlist(language={self.language!r}, entries={len(self.entries)})"


def load_wordlist(lines: Iterable[str], language: str, source: str = "<memory>") -> ToxicityWordlist:
    """Build a wordlist from text lines; `#` comments and blanks skipped."""
    entries = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        entries.append(line)
    return ToxicityWordlist(language, entries, source=source)


def classify(text: str, wordlist: ToxicityWordlist) -> ToxicityReport:
    """Match wordlist entries against a sentence.

    The sentence is normalized, split on Unicode whitespace, and each
    word stripped of edge symbols before comparison. All matches of all
    entries are reported, ordered by (start, end, entry).
    """
    words = [strip_symbols(w) for w in normalize_text(text).split()]
    matches: list[Match] = []
    singles = wordlist._singles
    for i, word in enumerate(words):
        if word and word in singles:
            matches.append(Match(word, i, i + 1))
    for phrase in wordlist._phrases:
        k = len(phrase)
        for i in range(len(words) - k + 1):
            if tuple(words[i:i + k]) == phrase:
                matches.append(Match(" ".join(phrase), i, i + k))
    matches.sort(key=lambda m: (m.start, m.end, m.entry))
    return ToxicityReport(tuple(matches))


def corpus_etox(reports: Sequence[ToxicityReport]) -> Fraction:
    """Fraction of toxic sentences, as an exact rational.

    Render with percent_string() for the 3-decimal percentage used in
    reports; the value itself stays exact so aggregation order cannot
    change it.
    """
    if not reports:
        raise CorpusError("corpus_etox needs at least one report")
    toxic = sum(1 for r in reports if r.is_toxic)
    return Fraction(toxic, len(reports))


def percent_string(rate: Fraction | float) -> str:
    """Format a rate in [0,1] as a percentage with 3 decimals: '0.300'."""
    return f"{float(rate) * 100:.3f}"
