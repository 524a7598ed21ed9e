"""Subword vocabulary, greedy tokenization, and segmentation enumeration.

The tokenizer is deliberately simple: greedy longest match over a flat
vocabulary file, one designated boundary glyph on word-initial pieces.
No merge tables, no byte fallback. What matters downstream is not which
segmentation is canonical but that (a) tokenization is deterministic and
(b) every alternative segmentation of a word can be enumerated, because
banning only the canonical split of a toxic word is exactly the evasion
the ban-set builder needs to close.

All text is NFC-normalized before segmentation so that wordlist matching
and decoding agree on codepoints.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidTokenError, VocabFormatError

TokenSeq = tuple[int, ...]

BOS_SURFACE = "<s>"
EOS_SURFACE = "</s>"
UNK_SURFACE = "<unk>"
DEFAULT_MARKER = "▁"

# Hard ceiling on the number of segmentations enumerate_segmentations will
# materialize before giving up and returning only the canonical split.
_ENUM_BUDGET = 10_000


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


class Vocabulary:
    """Immutable subword inventory with dense ids and reserved specials.

    entries maps position in `surfaces` to token id, i.e. ids are dense
    0..N-1 by construction. BOS/EOS/UNK are always present; load_vocab
    appends them when the file does not define them.
    """

    __slots__ = ("surfaces", "marker", "bos_id", "eos_id", "unk_id",
                 "_by_surface", "_max_piece_len")

    def __init__(self, surfaces: Iterable[str], marker: str = DEFAULT_MARKER):
        surfaces = tuple(surfaces)
        if not surfaces:
            raise VocabFormatError("vocabulary has no entries")
        if not marker or any(ch.isspace() for ch in marker):
            raise VocabFormatError("boundary marker must be non-empty and non-whitespace")
        by_surface: dict[str, int] = {}
        for tid, surf in enumerate(surfaces):
            if not surf:
                raise VocabFormatError(f"empty surface at id {tid}")
            if any(ch.isspace() for ch in surf):
                raise VocabFormatError(f"surface contains whitespace at id {tid}: {surf!r}")
            if surf in by_surface:
                raise VocabFormatError(f"duplicate surface {surf!r}")
            by_surface[surf] = tid
        for special in (BOS_SURFACE, EOS_SURFACE, UNK_SURFACE):
            if special not in by_surface:
                raise VocabFormatError(f"missing reserved special {special!r}")
        self.surfaces = surfaces
        self.marker = marker
        self._by_surface = by_surface
        self._max_piece_len = max(len(s) for s in surfaces)
        self.bos_id = by_surface[BOS_SURFACE]
        self.eos_id = by_surface[EOS_SURFACE]
        self.unk_id = by_surface[UNK_SURFACE]

    def __len__(self) -> int:
        return len(self.surfaces)

    def __contains__(self, surface: str) -> bool:
        return surface in self._by_surface

    def id_of(self, surface: str) -> int:
        try:
            return self._by_surface[surface]
        except KeyError:
            raise InvalidTokenError(f"unknown surface {surface!r}") from None

    def surface_of(self, token_id: int) -> str:
        if not 0 <= token_id < len(self.surfaces):
            raise InvalidTokenError(f"token id {token_id} out of range 0..{len(self.surfaces) - 1}")
        return self.surfaces[token_id]

    def __repr__(self) -> str:  # pragma: no cover
        return f"Vocabulary(size={len(self.surfaces)}, marker={self.marker!r})"


def load_vocab(lines: Iterable[str]) -> Vocabulary:
    """Parse a vocabulary from text lines.

    Each entry line is `surface<TAB>id` or a bare surface (implicit id =
    entry index). Lines starting with `#` are comments; the very first
    line may be a `#boundary=<glyph>` header overriding the marker.
    Reserved specials are appended when absent. Duplicate surfaces or
    ids, non-dense ids, and empty files are format errors naming the
    offending line.
    """
    marker = DEFAULT_MARKER
    pairs: list[tuple[str, int]] = []
    seen_surfaces: dict[str, int] = {}
    seen_ids: dict[int, int] = {}
    entry_index = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if lineno == 1 and line.startswith("#boundary="):
            marker = line[len("#boundary="):]
            if not marker:
                raise VocabFormatError("line 1: empty boundary glyph in header")
            continue
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) == 1:
            surface, tid = _nfc(parts[0].strip()), entry_index
        elif len(parts) == 2:
            surface = _nfc(parts[0].strip())
            try:
                tid = int(parts[1].strip())
            except ValueError:
                raise VocabFormatError(f"line {lineno}: id is not an integer: {parts[1]!r}") from None
        else:
            raise VocabFormatError(f"line {lineno}: expected `surface<TAB>id` or `surface`")
        if not surface:
            raise VocabFormatError(f"line {lineno}: empty surface")
        if surface in seen_surfaces:
            raise VocabFormatError(
                f"line {lineno}: duplicate surface {surface!r} (first at line {seen_surfaces[surface]})")
        if tid in seen_ids:
            raise VocabFormatError(
                f"line {lineno}: duplicate id {tid} (first at line {seen_ids[tid]})")
        seen_surfaces[surface] = lineno
        seen_ids[tid] = lineno
        pairs.append((surface, tid))
        entry_index += 1
    if not pairs:
        raise VocabFormatError("vocabulary file has no entries")
    next_id = max(tid for _, tid in pairs) + 1
    for special in (BOS_SURFACE, EOS_SURFACE, UNK_SURFACE):
        if special not in seen_surfaces:
            pairs.append((special, next_id))
            next_id += 1
    ids = sorted(tid for _, tid in pairs)
    if ids != list(range(len(pairs))):
        raise VocabFormatError("token ids are not dense 0..N-1")
    surfaces = [""] * len(pairs)
    for surface, tid in pairs:
        surfaces[tid] = surface
    return Vocabulary(surfaces, marker=marker)


def _tokenize_word(word: str, vocab: Vocabulary) -> list[int]:
    # Greedy longest match over the marked form. A miss at position 0
    # swallows the synthetic marker together with the first character so
    # one unknown character costs one UNK, not two.
    s = vocab.marker + word
    by_surface = vocab._by_surface
    max_len = vocab._max_piece_len
    out: list[int] = []
    i = 0
    n = len(s)
    while i < n:
        matched = False
        for length in range(min(max_len, n - i), 0, -1):
            tid = by_surface.get(s[i:i + length])
            if tid is not None:
                out.append(tid)
                i += length
                matched = True
                break
        if not matched:
            out.append(vocab.unk_id)
            i += 2 if i == 0 else 1
    return out


def tokenize(text: str, vocab: Vocabulary) -> TokenSeq:
    """Greedy longest-match segmentation, word by word.

    Words are whitespace-delimited after NFC normalization; the first
    piece of each word carries the boundary marker. Characters covered
    by no vocabulary surface emit UNK. Total function; never produces
    BOS or EOS.
    """
    ids: list[int] = []
    for word in _nfc(text).split():
        ids.extend(_tokenize_word(word, vocab))
    return tuple(ids)


def detokenize(seq: Iterable[int], vocab: Vocabulary) -> str:
    """Invert tokenization: markers become spaces, leading space stripped.

    BOS and EOS ids are ignored so decoder hypotheses can be passed in
    whole. Any other out-of-range id raises InvalidTokenError.
    """
    pieces: list[str] = []
    for tid in seq:
        if tid == vocab.bos_id or tid == vocab.eos_id:
            continue
        pieces.append(vocab.surface_of(tid))
    text = "".join(pieces).replace(vocab.marker, " ")
    return text[1:] if text.startswith(" ") else text


@dataclass(frozen=True)
class Segmentations:
    """Result of enumerate_segmentations.

    sequences are in deterministic order: shortest first, then
    lexicographic by token id. truncated is set when the cap (or the
    internal enumeration budget) dropped entries; budget_exceeded marks
    the degenerate case where only the canonical split is returned.
    """

    word: str
    sequences: tuple[TokenSeq, ...]
    truncated: bool = False
    budget_exceeded: bool = False

    def __iter__(self):
        return iter(self.sequences)

    def __len__(self) -> int:
        return len(self.sequences)

    def __contains__(self, seq: TokenSeq) -> bool:
        return tuple(seq) in self.sequences


def enumerate_segmentations(word: str, vocab: Vocabulary, cap: int = 64) -> Segmentations:
    """Enumerate every segmentation of a single word admitted by the vocab.

    A segmentation splits the word at any subset of character positions;
    the first chunk is looked up with the boundary marker attached, the
    rest bare. The canonical tokenize() output is always included, even
    when it contains UNK and therefore lies outside the split space.
    Output is truncated to `cap` entries (canonical kept); if the split
    count exceeds an internal budget only the canonical split is
    returned, flagged.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    word = _nfc(word)
    if any(ch.isspace() for ch in word):
        raise ValueError("word must not contain whitespace")
    canonical = tuple(_tokenize_word(word, vocab)) if word else ()
    if not word:
        return Segmentations(word, ((),))

    n = len(word)
    by_surface = vocab._by_surface
    max_len = vocab._max_piece_len

    # ways[i] counts segmentations of word[i:]; exact big-int arithmetic so
    # the budget check cannot overflow.
    ways = [0] * (n + 1)
    ways[n] = 1
    for i in range(n - 1, -1, -1):
        limit = min(max_len, n - i)
        total = 0
        for j in range(i + 1, i + limit + 1):
            piece = word[i:j] if i > 0 else vocab.marker + word[:j]
            if piece in by_surface:
                total += ways[j]
        ways[i] = total

    if ways[0] > _ENUM_BUDGET:
        return Segmentations(word, (canonical,), truncated=True, budget_exceeded=True)

    found: set[TokenSeq] = set()
    stack: list[int] = []

    def walk(i: int) -> None:
        if i == n:
            seq = tuple(stack)
            if detokenize(seq, vocab) == word:
                found.add(seq)
            return
        limit = min(max_len, n - i)
        for j in range(i + 1, i + limit + 1):
            piece = word[i:j] if i > 0 else vocab.marker + word[:j]
            tid = by_surface.get(piece)
            if tid is not None:
                stack.append(tid)
                walk(j)
                stack.pop()

    walk(0)
    found.add(canonical)
    ordered = sorted(found, key=lambda s: (len(s), s))
    truncated = len(ordered) > cap
    if truncated:
        ordered = ordered[:cap]
        if canonical not in ordered:
            ordered[-1] = canonical
    return Segmentations(word, tuple(ordered), truncated=truncated)
