"""Banned token sequences as a trie, and construction from surface words.

The decoder tracks, per live hypothesis, the set of trie nodes matching
suffixes of the hypothesis (the root is implicitly always active). A
candidate token is masked iff stepping from any active node reaches a
terminal, i.e. iff appending it would complete some banned sequence as a
contiguous subsequence. That is the entire BeamFiltering mechanism; the
trie exists so single-token and multi-token bans, overlapping matches
included, are all the same operation.

The trie is stored flat (CSR arrays) so both the compiled kernel and the
numpy fallback can walk it without touching Python objects.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from .errors import BanSetError, EmptyBanSetError
from .vocab import Segmentations, TokenSeq, Vocabulary, enumerate_segmentations, tokenize

# Leading symbols appended to every variant, mirroring the wordlist
# convention of detecting symbol-wrapped words ("ass" and "*ass").
PUNCT_PREFIXES = ("*", '"', "'", "(", "¡", "¿")


class BanSet:
    """Immutable trie over deduplicated banned token sequences.

    Node 0 is the root. Children of node n live in the half-open range
    child_offsets[n]:child_offsets[n+1] of the child_* arrays, sorted by
    token id. A terminal child completes a banned sequence. dropped
    records sequences discarded at build time for containing EOS.
    """

    __slots__ = ("sequences", "dropped", "max_depth", "child_offsets",
                 "child_tokens", "child_nodes", "child_terminal")

    def __init__(self, sequences: Iterable[TokenSeq],
                 dropped: Iterable[TokenSeq] = (), eos_id: int | None = None):
        deduped = sorted({tuple(seq) for seq in sequences}, key=lambda s: (len(s), s))
        if not deduped:
            raise EmptyBanSetError("no banned sequences")
        for seq in deduped:
            if len(seq) == 0:
                raise BanSetError("banned sequence must not be empty")
            if any(not isinstance(t, int) or t < 0 for t in seq):
                raise BanSetError(f"banned sequence has invalid token ids: {seq}")
            if eos_id is not None and eos_id in seq:
                raise BanSetError(f"banned sequence contains EOS: {seq}")
        self.sequences: tuple[TokenSeq, ...] = tuple(deduped)
        self.dropped: tuple[TokenSeq, ...] = tuple(tuple(s) for s in dropped)
        self.max_depth = max(len(s) for s in deduped)

        children: list[dict[int, int]] = [{}]
        terminal: list[bool] = [False]
        for seq in deduped:
            node = 0
            for tok in seq:
                nxt = children[node].get(tok)
                if nxt is None:
                    nxt = len(children)
                    children[node][tok] = nxt
                    children.append({})
                    terminal.append(False)
                node = nxt
            terminal[node] = True

        offsets = np.zeros(len(children) + 1, dtype=np.int32)
        toks: list[int] = []
        nodes: list[int] = []
        terms: list[int] = []
        for n, kids in enumerate(children):
            for tok in sorted(kids):
                child = kids[tok]
                toks.append(tok)
                nodes.append(child)
                terms.append(1 if terminal[child] else 0)
            offsets[n + 1] = len(toks)
        self.child_offsets = offsets
        self.child_tokens = np.asarray(toks, dtype=np.int32)
        self.child_nodes = np.asarray(nodes, dtype=np.int32)
        self.child_terminal = np.asarray(terms, dtype=np.uint8)

    def __len__(self) -> int:
        return len(self.sequences)

    def __contains__(self, seq: TokenSeq) -> bool:
        return tuple(seq) in set(self.sequences)

    @property
    def contains_empty(self) -> bool:
        """Always False; empty sequences are rejected at construction."""
        return False

    def banned_tokens(self, active: Sequence[int]) -> list[int]:
        """Tokens that would complete a banned sequence from this state."""
        banned: list[int] = []
        offsets, toks, terms = self.child_offsets, self.child_tokens, self.child_terminal
        for node in itertools.chain((0,), active):
            for k in range(offsets[node], offsets[node + 1]):
                if terms[k]:
                    banned.append(int(toks[k]))
        return banned

    def advance(self, active: Sequence[int], token: int) -> tuple[int, ...]:
        """Active node set after appending `token` to the hypothesis."""
        offsets, toks, nodes = self.child_offsets, self.child_tokens, self.child_nodes
        nxt: set[int] = set()
        for node in itertools.chain((0,), active):
            for k in range(offsets[node], offsets[node + 1]):
                if toks[k] == token:
                    nxt.add(int(nodes[k]))
                    break
        return tuple(sorted(nxt))

    def __repr__(self) -> str:  # pragma: no cover
        return f"BanSet(sequences={len(self.sequences)}, max_depth={self.max_depth})"


def _surface_variants(word: str, capitalization_variants: bool) -> list[str]:
    base = [word]
    if capitalization_variants:
        folded = word.casefold()
        for variant in (folded, folded.capitalize(), folded.upper()):
            if variant not in base:
                base.append(variant)
    out = list(base)
    for prefix in PUNCT_PREFIXES:
        out.extend(prefix + v for v in base)
    return out


def build_ban_set(words: Sequence[str], vocab: Vocabulary, *,
                  capitalization_variants: bool = True,
                  all_segmentations: bool = False,
                  cap: int = 64) -> BanSet:
    """Expand surface words into the trie of banned token sequences.

    Every word yields its as-given form plus, when enabled, case-folded,
    first-letter-capitalized, and all-caps variants; each of those also
    gets the fixed punctuation prefixes. Variants are tokenized
    canonically; with all_segmentations on, every segmentation up to
    `cap` per word is banned too, which closes the evasion where a
    banned word re-emerges under a different subword split. Multiword
    phrases tokenize per word and concatenate (cross product of per-word
    segmentations, capped). Sequences containing EOS cannot be banned;
    they are dropped and recorded on the result.
    """
    stripped = [w.strip() for w in words if w and w.strip()]
    if not stripped:
        raise EmptyBanSetError("no words to ban")
    sequences: set[TokenSeq] = set()
    dropped: list[TokenSeq] = []
    for word in stripped:
        for variant in _surface_variants(word, capitalization_variants):
            per_word: list[tuple[TokenSeq, ...]] = []
            for piece in variant.split():
                if all_segmentations:
                    segs: Segmentations = enumerate_segmentations(piece, vocab, cap=cap)
                    per_word.append(segs.sequences)
                else:
                    per_word.append((tokenize(piece, vocab),))
            for combo in itertools.islice(itertools.product(*per_word), cap):
                seq = tuple(itertools.chain.from_iterable(combo))
                if not seq:
                    continue
                if vocab.eos_id in seq:
                    dropped.append(seq)
                else:
                    sequences.add(seq)
    if not sequences:
        raise EmptyBanSetError(
            "all ban candidates were empty or contained EOS after tokenization")
    return BanSet(sequences, dropped=dropped)
