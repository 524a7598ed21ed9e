"""Beam search over a scorer, plain and with banned-sequence filtering.

Search is synchronous: every live hypothesis has the same length, so one
kernel call per step scores the whole beam. Candidates that end in EOS
retire to a best-so-far pool; the rest refill the beam in candidate
order. With a ban set, each hypothesis carries the trie nodes matching
its current suffix, and the kernel masks any token that would complete a
banned sequence before selection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import beam_step
from .bans import BanSet, build_ban_set
from .errors import BanSetError, DecodeExhaustedError
from .model import ScorerInterface
from .vocab import TokenSeq

__all__ = [
    "BanSet",
    "DecodeParams",
    "Hypothesis",
    "beam_search",
    "beam_search_filtered",
    "build_ban_set",
]


@dataclass(frozen=True)
class DecodeParams:
    """Knobs shared by both search entry points.

    max_length bounds the total token count including BOS and EOS; None
    resolves to 2 * len(source) + 16. length_penalty rescales scores to
    score / generated_length ** alpha at comparison time only; 0.0 (the
    default) compares raw log-prob sums.
    """

    beam_size: int = 5
    max_length: int | None = None
    length_penalty: float = 0.0

    def __post_init__(self) -> None:
        if self.beam_size < 1:
            raise ValueError(f"beam_size must be >= 1, got {self.beam_size}")
        if self.max_length is not None and self.max_length < 2:
            raise ValueError(f"max_length must allow BOS and EOS, got {self.max_length}")
        if not (self.length_penalty >= 0.0):
            raise ValueError(f"length_penalty must be >= 0, got {self.length_penalty}")

    def resolve_max_length(self, source_len: int) -> int:
        if self.max_length is not None:
            return self.max_length
        return 2 * source_len + 16


@dataclass(frozen=True)
class Hypothesis:
    """A finished (or best-effort truncated) decode.

    tokens always starts with BOS; when finished is True it ends with
    EOS and score is the full log-probability. finished False means the
    search hit max_length with no completable hypothesis, and tokens is
    the best prefix found (truncated output).
    """

    tokens: TokenSeq
    score: float
    finished: bool


def beam_search(model: ScorerInterface, source: TokenSeq,
                params: DecodeParams | None = None) -> Hypothesis:
    """Decode source without constraints."""
    return _search(model, source, None, params or DecodeParams())


def beam_search_filtered(model: ScorerInterface, source: TokenSeq, ban_set: BanSet,
                         params: DecodeParams | None = None) -> Hypothesis:
    """Decode source while refusing to emit any sequence in ban_set.

    Raises DecodeExhaustedError if masking eliminates every candidate
    before anything finished.
    """
    if ban_set.child_tokens.size and int(ban_set.child_tokens.max()) >= model.vocab_size:
        raise BanSetError("ban set contains token ids outside the model vocabulary")
    return _search(model, source, ban_set, params or DecodeParams())


def _rank_key(score: float, tokens: TokenSeq, alpha: float):
    """Comparison key: higher rank, then shorter, then smaller token ids."""
    if alpha:
        rank = score / (max(1, len(tokens) - 1) ** alpha)
    else:
        rank = score
    return (-rank, len(tokens), tokens)


def _take_better(best, tokens: TokenSeq, score: float, alpha: float):
    key = _rank_key(score, tokens, alpha)
    if best is None or key < best[0]:
        return (key, tokens, score)
    return best


def _search(model: ScorerInterface, source: TokenSeq, ban: BanSet | None,
            params: DecodeParams) -> Hypothesis:
    source = tuple(source)
    max_length = params.resolve_max_length(len(source))
    alpha = params.length_penalty
    bos, eos, vocab = model.bos_id, model.eos_id, model.vocab_size
    k = 2 * params.beam_size

    live_tokens: list[TokenSeq] = [(bos,)]
    live_scores = np.zeros(1, dtype=np.float64)
    live_active: list[tuple[int, ...]] = [()]
    best_finished = None
    best_unfinished = None

    while live_tokens:
        matrix = np.stack([np.asarray(model.score(source, t), dtype=np.float64)
                           for t in live_tokens])
        if matrix.shape != (len(live_tokens), vocab):
            raise ValueError(f"scorer returned shape {matrix.shape}, "
                             f"expected {(len(live_tokens), vocab)}")

        if len(live_tokens[0]) + 1 == max_length:
            # Final slot: only EOS may be appended.
            for i, tokens in enumerate(live_tokens):
                eos_banned = ban is not None and eos in ban.banned_tokens(live_active[i])
                if not eos_banned and np.isfinite(matrix[i, eos]):
                    score = float(live_scores[i] + matrix[i, eos])
                    best_finished = _take_better(best_finished, tokens + (eos,), score, alpha)
                else:
                    best_unfinished = _take_better(best_unfinished, tokens,
                                                   float(live_scores[i]), alpha)
            break

        if ban is not None:
            offsets = np.zeros(len(live_tokens) + 1, dtype=np.int32)
            flat: list[int] = []
            for i, active in enumerate(live_active):
                flat.extend(active)
                offsets[i + 1] = len(flat)
            hyp, tok, score = beam_step(matrix, live_scores, k,
                                        ban.child_offsets, ban.child_tokens,
                                        ban.child_terminal, offsets,
                                        np.asarray(flat, dtype=np.int32))
        else:
            hyp, tok, score = beam_step(matrix, live_scores, k)

        if hyp.size == 0:
            if best_finished is None:
                raise DecodeExhaustedError(
                    "banned-sequence masking removed every candidate at length "
                    f"{len(live_tokens[0])} and nothing has finished")
            break

        next_tokens: list[TokenSeq] = []
        next_scores: list[float] = []
        next_active: list[tuple[int, ...]] = []
        for j in range(hyp.size):
            i, token = int(hyp[j]), int(tok[j])
            extended = live_tokens[i] + (token,)
            if token == eos:
                best_finished = _take_better(best_finished, extended, float(score[j]), alpha)
            elif len(next_tokens) < params.beam_size:
                next_tokens.append(extended)
                next_scores.append(float(score[j]))
                if ban is not None:
                    next_active.append(ban.advance(live_active[i], token))

        live_tokens = next_tokens
        live_scores = np.asarray(next_scores, dtype=np.float64)
        live_active = next_active if ban is not None else [()] * len(next_tokens)

        # With raw scores every extension is monotonically worse, so once
        # the pool beats the whole beam nothing live can overtake it.
        if (best_finished is not None and alpha == 0.0 and live_tokens
                and float(live_scores.max()) <= best_finished[2]):
            break

    if best_finished is not None:
        _, tokens, score = best_finished
        return Hypothesis(tokens=tokens, score=score, finished=True)
    if best_unfinished is not None:
        _, tokens, score = best_unfinished
        return Hypothesis(tokens=tokens, score=score, finished=False)
    raise DecodeExhaustedError("search ended with no candidates at all")
