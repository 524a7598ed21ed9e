"""Brute-force decoder used as the search oracle.

Enumerates every complete sequence (BOS prefix, EOS end, total length
up to max_length) by depth-first walk, discards sequences whose
generated part contains a banned subsequence (naive containment check,
no trie), and returns the best by score, then shorter length, then
lexicographically smaller token ids. Scores accumulate parent + step in
the same order as the search kernel so equality is bit-exact.

Only the public scorer interface is used; nothing is shared with the
package's decoder.
"""

from __future__ import annotations


def _contains_banned(generated: tuple[int, ...], banned) -> bool:
    for ban in banned:
        width = len(ban)
        if width == 0:
            continue
        for i in range(len(generated) - width + 1):
            if generated[i:i + width] == ban:
                return True
    return False


def _rank(score: float, tokens: tuple[int, ...], alpha: float):
    if alpha:
        return score / (max(1, len(tokens) - 1) ** alpha)
    return score


def exhaustive_decode(model, source, max_length, banned=(), length_penalty=0.0):
    """Return (tokens, score) of the constrained argmax, or None.

    banned is an iterable of token tuples; matching runs over the
    generated tokens only (EOS included, the leading BOS excluded),
    mirroring how prefix tracking sees the sequence.
    """
    import math

    banned = tuple(tuple(b) for b in banned)
    bos, eos = model.bos_id, model.eos_id
    best = None  # (key, tokens, score)

    def visit(prefix: tuple[int, ...], score: float) -> None:
        nonlocal best
        dist = model.score(source, prefix)
        can_extend = len(prefix) + 1 < max_length
        for token in range(model.vocab_size):
            logp = float(dist[token])
            if math.isinf(logp) or math.isnan(logp):
                continue
            child_score = score + logp
            generated = prefix[1:] + (token,)
            if _contains_banned(generated, banned):
                continue
            if token == eos:
                tokens = prefix + (token,)
                key = (-_rank(child_score, tokens, length_penalty),
                       len(tokens), tokens)
                if best is None or key < best[0]:
                    best = (key, tokens, child_score)
            elif can_extend:
                visit(prefix + (token,), child_score)

    visit((bos,), 0.0)
    if best is None:
        return None
    return best[1], best[2]
