"""Corpus BLEU with mteval-13a tokenization and exponential smoothing.

Matches the usual scorer signature "nrefs:1|case:mixed|eff:no|tok:13a|
smooth:exp": single reference, case kept, no effective-order reduction,
and a smoothing denominator that doubles at every zero numerator.
Precisions are stored as fractions in [0, 1]; the score applies the
x100 once at the end, which is numerically the same as percent-scale
precisions because the hundred factors out of the geometric mean.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import MetricError

__all__ = ["BleuScore", "bleu", "tokenize_13a", "tokenize_char"]

_MAX_ORDER = 4
_LOG_ZERO = -9999999999

# Ranges cover ASCII punctuation except period, comma and dash; period
# and comma stay attached between digits, dash splits after a digit.
_PAD_SPECIAL = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
_SEP_BEFORE = re.compile(r"([^0-9])([\.,])")
_SEP_AFTER = re.compile(r"([\.,])([^0-9])")
_DIGIT_DASH = re.compile(r"([0-9])(-)")


def tokenize_13a(text: str) -> list[str]:
    """mteval-v13a word tokenization, case preserved."""
    if "&" in text:
        text = (text.replace("&quot;", '"').replace("&amp;", "&")
                    .replace("&lt;", "<").replace("&gt;", ">"))
    text = f" {text} "
    text = _PAD_SPECIAL.sub(r" \1 ", text)
    text = _SEP_BEFORE.sub(r"\1 \2 ", text)
    text = _SEP_AFTER.sub(r" \1 \2", text)
    text = _DIGIT_DASH.sub(r"\1 \2 ", text)
    return text.split()


def tokenize_char(text: str) -> list[str]:
    """One token per Unicode scalar, whitespace dropped."""
    return [ch for ch in text if not ch.isspace()]


_TOKENIZERS = {"13a": tokenize_13a, "char": tokenize_char}


@dataclass(frozen=True)
class BleuScore:
    """Corpus BLEU-4 with its components.

    precisions are clipped n-gram fractions in [0, 1] for orders 1..4.
    Invariant (tested): score equals brevity_penalty times the geometric
    mean of the precisions times 100, within 1e-9. brevity_penalty is
    0.0 only in the degenerate all-empty-hypotheses case.
    """

    score: float
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    hyp_length: int
    ref_length: int
    signature: str

    def __str__(self) -> str:  # pragma: no cover
        return f"BLEU = {self.score:.2f} ({self.signature})"


def _ngram_counts(tokens: list[str], order: int) -> Counter:
    return Counter(tuple(tokens[i:i + order])
                   for i in range(len(tokens) - order + 1))


def _my_log(value: float) -> float:
    if value == 0.0:
        return _LOG_ZERO
    return math.log(value)


def bleu(hypotheses: Sequence[str], references: Sequence[str],
         tokenizer: str = "13a") -> BleuScore:
    """Corpus BLEU of hypotheses against single references.

    Clipped n-gram counts are pooled over the whole corpus before the
    precision quotients are taken. Whenever an order's numerator is
    zero with a positive denominator, the smoothing denominator doubles
    and that precision becomes 1 / (smoothing * denominator). All four
    orders always contribute to the geometric mean.
    """
    if len(hypotheses) != len(references):
        raise MetricError(f"hypothesis/reference count mismatch: "
                          f"{len(hypotheses)} vs {len(references)}")
    if not hypotheses:
        raise MetricError("cannot score an empty corpus")
    try:
        tok = _TOKENIZERS[tokenizer]
    except KeyError:
        raise MetricError(f"unknown tokenizer {tokenizer!r}, "
                          f"expected one of {sorted(_TOKENIZERS)}") from None

    correct = [0] * _MAX_ORDER
    total = [0] * _MAX_ORDER
    hyp_length = 0
    ref_length = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = tok(hyp)
        ref_tokens = tok(ref)
        hyp_length += len(hyp_tokens)
        ref_length += len(ref_tokens)
        for order in range(1, _MAX_ORDER + 1):
            if len(hyp_tokens) < order:
                break
            total[order - 1] += len(hyp_tokens) - order + 1
            ref_counts = _ngram_counts(ref_tokens, order)
            for gram, count in _ngram_counts(hyp_tokens, order).items():
                correct[order - 1] += min(count, ref_counts[gram])

    if hyp_length == 0:
        brevity_penalty = 0.0
    elif hyp_length < ref_length:
        brevity_penalty = math.exp(1.0 - ref_length / hyp_length)
    else:
        brevity_penalty = 1.0

    precisions = [0.0] * _MAX_ORDER
    smooth = 1.0
    for order in range(1, _MAX_ORDER + 1):
        if total[order - 1] == 0:
            break
        if correct[order - 1] == 0:
            smooth *= 2.0
            precisions[order - 1] = 1.0 / (smooth * total[order - 1])
        else:
            precisions[order - 1] = correct[order - 1] / total[order - 1]

    if hyp_length == 0:
        score = 0.0
    else:
        score = (brevity_penalty
                 * math.exp(sum(_my_log(p) for p in precisions) / _MAX_ORDER)
                 * 100.0)

    return BleuScore(score=score,
                     precisions=(precisions[0], precisions[1],
                                 precisions[2], precisions[3]),
                     brevity_penalty=brevity_penalty,
                     hyp_length=hyp_length,
                     ref_length=ref_length,
                     signature=f"nrefs:1|case:mixed|eff:no|tok:{tokenizer}|smooth:exp")
