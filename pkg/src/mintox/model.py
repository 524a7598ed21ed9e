"""Scoring interface for the decoder, plus a deterministic toy model.

Any translation model plugs into the decoder through ScorerInterface:
given source tokens and a BOS-initiated prefix, return a proper
next-token log-distribution (logsumexp == 0 within 1e-6). The toy model
implements it from a hand-written rule table so tests and demos get
exact, enumerable distributions without any neural inference.

Rule semantics: a rule (src_words, tgt_token, weight, context) adds
`weight` to the target token's base weight whenever src_words occurs as
a contiguous window of the detokenized source AND the prefix ends with
the context token surfaces. Probabilities are the normalized weights
raised to 1/temperature. The base weight keeps every token, EOS
included, strictly above zero probability, so a decode can always
finish no matter what is banned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Protocol, runtime_checkable

import numpy as np

from .errors import RuleError
from .vocab import TokenSeq, Vocabulary, detokenize


@runtime_checkable
class ScorerInterface(Protocol):
    bos_id: int
    eos_id: int
    vocab_size: int

    def score(self, source: TokenSeq, prefix: TokenSeq) -> np.ndarray:
        """Log-probabilities over the next token, shape (vocab_size,)."""
        ...


@dataclass(frozen=True)
class Rule:
    """One weight override.

    src_words: lowercase source words that must appear contiguously in
    the detokenized source; empty tuple matches any source (the `*`
    wildcard in rule files). context: token surfaces the prefix must end
    with; empty means unconditional. Use the BOS surface `<s>` as the
    context to fire only at the start of generation.
    """

    src_words: tuple[str, ...]
    tgt_surface: str
    weight: float
    context: tuple[str, ...] = ()


def parse_rules(lines: Iterable[str]) -> list[Rule]:
    """Parse rule lines: `src<TAB>tgt_token<TAB>weight[<TAB>context]`.

    src is `*` or space-separated source words; context, when present,
    is space-separated token surfaces. `#` comments and blanks skipped.
    """
    rules: list[Rule] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) not in (3, 4):
            raise RuleError(f"line {lineno}: expected 3 or 4 tab-separated fields")
        src_field, tgt_surface, weight_field = parts[0].strip(), parts[1].strip(), parts[2].strip()
        try:
            weight = float(weight_field)
        except ValueError:
            raise RuleError(f"line {lineno}: weight is not a number: {weight_field!r}") from None
        src_words = () if src_field == "*" else tuple(src_field.lower().split())
        context = tuple(parts[3].split()) if len(parts) == 4 else ()
        if not tgt_surface:
            raise RuleError(f"line {lineno}: empty target token")
        rules.append(Rule(src_words, tgt_surface, weight, context))
    return rules


@dataclass(frozen=True)
class _CompiledRule:
    src_words: tuple[str, ...]
    tgt_id: int
    weight: float
    context_ids: TokenSeq


class ToyModel:
    """Rule-table scorer. Immutable after construction; score is pure.

    Distributions depend only on which rules fire, i.e. on the source
    and on the prefix suffix up to the longest context among the rules
    that source activates, so results are memoized per (source, suffix).
    """

    def __init__(self, vocab: Vocabulary, rules: Iterable[Rule],
                 temperature: float = 1.0, base_weight: float = 1.0):
        if not temperature > 0:
            raise RuleError(f"temperature must be positive, got {temperature}")
        if not base_weight > 0:
            raise RuleError(f"base weight must be positive, got {base_weight}")
        self.vocab = vocab
        self.temperature = float(temperature)
        self.base_weight = float(base_weight)
        self.bos_id = vocab.bos_id
        self.eos_id = vocab.eos_id
        self.vocab_size = len(vocab)
        compiled = []
        for rule in rules:
            if not math.isfinite(rule.weight) or rule.weight <= 0:
                raise RuleError(f"rule weight must be finite and positive: {rule}")
            try:
                tgt_id = vocab.id_of(rule.tgt_surface)
                context_ids = tuple(vocab.id_of(s) for s in rule.context)
            except Exception:
                raise RuleError(f"rule references unknown token: {rule}") from None
            compiled.append(_CompiledRule(rule.src_words, tgt_id, rule.weight, context_ids))
        self._rules = tuple(compiled)
        self._by_source: dict[TokenSeq, tuple[tuple[_CompiledRule, ...], int]] = {}
        self._cache: dict[tuple[TokenSeq, TokenSeq], np.ndarray] = {}

    def _active_rules(self, source: TokenSeq) -> tuple[tuple[_CompiledRule, ...], int]:
        source = tuple(source)
        hit = self._by_source.get(source)
        if hit is not None:
            return hit
        src_words = tuple(detokenize(source, self.vocab).lower().split())
        active = []
        for rule in self._rules:
            k = len(rule.src_words)
            if k == 0 or any(src_words[i:i + k] == rule.src_words
                             for i in range(len(src_words) - k + 1)):
                active.append(rule)
        max_ctx = max((len(r.context_ids) for r in active), default=0)
        entry = (tuple(active), max_ctx)
        self._by_source[source] = entry
        return entry

    def score(self, source: TokenSeq, prefix: TokenSeq) -> np.ndarray:
        """Next-token log-distribution for the given state.

        prefix must start with BOS. The returned vector is freshly
        allocated only on cache misses; callers must not mutate it.
        """
        prefix = tuple(prefix)
        if not prefix or prefix[0] != self.bos_id:
            raise ValueError("prefix must start with BOS")
        active, max_ctx = self._active_rules(source)
        key = (tuple(source), prefix[len(prefix) - max_ctx:] if max_ctx else ())
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        weights = np.full(self.vocab_size, self.base_weight, dtype=np.float64)
        for rule in active:
            k = len(rule.context_ids)
            if k == 0 or prefix[len(prefix) - k:] == rule.context_ids:
                weights[rule.tgt_id] += rule.weight
        logits = np.log(weights) / self.temperature
        shift = logits.max()
        logp = logits - (shift + math.log(np.exp(logits - shift).sum()))
        logp.flags.writeable = False
        self._cache[key] = logp
        return logp


def toy_from_table(rules: Iterable[Rule], vocab: Vocabulary,
                   temperature: float = 1.0) -> ToyModel:
    """Build the toy scorer; unknown tokens in rules raise RuleError."""
    return ToyModel(vocab, rules, temperature=temperature)
