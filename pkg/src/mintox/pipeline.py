"""Added-toxicity mitigation over a scorer, per sentence and per corpus.

Per sentence: decode unconstrained, classify the output against the
target-language wordlist, and if the output is toxic while the raw
source is clean, ban the offending words and decode again with
filtering. Optionally repeat while the output keeps matching new words,
up to max_rounds. Sentences whose source is itself toxic are left
untouched: mitigation targets toxicity the translation added, not
toxicity it carried over.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .bans import build_ban_set
from .decoder import DecodeParams, beam_search, beam_search_filtered
from .errors import CorpusError, EmptyBanSetError
from .metrics import BleuScore, bleu
from .model import ScorerInterface
from .toxicity import ToxicityReport, ToxicityWordlist, classify, corpus_etox
from .vocab import Vocabulary, detokenize, tokenize

__all__ = [
    "BAN_MODES",
    "CorpusReport",
    "CorpusSentence",
    "PipelineConfig",
    "PipelineResult",
    "SentenceOutcome",
    "mintox",
    "read_corpus",
    "run_corpus",
]

BAN_MODES = ("detected", "full")


@dataclass(frozen=True)
class PipelineConfig:
    """Mitigation knobs.

    ban_mode "detected" bans only the words the classifier matched in
    the unconstrained output; "full" bans the entire target wordlist.
    all_segmentations expands every banned word into all of its subword
    splits instead of just the canonical one, closing the re-splitting
    loophole at some cost in ban-set size.
    """

    ban_mode: str = "detected"
    max_rounds: int = 1
    all_segmentations: bool = False
    capitalization_variants: bool = True
    decode: DecodeParams = field(default_factory=DecodeParams)

    def __post_init__(self) -> None:
        if self.ban_mode not in BAN_MODES:
            raise ValueError(f"ban_mode must be one of {BAN_MODES}, got {self.ban_mode!r}")
        if self.max_rounds < 1:
            raise ValueError(f"max_rounds must be >= 1, got {self.max_rounds}")


@dataclass(frozen=True)
class PipelineResult:
    """Outcome for one sentence.

    Invariants: mitigation_applied implies the unconstrained output was
    toxic and the input clean; without mitigation, final_text equals
    unconstrained_text and exactly one decode ran. rounds_used counts
    filtered decodes, so decode_calls == rounds_used + 1.
    """

    final_text: str
    unconstrained_text: str
    mitigation_applied: bool
    rounds_used: int
    input_report: ToxicityReport
    output_report_before: ToxicityReport
    output_report_after: ToxicityReport
    banned_words: tuple[str, ...]
    decode_calls: int
    final_score: float
    unconstrained_score: float
    warnings: tuple[str, ...] = ()


def mintox(model: ScorerInterface, vocab: Vocabulary,
           src_wordlist: ToxicityWordlist, tgt_wordlist: ToxicityWordlist,
           source_text: str, config: PipelineConfig | None = None) -> PipelineResult:
    """Translate source_text and strip any toxicity the model added.

    The input gate classifies the raw source text, not its
    tokenization. When the ban set ends up empty (every candidate ban
    sequence contained EOS), the unconstrained output is kept and the
    condition reported in warnings rather than raised.
    """
    config = config or PipelineConfig()
    if not source_text.strip():
        raise ValueError("source text is empty")

    source = tokenize(source_text, vocab)
    first = beam_search(model, source, config.decode)
    unconstrained_text = detokenize(first.tokens, vocab)
    output_before = classify(unconstrained_text, tgt_wordlist)
    input_report = classify(source_text, src_wordlist)

    warnings: list[str] = []
    if not first.finished:
        warnings.append("unconstrained decode hit max length without finishing")

    current = first
    current_text = unconstrained_text
    current_report = output_before
    banned_words: list[str] = []
    rounds = 0

    if output_before.is_toxic and not input_report.is_toxic:
        if config.ban_mode == "full":
            banned_words.extend(tgt_wordlist.entries)
        else:
            banned_words.extend(output_before.matched_entries)
        while rounds < config.max_rounds:
            try:
                ban = build_ban_set(
                    banned_words, vocab,
                    capitalization_variants=config.capitalization_variants,
                    all_segmentations=config.all_segmentations)
            except EmptyBanSetError:
                warnings.append("ban set is empty after tokenization; "
                                "keeping the unconstrained output")
                banned_words.clear()
                break
            if ban.dropped:
                message = (f"{len(ban.dropped)} banned sequence(s) dropped "
                           f"for containing EOS")
                if message not in warnings:
                    warnings.append(message)
            current = beam_search_filtered(model, source, ban, config.decode)
            rounds += 1
            current_text = detokenize(current.tokens, vocab)
            current_report = classify(current_text, tgt_wordlist)
            if not current.finished:
                warnings.append(f"filtered decode (round {rounds}) hit max "
                                f"length without finishing")
            if not current_report.is_toxic:
                break
            new_words = [w for w in current_report.matched_entries
                         if w not in banned_words]
            if not new_words:
                # Re-running with an identical ban set cannot change the
                # output; stop instead of burning the remaining rounds.
                break
            banned_words.extend(new_words)

    mitigated = rounds > 0
    return PipelineResult(
        final_text=current_text,
        unconstrained_text=unconstrained_text,
        mitigation_applied=mitigated,
        rounds_used=rounds,
        input_report=input_report,
        output_report_before=output_before,
        output_report_after=current_report,
        banned_words=tuple(banned_words),
        decode_calls=rounds + 1,
        final_score=current.score,
        unconstrained_score=first.score,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class CorpusSentence:
    id: str
    src: str
    ref: str | None = None


def read_corpus(lines: Iterable[str], source: str = "<memory>") -> list[CorpusSentence]:
    """Parse JSONL corpus lines: {"id": str, "src": str, "ref"?: str}.

    Blank lines are skipped; anything else malformed raises CorpusError
    naming the 1-based line number.
    """
    sentences: list[CorpusSentence] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{source}: line {lineno}: malformed JSON "
                              f"({exc.msg})") from exc
        if not isinstance(obj, dict):
            raise CorpusError(f"{source}: line {lineno}: expected a JSON object")
        unknown = set(obj) - {"id", "src", "ref"}
        if unknown:
            raise CorpusError(f"{source}: line {lineno}: unknown keys "
                              f"{sorted(unknown)}")
        for key in ("id", "src"):
            if key not in obj:
                raise CorpusError(f"{source}: line {lineno}: missing {key!r}")
            if not isinstance(obj[key], str):
                raise CorpusError(f"{source}: line {lineno}: {key!r} must be a string")
        ref = obj.get("ref")
        if ref is not None and not isinstance(ref, str):
            raise CorpusError(f"{source}: line {lineno}: 'ref' must be a string")
        sentences.append(CorpusSentence(id=obj["id"], src=obj["src"], ref=ref))
    if not sentences:
        raise CorpusError(f"{source}: corpus is empty")
    return sentences


@dataclass(frozen=True)
class SentenceOutcome:
    sentence: CorpusSentence
    result: PipelineResult


@dataclass(frozen=True)
class CorpusReport:
    """Aggregate mitigation outcome over a corpus.

    etox_* are exact fractions of toxic sentences. bleu_* are None when
    any sentence lacks a reference.
    """

    outcomes: tuple[SentenceOutcome, ...]
    etox_before: Fraction
    etox_after: Fraction
    bleu_before: BleuScore | None
    bleu_after: BleuScore | None
    mitigated_count: int
    config: PipelineConfig
    bleu_tokenizer: str

    def report_dict(self) -> dict:
        """JSON-ready report: aggregates plus one diff row per sentence."""
        def bleu_block(score: BleuScore | None):
            if score is None:
                return None
            return {
                "score": round(score.score, 2),
                "precisions": [round(p, 6) for p in score.precisions],
                "brevity_penalty": round(score.brevity_penalty, 4),
                "hyp_length": score.hyp_length,
                "ref_length": score.ref_length,
                "signature": score.signature,
            }

        decode = self.config.decode
        return {
            "sentences": len(self.outcomes),
            "mitigated": self.mitigated_count,
            "etox_before": round(float(self.etox_before), 3),
            "etox_after": round(float(self.etox_after), 3),
            "bleu_before": bleu_block(self.bleu_before),
            "bleu_after": bleu_block(self.bleu_after),
            "config": {
                "ban_mode": self.config.ban_mode,
                "max_rounds": self.config.max_rounds,
                "all_segmentations": self.config.all_segmentations,
                "capitalization_variants": self.config.capitalization_variants,
                "beam_size": decode.beam_size,
                "max_length": decode.max_length,
                "length_penalty": decode.length_penalty,
                "bleu_tokenizer": self.bleu_tokenizer,
            },
            "diffs": [
                {
                    "id": outcome.sentence.id,
                    "src": outcome.sentence.src,
                    "before": outcome.result.unconstrained_text,
                    "after": outcome.result.final_text,
                    "mitigation_applied": outcome.result.mitigation_applied,
                    "rounds_used": outcome.result.rounds_used,
                    "banned_words": list(outcome.result.banned_words),
                    "toxic_before": outcome.result.output_report_before.is_toxic,
                    "toxic_after": outcome.result.output_report_after.is_toxic,
                    "warnings": list(outcome.result.warnings),
                }
                for outcome in self.outcomes
            ],
        }


def run_corpus(model: ScorerInterface, vocab: Vocabulary,
               src_wordlist: ToxicityWordlist, tgt_wordlist: ToxicityWordlist,
               corpus: Sequence[CorpusSentence],
               config: PipelineConfig | None = None, *,
               bleu_tokenizer: str = "13a", threads: int = 1) -> CorpusReport:
    """Run the pipeline over every sentence and aggregate the metrics.

    Sentences are independent; with threads > 1 they are processed by a
    worker pool. Output order always follows input order, and the
    aggregates are order-free, so the thread count never changes the
    report.
    """
    corpus = list(corpus)
    if not corpus:
        raise CorpusError("corpus is empty")
    config = config or PipelineConfig()

    def one(sentence: CorpusSentence) -> PipelineResult:
        return mintox(model, vocab, src_wordlist, tgt_wordlist,
                      sentence.src, config)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, corpus))
    else:
        results = [one(sentence) for sentence in corpus]

    etox_before = corpus_etox([r.output_report_before for r in results])
    etox_after = corpus_etox([r.output_report_after for r in results])
    bleu_before = bleu_after = None
    if all(sentence.ref is not None for sentence in corpus):
        refs = [sentence.ref for sentence in corpus]
        bleu_before = bleu([r.unconstrained_text for r in results], refs,
                           bleu_tokenizer)
        bleu_after = bleu([r.final_text for r in results], refs, bleu_tokenizer)

    return CorpusReport(
        outcomes=tuple(SentenceOutcome(s, r) for s, r in zip(corpus, results)),
        etox_before=etox_before,
        etox_after=etox_after,
        bleu_before=bleu_before,
        bleu_after=bleu_after,
        mitigated_count=sum(1 for r in results if r.mitigation_applied),
        config=config,
        bleu_tokenizer=bleu_tokenizer,
    )
