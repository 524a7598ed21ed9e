"""Added-toxicity detection and mitigation for translation output.

The pipeline decodes with beam search, classifies the output against a
per-language toxicity wordlist, and when the output is toxic while the
input is clean, decodes again with the offending words banned. Any
model exposing the ScorerInterface protocol plugs into the decoder; a
rule-table toy model is included for tests and demos.
"""

from ._kernels import KERNEL_BACKEND
from .bans import PUNCT_PREFIXES, BanSet, build_ban_set
from .decoder import (DecodeParams, Hypothesis, beam_search,
                      beam_search_filtered)
from .errors import (BanSetError, CorpusError, DecodeExhaustedError,
                     EmptyBanSetError, InvalidTokenError, MetricError,
                     MintoxError, RuleError, VocabFormatError, WordlistError)
from .metrics import BleuScore, bleu, tokenize_13a, tokenize_char
from .model import Rule, ScorerInterface, ToyModel, parse_rules, toy_from_table
from .pipeline import (CorpusReport, CorpusSentence, PipelineConfig,
                       PipelineResult, SentenceOutcome, mintox, read_corpus,
                       run_corpus)
from .toxicity import (Match, ToxicityReport, ToxicityWordlist, classify,
                       corpus_etox, load_wordlist, normalize_text,
                       percent_string, strip_symbols)
from .vocab import (Segmentations, Vocabulary, detokenize,
                    enumerate_segmentations, load_vocab, tokenize)

__version__ = "0.1.0"

__all__ = [
    "BanSet",
    "BanSetError",
    "BleuScore",
    "CorpusError",
    "CorpusReport",
    "CorpusSentence",
    "DecodeExhaustedError",
    "DecodeParams",
    "EmptyBanSetError",
    "Hypothesis",
    "InvalidTokenError",
    "KERNEL_BACKEND",
    "Match",
    "MetricError",
    "MintoxError",
    "PUNCT_PREFIXES",
    "PipelineConfig",
    "PipelineResult",
    "Rule",
    "RuleError",
    "ScorerInterface",
    "Segmentations",
    "SentenceOutcome",
    "ToxicityReport",
    "ToxicityWordlist",
    "ToyModel",
    "VocabFormatError",
    "Vocabulary",
    "WordlistError",
    "beam_search",
    "beam_search_filtered",
    "bleu",
    "build_ban_set",
    "classify",
    "corpus_etox",
    "detokenize",
    "enumerate_segmentations",
    "load_vocab",
    "load_wordlist",
    "mintox",
    "normalize_text",
    "parse_rules",
    "percent_string",
    "read_corpus",
    "run_corpus",
    "strip_symbols",
    "tokenize",
    "tokenize_13a",
    "tokenize_char",
    "toy_from_table",
    "__version__",
]
