"""Exception hierarchy.

Everything raised on bad user input derives from MintoxError so the CLI
can map it to exit status 2 in one place. Programming errors (wrong
types, contract misuse) stay ordinary ValueError/TypeError.
"""


class MintoxError(Exception):
    """Base class for input and data errors raised by this package."""


class VocabFormatError(MintoxError):
    """Malformed vocabulary file (duplicate surface/id, bad line, empty)."""


class InvalidTokenError(MintoxError):
    """A token id outside the vocabulary was passed to detokenize."""


class WordlistError(MintoxError):
    """Wordlist file yields zero usable entries."""


class RuleError(MintoxError):
    """Toy-model rule references an unknown token or is malformed."""


class BanSetError(MintoxError):
    """Invalid ban sequences (empty sequence, or EOS inside a sequence)."""


class EmptyBanSetError(BanSetError):
    """No banned sequences survive construction."""


class DecodeExhaustedError(MintoxError):
    """Every continuation of every live hypothesis was masked before any
    hypothesis finished. Unreachable when EOS is never banned and has
    nonzero probability."""


class CorpusError(MintoxError):
    """Empty corpus, or malformed corpus line (message carries line number)."""


class MetricError(MintoxError):
    """Invalid metric input (hypothesis/reference count mismatch, empty)."""
