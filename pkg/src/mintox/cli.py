"""Command-line front end: corpus runs and standalone classification.

`mintox run` executes the full pipeline over a JSONL corpus and writes
a JSON report; `mintox classify` exposes the wordlist classifier on
stdin or a file as NDJSON. Exit status is 0 on success and 2 on any
input problem (missing file, malformed corpus line, bad flag value).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .decoder import DecodeParams
from .errors import MintoxError
from .model import parse_rules, toy_from_table
from .pipeline import BAN_MODES, PipelineConfig, read_corpus, run_corpus
from .toxicity import classify, load_wordlist, percent_string
from .vocab import load_vocab

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mintox",
        description="Detect added toxicity in translations and regenerate "
                    "them with the offending words banned from beam search.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the pipeline over a JSONL corpus")
    run.add_argument("--vocab", required=True, help="subword vocabulary file")
    run.add_argument("--model-rules", required=True, help="toy model rule table")
    run.add_argument("--src-wordlist", required=True,
                     help="source-language toxicity wordlist")
    run.add_argument("--tgt-wordlist", required=True,
                     help="target-language toxicity wordlist")
    run.add_argument("--corpus", required=True,
                     help='JSONL corpus: {"id", "src", "ref"?} per line')
    run.add_argument("--out", required=True, help="path for the JSON report")
    run.add_argument("--beam-size", type=int, default=5)
    run.add_argument("--ban-mode", choices=list(BAN_MODES), default="detected")
    run.add_argument("--max-rounds", type=int, default=1, metavar="N")
    run.add_argument("--all-segmentations", action="store_true",
                     help="ban every subword split of each word, not just "
                          "the canonical one")
    run.add_argument("--no-cap-variants", action="store_true",
                     help="do not expand banned words into capitalization "
                          "variants")
    run.add_argument("--bleu-tok", choices=["13a", "char"], default="13a")

    cls = sub.add_parser("classify",
                         help="classify lines against a toxicity wordlist")
    cls.add_argument("file", nargs="?", default="-",
                     help="input file of sentences, one per line "
                          "(default: stdin)")
    cls.add_argument("--wordlist", required=True)
    cls.add_argument("--language", default="und",
                     help="language label recorded on the wordlist")
    return parser


def _read_lines(path: str) -> list[str]:
    return Path(path).read_text(encoding="utf-8").splitlines()


def _threads_from_env() -> int:
    raw = os.environ.get("MINTOX_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise MintoxError(f"MINTOX_THREADS must be an integer, got {raw!r}") from None
    return max(1, value)


def _cmd_run(args: argparse.Namespace) -> int:
    for path in (args.vocab, args.model_rules, args.src_wordlist,
                 args.tgt_wordlist, args.corpus):
        if not os.path.isfile(path):
            print(f"error: no such file: {path}", file=sys.stderr)
            return 2

    vocab = load_vocab(_read_lines(args.vocab))
    model = toy_from_table(parse_rules(_read_lines(args.model_rules)), vocab)
    src_wordlist = load_wordlist(_read_lines(args.src_wordlist),
                                 language="src", source=args.src_wordlist)
    tgt_wordlist = load_wordlist(_read_lines(args.tgt_wordlist),
                                 language="tgt", source=args.tgt_wordlist)
    corpus = read_corpus(_read_lines(args.corpus), source=args.corpus)

    config = PipelineConfig(
        ban_mode=args.ban_mode,
        max_rounds=args.max_rounds,
        all_segmentations=args.all_segmentations,
        capitalization_variants=not args.no_cap_variants,
        decode=DecodeParams(beam_size=args.beam_size),
    )
    report = run_corpus(model, vocab, src_wordlist, tgt_wordlist, corpus,
                        config, bleu_tokenizer=args.bleu_tok,
                        threads=_threads_from_env())

    payload = json.dumps(report.report_dict(), ensure_ascii=False, indent=2)
    Path(args.out).write_text(payload + "\n", encoding="utf-8")

    print(f"sentences    {len(report.outcomes)}")
    print(f"mitigated    {report.mitigated_count}")
    print(f"ETOX before  {percent_string(report.etox_before)}%")
    print(f"ETOX after   {percent_string(report.etox_after)}%")
    if report.bleu_before is not None and report.bleu_after is not None:
        print(f"BLEU before  {report.bleu_before.score:.2f}")
        print(f"BLEU after   {report.bleu_after.score:.2f}")
    print(f"report       {args.out}")
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    if not os.path.isfile(args.wordlist):
        print(f"error: no such file: {args.wordlist}", file=sys.stderr)
        return 2
    wordlist = load_wordlist(_read_lines(args.wordlist),
                             language=args.language, source=args.wordlist)
    if args.file == "-":
        lines = sys.stdin.read().splitlines()
    else:
        if not os.path.isfile(args.file):
            print(f"error: no such file: {args.file}", file=sys.stderr)
            return 2
        lines = _read_lines(args.file)

    toxic = 0
    for line in lines:
        report = classify(line, wordlist)
        toxic += report.is_toxic
        print(json.dumps({
            "is_toxic": report.is_toxic,
            "matches": [{"entry": m.entry, "start": m.start, "end": m.end}
                        for m in report.matches],
        }, ensure_ascii=False))
    rate = toxic / len(lines) if lines else 0.0
    print(json.dumps({
        "sentences": len(lines),
        "toxic": toxic,
        "rate": round(rate, 3),
    }, ensure_ascii=False))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_classify(args)
    except (MintoxError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
