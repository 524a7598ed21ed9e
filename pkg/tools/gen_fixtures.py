"""Generate the committed test fixtures under tests/data/.

Deterministic by construction (no RNG). The corpus is built so that:
  - exactly 50 of 200 sentences have a toxic unconstrained argmax,
  - every toxic sentence has a clean runner-up continuation,
  - sentence s002 reproduces the resegmentation evasion (the banned
    word can come back under a different subword split),
  - sentence s006 has a toxic-word runner-up that full-wordlist mode
    bans but detected-words mode does not, at a quality cost.

The script verifies its own claims by running the pipeline before
writing anything, so a stale fixture cannot be generated silently.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from mintox import (DecodeParams, PipelineConfig, load_vocab, load_wordlist,
                    mintox, parse_rules, read_corpus, run_corpus,
                    toy_from_table)
from oracles.bleu_reference import ref_bleu

DATA = ROOT / "tests" / "data"

ADJS = ["big", "old", "red", "new", "hot", "dry", "wet", "sad", "bad", "odd",
        "shy", "coy", "raw", "fat", "fit", "low", "top", "far", "mad", "icy"]
NOUNS = ["cat", "dog", "car", "box", "cup", "hat", "map", "pen", "bed", "key"]

CLEAN_POOL = ["bonica", "gran", "petita", "nova", "vella", "blava", "verda",
              "groga", "rosa", "bruna", "clara", "fosca", "alta", "baixa",
              "ampla", "plena", "seca", "dura", "fina", "neta"]

# Table of Catalan toxic entries used by the wordlist fixture.
TOXIC_ENTRIES = ["porqueria", "tonta", "idiotes", "cabró", "cony", "estúpid",
                 "folles", "idiota", "imbècil", "maricona", "merda", "polla",
                 "puta", "tonto"]

# Rotation for the plain toxic sentences; porqueria and cony are held
# out for the two special sentences.
TOXIC_ROTATION = ["merda", "tonta", "idiotes", "idiota", "estúpid", "imbècil",
                  "cabró", "tonto", "puta", "polla", "folles", "maricona"]

SRC_ENTRIES = ["hate", "stupid", "idiot", "damn", "fool"]

EVASION_K = 1   # sentence index of the resegmentation fixture (id s002)
OVERBAN_K = 5   # sentence index of the overban fixture (id s006)


def sentence_plan(k: int) -> dict:
    adj, noun = ADJS[k // 10], NOUNS[k % 10]
    plan = {
        "id": f"s{k + 1:03d}",
        "src": f"the {adj} {noun}",
        "window": f"{adj} {noun}",
        "toxic": k % 4 == 1,
    }
    if k == EVASION_K:
        plan["kind"] = "evasion"
        plan["x1"] = "porqueria"
        plan["alt"] = "brossa"
    elif k == OVERBAN_K:
        plan["kind"] = "overban"
        plan["x1"] = "merda"
        plan["alt"] = "conyac"
    elif plan["toxic"]:
        plan["kind"] = "toxic"
        plan["x1"] = TOXIC_ROTATION[(k // 4) % len(TOXIC_ROTATION)]
        plan["alt"] = CLEAN_POOL[(k + 3) % len(CLEAN_POOL)]
    else:
        plan["kind"] = "clean"
        plan["x1"] = CLEAN_POOL[k % len(CLEAN_POOL)]
        plan["alt"] = CLEAN_POOL[(k + 7) % len(CLEAN_POOL)]
    return plan


def build_vocab_lines() -> list[str]:
    surfaces = ["▁és", "▁una", "▁cosa"]
    surfaces += [f"▁{w}" for w in CLEAN_POOL]
    surfaces += ["▁brossa", "▁robusta"]
    surfaces += [f"▁{w}" for w in TOXIC_ENTRIES]
    surfaces += ["▁por", "quer", "ia", "qu", "eria", "ac"]
    surfaces += ["▁the"]
    surfaces += [f"▁{w}" for w in ADJS]
    surfaces += [f"▁{w}" for w in NOUNS]
    lines = ["#boundary=▁", "# synthetic vocabulary for the corpus fixture"]
    lines += surfaces
    return lines


def build_rule_lines(plans: list[dict]) -> list[str]:
    lines = ["# rule table: src-words<TAB>target<TAB>weight[<TAB>context]"]
    rails = [("*", "▁és", 999, "<s>"),
             ("*", "▁una", 999, "▁és"),
             ("*", "▁cosa", 999, "▁una")]
    content_words = set(CLEAN_POOL) | set(TOXIC_ROTATION) | {
        "brossa", "robusta", "porqueria"}
    for word in sorted(content_words):
        rails.append(("*", "</s>", 900, f"▁{word}"))
    for src, tgt, weight, context in rails:
        lines.append(f"{src}\t{tgt}\t{weight}\t{context}")

    for plan in plans:
        w = plan["window"]
        if plan["kind"] == "evasion":
            block = [(w, "▁porqueria", 999, "▁cosa"),
                     (w, "▁por", 450, "▁cosa"),
                     (w, "▁brossa", 99, "▁cosa"),
                     (w, "qu", 900, "▁por"),
                     (w, "eria", 900, "qu"),
                     (w, "</s>", 900, "eria")]
        elif plan["kind"] == "overban":
            block = [(w, "▁merda", 999, "▁cosa"),
                     (w, "▁cony", 457, "▁cosa"),
                     (w, "▁brossa", 99, "▁cosa"),
                     (w, "ac", 900, "▁cony"),
                     (w, "</s>", 900, "ac")]
        else:
            block = [(w, f"▁{plan['x1']}", 999, "▁cosa"),
                     (w, f"▁{plan['alt']}", 99, "▁cosa")]
        for src, tgt, weight, context in block:
            lines.append(f"{src}\t{tgt}\t{weight}\t{context}")
    return lines


def expected_texts(plan: dict) -> tuple[str, str]:
    """(unconstrained text, mitigated text under detected+all-seg)."""
    before = f"és una cosa {plan['x1']}"
    if plan["kind"] == "evasion":
        after = "és una cosa brossa"
    elif plan["kind"] == "overban":
        after = "és una cosa conyac"
    elif plan["kind"] == "toxic":
        after = f"és una cosa {plan['alt']}"
    else:
        after = before
    return before, after


BLEU_PAIRS_13A = [
    ["The quick brown fox jumps over the lazy dog .",
     "The quick brown fox jumped over the lazy dog ."],
    ["It costs 3.5 kg of gold , maybe more .",
     "It costs 4.5 kg of gold , maybe less ."],
    ["Hello, world!", "Hello, world!"],
    ["He said &quot;no&quot; twice .", 'He said "no" once .'],
    ["El gat menja peix a la cuina .",
     "El gat menja peix a la cuina cada dia ."],
    ["A 10-year-old child ran fast .", "A 10-year-old child ran very fast ."],
    ["Results improved by 12.5% since 2019 .",
     "Results improved by 12.5% since 2019 ."],
    ["the cat sat on the mat", "a cat sat on that mat"],
    ["short", "a much longer reference sentence here"],
    ["brevity penalty will bite here",
     "brevity penalty will bite here eventually right"],
]

BLEU_PAIRS_CHAR = [
    ["你好 世界", "你好 世界"],
    ["これは テスト です", "これは テスト でした"],
    ["猫が 魚を 食べる", "猫が 魚を 食べた"],
    ["el gat", "el gos"],
    ["ab cd ef", "ab ce df"],
    ["一 二 三 四", "一 二 三 五"],
    ["soy una chica robusta", "soy una chica fuerte"],
    ["xyz", "xyzw"],
    ["同じ 文", "同じ 文"],
    ["short one", "a rather longer one"],
]


def main() -> None:
    plans = [sentence_plan(k) for k in range(200)]
    toxic_count = sum(1 for p in plans if p["toxic"])
    assert toxic_count == 50, toxic_count

    vocab_lines = build_vocab_lines()
    rule_lines = build_rule_lines(plans)
    vocab = load_vocab(vocab_lines)
    model = toy_from_table(parse_rules(rule_lines), vocab)
    src_wordlist = load_wordlist(SRC_ENTRIES, language="eng")
    tgt_wordlist = load_wordlist(TOXIC_ENTRIES, language="cat")

    corpus_lines = []
    config = PipelineConfig(all_segmentations=True,
                            decode=DecodeParams(beam_size=5))
    for plan in plans:
        before, after = expected_texts(plan)
        result = mintox(model, vocab, src_wordlist, tgt_wordlist,
                        plan["src"], config)
        assert result.unconstrained_text == before, (plan, result.unconstrained_text)
        assert result.final_text == after, (plan, result.final_text)
        assert result.output_report_before.is_toxic == plan["toxic"], plan
        assert not result.output_report_after.is_toxic, plan
        assert result.mitigation_applied == plan["toxic"], plan
        corpus_lines.append(json.dumps(
            {"id": plan["id"], "src": plan["src"], "ref": after},
            ensure_ascii=False))

    # Cross-check the corpus-level numbers the acceptance suite pins.
    sentences = read_corpus(corpus_lines, source="<generated>")
    report = run_corpus(model, vocab, src_wordlist, tgt_wordlist,
                        sentences, config)
    assert report.etox_before == Fraction(1, 4), report.etox_before
    assert report.etox_after == 0, report.etox_after
    assert report.mitigated_count == 50, report.mitigated_count
    assert report.bleu_after is not None and report.bleu_after.score == 100.0

    # Resegmentation evasion with canonical-only bans: only s002 stays toxic.
    off = PipelineConfig(all_segmentations=False)
    evasion = mintox(model, vocab, src_wordlist, tgt_wordlist,
                     plans[EVASION_K]["src"], off)
    assert evasion.final_text == "és una cosa porqueria", evasion.final_text
    assert evasion.output_report_after.is_toxic

    # Overban comparison: full-wordlist mode loses the clean "conyac".
    full = PipelineConfig(ban_mode="full", all_segmentations=True)
    overban_detected = mintox(model, vocab, src_wordlist, tgt_wordlist,
                              plans[OVERBAN_K]["src"], config)
    overban_full = mintox(model, vocab, src_wordlist, tgt_wordlist,
                          plans[OVERBAN_K]["src"], full)
    assert overban_detected.final_text == "és una cosa conyac"
    assert overban_full.final_text == "és una cosa brossa"
    assert overban_full.final_score < overban_detected.final_score

    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "vocab.txt").write_text("\n".join(vocab_lines) + "\n",
                                    encoding="utf-8")
    (DATA / "rules.tsv").write_text("\n".join(rule_lines) + "\n",
                                    encoding="utf-8")
    (DATA / "wordlist_cat.txt").write_text(
        "# Catalan toxicity wordlist fixture (14 entries)\n"
        + "\n".join(TOXIC_ENTRIES) + "\n", encoding="utf-8")
    (DATA / "wordlist_src_eng.txt").write_text(
        "# English source-side wordlist fixture\n"
        + "\n".join(SRC_ENTRIES) + "\n", encoding="utf-8")
    (DATA / "corpus.jsonl").write_text("\n".join(corpus_lines) + "\n",
                                       encoding="utf-8")

    bleu_fixture = {
        "pairs_13a": BLEU_PAIRS_13A,
        "expected_13a": ref_bleu([h for h, _ in BLEU_PAIRS_13A],
                                 [r for _, r in BLEU_PAIRS_13A]),
        "pairs_char": BLEU_PAIRS_CHAR,
        "expected_char": ref_bleu([h for h, _ in BLEU_PAIRS_CHAR],
                                  [r for _, r in BLEU_PAIRS_CHAR],
                                  char_level=True),
    }
    (DATA / "bleu_fixture.json").write_text(
        json.dumps(bleu_fixture, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")

    print(f"wrote fixtures to {DATA}")
    print(f"  corpus: 200 sentences, {toxic_count} toxic, "
          f"ETOX before {float(report.etox_before):.3f}")
    print(f"  BLEU before {report.bleu_before.score:.2f} "
          f"after {report.bleu_after.score:.2f}")


if __name__ == "__main__":
    main()
