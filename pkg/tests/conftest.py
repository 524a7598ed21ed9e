import json
import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS_DIR))

from mintox import (load_vocab, load_wordlist, parse_rules, read_corpus,
                    toy_from_table)

DATA = TESTS_DIR / "data"


def _read_lines(name: str) -> list[str]:
    return (DATA / name).read_text(encoding="utf-8").splitlines()


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def corpus_vocab():
    return load_vocab(_read_lines("vocab.txt"))


@pytest.fixture(scope="session")
def corpus_model(corpus_vocab):
    return toy_from_table(parse_rules(_read_lines("rules.tsv")), corpus_vocab)


@pytest.fixture(scope="session")
def cat_wordlist():
    return load_wordlist(_read_lines("wordlist_cat.txt"), language="cat",
                         source="wordlist_cat.txt")


@pytest.fixture(scope="session")
def eng_wordlist():
    return load_wordlist(_read_lines("wordlist_src_eng.txt"), language="eng",
                         source="wordlist_src_eng.txt")


@pytest.fixture(scope="session")
def corpus_sentences():
    return read_corpus(_read_lines("corpus.jsonl"), source="corpus.jsonl")


@pytest.fixture(scope="session")
def bleu_fixture():
    return json.loads((DATA / "bleu_fixture.json").read_text(encoding="utf-8"))
