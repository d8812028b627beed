import random

import pytest

from cswaug.align import AlignmentSet, parse_pharaoh
from cswaug.corpus import SentencePair, Token, tag_token_language, tokenize


def make_pair(pid, src_text, tgt_text):
    return SentencePair(pid, tuple(tokenize(src_text)), tuple(tokenize(tgt_text)))


def make_alignment(items, src_len, tgt_len):
    return AlignmentSet(frozenset(items), src_len, tgt_len)


@pytest.fixture
def toy_dir():
    from importlib import resources

    with resources.as_file(resources.files("cswaug").joinpath("data", "toy")) as p:
        yield p


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
