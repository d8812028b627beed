"""Synthesis of code-switched sentences from monolingual parallel corpora,
with n-gram LM, error-rate, and correlation evaluation tooling."""

__version__ = "0.1.0"

from cswaug._kernels import BACKEND as kernel_backend
from cswaug.corpus import (
    DEFAULT_POLICY,
    Lang,
    NormalizationPolicy,
    SentencePair,
    Token,
    load_parallel,
    load_parallel_tsv,
    normalize,
    tag_token_language,
    tokenize,
)
from cswaug.generation import Generation, Strategy

__all__ = [
    "DEFAULT_POLICY",
    "Generation",
    "Lang",
    "NormalizationPolicy",
    "SentencePair",
    "Strategy",
    "Token",
    "kernel_backend",
    "load_parallel",
    "load_parallel_tsv",
    "normalize",
    "tag_token_language",
    "tokenize",
    "__version__",
]
