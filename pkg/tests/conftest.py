import functools
from pathlib import Path

import pytest

from schurkit.homology import finite_quotient, miller_cover
from schurkit.presentation import load_presentation
from schurkit.runner import default_corpus_dir

CORPUS = default_corpus_dir()
SMALL = ["c27", "c9xc3", "c3cubed", "heisenberg27", "m27"]
ALL = sorted(p.stem for p in CORPUS.glob("*.txt"))


@functools.lru_cache(maxsize=None)
def presentation(stem):
    return load_presentation(CORPUS / f"{stem}.txt")


@functools.lru_cache(maxsize=None)
def group(stem):
    return finite_quotient(presentation(stem)).quotient


@functools.lru_cache(maxsize=None)
def cover(stem):
    return miller_cover(presentation(stem))


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS
