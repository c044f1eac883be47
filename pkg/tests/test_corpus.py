from importlib import resources

import numpy as np
import pytest

from conftest import random_disc
from hyplevel.corpus import (HEADER, LAYOUT, SEED, SIZE, CorpusEntry, format_corpus,
                             generate_corpus, load_corpus, parse_corpus)


def test_committed_file_matches_generator():
    committed = resources.files("hyplevel").joinpath("data/corpus.txt").read_text()
    assert format_corpus(generate_corpus(SEED)) == committed


def test_layout(corpus):
    assert len(corpus) == SIZE
    kinds = [e.kind for e in corpus]
    expected = [k for k, n in LAYOUT for _ in range(n)]
    assert kinds == expected
    assert [e.id for e in corpus] == [f"c{i:02d}" for i in range(SIZE)]


def test_round_trip(corpus):
    assert parse_corpus(format_corpus(corpus)) == corpus
    assert format_corpus(corpus).splitlines()[0] == HEADER


def test_load_from_path(tmp_path, corpus):
    path = tmp_path / "mini.txt"
    path.write_text(format_corpus(corpus[:3]))
    assert load_corpus(str(path)) == corpus[:3]


def test_entries_are_admissible(corpus):
    z = random_disc(np.random.default_rng(0), 500, 0.999)
    for e in corpus:
        inner = e.map.inner if e.kind == "scaled" else e.map
        assert abs(inner(0)) >= 0.05 - 1e-6
        assert np.max(np.abs(e.map(z))) <= 1 + 1e-12
        assert 0.2 <= e.r <= 0.95
        assert e.lam is None or e.lam in (1.0, 1.1, 1.5, 3.0)


def test_jordan_problems_close(corpus_jordan):
    assert all(c.closed for _, _, c in corpus_jordan)


def test_dropped_level_problems(corpus):
    dropped = [e.id for e in corpus if e.lam is None]
    assert len(dropped) == 5
    assert all(e.level_problem() is None for e in corpus if e.lam is None)


def test_line_format():
    e = CorpusEntry("x", None, 0.5, "kalpha", "kalpha(0.5)")
    assert e.line() == "x\t-\t0.5\tkalpha\tkalpha(0.5)"
    with pytest.raises(ValueError):
        parse_corpus("only\ttwo")
