from __future__ import annotations

import pytest

from legsheaf import corpus
from legsheaf.diagram import FrontError


def test_every_corpus_front_loads():
    for name in corpus.NAMES:
        assert corpus.path(name).exists()
        assert corpus.load(name).word.to_text() == corpus.expected(name)["invariants"]["word"]


def test_comments_are_ignored():
    assert corpus.read_front("# eye\nu1 d1  # trailing\n").word.to_text() == "u1 d1"


def test_unknown_name():
    with pytest.raises(KeyError):
        corpus.path("figure_eight")


def test_bad_text():
    with pytest.raises(FrontError):
        corpus.read_front("u1 d2")


def test_stabilized_fronts_are_recorded_empty():
    for name in ("stabilized_unknot", "stabilized_trefoil"):
        assert corpus.expected(name)["empty"] == {"2": True, "3": True}
