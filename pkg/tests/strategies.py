"""Hypothesis strategies shared by the property tests."""

from __future__ import annotations

from hypothesis import strategies as st

from legsheaf.diagram import BraidWord, front, rainbow_closure


@st.composite
def positive_braids(draw, max_strands: int = 3, max_len: int = 4) -> BraidWord:
    n = draw(st.integers(1, max_strands))
    if n == 1:
        return BraidWord(1, ())
    letters = draw(st.lists(st.integers(1, n - 1), max_size=max_len))
    return BraidWord(n, tuple(letters))


@st.composite
def braids(draw, max_strands: int = 3, max_len: int = 4) -> BraidWord:
    n = draw(st.integers(2, max_strands))
    gens = st.integers(1, n - 1).flatmap(lambda i: st.sampled_from((i, -i)))
    return BraidWord(n, tuple(draw(st.lists(gens, max_size=max_len))))


def rainbow_fronts(max_strands: int = 3, max_len: int = 4):
    return positive_braids(max_strands, max_len).map(lambda b: (b, front(rainbow_closure(b))))
