from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from legsheaf import gf


def matrices(p):
    return st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
        lambda s: st.lists(st.integers(0, p - 1), min_size=s[0] * s[1], max_size=s[0] * s[1]).map(
            lambda v: np.array(v, dtype=np.int64).reshape(s)))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_gl_order_by_counting(p):
    assert gf.gl_order(1, p) == p - 1
    assert gf.gl_order(2, p) == len(gf.gl_elements(2, p)) == (p * p - 1) * (p * p - p)


@pytest.mark.parametrize("p", [2, 3])
def test_subspace_counts_are_gaussian_binomials(p):
    for n in range(4):
        for k in range(n + 1):
            assert len(gf.subspaces(n, k, p)) == gf.gaussian_binomial(n, k, p)


@pytest.mark.parametrize("p", [2, 3, 5])
@given(data=st.data())
def test_rank_nullity(p, data):
    m = data.draw(matrices(p))
    ns = gf.nullspace(m, p)
    assert gf.rank(m, p) + ns.shape[1] == m.shape[1]
    assert not gf.mul(m, ns, p).any()


@given(matrices(3))
def test_inverse_of_invertible(m):
    if m.shape[0] != m.shape[1] or gf.rank(m, 3) < m.shape[0]:
        return
    assert np.array_equal(gf.mul(m, gf.inverse(m, 3), 3), gf.eye(m.shape[0]))


def test_unsupported_field():
    with pytest.raises(ValueError):
        gf.FqField(4)
