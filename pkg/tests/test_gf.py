from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from relmult import gf

P = 32003

mats = st.tuples(st.integers(1, 6), st.integers(1, 7)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(-3, 3)))


def test_check_prime():
    assert gf.check_prime(65521) == 65521
    for bad in (1, 4, 32001, 2**31 + 11):
        with pytest.raises(ValueError):
            gf.check_prime(bad)


def test_inverse():
    assert gf.inverse(3, 7) * 3 % 7 == 1
    with pytest.raises(ZeroDivisionError):
        gf.inverse(7, 7)


def test_rref_small():
    R, piv = gf.rref([[2, 4, 6], [1, 2, 4]], 7)
    assert piv == [0, 2]
    assert R.tolist() == [[1, 2, 0], [0, 0, 1]]


def test_rank_dependent_mod_p():
    # rows independent over Q but equal mod 5
    assert gf.rank([[1, 2], [6, 7]], 5) == 1
    assert gf.rank([[1, 2], [6, 7]], 7) == 2


@settings(max_examples=80, deadline=None)
@given(mats)
def test_rref_is_reduced_and_spans(m):
    R, piv = gf.rref(m, P)
    assert R.shape[0] == len(piv)
    for i, c in enumerate(piv):
        col = R[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1
        assert not np.any(R[i, :c])
    assert piv == sorted(piv)
    # same row space: every original row lies in span(R), and rank agrees
    assert gf.row_space_contains(R, m % P, P)
    assert gf.rank(np.vstack([R, m]), P) == len(piv)


@settings(max_examples=40, deadline=None)
@given(mats)
def test_rref_idempotent(m):
    R, piv = gf.rref(m, P)
    R2, piv2 = gf.rref(R, P)
    assert piv == piv2 and np.array_equal(R, R2)
