import numpy as np
import pytest
from hypothesis import given, strategies as st

from riffleguess.pmf import Pmf, moments


def test_validation():
    with pytest.raises(ValueError):
        Pmf(0, [0.5, 0.6])
    with pytest.raises(ValueError):
        Pmf(0, [1.5, -0.5])
    with pytest.raises(ValueError):
        Pmf(0, [])


def test_masses_read_only():
    pmf = Pmf(2, [0.25, 0.75])
    with pytest.raises(ValueError):
        pmf.masses[0] = 1.0


def test_indexing_and_dict():
    pmf = Pmf.from_dict({3: 0.5, 5: 0.5})
    assert pmf.offset == 3 and len(pmf) == 3
    assert pmf[4] == 0.0 and pmf[5] == 0.5 and pmf[99] == 0.0
    assert pmf.to_dict() == {3: 0.5, 4: 0.0, 5: 0.5}


def test_from_counts_trims():
    pmf = Pmf.from_counts(np.array([0, 0, 3, 0, 1, 0]))
    assert pmf.offset == 2
    assert np.allclose(pmf.masses, [0.75, 0.0, 0.25])


def test_moments():
    assert moments(Pmf.unit(5), 1) == 5
    assert moments(Pmf.from_dict({1: 0.5, 2: 0.5}), 1) == 1.5
    with pytest.raises(ValueError):
        moments(Pmf.unit(1), 0)


@given(st.lists(st.integers(0, 50), min_size=1, max_size=20).filter(any),
       st.integers(-10, 10), st.integers(0, 30))
def test_reflect_and_shift(counts, offset, about):
    pmf = Pmf.from_counts(np.array(counts), offset)
    r = pmf.reflect(about)
    assert np.isclose(r.mean(), about - pmf.mean())
    assert r.reflect(about).allclose(pmf)
    assert np.isclose(pmf.shift(3).mean(), pmf.mean() + 3)
    assert np.isclose(pmf.cdf()[-1], 1.0)
