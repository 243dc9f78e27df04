"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from supersde.grassmann import GrassmannElement

N_GEN = 6

keys = st.lists(st.integers(0, N_GEN - 1), unique=True, max_size=N_GEN).map(lambda k: tuple(sorted(k)))
small_ints = st.integers(-4, 4).map(float)


def elements(parity=None, max_terms=5):
    key_st = keys if parity is None else keys.filter(lambda k: len(k) % 2 == parity)
    return st.dictionaries(key_st, small_ints, max_size=max_terms).map(GrassmannElement)
