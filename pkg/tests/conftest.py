from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from fellcheck.ck.algebra import PRESETS, CKAlgebra
from fellcheck.groups import FreeWord


@pytest.fixture(scope="session")
def allones2():
    return CKAlgebra.of(PRESETS["allones2"])


@pytest.fixture(scope="session")
def fib2():
    return CKAlgebra.of(PRESETS["fib2"])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def free_words(n: int = 2, max_len: int = 4):
    letters = st.sampled_from([x for g in range(1, n + 1) for x in (g, -g)])
    return st.lists(letters, max_size=max_len).map(lambda w: FreeWord(tuple(w), n))


def positive_words(n: int = 2, max_len: int = 3):
    return st.lists(st.integers(1, n), max_size=max_len).map(lambda w: FreeWord(tuple(w), n))


def operator_words(n: int = 2, max_len: int = 4):
    """Raw words in s_i (positive) and s_i* (negative)."""
    letters = st.sampled_from([x for g in range(1, n + 1) for x in (g, -g)])
    return st.lists(letters, max_size=max_len).map(tuple)


scalars = st.tuples(
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
)


def word_element(alg: CKAlgebra, word: tuple[int, ...]):
    x = alg.unit()
    for k in word:
        g = alg.generator(abs(k))
        x = x * (g if k > 0 else g.adjoint())
    return x


def combination(alg: CKAlgebra, terms):
    """Engine element for sum c * word, along with the raw (coeff, word) list."""
    x = alg.zero()
    raw = []
    for (re_, im), word in terms:
        x = x + word_element(alg, word) * alg.scalar((re_, im))
        raw.append((complex(float(re_), float(im)), word))
    return x, raw


def ck_elements(n: int = 2, max_terms: int = 3, max_len: int = 4):
    return st.lists(st.tuples(scalars, operator_words(n, max_len)), min_size=1, max_size=max_terms)
