import itertools

import numpy as np
import pytest
from hypothesis import given

from fellcheck.errors import ConstructionError, InvalidGeneratorError, RankMismatchError
from fellcheck.groups import (
    FreeWord,
    PositiveWord,
    enumerate_positive,
    enumerate_words,
    factor_positive,
    format_word,
    is_dot,
    make_finite_group,
    parse_word,
    reduce,
)

from conftest import free_words


def naive_reduce(letters):
    """Cancel adjacent inverse pairs until nothing changes."""
    w = list(letters)
    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            if w[k] == -w[k + 1]:
                del w[k : k + 2]
                changed = True
                break
    return tuple(w)


def W(*letters, n=2):
    return FreeWord(tuple(letters), n)


class TestReduce:
    def test_empty(self):
        assert reduce([], 2).is_identity

    def test_single_cancellation(self):
        assert reduce([1, -1], 2) == FreeWord.identity(2)

    def test_nested_cancellation(self):
        assert reduce([1, 2, -2, 1], 2).letters == (1, 1)

    @given(free_words(3, 8), free_words(3, 8))
    def test_matches_naive_oracle(self, u, v):
        assert (u * v).letters == naive_reduce(u.letters + v.letters)

    def test_bad_letter(self):
        with pytest.raises(InvalidGeneratorError):
            FreeWord((3,), 2)
        with pytest.raises(InvalidGeneratorError):
            FreeWord((0,), 2)


class TestMultiply:
    def test_inverse_pair(self):
        assert (W(1) * W(-1)).is_identity

    def test_concatenate(self):
        assert (W(1, 2) * W(-2, 1)).letters == (1, 1)

    @given(free_words(), free_words(), free_words())
    def test_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(free_words())
    def test_inverse(self, a):
        assert (a * a.inverse()).is_identity
        assert a.inverse().inverse() == a

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatchError):
            W(1, n=2) * W(1, n=3)


class TestDotAndFactor:
    def test_dot(self):
        assert is_dot(W(1), W(2))
        assert not is_dot(W(1), W(-1))
        assert not is_dot(W(1, -2), W(2, 1))

    @given(free_words(), free_words())
    def test_dot_means_lengths_add(self, t, r):
        assert is_dot(t, r) == (len(t * r) == len(t) + len(r))

    def test_factor(self):
        a, b = factor_positive(W(1, -2))
        assert a.letters == (1,) and b.letters == (2,)
        a, b = factor_positive(FreeWord.identity(2))
        assert a.is_identity and b.is_identity
        assert factor_positive(W(-1, 2)) is None

    @given(free_words(2, 6))
    def test_factor_roundtrip(self, t):
        split = factor_positive(t)
        if split is not None:
            a, b = split
            assert a * b.inverse() == t


class TestEnumeration:
    def test_positive(self):
        assert enumerate_positive(2, 0) == [FreeWord.identity(2)]
        assert [w.letters for w in enumerate_positive(2, 1)] == [(1,), (2,)]
        assert len(enumerate_positive(2, 3)) == 8

    @pytest.mark.parametrize("n,k", [(2, 3), (3, 2), (2, 4)])
    def test_reduced_count(self, n, k):
        words = enumerate_words(n, k)
        assert len(words) == 2 * n * (2 * n - 1) ** (k - 1)
        assert len(set(words)) == len(words)

    def test_positive_word_rejects_inverse(self):
        with pytest.raises(InvalidGeneratorError):
            PositiveWord((-1,), 2)


class TestParse:
    @given(free_words(3, 6))
    def test_roundtrip(self, w):
        assert parse_word(format_word(w), 3) == w

    def test_examples(self):
        assert parse_word("g1 g2'", 2).letters == (1, -2)
        assert parse_word("e", 2).is_identity
        with pytest.raises(InvalidGeneratorError):
            parse_word("h1", 2)


class TestFiniteGroups:
    def test_trivial(self):
        assert make_finite_group("cyclic", 1).order == 1

    def test_cyclic(self):
        g = make_finite_group("cyclic", 4)
        for a, b in itertools.product(range(4), repeat=2):
            assert g.mul(a, b) == (a + b) % 4
        assert g.is_abelian() and g.check_axioms()

    def test_symmetric(self):
        g = make_finite_group("symmetric", 3)
        assert g.order == 6 and not g.is_abelian() and g.check_axioms()
        # composition oracle on the permutation labels
        for a, b in itertools.product(range(6), repeat=2):
            p, q = g.labels[a], g.labels[b]
            assert g.labels[g.mul(a, b)] == tuple(p[q[x]] for x in range(3))

    def test_product(self):
        g = make_finite_group("product", make_finite_group("cyclic", 2), make_finite_group("cyclic", 3))
        assert g.order == 6 and g.is_abelian() and g.check_axioms()

    def test_json_roundtrip(self):
        g = make_finite_group("symmetric", 3)
        h = type(g).from_json(g.to_json())
        assert np.array_equal(g.table, h.table)

    def test_rejects_non_group(self):
        with pytest.raises(ConstructionError):
            type(make_finite_group("cyclic", 2))(np.array([[0, 0], [0, 0]]))
        with pytest.raises(ConstructionError):
            make_finite_group("cyclic", 99)
