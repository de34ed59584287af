import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fellcheck.ck.algebra import (
    PRESETS,
    AdjacencyMatrix,
    CKAlgebra,
    CKMonomial,
    component,
    expectation,
    mono_mul,
)
from fellcheck.ck.oracle import WordOracle, element_terms
from fellcheck.errors import AlgebraMismatchError, InvalidGeneratorError, RankMismatchError
from fellcheck.groups import FreeWord

from conftest import ck_elements, combination, free_words, operator_words, word_element

ORACLE2 = WordOracle(PRESETS["allones2"], 20)
ORACLE_FIB = WordOracle(PRESETS["fib2"], 20)


def W(*letters, n=2):
    return FreeWord(tuple(letters), n)


class TestAdjacency:
    def test_rejects_zero_row(self):
        with pytest.raises(ValueError):
            AdjacencyMatrix(((0, 0), (1, 1)))

    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            AdjacencyMatrix(((2, 1), (1, 1)))

    def test_json(self):
        A = PRESETS["fib2"]
        assert AdjacencyMatrix.from_json(A.to_json()) == A


class TestRelations:
    def test_projections_orthogonal(self, allones2):
        p1, p2 = allones2.projection(1), allones2.projection(2)
        assert p1 * p1 == p1 and p1 * p2 == allones2.zero()

    def test_monomial_product(self, allones2):
        x = mono_mul(((1,), 2, ()), ((), 2, (1,)), PRESETS["allones2"])
        assert x == allones2.element({CKMonomial((1,), 2, (1,)): 1})

    def test_inadmissible_junction(self, fib2):
        # a_22 = 0 in fib2, so s2 s2 = 0
        s2 = fib2.generator(2)
        assert (s2 * s2).is_zero

    def test_inadmissible_monomial(self):
        with pytest.raises(AlgebraMismatchError):
            mono_mul(((2,), 2, ()), ((), 1, ()), PRESETS["fib2"])

    def test_unit(self, allones2):
        u = allones2.unit()
        assert u * u == u and u.adjoint() == u
        assert u == allones2.projection(1) + allones2.projection(2)

    def test_generator_expansion(self, allones2):
        g = allones2.generator(1)
        assert g == allones2.element({CKMonomial((1,), 1, ()): 1, CKMonomial((1,), 2, ()): 1})

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_ck_relations(self, name):
        alg = CKAlgebra.of(PRESETS[name])
        s = {i: alg.generator(i) for i in range(1, alg.n + 1)}
        total = alg.zero()
        for i in s:
            assert s[i] * s[i].adjoint() * s[i] == s[i]
            for j in s:
                if i != j:
                    assert (s[i].adjoint() * s[j]).is_zero
            q = s[i].adjoint() * s[i]
            assert q == sum((alg.projection(j) for j in s if alg.A(i, j)), alg.zero())
            total = total + s[i] * s[i].adjoint()
        assert total == alg.unit()

    def test_bad_generator(self, allones2):
        with pytest.raises(InvalidGeneratorError):
            allones2.generator(3)
        with pytest.raises(RankMismatchError):
            allones2.partial_rep(W(1, n=3))


class TestPartialRep:
    def test_identity(self, allones2):
        assert allones2.partial_rep(FreeWord.identity(2)) == allones2.unit()

    def test_not_in_pp_inverse(self, allones2):
        assert allones2.partial_rep(W(-1, 2)).is_zero

    def test_cancelled_word_is_unit(self, allones2):
        assert W(-1, 1).is_identity
        assert allones2.partial_rep(W(-1, 1)) == allones2.unit()

    def test_range_projections(self, allones2, fib2):
        assert allones2.range_projection(FreeWord.identity(2)) == allones2.unit()
        for i in (1, 2):
            assert allones2.range_projection(W(i)) == allones2.projection(i)
        assert allones2.range_projection(W(1, 2)) == allones2.element({CKMonomial((1,), 2, (1,)): 1})
        assert fib2.range_projection(W(2, 2)).is_zero

    def test_q_equals_unit(self, allones2):
        s1 = allones2.generator(1)
        assert s1.adjoint() * s1 == allones2.unit()


class TestGrading:
    def test_degree(self):
        alg = CKAlgebra.of(PRESETS["allones3"])
        assert alg.degree(CKMonomial((), 1, ())).is_identity
        assert alg.degree(CKMonomial((1,), 1, ())).letters == (1,)
        assert alg.degree(CKMonomial((1, 2), 1, (3, 2))).letters == (1, -3)

    def test_components(self, allones2):
        s1 = allones2.partial_rep(W(1))
        x = s1 + allones2.projection(1)
        assert component(x, W(1)) == s1
        assert expectation(x) == allones2.projection(1)
        assert expectation(s1).is_zero
        assert component(allones2.unit(), FreeWord.identity(2)) == allones2.unit()

    @given(free_words(2, 3))
    def test_st_star_st_has_degree_e(self, t):
        alg = CKAlgebra.of(PRESETS["allones2"])
        x = alg.partial_rep(t).adjoint() * alg.partial_rep(t)
        assert expectation(x) == x

    @given(ck_elements())
    def test_components_sum_back(self, terms):
        alg = CKAlgebra.of(PRESETS["allones2"])
        x, _ = combination(alg, terms)
        assert sum(x.components().values(), alg.zero()) == x


class TestStarAlgebra:
    @settings(max_examples=60, deadline=None)
    @given(ck_elements(), ck_elements(), ck_elements())
    def test_associative(self, a, b, c):
        alg = CKAlgebra.of(PRESETS["fib2"])
        x, y, z = (combination(alg, t)[0] for t in (a, b, c))
        assert (x * y) * z == x * (y * z)

    @settings(max_examples=60, deadline=None)
    @given(ck_elements(), ck_elements())
    def test_adjoint_reverses(self, a, b):
        alg = CKAlgebra.of(PRESETS["allones2"])
        x, y = combination(alg, a)[0], combination(alg, b)[0]
        assert (x * y).adjoint() == y.adjoint() * x.adjoint()
        assert x.adjoint().adjoint() == x

    @given(ck_elements())
    def test_normal_form_terms(self, terms):
        alg = CKAlgebra.of(PRESETS["fib2"])
        x, _ = combination(alg, terms)
        assert all(alg.is_valid(m) and alg.is_normal(m) for m in x.terms)


class TestAgainstPathOracle:
    """Engine normal forms against the path-space action of the raw operator words."""

    @pytest.mark.parametrize("oracle,name", [(ORACLE2, "allones2"), (ORACLE_FIB, "fib2")])
    @settings(max_examples=80, deadline=None)
    @given(data=st.data())
    def test_word_products(self, oracle, name, data):
        alg = CKAlgebra.of(PRESETS[name])
        u = data.draw(operator_words(2, 5))
        v = data.draw(operator_words(2, 5))
        x = word_element(alg, u) * word_element(alg, v)
        assert oracle.equal(element_terms(x), [(1, u + v)])

    @settings(max_examples=60, deadline=None)
    @given(ck_elements(), ck_elements())
    def test_linear_combinations(self, a, b):
        alg = CKAlgebra.of(PRESETS["allones2"])
        (x, rx), (y, ry) = combination(alg, a), combination(alg, b)
        raw = [(c1 * c2, w1 + w2) for c1, w1 in rx for c2, w2 in ry]
        assert ORACLE2.equal(element_terms(x * y), raw)

    @settings(max_examples=40, deadline=None)
    @given(ck_elements())
    def test_zero_iff_oracle_zero(self, terms):
        alg = CKAlgebra.of(PRESETS["fib2"])
        x, raw = combination(alg, terms)
        assert x.is_zero == ORACLE_FIB.is_zero(raw)
