from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fellcheck import bundle as bm
from fellcheck.approximation import (
    CSV_COLUMNS,
    CoefficientFunction,
    ck_convergence_experiment,
    ck_net,
    fejer_coefficient,
    folner_net,
    net_bound,
    parse_m_range,
    phi_apply,
    psi_apply,
    signed_degree,
    uniform_net,
    window_overlap,
    write_convergence_csv,
)
from fellcheck.ck.algebra import PRESETS, CKAlgebra
from fellcheck.errors import AlgebraMismatchError, ConfigError, DomainError
from fellcheck.groups import FreeWord, enumerate_positive, make_finite_group

BUNDLES = bm.standard_bundles()
Z24 = make_finite_group("cyclic", 24)


def W(*letters, n=2):
    return FreeWord(tuple(letters), n)


def cyclic_bundle(order, d=2):
    G = make_finite_group("cyclic", order)
    return bm.semidirect_bundle(G, [np.eye(d)] * order, bm._matrix_units(d, None))


class TestNumericNets:
    def test_indicator_at_e(self, rng):
        b = BUNDLES["Z3-rotate-diag3"]
        a = CoefficientFunction(b.group, {0: np.eye(3)})
        x = bm.random_element(b, rng)
        y = phi_apply(a, x)
        # only tr = r = e contributes, so degree e is kept and the rest vanishes
        assert np.abs(y[0] - x[0]).max() <= 1e-12
        assert np.abs(y[1]).max() == 0 and np.abs(y[2]).max() == 0

    @pytest.mark.parametrize("name", sorted(BUNDLES))
    def test_uniform_net_is_identity(self, name, rng):
        b = BUNDLES[name]
        a = uniform_net(b.group, b.dim)
        x = bm.random_element(b, rng)
        y = phi_apply(a, x)
        assert max(np.abs(y[t] - x[t]).max() for t in b.group.elements()) <= 1e-12
        assert net_bound(a) == pytest.approx(1.0)

    def test_empty_support(self, rng):
        b = BUNDLES["Z2-flip-diag2"]
        a = CoefficientFunction(b.group, {})
        assert phi_apply(a, bm.random_element(b, rng)).is_zero()
        assert net_bound(a) == 0

    def test_linearity(self, rng):
        b = BUNDLES["S3-points-diag3"]
        a = CoefficientFunction(b.group, {t: rng.standard_normal((3, 3)) for t in (0, 2, 4)})
        x, y = bm.random_element(b, rng), bm.random_element(b, rng)
        lhs = phi_apply(a, x + y)
        rhs = phi_apply(a, x) + phi_apply(a, y)
        assert (lhs - rhs).is_zero(1e-12)

    def test_completely_positive_proxy(self, rng):
        b = BUNDLES["Z4-rotate-diag4"]
        a = CoefficientFunction(b.group, {t: rng.standard_normal((4, 4)) for t in b.group.elements()})
        for _ in range(10):
            x = bm.random_element(b, rng)
            Y = bm.regular_embed(phi_apply(a, x.adjoint() * x))
            H = (Y.matrix + Y.matrix.conj().T) / 2
            assert np.linalg.eigvalsh(H).min() >= -1e-10 * max(1, Y.norm())

    def test_mismatch(self, allones2, rng):
        with pytest.raises(AlgebraMismatchError):
            psi_apply(uniform_net(Z24, 2), allones2.unit(), 0)
        with pytest.raises(AlgebraMismatchError):
            phi_apply(uniform_net(Z24, 2), bm.random_element(BUNDLES["Z2-flip-diag2"], rng))


class TestFolner:
    @pytest.mark.parametrize("N", [0, 1, 3, 5])
    def test_fejer_coefficients(self, N, rng):
        b = cyclic_bundle(24)
        a = folner_net(N, b.group, 2)
        for t in range(24):
            st_ = signed_degree(t, 24)
            if abs(st_) > 2 * N + 1:
                continue
            assert window_overlap(a, t) == fejer_coefficient(N, st_)
            bt = bm.random_fiber_element(b, t, rng)
            assert np.abs(psi_apply(a, bt, t) - float(fejer_coefficient(N, st_)) * bt).max() <= 1e-12

    def test_full_overlap_and_disjoint(self, rng):
        b = cyclic_bundle(24)
        a = folner_net(2, b.group, 2)
        b0 = bm.random_fiber_element(b, 0, rng)
        assert np.abs(psi_apply(a, b0, 0) - b0).max() <= 1e-12
        assert np.abs(psi_apply(a, b0, 6)).max() == 0

    def test_rate(self, rng):
        b = cyclic_bundle(24)
        support = [0, 1, 2, 22, 23]
        x = bm.random_element(b, rng, support=support)
        errs = []
        for N in range(1, 6):
            y = phi_apply(folner_net(N, b.group, 2), x)
            err = bm.regular_embed(y - x).norm()
            bound = bm.regular_embed(x).norm() * max(abs(signed_degree(t, 24)) for t in support) / (2 * N + 1)
            errs.append(err)
            assert err <= bound * len(support) + 1e-12
        assert errs == sorted(errs, reverse=True)

    def test_window_too_wide(self):
        with pytest.raises(DomainError):
            folner_net(6, Z24, 2)

    @given(st.integers(0, 20), st.integers(-50, 50))
    def test_fejer_formula(self, N, t):
        c = fejer_coefficient(N, t)
        assert 0 <= c <= 1
        assert c == max(Fraction(0), Fraction(2 * N + 1 - abs(t), 2 * N + 1))


class TestCKNet:
    def test_m1(self, allones2):
        a = ck_net(1, allones2)
        assert set(a.values) == {W(), W(1), W(2)}
        assert a.values[W(1)] == allones2.projection(1)
        assert a.scale_sq == 1

    def test_inadmissible_words_dropped(self):
        fib = CKAlgebra.of(PRESETS["fib2"])
        a = ck_net(2, fib)
        assert W(2, 2) not in a.values and W(1, 2) in a.values

    @pytest.mark.parametrize("name", sorted(PRESETS))
    @pytest.mark.parametrize("m", [1, 2, 3, 5])
    def test_gram_is_scalar(self, name, m):
        # direct count: sum_{k=0}^m m^-1 sum_{P_k} e(a) = (m+1)/m by the partition of unity
        a = ck_net(m, CKAlgebra.of(PRESETS[name]))
        assert net_bound(a) == Fraction(m + 1, m)

    def test_invalid_m(self, allones2):
        with pytest.raises(DomainError):
            ck_net(0, allones2)

    @pytest.mark.parametrize("m", [2, 4])
    def test_phi_of_vertex_projection(self, allones2, m):
        a = ck_net(m, allones2)
        for j in (1, 2):
            p = allones2.projection(j)
            direct = allones2.zero()
            for k in range(m + 1):
                for w in enumerate_positive(2, k):
                    e = allones2.range_projection(w)
                    direct = direct + e * p * e
            assert phi_apply(a, p) == direct.scale(Fraction(1, m))
            assert phi_apply(a, p) == p.scale(Fraction(m + 1, m))

    @settings(max_examples=20, deadline=None)
    @given(st.lists(st.sampled_from([1, 2, -1, -2]), max_size=3))
    def test_degree_preserved(self, letters):
        alg = CKAlgebra.of(PRESETS["allones2"])
        t = FreeWord(tuple(letters), 2)
        x = alg.partial_rep(t)
        y = phi_apply(ck_net(3, alg), x)
        assert y.degrees() <= {t}


class TestConvergenceExperiment:
    def test_main_coefficients(self, allones2):
        res = ck_convergence_experiment(W(1, -2), range(4, 11), allones2)
        assert [r.main_coeff for r in res.rows] == [Fraction(m - 2, m) for m in range(4, 11)]
        assert res.rows[-1].main_coeff == Fraction(8, 10)
        assert all(r.coeff_ok and r.sum_orders_agree and r.tail_ok for r in res.rows)
        assert res.monotone and res.passed

    def test_identity_word(self, allones2):
        res = ck_convergence_experiment(W(), [3, 5], allones2)
        assert [r.main_coeff for r in res.rows] == [Fraction(4, 3), Fraction(6, 5)]
        assert res.notes

    @pytest.mark.parametrize("letters", [(1,), (1, 2), (-1,), (2, 1, -1), (1, -2, -1)])
    def test_tail_estimates(self, letters):
        alg = CKAlgebra.of(PRESETS["allones2"])
        t = FreeWord(letters, 2)
        res = ck_convergence_experiment(t, range(max(len(t), 1), 9), alg)
        assert all(r.tail_norm_estimate <= float(r.tail_bound) + 0.05 for r in res.rows)
        # the closed form counts slices |beta|..m-|t|, meaningful once that range is non-negative
        first = len(t) + len(res.beta) - 1
        assert all(r.coeff_ok for r in res.rows if r.m >= first)

    def test_short_m_gives_empty_main_block(self):
        alg = CKAlgebra.of(PRESETS["allones2"])
        res = ck_convergence_experiment(W(1, -2, -1), [3], alg)
        assert res.rows[0].main_coeff == 0 and res.rows[0].formula_coeff == Fraction(-1, 3)

    def test_domain_errors(self, allones2, fib2):
        with pytest.raises(DomainError):
            ck_convergence_experiment(W(-1, 2), [4], allones2)
        with pytest.raises(DomainError):
            ck_convergence_experiment(W(2, 2), [4], fib2)
        with pytest.raises(DomainError):
            ck_convergence_experiment(W(1, -2), [1], allones2)

    def test_csv(self, allones2, tmp_path):
        res = ck_convergence_experiment(W(1, -2), [4, 5], allones2)
        path = tmp_path / "c.csv"
        write_convergence_csv(res, path)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1].startswith("4,1,2,1/2,")

    def test_m_range(self):
        assert parse_m_range("4..10") == range(4, 11)
        assert parse_m_range("7") == range(7, 8)
        for bad in ("x", "5..3", "0..2"):
            with pytest.raises(ConfigError):
                parse_m_range(bad)
