import numpy as np
import pytest

from fellcheck import bundle as bm
from fellcheck import ideals as im
from fellcheck.errors import ConfigError, DomainError

BUNDLES = bm.standard_bundles()


def brute_ideal_dim(gens, alg):
    """Oracle for a unital algebra: the ideal generated by g is span{a g b}."""
    mats = alg.matrices()
    vecs = [(a @ g @ b).ravel() for g in gens for a in mats for b in mats]
    return np.linalg.matrix_rank(np.array(vecs), tol=1e-8) if vecs else 0


def unit_e(b, i):
    E = np.zeros((b.dim, b.dim))
    E[i, i] = 1.0
    return E


@pytest.fixture(scope="module")
def z2diag():
    b = BUNDLES["Z2-trivial-diag2"]
    return b, im.algebra_data(b)


class TestClosure:
    def test_zero_and_identity(self, z2diag):
        b, alg = z2diag
        assert im.ideal_closure([], alg).dim == 0
        assert im.ideal_closure([np.zeros((4, 4))], alg).dim == 0
        assert im.ideal_closure([np.eye(4)], alg).dim == alg.dim == 4

    def test_minimal_central_projection(self, z2diag):
        _, alg = z2diag
        projections = im.minimal_central_projections(alg)
        assert len(projections) == 4
        for p in projections:
            assert im.ideal_closure([p], alg).dim == 1
        assert np.allclose(sum(projections), np.eye(4))

    @pytest.mark.parametrize("name", ["Z2-partial-4", "Z3-rotate-diag3", "Z4-swap-diag5", "S3-points-diag3"])
    def test_against_brute_force(self, name):
        b = BUNDLES[name]
        alg = im.algebra_data(b)
        for i in range(b.dim):
            g = bm.regular_embed(bm.BundleElement(b, {b.group.identity: unit_e(b, i)})).matrix
            if not b.fibers[b.group.identity].contains(unit_e(b, i)):
                continue
            J = im.ideal_closure([g], alg)
            assert J.dim == brute_ideal_dim([g], alg)

    def test_invariance(self):
        b = BUNDLES["Z2-partial-4"]
        alg = im.algebra_data(b)
        J = im.induced_ideal(b, [unit_e(b, 0)], alg)
        assert im._two_sided_residual(J, alg) <= 1e-10

    def test_generator_outside_algebra(self, z2diag):
        _, alg = z2diag
        off = np.zeros((4, 4))
        off[0, 1] = 1
        with pytest.raises(DomainError):
            im.ideal_closure([off], alg)

    def test_cap(self):
        b = BUNDLES["S3-regular-diag6"]
        alg = im.algebra_data(b)
        with pytest.raises(ConfigError):
            im.ideal_closure([np.eye(36)], alg, cap=10)


class TestInducedTheorems:
    def test_zero_ideal(self, z2diag):
        b, alg = z2diag
        J = im.ideal_closure([], alg)
        rep = im.verify_induced_theorems(b, J, alg)
        assert rep.passed and rep.dims == {"J": 0, "J1": 0, "J2": 0, "algebra": 4}

    def test_whole_algebra(self, z2diag):
        b, alg = z2diag
        J = im.ideal_closure([np.eye(4)], alg)
        assert im.induced_J1(J, alg).dim == im.induced_J2(J, alg).dim == 4

    def test_central_block(self, z2diag):
        b, alg = z2diag
        p = im.minimal_central_projections(alg)[0]
        J = im.ideal_closure([p], alg)
        rep = im.verify_induced_theorems(b, J, alg)
        assert rep.passed and rep.dims["J1"] == rep.dims["J2"]

    @pytest.mark.parametrize("name", ["Z3-rotate-blocks6", "S3-points-diag3", "Z4-swap-diag5", "Z2-partial-4"])
    def test_induced(self, name):
        b = BUNDLES[name]
        alg = im.algebra_data(b)
        J = im.induced_ideal(b, [unit_e(b, 0)], alg)
        rep = im.verify_induced_theorems(b, J, alg, complement_samples=20)
        assert rep.passed
        assert rep.dims["J"] == rep.dims["J1"] == rep.dims["J2"]

    def test_j3_examples(self):
        b = BUNDLES["Z2-partial-4"]
        alg = im.algebra_data(b)
        J = im.induced_ideal(b, [unit_e(b, 2)], alg)
        assert im.check_J3(np.zeros((8, 8)), J, b)
        J2 = im.induced_J2(J, alg)
        assert all(im.check_J3(m, J, b) for m in J2.matrices())
        outside = bm.regular_embed(bm.BundleElement(b, {0: unit_e(b, 0)})).matrix
        assert not im.check_J3(outside, J, b)

    def test_hereditary(self):
        b = BUNDLES["Z4-swap-diag5"]
        alg = im.algebra_data(b)
        J = im.induced_ideal(b, [unit_e(b, 3)], alg)
        assert im.hereditary_check(J, alg) <= 1e-9


class TestQuotient:
    def test_zero_ideal(self, z2diag):
        b, alg = z2diag
        rep = im.quotient_grading(b, im.ideal_closure([], alg), alg)
        assert rep.quotient_dims == rep.fiber_dims and rep.passed

    def test_whole(self, z2diag):
        b, alg = z2diag
        rep = im.quotient_grading(b, im.ideal_closure([np.eye(4)], alg), alg)
        assert set(rep.quotient_dims.values()) == {0}

    def test_block(self, z2diag):
        b, alg = z2diag
        J = im.induced_ideal(b, [unit_e(b, 0)], alg)
        rep = im.quotient_grading(b, J, alg)
        # C^2 (x) C[Z2] modulo the first coordinate leaves one dimension per degree
        assert rep.quotient_dims == {0: 1, 1: 1} and rep.passed

    @pytest.mark.parametrize("name", ["Z3-rotate-blocks6", "Z4-swap-diag5"])
    def test_norms(self, name):
        b = BUNDLES[name]
        alg = im.algebra_data(b)
        J = im.induced_ideal(b, [unit_e(b, b.dim - 1)], alg)
        rep = im.quotient_grading(b, J, alg, samples=5)
        assert rep.passed and rep.to_dict()["passed"]

    def test_not_induced(self, z2diag):
        b, alg = z2diag
        J = im.ideal_closure([im.minimal_central_projections(alg)[0]], alg)
        assert J.dim == 1 and im.induced_J1(J, alg).dim == 0
        with pytest.raises(DomainError):
            im.quotient_grading(b, J, alg)

    def test_not_induced_z4(self):
        b = BUNDLES["Z4-swap-diag5"]
        alg = im.algebra_data(b)
        J = im.ideal_closure([im.minimal_central_projections(alg)[0]], alg)
        assert im.induced_J1(J, alg).dim < J.dim
        with pytest.raises(DomainError):
            im.quotient_grading(b, J, alg)
