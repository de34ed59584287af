"""Ideals of the regular-embedding algebra of a finite Fell bundle, as linear subspaces.

The algebra is ``span{pi(b delta_t)}`` inside the ``|G| d x |G| d`` matrices. An
ideal is stored by an orthonormal basis of flattened matrices (trace inner product).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .bundle import TOL, BundleElement, FiniteFellBundle, GradedOperator, expectation, fourier, opnorm, regular_embed
from .errors import ConfigError, DomainError

__all__ = [
    "IdealSubspace",
    "AlgebraData",
    "algebra_data",
    "ideal_closure",
    "induced_J1",
    "induced_J2",
    "check_J3",
    "verify_induced_theorems",
    "InducedReport",
    "quotient_grading",
    "QuotientReport",
    "minimal_central_projections",
    "hereditary_check",
    "induced_ideal",
]

MAX_IDEAL_DIM = 4096


def _orth(vectors: np.ndarray, tol: float = TOL) -> np.ndarray:
    if vectors.size == 0 or vectors.shape[0] == 0:
        return np.zeros((0, vectors.shape[1] if vectors.ndim == 2 else 0), dtype=complex)
    _, sv, vh = np.linalg.svd(vectors, full_matrices=False)
    if sv.size == 0:
        return vh[:0]
    return vh[: int(np.sum(sv > tol * max(1.0, sv[0])))]


def _residuals(basis: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Components of ``vectors`` orthogonal to the row space of ``basis``."""
    if basis.shape[0] == 0:
        return vectors
    return vectors - (vectors @ basis.conj().T) @ basis


def _intersect(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of rowspace(a) intersected with rowspace(b); both orthonormal."""
    if a.shape[0] == 0 or b.shape[0] == 0:
        return a[:0]
    # x = c a lies in span(b) iff its residual vanishes: null space of c -> residual
    R = _residuals(b, a)
    _, sv, vh = np.linalg.svd(R.T, full_matrices=True)
    rank = int(np.sum(sv > tol))
    null = vh[rank:].conj()
    return _orth(null @ a)


@dataclass
class IdealSubspace:
    basis: np.ndarray  # k x N^2, orthonormal rows
    size: int  # N
    label: str = ""

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def matrices(self) -> list[np.ndarray]:
        return [b.reshape(self.size, self.size) for b in self.basis]

    def residual(self, m: np.ndarray) -> float:
        v = np.asarray(m, dtype=complex).reshape(1, -1)
        return float(np.linalg.norm(_residuals(self.basis, v)))

    def contains(self, m: np.ndarray, tol: float = TOL) -> bool:
        return self.residual(m) <= tol * max(1.0, float(np.linalg.norm(m)))

    def contains_subspace(self, other: IdealSubspace, tol: float = TOL) -> float:
        """Largest residual of ``other``'s basis against self (0 when contained)."""
        if other.dim == 0:
            return 0.0
        return float(np.linalg.norm(_residuals(self.basis, other.basis), axis=1).max())

    def unit(self) -> np.ndarray:
        """Projection onto the joint range of the ideal's elements (its unit)."""
        if self.dim == 0:
            return np.zeros((self.size, self.size), dtype=complex)
        stacked = np.hstack(self.matrices())
        u, sv, _ = np.linalg.svd(stacked, full_matrices=False)
        r = int(np.sum(sv > 1e-9 * max(1.0, sv[0])))
        q = u[:, :r]
        return q @ q.conj().T


@dataclass
class AlgebraData:
    """Basis of the embedded algebra, split by degree."""

    bundle: FiniteFellBundle
    size: int
    by_degree: dict[int, np.ndarray]  # t -> orthonormal basis of pi(B_t) (flattened)
    _structure: tuple | None = field(default=None, repr=False)

    @cached_property
    def basis(self) -> np.ndarray:
        return np.vstack([b for b in self.by_degree.values() if b.shape[0]] or [np.zeros((0, self.size**2))])

    def matrices(self) -> list[np.ndarray]:
        return [b.reshape(self.size, self.size) for b in self.basis]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def structure(self) -> tuple[np.ndarray, np.ndarray]:
        """left[a] and right[a]: coordinate matrices of x -> b_a x and x -> x b_a."""
        if self._structure is None:
            B = self.basis
            mats = self.matrices()
            k = len(mats)
            left = np.zeros((k, k, k), dtype=complex)
            right = np.zeros((k, k, k), dtype=complex)
            for a, ma in enumerate(mats):
                lp = np.array([(ma @ mb).ravel() for mb in mats]).reshape(k, -1)
                rp = np.array([(mb @ ma).ravel() for mb in mats]).reshape(k, -1)
                left[a] = (lp @ B.conj().T).T
                right[a] = (rp @ B.conj().T).T
            self._structure = (left, right)
        return self._structure


def algebra_data(bundle: FiniteFellBundle) -> AlgebraData:
    N = bundle.order * bundle.dim
    by_degree = {}
    for t in bundle.group.elements():
        ops = [regular_embed(BundleElement(bundle, {t: m})).matrix.ravel() for m in bundle.fibers[t].matrices()]
        # pi is isometric up to the factor |G| in the trace norm, so re-orthonormalise
        by_degree[t] = _orth(np.array(ops).reshape(len(ops), N * N)) if ops else np.zeros((0, N * N), dtype=complex)
    return AlgebraData(bundle, N, by_degree)


def ideal_closure(generators: Sequence[np.ndarray], alg: AlgebraData, cap: int = MAX_IDEAL_DIM, label: str = "") -> IdealSubspace:
    """Smallest subspace containing ``generators`` and stable under a x, x a for a in the algebra.

    Works in coordinates for the algebra's orthonormal basis, using the structure
    constants of left and right multiplication.
    """
    N = alg.size
    gens = np.array([np.asarray(g, dtype=complex).ravel() for g in generators]).reshape(len(generators), N * N)
    coords = gens @ alg.basis.conj().T
    if gens.shape[0] and np.linalg.norm(gens - coords @ alg.basis, axis=1).max() > 1e-8 * max(1.0, np.abs(gens).max()):
        raise DomainError("ideal generators must lie in the algebra")
    left, right = alg.structure()
    basis = _orth(coords, tol=1e-9)
    frontier = basis
    while frontier.shape[0]:
        cands = np.concatenate([
            np.einsum("aij,kj->aki", left, frontier).reshape(-1, alg.dim),
            np.einsum("aij,kj->aki", right, frontier).reshape(-1, alg.dim),
        ])
        new = _orth(_residuals(basis, cands), tol=1e-9)
        new = _orth(_residuals(basis, new), tol=1e-9)
        if basis.shape[0] + new.shape[0] > cap:
            raise ConfigError(f"ideal dimension exceeds cap {cap}")
        basis = np.vstack([basis, new]) if basis.shape[0] else new
        frontier = new
    return IdealSubspace(basis @ alg.basis if basis.shape[0] else np.zeros((0, N * N), dtype=complex), N, label)


def induced_ideal(bundle: FiniteFellBundle, generators_e: Sequence[np.ndarray], alg: AlgebraData | None = None, label: str = "") -> IdealSubspace:
    """Ideal generated by pi(b delta_e) for b in ``generators_e`` (each in B_e)."""
    alg = alg or algebra_data(bundle)
    gens = [regular_embed(BundleElement(bundle, {bundle.group.identity: g})).matrix for g in generators_e]
    return ideal_closure(gens, alg, label=label)


def induced_J1(J: IdealSubspace, alg: AlgebraData) -> IdealSubspace:
    """Ideal generated by J intersected with pi(B_e)."""
    inter = _intersect(alg.by_degree[alg.bundle.group.identity], J.basis)
    return ideal_closure([v.reshape(J.size, J.size) for v in inter], alg, label="J1")


def induced_J2(J: IdealSubspace, alg: AlgebraData) -> IdealSubspace:
    """{b : every Fourier component of b lies in J} = direct sum of J cap pi(B_t)."""
    parts = [_intersect(alg.by_degree[t], J.basis) for t in alg.bundle.group.elements()]
    parts = [p for p in parts if p.shape[0]]
    basis = _orth(np.vstack(parts)) if parts else np.zeros((0, J.size**2), dtype=complex)
    return IdealSubspace(basis, J.size, "J2")


def check_J3(b: GradedOperator | np.ndarray, J: IdealSubspace, bundle: FiniteFellBundle, tol: float = TOL) -> bool:
    """E(b* b), placed back in degree e, belongs to J."""
    op = b if isinstance(b, GradedOperator) else GradedOperator(bundle.group, bundle.dim, b)
    exx = expectation(op.adjoint() @ op, tol=1e-9)
    emb = regular_embed(BundleElement(bundle, {bundle.group.identity: exx})).matrix
    return J.contains(emb, tol)


@dataclass
class InducedReport:
    dims: dict
    j1_in_j2_residual: float
    j2_equals_j3: bool
    j3_disagreements: int
    j1_equals_j2: bool
    j_two_sided_residual: float
    fourier_sum_residual: float
    samples: int

    @property
    def passed(self) -> bool:
        return (self.j1_in_j2_residual <= TOL and self.j2_equals_j3 and self.j1_equals_j2
                and self.fourier_sum_residual <= TOL)

    def to_dict(self) -> dict:
        return {**self.__dict__, "passed": self.passed}


def _two_sided_residual(J: IdealSubspace, alg: AlgebraData) -> float:
    worst = 0.0
    for m in J.matrices():
        for a in alg.matrices():
            worst = max(worst, J.residual(a @ m), J.residual(m @ a))
        worst = max(worst, J.residual(m.conj().T))
    return worst


def verify_induced_theorems(bundle: FiniteFellBundle, J: IdealSubspace, alg: AlgebraData | None = None,
                            complement_samples: int = 50, seed: int = 0) -> InducedReport:
    alg = alg or algebra_data(bundle)
    rng = np.random.default_rng(seed)
    J1, J2 = induced_J1(J, alg), induced_J2(J, alg)
    G, d = bundle.group, bundle.dim

    disagreements = 0
    fourier_res = 0.0
    for m in J2.matrices():
        if not check_J3(m, J, bundle):
            disagreements += 1
    # complement of J2 inside the algebra
    comp = _orth(_residuals(J2.basis, alg.basis))
    for _ in range(complement_samples if comp.shape[0] else 0):
        c = rng.standard_normal(comp.shape[0]) + 1j * rng.standard_normal(comp.shape[0])
        v = (c @ comp).reshape(J.size, J.size)
        if check_J3(v, J, bundle):
            disagreements += 1
        # E(b*b) = sum_t F_t(b)* F_t(b)
        op = GradedOperator(G, d, v)
        lhs = expectation(op.adjoint() @ op, tol=1e-9)
        rhs = sum(fourier(op, t, tol=1e-9).conj().T @ fourier(op, t, tol=1e-9) for t in G.elements())
        fourier_res = max(fourier_res, float(np.abs(lhs - rhs).max()) / max(1.0, float(np.abs(lhs).max())))

    return InducedReport(
        dims={"J": J.dim, "J1": J1.dim, "J2": J2.dim, "algebra": alg.dim},
        j1_in_j2_residual=J2.contains_subspace(J1),
        j2_equals_j3=disagreements == 0,
        j3_disagreements=disagreements,
        j1_equals_j2=J1.dim == J2.dim and J1.contains_subspace(J2) <= 1e-8,
        j_two_sided_residual=_two_sided_residual(J, alg),
        fourier_sum_residual=fourier_res,
        samples=J2.dim + (complement_samples if comp.shape[0] else 0),
    )


@dataclass
class QuotientReport:
    fiber_dims: dict
    quotient_dims: dict
    worst_norm_gap: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.worst_norm_gap <= 1e-8

    def to_dict(self) -> dict:
        return {
            "fiber_dims": {str(k): v for k, v in self.fiber_dims.items()},
            "quotient_dims": {str(k): v for k, v in self.quotient_dims.items()},
            "worst_norm_gap": self.worst_norm_gap,
            "samples": self.samples,
            "passed": self.passed,
        }


def quotient_grading(bundle: FiniteFellBundle, J: IdealSubspace, alg: AlgebraData | None = None,
                     samples: int = 20, seed: int = 0) -> QuotientReport:
    """Fibre dimensions of B/J, and ||x + J|| = ||x + (J cap pi(B_t))|| for x in pi(B_t).

    ||x + J|| is computed as ||x (1 - z)|| with z the unit of J. The distance to
    J cap pi(B_t) is bounded above by ||x - P(x z)|| (P the projection onto that
    fibre slice) and below by ||x + J|| because the slice sits inside J.
    """
    alg = alg or algebra_data(bundle)
    J1 = induced_J1(J, alg)
    if J1.dim != J.dim or J1.contains_subspace(J) > 1e-8:
        raise DomainError("quotient grading needs an induced ideal (J equal to the ideal generated by J cap B_e)")
    rng = np.random.default_rng(seed)
    z = J.unit()
    eye = np.eye(J.size)
    fiber_dims, quotient_dims = {}, {}
    gap = 0.0
    count = 0
    for t in bundle.group.elements():
        Bt = alg.by_degree[t]
        Kt = _intersect(Bt, J.basis)
        fiber_dims[t] = Bt.shape[0]
        quotient_dims[t] = Bt.shape[0] - Kt.shape[0]
        for _ in range(samples if Bt.shape[0] else 0):
            c = rng.standard_normal(Bt.shape[0]) + 1j * rng.standard_normal(Bt.shape[0])
            x = (c @ Bt).reshape(J.size, J.size)
            dist_J = opnorm(x @ (eye - z))
            xz = (x @ z).ravel()
            proj = (xz @ Kt.conj().T) @ Kt if Kt.shape[0] else np.zeros_like(xz)
            dist_K = opnorm(x - proj.reshape(J.size, J.size))
            gap = max(gap, abs(dist_K - dist_J))
            count += 1
    return QuotientReport(fiber_dims, quotient_dims, gap, count)


def minimal_central_projections(alg: AlgebraData, seed: int = 0) -> list[np.ndarray]:
    """Minimal central projections, from the spectrum of a random self-adjoint central element."""
    N = alg.size
    A = alg.matrices()
    # centre = {z in span(A) : z a = a z for all a}
    B = alg.basis
    rows = []
    for a in A:
        rows.append(np.array([(b.reshape(N, N) @ a - a @ b.reshape(N, N)).ravel() for b in B]).T)
    M = np.vstack(rows)
    _, sv, vh = np.linalg.svd(M, full_matrices=False)
    rank = int(np.sum(sv > 1e-9 * max(1.0, sv[0] if sv.size else 1.0)))
    centre = [(c.conj() @ B).reshape(N, N) for c in vh[rank:]]
    rng = np.random.default_rng(seed)
    z = sum(rng.standard_normal() * (c + c.conj().T) for c in centre)
    w, v = np.linalg.eigh(z)
    projections = []
    used = np.zeros(len(w), bool)
    for i in range(len(w)):
        if used[i]:
            continue
        group = np.abs(w - w[i]) < 1e-7
        used |= group
        q = v[:, group]
        projections.append(q @ q.conj().T)
    # eigenspaces of z on vectors killed by the algebra are not in the algebra; drop those
    return [p for p in projections if np.linalg.norm(_residuals(B, p.reshape(1, -1))) < 1e-8]


def hereditary_check(J: IdealSubspace, alg: AlgebraData, samples: int = 10, seed: int = 0) -> float:
    """For positive z in J of degree e and c = w z^(1/2) (||w|| <= 1, w in the algebra), c* c lies in J."""
    rng = np.random.default_rng(seed)
    e = alg.bundle.group.identity
    slice_e = _intersect(alg.by_degree[e], J.basis)
    if slice_e.shape[0] == 0:
        return 0.0
    N = J.size
    worst = 0.0
    for _ in range(samples):
        y = (rng.standard_normal(slice_e.shape[0]) @ slice_e).reshape(N, N)
        z = y.conj().T @ y
        w_eig, v = np.linalg.eigh((z + z.conj().T) / 2)
        root = (v * np.sqrt(np.clip(w_eig, 0, None))) @ v.conj().T
        a = (rng.standard_normal(alg.dim) @ alg.basis).reshape(N, N)
        a = a / max(opnorm(a), 1e-12)
        c = a @ root
        worst = max(worst, J.residual(c.conj().T @ c) / max(1.0, float(np.linalg.norm(c))))
    return worst
