"""Fell bundles over finite groups, realised as matrix subspaces, and their regular embedding.

A fibre ``B_t`` is a linear span of ``d x d`` complex matrices. Sections are maps
``t -> b_t``; the regular embedding sends a section to the ``|G| x |G|`` block
matrix with block ``(r, s)`` equal to ``b_{r s^-1}`` (the matrix form of
``sum_t b_t (x) lambda_t``).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import ConstructionError, EquivarianceError
from .groups import FiniteGroup, make_finite_group

__all__ = [
    "TOL",
    "Subspace",
    "FiniteFellBundle",
    "BundleReport",
    "BundleElement",
    "GradedOperator",
    "validate",
    "semidirect_bundle",
    "permutation_bundle",
    "standard_bundles",
    "regular_embed",
    "right_regular",
    "fourier",
    "expectation",
    "random_element",
    "random_fiber_element",
    "faithfulness_check",
    "norm_preservation_check",
    "right_regular_commutant_check",
    "cstar_inequality_check",
    "CheckResult",
    "opnorm",
    "load_bundle",
    "save_bundle",
    "norm_table",
    "write_norm_csv",
]

TOL = 1e-10


def opnorm(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


class Subspace:
    """Span of a list of equally shaped matrices, with an orthonormal basis for the trace inner product."""

    def __init__(self, mats: Sequence[np.ndarray], shape: tuple[int, int], tol: float = TOL):
        self.shape = shape
        if len(mats) == 0:
            self.basis = np.zeros((0, shape[0] * shape[1]), dtype=complex)
            return
        vecs = np.array([np.asarray(m, dtype=complex).ravel() for m in mats]).reshape(len(mats), -1)
        _, sv, vh = np.linalg.svd(vecs, full_matrices=False)
        cutoff = tol * max(1.0, sv[0]) if len(sv) else tol
        self.basis = vh[: int(np.sum(sv > cutoff))]

    @classmethod
    def from_basis(cls, basis: np.ndarray, shape) -> Subspace:
        out = cls.__new__(cls)
        out.shape = tuple(shape)
        out.basis = basis
        return out

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def matrices(self) -> list[np.ndarray]:
        return [b.reshape(self.shape) for b in self.basis]

    def coords(self, m: np.ndarray) -> np.ndarray:
        return self.basis.conj() @ np.asarray(m, dtype=complex).ravel()

    def project(self, m: np.ndarray) -> np.ndarray:
        return (self.basis.T @ self.coords(m)).reshape(self.shape)

    def residual(self, m: np.ndarray) -> float:
        return float(np.linalg.norm(np.asarray(m) - self.project(m)))

    def contains(self, m: np.ndarray, tol: float = TOL) -> bool:
        return self.residual(m) <= tol * max(1.0, float(np.linalg.norm(m)))


@dataclass
class BundleReport:
    passed: bool
    violations: list[dict] = field(default_factory=list)
    fiber_dims: dict = field(default_factory=dict)
    max_residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "violations": self.violations,
            "fiber_dims": {str(k): v for k, v in self.fiber_dims.items()},
            "max_residual": self.max_residual,
        }


class FiniteFellBundle:
    """Matrix-subspace fibres over a finite group.

    Construction does not validate; call :func:`validate` (or ``require_valid``).
    """

    def __init__(self, group: FiniteGroup, dim: int, fibers: Mapping[int, Sequence[np.ndarray]], name: str = ""):
        self.group = group
        self.dim = int(dim)
        self.name = name or group.name
        self.spanning = {t: [np.asarray(m, dtype=complex) for m in fibers.get(t, [])] for t in group.elements()}
        for t, mats in self.spanning.items():
            for m in mats:
                if m.shape != (self.dim, self.dim):
                    raise ConstructionError(f"fibre {t} holds a {m.shape} matrix, expected {(self.dim, self.dim)}")
        self.fibers = {t: Subspace(mats, (self.dim, self.dim)) for t, mats in self.spanning.items()}
        self._report: BundleReport | None = None

    @property
    def order(self) -> int:
        return self.group.order

    def fiber(self, t: int) -> Subspace:
        return self.fibers[t]

    def fiber_dims(self) -> dict[int, int]:
        return {t: f.dim for t, f in self.fibers.items()}

    def total_dim(self) -> int:
        return sum(self.fiber_dims().values())

    def require_valid(self) -> FiniteFellBundle:
        report = validate(self)
        if not report.passed:
            v = report.violations[0]
            raise ConstructionError(f"bundle axiom {v['check']} fails at {v.get('t')},{v.get('s')}: residual {v['residual']:.3e}")
        return self


def validate(bundle: FiniteFellBundle, tol: float = TOL) -> BundleReport:
    """Check the adjoint and multiplicativity conditions on orthonormal bases."""
    G = bundle.group
    violations = []
    worst = 0.0

    def note(check, t, s, res):
        nonlocal worst
        worst = max(worst, res)
        if res > tol:
            violations.append({"check": check, "t": t, "s": s, "residual": res})

    for t in G.elements():
        Ft, Fti = bundle.fibers[t], bundle.fibers[G.inv(t)]
        if Ft.dim != Fti.dim:
            violations.append({"check": "adjoint-dim", "t": t, "s": None, "residual": float(abs(Ft.dim - Fti.dim))})
        for b in Ft.matrices():
            note("adjoint", t, None, Fti.residual(b.conj().T))
    for t in G.elements():
        for s in G.elements():
            target = bundle.fibers[G.mul(t, s)]
            for b in bundle.fibers[t].matrices():
                for c in bundle.fibers[s].matrices():
                    p = b @ c
                    note("multiplicative", t, s, target.residual(p))
    report = BundleReport(not violations, violations, bundle.fiber_dims(), worst)
    bundle._report = report
    return report


def _unitary_check(u: np.ndarray, tol: float) -> bool:
    return np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=tol)


def semidirect_bundle(
    group: FiniteGroup,
    unitaries: Mapping[int, np.ndarray] | Sequence[np.ndarray],
    subalg: Sequence[np.ndarray],
    name: str = "",
    tol: float = TOL,
) -> FiniteFellBundle:
    """Fibres ``span(subalg) . u_t`` for an action ``t -> Ad(u_t)`` preserving the subalgebra."""
    U = {t: np.asarray(unitaries[t], dtype=complex) for t in group.elements()}
    d = U[group.identity].shape[0]
    if not np.allclose(U[group.identity], np.eye(d), atol=tol):
        raise ConstructionError("u_e must be the identity")
    A = Subspace(subalg, (d, d))
    for t, u in U.items():
        if not _unitary_check(u, tol):
            raise ConstructionError(f"u_{t} is not unitary")
        for a in A.matrices():
            if A.residual(u @ a @ u.conj().T) > tol:
                raise ConstructionError(f"Ad(u_{t}) does not preserve the subalgebra")
    for t in group.elements():
        for s in group.elements():
            for a in A.matrices():
                lhs = U[t] @ U[s] @ a @ (U[t] @ U[s]).conj().T
                rhs = U[group.mul(t, s)] @ a @ U[group.mul(t, s)].conj().T
                if np.linalg.norm(lhs - rhs) > tol:
                    raise ConstructionError(f"t -> Ad(u_t) is not an action at ({t}, {s})")
    fibers = {t: [a @ U[t] for a in A.matrices()] for t in group.elements()}
    return FiniteFellBundle(group, d, fibers, name=name)


def _perm_matrix(perm: Sequence[int]) -> np.ndarray:
    d = len(perm)
    m = np.zeros((d, d))
    m[list(perm), np.arange(d)] = 1.0
    return m


def _matrix_units(d: int, blocks: Sequence[int] | None) -> list[np.ndarray]:
    """Matrix units of a block-diagonal subalgebra (``blocks=None`` means the diagonal)."""
    blocks = [1] * d if blocks is None else list(blocks)
    if sum(blocks) != d:
        raise ConstructionError("block sizes must add up to the dimension")
    out, start = [], 0
    for b in blocks:
        for i in range(start, start + b):
            for j in range(start, start + b):
                m = np.zeros((d, d))
                m[i, j] = 1.0
                out.append(m)
        start += b
    return out


def permutation_bundle(
    group: FiniteGroup,
    action: Mapping[int, Sequence[int]],
    blocks: Sequence[int] | None = None,
    name: str = "",
) -> FiniteFellBundle:
    """Semidirect bundle for a permutation action on C^d and a block-diagonal subalgebra."""
    U = {t: _perm_matrix(action[t]) for t in group.elements()}
    d = len(action[group.identity])
    return semidirect_bundle(group, U, _matrix_units(d, blocks), name=name)


def _cyclic_action(k: int, d: int, orbit: int | None = None) -> dict[int, list[int]]:
    # rotate the first `orbit` points, fix the rest
    orbit = k if orbit is None else orbit
    return {t: [(i + t) % orbit if i < orbit else i for i in range(d)] for t in range(k)}


def standard_bundles() -> dict[str, FiniteFellBundle]:
    """The bundles exercised by the numeric suite (all with d <= 6)."""
    z2, z3, z4, s3 = (make_finite_group("cyclic", 2), make_finite_group("cyclic", 3),
                      make_finite_group("cyclic", 4), make_finite_group("symmetric", 3))
    s3_points = {g: list(s3.labels[g]) for g in s3.elements()}
    s3_regular = {g: [s3.mul(g, h) for h in s3.elements()] for g in s3.elements()}
    eye2 = np.eye(2)
    out = {
        "Z2-flip-diag2": permutation_bundle(z2, _cyclic_action(2, 2), name="Z2-flip-diag2"),
        "Z2-trivial-M2": semidirect_bundle(z2, [eye2, eye2], _matrix_units(2, [2]), name="Z2-trivial-M2"),
        "Z2-trivial-diag2": semidirect_bundle(z2, [eye2, eye2], _matrix_units(2, None), name="Z2-trivial-diag2"),
        "Z2-partial-4": permutation_bundle(z2, {0: [0, 1, 2, 3], 1: [1, 0, 2, 3]}, [1, 1, 2], name="Z2-partial-4"),
        "Z3-rotate-diag3": permutation_bundle(z3, _cyclic_action(3, 3), name="Z3-rotate-diag3"),
        "Z3-rotate-blocks6": permutation_bundle(
            z3, {t: [((i // 2 + t) % 3) * 2 + i % 2 for i in range(6)] for t in range(3)}, [2, 2, 2],
            name="Z3-rotate-blocks6",
        ),
        "Z4-rotate-diag4": permutation_bundle(z4, _cyclic_action(4, 4), name="Z4-rotate-diag4"),
        "Z4-swap-diag5": permutation_bundle(
            z4, {t: [(i + t) % 2 if i < 2 else i for i in range(5)] for t in range(4)}, [1, 1, 1, 2],
            name="Z4-swap-diag5",
        ),
        "Z3-partial-diag5": permutation_bundle(z3, _cyclic_action(3, 5), name="Z3-partial-diag5"),
        "S3-points-diag3": permutation_bundle(s3, s3_points, name="S3-points-diag3"),
        "S3-points-blocks5": permutation_bundle(
            s3, {g: p + [3, 4] for g, p in s3_points.items()}, [1, 1, 1, 2], name="S3-points-blocks5"
        ),
        "S3-regular-diag6": permutation_bundle(s3, s3_regular, name="S3-regular-diag6"),
    }
    return out


@dataclass
class BundleElement:
    """A section: one matrix per group element (missing entries are zero)."""

    bundle: FiniteFellBundle
    components: dict[int, np.ndarray]

    def __post_init__(self):
        d = self.bundle.dim
        self.components = {
            t: np.asarray(self.components.get(t, np.zeros((d, d))), dtype=complex) for t in self.bundle.group.elements()
        }

    def __getitem__(self, t: int) -> np.ndarray:
        return self.components[t]

    def check_membership(self, tol: float = TOL) -> float:
        return max(self.bundle.fibers[t].residual(m) for t, m in self.components.items())

    def __add__(self, other: BundleElement) -> BundleElement:
        return BundleElement(self.bundle, {t: self[t] + other[t] for t in self.components})

    def __sub__(self, other: BundleElement) -> BundleElement:
        return BundleElement(self.bundle, {t: self[t] - other[t] for t in self.components})

    def scale(self, c: complex) -> BundleElement:
        return BundleElement(self.bundle, {t: c * m for t, m in self.components.items()})

    def __mul__(self, other: BundleElement) -> BundleElement:
        """Convolution: (x y)(s) = sum_t x(t) y(t^-1 s)."""
        G = self.bundle.group
        out = {}
        for s in G.elements():
            acc = np.zeros((self.bundle.dim, self.bundle.dim), dtype=complex)
            for t in G.elements():
                acc += self[t] @ other[G.mul(G.inv(t), s)]
            out[s] = acc
        return BundleElement(self.bundle, out)

    def adjoint(self) -> BundleElement:
        G = self.bundle.group
        return BundleElement(self.bundle, {t: self[G.inv(t)].conj().T for t in G.elements()})

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(np.abs(m).max(initial=0.0) <= tol for m in self.components.values())


class GradedOperator:
    """A ``|G| d x |G| d`` matrix viewed as a ``|G| x |G|`` array of ``d x d`` blocks."""

    def __init__(self, group: FiniteGroup, dim: int, matrix: np.ndarray):
        self.group = group
        self.dim = dim
        self.matrix = np.asarray(matrix, dtype=complex)
        n = group.order * dim
        if self.matrix.shape != (n, n):
            raise ConstructionError(f"expected a {n}x{n} matrix")

    @classmethod
    def from_blocks(cls, group: FiniteGroup, blocks: np.ndarray) -> GradedOperator:
        g, _, d, _ = blocks.shape
        return cls(group, d, blocks.transpose(0, 2, 1, 3).reshape(g * d, g * d))

    @property
    def blocks(self) -> np.ndarray:
        g, d = self.group.order, self.dim
        return self.matrix.reshape(g, d, g, d).transpose(0, 2, 1, 3)

    def block(self, r: int, s: int) -> np.ndarray:
        d = self.dim
        return self.matrix[r * d:(r + 1) * d, s * d:(s + 1) * d]

    def column(self, s: int) -> list[np.ndarray]:
        """Blocks ``(r, s)`` for all r; for ``s = e`` these are the Fourier coefficients."""
        return [self.block(r, s) for r in self.group.elements()]

    def _like(self, matrix) -> GradedOperator:
        return GradedOperator(self.group, self.dim, matrix)

    def __add__(self, other: GradedOperator) -> GradedOperator:
        return self._like(self.matrix + other.matrix)

    def __sub__(self, other: GradedOperator) -> GradedOperator:
        return self._like(self.matrix - other.matrix)

    def __matmul__(self, other: GradedOperator) -> GradedOperator:
        return self._like(self.matrix @ other.matrix)

    __mul__ = __matmul__

    def scale(self, c: complex) -> GradedOperator:
        return self._like(c * self.matrix)

    def adjoint(self) -> GradedOperator:
        return self._like(self.matrix.conj().T)

    def norm(self) -> float:
        return opnorm(self.matrix)

    def equivariance_residual(self) -> float:
        """Largest deviation of block(r, s) from block(r s^-1, e)."""
        G = self.group
        worst = 0.0
        for r in G.elements():
            for s in G.elements():
                ref = self.block(G.mul(r, G.inv(s)), G.identity)
                worst = max(worst, float(np.abs(self.block(r, s) - ref).max(initial=0.0)))
        return worst


def regular_embed(x: BundleElement) -> GradedOperator:
    G = x.bundle.group
    g, d = G.order, x.bundle.dim
    blocks = np.zeros((g, g, d, d), dtype=complex)
    for r in G.elements():
        for s in G.elements():
            blocks[r, s] = x[G.mul(r, G.inv(s))]
    return GradedOperator.from_blocks(G, blocks)


def right_regular(group: FiniteGroup, dim: int, t: int) -> GradedOperator:
    """Block permutation with identity blocks at (r, s) when r = s t."""
    g = group.order
    blocks = np.zeros((g, g, dim, dim))
    for s in group.elements():
        blocks[group.mul(s, t), s] = np.eye(dim)
    return GradedOperator.from_blocks(group, blocks)


def fourier(xop: GradedOperator, t: int, tol: float = 1e-12) -> np.ndarray:
    """The coefficient at ``t``: block(t s, s), required to agree for every column s."""
    G = xop.group
    ref = xop.block(t, G.identity)
    scale = max(1.0, float(np.abs(xop.matrix).max(initial=0.0)))
    for s in G.elements():
        dev = float(np.abs(xop.block(G.mul(t, s), s) - ref).max(initial=0.0))
        if dev > tol * scale:
            raise EquivarianceError(f"column {s} disagrees at degree {t} by {dev:.3e}")
    return ref.copy()


def expectation(xop: GradedOperator, tol: float = 1e-12) -> np.ndarray:
    return fourier(xop, xop.group.identity, tol)


def random_fiber_element(bundle: FiniteFellBundle, t: int, rng: np.random.Generator) -> np.ndarray:
    F = bundle.fibers[t]
    if F.dim == 0:
        return np.zeros((bundle.dim, bundle.dim), dtype=complex)
    c = rng.standard_normal(F.dim) + 1j * rng.standard_normal(F.dim)
    return (F.basis.T @ c).reshape(bundle.dim, bundle.dim)


def random_element(bundle: FiniteFellBundle, rng: np.random.Generator, support=None) -> BundleElement:
    support = bundle.group.elements() if support is None else support
    return BundleElement(bundle, {t: random_fiber_element(bundle, t, rng) for t in support})


@dataclass
class CheckResult:
    name: str
    passed: bool
    samples: int
    worst: float
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "samples": self.samples, "worst": self.worst, **self.detail}


def faithfulness_check(bundle: FiniteFellBundle, samples: int = 200, seed: int = 0, tol: float = TOL) -> CheckResult:
    """||x||^2 <= |G|^2 ||E(x*x)||, and E(x*x) equals the sum of x(t)* x(t)."""
    rng = np.random.default_rng(seed)
    g2 = bundle.order**2
    worst_ratio = 0.0
    worst_formula = 0.0
    zero_ok = True
    for _ in range(samples):
        x = random_element(bundle, rng)
        X = regular_embed(x)
        exx = expectation(X.adjoint() @ X)
        formula = sum(m.conj().T @ m for m in x.components.values())
        worst_formula = max(worst_formula, float(np.abs(exx - formula).max()))
        lhs, rhs = X.norm() ** 2, g2 * opnorm(exx)
        if lhs > 0:
            worst_ratio = max(worst_ratio, lhs / rhs if rhs > 0 else np.inf)
        zero_ok &= bool(x.is_zero() == (np.abs(X.matrix).max() == 0))
    zero = regular_embed(BundleElement(bundle, {}))
    zero_ok &= opnorm(expectation(zero.adjoint() @ zero)) == 0.0
    passed = bool(worst_ratio <= 1 + tol and worst_formula <= tol and zero_ok)
    return CheckResult("faithfulness", passed, samples, worst_ratio,
                       {"expectation_formula_residual": worst_formula, "zero_iff_components_zero": zero_ok})


def norm_preservation_check(bundle: FiniteFellBundle, samples: int = 200, seed: int = 0, tol: float = TOL) -> CheckResult:
    """||pi(b_t)|| = ||b_t|| for single-fibre elements (relative error)."""
    rng = np.random.default_rng(seed)
    G = bundle.group
    worst = 0.0
    for k in range(samples):
        t = int(rng.integers(G.order))
        b = random_fiber_element(bundle, t, rng)
        nb = opnorm(b)
        npi = regular_embed(BundleElement(bundle, {t: b})).norm()
        if nb > 0:
            worst = max(worst, abs(npi - nb) / nb)
        else:
            worst = max(worst, npi)
    return CheckResult("norm-preservation", worst <= tol, samples, worst)


def right_regular_commutant_check(bundle: FiniteFellBundle, samples: int = 200, seed: int = 0, tol: float = 1e-12) -> CheckResult:
    """rho_t commutes with pi(x); also rho_t rho_s = rho_{st}."""
    rng = np.random.default_rng(seed)
    G, d = bundle.group, bundle.dim
    rho = {t: right_regular(G, d, t) for t in G.elements()}
    worst = 0.0
    for _ in range(samples):
        X = regular_embed(random_element(bundle, rng))
        scale = max(1.0, X.norm())
        for t in G.elements():
            worst = max(worst, opnorm((X @ rho[t] - rho[t] @ X).matrix) / scale)
    composition = max(
        float(np.abs((rho[t] @ rho[s]).matrix - rho[G.mul(s, t)].matrix).max()) for t in G.elements() for s in G.elements()
    )
    return CheckResult("right-regular-commutant", worst <= tol and composition == 0.0, samples, worst,
                       {"composition_residual": composition})


def cstar_inequality_check(samples: int = 200, tuple_size: int = 5, dim: int = 4, seed: int = 0, tol: float = TOL) -> CheckResult:
    """||sum x_i* y_i||^2 <= ||sum x_i* x_i|| ||sum y_i* y_i|| on random matrix tuples."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(samples):
        xs = rng.standard_normal((tuple_size, dim, dim)) + 1j * rng.standard_normal((tuple_size, dim, dim))
        ys = rng.standard_normal((tuple_size, dim, dim)) + 1j * rng.standard_normal((tuple_size, dim, dim))
        lhs = opnorm(np.einsum("kji,kjl->il", xs.conj(), ys)) ** 2
        rhs = opnorm(np.einsum("kji,kjl->il", xs.conj(), xs)) * opnorm(np.einsum("kji,kjl->il", ys.conj(), ys))
        worst = max(worst, (lhs - rhs) / max(rhs, 1.0))
    return CheckResult("cstar-inequality", worst <= tol, samples, float(worst))


# serialisation

def _mat_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _mat_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ConstructionError("matrices are rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def bundle_to_json(bundle: FiniteFellBundle) -> dict:
    return {
        "name": bundle.name,
        "group": bundle.group.to_json(),
        "dim": bundle.dim,
        "fibers": {str(t): [_mat_to_json(m) for m in mats] for t, mats in bundle.spanning.items()},
    }


def bundle_from_json(data: dict) -> FiniteFellBundle:
    try:
        group = FiniteGroup.from_json(data["group"])
        fibers = {int(t): [_mat_from_json(m) for m in mats] for t, mats in data["fibers"].items()}
        return FiniteFellBundle(group, int(data["dim"]), fibers, name=data.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConstructionError):
            raise
        raise ConstructionError(f"malformed bundle description: {exc}") from exc


def save_bundle(bundle: FiniteFellBundle, path: str | Path) -> None:
    Path(path).write_text(json.dumps(bundle_to_json(bundle)))


def load_bundle(path: str | Path) -> FiniteFellBundle:
    return bundle_from_json(json.loads(Path(path).read_text()))


def norm_table(bundle: FiniteFellBundle, samples: int = 20, seed: int = 0) -> list[dict]:
    """Per-sample norms of b_t, pi(b_t) and the largest Fourier coefficient of a full element."""
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(samples):
        t = int(k % bundle.order)
        b = random_fiber_element(bundle, t, rng)
        x = random_element(bundle, rng)
        X = regular_embed(x)
        rows.append({
            "sample": k,
            "t": t,
            "norm_b": opnorm(b),
            "norm_pi_b": regular_embed(BundleElement(bundle, {t: b})).norm(),
            "norm_x": X.norm(),
            "max_fourier_norm": max(opnorm(fourier(X, s)) for s in bundle.group.elements()),
            "norm_E_xstar_x": opnorm(expectation(X.adjoint() @ X)),
        })
    return rows


def write_norm_csv(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
