"""Coefficient functions a: G -> B_e and the maps they induce on graded elements.

Two carriers are supported: a finite group with matrix values (numeric) and the
free group with exact CK values (symbolic). Values are stored unscaled together
with ``scale_sq``, so ``a(t) = sqrt(scale_sq) * values[t]``; products
``a(tr)* x a(r)`` then carry the rational factor ``scale_sq`` exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .bundle import BundleElement, FiniteFellBundle, opnorm
from .ck.algebra import AdjacencyMatrix, CKAlgebra, CKElement
from .ck.oracle import oracle_norm
from .errors import AlgebraMismatchError, ConfigError, DomainError
from .groups import FiniteGroup, FreeWord, PositiveWord, enumerate_positive, factor_positive, make_finite_group

__all__ = [
    "CoefficientFunction",
    "psi_apply",
    "phi_apply",
    "net_bound",
    "ck_net",
    "uniform_net",
    "folner_net",
    "fejer_coefficient",
    "signed_degree",
    "ConvergenceRow",
    "ConvergenceResult",
    "ck_convergence_experiment",
    "write_convergence_csv",
    "CSV_COLUMNS",
]


@dataclass
class CoefficientFunction:
    """Finitely supported ``a``; ``carrier`` is a FiniteGroup or a CKAlgebra."""

    carrier: FiniteGroup | CKAlgebra
    values: dict
    scale_sq: Fraction = Fraction(1)
    label: str = ""

    @property
    def symbolic(self) -> bool:
        return isinstance(self.carrier, CKAlgebra)

    @property
    def support(self) -> list:
        return list(self.values)

    def mul(self, t, r):
        return t * r if self.symbolic else self.carrier.mul(t, r)

    @cached_property
    def gram(self):
        """Sum of values[t]* values[t] (unscaled)."""
        if self.symbolic:
            acc = self.carrier.zero()
            for v in self.values.values():
                acc = acc + v.adjoint() * v
            return acc
        vals = list(self.values.values())
        if not vals:
            return np.zeros((0, 0))
        return sum(v.conj().T @ v for v in vals)

    @cached_property
    def bound(self):
        return net_bound(self)


def _check_carrier(a: CoefficientFunction, x) -> None:
    if a.symbolic:
        if not isinstance(x, CKElement) or x.alg is not a.carrier:
            raise AlgebraMismatchError("element and coefficient function live over different algebras")
    elif isinstance(x, CKElement):
        raise AlgebraMismatchError("numeric coefficient function applied to a symbolic element")


def psi_apply(a: CoefficientFunction, x, t):
    """sum_r a(tr)* x a(r) for x homogeneous of degree t."""
    _check_carrier(a, x)
    if a.symbolic:
        acc = a.carrier.zero()
        for r, ar in a.values.items():
            atr = a.values.get(t * r)
            if atr is not None:
                acc = acc + atr.adjoint() * x * ar
        return acc.scale(a.scale_sq) if a.scale_sq != 1 else acc
    x = np.asarray(x, dtype=complex)
    acc = np.zeros_like(x)
    for r, ar in a.values.items():
        atr = a.values.get(a.mul(t, r))
        if atr is not None:
            acc = acc + atr.conj().T @ x @ ar
    return float(a.scale_sq) * acc


def phi_apply(a: CoefficientFunction, x):
    """Apply psi degree by degree; the result keeps every component in its own degree."""
    _check_carrier(a, x)
    if a.symbolic:
        acc = a.carrier.zero()
        for t, xt in x.components().items():
            acc = acc + psi_apply(a, xt, t)
        return acc
    if not isinstance(x, BundleElement):
        raise AlgebraMismatchError("numeric phi_apply expects a BundleElement")
    if x.bundle.group is not a.carrier:
        raise AlgebraMismatchError("bundle and coefficient function use different groups")
    return BundleElement(x.bundle, {t: psi_apply(a, m, t) for t, m in x.components.items()})


def net_bound(a: CoefficientFunction):
    """||sum_t a(t)* a(t)||: exact Fraction when the symbolic sum is a multiple of 1."""
    if not a.values:
        return Fraction(0)
    if a.symbolic:
        c = a.gram.scalar_multiple_of_unit()
        if c is not None and not c.y:
            q = c.x
            return a.scale_sq * Fraction(int(q.numerator), int(q.denominator))
        return float(a.scale_sq) * oracle_norm(a.gram)
    return float(a.scale_sq) * opnorm(a.gram)


def ck_net(m: int, A: AdjacencyMatrix | CKAlgebra) -> CoefficientFunction:
    """a_m(t) = m^(-1/2) e(t) on positive words of length <= m with e(t) != 0."""
    if m < 1:
        raise DomainError("the net index m must be at least 1")
    alg = A if isinstance(A, CKAlgebra) else CKAlgebra.of(A)
    values = {}
    for k in range(m + 1):
        for w in enumerate_positive(alg.n, k):
            p = alg.range_projection(w)
            if not p.is_zero:
                values[w] = p
    return CoefficientFunction(alg, values, Fraction(1, m), label=f"ck_net(m={m})")


def uniform_net(group: FiniteGroup, dim: int) -> CoefficientFunction:
    """a(t) = |G|^(-1/2) 1 for every t."""
    eye = np.eye(dim, dtype=complex)
    return CoefficientFunction(group, {t: eye for t in group.elements()}, Fraction(1, group.order), label="uniform")


def signed_degree(t: int, order: int) -> int:
    """Representative of t in Z/order closest to 0."""
    return t if t <= order // 2 else t - order


def folner_net(N: int, group: FiniteGroup, dim: int) -> CoefficientFunction:
    """(2N+1)^(-1/2) 1 on the window {-N..N} of a cyclic group of order >= 4N+4."""
    if N < 0:
        raise DomainError("window half-width must be non-negative")
    if group.order < 4 * N + 4:
        raise DomainError(f"cyclic order {group.order} too small for window {N}: need >= {4 * N + 4}")
    eye = np.eye(dim, dtype=complex)
    window = {(w % group.order): eye for w in range(-N, N + 1)}
    return CoefficientFunction(group, window, Fraction(1, 2 * N + 1), label=f"folner(N={N})")


def fejer_coefficient(N: int, t: int) -> Fraction:
    """1 - |t|/(2N+1), clipped at 0."""
    return max(Fraction(0), 1 - Fraction(abs(t), 2 * N + 1))


def window_overlap(a: CoefficientFunction, t) -> Fraction:
    """Exact scalar sum_r scale_sq [r, tr in supp] for nets whose values are the identity."""
    return a.scale_sq * sum(1 for r in a.values if a.mul(t, r) in a.values)


# convergence experiment for the CK net

CSV_COLUMNS = ["m", "main_coeff_num", "main_coeff_den", "paper_coeff", "tail_norm_estimate", "tail_bound", "pass"]


@dataclass
class ConvergenceRow:
    m: int
    main_coeff: Fraction
    formula_coeff: Fraction
    slices_ok: bool
    low_slices_zero: bool
    sum_orders_agree: bool
    tail_norm_estimate: float
    tail_bound: Fraction
    net_bound: Fraction
    tail: CKElement = field(repr=False, default=None)

    @property
    def coeff_ok(self) -> bool:
        return self.main_coeff == self.formula_coeff and self.slices_ok and self.low_slices_zero

    @property
    def tail_ok(self) -> bool:
        return self.tail_norm_estimate <= float(self.tail_bound) + 0.05

    @property
    def passed(self) -> bool:
        return self.coeff_ok and self.sum_orders_agree and self.tail_ok

    def csv_row(self) -> dict:
        return {
            "m": self.m,
            "main_coeff_num": self.main_coeff.numerator,
            "main_coeff_den": self.main_coeff.denominator,
            "paper_coeff": str(self.formula_coeff),
            "tail_norm_estimate": f"{self.tail_norm_estimate:.12g}",
            "tail_bound": str(self.tail_bound),
            "pass": int(self.passed),
        }


@dataclass
class ConvergenceResult:
    t: FreeWord
    alpha: PositiveWord
    beta: PositiveWord
    rows: list[ConvergenceRow]
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def monotone(self) -> bool:
        cs = [r.main_coeff for r in self.rows]
        return all(x < y for x, y in zip(cs, cs[1:]))


def ck_convergence_experiment(t: FreeWord, m_range: Iterable[int], A: AdjacencyMatrix | CKAlgebra) -> ConvergenceResult:
    """Split Phi_m(S(t)) into k-slices and compare the middle block with (m-|t|-|beta|+1)/m S(t)."""
    alg = A if isinstance(A, CKAlgebra) else CKAlgebra.of(A)
    split = factor_positive(t)
    if split is None:
        raise DomainError(f"{t} is not of the form alpha beta^-1, so S(t) = 0")
    alpha, beta = split
    St = alg.partial_rep(t)
    if St.is_zero:
        raise DomainError(f"S({t}) vanishes for this matrix; the experiment is vacuous")
    rows = []
    notes = []
    if t.is_identity:
        notes.append("t = e: every k-slice with 0 <= k <= m equals S(e)/m, so Phi_m(1) = ((m+1)/m) 1")
    for m in m_range:
        if m < len(t):
            raise DomainError(f"m={m} is smaller than |t|={len(t)}")
        a = ck_net(m, alg)
        inv_m = Fraction(1, m)
        slices = []
        for k in range(m + 1):
            acc = alg.zero()
            for g in enumerate_positive(alg.n, k):
                ag, atg = a.values.get(g), a.values.get(t * g)
                if ag is not None and atg is not None:
                    acc = acc + atg.adjoint() * St * ag
            slices.append(acc.scale(inv_m))
        lo, hi = len(beta), m - len(t)
        low_zero = all(s.is_zero for s in slices[:lo])
        target = St.scale(inv_m)
        slices_ok = all(s == target for s in slices[lo:hi + 1])
        main = sum(slices[lo:hi + 1], alg.zero())
        coeff = Fraction(hi - lo + 1, m) if hi >= lo else Fraction(0)
        main_coeff = coeff if main == St.scale(coeff) else _coefficient_of(main, St)
        tail = sum(slices[hi + 1:], alg.zero())
        total = phi_apply(a, St)
        rows.append(
            ConvergenceRow(
                m=m,
                main_coeff=main_coeff,
                formula_coeff=Fraction(m - len(t) - len(beta) + 1, m),
                slices_ok=slices_ok,
                low_slices_zero=low_zero,
                sum_orders_agree=total == sum(slices, alg.zero()),
                tail_norm_estimate=oracle_norm(tail),
                tail_bound=Fraction(len(t), m),
                net_bound=net_bound(a),
                tail=tail,
            )
        )
    return ConvergenceResult(t, alpha, beta, rows, notes)


def _coefficient_of(x: CKElement, y: CKElement) -> Fraction | None:
    """c with x = c y if such a rational c exists, else None."""
    if x.is_zero:
        return Fraction(0)
    m, c = next(iter(y.terms.items()))
    cx = x.terms.get(m)
    if cx is None:
        return None
    ratio = cx / c
    if ratio.y:
        return None
    q = Fraction(int(ratio.x.numerator), int(ratio.x.denominator))
    return q if x == y.scale(q) else None


def write_convergence_csv(result: ConvergenceResult, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in result.rows:
            writer.writerow(row.csv_row())


def parse_m_range(text: str) -> range:
    """``"4..10"`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise ConfigError(f"bad m range {text!r}") from exc
    if lo < 1 or hi < lo:
        raise ConfigError(f"bad m range {text!r}")
    return range(lo, hi + 1)
