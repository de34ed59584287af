"""Exact arithmetic in the dense *-subalgebra of the Cuntz-Krieger algebra O_A.

A monomial ``(mu, j, nu)`` stands for ``s_mu p_j s_nu*`` with ``p_j = S_j S_j*``.
Reading ``mu + (j,)`` as a vertex sequence, the monomial is ``path(mu j) path(nu j)*``
in the graph whose edges are the pairs (i, k) with a_ik = 1, so products reduce by
prefix comparison of vertex sequences.

These decorated monomials are linearly dependent: for every i,
``(mu', i, nu') = sum_k a_ik (mu' i, k, nu' i)``.  To get a basis each row i gets a
*special* successor (its first k with a_ik = 1) and monomials whose paths both end
in the special edge (i, special(i)) are rewritten away with that identity.  What
remains is the standard linear basis of a Leavitt path algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

from sympy.polys.domains import QQ, QQ_I

from ..errors import AlgebraMismatchError, DomainError, InvalidGeneratorError, RankMismatchError
from ..groups import FreeWord

__all__ = [
    "AdjacencyMatrix",
    "CKMonomial",
    "CKElement",
    "CKAlgebra",
    "PRESETS",
    "scalar",
    "mono_mul",
    "unit",
    "generator",
    "partial_rep",
    "range_projection",
    "degree",
    "component",
    "expectation",
]

ZERO = QQ_I(0, 0)
ONE = QQ_I(1, 0)


def scalar(value) -> "QQ_I.dtype":
    """Coerce int / Fraction / (re, im) / complex-with-rational-parts to QQ_I."""
    if isinstance(value, QQ_I.dtype):
        return value
    if isinstance(value, tuple):
        re, im = value
        return QQ_I(_q(re), _q(im))
    if isinstance(value, complex):
        raise TypeError("floating complex scalars are not exact; pass (re, im) rationals")
    return QQ_I(_q(value), QQ(0))


def _q(x):
    from fractions import Fraction

    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floating scalars are not exact")
    return QQ.convert(x)


@dataclass(frozen=True)
class AdjacencyMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("adjacency matrix must be square and non-empty")
        if any(v not in (0, 1) for r in rows for v in r):
            raise ValueError("adjacency entries must be 0 or 1")
        if any(not any(r) for r in rows):
            raise ValueError("adjacency matrix has a zero row")
        if any(not any(r[j] for r in rows) for j in range(n)):
            raise ValueError("adjacency matrix has a zero column")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __call__(self, i: int, j: int) -> int:
        """1-based entry a_ij."""
        return self.entries[i - 1][j - 1]

    def admissible(self, path: Iterable[int]) -> bool:
        path = tuple(path)
        return all(self(a, b) for a, b in zip(path, path[1:]))

    def to_json(self) -> dict:
        return {"n": self.n, "a": [list(r) for r in self.entries]}

    @classmethod
    def from_json(cls, data: dict | str) -> AdjacencyMatrix:
        if isinstance(data, str):
            data = json.loads(data)
        A = cls(tuple(tuple(r) for r in data["a"]))
        if "n" in data and int(data["n"]) != A.n:
            raise ValueError("declared n does not match the matrix size")
        return A


PRESETS: dict[str, AdjacencyMatrix] = {
    "allones2": AdjacencyMatrix(((1, 1), (1, 1))),
    "allones3": AdjacencyMatrix(((1, 1, 1), (1, 1, 1), (1, 1, 1))),
    "fib2": AdjacencyMatrix(((1, 1), (1, 0))),
}


class CKMonomial(NamedTuple):
    mu: tuple[int, ...]
    vertex: int
    nu: tuple[int, ...]

    def order_key(self):
        return (len(self.mu) + len(self.nu), self.mu, self.vertex, self.nu)


class CKAlgebra:
    """Per-matrix engine holding the reduction caches. Obtain via ``CKAlgebra.of(A)``."""

    _instances: dict[AdjacencyMatrix, "CKAlgebra"] = {}

    def __init__(self, A: AdjacencyMatrix):
        self.A = A
        self.n = A.n
        self.special = {i: next(j for j in range(1, self.n + 1) if A(i, j)) for i in range(1, self.n + 1)}
        self._successors = {i: tuple(j for j in range(1, self.n + 1) if A(i, j)) for i in range(1, self.n + 1)}
        self._mul_cache: dict[tuple, tuple] = {}
        self._S_cache: dict[tuple[int, ...], CKElement] = {}
        self.normalize = lru_cache(maxsize=None)(self._normalize)

    @classmethod
    def of(cls, A: AdjacencyMatrix) -> "CKAlgebra":
        alg = cls._instances.get(A)
        if alg is None:
            alg = cls._instances[A] = cls(A)
        return alg

    # -- monomials --------------------------------------------------------
    def is_valid(self, m: CKMonomial) -> bool:
        mu, j, nu = m
        if not 1 <= j <= self.n or any(not 1 <= x <= self.n for x in mu + nu):
            return False
        return self.A.admissible(mu + (j,)) and self.A.admissible(nu + (j,))

    def is_normal(self, m: CKMonomial) -> bool:
        mu, j, nu = m
        return not (mu and nu and mu[-1] == nu[-1] and self.special[mu[-1]] == j)

    def _normalize(self, m: CKMonomial) -> tuple[tuple[CKMonomial, int], ...]:
        mu, j, nu = m
        if not (mu and nu and mu[-1] == nu[-1] and self.special[mu[-1]] == j):
            return ((m, 1),)
        i = mu[-1]
        out: dict[CKMonomial, int] = {}
        for mono, c in self.normalize(CKMonomial(mu[:-1], i, nu[:-1])):
            out[mono] = out.get(mono, 0) + c
        for k in self._successors[i]:
            if k != j:
                mono = CKMonomial(mu, k, nu)
                out[mono] = out.get(mono, 0) - 1
        return tuple((mono, c) for mono, c in out.items() if c)

    def mono_mul(self, x: CKMonomial, y: CKMonomial) -> tuple[tuple[CKMonomial, int], ...]:
        key = (x, y)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        mu1, j1, nu1 = x
        mu2, j2, nu2 = y
        w1 = nu1 + (j1,)
        v2 = mu2 + (j2,)
        if len(w1) <= len(v2) and v2[: len(w1)] == w1:
            seq = mu1 + (j1,) + v2[len(w1):]
            raw = CKMonomial(seq[:-1], seq[-1], nu2)
        elif len(v2) < len(w1) and w1[: len(v2)] == v2:
            seq = nu2 + (j2,) + w1[len(v2):]
            raw = CKMonomial(mu1, seq[-1], seq[:-1])
        else:
            raw = None
        result = () if raw is None else self.normalize(raw)
        self._mul_cache[key] = result
        return result

    # -- distinguished elements -------------------------------------------
    def element(self, terms: Mapping[CKMonomial, object] | None = None) -> CKElement:
        return CKElement(self, terms or {})

    def zero(self) -> CKElement:
        return CKElement(self, {})

    def unit(self) -> CKElement:
        return CKElement._raw(self, {CKMonomial((), j, ()): ONE for j in range(1, self.n + 1)})

    def scalar(self, c) -> CKElement:
        c = scalar(c)
        if not c:
            return self.zero()
        return CKElement._raw(self, {CKMonomial((), j, ()): c for j in range(1, self.n + 1)})

    def generator(self, i: int) -> CKElement:
        if not 1 <= i <= self.n:
            raise InvalidGeneratorError(f"generator s{i} out of range 1..{self.n}")
        return CKElement._raw(self, {CKMonomial((i,), j, ()): ONE for j in self._successors[i]})

    def projection(self, j: int) -> CKElement:
        """p_j = S_j S_j*."""
        if not 1 <= j <= self.n:
            raise InvalidGeneratorError(f"vertex {j} out of range 1..{self.n}")
        return CKElement._raw(self, {CKMonomial((), j, ()): ONE})

    def partial_rep(self, t: FreeWord) -> CKElement:
        if t.rank != self.n:
            raise RankMismatchError(f"word of rank {t.rank} used with a {self.n}x{self.n} matrix")
        return self._S(t.letters)

    def _S(self, letters: tuple[int, ...]) -> CKElement:
        hit = self._S_cache.get(letters)
        if hit is not None:
            return hit
        if not letters:
            out = self.unit()
        elif len(letters) == 1:
            x = letters[0]
            out = self.generator(x) if x > 0 else self.generator(-x).adjoint()
        else:
            # split where the cache is most likely to help
            out = self._S(letters[:-1]) * self._S(letters[-1:])
        self._S_cache[letters] = out
        return out

    def range_projection(self, t: FreeWord) -> CKElement:
        s = self.partial_rep(t)
        return s * s.adjoint()

    def degree(self, m: CKMonomial) -> FreeWord:
        return FreeWord(m.mu + tuple(-x for x in reversed(m.nu)), self.n)


class CKElement:
    """Finite Gaussian-rational combination of normal-form monomials. Immutable."""

    __slots__ = ("alg", "terms", "_hash")

    def __init__(self, alg: CKAlgebra, terms: Mapping[CKMonomial, object]):
        acc: dict[CKMonomial, object] = {}
        for m, c in terms.items():
            m = CKMonomial(*m)
            if not alg.is_valid(m):
                raise InvalidGeneratorError(f"monomial {m} is not admissible over A")
            c = scalar(c)
            for mono, k in alg.normalize(m):
                acc[mono] = acc.get(mono, ZERO) + c * k
        self.alg = alg
        self.terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, alg: CKAlgebra, terms: dict) -> CKElement:
        obj = cls.__new__(cls)
        obj.alg = alg
        obj.terms = terms
        obj._hash = None
        return obj

    def _check(self, other: CKElement) -> None:
        if other.alg is not self.alg and other.alg.A != self.alg.A:
            raise AlgebraMismatchError("elements over different adjacency matrices")

    def _coerce(self, other) -> CKElement:
        if isinstance(other, CKElement):
            self._check(other)
            return other
        return self.alg.scalar(other)

    def __add__(self, other) -> CKElement:
        other = self._coerce(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            v = acc.get(m, ZERO) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return CKElement._raw(self.alg, acc)

    __radd__ = __add__

    def __neg__(self) -> CKElement:
        return CKElement._raw(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> CKElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> CKElement:
        return self._coerce(other) - self

    def scale(self, c) -> CKElement:
        c = scalar(c)
        if not c:
            return self.alg.zero()
        return CKElement._raw(self.alg, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other) -> CKElement:
        if not isinstance(other, CKElement):
            return self.scale(other)
        self._check(other)
        mono_mul = self.alg.mono_mul
        acc: dict[CKMonomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                prod = mono_mul(m1, m2)
                if not prod:
                    continue
                c = c1 * c2
                for m, k in prod:
                    acc[m] = acc.get(m, ZERO) + (c if k == 1 else c * k)
        return CKElement._raw(self.alg, {m: c for m, c in acc.items() if c})

    def __rmul__(self, other) -> CKElement:
        return self.scale(other)

    def adjoint(self) -> CKElement:
        return CKElement._raw(
            self.alg, {CKMonomial(m.nu, m.vertex, m.mu): QQ_I(c.x, -c.y) for m, c in self.terms.items()}
        )

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, CKElement):
            return self.alg.A == other.alg.A and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.alg.A, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[CKMonomial, object]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].order_key())

    def degrees(self) -> set[FreeWord]:
        return {self.alg.degree(m) for m in self.terms}

    def components(self) -> dict[FreeWord, CKElement]:
        out: dict[FreeWord, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(self.alg.degree(m), {})[m] = c
        return {t: CKElement._raw(self.alg, terms) for t, terms in out.items()}

    def component(self, t: FreeWord) -> CKElement:
        return CKElement._raw(self.alg, {m: c for m, c in self.terms.items() if self.alg.degree(m) == t})

    def scalar_multiple_of_unit(self):
        """Return c if self == c * unit, else None."""
        if self.is_zero:
            return ZERO
        c = next(iter(self.terms.values()))
        return c if self == self.alg.scalar(c) else None

    def max_path_length(self) -> int:
        return max((max(len(m.mu), len(m.nu)) for m in self.terms), default=0)

    def __repr__(self) -> str:
        from .expr import format_element

        return f"CKElement({format_element(self)!r})"

    def __str__(self) -> str:
        from .expr import format_element

        return format_element(self)


# -- module-level operations ------------------------------------------------


def _alg(A: AdjacencyMatrix | CKAlgebra) -> CKAlgebra:
    return A if isinstance(A, CKAlgebra) else CKAlgebra.of(A)


def mono_mul(x: CKMonomial, y: CKMonomial, A: AdjacencyMatrix) -> CKElement:
    alg = _alg(A)
    for m in (x, y):
        if not alg.is_valid(CKMonomial(*m)):
            raise AlgebraMismatchError(f"monomial {m} is not valid over A")
    acc: dict = {}
    for m in alg.normalize(CKMonomial(*x)):
        for m2 in alg.normalize(CKMonomial(*y)):
            for mono, k in alg.mono_mul(m[0], m2[0]):
                acc[mono] = acc.get(mono, ZERO) + QQ_I(m[1] * m2[1] * k, 0)
    return CKElement._raw(alg, {m: c for m, c in acc.items() if c})


def unit(A: AdjacencyMatrix) -> CKElement:
    return _alg(A).unit()


def generator(i: int, A: AdjacencyMatrix) -> CKElement:
    return _alg(A).generator(i)


def partial_rep(t: FreeWord, A: AdjacencyMatrix) -> CKElement:
    return _alg(A).partial_rep(t)


def range_projection(t: FreeWord, A: AdjacencyMatrix) -> CKElement:
    return _alg(A).range_projection(t)


def degree(m: CKMonomial, A: AdjacencyMatrix) -> FreeWord:
    return _alg(A).degree(CKMonomial(*m))


def component(x: CKElement, t: FreeWord) -> CKElement:
    """The grading projection F_t: keep the terms of degree t."""
    if t.rank != x.alg.n:
        raise RankMismatchError("degree word rank differs from the algebra rank")
    return x.component(t)


def expectation(x: CKElement) -> CKElement:
    return x.component(FreeWord((), x.alg.n))


def require(cond: bool, message: str) -> None:
    if not cond:
        raise DomainError(message)
