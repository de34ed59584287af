"""Discrete groups: free groups with reduced words, and finite groups by table.

Generators of F_n are 1-based; ``-k`` stands for the inverse of ``g_k``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ConstructionError, InvalidGeneratorError, RankMismatchError

__all__ = [
    "FreeWord",
    "PositiveWord",
    "FiniteGroup",
    "reduce",
    "multiply",
    "inverse",
    "is_dot",
    "factor_positive",
    "enumerate_positive",
    "enumerate_words",
    "parse_word",
    "format_word",
    "make_finite_group",
]


def _reduce_letters(letters: Iterable[int], n: int) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        x = int(x)
        if x == 0 or abs(x) > n:
            raise InvalidGeneratorError(f"generator index {x} out of range for rank {n}")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class FreeWord:
    """Reduced word in F_n. Reduction happens at construction."""

    letters: tuple[int, ...]
    rank: int

    # PositiveWord compares equal to the FreeWord with the same letters
    def __eq__(self, other):
        if not isinstance(other, FreeWord):
            return NotImplemented
        return self.letters == other.letters and self.rank == other.rank

    def __hash__(self):
        return hash((self.letters, self.rank))

    def __lt__(self, other: FreeWord) -> bool:
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidGeneratorError("rank must be positive")
        object.__setattr__(self, "letters", _reduce_letters(self.letters, self.rank))

    @classmethod
    def identity(cls, rank: int) -> FreeWord:
        return cls((), rank)

    @classmethod
    def gen(cls, k: int, rank: int) -> FreeWord:
        return cls((k,), rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __mul__(self, other: FreeWord) -> FreeWord:
        return multiply(self, other)

    def inverse(self) -> FreeWord:
        return FreeWord(tuple(-x for x in reversed(self.letters)), self.rank)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def is_positive(self) -> bool:
        return all(x > 0 for x in self.letters)

    def __str__(self) -> str:
        return format_word(self)


@dataclass(frozen=True, eq=False)
class PositiveWord(FreeWord):
    """Element of the positive cone P (only positive letters)."""

    def __post_init__(self):
        super().__post_init__()
        if any(x < 0 for x in self.letters):
            raise InvalidGeneratorError("positive words use generator indices 1..n only")


def reduce(letters: Sequence[int], n: int) -> FreeWord:
    return FreeWord(tuple(letters), n)


def _check_rank(u: FreeWord, v: FreeWord) -> None:
    if u.rank != v.rank:
        raise RankMismatchError(f"rank {u.rank} != rank {v.rank}")


def multiply(u: FreeWord, v: FreeWord) -> FreeWord:
    _check_rank(u, v)
    a, b = u.letters, v.letters
    # cancel across the junction only; both sides are already reduced
    i = 0
    while i < len(a) and i < len(b) and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return FreeWord(a[: len(a) - i] + b[i:], u.rank)


def inverse(u: FreeWord) -> FreeWord:
    return u.inverse()


def is_dot(u: FreeWord, v: FreeWord) -> bool:
    """True iff no cancellation happens in ``u v``, i.e. |uv| = |u| + |v|."""
    _check_rank(u, v)
    return not (u.letters and v.letters and u.letters[-1] == -v.letters[0])


def factor_positive(t: FreeWord) -> tuple[PositiveWord, PositiveWord] | None:
    """Split ``t = alpha beta^-1`` with alpha, beta positive, or return None."""
    letters = t.letters
    k = 0
    while k < len(letters) and letters[k] > 0:
        k += 1
    if any(x > 0 for x in letters[k:]):
        return None
    alpha = PositiveWord(letters[:k], t.rank)
    beta = PositiveWord(tuple(-x for x in reversed(letters[k:])), t.rank)
    return alpha, beta


def enumerate_positive(n: int, k: int) -> list[PositiveWord]:
    """P_k in lexicographic order; P_0 = [e]."""
    if k < 0:
        raise ValueError("length must be non-negative")
    return [PositiveWord(w, n) for w in itertools.product(range(1, n + 1), repeat=k)]


def enumerate_words(n: int, k: int) -> list[FreeWord]:
    """All reduced words of length exactly ``k`` (2n(2n-1)^(k-1) of them)."""
    alphabet = [x for g in range(1, n + 1) for x in (g, -g)]
    words: list[tuple[int, ...]] = [()]
    for _ in range(k):
        words = [w + (x,) for w in words for x in alphabet if not w or w[-1] != -x]
    return [FreeWord(w, n) for w in words]


_TOKEN = re.compile(r"g(\d+)('?)")


def parse_word(text: str, n: int) -> FreeWord:
    """Parse ``"g1 g2'"``; the empty string (or ``e``) is the identity."""
    letters = []
    for tok in text.split():
        if tok == "e":
            continue
        m = _TOKEN.fullmatch(tok)
        if m is None:
            raise InvalidGeneratorError(f"bad word token {tok!r}")
        k = int(m.group(1))
        letters.append(-k if m.group(2) else k)
    return FreeWord(tuple(letters), n)


def format_word(w: FreeWord) -> str:
    return " ".join(f"g{abs(x)}" + ("'" if x < 0 else "") for x in w.letters)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Finite group given by a multiplication table on indices 0..order-1."""

    table: np.ndarray
    identity: int = 0
    labels: tuple = field(default=())
    name: str = ""

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ConstructionError("multiplication table must be square")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        inv = np.full(self.order, -1, dtype=np.int64)
        for a in range(self.order):
            hits = np.nonzero(table[a] == self.identity)[0]
            if len(hits) != 1:
                raise ConstructionError(f"element {a} has no unique inverse")
            inv[a] = hits[0]
        inv.setflags(write=False)
        object.__setattr__(self, "inverse", inv)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(self.order)))

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def check_axioms(self, samples: int | None = None, seed: int = 0) -> bool:
        """Exhaustive triple check up to order 24, sampled above."""
        T, e, n = self.table, self.identity, self.order
        if not (np.all(T[e] == np.arange(n)) and np.all(T[:, e] == np.arange(n))):
            return False
        if not np.all(T[np.arange(n), self.inverse] == e):
            return False
        if n <= 24 and samples is None:
            a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        else:
            rng = np.random.default_rng(seed)
            a, b, c = rng.integers(0, n, size=(3, samples or 20000))
        return bool(np.all(T[T[a, b], c] == T[a, T[b, c]]))

    def to_json(self) -> dict:
        return {"table": self.table.tolist(), "identity": self.identity, "name": self.name}

    @classmethod
    def from_json(cls, data: dict) -> FiniteGroup:
        g = cls(np.asarray(data["table"]), int(data.get("identity", 0)), name=data.get("name", ""))
        if not g.check_axioms(samples=None if g.order <= 24 else 20000):
            raise ConstructionError("table is not a group law")
        return g


MAX_SHIPPED_ORDER = 24


def _cyclic(k: int) -> FiniteGroup:
    idx = np.arange(k)
    return FiniteGroup((idx[:, None] + idx[None, :]) % k, 0, name=f"Z{k}")


def _symmetric(k: int) -> FiniteGroup:
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    # (p q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]
    return FiniteGroup(np.array(table), index[tuple(range(k))], labels=tuple(perms), name=f"S{k}")


def _product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    n, m = g.order, h.order
    table = np.empty((n * m, n * m), dtype=np.int64)
    for a, b, c, d in itertools.product(range(n), range(m), range(n), range(m)):
        table[a * m + b, c * m + d] = g.mul(a, c) * m + h.mul(b, d)
    labels = tuple((x, y) for x in g.labels for y in h.labels)
    return FiniteGroup(table, g.identity * m + h.identity, labels=labels, name=f"{g.name}x{h.name}")


def make_finite_group(kind: str, *args) -> FiniteGroup:
    """``make_finite_group("cyclic", 4)``, ``("symmetric", 3)``, ``("product", G, H)``."""
    if kind == "cyclic":
        (k,) = args
        if not 1 <= k <= MAX_SHIPPED_ORDER:
            raise ConstructionError(f"cyclic order {k} outside 1..{MAX_SHIPPED_ORDER}")
        return _cyclic(k)
    if kind == "symmetric":
        (k,) = args
        if not 1 <= k <= 4:
            raise ConstructionError("symmetric groups are shipped for k <= 4")
        return _symmetric(k)
    if kind == "product":
        g, h = args
        if g.order * h.order > MAX_SHIPPED_ORDER:
            raise ConstructionError("direct product exceeds the shipped order cap")
        return _product(g, h)
    raise ConstructionError(f"unsupported group kind {kind!r}")
