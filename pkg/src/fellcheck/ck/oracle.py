"""Truncated path-space representation: an independent numeric check on the engine.

Basis: admissible words mu with 1 <= |mu| <= L.  ``s_i`` prepends ``i`` (when
a_{i,mu_1} = 1 and |mu| < L) and ``s_i*`` deletes a leading ``i``.  To keep
``sum_i s_i s_i* = 1`` exact on the single-letter words, each ``s_i`` also sends one
designated length-L word ``w_i`` (with a_{i, w_i[0]} = 1) to the word ``(i)``.
Every ``s_i`` is then a partial permutation of the basis, the ranges of the ``s_i``
partition the basis (CK0, CK1, CK2 exact), and ``s_i* s_i`` agrees with
``sum_j a_ij p_j`` except on length-L words (the truncation boundary).

Two front ends share this definition: :class:`PathAction` pushes batches of basis
vectors through words of generators with numpy integer arithmetic (any L), and
:func:`truncated_path_rep` materialises dense matrices for small L.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .algebra import AdjacencyMatrix, CKElement

__all__ = ["PathAction", "TruncatedRep", "WordOracle", "truncated_path_rep", "element_terms", "word_depths", "oracle_norm"]

DEAD = -1


def element_terms(x: CKElement) -> list[tuple[complex, tuple[int, ...]]]:
    """Monomials as operator words (signed letters, leftmost acts last)."""
    out = []
    for m, c in x.terms.items():
        word = m.mu + (m.vertex, -m.vertex) + tuple(-k for k in reversed(m.nu))
        out.append((complex(float(c.x), float(c.y)), word))
    return out


class PathAction:
    """Vectorised action of the generators on basis words.

    A word of length ``l`` is stored as ``(l, code)`` with ``code`` its letters read
    as a base-n integer (first letter most significant, letters shifted to 0..n-1).
    ``l == -1`` marks the zero vector.
    """

    def __init__(self, A: AdjacencyMatrix, L: int):
        if L < 1:
            raise ValueError("truncation length must be at least 1")
        n = A.n
        if n ** L > 2**62:
            raise ValueError("truncation too deep for int64 word codes")
        self.A = A
        self.n = n
        self.L = L
        self.adj = np.array(A.entries, dtype=bool)
        self.pow = n ** np.arange(L + 1, dtype=np.int64)
        self.wrap_code = {}
        for i in range(1, n + 1):
            word = [next(j for j in range(1, n + 1) if A(i, j))]
            while len(word) < L:
                word.append(next(j for j in range(1, n + 1) if A(word[-1], j)))
            self.wrap_code[i] = self.encode(word)[1]

    def encode(self, word) -> tuple[int, int]:
        code = 0
        for x in word:
            code = code * self.n + (x - 1)
        return len(word), code

    def decode(self, length: int, code: int) -> tuple[int, ...]:
        if length < 0:
            return ()
        out = []
        for _ in range(length):
            out.append(code % self.n + 1)
            code //= self.n
        return tuple(reversed(out))

    def basis(self, max_len: int | None = None, min_len: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """All admissible words with ``min_len <= |mu| <= max_len``."""
        max_len = self.L if max_len is None else max_len
        lens, codes = [], []
        level = np.arange(self.n, dtype=np.int64)  # length-1 codes
        first = level.copy()
        for l in range(1, max_len + 1):
            if l >= min_len:
                lens.append(np.full(level.shape, l, dtype=np.int64))
                codes.append(level)
            if l == max_len:
                break
            # prepend i to every word whose first letter is admissible after i
            new_codes, new_first = [], []
            for i in range(self.n):
                ok = self.adj[i, first]
                new_codes.append(i * self.pow[l] + level[ok])
                new_first.append(np.full(int(ok.sum()), i, dtype=np.int64))
            level = np.concatenate(new_codes)
            first = np.concatenate(new_first)
        if not lens:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        return np.concatenate(lens), np.concatenate(codes)

    def _first(self, lens: np.ndarray, codes: np.ndarray) -> np.ndarray:
        safe = np.clip(lens - 1, 0, None)
        return codes // self.pow[safe]

    def apply_letter(self, letter: int, lens: np.ndarray, codes: np.ndarray):
        i = abs(letter)
        alive = lens > 0
        first = self._first(lens, codes)
        new_l = np.full_like(lens, DEAD)
        new_c = np.zeros_like(codes)
        if letter > 0:
            grow = alive & (lens < self.L) & self.adj[i - 1, np.where(alive, first, 0)]
            new_l[grow] = lens[grow] + 1
            new_c[grow] = (i - 1) * self.pow[lens[grow]] + codes[grow]
            wrap = alive & (lens == self.L) & (codes == self.wrap_code[i])
            new_l[wrap] = 1
            new_c[wrap] = i - 1
        else:
            shrink = alive & (lens >= 2) & (first == i - 1)
            new_l[shrink] = lens[shrink] - 1
            new_c[shrink] = codes[shrink] % self.pow[lens[shrink] - 1]
            unwrap = alive & (lens == 1) & (codes == i - 1)
            new_l[unwrap] = self.L
            new_c[unwrap] = self.wrap_code[i]
        return new_l, new_c

    def apply_word(self, word, lens: np.ndarray, codes: np.ndarray):
        """Apply the operator product ``word[0] word[1] ... word[-1]`` (rightmost first)."""
        for letter in reversed(tuple(word)):
            lens, codes = self.apply_letter(letter, lens, codes)
            if not np.any(lens > 0):
                break
        return lens, codes

    def apply_terms(self, terms, lens: np.ndarray, codes: np.ndarray):
        """Image of each input vector under ``sum coeff * word``, as aggregated triples.

        Returns arrays (src, out_len, out_code, coeff) with zero coefficients dropped.
        """
        srcs, ols, ocs, cfs = [], [], [], []
        idx = np.arange(len(lens))
        for coeff, word in terms:
            ol, oc = self.apply_word(word, lens, codes)
            keep = ol > 0
            if keep.any():
                srcs.append(idx[keep])
                ols.append(ol[keep])
                ocs.append(oc[keep])
                cfs.append(np.full(int(keep.sum()), coeff, dtype=complex))
        if not srcs:
            e = np.empty(0, np.int64)
            return e, e, e, np.empty(0, complex)
        src, ol, oc, cf = map(np.concatenate, (srcs, ols, ocs, cfs))
        key = np.stack([src, ol, oc], axis=1)
        uniq, inv = np.unique(key, axis=0, return_inverse=True)
        total = np.zeros(len(uniq), dtype=complex)
        np.add.at(total, inv.ravel(), cf)
        nz = np.abs(total) > 1e-12
        return uniq[nz, 0], uniq[nz, 1], uniq[nz, 2], total[nz]

    def vanishes(self, terms, lens, codes) -> bool:
        return len(self.apply_terms(terms, lens, codes)[0]) == 0

    def sparse_matrix(self, terms, max_len: int | None = None) -> tuple[sp.csr_matrix, int]:
        """Sparse matrix of ``sum coeff * word`` on the whole truncated space."""
        lens, codes = self.basis()
        index = {(int(l), int(c)): k for k, (l, c) in enumerate(zip(lens, codes))}
        src, ol, oc, cf = self.apply_terms(terms, lens, codes)
        rows = np.array([index[(int(l), int(c))] for l, c in zip(ol, oc)], dtype=np.int64)
        N = len(lens)
        return sp.csr_matrix((cf, (rows, src)), shape=(N, N)), N


@dataclass
class TruncatedRep:
    """Dense matrices of the truncated representation (small L only)."""

    action: PathAction
    words: list[tuple[int, ...]]
    lengths: np.ndarray
    S: dict[int, np.ndarray]

    @property
    def dim(self) -> int:
        return len(self.words)

    def word_matrix(self, word) -> np.ndarray:
        out = np.eye(self.dim)
        for x in word:
            out = out @ (self.S[x] if x > 0 else self.S[-x].T)
        return out

    def matrix(self, x: CKElement) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for coeff, word in element_terms(x):
            out += coeff * self.word_matrix(word)
        return out

    def ck_residuals(self) -> dict[str, float]:
        """Max-abs residual of each Cuntz-Krieger relation, plus CK3 restricted below L."""
        A, n = self.action.A, self.action.n
        S = self.S
        eye = np.eye(self.dim)
        P = {j: S[j] @ S[j].T for j in S}
        res = {
            "CK0": max(np.abs(S[i] @ S[i].T @ S[i] - S[i]).max() for i in S),
            "CK1": max((np.abs(S[i].T @ S[j]).max() for i in S for j in S if i != j), default=0.0),
            "CK2": np.abs(sum(P.values()) - eye).max(),
        }
        ck3 = {i: S[i].T @ S[i] - sum(A(i, j) * P[j] for j in S) for i in S}
        res["CK3"] = max(np.abs(r).max() for r in ck3.values())
        inner = self.lengths < self.action.L
        res["CK3_below_L"] = max(np.abs(r[np.ix_(inner, inner)]).max() if inner.any() else 0.0 for r in ck3.values())
        res["CK3_support_lengths"] = sorted(
            {int(self.lengths[k]) for r in ck3.values() for k in np.nonzero(np.abs(r).sum(axis=0) > 0)[0]}
        )
        return res


def truncated_path_rep(A: AdjacencyMatrix, L: int, max_dim: int = 6000) -> TruncatedRep:
    action = PathAction(A, L)
    lens, codes = action.basis()
    if len(lens) > max_dim:
        raise ValueError(f"dense truncated representation would have dimension {len(lens)}")
    index = {(int(l), int(c)): k for k, (l, c) in enumerate(zip(lens, codes))}
    S = {}
    for i in range(1, A.n + 1):
        ol, oc = action.apply_letter(i, lens, codes)
        M = np.zeros((len(lens), len(lens)))
        for k in np.nonzero(ol > 0)[0]:
            M[index[(int(ol[k]), int(oc[k]))], k] = 1.0
        S[i] = M
    words = [action.decode(int(l), int(c)) for l, c in zip(lens, codes)]
    return TruncatedRep(action, words, lens, S)


def word_depths(word) -> tuple[int, int]:
    """(deepest deletion, highest insertion) reached while applying ``word`` right to left."""
    h = lo = hi = 0
    for x in reversed(tuple(word)):
        h += 1 if x > 0 else -1
        lo = min(lo, h)
        hi = max(hi, h)
    return -lo, hi


class WordOracle:
    """Compare linear combinations of operator words inside the truncated space.

    Test vectors are all admissible words of length ``D + 1`` where ``D`` is the
    deepest deletion of any word involved, so no intermediate vector ever touches
    the empty word or the length-L boundary. On such vectors the action coincides
    with the genuine representation on infinite paths.
    """

    def __init__(self, A: AdjacencyMatrix, L: int, cache_size: int = 2048):
        self.action = PathAction(A, L)
        self.L = L
        self._bases: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._state = lru_cache(maxsize=cache_size)(self._state_uncached)

    def _basis(self, length: int):
        if length not in self._bases:
            self._bases[length] = self.action.basis(length, length)
        return self._bases[length]

    def _state_uncached(self, length: int, word: tuple[int, ...]):
        if not word:
            return self._basis(length)
        lens, codes = self._state(length, word[1:])
        if not np.any(lens > 0):
            return lens, codes
        return self.action.apply_letter(word[0], lens, codes)

    def test_length(self, words) -> int:
        depth = height = 0
        for w in words:
            d, h = word_depths(w)
            depth, height = max(depth, d), max(height, h)
        length = depth + 1
        if length + height > self.L:
            raise ValueError(f"words need truncation length {length + height}, oracle has {self.L}")
        return length

    def _image(self, terms, length):
        srcs, ols, ocs, cfs = [], [], [], []
        for coeff, word in terms:
            ol, oc = self._state(length, tuple(word))
            keep = ol > 0
            if keep.any():
                srcs.append(np.nonzero(keep)[0])
                ols.append(ol[keep])
                ocs.append(oc[keep])
                cfs.append(np.full(int(keep.sum()), coeff, dtype=complex))
        if not srcs:
            return {}
        src, ol, oc, cf = map(np.concatenate, (srcs, ols, ocs, cfs))
        key = np.stack([src, ol, oc], axis=1)
        uniq, inv = np.unique(key, axis=0, return_inverse=True)
        total = np.zeros(len(uniq), dtype=complex)
        np.add.at(total, inv.ravel(), cf)
        return {tuple(k): v for k, v in zip(uniq.tolist(), total) if abs(v) > 1e-12}

    def equal(self, lhs, rhs) -> bool:
        """``lhs`` and ``rhs`` are lists of (coefficient, operator word)."""
        lhs, rhs = list(lhs), list(rhs)
        length = self.test_length([w for _, w in lhs + rhs])
        if len(lhs) == 1 and len(rhs) == 1 and lhs[0][0] == rhs[0][0]:
            a = self._state(length, tuple(lhs[0][1]))
            b = self._state(length, tuple(rhs[0][1]))
            return bool(np.array_equal(np.where(a[0] > 0, a[1], -1), np.where(b[0] > 0, b[1], -1))
                        and np.array_equal(a[0] > 0, b[0] > 0)
                        and np.array_equal(np.where(a[0] > 0, a[0], 0), np.where(b[0] > 0, b[0], 0)))
        diff = self._image(list(lhs) + [(-c, w) for c, w in rhs], length)
        return not diff

    def is_zero(self, terms) -> bool:
        return self.equal(terms, [])


def oracle_norm(x: CKElement, max_vectors: int = 200_000) -> float:
    """Operator norm of ``x`` in the representation on infinite admissible paths.

    Inputs are all admissible prefixes of length ``D + 1`` (``D`` the deepest
    deletion). When ``x`` is homogeneous every output prefix has the same length
    and ends in the input's last letter, so the infinite-path operator is this
    finite matrix tensored with identities and the value is exact for that
    representation. For inhomogeneous ``x`` it is a lower bound.
    """
    if x.is_zero:
        return 0.0
    terms = element_terms(x)
    depth = height = 0
    for _, w in terms:
        d, h = word_depths(w)
        depth, height = max(depth, d), max(height, h)
    length = depth + 1
    action = PathAction(x.alg.A, length + height)
    lens, codes = action.basis(length, length)
    if len(lens) > max_vectors:
        raise ValueError(f"norm estimate needs {len(lens)} test vectors")
    src, ol, oc, cf = action.apply_terms(terms, lens, codes)
    if len(src) == 0:
        return 0.0
    keys = np.stack([ol, oc], axis=1)
    uniq, rows = np.unique(keys, axis=0, return_inverse=True)
    M = sp.csr_matrix((cf, (rows.ravel(), src)), shape=(len(uniq), len(lens)))
    if min(M.shape) <= 400:
        return float(np.linalg.norm(M.toarray(), 2))
    from scipy.sparse.linalg import svds

    return float(svds(M, k=1, return_singular_vectors=False, random_state=0)[0])
