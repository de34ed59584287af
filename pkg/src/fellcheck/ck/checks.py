"""Exact checks of the partial-representation identities and lemmas.

Every check compares two :class:`CKElement` values with zero tolerance. When a
:class:`WordOracle` is attached, the same identity is also evaluated on the
unnormalised operator words in the truncated path space, which does not use the
rewriting engine at all.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

from ..errors import DomainError
from ..groups import FreeWord, PositiveWord, enumerate_positive, enumerate_words, factor_positive, is_dot
from .algebra import AdjacencyMatrix, CKAlgebra, CKElement
from .oracle import WordOracle

__all__ = [
    "CheckReport",
    "verify_pr3",
    "verify_semisat",
    "verify_bsigma_identities",
    "lemma_soma",
    "lemma_main",
    "pr3_sweep",
    "verify_claims",
    "semisat_sweep",
    "verify_relation_generators",
    "bsigma_sweep",
    "soma_sweep",
    "main_lemma_sweep",
    "run_ck_suite",
    "words_upto",
    "pp_inverse_words",
]

MAX_FAILURES_KEPT = 20


@dataclass
class CheckReport:
    label: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    failure_count: int = 0
    oracle_checked: int = 0
    oracle_failures: list[str] = field(default_factory=list)
    oracle_failure_count: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and self.oracle_failure_count == 0

    def fail(self, detail: str) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_FAILURES_KEPT:
            self.failures.append(detail)

    def oracle_fail(self, detail: str) -> None:
        self.oracle_failure_count += 1
        if len(self.oracle_failures) < MAX_FAILURES_KEPT:
            self.oracle_failures.append(detail)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "passed": self.passed,
            "checked": self.checked,
            "failure_count": self.failure_count,
            "failures": self.failures,
            "oracle_checked": self.oracle_checked,
            "oracle_failure_count": self.oracle_failure_count,
            "oracle_failures": self.oracle_failures,
            "elapsed_s": round(self.elapsed, 3),
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", oracle {self.oracle_checked}" if self.oracle_checked else ""
        return f"{status} {self.label}: {self.checked} identities{extra}, {self.failure_count + self.oracle_failure_count} failures"


class _Recorder:
    """Runs engine comparisons and optional oracle comparisons into one report."""

    def __init__(self, report: CheckReport, oracle: WordOracle | None):
        self.report = report
        self.oracle = oracle

    def equal(self, lhs: CKElement, rhs: CKElement, lhs_words, rhs_words, detail: str) -> bool:
        self.report.checked += 1
        ok = lhs == rhs
        if not ok:
            self.report.fail(detail)
        if self.oracle is not None:
            self.report.oracle_checked += 1
            if not self.oracle.equal(lhs_words, rhs_words):
                self.report.oracle_fail(detail)
        return ok

    def zero(self, x: CKElement, words, detail: str) -> bool:
        return self.equal(x, x.alg.zero(), words, [], detail)


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.elapsed = time.perf_counter() - start
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# operator words: positive letter = s_i, negative letter = s_i*
def _s(t: FreeWord) -> tuple[int, ...]:
    return t.letters


def _e(t: FreeWord) -> tuple[int, ...]:
    return t.letters + t.inverse().letters


def _adj(word: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(word))


def words_upto(n: int, k: int) -> list[FreeWord]:
    return [w for j in range(k + 1) for w in enumerate_words(n, j)]


def positives_upto(n: int, k: int) -> list[PositiveWord]:
    return [w for j in range(k + 1) for w in enumerate_positive(n, j)]


def pp_inverse_words(n: int, k: int) -> list[FreeWord]:
    """Reduced words of length <= k of the form alpha beta^-1."""
    return [w for w in words_upto(n, k) if factor_positive(w) is not None]


def _alg(A) -> CKAlgebra:
    return A if isinstance(A, CKAlgebra) else CKAlgebra.of(A)


def _oracle_for(A, max_word: int, use_oracle: bool | WordOracle) -> WordOracle | None:
    if isinstance(use_oracle, WordOracle):
        return use_oracle
    if not use_oracle:
        return None
    alg = _alg(A)
    # 2w+1 is the textbook truncation; int64 word codes cap it, and w+1 always suffices
    cap = int(62 / math.log2(max(alg.n, 2)))
    return WordOracle(alg.A, max(min(2 * max_word + 1, cap), max_word + 1))


# single identities

def verify_pr3(t: FreeWord, r: FreeWord, A) -> bool:
    """S(t) S(r) S(r^-1) == S(tr) S(r^-1), exactly."""
    alg = _alg(A)
    S = alg.partial_rep
    return S(t) * S(r) * S(r.inverse()) == S(t * r) * S(r.inverse())


def verify_semisat(t: FreeWord, r: FreeWord, A) -> bool:
    """e(tr) e(t) == e(tr) for a pair with no cancellation in tr."""
    if not is_dot(t, r):
        raise DomainError(f"{t} and {r} cancel; semi-saturation only applies when lengths add")
    alg = _alg(A)
    e = alg.range_projection
    return e(t * r) * e(t) == e(t * r)


def verify_bsigma_identities(t: FreeWord, r: FreeWord, A) -> bool:
    """S(t) e(r) == e(tr) S(t) and S(t) S(r) == e(t) S(tr)."""
    alg = _alg(A)
    S, e = alg.partial_rep, alg.range_projection
    tr = t * r
    return S(t) * e(r) == e(tr) * S(t) and S(t) * S(r) == e(t) * S(tr)


def lemma_soma(k: int, A) -> bool:
    alg = _alg(A)
    total = alg.zero()
    for a in enumerate_positive(alg.n, k):
        total = total + alg.range_projection(a)
    return total == alg.unit()


def lemma_main(t: FreeWord, k: int, A) -> bool:
    alg = _alg(A)
    S, e = alg.partial_rep, alg.range_projection
    total = alg.zero()
    for a in enumerate_positive(alg.n, k):
        total = total + e(t * a) * S(t) * e(a)
    return total == S(t)


# sweeps

@_timed
def pr3_sweep(A, max_total: int = 6, oracle: bool | WordOracle = False) -> CheckReport:
    """PR3 for every pair with |t| + |r| <= max_total."""
    alg = _alg(A)
    S = alg.partial_rep
    rec = _Recorder(CheckReport(f"PR3 |t|+|r|<={max_total}"), _oracle_for(alg, 2 * max_total, oracle))
    by_len = {k: enumerate_words(alg.n, k) for k in range(max_total + 1)}
    for lr in range(max_total + 1):
        for r in by_len[lr]:
            ri = r.inverse()
            s_ri = S(ri)
            tail = S(r) * s_ri
            for lt in range(max_total - lr + 1):
                for t in by_len[lt]:
                    tr = t * r
                    rec.equal(
                        S(t) * tail,
                        S(tr) * s_ri,
                        [(1, _s(t) + _s(r) + _s(ri))],
                        [(1, _s(tr) + _s(ri))],
                        f"t={t} r={r}",
                    )
    return rec.report


@_timed
def verify_claims(A, depth: int = 3, oracle: bool | WordOracle = False) -> CheckReport:
    """Claims 1-5 of the partial-representation proof, exhaustively up to ``depth``."""
    alg = _alg(A)
    n = alg.n
    S, e = alg.partial_rep, alg.range_projection
    rec = _Recorder(CheckReport(f"Claims 1-5 depth {depth}"), _oracle_for(alg, 4 * depth + 2, oracle))
    pos = positives_upto(n, depth)

    # Claim 1: S(a g_j)* S(a g_j) is 0 or S(g_j)* S(g_j)
    for a in positives_upto(n, max(depth - 1, 0)) if depth else []:
        for j in range(1, n + 1):
            g = FreeWord.gen(j, n)
            ag = a * g
            lhs = S(ag).adjoint() * S(ag)
            base = S(g).adjoint() * S(g)
            word = _adj(_s(ag)) + _s(ag)
            if lhs.is_zero:
                rec.zero(lhs, [(1, word)], f"claim1 a={a} j={j} (zero)")
            else:
                rec.equal(lhs, base, [(1, word)], [(1, _adj(_s(g)) + _s(g))], f"claim1 a={a} j={j}")
            # idempotence of S(b)* S(b) follows from claim 1
            rec.equal(lhs * lhs, lhs, [(1, word + word)], [(1, word)], f"claim1-idem a={a} j={j}")

    for a, b in itertools.product(pos, repeat=2):
        prod = S(a).adjoint() * S(b)
        word = [(1, _adj(_s(a)) + _s(b))]
        # Claim 2
        if len(a) == len(b) and a != b:
            rec.zero(prod, word, f"claim2 a={a} b={b}")
        # Claim 3
        q = a.inverse() * b
        if not (q.is_positive or q.inverse().is_positive):
            rec.zero(prod, word, f"claim3 a={a} b={b}")
        # Claim 4
        rec.equal(
            e(a) * e(b), e(b) * e(a), [(1, _e(a) + _e(b))], [(1, _e(b) + _e(a))], f"claim4 a={a} b={b}"
        )

    # Claim 5
    allw = words_upto(n, depth)
    for t, r in itertools.combinations(allw, 2):
        rec.equal(e(t) * e(r), e(r) * e(t), [(1, _e(t) + _e(r))], [(1, _e(r) + _e(t))], f"claim5 t={t} r={r}")
    # range projections are self-adjoint idempotents
    for t in allw:
        p = e(t)
        rec.equal(p * p, p, [(1, _e(t) + _e(t))], [(1, _e(t))], f"e(t)^2 t={t}")
        rec.equal(p.adjoint(), p, [(1, _adj(_e(t)))], [(1, _e(t))], f"e(t)* t={t}")
    return rec.report


def _dot_pairs(n: int, max_total: int):
    for lt in range(max_total + 1):
        for lr in range(max_total - lt + 1):
            for t in enumerate_words(n, lt):
                for r in enumerate_words(n, lr):
                    if is_dot(t, r):
                        yield t, r


@_timed
def semisat_sweep(A, max_total: int = 5, oracle: bool | WordOracle = False) -> CheckReport:
    """e(tr) <= e(t) and S(tr) = S(t) S(r) for every pair with |tr| = |t| + |r|."""
    alg = _alg(A)
    S, e = alg.partial_rep, alg.range_projection
    rec = _Recorder(CheckReport(f"semi-saturation |t|+|r|<={max_total}"), _oracle_for(alg, 3 * max_total, oracle))
    for t, r in _dot_pairs(alg.n, max_total):
        tr = t * r
        rec.equal(e(tr) * e(t), e(tr), [(1, _e(tr) + _e(t))], [(1, _e(tr))], f"e(tr)e(t) t={t} r={r}")
        rec.equal(S(t) * S(r), S(tr), [(1, _s(t) + _s(r))], [(1, _s(tr))], f"S(t)S(r) t={t} r={r}")
    return rec.report


@_timed
def verify_relation_generators(A, depth: int = 5, oracle: bool | WordOracle = False) -> CheckReport:
    """The four families of ideal generators all evaluate to exact zero."""
    alg = _alg(A)
    n = alg.n
    e = alg.range_projection
    rec = _Recorder(CheckReport(f"relation generators depth {depth}"), _oracle_for(alg, 3 * max(depth, 1), oracle))
    g = [FreeWord.gen(i, n) for i in range(1, n + 1)]
    for i, j in itertools.permutations(range(n), 2):
        rec.zero(e(g[i]) * e(g[j]), [(1, _e(g[i]) + _e(g[j]))], f"CK1'' i={i + 1} j={j + 1}")
    ck2 = alg.unit() - sum((e(x) for x in g), alg.zero())
    rec.zero(ck2, [(1, ())] + [(-1, _e(x)) for x in g], "CK2''")
    for i in range(n):
        gi_inv = g[i].inverse()
        val = e(gi_inv) - sum((e(g[j]) for j in range(n) if alg.A(i + 1, j + 1)), alg.zero())
        words = [(1, _e(gi_inv))] + [(-1, _e(g[j])) for j in range(n) if alg.A(i + 1, j + 1)]
        rec.zero(val, words, f"CK3'' i={i + 1}")
    for t, r in _dot_pairs(n, depth):
        tr = t * r
        rec.zero(e(tr) * e(t) - e(tr), [(1, _e(tr) + _e(t)), (-1, _e(tr))], f"SS' t={t} r={r}")
    return rec.report


@_timed
def bsigma_sweep(A, max_len: int = 3, oracle: bool | WordOracle = False) -> CheckReport:
    """S(t)e(r) = e(tr)S(t) and S(t)S(r) = e(t)S(tr) for |t|, |r| <= max_len."""
    alg = _alg(A)
    S, e = alg.partial_rep, alg.range_projection
    rec = _Recorder(CheckReport(f"B_t identities |t|,|r|<={max_len}"), _oracle_for(alg, 6 * max_len, oracle))
    allw = words_upto(alg.n, max_len)
    for t in allw:
        for r in allw:
            tr = t * r
            rec.equal(S(t) * e(r), e(tr) * S(t), [(1, _s(t) + _e(r))], [(1, _e(tr) + _s(t))], f"S(t)e(r) t={t} r={r}")
            rec.equal(S(t) * S(r), e(t) * S(tr), [(1, _s(t) + _s(r))], [(1, _e(t) + _s(tr))], f"S(t)S(r) t={t} r={r}")
    return rec.report


@_timed
def soma_sweep(A, k_max: int = 4, oracle: bool | WordOracle = False) -> CheckReport:
    alg = _alg(A)
    rec = _Recorder(CheckReport(f"Lemma Soma k<={k_max}"), _oracle_for(alg, 2 * k_max, oracle))
    for k in range(k_max + 1):
        alphas = enumerate_positive(alg.n, k)
        total = sum((alg.range_projection(a) for a in alphas), alg.zero())
        rec.equal(total, alg.unit(), [(1, _e(a)) for a in alphas], [(1, ())], f"Lemma Soma k={k}")
    return rec.report


@_timed
def main_lemma_sweep(A, t_max: int = 3, k_max: int = 3, oracle: bool | WordOracle = False) -> CheckReport:
    """sigma(t) = sum_{a in P_k} e(ta) sigma(t) e(a) for t = alpha beta^-1."""
    alg = _alg(A)
    S, e = alg.partial_rep, alg.range_projection
    rec = _Recorder(
        CheckReport(f"MainLemma |t|<={t_max} k<={k_max}"), _oracle_for(alg, 3 * t_max + 4 * k_max, oracle)
    )
    for t in pp_inverse_words(alg.n, t_max):
        st = S(t)
        for k in range(k_max + 1):
            alphas = enumerate_positive(alg.n, k)
            total = sum((e(t * a) * st * e(a) for a in alphas), alg.zero())
            words = [(1, _e(t * a) + _s(t) + _e(a)) for a in alphas]
            rec.equal(total, st, words, [(1, _s(t))], f"MainLemma t={t} k={k}")
    return rec.report


def run_ck_suite(
    A: AdjacencyMatrix,
    depth: int = 3,
    k_max: int = 4,
    pr3_total: int = 6,
    oracle: bool = False,
) -> list[CheckReport]:
    """Every symbolic check at the given caps; used by the command line."""
    return [
        pr3_sweep(A, pr3_total, oracle),
        verify_claims(A, depth, oracle),
        soma_sweep(A, k_max, oracle),
        main_lemma_sweep(A, depth, min(depth, k_max), oracle),
        verify_relation_generators(A, depth + 2, oracle),
        semisat_sweep(A, depth + 2, oracle),
        bsigma_sweep(A, depth, oracle),
    ]
