"""Class membership tests on zero patterns, and the SIA index.

All tests except :func:`is_doubly_stochastic` look only at the zero pattern of
a matrix.  They quantify over the unordered disjoint pairs produced by
:func:`sarymsakov.matrix.raw_pairs`.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Iterator, Literal, Optional

import numpy as np

from .matrix import (
    DEFAULT_EPS,
    BooleanPattern,
    DimensionTooSmall,
    StochasticMatrix,
    image,
    meeting_bound,
    pattern_of,
    popcount,
    raw_pairs,
)

DEFAULT_G_BUDGET = 100_000
DEFAULT_INDEX_BUDGET = 1_000_000
EXACT_N_CAP = 16


class BudgetExceeded(RuntimeError):
    pass


def _sarymsakov_ok(rows, a: int, b: int, strict: bool = True) -> bool:
    fa, fb = image(rows, a), image(rows, b)
    if fa & fb:
        return True
    grown = popcount(fa | fb) - popcount(a | b)
    return grown > 0 if strict else grown >= 0


def failing_pairs(p: BooleanPattern, strict: bool = True) -> Iterator[tuple[int, int]]:
    """Disjoint pairs (as raw bit sets) that violate the one-stage condition.

    With ``strict=True`` this is the Sarymsakov condition, otherwise the
    non-strict variant defining class W.
    """
    for a, b in raw_pairs(p.n):
        if not _sarymsakov_ok(p.rows, a, b, strict):
            yield a, b


def is_scrambling(p: BooleanPattern) -> bool:
    rows = p.rows
    return all(rows[i] & rows[j] for i, j in itertools.combinations(range(p.n), 2))


def is_sarymsakov(p: BooleanPattern) -> bool:
    return next(failing_pairs(p, strict=True), None) is None


def in_class_w(p: BooleanPattern) -> bool:
    return next(failing_pairs(p, strict=False), None) is None


def has_positive_column(p: BooleanPattern) -> bool:
    common = (1 << p.n) - 1
    for r in p.rows:
        common &= r
    return common != 0


def has_positive_diagonal(p: BooleanPattern) -> bool:
    return all(r >> i & 1 for i, r in enumerate(p.rows))


def is_pattern_symmetric(p: BooleanPattern) -> bool:
    # off-diagonal entries only
    rows = p.rows
    return all(
        bool(rows[i] >> j & 1) == bool(rows[j] >> i & 1)
        for i, j in itertools.combinations(range(p.n), 2)
    )


def is_doubly_stochastic(m: StochasticMatrix, tol: float = 1e-9) -> bool:
    return bool(np.all(np.abs(np.asarray(m).sum(axis=0) - 1.0) <= tol))


def first_meeting(rows, a: int, b: int) -> Optional[int]:
    """Smallest k with F^k(a) and F^k(b) intersecting, or None if never.

    Iterates the pair of images and stops as soon as a state repeats: the map
    is deterministic on a finite state space, so a repeat without a meeting
    means the images stay apart forever.
    """
    seen = set()
    k = 0
    while True:
        a, b = image(rows, a), image(rows, b)
        k += 1
        if a & b:
            return k
        if (a, b) in seen:
            return None
        seen.add((a, b))


def is_sia(p: BooleanPattern) -> bool:
    """Whether every disjoint pair's images eventually meet.

    Singleton pairs suffice: images are monotone in the set, so once
    F^k(i) meets F^k(j) every pair containing i and j on opposite sides meets.
    """
    rows = p.rows
    return all(
        first_meeting(rows, 1 << i, 1 << j) is not None
        for i, j in itertools.combinations(range(p.n), 2)
    )


def pair_stage(rows, a: int, b: int, limit: int) -> Optional[int]:
    """Smallest k <= limit where images meet or grow strictly past |a u b|."""
    size = popcount(a | b)
    fa, fb = a, b
    for k in range(1, limit + 1):
        fa, fb = image(rows, fa), image(rows, fb)
        if fa & fb or popcount(fa | fb) > size:
            return k
    return None


def sia_index_with_pair(p: BooleanPattern) -> tuple[Optional[int], Optional[tuple[int, int]]]:
    """SIA index together with the first pair (raw bits) attaining it."""
    if not is_sia(p):
        return None, None
    if p.n == 1:
        return 1, None
    limit = meeting_bound(p.n)
    best, where = 0, None
    for a, b in raw_pairs(p.n):
        s = pair_stage(p.rows, a, b, limit)
        if s is None:  # pragma: no cover - excluded by the meeting bound
            raise AssertionError(f"pair {a:#x},{b:#x} exceeded the stage bound {limit}")
        if s > best:
            best, where = s, (a, b)
    return best, where


def sia_index(p: BooleanPattern) -> Optional[int]:
    """Max over disjoint pairs of the first qualifying stage; None if not SIA."""
    return sia_index_with_pair(p)[0]


# ---------------------------------------------------------------------------
# exhaustive machinery

def pattern_space_size(n: int) -> int:
    return ((1 << n) - 1) ** n


def all_patterns(n: int) -> Iterator[BooleanPattern]:
    """Every row-valid n x n pattern, in lexicographic row order."""
    for rows in itertools.product(range(1, 1 << n), repeat=n):
        yield BooleanPattern(n, rows)


@lru_cache(maxsize=8)
def _sia_rows(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(q.rows for q in all_patterns(n) if is_sia(q))


@dataclass(frozen=True)
class GTest:
    verdict: Optional[bool]
    patterns_examined: int
    counterexample: Optional[BooleanPattern] = None


def g_test(p: BooleanPattern, budget: int = DEFAULT_G_BUDGET) -> GTest:
    """Brute-force test of: p is SIA and QP is SIA for every SIA pattern Q.

    Gives up (verdict None) when the (2^n - 1)^n candidate patterns exceed
    ``budget``; membership is universally quantified, so sampling proves nothing.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    total = pattern_space_size(p.n)
    if total > budget:
        return GTest(None, 0)
    if not is_sia(p):
        return GTest(False, 0)
    examined = 0
    for q_rows in _sia_rows(p.n):
        examined += 1
        qp = BooleanPattern(p.n, tuple(image(p.rows, r) for r in q_rows))
        if not is_sia(qp):
            return GTest(False, examined, BooleanPattern(p.n, q_rows))
    return GTest(True, examined)


def in_class_g(p: BooleanPattern, budget: int = DEFAULT_G_BUDGET) -> Optional[bool]:
    return g_test(p, budget).verdict


@dataclass(frozen=True)
class MaxIndexReport:
    n: int
    l: int
    mode: Literal["exact", "sampled"]
    patterns_examined: int
    witness: Optional[BooleanPattern]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "l": self.l,
            "mode": self.mode,
            "patterns_examined": self.patterns_examined,
            "witness": None if self.witness is None
            else [[j + 1 for j in range(self.n) if r >> j & 1] for r in self.witness.rows],
        }


def random_pattern(n: int, rng: np.random.Generator) -> BooleanPattern:
    return BooleanPattern(n, tuple(int(x) for x in rng.integers(1, 1 << n, size=n)))


def _scan(n: int, first_row: Optional[int] = None) -> tuple[int, Optional[tuple[int, ...]], int]:
    heads = range(1, 1 << n) if first_row is None else (first_row,)
    best, witness, examined = 0, None, 0
    for head in heads:
        for tail in itertools.product(range(1, 1 << n), repeat=n - 1):
            examined += 1
            p = BooleanPattern(n, (head,) + tail)
            s = sia_index(p)
            if s is not None and s > best:
                best, witness = s, p.rows
    return best, witness, examined


def max_sia_index(
    n: int,
    mode: Literal["exact", "sampled"] = "exact",
    budget: int = DEFAULT_INDEX_BUDGET,
    seed: int = 0,
    workers: int = 1,
) -> MaxIndexReport:
    """Largest SIA index among n x n patterns.

    ``exact`` enumerates all (2^n - 1)^n patterns and refuses if that exceeds
    ``budget``; ``sampled`` draws ``budget`` uniform row-valid patterns.
    With ``workers > 1`` the exact scan is split by first row across
    processes; chunks are merged in enumeration order, so the witness is the
    same as for a serial run.
    """
    if n < 2:
        raise DimensionTooSmall(f"max_sia_index needs n >= 2, got {n}")
    if mode == "exact":
        if pattern_space_size(n) > budget:
            raise BudgetExceeded(f"{pattern_space_size(n)} patterns at n={n} exceed budget {budget}")
        if workers > 1:
            from concurrent.futures import ProcessPoolExecutor

            heads = list(range(1, 1 << n))
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_scan, [n] * len(heads), heads))
        else:
            parts = [_scan(n)]
        best, witness, examined = 0, None, 0
        for b, w, c in parts:
            examined += c
            if b > best:
                best, witness = b, w
        return MaxIndexReport(n, best, mode, examined, None if witness is None else BooleanPattern(n, witness))
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    best, witness = 0, None
    for _ in range(budget):
        p = random_pattern(n, rng)
        s = sia_index(p)
        if s is not None and s > best:
            best, witness = s, p
    return MaxIndexReport(n, best, mode, budget, witness)


# ---------------------------------------------------------------------------
# full report

@dataclass(frozen=True)
class ClassReport:
    stochastic: bool
    doubly_stochastic: bool
    positive_diagonal: bool
    pattern_symmetric: bool
    scrambling: bool
    positive_column: bool
    sarymsakov: bool
    sia: bool
    sia_index: Optional[int]
    class_w: bool
    class_g: Optional[bool] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("sia_index", "class_g"):
            if d[key] is None:
                del d[key]
        return d


def classify(
    m: StochasticMatrix | BooleanPattern,
    eps: float = DEFAULT_EPS,
    g_budget: int = DEFAULT_G_BUDGET,
    tol: float = 1e-9,
) -> ClassReport:
    """Run every class test on ``m``.

    A bare pattern is classified through its row-normalised 0/1 representative,
    which only matters for ``doubly_stochastic``.
    """
    if isinstance(m, BooleanPattern):
        p, m = m, m.to_matrix()
    else:
        p = pattern_of(m, eps)
    if p.n > EXACT_N_CAP:
        raise BudgetExceeded(f"exact classification is capped at n={EXACT_N_CAP}")
    index = sia_index(p)
    return ClassReport(
        stochastic=True,
        doubly_stochastic=is_doubly_stochastic(m, tol),
        positive_diagonal=has_positive_diagonal(p),
        pattern_symmetric=is_pattern_symmetric(p),
        scrambling=is_scrambling(p),
        positive_column=has_positive_column(p),
        sarymsakov=is_sarymsakov(p),
        sia=index is not None,
        sia_index=index,
        class_w=in_class_w(p),
        class_g=in_class_g(p, g_budget),
    )
