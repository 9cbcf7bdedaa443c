"""Exact consensus-set decision for finite matrix sets.

The zero pattern of a product depends only on the factor patterns, so every
finite left-product P(k)...P(1) lands in the finite semigroup generated by the
generator patterns.  A finite set is a consensus set iff every element of that
semigroup is SIA.

Words are tuples of generator positions (0-based), oldest factor first: the
word ``(i1, i2, ..., ik)`` stands for the product ``G[ik] ... G[i2] G[i1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from . import classes as cl
from .matrix import (
    DEFAULT_EPS,
    BooleanPattern,
    DimensionMismatch,
    StochasticMatrix,
    bool_product,
    pattern_of,
)

DEFAULT_CLOSURE_BUDGET = 1_000_000
DEFAULT_MAX_LEVELS = 100_000
ORIENTATION = "words list factors oldest first; word (i1,...,ik) is the product G[ik]...G[i1]"


class NotConsensusSet(ValueError):
    pass


class Horizons(NamedTuple):
    nu: int     # all products of length >= nu are scrambling
    mu: int     # ... have a positive column
    alpha: int  # ... are Sarymsakov


@dataclass(frozen=True)
class ClosureReport:
    generators: tuple[BooleanPattern, ...]
    words: dict[BooleanPattern, tuple[int, ...]]
    truncated: bool
    budget: int

    @property
    def elements(self) -> frozenset[BooleanPattern]:
        return frozenset(self.words)

    def __len__(self) -> int:
        return len(self.words)


def _as_patterns(items, eps: float) -> tuple[BooleanPattern, ...]:
    pats = tuple(x if isinstance(x, BooleanPattern) else pattern_of(x, eps) for x in items)
    if not pats:
        raise ValueError("need at least one generator")
    if len({p.n for p in pats}) != 1:
        raise DimensionMismatch("generators have different dimensions")
    return pats


def replay(gens: Sequence[BooleanPattern], word: Sequence[int]) -> BooleanPattern:
    """Pattern of the left-product spelled by ``word``."""
    out = gens[word[0]]
    for i in word[1:]:
        out = bool_product(gens[i], out)
    return out


def semigroup_closure(gens: Sequence[BooleanPattern], budget: int = DEFAULT_CLOSURE_BUDGET) -> ClosureReport:
    """Breadth-first closure under left multiplication by generators.

    Each element keeps the lexicographically smallest among its shortest words:
    the frontier is expanded in word order and generators in index order, so
    the first discovery wins.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    gens = tuple(gens)
    if len({g.n for g in gens}) > 1:
        raise DimensionMismatch("generators have different dimensions")
    words: dict[BooleanPattern, tuple[int, ...]] = {}
    frontier = []
    for i, g in enumerate(gens):
        if g not in words:
            if len(words) >= budget:
                return ClosureReport(gens, words, True, budget)
            words[g] = (i,)
            frontier.append(g)
    while frontier:
        nxt = []
        for e in frontier:
            w = words[e]
            for i, g in enumerate(gens):
                new = bool_product(g, e)
                if new in words:
                    continue
                if len(words) >= budget:
                    return ClosureReport(gens, words, True, budget)
                words[new] = w + (i,)
                nxt.append(new)
        frontier = nxt
    return ClosureReport(gens, words, False, budget)


def _first_hold(levels: list[frozenset], start: int, pred) -> Optional[int]:
    # levels[k-1] is L_k; levels[start-1:] is the repeating cycle
    ok = [all(pred(p) for p in lv) for lv in levels]
    if not all(ok[start - 1:]):
        return None
    k = len(levels)
    while k > 1 and ok[k - 2]:
        k -= 1
    return k


def horizons(closure: ClosureReport, max_levels: int = DEFAULT_MAX_LEVELS) -> Horizons:
    """Least lengths beyond which every product is scrambling / positive-column / Sarymsakov.

    Iterates the level sets L_k (patterns of all length-k products).  They live
    in a finite power set, so the sequence is eventually periodic; once a level
    set repeats, checking one full period settles every larger k.
    """
    if closure.truncated:
        raise ValueError("closure was truncated; horizons are undefined")
    bad = [p for p in closure.words if not cl.is_sia(p)]
    if bad:
        raise NotConsensusSet(f"closure has a non-SIA element (word {closure.words[bad[0]]})")
    gens = closure.generators
    level = frozenset(gens)
    seen = {level: 1}
    levels = [level]
    while True:
        level = frozenset(bool_product(g, e) for e in level for g in gens)
        if level in seen:
            start = seen[level]
            break
        if len(levels) >= max_levels:
            raise RuntimeError(f"level sets did not cycle within {max_levels} steps")
        levels.append(level)
        seen[level] = len(levels)
    out = [_first_hold(levels, start, pred) for pred in (cl.is_scrambling, cl.has_positive_column, cl.is_sarymsakov)]
    if None in out:  # pragma: no cover - impossible for a consensus set
        raise AssertionError("a horizon does not exist although every product is SIA")
    return Horizons(*out)


@dataclass(frozen=True)
class ConsensusDecision:
    is_consensus_set: Optional[bool]
    witness_word: Optional[tuple[int, ...]] = None
    horizons: Optional[Horizons] = None
    closure_size: int = 0
    truncated: bool = False

    def to_dict(self) -> dict:
        h = self.horizons
        return {
            "is_consensus_set": self.is_consensus_set,
            "witness_word": None if self.witness_word is None else list(self.witness_word),
            "nu": h.nu if h else None,
            "mu": h.mu if h else None,
            "alpha": h.alpha if h else None,
            "closure_size": self.closure_size,
            "truncated": self.truncated,
            "orientation": ORIENTATION,
        }


def decide_consensus(
    mats: Sequence[StochasticMatrix | BooleanPattern],
    budget: int = DEFAULT_CLOSURE_BUDGET,
    eps: float = DEFAULT_EPS,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> ConsensusDecision:
    """Decide whether a finite set of stochastic matrices is a consensus set.

    Returns ``is_consensus_set=None`` when the closure hits ``budget``.  On a
    negative answer the witness is the shortest (then lexicographically
    smallest) word whose product is not SIA.
    """
    gens = _as_patterns(mats, eps)
    closure = semigroup_closure(gens, budget)
    bad = [w for p, w in closure.words.items() if not cl.is_sia(p)]
    if bad:
        # a non-SIA product is a definite answer even from a partial closure
        witness = min(bad, key=lambda w: (len(w), w))
        return ConsensusDecision(False, witness, None, len(closure), closure.truncated)
    if closure.truncated:
        return ConsensusDecision(None, None, None, len(closure), True)
    return ConsensusDecision(True, None, horizons(closure, max_levels), len(closure), False)
