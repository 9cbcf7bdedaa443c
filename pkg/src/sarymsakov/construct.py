"""Named example matrices, the index-2 breaker construction, and class samplers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import classes as cl
from .matrix import (
    DEFAULT_EPS,
    BooleanPattern,
    DisjointPair,
    IndexSet,
    MatrixError,
    StochasticMatrix,
    image,
    pattern_of,
    popcount,
)


class NotApplicable(ValueError):
    pass


class UnknownName(KeyError):
    pass


class BadDimension(ValueError):
    pass


class ExhaustedTries(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# breaker

@dataclass(frozen=True)
class BreakerResult:
    q: StochasticMatrix
    witness_pair: DisjointPair
    q_index: int


def breaker_matrix(n: int, a: int, b: int, fa: int, fb: int) -> np.ndarray:
    """Rows in ``fa`` spread evenly over ``a``, rows in ``fb`` over ``b``, the rest uniform."""
    q = np.full((n, n), 1.0 / n)
    for rows, target in ((fa, a), (fb, b)):
        cols = [j for j in range(n) if target >> j & 1]
        for i in range(n):
            if rows >> i & 1:
                q[i] = 0.0
                q[i, cols] = 1.0 / len(cols)
    return q


def breaker(p: BooleanPattern, pair: Optional[DisjointPair] = None) -> BreakerResult:
    """Build Q such that both PQ and QP fail to be SIA.

    ``p`` must be SIA but not Sarymsakov.  The witness is the first disjoint
    pair (canonical order) whose one-stage images are disjoint without strict
    growth, unless ``pair`` is given.  Q has SIA index 2 when the images'
    union has the same size as the pair's union, and index 1 when it is
    strictly smaller.
    """
    if not cl.is_sia(p):
        raise NotApplicable("breaker needs an SIA pattern")
    if pair is None:
        found = next(cl.failing_pairs(p, strict=True), None)
        if found is None:
            raise NotApplicable("pattern is Sarymsakov; no witness pair exists")
        a, b = found
        pair = DisjointPair(IndexSet(p.n, a), IndexSet(p.n, b))
    else:
        a, b = pair.a.bits, pair.b.bits
        if cl._sarymsakov_ok(p.rows, a, b, strict=True):
            raise NotApplicable("given pair satisfies the one-stage condition")
    fa, fb = image(p.rows, a), image(p.rows, b)
    q = StochasticMatrix(breaker_matrix(p.n, a, b, fa, fb))
    q_index = 2 if popcount(fa | fb) == popcount(a | b) else 1
    return BreakerResult(q, pair, q_index)


# ---------------------------------------------------------------------------
# gallery

@dataclass(frozen=True)
class GalleryEntry:
    name: str
    matrices: tuple[StochasticMatrix, ...]
    expected: tuple[dict, ...]
    note: str = ""

    @property
    def matrix(self) -> StochasticMatrix:
        return self.matrices[0]


def _uniform_rows(n: int, rows: dict[int, list[float]]) -> np.ndarray:
    m = np.full((n, n), 1.0 / n)
    for i, r in rows.items():
        m[i] = r
    return m


def _unit(n: int, j: int) -> list[float]:
    e = [0.0] * n
    e[j] = 1.0
    return e


def companion(n: int) -> StochasticMatrix:
    """Uniform first row, then the shift rows e_1, ..., e_{n-1}."""
    return StochasticMatrix(_uniform_rows(n, {i: _unit(n, i - 1) for i in range(1, n)}))


def r_matrix(n: int) -> StochasticMatrix:
    """Uniform rows except rows 2 and 3, which are e_1 and e_2."""
    return StochasticMatrix(_uniform_rows(n, {1: _unit(n, 0), 2: _unit(n, 1)}))


def prop1_p(n: int) -> StochasticMatrix:
    half = [0.5, 0.5] + [0.0] * (n - 2)
    return StochasticMatrix(_uniform_rows(n, {0: half, 1: _unit(n, 2)}))


def prop1_q(n: int) -> StochasticMatrix:
    return StochasticMatrix(_uniform_rows(n, {0: _unit(n, 0), 1: _unit(n, 0), 2: _unit(n, 1)}))


INDEX_TWO_P = [[1 / 3, 1 / 3, 1 / 3], [1, 0, 0], [0, 1, 0]]
PATSYM_P1 = [[0, 1, 0, 0], [1 / 2, 0, 1 / 2, 0], [0, 1 / 3, 1 / 3, 1 / 3], [0, 0, 1, 0]]
PATSYM_P2 = [[0, 1 / 2, 0, 1 / 2], [1, 0, 0, 0], [0, 0, 0, 1], [1 / 3, 0, 1 / 3, 1 / 3]]
W_PAIR_P1 = INDEX_TWO_P
W_PAIR_P2 = [[0, 1, 0], [0, 0, 1], [1 / 3, 1 / 3, 1 / 3]]


def _fixed(name: str, size: int, build: Callable[[], GalleryEntry]):
    def make(n: Optional[int]) -> GalleryEntry:
        if n is not None and n != size:
            raise BadDimension(f"{name} is fixed at n={size}")
        return build()
    return make


def _parametric(build: Callable[[int], GalleryEntry]):
    def make(n: Optional[int]) -> GalleryEntry:
        if n is None or n < 3:
            raise BadDimension("parametric gallery entries need n >= 3")
        return build(n)
    return make


def _prop1_p_entry(n: int) -> GalleryEntry:
    expected = {"sarymsakov": True, "sia": True, "sia_index": 1}
    if n == 3:
        expected["class_g"] = False
    return GalleryEntry("prop1_p", (prop1_p(n),), (expected,), "Sarymsakov but outside class G")


GALLERY: dict[str, Callable[[Optional[int]], GalleryEntry]] = {
    "example1_p": _fixed("example1_p", 3, lambda: GalleryEntry(
        "example1_p",
        (StochasticMatrix(INDEX_TWO_P),),
        ({"sia": True, "sarymsakov": False, "sia_index": 2, "scrambling": False, "class_w": True},),
        "SIA with index 2, not Sarymsakov",
    )),
    "companion": _parametric(lambda n: GalleryEntry(
        "companion", (companion(n),),
        ({"sia": True, "sarymsakov": False, "sia_index": n - 1},),
        "SIA index n-1",
    )),
    "r_matrix": _parametric(lambda n: GalleryEntry(
        "r_matrix", (r_matrix(n),),
        ({"sia": True, "sarymsakov": False, "sia_index": 2, "class_w": True},),
        "index 2, class W; together with all Sarymsakov matrices closed under products",
    )),
    "prop1_p": _parametric(_prop1_p_entry),
    "prop1_q": _parametric(lambda n: GalleryEntry(
        "prop1_q", (prop1_q(n),), ({"sia": True},),
        "SIA; Q times prop1_p is not SIA",
    )),
    "patsym_p": _fixed("patsym_p", 4, lambda: GalleryEntry(
        "patsym_p", (StochasticMatrix(PATSYM_P1),),
        ({"pattern_symmetric": True, "sia": True, "sarymsakov": False, "sia_index": 2},),
        "pattern-symmetric SIA with index 2",
    )),
    "patsym_pair": _fixed("patsym_pair", 4, lambda: GalleryEntry(
        "patsym_pair", (StochasticMatrix(PATSYM_P1), StochasticMatrix(PATSYM_P2)),
        ({"pattern_symmetric": True}, {"pattern_symmetric": True}),
        "(P1 P2)^k does not converge to rank one",
    )),
    "sec4_pair": _fixed("sec4_pair", 3, lambda: GalleryEntry(
        "sec4_pair", (StochasticMatrix(W_PAIR_P1), StochasticMatrix(W_PAIR_P2)),
        ({"sia": True, "class_w": True}, {"sia": True, "class_w": True}),
        "two SIA class-W matrices whose product P1 P2 is not SIA",
    )),
}

GALLERY_NAMES = tuple(GALLERY)
PARAMETRIC = frozenset({"companion", "r_matrix", "prop1_p", "prop1_q"})


def gallery(name: str, n: Optional[int] = None) -> GalleryEntry:
    try:
        make = GALLERY[name]
    except KeyError:
        raise UnknownName(f"unknown gallery entry {name!r}; known: {', '.join(GALLERY_NAMES)}") from None
    return make(n)


# ---------------------------------------------------------------------------
# random samplers

@dataclass
class SamplerConfig:
    density: float = 0.5
    diag_density: float = 0.7
    low: float = 0.1
    max_perms: Optional[int] = None


def _fill(mask: np.ndarray, rng: np.random.Generator, cfg: SamplerConfig) -> np.ndarray:
    w = np.where(mask, rng.uniform(cfg.low, 1.0, size=mask.shape), 0.0)
    return w / w.sum(axis=1, keepdims=True)


def random_mask(n: int, rng: np.random.Generator, cfg: SamplerConfig, symmetric: bool = False) -> np.ndarray:
    mask = rng.random((n, n)) < cfg.density
    if symmetric:
        mask = np.triu(mask, 1)
        mask = mask | mask.T
    np.fill_diagonal(mask, rng.random(n) < cfg.diag_density)
    for i in np.flatnonzero(~mask.any(axis=1)):
        mask[i, rng.integers(n)] = True
        if symmetric:
            mask = mask | (mask.T & ~np.eye(n, dtype=bool))
    return mask


def random_stochastic(n: int, rng: np.random.Generator, cfg: SamplerConfig = SamplerConfig()) -> StochasticMatrix:
    return StochasticMatrix(_fill(random_mask(n, rng, cfg), rng, cfg))


def random_doubly_stochastic(
    n: int, rng: np.random.Generator, cfg: SamplerConfig = SamplerConfig(), identity: bool = False
) -> StochasticMatrix:
    """Random convex combination of random permutation matrices."""
    k = int(rng.integers(1, (cfg.max_perms or n) + 1))
    weights = rng.dirichlet(np.ones(k + identity))
    weights = cfg.low / (k + 1) + (1 - cfg.low) * weights  # keep every weight well above eps
    weights /= weights.sum()
    m = np.zeros((n, n))
    perms = [rng.permutation(n) for _ in range(k)]
    if identity:
        perms.append(np.arange(n))
    for w, perm in zip(weights, perms):
        m[np.arange(n), perm] += w
    return StochasticMatrix(m)


def _symmetric_sia(n, rng, cfg):
    return StochasticMatrix(_fill(random_mask(n, rng, cfg, symmetric=True), rng, cfg))


_SAMPLERS = {
    "stochastic": (random_stochastic, lambda p, m: True),
    "scrambling": (random_stochastic, lambda p, m: cl.is_scrambling(p)),
    "sarymsakov": (random_stochastic, lambda p, m: cl.is_sarymsakov(p)),
    "sia": (random_stochastic, lambda p, m: cl.is_sia(p)),
    "sia_index_ge_2": (random_stochastic, lambda p, m: cl.is_sia(p) and not cl.is_sarymsakov(p)),
    "class_w": (random_stochastic, lambda p, m: cl.in_class_w(p)),
    "doubly_stochastic": (random_doubly_stochastic, lambda p, m: True),
    "doubly_stochastic_positive_diagonal": (
        lambda n, rng, cfg: random_doubly_stochastic(n, rng, cfg, identity=True), lambda p, m: True),
    "pattern_symmetric_sia": (_symmetric_sia, lambda p, m: cl.is_pattern_symmetric(p) and cl.is_sia(p)),
}

CLASS_TAGS = tuple(_SAMPLERS)


def random_in_class(
    tag: str,
    n: int,
    seed: int | np.random.Generator = 0,
    max_tries: int = 10_000,
    config: SamplerConfig | None = None,
    eps: float = DEFAULT_EPS,
) -> StochasticMatrix:
    """Rejection-sample a random n x n matrix the classifier puts in ``tag``."""
    if tag not in _SAMPLERS:
        raise UnknownName(f"unknown class tag {tag!r}; known: {', '.join(CLASS_TAGS)}")
    if not 1 <= n <= cl.EXACT_N_CAP:
        raise BadDimension(f"n={n} outside 1..{cl.EXACT_N_CAP}")
    cfg = config or SamplerConfig()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draw, accept = _SAMPLERS[tag]
    for _ in range(max_tries):
        m = draw(n, rng, cfg)
        try:
            p = pattern_of(m, eps)
        except MatrixError:  # pragma: no cover - samplers keep entries above eps
            continue
        if accept(p, m):
            return m
    raise ExhaustedTries(f"no {tag} matrix at n={n} after {max_tries} tries")
