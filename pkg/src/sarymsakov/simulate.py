"""Numeric simulation of left-products P(k)...P(1) and convergence metrics."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from . import classes as cl
from .matrix import DEFAULT_EPS, DimensionMismatch, StochasticMatrix, pattern_of

log = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10


class PoolClassViolation(ValueError):
    pass


def rank_one_defect(m) -> float:
    """Largest column spread max_i m_ij - min_i m_ij; zero iff all rows agree."""
    a = np.asarray(m)
    return float(np.max(a.max(axis=0) - a.min(axis=0)))


def dobrushin(m) -> float:
    """Ergodicity coefficient 1 - min over row pairs of sum_k min(m_ik, m_jk).

    Below one exactly when every two rows overlap, i.e. the matrix is scrambling.
    """
    a = np.asarray(m)
    n = a.shape[0]
    if n == 1:
        return 0.0
    overlap = np.minimum(a[:, None, :], a[None, :, :]).sum(axis=2)
    iu = np.triu_indices(n, 1)
    return float(min(1.0, max(0.0, 1.0 - overlap[iu].min())))


def bounded_gap_schedule(
    pool_size: int,
    sarymsakov_indices: Sequence[int],
    gap: int,
    steps: int,
    seed: int | np.random.Generator = 0,
) -> list[int]:
    """Random pool indices in which every window of ``gap`` positions hits a Sarymsakov index.

    Positions are drawn uniformly from the pool; when ``gap - 1`` positions in
    a row have missed the Sarymsakov subset, the next one is drawn from it.
    """
    if gap < 1:
        raise ValueError("gap must be >= 1")
    marked = sorted(set(sarymsakov_indices))
    if not marked:
        raise ValueError("need at least one Sarymsakov index")
    if marked[0] < 0 or marked[-1] >= pool_size:
        raise ValueError("Sarymsakov index out of pool range")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    marked_set = set(marked)
    out, miss = [], 0
    for _ in range(steps):
        if miss == gap - 1:
            i = marked[rng.integers(len(marked))]
        else:
            i = int(rng.integers(pool_size))
        miss = 0 if i in marked_set else miss + 1
        out.append(int(i))
    return out


@dataclass
class ScheduleSpec:
    pool: list[StochasticMatrix]
    sarymsakov_indices: list[int] = field(default_factory=list)
    gap: int = 1
    steps: int = 10_000
    seed: int = 0
    mode: Literal["theorem7", "iid", "custom"] = "theorem7"
    sequence: Optional[list[int]] = None  # custom mode; repeated cyclically

    def __post_init__(self):
        if not self.pool:
            raise ValueError("pool must be nonempty")
        if len({m.n for m in self.pool}) != 1:
            raise DimensionMismatch("pool matrices have different dimensions")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.mode not in ("theorem7", "iid", "custom"):
            raise ValueError(f"unknown schedule mode {self.mode!r}")
        if self.mode == "custom":
            if not self.sequence:
                raise ValueError("custom mode needs an explicit index sequence")
            if min(self.sequence) < 0 or max(self.sequence) >= len(self.pool):
                raise ValueError("custom sequence index out of pool range")

    def indices(self) -> list[int]:
        if self.mode == "theorem7":
            return bounded_gap_schedule(len(self.pool), self.sarymsakov_indices, self.gap, self.steps, self.seed)
        if self.mode == "iid":
            rng = np.random.default_rng(self.seed)
            return [int(i) for i in rng.integers(len(self.pool), size=self.steps)]
        seq = self.sequence
        return [seq[k % len(seq)] for k in range(self.steps)]

    @classmethod
    def from_dict(cls, d: dict, pool: list[StochasticMatrix]) -> "ScheduleSpec":
        keys = {"sarymsakov_indices", "gap", "steps", "seed", "mode", "sequence"}
        unknown = set(d) - keys - {"pool"}
        if unknown:
            raise ValueError(f"unknown schedule keys: {sorted(unknown)}")
        return cls(pool=pool, **{k: v for k, v in d.items() if k in keys})


@dataclass(frozen=True)
class ConvergenceReport:
    defect_trace: list[tuple[int, float]]
    converged: bool
    final_defect: float
    limit_row: Optional[list[float]]
    steps_run: int
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "converged": self.converged,
            "final_defect": self.final_defect,
            "limit_row": self.limit_row,
            "steps_run": self.steps_run,
            "tolerance": self.tolerance,
        }

    def trace_csv(self) -> str:
        return "step,defect\n" + "".join(f"{s},{d!r}\n" for s, d in self.defect_trace)


def check_pool(spec: ScheduleSpec, eps: float = DEFAULT_EPS) -> None:
    """Pool must lie in class W and the marked matrices must be Sarymsakov."""
    for i, m in enumerate(spec.pool):
        p = pattern_of(m, eps)
        if not cl.in_class_w(p):
            raise PoolClassViolation(f"pool matrix {i} is not in class W")
        if i in spec.sarymsakov_indices and not cl.is_sarymsakov(p):
            raise PoolClassViolation(f"pool matrix {i} is marked Sarymsakov but is not")


def simulate(
    spec: ScheduleSpec,
    tolerance: float = DEFAULT_TOLERANCE,
    report_every: int = 1,
    renormalize_every: Optional[int] = None,
    eps: float = DEFAULT_EPS,
) -> ConvergenceReport:
    """Accumulate the left-product along the schedule until the rows agree.

    The pool hypotheses are only enforced in ``theorem7`` mode; the other
    modes are for exploration and claim nothing beyond the simulated horizon.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if report_every < 1:
        raise ValueError("report_every must be >= 1")
    if spec.mode == "theorem7":
        check_pool(spec, eps)
    pool = [np.asarray(m) for m in spec.pool]
    prod = np.eye(spec.pool[0].n)
    trace = []
    defect = rank_one_defect(prod)
    step = 0
    for step, i in enumerate(spec.indices(), start=1):
        prod = pool[i] @ prod
        if renormalize_every and step % renormalize_every == 0:
            drift = float(np.max(np.abs(prod.sum(axis=1) - 1.0)))
            prod /= prod.sum(axis=1, keepdims=True)
            log.info("renormalised rows at step %d (drift %.3g)", step, drift)
        defect = rank_one_defect(prod)
        done = defect <= tolerance
        if step % report_every == 0 or done or step == spec.steps:
            trace.append((step, defect))
        if done:
            break
    converged = defect <= tolerance
    limit = prod.mean(axis=0).tolist() if converged else None
    return ConvergenceReport(trace, converged, defect, limit, step, tolerance)
