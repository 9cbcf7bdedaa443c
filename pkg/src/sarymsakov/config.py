from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .classes import DEFAULT_G_BUDGET, DEFAULT_INDEX_BUDGET
from .consensus import DEFAULT_CLOSURE_BUDGET
from .matrix import DEFAULT_EPS, DEFAULT_ROW_SUM_TOL
from .simulate import DEFAULT_TOLERANCE


@dataclass(frozen=True)
class CliConfig:
    """Numeric knobs shared by every subcommand."""

    eps: float = DEFAULT_EPS
    row_sum_tol: float = DEFAULT_ROW_SUM_TOL
    closure_budget: int = DEFAULT_CLOSURE_BUDGET
    g_budget: int = DEFAULT_G_BUDGET
    index_budget: int = DEFAULT_INDEX_BUDGET
    seed: int = 0
    tolerance: float = DEFAULT_TOLERANCE
    output_format: Literal["json", "text"] = "text"
    threads: int = 1

    def __post_init__(self):
        for name in ("row_sum_tol", "tolerance"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")
        for name in ("closure_budget", "g_budget", "index_budget", "threads"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.output_format not in ("json", "text"):
            raise ValueError(f"unknown output format {self.output_format!r}")
