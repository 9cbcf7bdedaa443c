"""Stochastic matrices, zero patterns, bit-set index sets and consequent maps.

Everything here is 0-based. Row/column indices only become 1-based when they
are rendered for humans (``IndexSet.one_based``, parse error messages).

Bit sets are plain Python ints: bit ``j`` set means column/index ``j`` is in the
set.  The public wrappers (:class:`IndexSet`, :class:`BooleanPattern`) carry the
dimension along so that mixing sizes is caught early; the hot loops in the
classifiers work on the raw ints.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_EPS = 1e-12
DEFAULT_ROW_SUM_TOL = 1e-9
MAX_N = 64


class MatrixError(ValueError):
    """Base class for invalid matrix input."""


class NotStochastic(MatrixError):
    pass


class EmptyRow(MatrixError):
    pass


class DimensionMismatch(MatrixError):
    pass


class DimensionTooSmall(MatrixError):
    pass


class MatrixParseError(MatrixError):
    pass


# ---------------------------------------------------------------------------
# bit helpers

def popcount(bits: int) -> int:
    return bits.bit_count()


def iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def mask_of(indices: Iterable[int]) -> int:
    bits = 0
    for i in indices:
        bits |= 1 << i
    return bits


def image(rows: Sequence[int], bits: int) -> int:
    """Union of ``rows[i]`` over ``i`` in ``bits``."""
    out = 0
    while bits:
        low = bits & -bits
        out |= rows[low.bit_length() - 1]
        bits ^= low
    return out


# ---------------------------------------------------------------------------
# types

class StochasticMatrix:
    """Dense row-stochastic matrix; immutable after construction.

    Entries must be nonnegative and every row must sum to one within
    ``row_sum_tol``.  The backing array is a read-only float64 copy.
    """

    __slots__ = ("_a",)

    def __init__(self, entries, row_sum_tol: float = DEFAULT_ROW_SUM_TOL):
        a = np.array(entries, dtype=np.float64, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        n = a.shape[0]
        if n < 1:
            raise DimensionTooSmall("matrix must have n >= 1")
        if n > MAX_N:
            raise MatrixError(f"n={n} exceeds the supported maximum {MAX_N}")
        if not np.all(np.isfinite(a)):
            i, j = np.argwhere(~np.isfinite(a))[0]
            raise NotStochastic(f"row {i + 1}, entry {j + 1}: non-finite value {float(a[i, j])!r}")
        if np.any(a < 0):
            i, j = np.argwhere(a < 0)[0]
            raise NotStochastic(f"row {i + 1}, entry {j + 1}: negative value {float(a[i, j])!r}")
        sums = a.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > row_sum_tol)
        if bad.size:
            i = bad[0]
            raise NotStochastic(f"row {i + 1} sums to {float(sums[i])!r}, not 1 (tol {row_sum_tol:g})")
        a.flags.writeable = False
        self._a = a

    @classmethod
    def _trusted(cls, a: np.ndarray) -> "StochasticMatrix":
        # products of validated matrices; skip the row-sum check (drift is the caller's business)
        obj = cls.__new__(cls)
        a = np.array(a, dtype=np.float64, copy=True)
        a.flags.writeable = False
        obj._a = a
        return obj

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._a

    def __array__(self, dtype=None, copy=None):
        return self._a if dtype is None else self._a.astype(dtype)

    def __matmul__(self, other: "StochasticMatrix") -> "StochasticMatrix":
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")
        return StochasticMatrix._trusted(self._a @ other._a)

    def __eq__(self, other) -> bool:
        return isinstance(other, StochasticMatrix) and np.array_equal(self._a, other._a)

    def __hash__(self) -> int:
        return hash(self._a.tobytes())

    def __repr__(self) -> str:
        return f"StochasticMatrix({self._a.tolist()!r})"

    def tolist(self) -> list[list[float]]:
        return self._a.tolist()


@dataclass(frozen=True)
class IndexSet:
    """Subset of ``{0, ..., n-1}`` stored as a bit set."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise MatrixError(f"universe size {self.n} out of range")
        if self.bits < 0 or self.bits >> self.n:
            raise MatrixError(f"bits {self.bits:#x} outside universe of size {self.n}")

    @classmethod
    def of(cls, n: int, indices: Iterable[int]) -> "IndexSet":
        return cls(n, mask_of(indices))

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(n, (1 << n) - 1)

    def __len__(self) -> int:
        return popcount(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def _check(self, other: "IndexSet") -> None:
        if other.n != self.n:
            raise DimensionMismatch(f"index sets over {self.n} and {other.n}")

    def __or__(self, other: "IndexSet") -> "IndexSet":
        self._check(other)
        return IndexSet(self.n, self.bits | other.bits)

    def __and__(self, other: "IndexSet") -> "IndexSet":
        self._check(other)
        return IndexSet(self.n, self.bits & other.bits)

    def complement(self) -> "IndexSet":
        return IndexSet(self.n, ((1 << self.n) - 1) & ~self.bits)

    def one_based(self) -> list[int]:
        return [i + 1 for i in self]

    def __repr__(self) -> str:
        return f"IndexSet({{{', '.join(map(str, self.one_based()))}}})"


@dataclass(frozen=True)
class DisjointPair:
    """Unordered pair of disjoint nonempty index sets, smaller bit set first."""

    a: IndexSet
    b: IndexSet

    def __post_init__(self):
        self.a._check(self.b)
        if not self.a or not self.b:
            raise MatrixError("both sets of a disjoint pair must be nonempty")
        if self.a.bits & self.b.bits:
            raise MatrixError("sets of a disjoint pair must not intersect")
        if self.a.bits > self.b.bits:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def union(self) -> IndexSet:
        return self.a | self.b


@dataclass(frozen=True)
class BooleanPattern:
    """Zero/nonzero pattern of an n x n stochastic matrix.

    ``rows[i]`` is the bit set of columns ``j`` with ``p_ij > 0``.  Every row
    must be nonempty.  Patterns are hashable, so they can live in sets.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not 1 <= self.n <= MAX_N:
            raise MatrixError(f"dimension {self.n} out of range")
        if len(rows) != self.n:
            raise DimensionMismatch(f"pattern of dimension {self.n} has {len(rows)} rows")
        for i, r in enumerate(rows):
            if r == 0:
                raise EmptyRow(f"row {i + 1} of the pattern is empty")
            if r < 0 or r >> self.n:
                raise MatrixError(f"row {i + 1} has bits outside 0..{self.n - 1}")

    @classmethod
    def from_sets(cls, sets: Sequence[Iterable[int]]) -> "BooleanPattern":
        """Build from 0-based column lists, one per row."""
        return cls(len(sets), tuple(mask_of(s) for s in sets))

    @classmethod
    def from_bool(cls, array) -> "BooleanPattern":
        a = np.asarray(array, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square array, got shape {a.shape}")
        return cls(a.shape[0], tuple(mask_of(np.flatnonzero(row)) for row in a))

    @classmethod
    def identity(cls, n: int) -> "BooleanPattern":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def full(cls, n: int) -> "BooleanPattern":
        return cls(n, ((1 << n) - 1,) * n)

    def __matmul__(self, other: "BooleanPattern") -> "BooleanPattern":
        return bool_product(self, other)

    def row(self, i: int) -> IndexSet:
        return IndexSet(self.n, self.rows[i])

    def to_array(self) -> np.ndarray:
        return np.array([[bool(r >> j & 1) for j in range(self.n)] for r in self.rows])

    def to_matrix(self) -> StochasticMatrix:
        """Row-normalised 0/1 representative of this pattern."""
        a = self.to_array().astype(np.float64)
        return StochasticMatrix(a / a.sum(axis=1, keepdims=True))

    def __str__(self) -> str:
        return "\n".join("".join("+" if r >> j & 1 else "0" for j in range(self.n)) for r in self.rows)


# ---------------------------------------------------------------------------
# operations

def pattern_of(m: StochasticMatrix, eps: float = DEFAULT_EPS) -> BooleanPattern:
    """Threshold ``m`` at ``eps``: bit (i, j) is set iff ``m[i, j] > eps``."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    a = np.asarray(m) > eps
    for i, row in enumerate(a):
        if not row.any():
            raise EmptyRow(f"row {i + 1} has no entry above eps={eps:g}")
    return BooleanPattern.from_bool(a)


def consequent_set(p: BooleanPattern, a: IndexSet) -> IndexSet:
    """Columns reachable in one step from the rows in ``a``."""
    if a.n != p.n:
        raise DimensionMismatch(f"pattern over {p.n}, set over {a.n}")
    return IndexSet(p.n, image(p.rows, a.bits))


def k_consequent_set(p: BooleanPattern, a: IndexSet, k: int) -> IndexSet:
    if k < 1:
        raise ValueError("k must be >= 1")
    if a.n != p.n:
        raise DimensionMismatch(f"pattern over {p.n}, set over {a.n}")
    bits = a.bits
    for _ in range(k):
        bits = image(p.rows, bits)
    return IndexSet(p.n, bits)


def bool_product(p: BooleanPattern, q: BooleanPattern) -> BooleanPattern:
    """Pattern of the numeric product ``PQ``.

    Row i of PQ is positive exactly on the union of q's rows indexed by row i
    of p; nonnegativity rules out cancellation.
    """
    if p.n != q.n:
        raise DimensionMismatch(f"{p.n} vs {q.n}")
    return BooleanPattern(p.n, tuple(image(q.rows, r) for r in p.rows))


def bool_power(p: BooleanPattern, k: int) -> BooleanPattern:
    if k < 1:
        raise ValueError("k must be >= 1")
    out = p
    for _ in range(k - 1):
        out = bool_product(out, p)
    return out


def pair_count(n: int) -> int:
    return (3 ** n - 2 ** (n + 1) + 1) // 2


@lru_cache(maxsize=32)
def _raw_pairs(n: int) -> tuple[tuple[int, int], ...]:
    # ternary labelling of indices (in a / in b / neither), canonical a < b
    full = (1 << n) - 1
    out = []
    for a in range(1, full + 1):
        rest = full & ~a
        b = rest
        found = []
        while b:
            if b > a:
                found.append(b)
            b = (b - 1) & rest
        found.sort()
        out.extend((a, b) for b in found)
    return tuple(out)


def raw_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Disjoint pairs as ``(a_bits, b_bits)`` ints; the form the classifiers use."""
    if n < 2:
        return ()
    return _raw_pairs(n)


def disjoint_pairs(n: int) -> list[DisjointPair]:
    """Every unordered pair of disjoint nonempty subsets of ``{0..n-1}``, once."""
    if n < 2:
        raise DimensionTooSmall(f"disjoint pairs need n >= 2, got {n}")
    return [DisjointPair(IndexSet(n, a), IndexSet(n, b)) for a, b in raw_pairs(n)]


# ---------------------------------------------------------------------------
# I/O

def _check_rows(rows, source: str) -> list[list[float]]:
    if not isinstance(rows, list) or not rows:
        raise MatrixParseError(f"{source}: 'rows' must be a nonempty list")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise MatrixParseError(f"{source}: row {i + 1} is not a list")
        if len(row) != len(rows):
            raise MatrixParseError(f"{source}: row {i + 1} has {len(row)} entries, expected {len(rows)}")
        vals = []
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise MatrixParseError(f"{source}: row {i + 1}, entry {j + 1} is not a number: {x!r}")
            vals.append(float(x))
        out.append(vals)
    return out


def matrix_from_json(data, row_sum_tol: float = DEFAULT_ROW_SUM_TOL, source: str = "<json>") -> StochasticMatrix:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise MatrixParseError(f"{source}: invalid JSON ({exc})") from None
    if not isinstance(data, dict) or "rows" not in data:
        raise MatrixParseError(f"{source}: expected an object with 'n' and 'rows'")
    rows = _check_rows(data["rows"], source)
    n = data.get("n", len(rows))
    if n != len(rows):
        raise MatrixParseError(f"{source}: n={n} but {len(rows)} rows given")
    return StochasticMatrix(rows, row_sum_tol=row_sum_tol)


def matrix_to_json(m: StochasticMatrix) -> dict:
    return {"n": m.n, "rows": m.tolist()}


def matrix_from_csv(text: str, row_sum_tol: float = DEFAULT_ROW_SUM_TOL, source: str = "<csv>") -> StochasticMatrix:
    rows = []
    for i, rec in enumerate(csv.reader(io.StringIO(text))):
        if not rec or all(not c.strip() for c in rec):
            continue
        vals = []
        for j, cell in enumerate(rec):
            try:
                vals.append(float(cell))
            except ValueError:
                raise MatrixParseError(f"{source}: row {i + 1}, entry {j + 1} is not a number: {cell!r}") from None
        rows.append(vals)
    return StochasticMatrix(_check_rows(rows, source), row_sum_tol=row_sum_tol)


def matrix_to_csv(m: StochasticMatrix) -> str:
    # repr round-trips doubles exactly
    return "".join(",".join(repr(x) for x in row) + "\n" for row in m.tolist())


def load_matrix(path, row_sum_tol: float = DEFAULT_ROW_SUM_TOL) -> StochasticMatrix:
    """Read a matrix from a ``.json`` or ``.csv`` file."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return matrix_from_csv(text, row_sum_tol, source=str(path))
    return matrix_from_json(text, row_sum_tol, source=str(path))


def save_matrix(m: StochasticMatrix, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        path.write_text(matrix_to_csv(m))
    else:
        path.write_text(json.dumps(matrix_to_json(m)) + "\n")


def meeting_bound(n: int) -> int:
    """Upper bound n(n-1)/2 on the first meeting stage of an SIA pattern."""
    return math.comb(n, 2)
