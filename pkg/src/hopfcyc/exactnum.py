"""Exact rational scalars, finite linear combinations and sparse rational matrices."""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def is_rational_literal(text: str) -> bool:
    return bool(_RATIONAL_RE.match(text.strip()))


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``p/q`` or an integer. Decimal points are refused so nothing is rounded."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not an exact rational literal: {text!r}")
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class LinComb(dict):
    """Finite linear combination: a dict from hashable keys to nonzero Fractions.

    Zero coefficients are never stored, so ``==`` is equality of vectors.
    """

    __slots__ = ()

    def __init__(self, data: Mapping | Iterable | None = None):
        super().__init__()
        if data is None:
            return
        items = data.items() if isinstance(data, Mapping) else data
        for k, c in items:
            self.add_term(k, c)

    @classmethod
    def basis(cls, key: Hashable, coeff=1) -> "LinComb":
        out = cls()
        out.add_term(key, coeff)
        return out

    def add_term(self, key: Hashable, coeff) -> None:
        if not coeff:
            return
        new = self.get(key, 0) + coeff
        if new:
            self[key] = new if type(new) is Fraction else Fraction(new)
        else:
            self.pop(key, None)

    def add_scaled(self, other: Mapping, coeff=1) -> "LinComb":
        """In-place ``self += coeff * other``; returns self."""
        if coeff:
            for k, c in other.items():
                self.add_term(k, c * coeff)
        return self

    def copy(self) -> "LinComb":
        out = LinComb()
        dict.update(out, self)
        return out

    def scale(self, coeff) -> "LinComb":
        out = LinComb()
        if coeff:
            for k, c in self.items():
                dict.__setitem__(out, k, c * coeff)
        return out

    def __add__(self, other: Mapping) -> "LinComb":
        return self.copy().add_scaled(other)

    def __sub__(self, other: Mapping) -> "LinComb":
        return self.copy().add_scaled(other, -1)

    def __neg__(self) -> "LinComb":
        return self.scale(-1)

    def __rmul__(self, coeff) -> "LinComb":
        return self.scale(coeff)

    def map_keys(self, fn) -> "LinComb":
        out = LinComb()
        for k, c in self.items():
            out.add_term(fn(k), c)
        return out

    def sorted_items(self) -> list:
        return sorted(self.items(), key=lambda kc: kc[0])

    def __repr__(self) -> str:
        body = ", ".join(f"{k!r}: {format_rational(c)}" for k, c in self.sorted_items())
        return f"LinComb({{{body}}})"


def tensor(*factors: Mapping) -> LinComb:
    """Tensor product of linear combinations; keys become tuples (flattened one level)."""
    out = LinComb({(): Fraction(1)})
    for f in factors:
        nxt = LinComb()
        for k, c in out.items():
            for k2, c2 in f.items():
                nxt.add_term(k + (k2,), c * c2)
        out = nxt
    return out


# ---------------------------------------------------------------------------
# sparse matrices


class SparseRationalMatrix:
    """Immutable ``rows x cols`` matrix storing only nonzero entries."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = Fraction(v)
            if v:
                clean[(i, j)] = v
        self.rows = rows
        self.cols = cols
        self._entries = clean

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._entries)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], cols: int | None = None) -> "SparseRationalMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        ent = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v}
        return cls(rows, cols, ent)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "SparseRationalMatrix":
        ent = {(i, j): v for j, col in enumerate(columns) for i, v in enumerate(col) if v}
        return cls(rows, len(columns), ent)

    @classmethod
    def identity(cls, n: int) -> "SparseRationalMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self._entries.get(ij, Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._entries) == (other.rows, other.cols, other._entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"SparseRationalMatrix({self.rows}x{self.cols}, nnz={len(self._entries)})"

    def nnz(self) -> int:
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def column(self, j: int) -> list[Fraction]:
        col = [Fraction(0)] * self.rows
        for (i, jj), v in self._entries.items():
            if jj == j:
                col[i] = v
        return col

    def transpose(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    def __add__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        self._same_shape(other)
        ent = dict(self._entries)
        for k, v in other._entries.items():
            ent[k] = ent.get(k, 0) + v
        return SparseRationalMatrix(self.rows, self.cols, ent)

    def __neg__(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(self.rows, self.cols, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        return self + (-other)

    def _same_shape(self, other: "SparseRationalMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __matmul__(self, other):
        if isinstance(other, SparseRationalMatrix):
            if self.cols != other.rows:
                raise ValueError("inner dimensions differ")
            right_rows = other.row_dicts()
            ent: dict[tuple[int, int], Fraction] = {}
            for (i, k), v in self._entries.items():
                for j, w in right_rows[k].items():
                    ent[(i, j)] = ent.get((i, j), 0) + v * w
            return SparseRationalMatrix(self.rows, other.cols, ent)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("vector length differs from column count")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self._entries.items():
            if vec[j]:
                out[i] += v * vec[j]
        return out

    def hstack(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        ent = dict(self._entries)
        ent.update({(i, j + self.cols): v for (i, j), v in other._entries.items()})
        return SparseRationalMatrix(self.rows, self.cols + other.cols, ent)

    def vstack(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        ent = dict(self._entries)
        ent.update({(i + self.rows, j): v for (i, j), v in other._entries.items()})
        return SparseRationalMatrix(self.rows + other.rows, self.cols, ent)


def _integer_rows(m: SparseRationalMatrix) -> list[dict[int, int]]:
    rows = []
    for r in m.row_dicts():
        if not r:
            continue
        scale = lcm(*(v.denominator for v in r.values()))
        rows.append({j: int(v * scale) for j, v in r.items()})
    return rows


def _bareiss_echelon(rows: list[dict[int, int]], ncols: int) -> tuple[list[dict[int, int]], list[int]]:
    """Fraction-free elimination; returns echelon rows and their pivot columns.

    Every division performed is exact (Bareiss' identity), so entries stay integral
    and bounded by minors of the input.
    """
    rows = [dict(r) for r in rows if r]
    pivots: list[int] = []
    done: list[dict[int, int]] = []
    prev = 1
    col = 0
    while rows and col < ncols:
        # deterministic pivot rule: first row (in current order) with a nonzero in col,
        # preferring the entry of smallest absolute value to limit growth
        cands = [i for i, r in enumerate(rows) if r.get(col)]
        if not cands:
            col += 1
            continue
        pi = min(cands, key=lambda i: (abs(rows[i][col]), i))
        prow = rows.pop(pi)
        p = prow[col]
        nxt = []
        for r in rows:
            a = r.get(col, 0)
            new: dict[int, int] = {}
            keys = set(r) | set(prow)
            for j in keys:
                if j <= col:
                    continue
                v = p * r.get(j, 0) - a * prow.get(j, 0)
                if v:
                    q, rem = divmod(v, prev)
                    assert rem == 0, "Bareiss division must be exact"
                    new[j] = q
            if new:
                nxt.append(new)
        done.append(prow)
        pivots.append(col)
        rows = nxt
        prev = p
        col += 1
    return done, pivots


def rank(m: SparseRationalMatrix) -> int:
    """Exact rank over the rationals."""
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _bareiss_echelon(_integer_rows(m), m.cols)
    return len(pivots)


def rref(m: SparseRationalMatrix) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form: (nonzero rows as dicts, pivot columns)."""
    echelon, pivots = _bareiss_echelon(_integer_rows(m), m.cols)
    rows: list[dict[int, Fraction]] = []
    for r, p in zip(echelon, pivots):
        lead = Fraction(r[p])
        rows.append({j: Fraction(v) / lead for j, v in r.items()})
    # back substitution, bottom-up
    for k in range(len(rows) - 1, -1, -1):
        p = pivots[k]
        for i in range(k):
            a = rows[i].get(p)
            if a:
                for j, v in rows[k].items():
                    nv = rows[i].get(j, 0) - a * v
                    if nv:
                        rows[i][j] = nv
                    else:
                        rows[i].pop(j, None)
    return rows, pivots


def kernel_basis(m: SparseRationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space ``{v : m v = 0}``, one vector per free column."""
    rows, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for r, p in zip(rows, pivots):
            a = r.get(free)
            if a:
                v[p] = -a
        basis.append(tuple(v))
    return basis


def column_space_basis(m: SparseRationalMatrix) -> list[tuple[Fraction, ...]]:
    """The pivot columns of ``m``: a basis of its image drawn from its own columns."""
    _, pivots = rref(m)
    return [tuple(m.column(j)) for j in pivots]


def solve(m: SparseRationalMatrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of ``m x = b`` or ``None`` if inconsistent."""
    if len(b) != m.rows:
        raise ValueError("right-hand side length differs from row count")
    aug = m.hstack(SparseRationalMatrix.from_columns([list(b)], m.rows))
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for r, p in zip(rows, pivots):
        x[p] = r.get(m.cols, Fraction(0))
    return tuple(x)


def in_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    if not vectors:
        return not any(v)
    mat = SparseRationalMatrix.from_columns(list(vectors), len(v))
    return solve(mat, v) is not None


def inverse(m: SparseRationalMatrix) -> SparseRationalMatrix:
    if m.rows != m.cols:
        raise ValueError("square matrix required")
    n = m.rows
    rows, pivots = rref(m.hstack(SparseRationalMatrix.identity(n)))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    ent = {(i, j - n): v for i, r in enumerate(rows[:n]) for j, v in r.items() if j >= n}
    return SparseRationalMatrix(n, n, ent)


def iter_nonzero(vec: Sequence) -> Iterator[tuple[int, Fraction]]:
    for i, v in enumerate(vec):
        if v:
            yield i, v
