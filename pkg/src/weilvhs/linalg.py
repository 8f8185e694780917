"""Sparse exact matrices over any exact field.

Entries may be ``Fraction`` or any element type from :mod:`weilvhs.qfield`
(they only need ``+ - * /``, equality and truthiness meaning "nonzero").
Rows are stored as ``{column: value}`` dicts holding nonzero entries only.

Elimination is Gauss-Jordan with the pivot taken from the first remaining row
that is nonzero in the current column, so echelon forms and kernel bases are
reproducible run to run.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Row = dict


def _axpy(target: Row, factor, source: Row) -> None:
    """target -= factor * source, dropping cancelled entries."""
    for k, v in source.items():
        t = target.get(k)
        if t is None:
            target[k] = -(factor * v)
        else:
            nv = t - factor * v
            if nv:
                target[k] = nv
            else:
                del target[k]


def _sparse_product(left: Sequence[Row], right: Sequence[Row]) -> list[Row]:
    out = []
    for r in left:
        acc: Row = {}
        for k, a in r.items():
            for j, b in right[k].items():
                t = acc.get(j)
                acc[j] = a * b if t is None else t + a * b
        out.append({j: v for j, v in acc.items() if v})
    return out


def _quadratic_parts(rows: Sequence[Row]):
    """Split rows of a + b*sqrt(m) elements into rational rows; None if not possible."""
    ra, rb = [], []
    m = None
    for r in rows:
        a, b = {}, {}
        for k, v in r.items():
            va = getattr(v, "a", None)
            if va is None:
                if not isinstance(v, (int, Fraction)):
                    return None
                a[k] = v
                continue
            vb = v.b
            if vb:
                if m is None:
                    m = v.m
                elif m != v.m:
                    return None
                b[k] = vb.numerator if vb.denominator == 1 else vb
            if va:
                a[k] = va.numerator if va.denominator == 1 else va
        ra.append(a)
        rb.append(b)
    return ra, rb, m


def _split_quadratic(left: "ExactMatrix", right: "ExactMatrix"):
    """(A + rB)(C + rD) = AC + m BD + r(AD + BC) with r = sqrt(m), on rational parts."""
    one = left.one
    if not hasattr(one, "m"):
        return None
    pl = _quadratic_parts(left.rows)
    pr = _quadratic_parts(right.rows) if pl is not None else None
    if pr is None:
        return None
    A, B, m1 = pl
    C, D, m2 = pr
    if m1 is not None and m2 is not None and m1 != m2:
        return None
    m = m1 or m2 or one.m
    rat = _sparse_product(A, C)
    irr = _sparse_product(A, D) if m2 is not None else [{} for _ in A]
    if m1 is not None:
        _accumulate(rat, _sparse_product(B, D), m)
        _accumulate(irr, _sparse_product(B, C), 1)
    cls = type(one)
    out = []
    for ra, ri in zip(rat, irr):
        row = {}
        for k in set(ra) | set(ri):
            row[k] = cls(ra.get(k, 0), ri.get(k, 0), m if ri.get(k) else one.m)
        out.append(row)
    return ExactMatrix(left.nrows, right.ncols, out, one)


def _accumulate(target: list[Row], extra: list[Row], factor) -> None:
    for t, e in zip(target, extra):
        for k, v in e.items():
            nv = t.get(k, 0) + factor * v
            if nv:
                t[k] = nv
            else:
                t.pop(k, None)


class ExactMatrix:
    __slots__ = ("nrows", "ncols", "rows", "one")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[Row] | None = None, one=Fraction(1)):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [{} for _ in range(nrows)]
        else:
            rows = [{k: v for k, v in r.items() if v} for r in rows]
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        self.rows = rows
        self.one = one

    # -- construction ---------------------------------------------------
    @classmethod
    def from_dense(cls, data: Sequence[Sequence], one=None) -> "ExactMatrix":
        data = [list(r) for r in data]
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        if one is None:
            one = Fraction(1)
            for r in data:
                for v in r:
                    if not isinstance(v, (int, Fraction)):
                        one = v * 0 + 1
                        break
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            rows.append({j: (Fraction(v) if isinstance(v, int) else v) for j, v in enumerate(r) if v})
        return cls(nrows, ncols, rows, one)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Row], one=Fraction(1)) -> "ExactMatrix":
        rows = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows[i][j] = v
        return cls(nrows, len(columns), rows, one)

    @classmethod
    def identity(cls, n: int, one=Fraction(1)) -> "ExactMatrix":
        return cls(n, n, [{i: one} for i in range(n)], one)

    @classmethod
    def scalar(cls, n: int, value, one=Fraction(1)) -> "ExactMatrix":
        return cls(n, n, [{i: value} for i in range(n)] if value else None, one)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, one=Fraction(1)) -> "ExactMatrix":
        return cls(nrows, ncols, None, one)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["ExactMatrix"]]) -> "ExactMatrix":
        """Assemble a block matrix; every block row must share a height."""
        rows: list[Row] = []
        ncols = sum(b.ncols for b in blocks[0])
        one = blocks[0][0].one
        for brow in blocks:
            height = brow[0].nrows
            chunk = [{} for _ in range(height)]
            offset = 0
            for b in brow:
                if b.nrows != height:
                    raise ValueError("block heights differ")
                for i, r in enumerate(b.rows):
                    for j, v in r.items():
                        chunk[i][offset + j] = v
                offset += b.ncols
            if offset != ncols:
                raise ValueError("block widths differ")
            rows.extend(chunk)
        return cls(len(rows), ncols, rows, one)

    # -- access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, self.one * 0)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_dense(self) -> list[list]:
        zero = self.one * 0
        return [[r.get(j, zero) for j in range(self.ncols)] for r in self.rows]

    def columns(self) -> list[Row]:
        cols: list[Row] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def column(self, j: int) -> Row:
        return {i: r[j] for i, r in enumerate(self.rows) if j in r}

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ncols, self.nrows, self.columns(), self.one)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def map(self, fn) -> "ExactMatrix":
        return ExactMatrix(self.nrows, self.ncols,
                           [{j: fn(v) for j, v in r.items()} for r in self.rows], self.one)

    # -- arithmetic ---------------------------------------------------------
    def _check_same_shape(self, other: "ExactMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        out = []
        for a, b in zip(self.rows, other.rows):
            r = dict(a)
            for k, v in b.items():
                t = r.get(k)
                if t is None:
                    r[k] = v
                else:
                    s = t + v
                    if s:
                        r[k] = s
                    else:
                        del r[k]
            out.append(r)
        return ExactMatrix(self.nrows, self.ncols, out, self.one)

    def __neg__(self) -> "ExactMatrix":
        return self.map(lambda v: -v)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        if not c:
            return ExactMatrix.zeros(self.nrows, self.ncols, self.one)
        return self.map(lambda v: c * v)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        split = _split_quadratic(self, other)
        if split is not None:
            return split
        return ExactMatrix(self.nrows, other.ncols, _sparse_product(self.rows, other.rows), self.one)

    def apply(self, vec: Row) -> Row:
        """Matrix times sparse column vector."""
        out: Row = {}
        for i, r in enumerate(self.rows):
            acc = None
            for k, a in r.items():
                b = vec.get(k)
                if b is not None:
                    acc = a * b if acc is None else acc + a * b
            if acc:
                out[i] = acc
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.rows, other.rows))

    __hash__ = None  # mutable rows

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # -- elimination --------------------------------------------------------
    def rref(self) -> tuple[list[Row], list[int]]:
        """Reduced row echelon form: (nonzero rows, pivot columns)."""
        pending = [dict(r) for r in self.rows if r]
        done: list[Row] = []
        pivots: list[int] = []
        for c in range(self.ncols):
            if not pending:
                break
            idx = next((i for i, r in enumerate(pending) if c in r), None)
            if idx is None:
                continue
            prow = pending.pop(idx)
            inv = self.one / prow[c]
            prow = {k: v * inv for k, v in prow.items()}
            for r in pending:
                f = r.get(c)
                if f is not None:
                    _axpy(r, f, prow)
            for r in done:
                f = r.get(c)
                if f is not None:
                    _axpy(r, f, prow)
            pending = [r for r in pending if r]
            done.append(prow)
            pivots.append(c)
        return done, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[Row]:
        """Basis of {v : M v = 0}, one vector per free column, in column order."""
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for f in range(self.ncols):
            if f in pivot_set:
                continue
            v: Row = {f: self.one}
            for prow, p in zip(reduced, pivots):
                x = prow.get(f)
                if x:
                    v[p] = -x
            basis.append(v)
        return basis

    def inverse(self) -> "ExactMatrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = ExactMatrix.block([[self, ExactMatrix.identity(n, self.one)]])
        reduced, pivots = aug.rref()
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise ZeroDivisionError("matrix is singular")
        return ExactMatrix(n, n, [{k - n: v for k, v in r.items() if k >= n} for r in reduced[:n]], self.one)


def hstack(mats: Iterable[ExactMatrix]) -> ExactMatrix:
    return ExactMatrix.block([list(mats)])


def vstack(mats: Iterable[ExactMatrix]) -> ExactMatrix:
    return ExactMatrix.block([[m] for m in mats])


def same_column_space(a: ExactMatrix, b: ExactMatrix) -> bool:
    """True iff the column spans of a and b coincide."""
    if a.nrows != b.nrows:
        return False
    ra, rb = a.rank(), b.rank()
    return ra == rb == hstack([a, b]).rank()
