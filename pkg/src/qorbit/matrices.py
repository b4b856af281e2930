"""Sparse matrices with entries in any (possibly noncommutative) ring.

Entries must support ``+``, ``*`` and ``is_zero()``.  Products keep the
left-to-right order of entries, so matrices over the free algebra or the
cell algebra multiply correctly.  Multi-index conventions: a pair
``(j, k)`` of 0-based indices in an ``N``-dimensional leg maps to the flat
index ``N*j + k`` (lexicographic order).
"""
from __future__ import annotations

import itertools
from typing import Callable, Iterable, Sequence


class Matrix:
    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int | None = None, rows: dict | None = None):
        self.nrows = nrows
        self.ncols = nrows if ncols is None else ncols
        self.rows = {}
        for i, row in (rows or {}).items():
            r = {j: v for j, v in row.items() if not v.is_zero()}
            if r:
                self.rows[i] = r

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence]) -> Matrix:
        rows = {i: {j: v for j, v in enumerate(row) if v is not None} for i, row in enumerate(dense)}
        return cls(len(dense), len(dense[0]) if dense else 0, rows)

    @classmethod
    def diagonal(cls, entries: Sequence) -> Matrix:
        return cls(len(entries), len(entries), {i: {i: v} for i, v in enumerate(entries)})

    def get(self, i: int, j: int, default=None):
        return self.rows.get(i, {}).get(j, default)

    def to_dense(self, zero) -> list:
        return [[self.get(i, j, zero) for j in range(self.ncols)] for i in range(self.nrows)]

    def items(self):
        for i in sorted(self.rows):
            for j in sorted(self.rows[i]):
                yield (i, j), self.rows[i][j]

    def map(self, fn: Callable) -> Matrix:
        return Matrix(self.nrows, self.ncols, {i: {j: fn(v) for j, v in r.items()} for i, r in self.rows.items()})

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out: dict = {}
        for i, row in self.rows.items():
            acc: dict = {}
            for k, a in row.items():
                brow = other.rows.get(k)
                if not brow:
                    continue
                for j, b in brow.items():
                    p = a * b
                    if j in acc:
                        acc[j] = acc[j] + p
                    else:
                        acc[j] = p
            if acc:
                out[i] = acc
        return Matrix(self.nrows, other.ncols, out)

    def __add__(self, other: Matrix) -> Matrix:
        out = {i: dict(r) for i, r in self.rows.items()}
        for i, row in other.rows.items():
            tgt = out.setdefault(i, {})
            for j, v in row.items():
                tgt[j] = tgt[j] + v if j in tgt else v
        return Matrix(self.nrows, self.ncols, out)

    def __neg__(self) -> Matrix:
        return self.map(lambda v: -v)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def scale(self, c) -> Matrix:
        return self.map(lambda v: c * v)

    def transpose(self) -> Matrix:
        out: dict = {}
        for i, row in self.rows.items():
            for j, v in row.items():
                out.setdefault(j, {})[i] = v
        return Matrix(self.ncols, self.nrows, out)

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.nrows == other.nrows and self.ncols == other.ncols and (self - other).is_zero()

    __hash__ = None

    def diag(self) -> Matrix:
        return Matrix(self.nrows, self.ncols, {i: {i: r[i]} for i, r in self.rows.items() if i in r})

    def is_diagonal(self) -> bool:
        return all(set(r) <= {i} for i, r in self.rows.items())

    def is_lower_triangular(self) -> bool:
        return all(j <= i for i, r in self.rows.items() for j in r)

    def is_upper_triangular(self) -> bool:
        return all(j >= i for i, r in self.rows.items() for j in r)

    def first_difference(self, other: Matrix):
        d = self - other
        for key, v in d.items():
            return key, v
        return None

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, nnz={sum(len(r) for r in self.rows.values())})"


def identity(n: int, one) -> Matrix:
    return Matrix(n, n, {i: {i: one} for i in range(n)})


def flat(idx: Sequence[int], n: int) -> int:
    out = 0
    for k in idx:
        out = out * n + k
    return out


def unflat(i: int, n: int, legs: int) -> tuple:
    out = []
    for _ in range(legs):
        out.append(i % n)
        i //= n
    return tuple(reversed(out))


def embed(m: Matrix, n: int, legs: Sequence[int], total: int) -> Matrix:
    """Place an operator acting on ``len(legs)`` legs of dimension ``n`` into ``total`` legs.

    ``legs`` lists the target leg (0-based) of each source leg, so
    ``embed(R, n, (1, 0), 2)`` is the flipped ``R21``.
    """
    k = len(legs)
    others = [x for x in range(total) if x not in legs]
    out: dict = {}
    for (i, j), v in m.items():
        src_r = unflat(i, n, k)
        src_c = unflat(j, n, k)
        for rest in itertools.product(range(n), repeat=len(others)):
            r = [0] * total
            c = [0] * total
            for leg, a, b in zip(legs, src_r, src_c):
                r[leg], c[leg] = a, b
            for leg, a in zip(others, rest):
                r[leg] = c[leg] = a
            out.setdefault(flat(r, n), {})[flat(c, n)] = v
    return Matrix(n ** total, n ** total, out)


def flip(n: int, one) -> Matrix:
    """The flip operator ``P`` with ``P[(j,k),(s,t)] = δ_jt δ_ks``."""
    return Matrix(n * n, n * n, {flat((j, k), n): {flat((k, j), n): one} for j in range(n) for k in range(n)})
