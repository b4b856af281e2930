"""Exact sparse linear algebra over the scalar fraction field."""
from __future__ import annotations

from typing import Callable, Hashable, Iterable, Mapping

from .scalars import ScalarFraction

Vector = dict  # key -> ScalarFraction, no zero entries


def _weight(c: ScalarFraction) -> int:
    return len(c.num.terms) + len(c.den.terms)


def axpy(y: Vector, a: ScalarFraction, x: Mapping) -> None:
    """In place ``y += a * x`` dropping zeros."""
    for k, v in x.items():
        val = y.get(k)
        val = a * v if val is None else val + a * v
        if val.is_zero():
            y.pop(k, None)
        else:
            y[k] = val


class EchelonBasis:
    """Incrementally built echelon basis that remembers how each vector was combined.

    ``pick`` chooses the pivot key of a new vector; by default the key whose
    coefficient has the fewest terms (ties broken by key order).
    """

    def __init__(self, pick: Callable[[Vector], Hashable] | None = None):
        self.pivots: list = []
        self.rows: list[Vector] = []
        self.combos: list[dict] = []
        self.pick = pick or (lambda vec: min(vec, key=lambda k: (_weight(vec[k]), k)))

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping, track: bool = False):
        """Return ``(remainder, combo)`` with ``vec = remainder + sum combo[label] * original[label]``."""
        rem = dict(vec)
        combo: dict = {}
        for p, row, rc in zip(self.pivots, self.rows, self.combos):
            c = rem.get(p)
            if c is None:
                continue
            axpy(rem, -c, row)
            if track:
                for lbl, w in rc.items():
                    val = combo.get(lbl)
                    val = c * w if val is None else val + c * w
                    if val.is_zero():
                        combo.pop(lbl, None)
                    else:
                        combo[lbl] = val
        return rem, combo

    def add(self, vec: Mapping, label: Hashable = None) -> bool:
        """Insert ``vec``; returns False if it was already in the span."""
        rem, combo = self.reduce(vec, track=label is not None)
        if not rem:
            return False
        p = self.pick(rem)
        inv = rem[p].inverse()
        row = {k: v * inv for k, v in rem.items()}
        # row = inv * (vec - sum combo * originals)
        rc = {lbl: -w * inv for lbl, w in combo.items()}
        if label is not None:
            one = inv
            rc[label] = rc.get(label, 0 * inv) + one
        self.pivots.append(p)
        self.rows.append(row)
        self.combos.append(rc)
        return True


def solve_combination(columns: Mapping[Hashable, Mapping], target: Mapping):
    """Find ``x`` with ``sum x[name] * columns[name] == target`` or return None."""
    eb = EchelonBasis()
    for name, col in columns.items():
        if col:
            eb.add(col, label=name)
    rem, combo = eb.reduce(target, track=True)
    if rem:
        return None
    return {k: v for k, v in combo.items() if not v.is_zero()}


def rank(vectors: Iterable[Mapping]) -> int:
    eb = EchelonBasis()
    for v in vectors:
        eb.add(v)
    return len(eb)


def inverse_dense(m: list, one: ScalarFraction) -> list:
    """Gauss-Jordan inverse of a square matrix given as a list of rows of scalars."""
    n = len(m)
    zero = one - one
    a = [[x for x in row] + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = None
        best = None
        for r in range(col, n):
            if not a[r][col].is_zero():
                w = _weight(a[r][col])
                if best is None or w < best:
                    piv, best = r, w
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def nullspace(equations: Iterable[Mapping], unknowns: list, one) -> list:
    """Basis of ``{x : Σ_k eq[k] x[k] = 0}`` as dicts, one per free unknown, by Gauss-Jordan."""
    order = {u: i for i, u in enumerate(unknowns)}
    rows: dict = {}
    for eq in equations:
        rem = {k: v for k, v in eq.items() if not v.is_zero()}
        for p, row in rows.items():
            c = rem.get(p)
            if c is not None:
                axpy(rem, -c, row)
        if not rem:
            continue
        p = min(rem, key=order.__getitem__)
        inv = rem[p].inverse()
        new = {k: v * inv for k, v in rem.items()}
        for row in rows.values():
            c = row.get(p)
            if c is not None:
                axpy(row, -c, new)
        rows[p] = new
    basis = []
    for free in unknowns:
        if free in rows:
            continue
        vec = {free: one}
        for p, row in rows.items():
            c = row.get(free)
            if c is not None:
                vec[p] = -c
        basis.append(vec)
    return basis
