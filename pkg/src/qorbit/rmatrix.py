"""R-matrices on ``C^N ⊗ C^N`` and the identities relating R, P, K and Q.

Pair indices ``(j, k)`` (0-based) map to row ``N*j + k``.  Leg embeddings
into ``(C^N)^{⊗3}`` use :func:`qorbit.matrices.embed`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping

import sympy

from .free import CheckRecord
from .linalg import inverse_dense
from .matrices import Matrix, embed, flat, flip, identity, unflat
from .scalars import ParameterContext, ScalarFraction, parse_scalar, q_minus_qinv


@dataclass
class StructureSet:
    n: int
    ctx: ParameterContext
    R: Matrix
    P: Matrix
    K: Matrix
    Q: Matrix
    series: str = "A"

    def one(self) -> ScalarFraction:
        return ScalarFraction(self.ctx.one())

    def leg(self, m: Matrix, legs, total: int = 3) -> Matrix:
        return embed(m, self.n, legs, total)


def matrix_inverse(m: Matrix, one: ScalarFraction) -> Matrix:
    zero = one - one
    return Matrix.from_dense(inverse_dense(m.to_dense(zero), one))


def a_series_r(n: int, ctx: ParameterContext) -> Matrix:
    """The standard lower-triangular A-series solution of the Yang-Baxter equation."""
    q = ScalarFraction(ctx.q(1))
    one = ScalarFraction(ctx.one())
    h = ScalarFraction(q_minus_qinv(ctx))
    rows: dict = {}
    for i in range(n):
        for j in range(n):
            r = flat((i, j), n)
            rows.setdefault(r, {})[r] = q if i == j else one
            if i > j:
                rows[r][flat((j, i), n)] = h
    return Matrix(n * n, n * n, rows)


def _r21_inverse(R: Matrix, n: int, one: ScalarFraction) -> Matrix:
    return matrix_inverse(embed(R, n, (1, 0), 2), one)


def k_from_r(R: Matrix, n: int, ctx: ParameterContext) -> Matrix:
    """``K = P - (R12 - R21^{-1}) / (q - q^{-1})``."""
    one = ScalarFraction(ctx.one())
    h = ScalarFraction(q_minus_qinv(ctx))
    diff = R - _r21_inverse(R, n, one)
    return flip(n, one) - diff.scale(h.inverse())


def k_from_c(C: Matrix, n: int, one: ScalarFraction) -> Matrix:
    """``K_{jk,st} = C^t_{jk} (C^{-1})_{st}``."""
    Ci = matrix_inverse(C, one)
    rows: dict = {}
    for (j, k), c in C.transpose().items():
        for (s, t), d in Ci.items():
            rows.setdefault(flat((j, k), n), {})[flat((s, t), n)] = c * d
    return Matrix(n * n, n * n, rows)


def build_structure(R: Matrix, n: int, ctx: ParameterContext, K: Matrix | None = None,
                    series: str = "A") -> StructureSet:
    one = ScalarFraction(ctx.one())
    if K is None:
        K = k_from_r(R, n, ctx)
    return StructureSet(n, ctx, R, flip(n, one), K, R.diag(), series)


def build_a_series(n: int, ctx: ParameterContext | None = None) -> StructureSet:
    if n < 2:
        raise ValueError("N must be at least 2")
    ctx = ctx or ParameterContext(("v",), 2)
    R = a_series_r(n, ctx)
    return build_structure(R, n, ctx, K=Matrix(n * n), series="A")


# ---------------------------------------------------------------------------
# checks


def _entry_witness(a: Matrix, b: Matrix, n: int, legs: int) -> str:
    diff = a.first_difference(b)
    if diff is None:
        return ""
    (i, j), v = diff
    return f"entry {unflat(i, n, legs)},{unflat(j, n, legs)}: difference {v.render()}"


def _compare(cid: str, ref: str, a: Matrix, b: Matrix, n: int, legs: int) -> CheckRecord:
    ok = a == b
    return CheckRecord(cid, ref, ok, "" if ok else _entry_witness(a, b, n, legs))


def matrix_size_to_n(size: int) -> int:
    n = math.isqrt(size)
    if n * n != size:
        raise ValueError(f"matrix size {size} is not a perfect square")
    return n


def ybe_check(R: Matrix) -> list:
    n = matrix_size_to_n(R.nrows)
    r12 = embed(R, n, (0, 1), 3)
    r13 = embed(R, n, (0, 2), 3)
    r23 = embed(R, n, (1, 2), 3)
    return [_compare(f"ybe[N={n}]", "R12 R13 R23 = R23 R13 R12", r12 @ r13 @ r23, r23 @ r13 @ r12, n, 3)]


def structure_checks(S: StructureSet) -> list:
    n, R, P, Q = S.n, S.R, S.P, S.Q
    one = S.one()
    ident = identity(n * n, one)
    recs = [
        _compare(f"flip-square[N={n}]", "P^2 = 1", P @ P, ident, n, 2),
        CheckRecord(f"q-diagonal[N={n}]", "Q = diag(R) is diagonal", Q.is_diagonal()),
        _compare(f"q-symmetric[N={n}]", "Q12 = Q21", Q, embed(Q, n, (1, 0), 2), n, 2),
        _compare(f"r-transpose[N={n}]", "R12^t = R21", R.transpose(), embed(R, n, (1, 0), 2), n, 2),
    ]
    bad = [((j, k), (j2, t)) for (a, b), _ in R.items()
           for (j, k), (j2, t) in [(unflat(a, n, 2), unflat(b, n, 2))] if j == j2 and k != t]
    recs.append(CheckRecord(f"r-block-zero[N={n}]", "R_{jk,jt} = 0 for k != t", not bad,
                            "" if not bad else f"nonzero entry {bad[0]}"))
    if S.series == "A":
        recs.append(CheckRecord(f"r-lower-triangular[N={n}]", "R lower triangular in pair order",
                                R.is_lower_triangular()))
    recs.append(eq39_check(S))
    # recomputing the difference from K and P returns R12 - R21^{-1}
    h = ScalarFraction(q_minus_qinv(S.ctx))
    diff = R - _r21_inverse(R, n, one)
    recs.append(_compare(f"k-reconstruction[N={n}]", "(q - q^-1)(P - K) reproduces R12 - R21^-1",
                         (P - k_from_r(R, n, S.ctx)).scale(h), diff, n, 2))
    return recs


def eq39_check(S: StructureSet) -> CheckRecord:
    one = S.one()
    h = ScalarFraction(q_minus_qinv(S.ctx))
    lhs = S.R - _r21_inverse(S.R, S.n, one)
    rhs = (S.P - S.K).scale(h)
    return _compare(f"r-minus-r21inv[N={S.n}]", "R12 - R21^-1 = (q - q^-1)(P - K12)", lhs, rhs, S.n, 2)


def k_identities_check(S: StructureSet) -> list:
    n, one = S.n, S.one()
    K12 = S.leg(S.K, (0, 1))
    R = S.R
    R31i = matrix_inverse(S.leg(R, (2, 0)), one)
    R23i = matrix_inverse(S.leg(R, (1, 2)), one)
    recs = [
        _compare(f"k-r31[N={n}]", "K12 R31^-1 = K12 R32", K12 @ R31i, K12 @ S.leg(R, (2, 1)), n, 3),
        _compare(f"k-r23[N={n}]", "K12 R23^-1 = K12 R13", K12 @ R23i, K12 @ S.leg(R, (0, 2)), n, 3),
    ]
    Q13, Q23 = S.leg(S.Q, (0, 2)), S.leg(S.Q, (1, 2))
    R12 = S.leg(R, (0, 1))
    recs.append(_compare(f"k-q13q23[N={n}]", "K12 Q13 Q23 = K12", K12 @ Q13 @ Q23, K12, n, 3))
    recs.append(_compare(f"r-q13q23[N={n}]", "R12 Q13 Q23 = Q13 Q23 R12", R12 @ Q13 @ Q23, Q13 @ Q23 @ R12, n, 3))
    recs.extend(diagonal_commutation_check(S))
    return recs


def _exponent_kernel(S: StructureSet):
    """Integer basis of exponent vectors ``e`` with ``d_s d_t = 1`` wherever column ``(s,t)`` of K is nonzero."""
    n = S.n
    cols = {b for (_, b), _ in S.K.items()}
    rows = []
    for b in sorted(cols):
        s, t = unflat(b, n, 2)
        r = [0] * n
        r[s] += 1
        r[t] += 1
        rows.append(r)
    if not rows:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    basis = []
    for vec in sympy.Matrix(rows).nullspace():
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in vec])
        basis.append([int(x * den) for x in vec])
    return basis


def diagonal_commutation_check(S: StructureSet) -> list:
    """If ``K12 D1 D2 = K12`` then ``R12 D1 D2 = D1 D2 R12``, for a diagonal D as general as the hypothesis allows."""
    n = S.n
    basis = _exponent_kernel(S)
    names = tuple(f"t{i + 1}" for i in range(len(basis)))
    ctx = ParameterContext(S.ctx.names + names, S.ctx.root)
    lift = lambda m: m.map(lambda c: c.substitute({}, ctx))
    diag = []
    for j in range(n):
        e = [0] * len(S.ctx.names) + [vec[j] for vec in basis]
        diag.append(ScalarFraction(ctx.monomial(e)))
    D = Matrix.diagonal(diag)
    D1, D2 = embed(D, n, (0,), 2), embed(D, n, (1,), 2)
    K, R = lift(S.K), lift(S.R)
    hyp = _compare(f"k-d1d2[N={n}]", "K12 D1 D2 = K12 for the solved D", K @ D1 @ D2, K, n, 2)
    concl = _compare(f"r-d1d2[N={n}]", "R12 D1 D2 = D1 D2 R12", R @ D1 @ D2, D1 @ D2 @ R, n, 2)
    return [hyp, concl]


def leg_commutation_check(A: Matrix, C: Matrix, n: int) -> CheckRecord:
    """An operator on legs 1,2 commutes with a diagonal operator on leg 3."""
    A12 = embed(A, n, (0, 1), 3)
    C3 = embed(C, n, (2,), 3)
    return _compare(f"leg-commute[N={n}]", "A12 C3 = C3 A12", A12 @ C3, C3 @ A12, n, 3)


def run_suite(S: StructureSet) -> list:
    return ybe_check(S.R) + structure_checks(S) + k_identities_check(S)


# ---------------------------------------------------------------------------
# user-supplied data


def _parse_entry(x, ctx: ParameterContext) -> ScalarFraction:
    if isinstance(x, (int,)):
        return ScalarFraction(ctx.const(x))
    if isinstance(x, str):
        return parse_scalar(x, ctx)
    return ScalarFraction.from_json(ctx, x)


def parse_matrix(entries, ctx: ParameterContext) -> Matrix:
    return Matrix.from_dense([[_parse_entry(x, ctx) for x in row] for row in entries])


def load_structure(data: Mapping) -> StructureSet:
    """Structure set from ``{"n": N, "R": rows, "C": rows?, "series": "B"?, "q_root": 2?}``.

    Entries are scalar strings (``"q - q^-1"``) or scalar JSON encodings.
    Without ``C`` the K matrix is defined through R.
    """
    ctx = ParameterContext(("v",), int(data.get("q_root", 2)))
    n = int(data["n"])
    R = parse_matrix(data["R"], ctx)
    if R.nrows != n * n or R.ncols != n * n:
        raise ValueError(f"R must be {n * n}x{n * n}")
    K = None
    if "C" in data:
        C = parse_matrix(data["C"], ctx)
        K = k_from_c(C, n, ScalarFraction(ctx.one()))
    return build_structure(R, n, ctx, K=K, series=str(data.get("series", "user")))


def load_structure_file(path: str) -> StructureSet:
    with open(path) as fh:
        return load_structure(json.load(fh))


def matrix_to_json(m: Matrix, ctx: ParameterContext) -> dict:
    zero = ScalarFraction(ctx.zero())
    return {"n": matrix_size_to_n(m.nrows), "entries": [[v.to_json() for v in row] for row in m.to_dense(zero)]}
