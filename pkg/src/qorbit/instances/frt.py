"""A-series FRT presentation acting on the quantized big cell.

Generators are the entries ``L+_{ij}`` (i <= j) and ``L-_{ij}`` (i >= j),
named with 1-based indices.  The cell algebra is generated by ``z*_{jk}``
(j < k), arranged in the unipotent matrix ``Z*`` with ``(Z*)_{kj} = z*_{jk}``
below the diagonal: the adjoint of the upper unipotent ``Z``.

Matrix conventions on two legs: ``(A1 B2)_{(a,b),(c,d)} = A_{ac} B_{bd}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ..cell import BaseAction, CellAlgebra
from ..free import CheckRecord, CoidealCertificate, FreeElement, GeneratorSet, coideal_certificate
from ..matrices import Matrix, embed, flat, identity, unflat
from ..phi import PhiMap, TwistedAction, build_cyclic_submodule, check_phi_relations
from ..rmatrix import StructureSet, build_a_series, matrix_inverse
from ..scalars import ParameterContext, ScalarFraction


def lname(sign: str, i: int, j: int) -> str:
    return f"L{sign}_{{{i + 1}{j + 1}}}"


def zname(j: int, k: int) -> str:
    return f"z*_{{{j + 1}{k + 1}}}"


def generator_names(n: int) -> list:
    plus = [lname("+", i, j) for i in range(n) for j in range(n) if i <= j]
    minus = [lname("-", i, j) for i in range(n) for j in range(n) if i >= j]
    return plus + minus


def cell_names(n: int) -> list:
    return [zname(j, k) for j in range(n) for k in range(n) if j < k]


def has_entry(sign: str, i: int, j: int) -> bool:
    return i <= j if sign == "+" else i >= j


class NotUnipotent(ValueError):
    pass


def invert_unipotent(Z: Matrix, one) -> Matrix:
    """``(1 + N)^{-1} = Σ_{k<n} (-N)^k`` for a triangular unipotent matrix over any ring."""
    n = Z.nrows
    if not (Z.is_lower_triangular() or Z.is_upper_triangular()):
        raise NotUnipotent("matrix is not triangular")
    for i in range(n):
        d = Z.get(i, i)
        if d is None or d != one:
            raise NotUnipotent(f"diagonal entry {i} is not 1")
    ident = identity(n, one)
    nil = Z - ident
    neg = -nil
    out, power = ident, ident
    for _ in range(n - 1):
        power = power @ neg
        out = out + power
    return out


@dataclass
class FrtInstance:
    n: int
    ctx: ParameterContext
    structure: StructureSet
    generators: GeneratorSet
    relations: list
    relation_labels: list
    cell: CellAlgebra
    action: BaseAction
    phi: PhiMap
    certificate: CoidealCertificate | None
    twisted: TwistedAction
    weights: tuple | None
    action_consistency: list

    def d(self, i: int) -> ScalarFraction:
        return d_entry(self.ctx, self.n, i, self.weights)

    def zstar(self) -> Matrix:
        return zstar_matrix(self.cell, self.n)

    def lmatrix(self, sign: str) -> Matrix:
        return l_matrix(self.generators, self.n, sign)


def d_entry(ctx: ParameterContext, n: int, i: int, weights) -> ScalarFraction:
    """Diagonal entry ``d_{i+1}`` of D: formal, or fixed by the lowest weight ``-Σ n_j ω_j``.

    ``d_i = q^{Σ_j n_j ([i <= j] - j/N)}`` (1-based), so that ``d_1/d_2 = q^{n_1}``
    at N = 2 and ``d_i/d_{i+1} = q^{n_i}`` in general; ``det D = 1``.
    """
    if weights is None:
        return ScalarFraction(ctx.var(f"d{i + 1}"))
    e = sum(Fraction(m) * ((1 if i + 1 <= j else 0) - Fraction(j, n)) for j, m in enumerate(weights, start=1))
    return ScalarFraction(ctx.q(e))


def zstar_matrix(cell: CellAlgebra, n: int) -> Matrix:
    rows: dict = {i: {i: cell.one()} for i in range(n)}
    for j in range(n):
        for k in range(j + 1, n):
            rows[k][j] = cell.gen(zname(j, k))
    return Matrix(n, n, rows)


def l_matrix(g: GeneratorSet, n: int, sign: str) -> Matrix:
    rows: dict = {}
    for i in range(n):
        for j in range(n):
            if has_entry(sign, i, j):
                rows.setdefault(i, {})[j] = g.gen(lname(sign, i, j))
    return Matrix(n, n, rows)


def frt_generators(n: int, ctx: ParameterContext) -> GeneratorSet:
    delta, eps = {}, {}
    for sign in "+-":
        for i in range(n):
            for j in range(n):
                if not has_entry(sign, i, j):
                    continue
                delta[lname(sign, i, j)] = [(1, lname(sign, i, k), lname(sign, k, j)) for k in range(n)
                                            if has_entry(sign, i, k) and has_entry(sign, k, j)]
                eps[lname(sign, i, j)] = 1 if i == j else 0
    return GeneratorSet(generator_names(n), ctx, delta=delta, epsilon=eps)


def _lift(m: Matrix, fn) -> Matrix:
    return m.map(fn)


def frt_relations(g: GeneratorSet, S: StructureSet):
    """Entry-wise relations of the FRT presentation, deduplicated, with labels."""
    n = S.n
    R = _lift(S.R, g.scalar_element)
    Lp, Lm = l_matrix(g, n, "+"), l_matrix(g, n, "-")
    leg = lambda m, k: embed(m, n, (k,), 2)
    families = [
        ("RL+2L+1", R @ leg(Lp, 1) @ leg(Lp, 0) - leg(Lp, 0) @ leg(Lp, 1) @ R),
        ("RL-2L-1", R @ leg(Lm, 1) @ leg(Lm, 0) - leg(Lm, 0) @ leg(Lm, 1) @ R),
        ("RL+2L-1", R @ leg(Lp, 1) @ leg(Lm, 0) - leg(Lm, 0) @ leg(Lp, 1) @ R),
    ]
    rels, labels = [], []

    def push(r: FreeElement, label: str):
        if r.is_zero():
            return
        for s in rels:
            if s == r or s == -r:
                return
        rels.append(r)
        labels.append(label)

    for name, m in families:
        for (i, j), v in m.items():
            push(v, f"{name}[{unflat(i, n, 2)},{unflat(j, n, 2)}]")
    one = g.one()
    for i in range(n):
        p, m = g.gen(lname("+", i, i)), g.gen(lname("-", i, i))
        push(p * m - one, f"diag+-[{i + 1}]")
        push(m * p - one, f"diag-+[{i + 1}]")
    det = one
    for i in range(n):
        det = det * g.gen(lname("+", i, i))
    push(det - one, "det+")
    return rels, labels


def frt_cell(n: int, S: StructureSet) -> CellAlgebra:
    """Cell algebra from ``R12 Z*2 Q Z*1 Q^-1 = Z*1 Q Z*2 Q^-1 R12`` read entry by entry."""
    ctx = S.ctx
    names = cell_names(n)
    raw = GeneratorSet(names, ctx)
    rows: dict = {i: {i: raw.one()} for i in range(n)}
    for j in range(n):
        for k in range(j + 1, n):
            rows[k][j] = raw.gen(zname(j, k))
    Z = Matrix(n, n, rows)
    R = _lift(S.R, raw.scalar_element)
    Q = _lift(S.Q, raw.scalar_element)
    Qi = _lift(matrix_inverse(S.Q, ScalarFraction(ctx.one())), raw.scalar_element)
    Z1, Z2 = embed(Z, n, (0,), 2), embed(Z, n, (1,), 2)
    diff = R @ Z2 @ Q @ Z1 @ Qi - Z1 @ Q @ Z2 @ Qi @ R
    rels, labels = [], []
    for (i, j), v in diff.items():
        rels.append(v.terms)
        labels.append(f"cell[{unflat(i, n, 2)},{unflat(j, n, 2)}]")
    return CellAlgebra.from_relations(names, ctx, rels, labels)


def frt_action_table(g: GeneratorSet, cell: CellAlgebra, S: StructureSet):
    """Generator-on-cell-generator table plus the consistency records for the unused entries."""
    n, ctx = S.n, S.ctx
    one = ScalarFraction(ctx.one())
    toc = cell.scalar_element
    Z = zstar_matrix(cell, n)
    Zi = invert_unipotent(Z, cell.one())
    Z1, Z2, Zi1 = embed(Z, n, (0,), 2), embed(Z, n, (1,), 2), embed(Zi, n, (0,), 2)
    R21i = _lift(matrix_inverse(embed(S.R, n, (1, 0), 2), one), toc)
    Q = _lift(S.Q, toc)
    Qi = _lift(matrix_inverse(S.Q, one), toc)
    images = {"+": R21i @ Z2 @ Q, "-": Z1 @ Q @ Z2 @ Qi @ Zi1}
    table, recs = {}, []
    for sign, M in images.items():
        for a in range(n):
            for c in range(n):
                for b in range(n):
                    for d in range(n):
                        val = M.get(flat((a, b), n), flat((c, d), n), cell.zero())
                        if has_entry(sign, a, c) and b > d:
                            table[(lname(sign, a, c), zname(d, b))] = val
                            continue
                        if not has_entry(sign, a, c):
                            want = cell.zero()
                        elif b == d:
                            want = cell.one() if a == c else cell.zero()
                        else:
                            want = cell.zero()
                        ok = val == want
                        recs.append(CheckRecord(f"action-shape[{sign}|{a + 1}{c + 1}|{b + 1}{d + 1}]",
                                                "unused entries of the action formula agree with ε and zeros",
                                                ok, "" if ok else (val - want).render()))
    return table, recs


def frt_phi_values(cell: CellAlgebra, n: int, ctx: ParameterContext, weights) -> dict:
    D = [d_entry(ctx, n, i, weights) for i in range(n)]
    Z = zstar_matrix(cell, n)
    Zi = invert_unipotent(Z, cell.one())
    D2 = Matrix.diagonal([cell.scalar_element(d * d) for d in D])
    Dinv = Matrix.diagonal([cell.scalar_element(d.inverse()) for d in D])
    phim = Z @ D2 @ Zi @ Dinv
    values = {}
    for i in range(n):
        for j in range(n):
            if has_entry("+", i, j):
                values[lname("+", i, j)] = cell.scalar_element(D[i].inverse()) if i == j else cell.zero()
            if has_entry("-", i, j):
                values[lname("-", i, j)] = phim.get(i, j, cell.zero())
    upper = [(i, j) for (i, j), v in phim.items() if j > i]
    if upper:
        raise ValueError(f"φ(L-) has entries above the diagonal at {upper[0]}")
    return values


def frt_context(n: int, weights) -> ParameterContext:
    if weights is None:
        return ParameterContext.with_product_one(("v",) + tuple(f"d{i + 1}" for i in range(n)),
                                                 [f"d{i + 1}" for i in range(n)], 2)
    return ParameterContext(("v",), lcm(2, n))


def load_frt(n: int, weights=None, certify: bool = True) -> FrtInstance:
    """The A-series instance at size ``n``; formal D unless ``weights`` (length n-1) is given."""
    if n < 2:
        raise ValueError("N must be at least 2")
    if weights is not None:
        weights = tuple(int(w) for w in weights)
        if len(weights) != n - 1 or any(w < 0 for w in weights):
            raise ValueError(f"weights must be {n - 1} nonnegative integers")
    ctx = frt_context(n, weights)
    S = build_a_series(n, ctx)
    g = frt_generators(n, ctx)
    rels, labels = frt_relations(g, S)
    cert = None
    if certify:
        cert = coideal_certificate(rels)
        if not cert.ok:
            raise ValueError(f"FRT relations fail the coideal certificate at {[labels[i] for i in cert.failures]}")
    cell = frt_cell(n, S)
    table, recs = frt_action_table(g, cell, S)
    action = BaseAction(g, cell, table)
    phi = PhiMap(action, frt_phi_values(cell, n, ctx, weights))
    return FrtInstance(n, ctx, S, g, rels, labels, cell, action, phi, cert, TwistedAction(phi), weights, recs)


# ---------------------------------------------------------------------------
# the four quadratic families


def _phi_family(inst: FrtInstance, first: tuple, second: tuple) -> Matrix:
    """Matrix with entries ``φ̃(A_{..} B_{..})`` for ``A = first[0]`` on leg ``first[1]`` etc."""
    n, cell = inst.n, inst.cell
    rows: dict = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    idx = {0: (a, c), 1: (b, d)}
                    (s1, l1), (s2, l2) = first, second
                    i1, j1 = idx[l1]
                    i2, j2 = idx[l2]
                    if not (has_entry(s1, i1, j1) and has_entry(s2, i2, j2)):
                        continue
                    w = (inst.generators.index[lname(s1, i1, j1)], inst.generators.index[lname(s2, i2, j2)])
                    v = inst.phi.extend_word(w)
                    if not v.is_zero():
                        rows.setdefault(flat((a, b), n), {})[flat((c, d), n)] = v
    return Matrix(n * n, n * n, rows)


def eq52_closed_forms(inst: FrtInstance) -> dict:
    n, cell, ctx = inst.n, inst.cell, inst.ctx
    one = ScalarFraction(ctx.one())
    toc = cell.scalar_element
    D = [inst.d(i) for i in range(n)]
    leg = lambda m, k: embed(m, n, (k,), 2)
    Z = inst.zstar()
    Zi = invert_unipotent(Z, cell.one())
    Dm = Matrix.diagonal([toc(x.inverse()) for x in D])
    D2 = Matrix.diagonal([toc(x * x) for x in D])
    Q = _lift(inst.structure.Q, toc)
    Qi = _lift(matrix_inverse(inst.structure.Q, one), toc)
    R = _lift(inst.structure.R, toc)
    Ri = _lift(matrix_inverse(inst.structure.R, one), toc)
    Z1, Z2, Zi1, Zi2 = leg(Z, 0), leg(Z, 1), leg(Zi, 0), leg(Zi, 1)
    Dm12 = leg(Dm, 0) @ leg(Dm, 1)
    return {
        "L+1L+2": Dm12,
        "L-1L-2": Z1 @ Q @ Z2 @ leg(D2, 0) @ leg(D2, 1) @ Zi2 @ Qi @ Zi1 @ Dm12,
        "L+2L-1": Ri @ Z1 @ leg(D2, 0) @ Zi1 @ Dm12 @ R,
        "L-1L+2": Z1 @ leg(D2, 0) @ Zi1 @ Dm12,
    }


def verify_eq52(inst: FrtInstance) -> list:
    computed = {
        "L+1L+2": _phi_family(inst, ("+", 0), ("+", 1)),
        "L-1L-2": _phi_family(inst, ("-", 0), ("-", 1)),
        "L+2L-1": _phi_family(inst, ("+", 1), ("-", 0)),
        "L-1L+2": _phi_family(inst, ("-", 0), ("+", 1)),
    }
    expected = eq52_closed_forms(inst)
    recs = []
    n = inst.n
    for key in computed:
        a, b = computed[key], expected[key]
        diff = a.first_difference(b)
        ok = diff is None
        wit = ""
        if not ok:
            (i, j), v = diff
            wit = f"entry {unflat(i, n, 2)},{unflat(j, n, 2)}: difference {v.render()}"
        recs.append(CheckRecord(f"phi-quadratic[{key}|N={n}]", "φ on quadratic families matches closed form",
                                ok, wit))
    if inst.certificate is not None:
        recs.extend(check_phi_relations(inst.phi, inst.relations, inst.certificate))
    return recs


def build_frt_rep(n: int, weights, dim_cutoff: int = 64):
    inst = load_frt(n, weights, certify=False)
    return inst, build_cyclic_submodule(inst.twisted, dim_cutoff)
