"""Twisting a base action by a φ-map, and the cyclic submodules it generates.

Given a base action ξ of the free algebra on a cell algebra 𝒞 and values
``φ(x) ∈ 𝒞`` on generators, φ extends to words by peeling the leftmost
letter::

    φ̃(x y) = Σ (ξ_{x(1)} · φ̃(y)) φ̃(x(2))

and the twisted action is ``x · f = Σ (ξ_{x(1)} · f) φ̃(x(2))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cell import BaseAction, CellAlgebra, CPolynomial
from .free import CheckRecord, CoidealCertificate, FreeElement, word_key
from .linalg import axpy, nullspace, rank
from .matrices import Matrix, identity
from .scalars import ParameterContext, ScalarFraction


class CertificateRequired(RuntimeError):
    """Raised when relations are checked without a successful coideal certificate."""


class PhiMap:
    def __init__(self, action: BaseAction, values: Mapping):
        self.action = action
        self.generators = action.generators
        self.cell = action.cell
        self.values: dict = {}
        for name, val in values.items():
            i = self.generators.index[name] if isinstance(name, str) else name
            if not isinstance(val, CPolynomial):
                val = self.cell.scalar_element(val)
            self.values[i] = val
        missing = [n for i, n in enumerate(self.generators.names) if i not in self.values]
        if missing:
            raise ValueError(f"φ has no value on {missing}")
        self._memo: dict = {(): self.cell.one()}

    @classmethod
    def trivial(cls, action: BaseAction) -> PhiMap:
        """The counit character: ``φ(x) = ε(x)·1``."""
        g = action.generators
        return cls(action, {i: action.cell.scalar_element(g.epsilon[i]) for i in range(len(g.names))})

    def _value(self, w: tuple) -> CPolynomial:
        return self.values[w[0]] if w else self.cell.one()

    def extend_word(self, w: tuple) -> CPolynomial:
        w = tuple(w)
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        x, rest = w[0], w[1:]
        tail = self.extend_word(rest)
        out = self.cell.zero()
        for (a, b), c in self.generators.delta[x].terms.items():
            right = self._value(b)
            if right.is_zero():
                continue
            left = self.action.act_word(a, tail)
            if left.is_zero():
                continue
            out = out + (left * right).scale(c)
        self._memo[w] = out
        return out

    def extend(self, x: FreeElement) -> CPolynomial:
        out = self.cell.zero()
        for w, c in x.terms.items():
            out = out + self.extend_word(w).scale(c)
        return out

    def split_sides(self, w: tuple, k: int):
        """Both sides of ``φ̃(xy) = (ξ̃_{x(1)}·φ̃(y)) φ̃(x(2))`` for ``x = w[:k]``, ``y = w[k:]``."""
        x, y = tuple(w[:k]), tuple(w[k:])
        lhs = self.extend_word(tuple(w))
        tail = self.extend_word(y)
        rhs = self.cell.zero()
        for (a, b), c in self.generators.coproduct_word(x).terms.items():
            right = self.extend_word(b)
            if right.is_zero():
                continue
            rhs = rhs + (self.action.act_word(a, tail) * right).scale(c)
        return lhs, rhs

    def check_splits(self, words: Iterable[tuple]) -> list:
        recs = []
        for w in words:
            for k in range(1, len(w)):
                lhs, rhs = self.split_sides(w, k)
                ok = lhs == rhs
                recs.append(CheckRecord(f"phi-split[{self.generators.render_word(w)}|{k}]",
                                        "extension independent of the splitting point", ok,
                                        "" if ok else (lhs - rhs).render()))
        return recs


def check_phi_relations(phi: PhiMap, relations: Sequence[FreeElement],
                        certificate: CoidealCertificate | None) -> list:
    """φ̃ on each relation; refused unless ``certificate`` covers every relation."""
    if certificate is None or not certificate.ok:
        raise CertificateRequired("relation set has no coideal certificate; factorization cannot be concluded")
    covered = certificate.relations
    for r in relations:
        if not any(r == c for c in covered):
            raise CertificateRequired(f"relation {r.render()} is not covered by the certificate")
    recs = []
    for k, r in enumerate(relations):
        val = phi.extend(r)
        recs.append(CheckRecord(f"phi-relation[{k}]", "φ vanishes on the relations", val.is_zero(),
                                "" if val.is_zero() else f"{r.render()} -> {val.render()}"))
    return recs


class TwistedAction:
    def __init__(self, phi: PhiMap):
        self.phi = phi
        self.action = phi.action
        self.generators = phi.generators
        self.cell = phi.cell
        self._memo: dict = {}

    def act_gen_mono(self, x: int, m: tuple) -> CPolynomial:
        key = (x, m)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        f = CPolynomial(self.cell, {m: self.cell._one_scalar()})
        out = self.cell.zero()
        for (a, b), c in self.generators.delta[x].terms.items():
            right = self.phi._value(b)
            if right.is_zero():
                continue
            left = self.action.act_word(a, f)
            if left.is_zero():
                continue
            out = out + (left * right).scale(c)
        self._memo[key] = out
        return out

    def act_gen(self, x: int, f: CPolynomial) -> CPolynomial:
        out = self.cell.zero()
        for m, c in f.terms.items():
            out = out + self.act_gen_mono(x, m).scale(c)
        return out

    def act_word(self, w: tuple, f: CPolynomial) -> CPolynomial:
        """Word action by composition, rightmost letter first."""
        for x in reversed(tuple(w)):
            f = self.act_gen(x, f)
            if f.is_zero():
                break
        return f

    def act_word_direct(self, w: tuple, f: CPolynomial) -> CPolynomial:
        """Word action straight from the definition, through the full coproduct of ``w``."""
        out = self.cell.zero()
        for (a, b), c in self.generators.coproduct_word(tuple(w)).terms.items():
            right = self.phi.extend_word(b)
            if right.is_zero():
                continue
            left = self.action.act_word(a, f)
            if left.is_zero():
                continue
            out = out + (left * right).scale(c)
        return out

    def act(self, x: FreeElement, f: CPolynomial) -> CPolynomial:
        out = self.cell.zero()
        for w, c in x.terms.items():
            out = out + self.act_word(w, f).scale(c)
        return out

    def act_direct(self, x: FreeElement, f: CPolynomial) -> CPolynomial:
        out = self.cell.zero()
        for w, c in x.terms.items():
            out = out + self.act_word_direct(w, f).scale(c)
        return out

    # checks -----------------------------------------------------------
    def check_unit_images(self, words: Iterable[tuple]) -> list:
        """``x · 1 = φ̃(x)``."""
        recs = []
        one = self.cell.one()
        for w in words:
            a = self.act_word(tuple(w), one)
            b = self.phi.extend_word(tuple(w))
            ok = a == b
            recs.append(CheckRecord(f"unit-image[{self.generators.render_word(tuple(w))}]",
                                    "x·1 equals φ(x)", ok, "" if ok else (a - b).render()))
        return recs

    def check_generalized_leibniz(self, samples: Iterable) -> list:
        """``x·(fg) = Σ (ξ_{x(1)}·f)(x(2)·g)`` for samples ``(word, f, g)``."""
        recs = []
        for w, f, g in samples:
            w = tuple(w)
            lhs = self.act_word(w, f * g)
            rhs = self.cell.zero()
            for (a, b), c in self.generators.coproduct_word(w).terms.items():
                left = self.action.act_word(a, f)
                if left.is_zero():
                    continue
                rhs = rhs + (left * self.act_word(b, g)).scale(c)
            ok = lhs == rhs
            recs.append(CheckRecord(f"leibniz[{self.generators.render_word(w)}|{f.render()}|{g.render()}]",
                                    "twisted Leibniz rule", ok, "" if ok else (lhs - rhs).render()))
        return recs

    def check_module_law(self, samples: Iterable) -> list:
        """``x·(y·f)`` by composition against ``(xy)·f`` from the definition."""
        recs = []
        for x, y, f in samples:
            x, y = tuple(x), tuple(y)
            lhs = self.act_word(x, self.act_word(y, f))
            rhs = self.act_word_direct(x + y, f)
            ok = lhs == rhs
            recs.append(CheckRecord(
                f"twisted-module-law[{self.generators.render_word(x)}|{self.generators.render_word(y)}|{f.render()}]",
                "composition equals the action of the product", ok, "" if ok else (lhs - rhs).render()))
        return recs

    def check_relations_kill(self, relations: Sequence[FreeElement], probes: Sequence[CPolynomial]) -> list:
        recs = []
        for k, r in enumerate(relations):
            for f in probes:
                got = self.act_direct(r, f)
                ok = got.is_zero()
                recs.append(CheckRecord(f"twisted-kill[{k}|{f.render()}]", "relations act as zero", ok,
                                        "" if ok else f"{r.render()} on {f.render()} -> {got.render()}"))
        return recs


# ---------------------------------------------------------------------------
# cyclic submodules


class RepMatrixSet:
    """Generator matrices on an explicit basis; columns are images of basis vectors."""

    def __init__(self, names: Sequence[str], ctx: ParameterContext, basis_labels: Sequence[str],
                 matrices: Mapping[str, Matrix]):
        self.names = tuple(names)
        self.ctx = ctx
        self.basis_labels = list(basis_labels)
        self.matrices = dict(matrices)
        self.dim = len(self.basis_labels)

    def one(self) -> ScalarFraction:
        return ScalarFraction(self.ctx.one())

    def word_matrix(self, w: Sequence[int]) -> Matrix:
        out = identity(self.dim, self.one())
        for x in w:
            out = out @ self.matrices[self.names[x]]
        return out

    def element_matrix(self, x: FreeElement) -> Matrix:
        out = Matrix(self.dim)
        for w, c in x.terms.items():
            out = out + self.word_matrix(w).scale(c)
        return out

    def relation_residuals(self, relations: Sequence[FreeElement]) -> list:
        return [self.element_matrix(r) for r in relations]

    def to_json(self) -> dict:
        zero = ScalarFraction(self.ctx.zero())
        return {
            "version": 1,
            "context": self.ctx.to_json(),
            "basis": list(self.basis_labels),
            "generators": {
                n: [[v.to_json() for v in row] for row in self.matrices[n].to_dense(zero)] for n in self.names
            },
        }

    @classmethod
    def from_json(cls, data: Mapping) -> RepMatrixSet:
        ctx = ParameterContext.from_json(data["context"])
        mats = {}
        for n, rows in data["generators"].items():
            mats[n] = Matrix.from_dense([[ScalarFraction.from_json(ctx, v) for v in row] for row in rows])
            if not rows:
                mats[n] = Matrix(0)
        return cls(list(data["generators"]), ctx, data["basis"], mats)

    def substitute_values(self, values: Mapping) -> dict:
        """Exact rational evaluation of every entry."""
        out = {}
        for n in self.names:
            dense = self.matrices[n].to_dense(ScalarFraction(self.ctx.zero()))
            out[n] = [[v.evaluate(values) for v in row] for row in dense]
        return out


@dataclass
class CyclicSubmodule:
    basis: list
    pivots: list
    infinite: bool = False
    matrices: RepMatrixSet | None = None
    generator_names: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, f: CPolynomial) -> list:
        """Coordinates of ``f`` in the basis, or ``None`` if ``f`` lies outside the span."""
        rem = dict(f.terms)
        coords = []
        for p, b in zip(self.pivots, self.basis):
            c = rem.get(p)
            if c is None:
                coords.append(ScalarFraction(f.ctx.zero()))
                continue
            coords.append(c)
            axpy(rem, -c, b.terms)
        return None if rem else coords


def _reduce_against(rows: dict, vec: dict) -> dict:
    rem = dict(vec)
    for p in sorted(rows, key=word_key, reverse=True):
        c = rem.get(p)
        if c is not None:
            axpy(rem, -c, rows[p])
    return rem


def build_cyclic_submodule(action: TwistedAction, dim_cutoff: int = 64,
                           generators: Sequence[int] | None = None) -> CyclicSubmodule:
    """Closure of ``{1}`` under the generator actions, breadth first.

    Vectors are kept in reduced echelon form with pivot the largest monomial
    in degree-then-lex order; the basis is listed by increasing pivot.
    """
    cell = action.cell
    gens = list(range(len(action.generators.names))) if generators is None else list(generators)
    rows: dict = {}
    queue = []

    def insert(vec: dict) -> bool:
        rem = _reduce_against(rows, vec)
        if not rem:
            return False
        p = max(rem, key=word_key)
        inv = rem[p].inverse()
        new = {k: v * inv for k, v in rem.items()}
        for row in rows.values():
            c = row.get(p)
            if c is not None:
                axpy(row, -c, new)
        rows[p] = new
        queue.append(CPolynomial(cell, new))
        return True

    insert(cell.one().terms)
    infinite = False
    head = 0
    while head < len(queue):
        f = queue[head]
        head += 1
        for x in gens:
            img = action.act_gen(x, f)
            if img.is_zero():
                continue
            if insert(img.terms) and len(rows) > dim_cutoff:
                infinite = True
                break
        if infinite:
            break
    pivots = sorted(rows, key=word_key)
    basis = [CPolynomial(cell, rows[p]) for p in pivots]
    mod = CyclicSubmodule(basis, pivots, infinite, generator_names=[action.generators.names[x] for x in gens])
    if infinite:
        return mod
    mats = {}
    for x in gens:
        cols = []
        for b in basis:
            coords = mod.coordinates(action.act_gen(x, b))
            if coords is None:
                raise ArithmeticError("cyclic closure is not stable under a generator")
            cols.append(coords)
        dense = [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]
        mats[action.generators.names[x]] = Matrix.from_dense(dense) if basis else Matrix(0)
    mod.matrices = RepMatrixSet(mod.generator_names, cell.ctx, [b.render() for b in basis], mats)
    return mod


# ---------------------------------------------------------------------------
# comparing representations


def intertwiner(rep: RepMatrixSet, images: Mapping[str, Matrix]) -> Matrix | None:
    """Invertible ``S`` with ``rep(x) S = S images[x]`` for every named generator, or None.

    ``images[x]`` is the matrix of the dictionary image of ``x`` in a second
    representation of the same dimension.  A generic member of the solution
    space is tried (the sum of the nullspace basis).
    """
    d = rep.dim
    one = rep.one()
    if any(m.nrows != d for m in images.values()):
        return None
    unknowns = [(i, j) for i in range(d) for j in range(d)]
    eqs = []
    for x, B in images.items():
        A = rep.matrices[x]
        for i in range(d):
            for j in range(d):
                eq: dict = {}
                for k in range(d):
                    a, b = A.get(i, k), B.get(k, j)
                    if a is not None:
                        axpy(eq, a, {(k, j): one})
                    if b is not None:
                        axpy(eq, -b, {(i, k): one})
                if eq:
                    eqs.append(eq)
    sols = nullspace(eqs, unknowns, one)
    if not sols:
        return None
    total: dict = {}
    for s in sols:
        axpy(total, one, s)
    rows: dict = {}
    for (i, j), v in total.items():
        rows.setdefault(i, {})[j] = v
    S = Matrix(d, d, rows)
    if rank([{j: v for j, v in r.items()} for r in rows.values()]) < d:
        return None
    return S
