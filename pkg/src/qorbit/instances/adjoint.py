"""Chevalley generators e_i, f_i, t_i^{±1} acting on U_q(n) by the twisted adjoint action.

Relations are the Cartan/commutator relations, their t^{-1} variants
(needed for closure under the coproduct) and the quantum Serre relations,
which are taken from the standard presentation.  U_q(n) is presented by
the Serre relations among the e_i oriented as rewrite rules.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..cell import BaseAction, CellAlgebra
from ..free import CheckRecord, CoidealCertificate, FreeElement, GeneratorSet, coideal_certificate
from ..phi import PhiMap, TwistedAction, build_cyclic_submodule, check_phi_relations
from ..scalars import ParameterContext, ScalarFraction, q_minus_qinv, qnum

CARTAN = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
}


@dataclass(frozen=True)
class CartanData:
    """Symmetrized pairing ``<α_i, α_j>`` of the simple roots."""

    pairing: tuple

    @classmethod
    def of_type(cls, name: str) -> CartanData:
        try:
            return cls(CARTAN[name])
        except KeyError:
            raise ValueError(f"unknown Cartan type {name!r}; shipped types: {sorted(CARTAN)}") from None

    def __post_init__(self):
        a = tuple(tuple(int(x) for x in row) for row in self.pairing)
        object.__setattr__(self, "pairing", a)
        n = len(a)
        if any(len(row) != n for row in a):
            raise ValueError("pairing must be square")
        for i in range(n):
            if a[i][i] <= 0 or a[i][i] % 2:
                raise ValueError("diagonal pairings must be positive even integers")
            for j in range(n):
                if a[i][j] != a[j][i]:
                    raise ValueError("pairing must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.pairing)


def e(i: int) -> str:
    return f"e{i + 1}"


def f(i: int) -> str:
    return f"f{i + 1}"


def t(i: int) -> str:
    return f"t{i + 1}"


def ti(i: int) -> str:
    return f"t{i + 1}^-1"


def generator_names(rank: int) -> list:
    return [name(i) for i in range(rank) for name in (e, f, t, ti)]


def adjoint_generators(cartan: CartanData, ctx: ParameterContext) -> GeneratorSet:
    delta, eps = {}, {}
    for i in range(cartan.rank):
        delta[e(i)] = [(1, e(i), None), (1, t(i), e(i))]
        # printed as 1⊗e_i in the second term; f_i is the only choice compatible with the counit
        delta[f(i)] = [(1, f(i), ti(i)), (1, None, f(i))]
        delta[t(i)] = [(1, t(i), t(i))]
        delta[ti(i)] = [(1, ti(i), ti(i))]
        eps.update({e(i): 0, f(i): 0, t(i): 1, ti(i): 1})
    return GeneratorSet(generator_names(cartan.rank), ctx, delta=delta, epsilon=eps)


def serre(x: FreeElement, y: FreeElement, aij: int, ctx: ParameterContext) -> FreeElement:
    """``Σ_k (-1)^k [1-a choose k] x^{1-a-k} y x^k`` for ``a = aij`` in {0, -1}."""
    if aij == 0:
        return x * y - y * x
    if aij == -1:
        two = ScalarFraction(qnum(2, ctx))
        return x * x * y - (x * y * x).scale(two) + y * x * x
    raise ValueError("only simply-laced pairings with entries 0 or -1 off the diagonal are shipped")


def adjoint_relations(g: GeneratorSet, cartan: CartanData) -> tuple:
    ctx = g.ctx
    one = g.one()
    c = ScalarFraction(ctx.one(), q_minus_qinv(ctx))
    rels, labels = [], []

    def add(r, label):
        rels.append(r)
        labels.append(label)

    G = g.gen
    n = cartan.rank
    for i in range(n):
        add(G(t(i)) * G(ti(i)) - one, f"t{i + 1} t{i + 1}^-1")
        add(G(ti(i)) * G(t(i)) - one, f"t{i + 1}^-1 t{i + 1}")
    for i in range(n):
        for j in range(n):
            if i < j:
                add(G(t(i)) * G(t(j)) - G(t(j)) * G(t(i)), f"[t{i + 1},t{j + 1}]")
                add(G(ti(i)) * G(ti(j)) - G(ti(j)) * G(ti(i)), f"[t{i + 1}^-1,t{j + 1}^-1]")
            if i != j:
                add(G(t(i)) * G(ti(j)) - G(ti(j)) * G(t(i)), f"[t{i + 1},t{j + 1}^-1]")
    for i in range(n):
        for j in range(n):
            a = cartan.pairing[i][j]
            qa, qma = ScalarFraction(ctx.q(a)), ScalarFraction(ctx.q(-a))
            add(G(t(i)) * G(e(j)) - (G(e(j)) * G(t(i))).scale(qa), f"t{i + 1} e{j + 1}")
            add(G(t(i)) * G(f(j)) - (G(f(j)) * G(t(i))).scale(qma), f"t{i + 1} f{j + 1}")
            add(G(ti(i)) * G(e(j)) - (G(e(j)) * G(ti(i))).scale(qma), f"t{i + 1}^-1 e{j + 1}")
            add(G(ti(i)) * G(f(j)) - (G(f(j)) * G(ti(i))).scale(qa), f"t{i + 1}^-1 f{j + 1}")
            r = G(e(i)) * G(f(j)) - G(f(j)) * G(e(i))
            if i == j:
                r = r - (G(t(i)) - G(ti(i))).scale(c)
            add(r, f"[e{i + 1},f{j + 1}]")
    for i in range(n):
        for j in range(n):
            if i != j:
                a = cartan.pairing[i][j]
                add(serre(G(e(i)), G(e(j)), a, ctx), f"serre e{i + 1} e{j + 1}")
                add(serre(G(f(i)), G(f(j)), a, ctx), f"serre f{i + 1} f{j + 1}")
    if n > 1:
        for r, label in reordering_relations(g, cartan, 3):
            add(r, label)
    return rels, labels


def reordering_relations(g: GeneratorSet, cartan: CartanData, length: int) -> list:
    """Dependent relations ``w - c·sort(w)`` for words of the given length in the f_i and t_i^-1 (at least one t).

    ``sort`` moves every t_i^-1 to the end (ordered by i) and ``c`` is the
    resulting power of q.  The right leg of the coproduct of an f-Serre
    relation only reaches the left ideal, so these reorderings must be
    available as relations in their own right.
    """
    ctx = g.ctx
    letters = [(("f", i), g.index[f(i)]) for i in range(cartan.rank)] + \
              [(("t", i), g.index[ti(i)]) for i in range(cartan.rank)]
    out = []
    for combo in itertools.product(letters, repeat=length):
        kinds = [k for k, _ in combo]
        fs = [k for k in kinds if k[0] == "f"]
        ts = sorted(k for k in kinds if k[0] == "t")
        if not ts:
            continue
        target = fs + ts
        if kinds == target:
            continue
        # q-power from moving each t_i^-1 right past the f_j that follow it
        power = 0
        for pos, k in enumerate(kinds):
            if k[0] == "t":
                power += sum(cartan.pairing[k[1]][m[1]] for m in kinds[pos + 1:] if m[0] == "f")
        w = tuple(x for _, x in combo)
        w2 = tuple(g.index[f(k[1])] if k[0] == "f" else g.index[ti(k[1])] for k in target)
        r = FreeElement(g, {w: g._one_scalar()}) - FreeElement(g, {w2: ScalarFraction(ctx.q(power))})
        out.append((r, "reorder " + g.render_word(w)))
    return out


def nilpotent_algebra(cartan: CartanData, ctx: ParameterContext) -> CellAlgebra:
    """U_q(n): generators e_i modulo the Serre relations, oriented towards smaller words."""
    names = [e(i) for i in range(cartan.rank)]
    raw = GeneratorSet(names, ctx)
    rels, labels = [], []
    for i in range(cartan.rank):
        for j in range(cartan.rank):
            if i != j and (cartan.pairing[i][j] != 0 or i < j):
                rels.append(serre(raw.gen(e(i)), raw.gen(e(j)), cartan.pairing[i][j], ctx).terms)
                labels.append(f"serre e{i + 1} e{j + 1}")
    return CellAlgebra.from_relations(names, ctx, rels, labels)


def antipode_word(g: GeneratorSet, w: tuple) -> FreeElement:
    out = g.one()
    for x in reversed(w):
        name = g.names[x]
        k = int(name[1:].split("^")[0]) - 1
        if name.startswith("e"):
            img = -(g.gen(ti(k)) * g.gen(e(k)))
        elif name.startswith("f"):
            img = -(g.gen(f(k)) * g.gen(t(k)))
        elif name.endswith("^-1"):
            img = g.gen(t(k))
        else:
            img = g.gen(ti(k))
        out = out * img
    return out


def antipode(x: FreeElement) -> FreeElement:
    """Anti-multiplicative extension of ``σ(e) = -t^-1 e``, ``σ(f) = -f t``, ``σ(t^{±1}) = t^{∓1}``."""
    g = x.parent
    out = g.zero()
    for w, c in x.terms.items():
        out = out + antipode_word(g, w).scale(c)
    return out


def adjoint_act(x: FreeElement, y: FreeElement) -> FreeElement:
    """``ad_x y = x(1) y σ(x(2))`` in the free algebra."""
    g = x.parent
    out = g.zero()
    for w, c in x.terms.items():
        for (a, b), cc in g.coproduct_word(w).terms.items():
            out = out + (FreeElement(g, {a: g._one_scalar()}) * y * antipode_word(g, b)).scale(c * cc)
    return out


@dataclass
class AdjointInstance:
    cartan: CartanData
    ctx: ParameterContext
    generators: GeneratorSet
    relations: list
    relation_labels: list
    cell: CellAlgebra
    action: BaseAction
    certificate: CoidealCertificate | None

    def phi_lambda(self, weight=None) -> PhiMap:
        return load_phi_lambda(self, weight)


def adjoint_context(rank: int, formal: bool) -> ParameterContext:
    if formal:
        return ParameterContext(("v",) + tuple(f"p{i + 1}" for i in range(rank)), 2)
    return ParameterContext(("v",), 2)


def load_twisted_adjoint(cartan: CartanData | str, formal_weight: bool = True, certify: bool = True) -> AdjointInstance:
    if isinstance(cartan, str):
        cartan = CartanData.of_type(cartan)
    ctx = adjoint_context(cartan.rank, formal_weight)
    g = adjoint_generators(cartan, ctx)
    rels, labels = adjoint_relations(g, cartan)
    cert = None
    if certify:
        cert = coideal_certificate(rels)
        if not cert.ok:
            raise ValueError(f"relations fail the coideal certificate at {[labels[i] for i in cert.failures]}")
    cell = nilpotent_algebra(cartan, ctx)
    table = {}
    for i in range(cartan.rank):
        for j in range(cartan.rank):
            a = cartan.pairing[i][j]
            ei, ej = cell.gen(e(i)), cell.gen(e(j))
            table[(e(i), e(j))] = ei * ej - (ej * ei).scale(ctx.q(a))
            table[(f(i), e(j))] = cell.scalar_element(
                ScalarFraction(ctx.one(), q_minus_qinv(ctx)) if i == j else ScalarFraction(ctx.zero()))
            table[(t(i), e(j))] = ej.scale(ctx.q(a))
            table[(ti(i), e(j))] = ej.scale(ctx.q(-a))
    action = BaseAction(g, cell, table)
    return AdjointInstance(cartan, ctx, g, rels, labels, cell, action, cert)


def load_phi_lambda(inst: AdjointInstance, weight=None) -> PhiMap:
    """φ with ``p_i = q^{<λ,α_i>}``: formal ``p_i`` when ``weight`` is None, else integers."""
    ctx, cell = inst.ctx, inst.cell
    values = {}
    for i in range(inst.cartan.rank):
        if weight is None:
            p = ScalarFraction(ctx.var(f"p{i + 1}"))
        else:
            p = ScalarFraction(ctx.q(int(weight[i])))
        values[e(i)] = cell.gen(e(i)).scale(1 - p * p)
        values[f(i)] = cell.zero()
        values[t(i)] = cell.scalar_element(p)
        values[ti(i)] = cell.scalar_element(p.inverse())
    return PhiMap(inst.action, values)


def check_antipode_axiom(inst: AdjointInstance) -> list:
    g = inst.generators
    recs = []
    for i, name in enumerate(g.names):
        lhs = g.zero()
        for (a, b), c in g.delta[i].terms.items():
            lhs = lhs + (FreeElement(g, {a: g._one_scalar()}) * antipode_word(g, b)).scale(c)
        want = g.scalar_element(g.epsilon[i])
        # reduce t t^-1 pairs, the only words produced on generators
        red = g.zero()
        for w, c in lhs.terms.items():
            red = red + FreeElement(g, {_cancel_inverses(g, w): c})
        ok = red == want
        recs.append(CheckRecord(f"antipode[{name}]", "x(1) σ(x(2)) = ε(x) 1", ok, "" if ok else red.render()))
    return recs


def _cancel_inverses(g: GeneratorSet, w: tuple) -> tuple:
    out = []
    for x in w:
        name = g.names[x]
        if out:
            prev = g.names[out[-1]]
            if name.startswith("t") and prev.startswith("t") and (prev + "^-1" == name or name + "^-1" == prev):
                out.pop()
                continue
        out.append(x)
    return tuple(out)


def build_adjoint_rep(cartan: CartanData | str, weight, dim_cutoff: int = 64):
    inst = load_twisted_adjoint(cartan, formal_weight=False, certify=False)
    tw = TwistedAction(load_phi_lambda(inst, weight))
    return inst, build_cyclic_submodule(tw, dim_cutoff)
