"""U_q(sl2) acting on polynomials in one variable ``zb``.

Generators ``K = q^{H/2}``, ``Ki = q^{-H/2}``, ``X+``, ``X-``.  The shipped
relation set adds the two dependent relations ``X± Ki - q^{±1} Ki X±``
so that it is closed under the coproduct in the visible sense.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..cell import BaseAction, CellAlgebra
from ..free import CheckRecord, CoidealCertificate, GeneratorSet, coideal_certificate
from ..phi import PhiMap, TwistedAction, build_cyclic_submodule, check_phi_relations
from ..scalars import ParameterContext, ScalarFraction, q_minus_qinv, qnum, qnum_shifted

NAMES = ("K", "Ki", "X+", "X-")


@dataclass
class Sl2Instance:
    ctx: ParameterContext
    sigma: int | None
    generators: GeneratorSet
    relations: list
    cell: CellAlgebra
    action: BaseAction
    phi: PhiMap
    certificate: CoidealCertificate
    twisted: TwistedAction

    def s(self) -> ScalarFraction:
        """``q^{σ/2}``."""
        if self.sigma is None:
            return ScalarFraction(self.ctx.var("s"))
        return ScalarFraction(self.ctx.q(Fraction(self.sigma, 2)))

    def zbar(self, n: int = 1):
        return self.cell.gen("zb") ** n


def sl2_generators(ctx: ParameterContext) -> GeneratorSet:
    return GeneratorSet(
        NAMES, ctx,
        delta={
            "K": [(1, "K", "K")],
            "Ki": [(1, "Ki", "Ki")],
            "X+": [(1, "X+", "Ki"), (1, "K", "X+")],
            "X-": [(1, "X-", "Ki"), (1, "K", "X-")],
        },
        epsilon={"K": 1, "Ki": 1, "X+": 0, "X-": 0},
    )


def sl2_relations(g: GeneratorSet) -> list:
    ctx = g.ctx
    q, qi = ScalarFraction(ctx.q(1)), ScalarFraction(ctx.q(-1))
    K, Ki, Xp, Xm = (g.gen(n) for n in NAMES)
    one = g.one()
    c = ScalarFraction(ctx.one(), q_minus_qinv(ctx))
    return [
        K * Ki - one,
        Ki * K - one,
        K * Xp - (Xp * K).scale(q),
        K * Xm - (Xm * K).scale(qi),
        Xp * Xm - Xm * Xp - (K * K - Ki * Ki).scale(c),
        # printed with X+ as the last factor of both dependent relations; the
        # X- one must end in X- to follow from the K-commutation relation
        Xp * Ki - (Ki * Xp).scale(q),
        Xm * Ki - (Ki * Xm).scale(qi),
    ]


def load_sl2(sigma: int | None = None) -> Sl2Instance:
    """Build the instance with formal σ (parameter ``s = q^{σ/2}``) or an integer σ."""
    if sigma is None:
        ctx = ParameterContext(("v", "s"), 2)
        s = ScalarFraction(ctx.var("s"))
    else:
        if sigma < 0:
            raise ValueError("sigma must be a nonnegative integer")
        ctx = ParameterContext(("v",), 2)
        s = ScalarFraction(ctx.q(Fraction(sigma, 2)))
    g = sl2_generators(ctx)
    rels = sl2_relations(g)
    cert = coideal_certificate(rels)
    if not cert.ok:
        raise ValueError(f"sl2 relation set fails the coideal certificate at {cert.failures}")
    cell = CellAlgebra(("zb",), ctx)
    zb = cell.gen("zb")
    action = BaseAction(g, cell, {
        ("K", "zb"): zb.scale(ctx.q(1)),
        ("Ki", "zb"): zb.scale(ctx.q(-1)),
        ("X+", "zb"): zb * zb,
        ("X-", "zb"): cell.scalar_element(-1),
    })
    bracket_sigma = (s * s - s ** -2) / q_minus_qinv(ctx)
    phi = PhiMap(action, {
        "K": cell.scalar_element(s.inverse()),
        "Ki": cell.scalar_element(s),
        "X+": zb.scale(-s.inverse() * bracket_sigma),
        "X-": cell.zero(),
    })
    return Sl2Instance(ctx, sigma, g, rels, cell, action, phi, cert, TwistedAction(phi))


def closed_forms(inst: Sl2Instance, n: int) -> dict:
    """Expected twisted action of each generator on ``zb^n``."""
    ctx = inst.ctx
    s = inst.s()
    z = inst.cell.gen("zb")
    if inst.sigma is None:
        shifted = qnum_shifted(n, "s", ctx)
    else:
        shifted = ScalarFraction(qnum(n - inst.sigma, ctx))
    lower = (z ** (n - 1)).scale(-s * qnum(n, ctx)) if n > 0 else inst.cell.zero()
    return {
        "K": (z ** n).scale(s.inverse() * ctx.q(n)),
        "Ki": (z ** n).scale(s * ctx.q(-n)),
        "X+": (z ** (n + 1)).scale(s.inverse() * shifted),
        "X-": lower,
    }


def verify_eq35(inst: Sl2Instance, n_max: int = 8) -> list:
    recs = []
    for n in range(n_max + 1):
        want = closed_forms(inst, n)
        f = inst.zbar(n)
        for name in NAMES:
            got = inst.twisted.act_gen(inst.generators.index[name], f)
            ok = got == want[name]
            recs.append(CheckRecord(f"sl2-closed-form[{name}|zb^{n}]", "twisted action on zb^n", ok,
                                    "" if ok else f"got {got.render()} expected {want[name].render()}"))
    return recs


def check_sl2_phi(inst: Sl2Instance) -> list:
    return check_phi_relations(inst.phi, inst.relations, inst.certificate)


def build_rep(sigma: int, dim_cutoff: int = 64):
    inst = load_sl2(sigma)
    return inst, build_cyclic_submodule(inst.twisted, dim_cutoff)
