import dataclasses
import random

import pytest

from qorbit.instances.frt import (NotUnipotent, build_frt_rep, d_entry, invert_unipotent, lname, load_frt,
                                  verify_eq52, zname, zstar_matrix)
from qorbit.matrices import Matrix, identity
from qorbit.phi import PhiMap
from qorbit.scalars import ScalarFraction, q_minus_qinv
from qorbit.suites import module_samples, probes, frt_bundle


def weyl_dim_sl3(a, b):
    return (a + 1) * (b + 1) * (a + b + 2) // 2


def test_invert_unipotent_n2(frt2):
    Zi = invert_unipotent(frt2.zstar(), frt2.cell.one())
    assert Zi.get(1, 0) == -frt2.cell.gen(zname(0, 1))


def test_invert_unipotent_n3_upper_and_lower(frt3):
    c = frt3.cell
    z12, z13, z23 = (c.gen(zname(*p)) for p in ((0, 1), (0, 2), (1, 2)))
    upper = Matrix(3, 3, {0: {0: c.one(), 1: z12, 2: z13}, 1: {1: c.one(), 2: z23}, 2: {2: c.one()}})
    assert invert_unipotent(upper, c.one()).get(0, 2) == -z13 + z12 * z23
    lower = frt3.zstar()
    assert invert_unipotent(lower, c.one()).get(2, 0) == -z13 + z23 * z12


@pytest.mark.parametrize("n", [2, 3])
def test_unipotent_two_sided(n, frt2, frt3):
    inst = {2: frt2, 3: frt3}[n]
    Z = inst.zstar()
    Zi = invert_unipotent(Z, inst.cell.one())
    ident = identity(n, inst.cell.one())
    assert Z @ Zi == ident and Zi @ Z == ident


def test_invert_unipotent_rejects(frt2):
    c = frt2.cell
    Z = Matrix(2, 2, {0: {0: c.one().scale(2)}, 1: {1: c.one()}})
    with pytest.raises(NotUnipotent):
        invert_unipotent(Z, c.one())
    full = Matrix(2, 2, {0: {0: c.one(), 1: c.gen(zname(0, 1))}, 1: {0: c.gen(zname(0, 1)), 1: c.one()}})
    with pytest.raises(NotUnipotent):
        invert_unipotent(full, c.one())


def test_action_n2_hand_values(frt2):
    ctx, c, g = frt2.ctx, frt2.cell, frt2.generators
    z = c.gen(zname(0, 1))
    h = ScalarFraction(q_minus_qinv(ctx))
    act = lambda name, f: frt2.action.act(g.gen(name), f)
    assert act("L+_{11}", z) == z.scale(ctx.q(1))
    assert act("L+_{22}", z) == z.scale(ctx.q(-1))
    assert act("L+_{12}", z) == c.scalar_element(-h)
    assert act("L-_{21}", z) == (z * z).scale(-h)
    assert act("L-_{11}", z) == z.scale(ctx.q(-1))


@pytest.mark.parametrize("n", [2, 3])
def test_load_checks(n, frt2, frt3):
    inst = {2: frt2, 3: frt3}[n]
    assert inst.certificate.ok and inst.certificate.verify()
    assert all(r.ok for r in inst.action_consistency)
    assert all(r.ok for r in inst.cell.confluence_probe(3))
    assert all(r.ok for r in inst.action.check_respects_cell())
    assert len(inst.generators.names) == n * (n + 1)


def test_coproduct_and_counit(frt2):
    g = frt2.generators
    d = g.coproduct_word(g.parse_word("L+_{11}"))
    assert list(d.terms) == [(g.parse_word("L+_{11}"), g.parse_word("L+_{11}"))]
    d = g.coproduct_word(g.parse_word("L+_{12}"))
    assert set(d.terms) == {(g.parse_word("L+_{11}"), g.parse_word("L+_{12}")),
                            (g.parse_word("L+_{12}"), g.parse_word("L+_{22}"))}
    for i, name in enumerate(g.names):
        diag = name[-3] == name[-2]
        assert g.epsilon[i] == (1 if diag else 0)


@pytest.mark.parametrize("n", [2, 3])
def test_eq52(n, frt2, frt3):
    inst = {2: frt2, 3: frt3}[n]
    recs = verify_eq52(inst)
    assert all(r.ok for r in recs), [r for r in recs if not r.ok][:2]
    assert sum(1 for r in recs if r.id.startswith("phi-quadratic")) == 4


def test_eq52_examples(frt2):
    g, ctx = frt2.generators, frt2.ctx
    d1, d2 = frt2.d(0), frt2.d(1)
    assert (d1 * d2).is_one()
    v = frt2.phi.extend_word(g.parse_word("L+_{11} L+_{22}"))
    assert v == frt2.cell.scalar_element((d1 * d2).inverse())
    v = frt2.phi.extend_word(g.parse_word("L+_{11} L+_{11}"))
    assert v == frt2.cell.scalar_element(d1 ** -2)


def test_eq52_negative_control(frt2):
    vals = dict(frt2.phi.values)
    vals[frt2.generators.index["L+_{12}"]] = frt2.cell.gen(zname(0, 1))
    bad = dataclasses.replace(frt2, phi=PhiMap(frt2.action, vals))
    assert not all(r.ok for r in verify_eq52(bad))


def test_diag_lplus_on_unit_is_dinv(frt3):
    g, one = frt3.generators, frt3.cell.one()
    for i in range(3):
        got = frt3.twisted.act(g.gen(lname("+", i, i)), one)
        assert got == one.scale(frt3.d(i).inverse())
    for i in range(3):
        for j in range(i + 1, 3):
            assert frt3.twisted.act(g.gen(lname("+", i, j)), one).is_zero()


def test_eq45_vacuous(frt3):
    assert frt3.structure.K.is_zero()


def test_twisted_module_law_n3():
    b = frt_bundle(3, certify=False)
    recs = b.twisted.check_module_law(module_samples(random.Random(4), b, 40))
    assert all(r.ok for r in recs)
    assert all(r.ok for r in b.twisted.check_relations_kill(b.relations[:20], probes(b.cell, 2)))


@pytest.mark.parametrize("m", range(4))
def test_rep_n2(m):
    inst, mod = build_frt_rep(2, (m,))
    assert mod.dim == m + 1
    if m == 0:
        g = inst.generators
        for x in ("L+_{12}", "L-_{21}"):
            assert mod.matrices.matrices[x].is_zero()


@pytest.mark.parametrize("weights", [(1, 0), (0, 1), (1, 1), (2, 0), (0, 0)])
def test_rep_n3_weyl_dimension(weights):
    inst, mod = build_frt_rep(3, weights)
    assert mod.dim == weyl_dim_sl3(*weights)
    for r in mod.matrices.relation_residuals(inst.relations):
        assert r.is_zero()


def test_weight_dictionary_n2():
    from qorbit.instances.frt import frt_context
    ctx = frt_context(2, (3,))
    d1, d2 = d_entry(ctx, 2, 0, (3,)), d_entry(ctx, 2, 1, (3,))
    assert d1 / d2 == ScalarFraction(ctx.q(3)) and (d1 * d2).is_one()


def test_bad_weights():
    with pytest.raises(ValueError):
        load_frt(3, (1,))
    with pytest.raises(ValueError):
        load_frt(2, (-1,))
