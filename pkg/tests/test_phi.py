import random

import pytest
import sympy as sp

from qorbit.free import all_words
from qorbit.instances.sl2 import build_rep, load_sl2
from qorbit.linalg import nullspace
from qorbit.matrices import Matrix
from qorbit.phi import (CertificateRequired, PhiMap, RepMatrixSet, TwistedAction, build_cyclic_submodule,
                        check_phi_relations, intertwiner)
from qorbit.scalars import ParameterContext, ScalarFraction
from qorbit.suites import leibniz_samples, module_samples, sl2_bundle

from conftest import Q, qn, same, sym

S = sym("s")
BRACKET_SIGMA = (S ** 2 - S ** -2) / (Q - 1 / Q)


def shifted(n):
    """``[n - σ]`` with ``s = q^{σ/2}``."""
    return (Q ** n * S ** -2 - Q ** -n * S ** 2) / (Q - 1 / Q)


def coeff(f, n):
    return f.terms[(0,) * n]


def test_extend_phi_examples(sl2):
    w = sl2.generators.parse_word("X+ X+")
    v = sl2.phi.extend_word(w)
    assert list(v.terms) == [(0, 0)]
    assert same(coeff(v, 2), -BRACKET_SIGMA + Q * S ** -2 * BRACKET_SIGMA ** 2)
    assert same(coeff(v, 2), -S ** -2 * BRACKET_SIGMA * shifted(1))
    one = load_sl2(1)
    assert one.phi.extend_word(w).is_zero()
    assert sl2.phi.extend_word(()) == sl2.cell.one()


def test_phi_relations(sl2, frt2):
    assert all(r.ok for r in check_phi_relations(sl2.phi, sl2.relations, sl2.certificate))
    assert all(r.ok for r in check_phi_relations(frt2.phi, frt2.relations, frt2.certificate))


def test_phi_relations_negative_control(sl2):
    vals = {i: v for i, v in sl2.phi.values.items()}
    vals[sl2.generators.index["X-"]] = sl2.cell.gen("zb")
    bad = PhiMap(sl2.action, vals)
    recs = check_phi_relations(bad, sl2.relations, sl2.certificate)
    assert not all(r.ok for r in recs)


def test_phi_relations_refuses_without_certificate(sl2):
    with pytest.raises(CertificateRequired):
        check_phi_relations(sl2.phi, sl2.relations, None)
    extra = sl2.relations + [sl2.generators.gen("X+") * sl2.generators.gen("X+")]
    with pytest.raises(CertificateRequired):
        check_phi_relations(sl2.phi, extra, sl2.certificate)


@pytest.mark.parametrize("n", range(0, 6))
def test_twisted_act_formal(sl2, n):
    z = sl2.cell.gen("zb")
    g = sl2.generators
    got = sl2.twisted.act(g.gen("X+"), z ** n)
    assert same(coeff(got, n + 1), S ** -1 * shifted(n))
    got = sl2.twisted.act(g.gen("K"), z ** n)
    assert same(coeff(got, n), Q ** n / S)


def test_twisted_act_examples(sl2):
    assert sl2.twisted.act(sl2.generators.gen("X-"), sl2.cell.one()).is_zero()


def test_trivial_character_recovers_base(sl2):
    tw = TwistedAction(PhiMap.trivial(sl2.action))
    rng = random.Random(5)
    for _ in range(50):
        w = tuple(rng.randrange(4) for _ in range(rng.randint(1, 3)))
        f = sl2.cell.gen("zb") ** rng.randint(0, 4)
        assert tw.act_word(w, f) == sl2.action.act_word(w, f)


@pytest.mark.parametrize("sigma,dim", [(0, 1), (1, 2), (3, 4)])
def test_cyclic_submodule_examples(sigma, dim):
    _, mod = build_rep(sigma)
    assert mod.dim == dim and not mod.infinite
    assert [b.render() for b in mod.basis][:2] == ["1", "zb"][:dim]


def test_cyclic_submodule_infinite_flag(sl2):
    mod = build_cyclic_submodule(sl2.twisted, dim_cutoff=6)
    assert mod.infinite and mod.matrices is None
    _, mod = build_rep(9, dim_cutoff=5)
    assert mod.infinite


def test_generalized_leibniz_examples():
    inst = load_sl2(2)
    z = inst.cell.gen("zb")
    g = inst.generators
    samples = [(g.parse_word("X+"), z, z), ((), z, z ** 2)]
    assert all(r.ok for r in inst.twisted.check_generalized_leibniz(samples))


def test_generalized_leibniz_random(sl2):
    b = sl2_bundle()
    recs = b.twisted.check_generalized_leibniz(leibniz_samples(random.Random(2), b, 100))
    assert len(recs) == 100 and all(r.ok for r in recs)


def test_twisted_module_law_examples():
    inst = load_sl2(1)
    g = inst.generators
    z = inst.cell.gen("zb")
    xp = g.parse_word("X+")
    assert inst.twisted.act_word(xp, inst.twisted.act_word(xp, inst.cell.one())).is_zero()
    assert inst.twisted.act_word_direct(xp + xp, inst.cell.one()).is_zero()
    k, ki = g.parse_word("K"), g.parse_word("Ki")
    for n in range(4):
        assert inst.twisted.act_word(k, inst.twisted.act_word(ki, z ** n)) == z ** n
    recs = inst.twisted.check_module_law([(k, ki, z ** 3), (xp, xp, inst.cell.one())])
    assert all(r.ok for r in recs)


def test_twisted_module_law_random(sl2):
    b = sl2_bundle()
    recs = b.twisted.check_module_law(module_samples(random.Random(3), b, 100))
    assert all(r.ok for r in recs)


def test_relations_act_as_zero(sl2):
    z = sl2.cell.gen("zb")
    recs = sl2.twisted.check_relations_kill(sl2.relations, [z ** n for n in range(5)])
    assert all(r.ok for r in recs)


def test_lemma2_splits_all_words(sl2):
    recs = sl2.phi.check_splits(list(all_words(4, 4)))
    assert recs and all(r.ok for r in recs)


def test_unit_images(sl2):
    assert all(r.ok for r in sl2.twisted.check_unit_images(all_words(4, 3)))


@pytest.mark.parametrize("sigma", range(5))
def test_rep_relations_vanish(sigma):
    inst, mod = build_rep(sigma)
    for r in mod.matrices.relation_residuals(inst.relations):
        assert r.is_zero()


def test_rep_json_round_trip():
    _, mod = build_rep(2)
    data = mod.matrices.to_json()
    back = RepMatrixSet.from_json(data)
    assert back.to_json() == data
    for n in mod.matrices.names:
        assert back.matrices[n] == mod.matrices.matrices[n]


def test_nullspace():
    ctx = ParameterContext(("v",), 2)
    one = ScalarFraction(ctx.one())
    q = ScalarFraction(ctx.q(1))
    basis = nullspace([{"a": one, "b": -q}, {"b": one, "c": -q}], ["a", "b", "c"], one)
    assert len(basis) == 1
    x = basis[0]
    assert x["a"] == q * q * x["c"] and x["b"] == q * x["c"]


def test_intertwiner_finds_basis_change():
    _, mod = build_rep(2)
    rep = mod.matrices
    d = rep.dim
    one = rep.one()
    T = Matrix.from_dense([[one if i == j else (one + one if (i, j) == (0, 2) else None)
                            for j in range(d)] for i in range(d)])
    Ti = Matrix.from_dense([[one if i == j else (-(one + one) if (i, j) == (0, 2) else None)
                             for j in range(d)] for i in range(d)])
    images = {n: Ti @ m @ T for n, m in rep.matrices.items()}
    S = intertwiner(rep, images)
    assert S is not None
    for n, m in rep.matrices.items():
        assert m @ S == S @ images[n]
    images["X+"] = images["X+"].scale(2)
    assert intertwiner(rep, images) is None
