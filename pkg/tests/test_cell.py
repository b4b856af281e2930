import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qorbit.cell import BaseAction, CellAlgebra, CPolynomial, MissingActionEntry, RewriteError
from qorbit.instances.frt import cell_names, frt_cell, zname
from qorbit.rmatrix import build_a_series
from qorbit.scalars import ParameterContext, ScalarFraction, qnum
from qorbit.suites import probes, random_poly

from conftest import same


@pytest.fixture(scope="module")
def a2cell():
    ctx = ParameterContext(("v",), 2)
    return frt_cell(3, build_a_series(3, ctx))


def test_normalize_examples(sl2):
    zb = sl2.cell.gen("zb")
    assert sl2.cell.normalize({(0, 0): sl2.cell._one_scalar()}) == zb ** 2
    assert sl2.cell.normalize({(): sl2.cell._one_scalar()}) == sl2.cell.one()


def test_a2_rule_from_entry_identity(a2cell):
    """Entry ((2,3),(1,2)) of the cell identity reads q z23 z12 = z12 z23 + (q - q^-1) z13."""
    c, ctx = a2cell, a2cell.ctx
    z12, z13, z23 = (c.gen(zname(*p)) for p in ((0, 1), (0, 2), (1, 2)))
    q = ScalarFraction(ctx.q(1))
    assert z23 * z12 == (z12 * z23).scale(q.inverse()) + z13.scale(1 - q ** -2)
    assert z13 * z12 == (z12 * z13).scale(q)
    assert z23 * z13 == (z13 * z23).scale(q)


def test_a2_rules_are_quadratic_and_decreasing(a2cell):
    from qorbit.free import word_key
    for lhs, rhs in a2cell.rules.items():
        assert len(lhs) == 2
        assert all(word_key(w) < word_key(lhs) for w in rhs)


@pytest.mark.parametrize("w", [(2, 1, 0), (2, 2, 1, 0), (1, 0, 2, 1)])
def test_normalize_idempotent(a2cell, w):
    f = a2cell.normalize({w: a2cell._one_scalar()})
    assert a2cell.normalize(f.terms) == f
    assert all(a2cell.is_normal(m) for m in f.terms)
    assert max(len(m) for m in f.terms) <= len(w)


def test_confluence_examples(sl2, a2cell):
    assert all(r.ok for r in sl2.cell.confluence_probe(3))
    recs = a2cell.confluence_probe(3)
    assert recs and all(r.ok for r in recs)


def test_confluence_negative_control(a2cell):
    rules = dict(a2cell.rules)
    lhs = next(iter(sorted(rules)))
    rules[lhs] = {w: c * 2 for w, c in rules[lhs].items()}
    bad = CellAlgebra(a2cell.names, a2cell.ctx, rules)
    assert not all(r.ok for r in bad.confluence_probe(3))


def test_rule_orientation_guard():
    ctx = ParameterContext(("v",), 2)
    with pytest.raises(RewriteError):
        CellAlgebra(("a", "b"), ctx, {(0, 1): {(1, 0): ScalarFraction(ctx.one())}})


def test_step_budget():
    ctx = ParameterContext(("v",), 2)
    one = ScalarFraction(ctx.one())
    c = CellAlgebra(("a", "b"), ctx, {(1, 0): {(0, 1): one, (0, 0): one}}, step_budget=5)
    with pytest.raises(RewriteError):
        c.normalize({(1,) * 6 + (0,) * 6: one})


def test_from_relations_reports_bad_entry():
    ctx = ParameterContext(("v",), 2)
    one = ScalarFraction(ctx.one())
    with pytest.raises(RewriteError):
        CellAlgebra.from_relations(("a",), ctx, [{(0,): one, (): one}], ["linear"])


def test_cell_json_round_trip(a2cell):
    back = CellAlgebra.from_json(a2cell.to_json())
    assert back.rules == a2cell.rules and back.names == a2cell.names


# ---------------------------------------------------------------------------
# base action on the sl2 cell

def test_act_examples(sl2):
    g, ctx = sl2.generators, sl2.ctx
    z = sl2.cell.gen("zb")
    assert sl2.action.act(g.gen("X+"), z) == z ** 2
    assert sl2.action.act(g.gen("K"), z ** 3) == (z ** 3).scale(ctx.q(3))
    assert sl2.action.act(g.gen("X-"), sl2.cell.one()).is_zero()


@pytest.mark.parametrize("n", range(0, 7))
def test_act_matches_closed_form(sl2, n):
    g, ctx, cell = sl2.generators, sl2.ctx, sl2.cell
    z = cell.gen("zb")
    f = z ** n
    assert sl2.action.act(g.gen("K"), f) == f.scale(ctx.q(n))
    assert sl2.action.act(g.gen("Ki"), f) == f.scale(ctx.q(-n))
    assert sl2.action.act(g.gen("X+"), f) == (z ** (n + 1)).scale(qnum(n, ctx))
    want = (z ** (n - 1)).scale(-qnum(n, ctx)) if n else cell.zero()
    assert sl2.action.act(g.gen("X-"), f) == want


def test_unit_axiom(sl2, frt3, adj2):
    for inst in (sl2, frt3, adj2):
        assert all(r.ok for r in inst.action.check_unit())


def test_module_law_examples(sl2):
    g = sl2.generators
    z = sl2.cell.gen("zb")
    samples = [(g.parse_word("X+"), g.parse_word("X-"), z), ((), g.parse_word("X+ K"), z ** 2)]
    assert all(r.ok for r in sl2.action.check_module_law(samples))


def test_module_law_random(sl2):
    rng = random.Random(1)
    g = sl2.generators
    samples = []
    for _ in range(100):
        x = tuple(rng.randrange(4) for _ in range(rng.randint(0, 2)))
        y = tuple(rng.randrange(4) for _ in range(rng.randint(0, 2)))
        samples.append((x, y, sl2.cell.gen("zb") ** rng.randint(0, 4)))
    recs = sl2.action.check_module_law(samples)
    assert len(recs) == 100 and all(r.ok for r in recs)


def test_relations_kill(sl2, frt3):
    z = sl2.cell.gen("zb")
    assert all(r.ok for r in sl2.action.check_relations_kill(sl2.relations, [z ** n for n in range(6)]))
    assert all(r.ok for r in frt3.action.check_relations_kill(frt3.relations, probes(frt3.cell, 2)))


def test_relations_kill_negative_control(sl2):
    g = sl2.generators
    recs = sl2.action.check_relations_kill([g.gen("X-") * g.gen("X+")], [sl2.cell.gen("zb")])
    assert not recs[0].ok


def test_action_respects_cell(frt3):
    assert all(r.ok for r in frt3.action.check_respects_cell())


def test_missing_entry(sl2):
    with pytest.raises(MissingActionEntry):
        BaseAction(sl2.generators, sl2.cell, {("K", "zb"): sl2.cell.gen("zb")}).act_gen(2, sl2.cell.gen("zb"))


@settings(max_examples=60)
@given(st.integers(0, 2 ** 31))
def test_leibniz_consistency_a2(seed):
    inst = _frt3_cached()
    rng = random.Random(seed)
    x = rng.randrange(len(inst.generators.names))
    f, g = random_poly(rng, inst.cell, 3, 1), random_poly(rng, inst.cell, 3, 1)
    lhs, rhs = inst.action.leibniz_sides(x, f, g)
    assert lhs == rhs


_CACHE = {}


def _frt3_cached():
    if "frt3" not in _CACHE:
        from qorbit.instances.frt import load_frt
        _CACHE["frt3"] = load_frt(3, certify=False)
    return _CACHE["frt3"]
