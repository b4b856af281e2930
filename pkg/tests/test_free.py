import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qorbit.free import (FreeElement, GeneratorSet, TensorElement, all_words, check_coassociativity,
                         coideal_certificate, coproduct, counit, multiply)
from qorbit.instances.sl2 import sl2_generators, sl2_relations
from qorbit.scalars import ParameterContext, ScalarFraction

CTX = ParameterContext(("v",), 2)
G = sl2_generators(CTX)
K, Ki, Xp, Xm = (G.gen(n) for n in ("K", "Ki", "X+", "X-"))


def tensor(*terms):
    out = {}
    for c, a, b in terms:
        out[(G.parse_word(a), G.parse_word(b))] = ScalarFraction.coerce(c, CTX)
    return TensorElement(G, 2, out)


def test_multiply_examples():
    assert multiply(Xp, Xm) == G.word("X+", "X-")
    w = G.word("X-", "K", "X+")
    assert multiply(G.one(), w) == w and multiply(w, G.one()) == w
    assert (Xp + Xm) * Xp == G.word("X+", "X+") + G.word("X-", "X+")


def test_coproduct_examples():
    assert coproduct(Xp) == tensor((1, "X+", "Ki"), (1, "K", "X+"))
    assert coproduct(G.one()) == tensor((1, "", ""))
    assert coproduct(K * K) == tensor((1, "K K", "K K"))


def test_counit_examples():
    assert counit(Xp * Xm).is_zero()
    assert counit(G.one()).is_one()
    assert counit(K + Xp).is_one()


def test_coassociativity_examples():
    assert all(r.ok for r in check_coassociativity(G, [G.parse_word("X+")]))
    assert all(r.ok for r in check_coassociativity(G, [()]))
    recs = check_coassociativity(G, all_words(4, 3))
    assert len(recs) == 1 + 4 + 16 + 64 and all(r.ok for r in recs)


def test_coassociativity_negative_control():
    bad = GeneratorSet(("a", "b"), CTX, delta={"a": [(1, "a", "b")], "b": [(1, None, "b"), (1, "b", "a")]},
                       epsilon={"a": 1, "b": 1})
    assert not all(r.ok for r in check_coassociativity(bad, [(0,), (1,)]))


def test_validate_shape_and_counit():
    G.validate()
    bad = GeneratorSet(("a",), CTX, delta={"a": [(1, "a", None)]}, epsilon={"a": 1})
    with pytest.raises(ValueError):
        bad.validate()


def test_coideal_examples():
    rels = sl2_relations(G)
    cert = coideal_certificate([K * Ki - G.one()])
    assert cert.ok and cert.verify()
    assert coideal_certificate([Xp]).ok
    cert = coideal_certificate(rels)
    assert cert.ok and cert.verify()


def test_coideal_negative_control():
    cert = coideal_certificate([Xp * Xp - K])
    assert not cert.ok and cert.failures == [0]
    assert not cert.verify()


def test_parse_render_round_trip():
    x = G.parse("X+ X- - (q)*X- X+ + 1")
    assert x == Xp * Xm - (Xm * Xp).scale(CTX.q(1)) + G.one()
    assert G.parse(x.render()) == x
    with pytest.raises(ValueError):
        G.parse("X+ Y")


# ---------------------------------------------------------------------------
# properties

word = st.lists(st.integers(0, 3), max_size=3).map(tuple)
coef = st.integers(-3, 3)
element = st.dictionaries(word, coef, max_size=3).map(
    lambda d: FreeElement(G, {w: ScalarFraction.coerce(c, CTX) for w, c in d.items() if c}))


@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_grading(m, n, data):
    a = data.draw(st.lists(st.integers(0, 3), min_size=m, max_size=m).map(tuple))
    b = data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n).map(tuple))
    x, y = FreeElement(G, {a: ScalarFraction(CTX.q(1))}), FreeElement(G, {b: ScalarFraction(CTX.const(2))})
    assert all(len(w) == m + n for w in (x * y).terms)


@settings(max_examples=100)
@given(word, word)
def test_coproduct_is_multiplicative(a, b):
    x, y = FreeElement(G, {a: ScalarFraction(CTX.one())}), FreeElement(G, {b: ScalarFraction(CTX.one())})
    assert coproduct(x * y) == coproduct(x) * coproduct(y)


@settings(max_examples=100)
@given(element, element)
def test_counit_is_multiplicative(x, y):
    assert counit(x * y) == counit(x) * counit(y)


@pytest.mark.parametrize("w", list(all_words(4, 3)))
def test_counit_axiom_on_words(w):
    d = G.coproduct_word(w)
    left, right = G.zero(), G.zero()
    for (a, b), c in d.terms.items():
        left = left + FreeElement(G, {b: c * G.counit_word(a)})
        right = right + FreeElement(G, {a: c * G.counit_word(b)})
    x = FreeElement(G, {w: ScalarFraction(CTX.one())})
    assert left == x and right == x


@given(element)
def test_render_parse_property(x):
    assert G.parse(x.render()) == x
