"""The module algebra: a word-rewriting presentation plus a Leibniz-extended action.

A :class:`CellAlgebra` is given by rules ``lhs word -> combination of
smaller words`` (degree-then-lex order).  Normal forms are words without
any rule left-hand side as a subword.  A :class:`BaseAction` stores the
action of each algebra generator on each cell generator and extends it
to all of the cell algebra through the coproduct.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

from .free import (CheckRecord, FreeElement, GeneratorSet, WordCombination, _add_into, all_words,
                   parse_combination, render_word, word_key)
from .linalg import EchelonBasis
from .scalars import ParameterContext, ScalarFraction


class RewriteError(RuntimeError):
    """Bad rule set: non-terminating orientation or exhausted step budget."""


class CPolynomial(WordCombination):
    """Element of the cell algebra in normal form."""

    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, CPolynomial):
            self._check(other)
            return self.parent.mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n: int):
        out = self.parent.one()
        for _ in range(n):
            out = out * self
        return out

    def to_json(self) -> list:
        return [{"word": [self.parent.names[i] for i in w], "coeff": c.to_json()}
                for w, c in sorted(self.terms.items(), key=lambda kv: word_key(kv[0]))]


class CellAlgebra:
    def __init__(self, names: Sequence[str], ctx: ParameterContext, rules: Mapping | None = None,
                 step_budget: int = 1_000_000):
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.ctx = ctx
        self.step_budget = step_budget
        self.rules: dict = {}
        for lhs, rhs in (rules or {}).items():
            self.rules[tuple(lhs)] = {tuple(w): ScalarFraction.coerce(c, ctx) for w, c in rhs.items()}
        self._lhs_lengths = sorted({len(l) for l in self.rules})
        self._memo = {"left": {}, "right": {}}
        self._steps = 0
        self._check_orientation()

    def _check_orientation(self):
        for lhs, rhs in self.rules.items():
            if len(lhs) < 2:
                raise RewriteError(f"rule with left-hand side {render_word(lhs, self.names)!r} is not a product")
            for w in rhs:
                if word_key(w) >= word_key(lhs):
                    raise RewriteError(
                        f"rule {render_word(lhs, self.names)} -> ... contains the non-smaller word "
                        f"{render_word(w, self.names)}")

    # elements ---------------------------------------------------------
    def _one_scalar(self):
        return ScalarFraction(self.ctx.one())

    def one(self) -> CPolynomial:
        return CPolynomial(self, {(): self._one_scalar()})

    def zero(self) -> CPolynomial:
        return CPolynomial(self, {})

    def gen(self, name: str) -> CPolynomial:
        return CPolynomial(self, {(self.index[name],): self._one_scalar()})

    def scalar_element(self, c) -> CPolynomial:
        return CPolynomial(self, {(): ScalarFraction.coerce(c, self.ctx)})

    def monomial(self, word: Sequence[int]) -> CPolynomial:
        return self.normalize({tuple(word): self._one_scalar()})

    def parse(self, text: str) -> CPolynomial:
        return self.normalize(parse_combination(text, self.names, self.ctx))

    # rewriting --------------------------------------------------------
    def find_redex(self, w: tuple, strategy: str = "left"):
        positions = range(len(w)) if strategy == "left" else range(len(w) - 1, -1, -1)
        for i in positions:
            for L in self._lhs_lengths:
                if i + L <= len(w) and w[i:i + L] in self.rules:
                    return i, L
        return None

    def redexes(self, w: tuple) -> list:
        return [(i, L) for i in range(len(w)) for L in self._lhs_lengths
                if i + L <= len(w) and w[i:i + L] in self.rules]

    def is_normal(self, w: tuple) -> bool:
        return self.find_redex(w) is None

    def rewrite_at(self, w: tuple, i: int, L: int) -> dict:
        a, b = w[:i], w[i + L:]
        return {a + r + b: c for r, c in self.rules[w[i:i + L]].items()}

    def normal_form(self, w: tuple, strategy: str = "left") -> dict:
        memo = self._memo[strategy]
        hit = memo.get(w)
        if hit is not None:
            return hit
        red = self.find_redex(w, strategy)
        if red is None:
            out = {w: self._one_scalar()}
        else:
            self._steps += 1
            if self._steps > self.step_budget:
                raise RewriteError("rewriting step budget exhausted")
            out = {}
            for u, c in self.rewrite_at(w, *red).items():
                for x, cx in self.normal_form(u, strategy).items():
                    _add_into(out, x, c * cx)
        memo[w] = out
        return out

    def normalize(self, terms: Mapping, strategy: str = "left") -> CPolynomial:
        out: dict = {}
        for w, c in terms.items():
            for x, cx in self.normal_form(tuple(w), strategy).items():
                _add_into(out, x, c * cx)
        return CPolynomial(self, out)

    def mul(self, a: CPolynomial, b: CPolynomial) -> CPolynomial:
        out: dict = {}
        for wa, ca in a.terms.items():
            for wb, cb in b.terms.items():
                c = ca * cb
                for x, cx in self.normal_form(wa + wb).items():
                    _add_into(out, x, c * cx)
        return CPolynomial(self, out)

    def normal_words(self, max_degree: int) -> list:
        return [w for w in all_words(len(self.names), max_degree) if self.is_normal(w)]

    def confluence_probe(self, max_degree: int = 3) -> list:
        """Compare normal forms reached by different rewriting orders on every word up to ``max_degree``.

        For each word: leftmost vs rightmost complete strategies, and every
        single first step followed by leftmost normalization.
        """
        records = []
        for w in all_words(len(self.names), max_degree):
            reds = self.redexes(w)
            if not reds:
                continue
            ref = self.normalize({w: self._one_scalar()}, "left")
            results = [("rightmost", self.normalize({w: self._one_scalar()}, "right"))]
            for i, L in reds:
                results.append((f"step@{i}", self.normalize(self.rewrite_at(w, i, L), "left")))
            bad = [(tag, r) for tag, r in results if r != ref]
            witness = ""
            if bad:
                tag, r = bad[0]
                witness = f"{render_word(w, self.names)}: leftmost {ref.render()} vs {tag} {r.render()}"
            records.append(CheckRecord(f"confluence[{render_word(w, self.names)}]",
                                       "rewriting normal forms agree", not bad, witness))
        if not records:
            records.append(CheckRecord("confluence[vacuous]", "rewriting normal forms agree", True))
        return records

    # construction from relations --------------------------------------
    @classmethod
    def from_relations(cls, names: Sequence[str], ctx: ParameterContext, relations: Iterable[Mapping],
                       labels: Sequence[str] | None = None) -> CellAlgebra:
        """Orient linear identities among raw words into rules.

        Row-reduces the identities with columns in descending degree-then-lex
        order; each pivot becomes a rule ``pivot -> -(rest)``.  A pivot of
        length below two is reported as an error naming the identity.
        """
        rels = [{tuple(w): ScalarFraction.coerce(c, ctx) for w, c in r.items()} for r in relations]
        labels = list(labels) if labels is not None else [f"relation {i}" for i in range(len(rels))]
        eb = EchelonBasis(pick=lambda vec: max(vec, key=word_key))
        for r, lbl in zip(rels, labels):
            if r:
                eb.add(r, label=lbl)
        # full back-substitution so rule right-hand sides avoid other pivots
        order = sorted(range(len(eb.rows)), key=lambda i: word_key(eb.pivots[i]))
        rows = {eb.pivots[i]: dict(eb.rows[i]) for i in order}
        from .linalg import axpy
        for p in sorted(rows, key=word_key):
            for q, row in rows.items():
                if q != p and p in row:
                    axpy(row, -row[p], rows[p])
        rules = {}
        for p, row in rows.items():
            if len(p) < 2:
                src = eb.combos[eb.pivots.index(p)]
                raise RewriteError(f"identity {sorted(src)} has leading word {render_word(p, names)!r} of length < 2")
            rules[p] = {w: -c for w, c in row.items() if w != p}
        return cls(names, ctx, rules)

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "version": 1,
            "context": self.ctx.to_json(),
            "generators": list(self.names),
            "rules": [
                {"lhs": list(lhs), "rhs": [{"word": list(w), "coeff": c.to_json()}
                                           for w, c in sorted(rhs.items(), key=lambda kv: word_key(kv[0]))]}
                for lhs, rhs in sorted(self.rules.items(), key=lambda kv: word_key(kv[0]))
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> CellAlgebra:
        ctx = ParameterContext.from_json(data["context"])
        rules = {}
        for r in data["rules"]:
            rules[tuple(r["lhs"])] = {tuple(t["word"]): ScalarFraction.from_json(ctx, t["coeff"]) for t in r["rhs"]}
        return cls(data["generators"], ctx, rules)


class MissingActionEntry(KeyError):
    pass


class BaseAction:
    """Left action of the free algebra on a cell algebra, from a generator table.

    ``table[(x, c)]`` is the action of algebra generator ``x`` on cell
    generator ``c``.  The unit is acted on through the counit; products
    through the coproduct (Leibniz rule); words by composition, rightmost
    letter first.
    """

    def __init__(self, generators: GeneratorSet, cell: CellAlgebra, table: Mapping):
        if generators.ctx != cell.ctx:
            raise ValueError("generator set and cell algebra use different contexts")
        self.generators = generators
        self.cell = cell
        self.ctx = cell.ctx
        self.table: dict = {}
        for (x, c), val in table.items():
            xi = generators.index[x] if isinstance(x, str) else x
            ci = cell.index[c] if isinstance(c, str) else c
            if not isinstance(val, CPolynomial):
                val = cell.scalar_element(val)
            self.table[(xi, ci)] = val
        self._memo: dict = {}
        self._raw_memo: dict = {}
        generators.validate()

    def _lookup(self, x: int, c: int) -> CPolynomial:
        try:
            return self.table[(x, c)]
        except KeyError:
            raise MissingActionEntry(
                f"no action of {self.generators.names[x]!r} on {self.cell.names[c]!r}") from None

    def act_gen_word(self, x: int, w: tuple) -> CPolynomial:
        """Action of generator ``x`` (or the unit, ``x is None``) on a normal word."""
        if x is None:
            return CPolynomial(self.cell, {w: self.cell._one_scalar()})
        key = (x, w)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not w:
            out = self.cell.scalar_element(self.generators.epsilon[x])
        elif len(w) == 1:
            out = self._lookup(x, w[0])
        else:
            out = self._leibniz(x, w, self.act_gen_word)
        self._memo[key] = out
        return out

    def _leibniz(self, x: int, w: tuple, recurse) -> CPolynomial:
        out = self.cell.zero()
        head, rest = w[0], w[1:]
        for (l, r), c in self.generators.delta[x].terms.items():
            a = l[0] if l else None
            b = r[0] if r else None
            left = CPolynomial(self.cell, {(head,): self.cell._one_scalar()}) if a is None else self._lookup(a, head)
            if left.is_zero():
                continue
            right = recurse(b, rest)
            if right.is_zero():
                continue
            out = out + (left * right).scale(c)
        return out

    def act_gen_raw(self, x, w: tuple) -> CPolynomial:
        """Action on a not necessarily normal cell word, computed letter by letter."""
        if x is None:
            return self.cell.monomial(w)
        key = (x, w)
        hit = self._raw_memo.get(key)
        if hit is not None:
            return hit
        if not w:
            out = self.cell.scalar_element(self.generators.epsilon[x])
        elif len(w) == 1:
            out = self._lookup(x, w[0])
        else:
            out = self._leibniz(x, w, self.act_gen_raw)
        self._raw_memo[key] = out
        return out

    def act_gen(self, x: int, f: CPolynomial) -> CPolynomial:
        out = self.cell.zero()
        for w, c in f.terms.items():
            out = out + self.act_gen_word(x, w).scale(c)
        return out

    def act_word(self, word: tuple, f: CPolynomial) -> CPolynomial:
        for x in reversed(word):
            f = self.act_gen(x, f)
            if f.is_zero():
                break
        return f

    def act(self, x: FreeElement, f: CPolynomial) -> CPolynomial:
        out = self.cell.zero()
        for w, c in x.terms.items():
            out = out + self.act_word(w, f).scale(c)
        return out

    def act_word_via_coproduct(self, word: tuple, f: CPolynomial) -> CPolynomial:
        """Action of a word computed through its full coproduct on each monomial.

        Independent of composition: ``ξ_w(c·m) = Σ (ξ_{w(1)} c)(ξ_{w(2)} m)``.
        """
        out = self.cell.zero()
        for m, coeff in f.terms.items():
            out = out + self._via_coproduct_mono(tuple(word), m).scale(coeff)
        return out

    def _via_coproduct_mono(self, word: tuple, m: tuple) -> CPolynomial:
        if not word:
            return CPolynomial(self.cell, {m: self.cell._one_scalar()})
        if not m:
            return self.cell.scalar_element(self.generators.counit_word(word))
        out = self.cell.zero()
        head, rest = m[0], m[1:]
        for (u, v), c in self.generators.coproduct_word(word).terms.items():
            left = self.act_word(u, self.cell.gen(self.cell.names[head]))
            if left.is_zero():
                continue
            right = self._via_coproduct_mono(v, rest)
            if right.is_zero():
                continue
            out = out + (left * right).scale(c)
        return out

    # checks -----------------------------------------------------------
    def check_unit(self) -> list:
        recs = []
        one = self.cell.one()
        for i, name in enumerate(self.generators.names):
            got = self.act_gen(i, one)
            want = one.scale(self.generators.epsilon[i])
            recs.append(CheckRecord(f"unit[{name}]", "action on the unit is the counit", got == want,
                                    "" if got == want else got.render()))
        return recs

    def check_respects_cell(self) -> list:
        """Every generator (and hence the whole algebra) maps each rewrite rule to zero."""
        recs = []
        for lhs, rhs in sorted(self.cell.rules.items(), key=lambda kv: word_key(kv[0])):
            for i, name in enumerate(self.generators.names):
                a = self.act_gen_raw(i, lhs)
                b = self.cell.zero()
                for w, c in rhs.items():
                    b = b + self.act_gen_raw(i, w).scale(c)
                ok = a == b
                recs.append(CheckRecord(f"cell-rule[{name}|{render_word(lhs, self.cell.names)}]",
                                        "action is well defined on the quotient", ok,
                                        "" if ok else (a - b).render()))
        return recs

    def check_module_law(self, samples: Iterable) -> list:
        """``ξ_x(ξ_y f)`` against the coproduct-driven action of the word ``xy``."""
        recs = []
        for x, y, f in samples:
            lhs = self.act_word(tuple(x), self.act_word(tuple(y), f))
            rhs = self.act_word_via_coproduct(tuple(x) + tuple(y), f)
            ok = lhs == rhs
            recs.append(CheckRecord(
                f"module-law[{self.generators.render_word(tuple(x))}|{self.generators.render_word(tuple(y))}|{f.render()}]",
                "composition of actions equals action of the product", ok, "" if ok else (lhs - rhs).render()))
        return recs

    def check_relations_kill(self, relations: Sequence[FreeElement], probes: Sequence[CPolynomial]) -> list:
        recs = []
        for k, r in enumerate(relations):
            for f in probes:
                got = self.act(r, f)
                recs.append(CheckRecord(f"kill[{k}|{f.render()}]", "relations act as zero", got.is_zero(),
                                        "" if got.is_zero() else f"{r.render()} on {f.render()} -> {got.render()}"))
        return recs

    def leibniz_sides(self, x: int, f: CPolynomial, g: CPolynomial):
        lhs = self.act_gen(x, f * g)
        rhs = self.cell.zero()
        for (l, r), c in self.generators.delta[x].terms.items():
            a = self.act_gen(l[0], f) if l else f
            b = self.act_gen(r[0], g) if r else g
            rhs = rhs + (a * b).scale(c)
        return lhs, rhs
