"""Free algebra on a generator set with a multiplicative coproduct and counit.

Words are tuples of generator indices; the empty tuple is the unit.
Linear combinations map words to :class:`ScalarFraction` coefficients.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .linalg import solve_combination
from .scalars import ParameterContext, ScalarFraction, parse_scalar

UNIT: tuple = ()


def word_key(w: tuple):
    """Length-then-lex order on words."""
    return (len(w), w)


def all_words(n_gens: int, max_len: int) -> Iterator[tuple]:
    for n in range(max_len + 1):
        yield from itertools.product(range(n_gens), repeat=n)


def _add_into(terms: dict, key, c: ScalarFraction) -> None:
    val = terms.get(key)
    val = c if val is None else val + c
    if val.is_zero():
        terms.pop(key, None)
    else:
        terms[key] = val


class GeneratorMismatch(ValueError):
    pass


class WordCombination:
    """Finite linear combination of words over a parent that knows names and context."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent, terms: Mapping | None = None):
        self.parent = parent
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero()}

    @property
    def ctx(self) -> ParameterContext:
        return self.parent.ctx

    def _new(self, terms):
        return type(self)(self.parent, terms)

    def _check(self, other):
        if other.parent is not self.parent:
            raise GeneratorMismatch("elements belong to different generator sets")

    def _scalar(self, c):
        return ScalarFraction.coerce(c, self.ctx)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, WordCombination):
            other = self.parent.scalar_element(other)
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            _add_into(out, w, c)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> WordCombination:
        c = self._scalar(c)
        if c.is_zero():
            return self._new({})
        return self._new({w: c * v for w, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, WordCombination):
            return self.parent is other.parent and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def coefficient(self, w: tuple) -> ScalarFraction:
        return self.terms.get(tuple(w), ScalarFraction(self.ctx.zero()))

    def support(self) -> list:
        return sorted(self.terms, key=word_key)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def homogeneous_components(self) -> dict:
        out: dict = {}
        for w, c in self.terms.items():
            out.setdefault(len(w), {})[w] = c
        return {n: self._new(t) for n, t in sorted(out.items())}

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self.terms}) <= 1

    def substitute(self, mapping, target_parent) -> WordCombination:
        return type(self)(target_parent, {w: c.substitute(mapping, target_parent.ctx) for w, c in self.terms.items()})

    def render(self) -> str:
        return render_combination(self.terms, self.parent.names)

    __str__ = render

    def __repr__(self):
        return f"{type(self).__name__}({self.render()!r})"


def render_word(w: tuple, names: Sequence[str]) -> str:
    return " ".join(names[i] for i in w) if w else "1"


def render_combination(terms: Mapping, names: Sequence[str]) -> str:
    if not terms:
        return "0"
    out = []
    for i, w in enumerate(sorted(terms, key=word_key)):
        c = terms[w]
        wt = render_word(w, names)
        sign = "+"
        if c.den.is_one() and c.num.leading()[1] < 0:
            sign, c = "-", -c
        body = wt if c.is_one() else f"({c.render()})*{wt}"
        if i == 0:
            out.append(body if sign == "+" else f"- {body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


def _split_top(text: str) -> list:
    toks, cur, depth = [], "", 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch.isspace() and depth == 0:
            if cur:
                toks.append(cur)
                cur = ""
        else:
            cur += ch
    if depth != 0:
        raise ValueError("unbalanced parentheses")
    if cur:
        toks.append(cur)
    return toks


def parse_combination(text: str, names: Sequence[str], ctx: ParameterContext) -> dict:
    """Parse ``"X+ X- - (q)*X- X+ + 1"`` style text into a term dict.

    ``+``/``-`` must stand alone as tokens; a scalar factor is written as
    ``(scalar)*`` directly in front of the first generator (or ``1``).
    """
    index = {n: i for i, n in enumerate(names)}
    terms: dict = {}
    toks = _split_top(text)
    if not toks:
        raise ValueError("empty expression")
    if toks == ["0"]:
        return terms
    sign, coeff, word, pending = 1, None, [], False

    def flush():
        c = ScalarFraction(ctx.const(sign))
        if coeff is not None:
            c = c * coeff
        _add_into(terms, tuple(word), c)

    for tok in toks:
        if tok in ("+", "-"):
            if pending:
                flush()
            elif terms or coeff is not None:
                raise ValueError("dangling operator")
            sign = -1 if tok == "-" else 1
            coeff, word, pending = None, [], False
            continue
        if tok.startswith("("):
            if pending:
                raise ValueError(f"scalar factor must precede the word: {tok!r}")
            depth = 0
            for j, ch in enumerate(tok):
                depth += ch == "("
                depth -= ch == ")"
                if depth == 0:
                    break
            coeff = parse_scalar(tok[1:j], ctx)
            tok = tok[j + 1:]
            if tok.startswith("*"):
                tok = tok[1:]
            pending = True
            if not tok:
                continue
        pending = True
        if tok == "1":
            continue
        if tok not in index:
            raise ValueError(f"unknown generator {tok!r}")
        word.append(index[tok])
    if not pending:
        raise ValueError("dangling operator")
    flush()
    return terms


class FreeElement(WordCombination):
    """Element of the free algebra; product is word concatenation."""

    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, FreeElement):
            self._check(other)
            out: dict = {}
            for a, ca in self.terms.items():
                for b, cb in other.terms.items():
                    _add_into(out, a + b, ca * cb)
            return FreeElement(self.parent, out)
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


class TensorElement:
    """Linear combination of ``rank``-tuples of words."""

    __slots__ = ("parent", "rank", "terms")

    def __init__(self, parent: GeneratorSet, rank: int, terms: Mapping | None = None):
        self.parent = parent
        self.rank = rank
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return TensorElement(self.parent, self.rank, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = ScalarFraction.coerce(c, self.parent.ctx)
        return TensorElement(self.parent, self.rank, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TensorElement):
            return self.scale(other)
        out: dict = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                _add_into(out, tuple(x + y for x, y in zip(ka, kb)), ca * cb)
        return TensorElement(self.parent, self.rank, out)

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.rank == other.rank and self.terms == other.terms

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def render(self) -> str:
        if not self.terms:
            return "0"
        names = self.parent.names
        parts = []
        for k in sorted(self.terms, key=lambda k: tuple(word_key(w) for w in k)):
            c = self.terms[k]
            body = " ⊗ ".join(render_word(w, names) for w in k)
            parts.append(body if c.is_one() else f"({c.render()})*[{body}]")
        return " + ".join(parts)

    __str__ = render

    def __repr__(self):
        return f"TensorElement({self.render()!r})"


class GeneratorSet:
    """Named generators with coproduct and counit tables.

    ``delta`` maps a generator name to a list of ``(coeff, left, right)``
    where ``left``/``right`` are generator names or ``None`` for the unit.
    """

    def __init__(self, names: Sequence[str], ctx: ParameterContext,
                 delta: Mapping[str, list] | None = None, epsilon: Mapping[str, object] | None = None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        for n in self.names:
            if n in ("+", "-", "1") or n.startswith("(") or any(ch.isspace() for ch in n):
                raise ValueError(f"illegal generator name {n!r}")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.ctx = ctx
        self.delta: dict = {}
        self.epsilon: dict = {}
        self._delta_cache: dict = {(): TensorElement(self, 2, {((), ()): self._one_scalar()})}
        if delta is not None:
            for name, entries in delta.items():
                self.set_coproduct(name, entries)
        if epsilon is not None:
            for name, val in epsilon.items():
                self.epsilon[self.index[name]] = ScalarFraction.coerce(val, ctx)

    def _one_scalar(self):
        return ScalarFraction(self.ctx.one())

    def set_coproduct(self, name: str, entries: list) -> None:
        terms: dict = {}
        for coeff, left, right in entries:
            lw = () if left is None else (self.index[left],)
            rw = () if right is None else (self.index[right],)
            _add_into(terms, (lw, rw), ScalarFraction.coerce(coeff, self.ctx))
        self.delta[self.index[name]] = TensorElement(self, 2, terms)
        self._delta_cache = {(): self._delta_cache[()]}

    # constructors -----------------------------------------------------
    def one(self) -> FreeElement:
        return FreeElement(self, {(): self._one_scalar()})

    def zero(self) -> FreeElement:
        return FreeElement(self, {})

    def gen(self, name: str) -> FreeElement:
        return FreeElement(self, {(self.index[name],): self._one_scalar()})

    def word(self, *names: str) -> FreeElement:
        return FreeElement(self, {tuple(self.index[n] for n in names): self._one_scalar()})

    def element(self, terms: Mapping) -> FreeElement:
        return FreeElement(self, {tuple(w): ScalarFraction.coerce(c, self.ctx) for w, c in terms.items()})

    def scalar_element(self, c) -> FreeElement:
        return FreeElement(self, {(): ScalarFraction.coerce(c, self.ctx)})

    def parse(self, text: str) -> FreeElement:
        return FreeElement(self, parse_combination(text, self.names, self.ctx))

    def parse_word(self, text: str) -> tuple:
        return tuple(self.index[t] for t in text.split())

    def render_word(self, w: tuple) -> str:
        return render_word(w, self.names)

    # bialgebra structure ---------------------------------------------
    def coproduct_word(self, w: tuple) -> TensorElement:
        w = tuple(w)
        hit = self._delta_cache.get(w)
        if hit is not None:
            return hit
        if w[-1] not in self.delta:
            raise KeyError(f"no coproduct for generator {self.names[w[-1]]!r}")
        out = self.coproduct_word(w[:-1]) * self.delta[w[-1]]
        self._delta_cache[w] = out
        return out

    def counit_word(self, w: tuple) -> ScalarFraction:
        out = self._one_scalar()
        for x in w:
            if x not in self.epsilon:
                raise KeyError(f"no counit for generator {self.names[x]!r}")
            out = out * self.epsilon[x]
            if out.is_zero():
                break
        return out

    def validate(self) -> None:
        """Generator coproducts lie in span(M1 ⊗ M1) and satisfy the counit axiom."""
        for i in range(len(self.names)):
            if i not in self.delta or i not in self.epsilon:
                raise ValueError(f"generator {self.names[i]!r} lacks coproduct or counit data")
            d = self.delta[i]
            for (l, r) in d.terms:
                if len(l) > 1 or len(r) > 1:
                    raise ValueError(f"coproduct of {self.names[i]!r} leaves span(M1⊗M1)")
            x = self.gen(self.names[i])
            left = FreeElement(self, {})
            right = FreeElement(self, {})
            for (l, r), c in d.terms.items():
                left = left + FreeElement(self, {r: c * self.counit_word(l)})
                right = right + FreeElement(self, {l: c * self.counit_word(r)})
            if left != x or right != x:
                raise ValueError(f"counit axiom fails for generator {self.names[i]!r}")


def multiply(a: FreeElement, b: FreeElement) -> FreeElement:
    return a * b


def coproduct(a: FreeElement) -> TensorElement:
    g = a.parent
    out = TensorElement(g, 2)
    for w, c in a.terms.items():
        out = out + g.coproduct_word(w).scale(c)
    return out


def counit(a: FreeElement) -> ScalarFraction:
    g = a.parent
    out = ScalarFraction(g.ctx.zero())
    for w, c in a.terms.items():
        out = out + c * g.counit_word(w)
    return out


def tensor_to_element(t: TensorElement, slot: int) -> dict:
    """Group a tensor by the words outside ``slot``: {other words: FreeElement in slot}."""
    out: dict = {}
    for k, c in t.terms.items():
        rest = k[:slot] + k[slot + 1:]
        out.setdefault(rest, {})[k[slot]] = c
    return {r: FreeElement(t.parent, terms) for r, terms in out.items()}


@dataclass
class CheckRecord:
    id: str
    ref: str
    ok: bool
    witness: str = ""


def coassociativity_sides(g: GeneratorSet, w: tuple):
    d = g.coproduct_word(w)
    left: dict = {}
    right: dict = {}
    for (a, b), c in d.terms.items():
        for (a1, a2), c1 in g.coproduct_word(a).terms.items():
            _add_into(left, (a1, a2, b), c * c1)
        for (b1, b2), c2 in g.coproduct_word(b).terms.items():
            _add_into(right, (a, b1, b2), c * c2)
    return TensorElement(g, 3, left), TensorElement(g, 3, right)


def check_coassociativity(g: GeneratorSet, words: Iterable[tuple]) -> list:
    out = []
    for w in words:
        left, right = coassociativity_sides(g, w)
        ok = left == right
        out.append(CheckRecord(f"coassoc[{g.render_word(w)}]", "coassociativity of the word coproduct", ok,
                               "" if ok else (left - right).render()))
    return out


# ---------------------------------------------------------------------------
# coideal certificates


@dataclass
class CoidealCertificate:
    """Decomposition of each relation's coproduct into ideal-valued tensor pieces.

    Each piece is ``(coeff, kind, data)``:

    * ``("L", (u, j, v, w))`` stands for ``u r_j v ⊗ w`` (two-sided ideal on the left);
    * ``("R", (w, u, j))`` stands for ``w ⊗ u r_j`` (left ideal on the right).
    """

    generators: GeneratorSet
    relations: list
    closure: list
    pieces: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def piece_tensor(self, kind, data) -> TensorElement:
        g = self.generators
        one = g._one_scalar()
        if kind == "L":
            u, j, v, w = data
            r = self.closure[j]
            return TensorElement(g, 2, {(u + x + v, w): c for x, c in r.terms.items()})
        w, u, j = data
        r = self.closure[j]
        return TensorElement(g, 2, {(w, u + x): c for x, c in r.terms.items()})

    def verify(self) -> bool:
        """Re-expand every recorded decomposition and compare with the coproduct."""
        if not self.ok:
            return False
        for rel, pieces in zip(self.relations, self.pieces):
            total = TensorElement(self.generators, 2)
            for c, kind, data in pieces:
                total = total + self.piece_tensor(kind, data).scale(c)
            if total != coproduct(rel):
                return False
        return True


class CoidealFailure(ValueError):
    pass


def _narrow_candidates(target: dict, closure: list, keys: set):
    lefts = {k[0] for k in keys}
    rights = {k[1] for k in keys}
    cands = {}
    for j, r in enumerate(closure):
        supp = set(r.terms)
        if supp & lefts:
            for w in rights:
                cands[("L", ((), j, (), w))] = {(x, w): c for x, c in r.terms.items()}
        if supp & rights:
            for w in lefts:
                cands[("R", (w, (), j))] = {(w, x): c for x, c in r.terms.items()}
    return cands


def _wide_candidates(target: dict, closure: list, keys: set):
    cands = {}
    for (lw, rw) in keys:
        for j, r in enumerate(closure):
            for s in r.terms:
                n = len(s)
                for i in range(len(lw) - n + 1):
                    if lw[i:i + n] == s:
                        u, v = lw[:i], lw[i + n:]
                        cands[("L", (u, j, v, rw))] = {(u + x + v, rw): c for x, c in r.terms.items()}
                if n <= len(rw) and rw[len(rw) - n:] == s:
                    u = rw[:len(rw) - n]
                    cands[("R", (lw, u, j))] = {(lw, u + x): c for x, c in r.terms.items()}
    return cands


def _certify_one(target: dict, closure: list, rounds: int = 3):
    for builder in (_narrow_candidates, _wide_candidates):
        keys = set(target)
        for _ in range(rounds):
            cands = builder(target, closure, keys)
            sol = solve_combination(cands, target)
            if sol is not None:
                return [(c, kind, data) for (kind, data), c in sorted(sol.items(), key=lambda kv: repr(kv[0]))]
            new_keys = set(keys)
            for vec in cands.values():
                new_keys.update(vec)
            if new_keys == keys:
                break
            keys = new_keys
    return None


def coideal_certificate(relations: Sequence[FreeElement],
                        closure: Sequence[FreeElement] | None = None) -> CoidealCertificate:
    """Express each relation's coproduct as a combination of ideal-valued tensors.

    First tries the visible form ``r' ⊗ w + w ⊗ r'``; if that fails it admits
    ``u r' v ⊗ w`` (two-sided ideal) and ``w ⊗ u r'`` (left ideal).  Failures
    are recorded, never guessed around.
    """
    relations = list(relations)
    closure = list(relations if closure is None else closure)
    if not relations:
        raise ValueError("no relations given")
    g = relations[0].parent
    cert = CoidealCertificate(g, relations, closure)
    for idx, r in enumerate(relations):
        target = dict(coproduct(r).terms)
        if not target:
            cert.pieces.append([])
            continue
        pieces = _certify_one(target, closure)
        if pieces is None:
            cert.failures.append(idx)
            cert.pieces.append(None)
        else:
            cert.pieces.append(pieces)
    return cert
