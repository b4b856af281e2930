"""Exact coefficient arithmetic.

Scalars are Laurent polynomials with rational coefficients in a base
variable ``v`` (``q = v**root``) and finitely many invertible parameters.
Division is available through :class:`ScalarFraction`, whose canonical
form makes equality a syntactic comparison.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

Exponents = tuple  # tuple[int, ...]
Number = Union[int, Fraction]


class ContextMismatch(ValueError):
    """Raised when scalars from different parameter contexts are combined."""


@dataclass(frozen=True)
class ParameterContext:
    """Ordered variable names (``v`` first) plus the ramification ``q = v**root``.

    ``eliminated`` maps a constrained name to the exponent vector that
    replaces it, e.g. ``d3 -> (0, -1, -1)`` for ``d1*d2*d3 == 1``.
    """

    names: tuple = ("v",)
    root: int = 2
    eliminated: tuple = ()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "eliminated", tuple((n, tuple(e)) for n, e in self.eliminated))
        if not names or names[0] != "v":
            raise ValueError("the first variable must be 'v'")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        if self.root < 1:
            raise ValueError("root must be positive")
        for n, e in self.eliminated:
            if n in names or len(e) != len(names):
                raise ValueError(f"bad elimination for {n}")

    @classmethod
    def with_product_one(cls, names: Iterable[str], constrained: Iterable[str], root: int = 2):
        """Context in which the product of ``constrained`` equals one.

        The last constrained name is eliminated as the inverse product of the others.
        """
        constrained = list(constrained)
        last = constrained[-1]
        kept = tuple(n for n in names if n != last)
        exps = [0] * len(kept)
        for n in constrained[:-1]:
            exps[kept.index(n)] = -1
        return cls(kept, root, ((last, tuple(exps)),))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"undeclared variable {name!r}") from None

    def knows(self, name: str) -> bool:
        return name in self.names or name == "q" or any(n == name for n, _ in self.eliminated)

    def zero(self) -> LaurentScalar:
        return LaurentScalar(self, {})

    def one(self) -> LaurentScalar:
        return LaurentScalar(self, {self.unit_exponents(): Fraction(1)})

    def unit_exponents(self) -> tuple:
        return (0,) * len(self.names)

    def const(self, c: Number) -> LaurentScalar:
        c = Fraction(c)
        return LaurentScalar(self, {self.unit_exponents(): c} if c else {})

    def monomial(self, exps: Iterable[int], coeff: Number = 1) -> LaurentScalar:
        exps = tuple(exps)
        if len(exps) != len(self.names):
            raise ValueError("exponent vector length does not match context")
        c = Fraction(coeff)
        return LaurentScalar(self, {exps: c} if c else {})

    def var_exponents(self, name: str) -> tuple:
        for n, e in self.eliminated:
            if n == name:
                return e
        exps = [0] * len(self.names)
        exps[self.index(name)] = 1
        return tuple(exps)

    def var(self, name: str, power: int = 1) -> LaurentScalar:
        """The monomial ``name**power``; ``q`` is accepted as an alias for ``v**root``."""
        if name == "q":
            return self.q(power)
        exps = tuple(power * x for x in self.var_exponents(name))
        return self.monomial(exps)

    def q(self, power: Number = 1) -> LaurentScalar:
        """``q**power``; ``power * root`` must be an integer."""
        e = Fraction(power) * self.root
        if e.denominator != 1:
            raise ValueError(f"q^{power} is not representable with root {self.root}")
        return self.monomial((int(e),) + (0,) * (len(self.names) - 1))

    def to_json(self) -> dict:
        out = {"variables": list(self.names), "q_root": self.root}
        if self.eliminated:
            out["eliminated"] = {n: list(e) for n, e in self.eliminated}
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> ParameterContext:
        elim = tuple((n, tuple(e)) for n, e in data.get("eliminated", {}).items())
        return cls(tuple(data["variables"]), int(data["q_root"]), elim)

    def restricted(self, drop: Iterable[str]) -> ParameterContext:
        """Context without the variables in ``drop`` (eliminations referring to them are dropped)."""
        drop = set(drop)
        keep = [i for i, n in enumerate(self.names) if n not in drop]
        names = tuple(self.names[i] for i in keep)
        elim = tuple(
            (n, tuple(e[i] for i in keep))
            for n, e in self.eliminated
            if all(e[i] == 0 for i, m in enumerate(self.names) if m in drop)
        )
        return ParameterContext(names, self.root, elim)


def _check_ctx(a, b):
    if a.ctx is not b.ctx and a.ctx != b.ctx:
        raise ContextMismatch(f"context mismatch: {a.ctx.names} vs {b.ctx.names}")


class LaurentScalar:
    """Immutable Laurent polynomial ``{exponent vector: Fraction}`` with no zero terms."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: ParameterContext, terms: Mapping):
        self.ctx = ctx
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    # coercion ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentScalar):
            _check_ctx(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        return NotImplemented

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        if len(self.terms) != 1:
            return False
        (e, c), = self.terms.items()
        return c == 1 and not any(e)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(self.ctx.unit_exponents(), Fraction(0))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentScalar(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, ScalarFraction):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) == 1 and len(b) == 1:
            (ea, ca), = a.items()
            (eb, cb), = b.items()
            return LaurentScalar(self.ctx, {tuple(x + y for x, y in zip(ea, eb)): ca * cb})
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return LaurentScalar(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ZeroDivisionError("only monomials are invertible in the Laurent ring")
            (e, c), = self.terms.items()
            return LaurentScalar(self.ctx, {tuple(n * x for x in e): Fraction(c) ** n})
        out = self.ctx.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        return ScalarFraction(self) / other

    def __rtruediv__(self, other):
        return ScalarFraction.coerce(other, self.ctx) / self

    def __eq__(self, other):
        if isinstance(other, LaurentScalar):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({self.ctx.unit_exponents(): Fraction(other)} if other else {})
        if isinstance(other, ScalarFraction):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # structure --------------------------------------------------------
    def leading(self):
        """Lex-largest exponent vector and its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    def min_exponents(self) -> tuple:
        return tuple(min(col) for col in zip(*self.terms))

    def shift(self, exps: Iterable[int]) -> LaurentScalar:
        exps = tuple(exps)
        return LaurentScalar(self.ctx, {tuple(x + y for x, y in zip(e, exps)): c for e, c in self.terms.items()})

    def scale(self, c: Number) -> LaurentScalar:
        return LaurentScalar(self.ctx, {e: v * c for e, v in self.terms.items()})

    def substitute(self, mapping: Mapping[str, LaurentScalar], target: ParameterContext | None = None) -> LaurentScalar:
        """Replace variables by monomials (or any Laurent polynomial for non-negative powers).

        Variables absent from ``mapping`` are carried over by name into ``target``.
        """
        target = target or self.ctx
        images = []
        for name in self.ctx.names:
            if name in mapping:
                img = mapping[name]
                if isinstance(img, (int, Fraction)):
                    img = target.const(img)
                if img.ctx != target:
                    raise ContextMismatch("substitution image lives in a different context")
            else:
                img = target.var(name)
            images.append(img)
        out = target.zero()
        cache: dict = {}
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        """Exact rational value; ``values`` may give ``v`` or ``q``.

        With ``q`` given, q must be a rational ``root``-th power when odd v-powers occur.
        """
        vals = dict(values)
        if "q" in vals and "v" not in vals:
            vals["v"] = _rational_root(Fraction(vals.pop("q")), self.ctx.root, self)
        total = Fraction(0)
        for e, c in self.terms.items():
            t = Fraction(c)
            for name, k in zip(self.ctx.names, e):
                if k:
                    t *= Fraction(vals[name]) ** k
            total += t
        return total

    def variables_used(self) -> set:
        used = set()
        for e in self.terms:
            for name, k in zip(self.ctx.names, e):
                if k:
                    used.add(name)
        return used

    # rendering --------------------------------------------------------
    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = _render_monomial(self.ctx, e)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = render

    def __repr__(self):
        return f"LaurentScalar({self.render()!r})"

    def to_json(self) -> list:
        return [
            {"exponents": list(e), "num": str(c.numerator), "den": str(c.denominator)}
            for e, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, ctx: ParameterContext, data: list) -> LaurentScalar:
        terms = {}
        for t in data:
            e = tuple(int(x) for x in t["exponents"])
            if len(e) != ctx.nvars:
                raise ValueError("exponent vector length does not match context")
            terms[e] = terms.get(e, 0) + Fraction(int(t["num"]), int(t["den"]))
        return cls(ctx, terms)


def _render_monomial(ctx: ParameterContext, e: tuple) -> str:
    factors = []
    for name, k in zip(ctx.names, e):
        if not k:
            continue
        if name == "v":
            p = Fraction(k, ctx.root)
            name = "q"
            if p == 1:
                factors.append("q")
            elif p.denominator == 1:
                factors.append(f"q^{p.numerator}")
            else:
                factors.append(f"q^({p.numerator}/{p.denominator})")
        else:
            factors.append(name if k == 1 else f"{name}^{k}")
    return "*".join(factors)


def _rational_root(x: Fraction, n: int, who) -> Fraction:
    if n == 1:
        return x
    if x < 0 and n % 2 == 0:
        raise ValueError("negative q has no real even root")
    sign = -1 if x < 0 else 1
    num = _int_root(abs(x.numerator), n)
    den = _int_root(x.denominator, n)
    if num is None or den is None:
        raise ValueError(f"q={x} is not a rational {n}-th power; cannot evaluate {who}")
    return sign * Fraction(num, den)


def _int_root(a: int, n: int):
    r = round(a ** (1.0 / n)) if a else 0
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** n == a:
            return cand
    # large inputs: integer Newton iteration
    lo, hi = 0, 1 << (a.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** n < a:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** n == a else None


# ---------------------------------------------------------------------------
# polynomial helpers on raw term dicts (exponent tuple -> Fraction)


def _poly_divexact(f: dict, g: dict) -> dict:
    """Exact multivariate division ``f / g`` with lex leading terms; raises if inexact."""
    if not g:
        raise ZeroDivisionError
    rem = dict(f)
    quot: dict = {}
    lg = max(g)
    cg = g[lg]
    while rem:
        lf = max(rem)
        d = tuple(x - y for x, y in zip(lf, lg))
        if any(x < 0 for x in d):
            raise ArithmeticError("inexact division")
        c = rem[lf] / cg
        quot[d] = quot.get(d, 0) + c
        for e, cc in g.items():
            k = tuple(x + y for x, y in zip(e, d))
            val = rem.get(k, 0) - c * cc
            if val:
                rem[k] = val
            else:
                rem.pop(k, None)
    return quot


def _to_poly(terms: dict):
    """Shift a Laurent term dict to a polynomial with zero minimal exponents."""
    mins = tuple(min(col) for col in zip(*terms))
    return {tuple(x - m for x, m in zip(e, mins)): c for e, c in terms.items()}, mins


def _univariate_index(terms: dict):
    """Index of the single variable a polynomial depends on, -1 if constant, None if multivariate."""
    idx = -1
    for e in terms:
        for i, k in enumerate(e):
            if k:
                if idx == -1:
                    idx = i
                elif idx != i:
                    return None
    return idx


def _uni_gcd(a: dict, b: dict) -> dict:
    """Monic gcd of univariate polynomials ``{degree: coeff}``."""
    a = {k: Fraction(v) for k, v in a.items() if v}
    b = {k: Fraction(v) for k, v in b.items() if v}
    while b:
        db, cb = max(b), None
        cb = b[db]
        while a and max(a) >= db:
            da = max(a)
            c = a[da] / cb
            for k, v in b.items():
                kk = k + da - db
                val = a.get(kk, 0) - c * v
                if val:
                    a[kk] = val
                else:
                    a.pop(kk, None)
        a, b = b, a
    if not a:
        return {}
    lead = a[max(a)]
    return {k: v / lead for k, v in a.items()}


def _poly_gcd(f: dict, g: dict, nvars: int) -> dict:
    """Gcd of two polynomials (term dicts); the result is normalized to leading coefficient 1."""
    uf = _univariate_index(f)
    ug = _univariate_index(g)
    if uf == -1 or ug == -1:
        return {(0,) * nvars: Fraction(1)}
    if ug is not None or uf is not None:
        if ug is None:
            f, g, uf, ug = g, f, ug, uf
        # g is univariate in variable ug; gcd with the content of f in that variable
        i = ug
        h = {e[i]: c for e, c in g.items()}
        groups: dict = {}
        for e, c in f.items():
            rest = e[:i] + e[i + 1:]
            groups.setdefault(rest, {})[e[i]] = c
        for coeffs in groups.values():
            h = _uni_gcd(h, coeffs)
            if max(h) == 0:
                break
        out = {}
        for k, c in h.items():
            e = [0] * nvars
            e[i] = k
            out[tuple(e)] = c
        return out
    return _sympy_gcd(f, g, nvars)


def _sympy_gcd(f: dict, g: dict, nvars: int) -> dict:
    import sympy
    from sympy.polys.domains import QQ

    gens = sympy.symbols(f"x0:{nvars}")
    pf = sympy.Poly.from_dict({e: QQ(c.numerator, c.denominator) for e, c in f.items()}, *gens, domain=QQ)
    pg = sympy.Poly.from_dict({e: QQ(c.numerator, c.denominator) for e, c in g.items()}, *gens, domain=QQ)
    h = pf.gcd(pg)
    out = {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in h.as_dict().items()}
    lead = out[max(out)]
    return {e: c / lead for e, c in out.items()}


@lru_cache(maxsize=200_000)
def _normalize_pair(num_items: frozenset, den_items: frozenset, nvars: int):
    num = dict(num_items)
    den = dict(den_items)
    den_poly, den_min = _to_poly(den)
    num = {tuple(x - m for x, m in zip(e, den_min)): c for e, c in num.items()}
    if len(den_poly) > 1:
        num_poly, num_min = _to_poly(num)
        g = _poly_gcd(num_poly, den_poly, nvars)
        if len(g) > 1:
            num_poly = _poly_divexact(num_poly, g)
            den_poly = _poly_divexact(den_poly, g)
            num = {tuple(x + m for x, m in zip(e, num_min)): c for e, c in num_poly.items()}
    lead = den_poly[max(den_poly)]
    if lead != 1:
        num = {e: c / lead for e, c in num.items()}
        den_poly = {e: c / lead for e, c in den_poly.items()}
    return tuple(sorted(num.items())), tuple(sorted(den_poly.items()))


class ScalarFraction:
    """Element of the fraction field of the Laurent ring, kept in canonical form.

    The denominator is a polynomial not divisible by any variable, with
    lex-leading coefficient 1, coprime to the numerator.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentScalar, den: LaurentScalar | None = None, _canonical: bool = False):
        ctx = num.ctx
        if den is None or den.is_one():
            self.num, self.den = num, ctx.one()
        elif _canonical:
            self.num, self.den = num, den
        else:
            _check_ctx(num, den)
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if num.is_zero():
                self.num, self.den = num, ctx.one()
            elif den.is_monomial():
                (e, c), = den.terms.items()
                self.num, self.den = num.shift(tuple(-x for x in e)).scale(1 / Fraction(c)), ctx.one()
            else:
                n, d = _normalize_pair(frozenset(num.terms.items()), frozenset(den.terms.items()), ctx.nvars)
                self.num = LaurentScalar(ctx, dict(n))
                self.den = LaurentScalar(ctx, dict(d))
        self._hash = None

    @property
    def ctx(self) -> ParameterContext:
        return self.num.ctx

    @classmethod
    def coerce(cls, x, ctx: ParameterContext) -> ScalarFraction:
        if isinstance(x, ScalarFraction):
            if x.ctx != ctx:
                raise ContextMismatch("context mismatch")
            return x
        if isinstance(x, LaurentScalar):
            if x.ctx != ctx:
                raise ContextMismatch("context mismatch")
            return cls(x)
        if isinstance(x, (int, Fraction)):
            return cls(ctx.const(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to a scalar")

    def _co(self, other):
        if isinstance(other, ScalarFraction):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch(f"context mismatch: {self.ctx.names} vs {other.ctx.names}")
            return other
        if isinstance(other, LaurentScalar):
            _check_ctx(self.num, other)
            return ScalarFraction(other)
        if isinstance(other, (int, Fraction)):
            return ScalarFraction(self.ctx.const(other))
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def __add__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den.is_one() and other.den.is_one():
            return ScalarFraction(self.num + other.num)
        if self.den == other.den:
            return ScalarFraction(self.num + other.num, self.den)
        return ScalarFraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarFraction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        if self.den.is_one() and other.den.is_one():
            return ScalarFraction(self.num * other.num)
        return ScalarFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> ScalarFraction:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return ScalarFraction(self.den, self.num)

    def __truediv__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ScalarFraction(self.ctx.one())
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, LaurentScalar)):
            return self.den.is_one() and self.num == other
        if isinstance(other, ScalarFraction):
            return self.ctx == other.ctx and self.num.terms == other.num.terms and self.den.terms == other.den.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def substitute(self, mapping, target: ParameterContext | None = None) -> ScalarFraction:
        return ScalarFraction(self.num.substitute(mapping, target), self.den.substitute(mapping, target))

    def evaluate(self, values) -> Fraction:
        d = self.den.evaluate(values)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.evaluate(values) / d

    def variables_used(self) -> set:
        return self.num.variables_used() | self.den.variables_used()

    def render(self) -> str:
        if self.den.is_one():
            return self.num.render()
        n = self.num.render()
        if len(self.num.terms) > 1:
            n = f"({n})"
        return f"{n}/({self.den.render()})"

    __str__ = render

    def __repr__(self):
        return f"ScalarFraction({self.render()!r})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, ctx: ParameterContext, data) -> ScalarFraction:
        if isinstance(data, list):
            return cls(LaurentScalar.from_json(ctx, data))
        return cls(LaurentScalar.from_json(ctx, data["num"]), LaurentScalar.from_json(ctx, data["den"]))


def scalar(x, ctx: ParameterContext) -> ScalarFraction:
    return ScalarFraction.coerce(x, ctx)


# ---------------------------------------------------------------------------
# q-numbers


def qnum(n: int, ctx: ParameterContext) -> LaurentScalar:
    """``[n] = (q^n - q^-n)/(q - q^-1)`` as a Laurent polynomial."""
    m = abs(n)
    out = ctx.zero()
    for k in range(m):
        out = out + ctx.q(m - 1 - 2 * k)
    return out if n >= 0 else -out


def q_minus_qinv(ctx: ParameterContext) -> LaurentScalar:
    return ctx.q(1) - ctx.q(-1)


def qnum_shifted(n: int, param: str, ctx: ParameterContext) -> ScalarFraction:
    """``[n - sigma]`` where ``param = q^(sigma/2)``: ``(q^n s^-2 - q^-n s^2)/(q - q^-1)``."""
    if param not in ctx.names:
        raise KeyError(f"undeclared parameter {param!r}")
    s = ctx.var(param)
    num = ctx.q(n) * s ** -2 - ctx.q(-n) * s * s
    return ScalarFraction(num, q_minus_qinv(ctx))


def qnum_formal(param: str, ctx: ParameterContext) -> ScalarFraction:
    """``[sigma] = (s^2 - s^-2)/(q - q^-1)`` with ``s = q^(sigma/2)``."""
    s = ctx.var(param)
    return ScalarFraction(s * s - s ** -2, q_minus_qinv(ctx))


# ---------------------------------------------------------------------------
# text parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\()|(\))|(\*)|(\+)|(-)|(/))")


def parse_scalar(text: str, ctx: ParameterContext) -> ScalarFraction:
    """Parse the canonical rendering (and simple arithmetic expressions) back into a scalar."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse scalar at {text[pos:]!r}")
        pos = m.end()
        kinds = ("num", "name", "^", "(", ")", "*", "+", "-", "/")
        for k, g in zip(kinds, m.groups()):
            if g is not None:
                toks.append((k, g))
                break
    p = _Parser(toks, ctx)
    out = p.expr()
    if p.i != len(toks):
        raise ValueError(f"trailing input in scalar {text!r}")
    return out


class _Parser:
    def __init__(self, toks, ctx):
        self.toks, self.i, self.ctx = toks, 0, ctx

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind=None):
        k, v = self.toks[self.i]
        if kind and k != kind:
            raise ValueError(f"expected {kind}, got {v!r}")
        self.i += 1
        return v

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        out = self.term() * sign
        while self.peek() in ("+", "-"):
            s = -1 if self.take() == "-" else 1
            out = out + self.term() * s
        return out

    def term(self):
        out = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            f = self.factor()
            out = out * f if op == "*" else out / f
        return out

    def factor(self):
        k = self.peek()
        if k == "num":
            base = ScalarFraction(self.ctx.const(Fraction(self.take())))
        elif k == "name":
            base = ScalarFraction(self.ctx.var(self.take()))
            if self.peek() == "^":
                self.take()
                return self._power(base)
            return base
        elif k == "(":
            self.take()
            base = self.expr()
            self.take(")")
        elif k == "-":
            self.take()
            return -self.factor()
        else:
            raise ValueError("unexpected token in scalar")
        if self.peek() == "^":
            self.take()
            return self._power(base)
        return base

    def _power(self, base):
        if self.peek() == "(":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            p = Fraction(self.take("num"))
            self.take(")")
        else:
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            p = Fraction(self.take("num"))
        if neg:
            p = -p
        if p.denominator != 1:
            # only q carries fractional powers
            if base.num.is_monomial() and base.den.is_one():
                (e, c), = base.num.terms.items()
                if c == 1 and all(x == 0 for x in e[1:]) and e[0] == base.ctx.root:
                    return ScalarFraction(base.ctx.q(p))
            raise ValueError("fractional powers are only allowed on q")
        return base ** int(p)
