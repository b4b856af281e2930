"""Named verification suites shared by the command line and the tests.

Every suite returns a list of :class:`qorbit.free.CheckRecord`.  Random
samples come from a seeded ``random.Random`` so reports are reproducible.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .cell import BaseAction, CellAlgebra, CPolynomial
from .free import CheckRecord, CoidealCertificate, GeneratorSet, all_words, check_coassociativity
from .matrices import Matrix, identity
from .phi import PhiMap, TwistedAction, check_phi_relations, intertwiner
from .scalars import ScalarFraction, q_minus_qinv


@dataclass
class Bundle:
    """The pieces of an instance that the generic checks need."""

    name: str
    generators: GeneratorSet
    cell: CellAlgebra
    action: BaseAction
    phi: PhiMap
    relations: list
    certificate: CoidealCertificate | None

    @property
    def twisted(self) -> TwistedAction:
        return TwistedAction(self.phi)


def sl2_bundle(sigma: int | None = None) -> Bundle:
    from .instances.sl2 import load_sl2
    inst = load_sl2(sigma)
    return Bundle("sl2", inst.generators, inst.cell, inst.action, inst.phi, inst.relations, inst.certificate)


def frt_bundle(n: int = 2, weights=None, certify: bool = True) -> Bundle:
    from .instances.frt import load_frt
    inst = load_frt(n, weights, certify=certify)
    return Bundle(f"frt-A{n - 1}", inst.generators, inst.cell, inst.action, inst.phi, inst.relations,
                  inst.certificate)


def adjoint_bundle(cartan: str = "A1", weight=None, certify: bool = True) -> Bundle:
    from .instances.adjoint import load_phi_lambda, load_twisted_adjoint
    inst = load_twisted_adjoint(cartan, formal_weight=weight is None, certify=certify)
    return Bundle(f"adjoint-{cartan}", inst.generators, inst.cell, inst.action, load_phi_lambda(inst, weight),
                  inst.relations, inst.certificate)


# ---------------------------------------------------------------------------
# sampling


def random_word(rng: random.Random, g: GeneratorSet, max_len: int, min_len: int = 0) -> tuple:
    n = rng.randint(min_len, max_len)
    return tuple(rng.randrange(len(g.names)) for _ in range(n))


def random_poly(rng: random.Random, cell: CellAlgebra, max_degree: int, max_terms: int = 2) -> CPolynomial:
    """A normalized polynomial with small integer coefficients and at most ``max_terms`` raw monomials."""
    out = cell.zero()
    for _ in range(rng.randint(1, max_terms)):
        w = tuple(rng.randrange(len(cell.names)) for _ in range(rng.randint(0, max_degree)))
        out = out + cell.normalize({w: cell._one_scalar()}).scale(rng.choice([1, -1, 2, 3]))
    return out if not out.is_zero() else cell.one()


def leibniz_samples(rng: random.Random, b: Bundle, count: int, max_len: int = 2, max_degree: int = 2) -> list:
    return [(random_word(rng, b.generators, max_len, 1), random_poly(rng, b.cell, max_degree),
             random_poly(rng, b.cell, max_degree)) for _ in range(count)]


def module_samples(rng: random.Random, b: Bundle, count: int, max_len: int = 2, max_degree: int = 2) -> list:
    return [(random_word(rng, b.generators, max_len), random_word(rng, b.generators, max_len),
             random_poly(rng, b.cell, max_degree)) for _ in range(count)]


def probes(cell: CellAlgebra, max_degree: int) -> list:
    return [cell.monomial(w) for w in cell.normal_words(max_degree)]


# ---------------------------------------------------------------------------
# generic suites


def coassoc_suite(b: Bundle, max_len: int = 3) -> list:
    return check_coassociativity(b.generators, all_words(len(b.generators.names), max_len))


def leibniz_suite(b: Bundle, count: int = 100, seed: int = 0) -> list:
    rng = random.Random(seed)
    recs = []
    for _ in range(count):
        x = rng.randrange(len(b.generators.names))
        f, g = random_poly(rng, b.cell, 2), random_poly(rng, b.cell, 2)
        lhs, rhs = b.action.leibniz_sides(x, f, g)
        recs.append(CheckRecord(f"base-leibniz[{b.generators.names[x]}|{f.render()}|{g.render()}]",
                                "base action obeys the Leibniz rule", lhs == rhs,
                                "" if lhs == rhs else (lhs - rhs).render()))
    recs += b.twisted.check_generalized_leibniz(leibniz_samples(rng, b, count))
    return recs


def module_law_suite(b: Bundle, count: int = 100, seed: int = 0) -> list:
    rng = random.Random(seed)
    recs = b.action.check_module_law(module_samples(rng, b, count))
    recs += b.twisted.check_module_law(module_samples(rng, b, count))
    return recs


def trivial_character_suite(b: Bundle, count: int = 50, seed: int = 0) -> list:
    """With ``φ = ε`` the twisted action must coincide with the base action."""
    rng = random.Random(seed)
    tw = TwistedAction(PhiMap.trivial(b.action))
    recs = []
    for _ in range(count):
        w = random_word(rng, b.generators, 3, 1)
        f = random_poly(rng, b.cell, 2)
        got, want = tw.act_word(w, f), b.action.act_word(w, f)
        ok = got == want
        recs.append(CheckRecord(f"trivial-character[{b.generators.render_word(w)}|{f.render()}]",
                                "φ = ε recovers the base action", ok, "" if ok else (got - want).render()))
    return recs


def phi_relations_suite(b: Bundle) -> list:
    return check_phi_relations(b.phi, b.relations, b.certificate)


# ---------------------------------------------------------------------------
# cross-instance dictionaries


CARTAN_NAMES = {
    "adjoint": ("t1", "t1^-1"),
    "frt": ("L+_{11}", "L+_{22}", "L-_{11}", "L-_{22}"),
}


def sl2_images(M: dict, target: str, ctx) -> dict:
    """Images of the target instance's generators as matrices of the sl2 module ``M``.

    ``adjoint``: ``e = K X+``, ``f = X- Ki``, ``t = K^2``.
    ``frt`` (N=2): ``diag(L+) = (K, Ki)``, ``diag(L-) = (Ki, K)``,
    ``L+_{12} = (q - q^-1) X-``, ``L-_{21} = -(q - q^-1) X+``.
    """
    K, Ki, Xp, Xm = M["K"], M["Ki"], M["X+"], M["X-"]
    if target == "adjoint":
        return {"e1": K @ Xp, "f1": Xm @ Ki, "t1": K @ K, "t1^-1": Ki @ Ki}
    if target == "frt":
        h = ScalarFraction(q_minus_qinv(ctx))
        return {"L+_{11}": K, "L+_{22}": Ki, "L-_{11}": Ki, "L-_{22}": K,
                "L+_{12}": Xm.scale(h), "L-_{21}": Xp.scale(-h)}
    raise ValueError(f"no dictionary towards {target!r}")


def spectrum(m: Matrix) -> list:
    """Sorted rendered diagonal of a diagonal matrix (None if not diagonal)."""
    if not m.is_diagonal():
        return None
    vals = [m.get(i, i) for i in range(m.nrows)]
    return sorted("0" if v is None else v.render() for v in vals)


def coherence_check(label: str, rep, sl2_rep, target: str) -> list:
    """Dimension, Cartan spectra and an explicit intertwiner between ``rep`` and the sl2 module."""
    recs = [CheckRecord(f"dim[{label}]", "equal dimensions", rep.dim == sl2_rep.dim,
                        "" if rep.dim == sl2_rep.dim else f"{rep.dim} vs {sl2_rep.dim}")]
    if rep.dim != sl2_rep.dim:
        return recs
    images = sl2_images(sl2_rep.matrices, target, sl2_rep.ctx)
    for x in CARTAN_NAMES[target]:
        a, b = spectrum(rep.matrices[x]), spectrum(images[x])
        ok = a is not None and a == b
        recs.append(CheckRecord(f"spectrum[{label}|{x}]", "diagonal generators share their spectrum", ok,
                                "" if ok else f"{a} vs {b}"))
    S = intertwiner(rep, images)
    recs.append(CheckRecord(f"intertwiner[{label}]", "an invertible intertwiner exists", S is not None,
                            "" if S is not None else "no invertible solution"))
    return recs


def unipotent_inverse_suite(n: int) -> list:
    from .instances.frt import invert_unipotent, load_frt, zstar_matrix
    inst = load_frt(n, certify=False)
    Z = zstar_matrix(inst.cell, n)
    Zi = invert_unipotent(Z, inst.cell.one())
    ident = identity(n, inst.cell.one())
    recs = []
    for tag, prod in (("right", Z @ Zi), ("left", Zi @ Z)):
        d = prod.first_difference(ident)
        recs.append(CheckRecord(f"unipotent-inverse[{tag}|N={n}]", "two-sided inverse of Z*", d is None,
                                "" if d is None else f"entry {d[0]}: {d[1].render()}"))
    return recs


def records_ok(recs: list) -> bool:
    return all(r.ok for r in recs)


def failures(recs: list) -> list:
    return [r for r in recs if not r.ok]

