"""The nine acceptance criteria, each at exact equality, one PASS/FAIL line apiece."""
import json
import time

from qorbit.cell import CellAlgebra
from qorbit.cli import dumps, load_archive, main
from qorbit.free import CheckRecord
from qorbit.instances.adjoint import (CartanData, build_adjoint_rep, load_phi_lambda, load_twisted_adjoint,
                                      nilpotent_algebra)
from qorbit.instances.frt import build_frt_rep, load_frt, verify_eq52
from qorbit.instances.sl2 import build_rep as build_sl2_rep
from qorbit.instances.sl2 import load_sl2, verify_eq35
from qorbit.phi import PhiMap, RepMatrixSet, TwistedAction, check_phi_relations
from qorbit.rmatrix import build_a_series, eq39_check, k_identities_check, structure_checks, ybe_check
from qorbit.scalars import ParameterContext, ScalarFraction
from qorbit.suites import (adjoint_bundle, coassoc_suite, coherence_check, failures, frt_bundle, leibniz_suite,
                           module_law_suite, probes, sl2_bundle, trivial_character_suite, unipotent_inverse_suite)


def summarize(recs: list) -> str:
    bad = failures(recs)
    head = f"{len(recs) - len(bad)}/{len(recs)} checks"
    return head + (f"; first failure {bad[0].id}: {bad[0].witness}" if bad else "")


def test_criterion_1_sl2_modules(criterion):
    t0 = time.perf_counter()
    recs = []
    for sigma in range(5):
        inst, mod = build_sl2_rep(sigma)
        recs.append(CheckRecord(f"dim[σ={sigma}]", "", mod.dim == sigma + 1, str(mod.dim)))
        res = mod.matrices.relation_residuals(inst.relations)
        recs.append(CheckRecord(f"relations[σ={sigma}]", "", all(r.is_zero() for r in res)))
        one = inst.cell.one()
        xm = inst.twisted.act(inst.generators.gen("X-"), one)
        recs.append(CheckRecord(f"X-·1[σ={sigma}]", "", xm.is_zero(), xm.render()))
        qh = inst.twisted.act(inst.generators.gen("K") * inst.generators.gen("K"), one)
        want = one.scale(inst.ctx.q(-sigma))
        recs.append(CheckRecord(f"q^H·1[σ={sigma}]", "", qh == want, qh.render()))
    elapsed = time.perf_counter() - t0
    recs.append(CheckRecord("runtime", "", elapsed < 5, f"{elapsed:.2f}s"))
    criterion(1, "sl2 modules for σ = 0..4", not failures(recs), summarize(recs) + f", {elapsed:.2f}s")


def test_criterion_2_eq35(criterion):
    t0 = time.perf_counter()
    recs = verify_eq35(load_sl2(None), 8)
    elapsed = time.perf_counter() - t0
    ok = not failures(recs) and len(recs) >= 3 * 9 and elapsed < 5
    criterion(2, "formal-σ closed forms on zb^n for n <= 8", ok, summarize(recs) + f", {elapsed:.2f}s")


def test_criterion_3_phi_factorization(criterion):
    recs = []
    sl2 = load_sl2(None)
    recs += check_phi_relations(sl2.phi, sl2.relations, sl2.certificate)
    for n in (2, 3):
        inst = load_frt(n)
        recs += check_phi_relations(inst.phi, inst.relations, inst.certificate)
    vals = dict(sl2.phi.values)
    vals[sl2.generators.index["X-"]] = sl2.cell.gen("zb")
    perturbed = check_phi_relations(PhiMap(sl2.action, vals), sl2.relations, sl2.certificate)
    recs.append(CheckRecord("negative-control", "", bool(failures(perturbed))))
    criterion(3, "φ vanishes on the relations of sl2 and FRT N=2,3; perturbed φ fails", not failures(recs),
              summarize(recs))


def test_criterion_4_eq52(criterion):
    recs = []
    for n in (2, 3):
        out = [r for r in verify_eq52(load_frt(n)) if r.id.startswith("phi-quadratic")]
        recs += out
        recs.append(CheckRecord(f"families[N={n}]", "", len(out) == 4))
    criterion(4, "four quadratic φ families at N=2 and N=3", not failures(recs), summarize(recs))


def test_criterion_5_rmatrix(criterion):
    t0 = time.perf_counter()
    recs = []
    for n in (2, 3, 4):
        S = build_a_series(n)
        recs += ybe_check(S.R)
        recs.append(CheckRecord(f"K-zero[N={n}]", "", S.K.is_zero()))
        recs.append(eq39_check(S))
        if n < 4:
            recs += structure_checks(S) + k_identities_check(S)
    elapsed = time.perf_counter() - t0
    recs.append(CheckRecord("runtime", "", elapsed < 30, f"{elapsed:.2f}s"))
    criterion(5, "YBE at N=2,3,4, R - R21^-1 with K=0, K identities at N=2,3", not failures(recs),
              summarize(recs) + f", {elapsed:.2f}s")


def test_criterion_6_generic_engine(criterion):
    recs = []
    counts = {}
    for b in (sl2_bundle(), frt_bundle(2), adjoint_bundle("A1")):
        co = coassoc_suite(b, 3)
        le = leibniz_suite(b, 100)
        mo = module_law_suite(b, 100)
        tr = trivial_character_suite(b, 50)
        counts[b.name] = (len(co), len(le), len(mo), len(tr))
        recs += co + le + mo + tr
        recs.append(CheckRecord(f"sizes[{b.name}]", "", len(le) >= 100 and len(mo) >= 100 and len(tr) >= 50))
    criterion(6, "coassociativity, Leibniz, module law, trivial character", not failures(recs),
              summarize(recs) + f"; per instance {counts}")


def test_criterion_7_adjoint(criterion):
    recs = []
    for cartan in ("A1", "A2"):
        inst = load_twisted_adjoint(cartan)
        pr = probes(inst.cell, 3)
        recs += inst.action.check_relations_kill(inst.relations, pr)
        phi = load_phi_lambda(inst)
        recs += TwistedAction(phi).check_relations_kill(inst.relations, pr)
        recs += check_phi_relations(phi, inst.relations, inst.certificate)
        zero = TwistedAction(load_phi_lambda(load_twisted_adjoint(cartan, False, False), (0,) * inst.cartan.rank))
        for x in range(len(zero.generators.names)):
            for f in probes(zero.cell, 3):
                got, want = zero.act_gen(x, f), zero.phi.action.act_gen(x, f)
                recs.append(CheckRecord(f"lambda-zero[{cartan}|{x}|{f.render()}]", "", got == want))
    for m in range(4):
        inst, mod = build_adjoint_rep("A1", (-m,))
        recs.append(CheckRecord(f"dim[m={m}]", "", not mod.infinite and mod.dim == m + 1, str(mod.dim)))
        res = mod.matrices.relation_residuals(inst.relations)
        recs.append(CheckRecord(f"relations[m={m}]", "", all(r.is_zero() for r in res)))
        _, sl2 = build_sl2_rep(m)
        recs += coherence_check(f"adjoint m={m}", mod.matrices, sl2.matrices, "adjoint")
    criterion(7, "twisted adjoint action for A1 and A2", not failures(recs), summarize(recs))


def test_criterion_8_cross_instance(criterion, capsys):
    recs = []
    for m in range(3):
        archives = []
        for argv in (["rep", "frt", "--n", "2", "--weights", str(m)], ["rep", "sl2", "--sigma", str(m)]):
            code = main(argv)
            out = capsys.readouterr().out
            recs.append(CheckRecord(f"exit[{' '.join(argv)}]", "", code == 0))
            archives.append(load_archive(json.loads(out))[2])
        recs += coherence_check(f"m={m}", archives[0], archives[1], "frt")
    criterion(8, "FRT N=2 and sl2 modules agree for m = 0, 1, 2", not failures(recs), summarize(recs))


def test_criterion_9_infrastructure(criterion, capsys):
    recs = []
    recs += load_frt(3, certify=False).cell.confluence_probe(3)
    recs += nilpotent_algebra(CartanData.of_type("A2"), ParameterContext(("v",), 2)).confluence_probe(3)
    recs += unipotent_inverse_suite(2) + unipotent_inverse_suite(3)
    # JSON round trips: scalars, cell algebras, archives
    inst = load_frt(3, certify=False)
    cell_json = json.dumps(inst.cell.to_json(), sort_keys=True)
    back = json.dumps(CellAlgebra.from_json(json.loads(cell_json)).to_json(), sort_keys=True)
    recs.append(CheckRecord("cell-json", "", cell_json == back))
    d = inst.d(0)
    back_d = ScalarFraction.from_json(d.ctx, json.loads(json.dumps(d.to_json())))
    recs.append(CheckRecord("scalar-json", "", back_d == d))
    _, mod = build_frt_rep(3, (1, 1))
    text = json.dumps(mod.matrices.to_json(), sort_keys=True)
    again = json.dumps(RepMatrixSet.from_json(json.loads(text)).to_json(), sort_keys=True)
    recs.append(CheckRecord("rep-json", "", text == again))
    main(["rep", "sl2", "--sigma", "3"])
    arch = capsys.readouterr().out
    name, params, rep = load_archive(json.loads(arch))
    rebuilt = json.loads(arch)
    rebuilt["representation"] = rep.to_json()
    recs.append(CheckRecord("archive-json", "", dumps(rebuilt) == arch))
    for argv in (["verify", "module-law", "--instance", "frt"], ["verify", "adjoint", "--type", "A1"]):
        runs = []
        for _ in range(2):
            code = main(argv)
            runs.append((code, capsys.readouterr().out))
        recs.append(CheckRecord(f"deterministic[{' '.join(argv)}]", "", runs[0] == runs[1] and runs[0][0] == 0))
    criterion(9, "confluence, unipotent inverse, JSON round trip, deterministic reports", not failures(recs),
              summarize(recs))
