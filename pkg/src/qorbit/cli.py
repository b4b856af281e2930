"""Command line front end: ``qorbit verify``, ``qorbit rep`` and ``qorbit phi-eval``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error,
3 a cyclic closure exceeded the dimension cutoff.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction
from typing import Mapping

from . import suites
from .free import CheckRecord
from .phi import RepMatrixSet, check_phi_relations
from .scalars import ParameterContext

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFINITE = 0, 1, 2, 3
ARCHIVE_VERSION = 1
REPORT_VERSION = 1

DEFAULTS = {"dim_cutoff": 64, "probe_degree": 3, "confluence_degree": 4, "samples": 100,
            "trivial_samples": 50, "coassoc_length": 3, "seed": 0}

SUITES = ("coassoc", "leibniz", "module-law", "phi-relations", "eq35", "ybe", "k-identities", "eq52", "adjoint")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration


def load_config(path: str | None = None) -> dict:
    """``key = value`` lines from ``path`` or ``$QORBIT_CONFIG`` over the defaults; ``#`` starts a comment."""
    cfg = dict(DEFAULTS)
    path = path or os.environ.get("QORBIT_CONFIG")
    if not path:
        return cfg
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: expected one of {sorted(DEFAULTS)} as key = value")
        try:
            cfg[key] = int(value.strip())
        except ValueError:
            raise UsageError(f"{path}:{lineno}: {key} must be an integer") from None
    return cfg


# ---------------------------------------------------------------------------
# reports and archives


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def report(suite: str, params: Mapping, records: list, timing: float | None = None) -> dict:
    checks = []
    for r in records:
        entry = {"id": r.id, "ref": r.ref, "status": "pass" if r.ok else "fail"}
        if not r.ok:
            entry["witness"] = r.witness
        checks.append(entry)
    out = {
        "version": REPORT_VERSION,
        "suite": suite,
        "params": dict(params),
        "checks": checks,
        "summary": {"total": len(checks), "failed": sum(1 for c in checks if c["status"] == "fail")},
    }
    if timing is not None:
        out["timing_seconds"] = round(timing, 3)
    return out


def archive(name: str, params: Mapping, rep: RepMatrixSet) -> dict:
    return {"format": "qorbit-rep", "version": ARCHIVE_VERSION,
            "instance": {"name": name, "params": dict(params)}, "dim": rep.dim, "representation": rep.to_json()}


def load_archive(data: Mapping) -> tuple:
    """Inverse of :func:`archive`: ``(name, params, RepMatrixSet)``."""
    if data.get("format") != "qorbit-rep" or data.get("version") != ARCHIVE_VERSION:
        raise ValueError("not a version-1 qorbit representation archive")
    inst = data["instance"]
    return inst["name"], dict(inst["params"]), RepMatrixSet.from_json(data["representation"])


def substitute_archive(rep: RepMatrixSet, q: Fraction) -> dict:
    """Exact rational matrices at ``q``; needs ``q^(1/root)`` rational when fractional powers occur."""
    vals = rep.substitute_values({"q": q})
    return {n: [[str(x) for x in row] for row in m] for n, m in sorted(vals.items())}


def write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# parameter parsing


def parse_int_list(text: str, what: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def parse_sigma(text: str | None):
    if text is None or text == "formal":
        return None
    try:
        s = int(text)
    except ValueError:
        raise UsageError(f"--sigma must be 'formal' or a nonnegative integer, got {text!r}") from None
    if s < 0:
        raise UsageError("--sigma must be nonnegative")
    return s


def parse_substitute(text: str) -> Fraction:
    key, sep, value = text.partition("=")
    if key.strip() != "q" or not sep:
        raise UsageError("--substitute expects q=<rational>")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--substitute value {value!r} is not a rational number") from None


def check_series(args) -> None:
    if getattr(args, "series", "A") != "A":
        raise UsageError("only the A series is built in; use --file for other R-matrices")


# ---------------------------------------------------------------------------
# instances by name


def bundle_for(args, certify: bool = True) -> suites.Bundle:
    inst = args.instance
    if inst == "sl2":
        return suites.sl2_bundle(parse_sigma(args.sigma))
    if inst == "frt":
        check_series(args)
        weights = parse_int_list(args.weights, "--weights") if args.weights else None
        return suites.frt_bundle(args.n, weights, certify=certify)
    if inst == "adjoint":
        weight = parse_int_list(args.lam, "--lambda") if args.lam else None
        return suites.adjoint_bundle(args.type, weight, certify=certify)
    raise UsageError(f"unknown instance {inst!r}")


def instance_params(args) -> dict:
    inst = args.instance
    if inst == "sl2":
        return {"instance": "sl2", "sigma": args.sigma or "formal"}
    if inst == "frt":
        return {"instance": "frt", "series": args.series, "n": args.n, "weights": args.weights or "formal"}
    return {"instance": "adjoint", "type": args.type, "lambda": args.lam or "formal"}


# ---------------------------------------------------------------------------
# verify


def _structure_from_args(args):
    from .rmatrix import build_a_series, load_structure_file
    if args.file:
        return load_structure_file(args.file)
    check_series(args)
    return build_a_series(args.n)


def run_verify(args, cfg: dict) -> tuple:
    """Run the named suite; returns ``(params, records)``."""
    suite = args.suite
    if suite in ("coassoc", "leibniz", "module-law", "phi-relations"):
        params = instance_params(args)
        b = bundle_for(args, certify=suite == "phi-relations")
        if suite == "coassoc":
            params["max_length"] = cfg["coassoc_length"]
            return params, suites.coassoc_suite(b, cfg["coassoc_length"])
        if suite == "leibniz":
            params.update(samples=cfg["samples"], seed=cfg["seed"])
            return params, suites.leibniz_suite(b, cfg["samples"], cfg["seed"])
        if suite == "module-law":
            params.update(samples=cfg["samples"], seed=cfg["seed"])
            recs = suites.module_law_suite(b, cfg["samples"], cfg["seed"])
            recs += suites.trivial_character_suite(b, cfg["trivial_samples"], cfg["seed"])
            return params, recs
        return params, suites.phi_relations_suite(b)
    if suite == "eq35":
        from .instances.sl2 import check_sl2_phi, load_sl2, verify_eq35
        inst = load_sl2(parse_sigma(args.sigma))
        recs = verify_eq35(inst, args.n_max) + check_sl2_phi(inst)
        return {"sigma": args.sigma or "formal", "n_max": args.n_max}, recs
    if suite == "ybe":
        from .rmatrix import a_series_r, matrix_size_to_n, parse_matrix, ybe_check
        if args.file:
            with open(args.file) as fh:
                data = json.load(fh)
            ctx = ParameterContext(("v",), int(data.get("q_root", 2)))
            R = parse_matrix(data["entries"] if "entries" in data else data["R"], ctx)
            matrix_size_to_n(R.nrows)
            return {"file": os.path.basename(args.file)}, ybe_check(R)
        check_series(args)
        return {"series": "A", "n": args.n}, ybe_check(a_series_r(args.n, ParameterContext(("v",), 2)))
    if suite == "k-identities":
        from .rmatrix import run_suite
        S = _structure_from_args(args)
        params = {"file": os.path.basename(args.file)} if args.file else {"series": "A", "n": args.n}
        return params, run_suite(S)
    if suite == "eq52":
        from .instances.frt import load_frt, verify_eq52
        inst = load_frt(args.n)
        recs = list(inst.action_consistency) + verify_eq52(inst)
        recs.append(CheckRecord(f"k-consistency[N={args.n}]", "K12 Q^-1 Z1 Q Z2 = K12 is 0 = 0 when K = 0",
                                inst.structure.K.is_zero()))
        return {"series": "A", "n": args.n}, recs
    if suite == "adjoint":
        return {"type": args.type}, adjoint_suite(args.type, cfg)
    raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")


def adjoint_suite(cartan: str, cfg: dict) -> list:
    from .instances.adjoint import check_antipode_axiom, load_phi_lambda, load_twisted_adjoint
    inst = load_twisted_adjoint(cartan)
    recs = [CheckRecord(f"coideal[{cartan}]", "relation coproducts lie in the ideal", inst.certificate.verify())]
    recs += check_antipode_axiom(inst)
    recs += inst.cell.confluence_probe(cfg["confluence_degree"])
    recs += inst.action.check_unit()
    recs += inst.action.check_respects_cell()
    recs += inst.action.check_relations_kill(inst.relations, suites.probes(inst.cell, cfg["probe_degree"]))
    recs += check_phi_relations(load_phi_lambda(inst), inst.relations, inst.certificate)
    b0 = suites.Bundle(cartan, inst.generators, inst.cell, inst.action,
                       load_phi_lambda(inst, (0,) * inst.cartan.rank), inst.relations, inst.certificate)
    recs += lambda_zero_suite(b0, cfg)
    return recs


def lambda_zero_suite(b: suites.Bundle, cfg: dict) -> list:
    """At λ = 0 the twisted action equals the base action on probes."""
    rng = random.Random(cfg["seed"])
    tw = b.twisted
    recs = []
    for _ in range(cfg["trivial_samples"]):
        w = suites.random_word(rng, b.generators, 2, 1)
        f = suites.random_poly(rng, b.cell, 2)
        got, want = tw.act_word(w, f), b.action.act_word(w, f)
        ok = got == want
        recs.append(CheckRecord(f"lambda-zero[{b.generators.render_word(w)}|{f.render()}]",
                                "λ = 0 reproduces the base action", ok, "" if ok else (got - want).render()))
    return recs


def cmd_verify(args, cfg: dict) -> int:
    t0 = time.perf_counter()
    params, recs = run_verify(args, cfg)
    elapsed = time.perf_counter() - t0 if args.timing else None
    rep = report(args.suite, params, recs, elapsed)
    write(dumps(rep), args.out)
    if args.out:
        print(f"{args.suite}: {rep['summary']['total'] - rep['summary']['failed']}/{rep['summary']['total']} passed")
    return EXIT_OK if rep["summary"]["failed"] == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# rep


LOWEST_WEIGHT_GENERATORS = {
    "sl2": lambda params: ["K"],
    "frt": lambda params: [f"L+_{{{i}{i}}}" for i in range(1, params["n"] + 1)],
    "adjoint": lambda params: [f"t{i}" for i in range(1, params["rank"] + 1)],
}


def build_module(args, cfg: dict):
    """``(name, params, CyclicSubmodule)`` for the requested instance at concrete parameters."""
    cutoff = cfg["dim_cutoff"]
    if args.instance == "sl2":
        from .instances.sl2 import build_rep
        sigma = parse_sigma(args.sigma)
        if sigma is None:
            raise UsageError("rep sl2 needs an integer --sigma")
        _, mod = build_rep(sigma, cutoff)
        return "sl2", {"sigma": sigma}, mod
    if args.instance == "frt":
        from .instances.frt import build_frt_rep
        check_series(args)
        if not args.weights:
            raise UsageError("rep frt needs --weights")
        weights = parse_int_list(args.weights, "--weights")
        if len(weights) != args.n - 1 or any(w < 0 for w in weights):
            raise UsageError(f"--weights needs {args.n - 1} nonnegative integers")
        _, mod = build_frt_rep(args.n, weights, cutoff)
        return "frt", {"series": "A", "n": args.n, "weights": list(weights)}, mod
    from .instances.adjoint import CartanData, build_adjoint_rep
    if not args.lam:
        raise UsageError("rep adjoint needs --lambda")
    cartan = CartanData.of_type(args.type)
    weight = parse_int_list(args.lam, "--lambda")
    if len(weight) != cartan.rank:
        raise UsageError(f"--lambda needs {cartan.rank} integers for {args.type}")
    _, mod = build_adjoint_rep(cartan, weight, cutoff)
    return "adjoint", {"type": args.type, "lambda": list(weight), "rank": cartan.rank}, mod


def lowest_weight_summary(name: str, params: dict, rep: RepMatrixSet) -> str:
    parts = []
    for x in LOWEST_WEIGHT_GENERATORS[name](params):
        v = rep.matrices[x].get(0, 0)
        parts.append(f"{x}·1 = {'0' if v is None else v.render()}")
    return "; ".join(parts)


def cmd_rep(args, cfg: dict) -> int:
    q = parse_substitute(args.substitute) if args.substitute else None
    name, params, mod = build_module(args, cfg)
    if mod.infinite:
        diag = {"dim_cutoff": cfg["dim_cutoff"], "partial_dim": mod.dim,
                "partial_basis": [b.render() for b in mod.basis[:8]]}
        sys.stderr.write(f"cyclic closure exceeded the cutoff {cfg['dim_cutoff']}\n" + dumps(diag))
        return EXIT_INFINITE
    data = archive(name, params, mod.matrices)
    if q is not None:
        try:
            data["substituted"] = {"q": str(q), "generators": substitute_archive(mod.matrices, q)}
        except ValueError:
            root = mod.matrices.ctx.root
            raise UsageError(f"--substitute q={q}: entries involve q^(1/{root}) and {q} has no rational "
                             f"root of order {root}; pick q with a rational q^(1/{root})") from None
    write(dumps(data), args.out)
    summary = f"{name}: dimension {mod.dim}; lowest weight {lowest_weight_summary(name, params, mod.matrices)}\n"
    (sys.stdout if args.out else sys.stderr).write(summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# phi-eval


def cmd_phi_eval(args, cfg: dict) -> int:
    b = bundle_for(args, certify=False)
    try:
        w = b.generators.parse_word(args.word)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"cannot parse word {args.word!r}: {exc}") from None
    val = b.phi.extend_word(w)
    out = {"instance": instance_params(args), "word": b.generators.render_word(w), "value": val.render(),
           "terms": val.to_json()}
    text = val.render() + "\n" + dumps(out)
    write(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _instance_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sigma", default=None, help="sl2: 'formal' or a nonnegative integer")
    p.add_argument("--series", default="A", help="frt: R-matrix series (A)")
    p.add_argument("--n", type=int, default=2, help="frt / R-matrix size N")
    p.add_argument("--weights", default=None, help="frt: lowest weight n1,...,n_{N-1}")
    p.add_argument("--type", default="A1", help="adjoint: Cartan type A1 or A2")
    p.add_argument("--lambda", dest="lam", default=None, help="adjoint: pairings <λ,α_i>, comma separated")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qorbit", description="Exact checks and representations for twisted module algebras.")
    p.add_argument("--config", default=None, help="key=value config file (default: $QORBIT_CONFIG)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification suite and emit a JSON report")
    v.add_argument("suite", help=", ".join(SUITES))
    v.add_argument("--instance", choices=("sl2", "frt", "adjoint"), default="sl2")
    _instance_options(v)
    v.add_argument("--n-max", type=int, default=8, help="eq35: largest exponent n")
    v.add_argument("--file", default=None, help="ybe / k-identities: JSON matrix or structure file")
    v.add_argument("--out", default=None)
    v.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")

    r = sub.add_parser("rep", help="build the cyclic module through 1 and write its matrices")
    r.add_argument("instance", choices=("sl2", "frt", "adjoint"))
    _instance_options(r)
    r.add_argument("--format", choices=("json",), default="json")
    r.add_argument("--substitute", default=None, help="also evaluate at q=<rational>")
    r.add_argument("--out", default=None)

    e = sub.add_parser("phi-eval", help="print the extended φ on a word")
    e.add_argument("instance", choices=("sl2", "frt", "adjoint"))
    e.add_argument("word", help="space separated generator names")
    _instance_options(e)
    e.add_argument("--out", default=None)
    return p


def _join_negative_values(argv: list) -> list:
    """Let ``--lambda -1,0`` through argparse by rewriting it as ``--lambda=-1,0``."""
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in ("--lambda", "--weights", "--sigma") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
        if args.command is None:
            raise UsageError("missing command: verify, rep or phi-eval")
        cfg = load_config(args.config)
        if args.command == "verify":
            if args.suite not in SUITES:
                raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
            return cmd_verify(args, cfg)
        if args.command == "rep":
            return cmd_rep(args, cfg)
        return cmd_phi_eval(args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"qorbit: error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"qorbit: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
