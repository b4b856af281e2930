"""Shared fixtures and the independent sympy oracle."""
from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings

settings.register_profile("qorbit", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qorbit")

Q = sp.Symbol("q", positive=True)


def sym(name: str) -> sp.Symbol:
    return Q if name == "q" else sp.Symbol(name, positive=True)


def to_sympy(x) -> sp.Expr:
    """Independent view of a scalar: a sympy expression in ``q`` and the context's parameters."""
    from qorbit.scalars import LaurentScalar, ScalarFraction
    if isinstance(x, ScalarFraction):
        return to_sympy(x.num) / to_sympy(x.den)
    assert isinstance(x, LaurentScalar)
    ctx = x.ctx
    out = sp.Integer(0)
    for e, c in x.terms.items():
        t = sp.Rational(c.numerator, c.denominator)
        for name, k in zip(ctx.names, e):
            base = Q ** sp.Rational(1, ctx.root) if name == "v" else sym(name)
            t *= base ** k
        out += t
    return out


def same(a, expr) -> bool:
    return sp.simplify(to_sympy(a) - expr) == 0


def qn(x):
    """``[x]`` in sympy."""
    return (Q ** x - Q ** (-x)) / (Q - 1 / Q)


@pytest.fixture(scope="session")
def sl2():
    from qorbit.instances.sl2 import load_sl2
    return load_sl2()


@pytest.fixture(scope="session")
def frt2():
    from qorbit.instances.frt import load_frt
    return load_frt(2)


@pytest.fixture(scope="session")
def frt3():
    from qorbit.instances.frt import load_frt
    return load_frt(3)


@pytest.fixture(scope="session")
def adj1():
    from qorbit.instances.adjoint import load_twisted_adjoint
    return load_twisted_adjoint("A1")


@pytest.fixture(scope="session")
def adj2():
    from qorbit.instances.adjoint import load_twisted_adjoint
    return load_twisted_adjoint("A2")


ACCEPTANCE_LINES: list = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion; lines are repeated in the terminal summary."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
