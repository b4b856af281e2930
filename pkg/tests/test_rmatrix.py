import json
import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from qorbit.matrices import Matrix, embed, flip, identity
from qorbit.rmatrix import (a_series_r, build_a_series, eq39_check, k_identities_check, leg_commutation_check,
                            load_structure, matrix_inverse, matrix_size_to_n, matrix_to_json, run_suite,
                            structure_checks, ybe_check)
from qorbit.scalars import ParameterContext, ScalarFraction, q_minus_qinv

from conftest import Q, to_sympy

CTX = ParameterContext(("v",), 2)
ONE = ScalarFraction(CTX.one())


def sympy_r(n):
    R = sp.zeros(n * n)
    for i in range(n):
        for j in range(n):
            R[n * i + j, n * i + j] = Q if i == j else 1
            if i > j:
                R[n * i + j, n * j + i] = Q - 1 / Q
    return R


def to_sympy_matrix(m: Matrix):
    return sp.Matrix(m.nrows, m.ncols, lambda i, j: to_sympy(m.get(i, j, ScalarFraction(CTX.zero()))))


def test_sympy_oracle_ybe_n2():
    """Independent Kronecker-product check of the shipped N=2 matrix."""
    n = 2
    R = sympy_r(n)
    I = sp.eye(n)
    P = sp.zeros(n * n)
    for i in range(n):
        for j in range(n):
            P[n * i + j, n * j + i] = 1
    P23 = sp.kronecker_product(I, P)
    R12, R23 = sp.kronecker_product(R, I), sp.kronecker_product(I, R)
    R13 = P23 * R12 * P23
    assert sp.simplify(R12 * R13 * R23 - R23 * R13 * R12) == sp.zeros(8)
    assert sp.simplify(to_sympy_matrix(a_series_r(2, CTX)) - R) == sp.zeros(4)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ybe_a_series(n):
    assert all(r.ok for r in ybe_check(a_series_r(n, CTX)))


def test_ybe_identity():
    assert all(r.ok for r in ybe_check(identity(9, ONE)))


def test_ybe_negative_control():
    R = a_series_r(2, CTX)
    rows = {i: dict(r) for i, r in R.rows.items()}
    rows[2][1] = rows[2][1] + ONE
    recs = ybe_check(Matrix(4, 4, rows))
    assert not recs[0].ok and recs[0].witness.startswith("entry")


def test_ybe_bad_size():
    with pytest.raises(ValueError):
        ybe_check(identity(5, ONE))


def test_n2_difference_is_flip():
    S = build_a_series(2, CTX)
    R21i = matrix_inverse(embed(S.R, 2, (1, 0), 2), ONE)
    assert S.R - R21i == flip(2, ONE).scale(ScalarFraction(q_minus_qinv(CTX)))
    assert eq39_check(S).ok and S.K.is_zero()


def test_q_diagonal_values():
    S = build_a_series(2, CTX)
    vals = {S.Q.get(i, i) for i in range(4)}
    assert vals == {ScalarFraction(CTX.q(1)), ONE}


def test_lower_triangular_n3():
    assert build_a_series(3, CTX).R.is_lower_triangular()


@pytest.mark.parametrize("n", [2, 3])
def test_structure_and_k_identities(n):
    S = build_a_series(n, CTX)
    recs = structure_checks(S) + k_identities_check(S)
    assert all(r.ok for r in recs), [r for r in recs if not r.ok]


def test_r_commutes_with_q13q23_n3():
    S = build_a_series(3, CTX)
    Q13, Q23 = S.leg(S.Q, (0, 2)), S.leg(S.Q, (1, 2))
    R12 = S.leg(S.R, (0, 1))
    assert R12 @ Q13 @ Q23 == Q13 @ Q23 @ R12


def _dense_json(m):
    return matrix_to_json(m, CTX)["entries"]


def test_user_structure_failing_eq39_names_entry():
    data = {"n": 2, "R": _dense_json(a_series_r(2, CTX)), "C": [["1", "0"], ["0", "1"]]}
    S = load_structure(data)
    rec = eq39_check(S)
    assert not rec.ok and "entry (0, 0),(0, 0)" in rec.witness


def test_user_structure_from_strings_passes():
    n = 2
    R = [["q", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "q - q^-1", "1", "0"], ["0", "0", "0", "q"]]
    S = load_structure({"n": n, "R": R, "series": "A"})
    assert S.R == a_series_r(2, CTX)
    assert all(r.ok for r in run_suite(S))


def test_user_k_solves_diagonal_constraint():
    data = {"n": 2, "R": _dense_json(a_series_r(2, CTX)), "C": [["0", "1"], ["1", "0"]]}
    S = load_structure(data)
    recs = {r.id: r for r in k_identities_check(S)}
    assert recs["k-d1d2[N=2]"].ok


def test_matrix_size():
    assert matrix_size_to_n(9) == 3
    with pytest.raises(ValueError):
        matrix_size_to_n(8)


@settings(max_examples=30)
@given(st.lists(st.integers(-3, 3), min_size=16, max_size=16), st.lists(st.integers(1, 4), min_size=2, max_size=2))
def test_leg_commutation(entries, diag):
    A = Matrix.from_dense([[ScalarFraction(CTX.const(entries[4 * i + j])) for j in range(4)] for i in range(4)])
    C = Matrix.diagonal([ScalarFraction(CTX.q(d)) for d in diag])
    assert leg_commutation_check(A, C, 2).ok
