import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxkcolor.spectral import (MarkovOperator, beckner, dmr_entry, dmr_integer_matrix, dmr_operator, eigenvalues,
                                jacobi_eigh, pair_index, power_iteration_second, spectral_radius,
                                tsquare_closed_form, tsquare_lower_bound)


def test_markov_validation():
    with pytest.raises(ValueError):
        MarkovOperator(np.array([[0.5, 0.6], [0.5, 0.5]]))
    with pytest.raises(ValueError):
        MarkovOperator(np.array([[1.0, 0.0], [0.5, 0.5]]))
    op = MarkovOperator(np.array([[1.0, 0.0], [0.5, 0.5]]), symmetric=False)
    with pytest.raises(ValueError):
        eigenvalues(op)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.floats(0, 1))
def test_beckner_spectrum(q, rho):
    op = beckner(q, rho)
    w = eigenvalues(op)
    assert w[0] == pytest.approx(1, abs=1e-12)
    assert np.allclose(w[1:], rho, atol=1e-12)
    assert spectral_radius(op) == pytest.approx(rho, abs=1e-12)


def test_beckner_rejects_negative_entries():
    with pytest.raises(ValueError):
        beckner(4, -0.5)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 24), st.integers(0, 10**6))
def test_jacobi_against_numpy(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    A = A + A.T
    w, V = jacobi_eigh(A)
    assert np.allclose(w, np.sort(np.linalg.eigvalsh(A))[::-1], atol=1e-9)
    assert np.abs(V @ np.diag(w) @ V.T - A).max() < 1e-9
    assert np.abs(V.T @ V - np.eye(n)).max() < 1e-9


def test_jacobi_rejects_asymmetric():
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))


@pytest.mark.parametrize("q", range(4, 17))
def test_pair_operator_structure(q):
    T = dmr_operator(q).matrix
    assert np.abs(T - T.T).max() == 0
    assert np.abs(T.sum(axis=0) - 1).max() < 1e-12
    assert np.abs(T.sum(axis=1) - 1).max() < 1e-12
    assert not np.diag(T).any()


@pytest.mark.parametrize("q", [4, 5, 7])
def test_pair_operator_never_keeps_a_coordinate(q):
    for a, b, c, d in itertools.product(range(q), repeat=4):
        if dmr_entry(q, (a, b), (c, d)):
            assert a != c and b != d


@pytest.mark.parametrize("q", [4, 5, 6])
def test_integer_form_rows(q):
    N, D = dmr_integer_matrix(q)
    assert (N.sum(axis=1) == D).all()


@pytest.mark.parametrize("q", range(6, 11))
def test_tsquare_closed_form(q):
    T = dmr_operator(q).matrix
    T2 = T @ T
    for a, b, c, d in itertools.product(range(q), repeat=4):
        assert abs(T2[pair_index(a, b, q), pair_index(c, d, q)] - float(tsquare_closed_form(q, (a, b), (c, d)))) <= 1e-12


@pytest.mark.parametrize("q", range(6, 12))
def test_tsquare_entries_above_lower_bound(q):
    lb = tsquare_lower_bound(q)
    assert isinstance(lb, Fraction)
    for x in itertools.product(range(q), repeat=2):
        for y in itertools.product(range(q), repeat=2):
            assert tsquare_closed_form(q, x, y) >= lb


@pytest.mark.parametrize("q", [6, 8, 10])
def test_spectral_radius_cross_checks(q):
    op = dmr_operator(q)
    rho = spectral_radius(op)
    w = np.linalg.eigvalsh(op.matrix)
    assert rho == pytest.approx(np.sort(np.abs(w))[-2], abs=1e-10)
    assert np.sqrt(power_iteration_second(op)) == pytest.approx(rho, abs=1e-8)
    assert rho <= 4 / (q - 1) + 1e-9


def test_to_json_round_trip():
    op = beckner(3, 0.5)
    doc = op.to_json()
    assert doc["dim"] == 3 and np.allclose(np.array(doc["matrix"]), op.matrix)
