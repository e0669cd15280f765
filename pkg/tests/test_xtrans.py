import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_hermitian, random_unitary
from exactpop.errors import DegenerateInput, DimensionMismatch, ValidationError
from exactpop.hammod import SIGMA_X, CustomStatic, DrivenTLS, StaticTLS, ThreeLevelChain, build_hamiltonian
from exactpop.prop import propagate
from exactpop.xtrans import (
    ALL_TIMES,
    ExchangeSpec,
    exchange_operator,
    population_report,
    superposition_exact_times,
    transition_set,
    transition_set_from_unitary,
    verify_exact,
    w_operator,
)


def test_exchange_matrices():
    np.testing.assert_array_equal(exchange_operator(ExchangeSpec(2, 0, 1)), SIGMA_X)
    e3 = exchange_operator(ExchangeSpec(3, 0, 2))
    np.testing.assert_array_equal(e3, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    e = exchange_operator(ExchangeSpec(2, 0, 1, alpha=math.pi / 2))
    np.testing.assert_allclose(e.conj().T @ e, np.eye(2), atol=1e-15)
    assert np.linalg.norm(e @ e - np.eye(2)) > 1


def test_exchange_validation():
    with pytest.raises(IndexError, match="i_index != f_index"):
        ExchangeSpec(2, 1, 1)
    with pytest.raises(IndexError):
        ExchangeSpec(3, 0, 3)
    with pytest.raises(ValidationError):
        ExchangeSpec(2, 0, 1, alpha=float("inf"))


def test_w_operator():
    np.testing.assert_array_equal(w_operator(SIGMA_X, np.eye(2)), SIGMA_X)
    with pytest.raises(DimensionMismatch):
        w_operator(SIGMA_X, np.eye(3))
    with pytest.raises(ValidationError):
        w_operator(SIGMA_X, 2 * np.eye(2))


def test_static_w_by_hand():
    e0, tau = 2.0, 1.0
    u = propagate(StaticTLS(e0, 0.0), 0, tau).unitary
    w = w_operator(SIGMA_X, u)
    np.testing.assert_allclose(w @ [1, 0], [0, np.exp(-1j * e0 * tau)], atol=1e-14)
    np.testing.assert_allclose(w @ [0, 1], [1, 0], atol=1e-14)


def test_three_level_exchange_commutes():
    e = exchange_operator(ExchangeSpec(3, 0, 2))
    h = build_hamiltonian(ThreeLevelChain(1.0), 0)
    assert np.linalg.norm(e @ h - h @ e) == 0


def test_static_tls_set():
    tset = transition_set(StaticTLS(2.0, 0.0), 1.0, ExchangeSpec(2, 0, 1))
    for k in range(2):
        psi = tset.state(k)
        target = np.array([1, (-1) ** k * np.exp(-1j)]) / math.sqrt(2)
        assert abs(abs(np.vdot(target, psi)) - 1) < 1e-12 or abs(np.vdot(target, psi)) < 1e-12
        np.testing.assert_allclose(tset.reports[k], (0.5, 0.5, 0.5, 0.0), atol=1e-12)
    assert tset.max_residual() < 1e-12


def test_three_level_phases():
    tset = transition_set(ThreeLevelChain(1.0), 1.0, ExchangeSpec(3, 0, 2))
    np.testing.assert_allclose(sorted(tset.phases), [-math.sqrt(2), math.sqrt(2), math.pi], atol=1e-12)


def test_population_report_basics():
    assert population_report([1, 0], np.eye(2), ExchangeSpec(2, 0, 1)) == (1.0, 0.0, 0.0, 1.0)


@given(st.integers(2, 8), st.integers(0, 2**31 - 1), st.floats(0.05, 3.0))
def test_random_static_sets(dim, seed, tau):
    rng = np.random.default_rng(seed)
    i, f = rng.choice(dim, 2, replace=False)
    exch = ExchangeSpec(dim, int(i), int(f), *rng.uniform(-np.pi, np.pi, 2))
    tset = transition_set(CustomStatic(random_hermitian(rng, dim)), tau, exch)
    assert tset.gram_deviation() < 1e-9
    assert tset.max_residual() < 1e-9
    assert np.max(abs(abs(tset.eigenvalues) - 1)) < 1e-10


@given(st.integers(0, 2**31 - 1))
def test_theorem_holds_for_any_unitary(seed):
    rng = np.random.default_rng(seed)
    u = random_unitary(rng, 5)
    tset = transition_set_from_unitary(u, ExchangeSpec(5, 3, 1, 0.4, -1.1), 1.0)
    assert tset.max_residual() < 1e-9


def test_decompose_round_trip(rng):
    tset = transition_set(ThreeLevelChain(0.8), 0.9, ExchangeSpec(3, 0, 2))
    psi = rng.normal(size=3) + 1j * rng.normal(size=3)
    psi /= np.linalg.norm(psi)
    np.testing.assert_allclose(tset.states @ tset.decompose(psi), psi, atol=1e-12)


def test_driven_set_verifies():
    spec = DrivenTLS(0.0, 1.0, 0.2, 1.0)
    exch = ExchangeSpec(2, 0, 1)
    tset = transition_set(spec, 5.0, exch)
    assert verify_exact(tset, spec, exch) < 1e-9


def test_best_selects_sign():
    tset = transition_set(DrivenTLS(0.0, 1.0, 0.2, 1.0), math.pi / 0.2, ExchangeSpec(2, 0, 1))
    assert tset.reports[tset.best(+1)].significance > 0.9
    assert tset.reports[tset.best(-1)].significance < -0.9


def test_superposition_times():
    times = superposition_exact_times([(math.pi, 0.0), (0.0, -math.sqrt(2))], (0.0, 5.0))
    assert times == pytest.approx([math.pi / math.sqrt(2)])
    assert superposition_exact_times([(0.3, 1.0), (0.3, 1.0)], (0.0, 1.0)) is ALL_TIMES
    with pytest.raises(DegenerateInput):
        superposition_exact_times([(0.0, 1.0)], (0.0, 1.0))
    with pytest.raises(ValidationError):
        superposition_exact_times([(0.0, 1.0), (0.0, 2.0)], (1.0, 0.0))


def test_incommensurate_lines_against_grid():
    lines = [(0.0, 1.0), (0.0, math.sqrt(2))]
    assert superposition_exact_times(lines, (0.0, 1.0)) == []
    ts = np.arange(1e-4, 1.0, 1e-4)
    gap = np.abs(np.angle(np.exp(1j * (math.sqrt(2) - 1) * ts)))
    assert gap.min() > 1e-5


@given(st.floats(0.2, 3.0), st.integers(1, 4))
def test_three_line_lattice(b, k):
    # lines with slopes b, 2b, 3b and zero offsets coincide at T = 2 pi K / b
    lines = [(0.0, b), (0.0, 2 * b), (0.0, 3 * b)]
    times = superposition_exact_times(lines, (0.0, 2 * math.pi * k / b + 0.5 / b))
    assert times == pytest.approx([2 * math.pi * m / b for m in range(1, k + 1)])
