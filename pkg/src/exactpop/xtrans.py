"""Exact population transitions from the eigenvectors of ``W = E U``.

For an exchange operator ``E`` swapping ``|I>`` and ``|F>`` (up to phases)
and a propagator ``U(tau)``, ``<F|U psi> = e^{-i beta} <I|W psi>``. When
``psi`` is an eigenvector of the unitary ``W`` the modulus equals
``|<I|psi>|``, so every eigenvector of ``W`` is an initial state for which
``P_F(tau) = P_I(0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cxla import as_matrix, as_state, eigenpairs_to_arrays, unitary_deviation, unitary_eigendecomposition
from .errors import DegenerateInput, DimensionMismatch, ValidationError
from .hammod import HamiltonianSpec
from .prop import propagate

INPUT_UNITARY_TOL = 1e-8
PHASE_TOL = 1e-9


@dataclass(frozen=True)
class ExchangeSpec:
    dim: int
    i_index: int
    f_index: int
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.dim < 2:
            raise ValidationError(f"exchange needs dim >= 2, got {self.dim}")
        for name in ("i_index", "f_index"):
            k = getattr(self, name)
            if not 0 <= k < self.dim:
                raise IndexError(f"{name}={k} outside [0, {self.dim})")
        if self.i_index == self.f_index:
            raise IndexError("I and F must be different basis states (i_index != f_index)")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValidationError("exchange phases must be finite")


class PopulationReport(NamedTuple):
    P_I0: float
    P_F0: float
    P_Ftau: float
    significance: float


@dataclass(frozen=True)
class TransitionSet:
    """Eigenphases and eigenstates of ``W(tau)`` with their population reports.

    ``states[:, k]`` is the k-th initial state; ``phases[k]`` its eigenphase.
    """

    tau: float
    phases: np.ndarray
    eigenvalues: np.ndarray
    states: np.ndarray
    reports: tuple
    exchange: ExchangeSpec
    unitary: np.ndarray
    steps_used: int = 0
    error_estimate: float = 0.0

    def __len__(self):
        return len(self.phases)

    def state(self, k: int) -> np.ndarray:
        return self.states[:, k]

    def gram_deviation(self) -> float:
        g = self.states.conj().T @ self.states
        return float(np.max(np.abs(g - np.eye(len(self)))))

    def max_residual(self) -> float:
        """``max_k |P_F(tau) - P_I(0)|`` over the set, using its own propagator."""
        return max(abs(r.P_Ftau - r.P_I0) for r in self.reports)

    def best(self, direction: int = 1) -> int:
        """Index of the state with the largest ``direction * significance`` (first on ties)."""
        scores = [direction * r.significance for r in self.reports]
        return int(np.argmax(np.round(scores, 12)))

    def decompose(self, psi) -> np.ndarray:
        """Expansion coefficients ``C_k`` of ``psi`` over the set."""
        return self.states.conj().T @ as_state(psi)


def exchange_operator(spec: ExchangeSpec) -> np.ndarray:
    """``e^{i alpha}|F><I| + e^{i beta}|I><F| + (identity on the complement)``."""
    e = np.eye(spec.dim, dtype=complex)
    i, f = spec.i_index, spec.f_index
    e[i, i] = e[f, f] = 0.0
    e[f, i] = np.exp(1j * spec.alpha)
    e[i, f] = np.exp(1j * spec.beta)
    return e


def w_operator(exchange, u) -> np.ndarray:
    exchange, u = as_matrix(exchange), as_matrix(u)
    if exchange.shape != u.shape:
        raise DimensionMismatch(f"exchange {exchange.shape} and propagator {u.shape} differ")
    for name, m in (("exchange", exchange), ("propagator", u)):
        if unitary_deviation(m) > INPUT_UNITARY_TOL:
            raise ValidationError(f"{name} is not unitary")
    return exchange @ u


def population_report(psi0, u, exch: ExchangeSpec) -> PopulationReport:
    psi0 = as_state(psi0, normalize=False)
    u = np.asarray(u, dtype=complex)
    if psi0.shape[0] != exch.dim or u.shape != (exch.dim, exch.dim):
        raise DimensionMismatch(f"state dim {psi0.shape[0]}, propagator {u.shape}, exchange dim {exch.dim}")
    p_i0 = abs(psi0[exch.i_index]) ** 2
    p_f0 = abs(psi0[exch.f_index]) ** 2
    p_ft = abs(u[exch.f_index] @ psi0) ** 2
    return PopulationReport(float(p_i0), float(p_f0), float(p_ft), float(p_i0 - p_f0))


def transition_set_from_unitary(u, exch: ExchangeSpec, tau: float, steps_used: int = 0, error_estimate: float = 0.0):
    """Eigenset of ``W = E U`` for an already computed propagator."""
    u = as_matrix(u)
    w = w_operator(exchange_operator(exch), u)
    pairs = unitary_eigendecomposition(w)
    values, vectors = eigenpairs_to_arrays(pairs)
    phases = np.array([p.phase for p in pairs])
    reports = tuple(population_report(vectors[:, k], u, exch) for k in range(len(pairs)))
    return TransitionSet(float(tau), phases, values, vectors, reports, exch, u, steps_used, error_estimate)


def transition_set(spec: HamiltonianSpec, tau: float, exch: ExchangeSpec, steps: int | None = None) -> TransitionSet:
    """Complete orthonormal set of initial states with ``P_F(tau) = P_I(0)``."""
    if spec.dim != exch.dim:
        raise DimensionMismatch(f"model dim {spec.dim} != exchange dim {exch.dim}")
    if tau < 0:
        raise ValidationError(f"tau must be >= 0, got {tau}")
    p = propagate(spec, 0.0, tau, steps)
    return transition_set_from_unitary(p.unitary, exch, tau, p.steps_used, p.error_estimate)


def verify_exact(tset: TransitionSet, spec: HamiltonianSpec, exch: ExchangeSpec) -> float:
    """Re-propagate at doubled resolution and return ``max_k |P_F(tau) - P_I(0)|``."""
    steps = 2 * tset.steps_used if tset.steps_used > 1 else None
    u = propagate(spec, 0.0, tset.tau, steps).unitary
    return max(
        abs(population_report(tset.state(k), u, exch).P_Ftau - tset.reports[k].P_I0) for k in range(len(tset))
    )


class _AllTimes:
    """Marker returned when every time in the window satisfies the condition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ALL_TIMES"


ALL_TIMES = _AllTimes()


def _phase_residual(x: float) -> float:
    return abs(math.remainder(x, 2 * math.pi))


def superposition_exact_times(phase_lines, window, tol: float = PHASE_TOL):
    """Times ``T`` in the open ``window`` at which all eigenphases agree mod 2 pi.

    Each line ``(a_k, b_k)`` describes ``phi_k(T) = a_k + b_k T``. A superposition
    of the corresponding eigenstates is itself an eigenstate of ``W(T)``
    exactly at these times. Returns ``ALL_TIMES`` if the lines coincide
    modulo 2 pi for every ``T``.
    """
    lines = [(float(a), float(b)) for a, b in phase_lines]
    if len(lines) < 2:
        raise DegenerateInput("need at least two phase lines")
    t_min, t_max = (float(x) for x in window)
    if not (math.isfinite(t_min) and math.isfinite(t_max)) or t_max <= t_min:
        raise ValidationError(f"window must be finite with T_min < T_max, got {window}")
    a0, b0 = lines[0]
    diffs = [(a - a0, b - b0) for a, b in lines[1:]]
    if any(db == 0.0 and _phase_residual(da) > tol for da, db in diffs):
        return []
    moving = [(da, db) for da, db in diffs if db != 0.0]
    if not moving:
        return ALL_TIMES
    da, db = max(moving, key=lambda d: abs(d[1]))
    # da + db T = 2 pi K  ->  T = (2 pi K - da) / db
    k_lo, k_hi = sorted(((da + db * t_min) / (2 * math.pi), (da + db * t_max) / (2 * math.pi)))
    times = []
    for k in range(math.floor(k_lo), math.ceil(k_hi) + 1):
        t = (2 * math.pi * k - da) / db
        if not t_min < t < t_max:
            continue
        if all(_phase_residual(a + b * t) <= tol * max(1.0, abs(b * t)) for a, b in moving):
            times.append(t)
    return sorted(times)
