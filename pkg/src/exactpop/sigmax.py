"""Significance of two-level exact transitions on the Bloch sphere.

Conventions: ``sigma_z = diag(1, -1)`` on ``(|0>, |1>) = (|I>, |F>)``. With
``s_i = Tr[U^dagger sigma_z U sigma_i] / 2`` and ``r = <sigma>`` one has
``P_I(0) = (1 + r_z)/2`` and ``P_F(tau) = (1 - s.r)/2``, so the exact
transition condition is the plane ``r_z + s.r = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np

from .cxla import as_matrix, as_state
from .errors import BadBloch, DimensionMismatch, ValidationError
from .hammod import PAULI, SIGMA_Z, HamiltonianSpec
from .xtrans import ExchangeSpec, transition_set

BLOCH_TOL = 1e-8
DEGENERATE_TOL = 1e-10


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    @classmethod
    def of(cls, v) -> "BlochVector":
        x, y, z = (float(c) for c in v)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def dot(self, other: "BlochVector") -> float:
        return float(self.as_array() @ other.as_array())


def s_vector(u) -> BlochVector:
    """Bloch direction of ``U^dagger sigma_z U``."""
    u = as_matrix(u)
    if u.shape != (2, 2):
        raise DimensionMismatch(f"need a 2x2 propagator, got {u.shape}")
    heis = u.conj().T @ SIGMA_Z @ u
    return BlochVector.of(0.5 * np.trace(heis @ p).real for p in PAULI)


def r_vector(psi) -> BlochVector:
    psi = as_state(psi, normalize=False)
    if psi.shape != (2,):
        raise DimensionMismatch(f"need a two-component state, got {psi.shape}")
    return BlochVector.of((psi.conj() @ p @ psi).real for p in PAULI)


def bloch_vectors(u, psi) -> tuple[BlochVector, BlochVector]:
    return s_vector(u), r_vector(psi)


def exact_condition_residual(s: BlochVector, r: BlochVector) -> float:
    """``|r_z + s.r|``, which is ``2 |P_F(tau) - P_I(0)|``."""
    return abs(r.z + s.dot(r))


def state_from_bloch(r) -> np.ndarray:
    """Pure state ``(cos(t/2), e^{i p} sin(t/2))`` with Bloch vector ``r``."""
    x, y, z = (r.x, r.y, r.z) if isinstance(r, BlochVector) else r
    theta = math.acos(max(-1.0, min(1.0, z)))
    phi = math.atan2(y, x)
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


class MaxSignificance(NamedTuple):
    psi: np.ndarray
    significance: float
    r: BlochVector
    degenerate: bool


def max_significance_state(s: BlochVector, direction: int = 1) -> MaxSignificance:
    """Pure state maximizing ``direction * (P_I(0) - P_F(0))`` on the exact-transition plane.

    The optimum is the normalized projection of ``direction * z`` onto the
    plane orthogonal to ``m = z + s``. ``s = -z`` leaves the plane
    unconstrained; ``s = +z`` pins ``r_z = 0`` and is reported degenerate.
    """
    if direction not in (1, -1):
        raise ValidationError(f"direction must be +1 or -1, got {direction}")
    if abs(s.norm() - 1.0) > BLOCH_TOL:
        raise BadBloch(f"|s| = {s.norm():.12f}, expected 1")
    zhat = np.array([0.0, 0.0, 1.0])
    m = zhat + s.as_array()
    mn = np.linalg.norm(m)
    degenerate = False
    if mn < DEGENERATE_TOL:
        r = direction * zhat
    else:
        mhat = m / mn
        v = zhat - (zhat @ mhat) * mhat
        vn = np.linalg.norm(v)
        if vn < DEGENERATE_TOL:
            degenerate = True
            r = np.array([1.0, 0.0, 0.0])
        else:
            r = direction * v / vn
    psi = state_from_bloch(r)
    rv = r_vector(psi)
    return MaxSignificance(psi, 0.0 if degenerate else rv.z, rv, degenerate)


def s_aligned_state(s: BlochVector) -> np.ndarray:
    """``[(s_x - i s_y)|0> + (1 - s_z)|1>] / sqrt(2 (1 - s_z))``, a tempting closed form kept for comparison.

    Its Bloch vector is ``s`` itself, so it satisfies ``r_z + s.r = 0`` only
    when ``s_z = -1``.
    """
    if s.z >= 1.0:
        raise BadBloch("formula undefined for s_z = 1")
    return np.array([s.x - 1j * s.y, 1.0 - s.z]) / math.sqrt(2 * (1.0 - s.z))


class ScanRow(NamedTuple):
    param: float
    best_P_I0: float
    best_significance: float
    branch: int


def significance_scan(
    family: Callable[[float], HamiltonianSpec],
    grid: Sequence[float],
    tau: Union[float, Callable[[float], float]],
    exch: ExchangeSpec,
    steps: int | None = None,
    direction: int = 1,
) -> list[ScanRow]:
    """For each grid value, the most significant eigenstate of ``W(tau)``.

    ``branch`` is that state's index in the phase-sorted eigenset. ``tau`` may
    depend on the scanned parameter.
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise ValidationError("scan grid is empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValidationError("scan grid must be ascending")
    rows = []
    for g in grid:
        t = tau(g) if callable(tau) else tau
        tset = transition_set(family(g), t, exch, steps)
        k = tset.best(direction)
        rep = tset.reports[k]
        rows.append(ScanRow(g, rep.P_I0, rep.significance, k))
    return rows
