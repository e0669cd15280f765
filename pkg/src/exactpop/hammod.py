"""Catalog of model Hamiltonians rendered to dense matrices at a given time.

Basis conventions: two-level models use ``(|0>, |1>)`` with
``sigma_z = diag(1, -1)``; spin models are ordered ``m = -j, ..., +j`` so that
``|-J>`` is index 0 and ``|J>`` is the last index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Optional, Union

import numpy as np

from .cxla import as_matrix, hermiticity_error
from .errors import BadSpin, DomainError, NotHermitian, ValidationError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def _check_finite(spec, names):
    for name in names:
        value = getattr(spec, name)
        if not np.all(np.isfinite(value)):
            raise ValidationError(f"{type(spec).__name__}.{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class StaticTLS:
    E0: float
    E1: float

    def __post_init__(self):
        _check_finite(self, ("E0", "E1"))

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class DrivenTLS:
    """``diag(E0, E1) + lambda cos(omega t) V`` with ``<0|V|1> = V01``."""

    E0: float
    E1: float
    lam: float
    omega: float
    V01: complex = 1.0

    def __post_init__(self):
        _check_finite(self, ("E0", "E1", "lam", "omega", "V01"))

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class KickedTLS:
    """Kick ``varpi (sigma_z cos eps + sigma_x sin eps)`` for ``t <= delta``, then ``omega sigma_z``.

    Setting ``kick_area`` selects the impulsive limit: ``delta`` must be 0 and
    the kick acts as ``exp(-i kick_area (sigma_z cos eps + sigma_x sin eps))``
    at ``t = 0``; ``varpi`` is then unused.
    """

    varpi: float
    delta: float
    epsilon: float
    omega: float
    kick_area: Optional[float] = None

    def __post_init__(self):
        _check_finite(self, ("varpi", "delta", "epsilon", "omega"))
        if self.delta < 0:
            raise ValidationError(f"KickedTLS.delta must be >= 0, got {self.delta}")
        if self.kick_area is not None:
            _check_finite(self, ("kick_area",))
            if self.delta != 0:
                raise ValidationError("KickedTLS.kick_area requires delta == 0 (impulsive limit)")

    @property
    def dim(self) -> int:
        return 2

    @property
    def area(self) -> float:
        return self.kick_area if self.kick_area is not None else self.varpi * self.delta

    def kick_generator(self) -> np.ndarray:
        return math.cos(self.epsilon) * SIGMA_Z + math.sin(self.epsilon) * SIGMA_X


@dataclass(frozen=True)
class ThreeLevelChain:
    Omega: float

    def __post_init__(self):
        _check_finite(self, ("Omega",))

    @property
    def dim(self) -> int:
        return 3


def smooth_schedule(x):
    """Default sweep shapes ``(b, t)`` of ``x = 2 eps / tau`` in [-1, 1].

    ``b = x`` is odd, ``t = exp(1 - 1/(1 - x^2))`` is even, equals 1 at the
    crossing and vanishes with all derivatives at ``x = +-1``.
    """
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1.0
    xs = np.where(inside, x, 0.0)
    t = np.where(inside, np.exp(1.0 - 1.0 / (1.0 - xs * xs)), 0.0)
    return x, t


def sine_schedule(x):
    """``b = sin(pi x / 2)``, ``t = cos(pi x / 2)``."""
    x = np.asarray(x, dtype=float)
    return np.sin(0.5 * np.pi * x), np.cos(0.5 * np.pi * x)


SCHEDULES = {"smooth": smooth_schedule, "sine": sine_schedule}


@dataclass(frozen=True)
class ZeemanSweep:
    """``H = B(eps) J_z + T(eps) J_x`` with ``eps = tau/2 - t``, ``0 <= t <= tau``.

    ``B(eps) = B0 b(2 eps/tau)`` and ``T(eps) = T0 t(2 eps/tau)`` with the shape
    pair taken from ``SCHEDULES[schedule]``.
    """

    j: float
    B0: float
    T0: float
    tau: float
    schedule: str = "smooth"

    def __post_init__(self):
        _check_finite(self, ("j", "B0", "T0", "tau"))
        check_spin(self.j)
        if self.tau <= 0:
            raise ValidationError(f"ZeemanSweep.tau must be > 0, got {self.tau}")
        if self.schedule not in SCHEDULES:
            raise ValidationError(f"unknown Zeeman schedule {self.schedule!r}; choose from {sorted(SCHEDULES)}")

    @property
    def dim(self) -> int:
        return int(round(2 * self.j)) + 1

    def fields_at(self, t: float) -> tuple[float, float]:
        """``(B, T)`` at time ``t``."""
        if not 0.0 <= t <= self.tau:
            raise DomainError(f"ZeemanSweep defined on [0, {self.tau}], got t={t}")
        x = (0.5 * self.tau - t) / (0.5 * self.tau)
        b, tr = SCHEDULES[self.schedule](x)
        return self.B0 * float(b), self.T0 * float(tr)


@dataclass(frozen=True)
class CustomStatic:
    matrix: np.ndarray = field(compare=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if hermiticity_error(m) > 1e-12:
            raise NotHermitian("CustomStatic.matrix must be Hermitian")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class CustomTimeSeries:
    """Piecewise-constant Hamiltonian: ``matrices[k]`` holds on ``[times[k], times[k+1])``.

    The last matrix holds for every ``t >= times[-1]``.
    """

    times: tuple
    matrices: tuple = field(compare=False)

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        mats = tuple(as_matrix(m) for m in self.matrices)
        if not times or len(times) != len(mats):
            raise ValidationError("CustomTimeSeries needs one matrix per time point")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError("CustomTimeSeries.times must be strictly ascending")
        if not np.all(np.isfinite(times)):
            raise ValidationError("CustomTimeSeries.times must be finite")
        if len({m.shape for m in mats}) != 1:
            raise ValidationError("CustomTimeSeries matrices must share one dimension")
        for m in mats:
            if hermiticity_error(m) > 1e-12:
                raise NotHermitian("CustomTimeSeries matrices must be Hermitian")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "matrices", mats)

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]


HamiltonianSpec = Union[StaticTLS, DrivenTLS, KickedTLS, ThreeLevelChain, ZeemanSweep, CustomStatic, CustomTimeSeries]

MODEL_TYPES = {
    cls.__name__: cls
    for cls in (StaticTLS, DrivenTLS, KickedTLS, ThreeLevelChain, ZeemanSweep, CustomStatic, CustomTimeSeries)
}


def model_fields(cls) -> list[str]:
    return [f.name for f in fields(cls)]


def is_constant(spec: HamiltonianSpec) -> bool:
    return isinstance(spec, (StaticTLS, ThreeLevelChain, CustomStatic))


def breakpoints(spec: HamiltonianSpec) -> list[float]:
    """Times where a piecewise model switches Hamiltonian."""
    if isinstance(spec, KickedTLS):
        return [spec.delta] if spec.delta > 0 else [0.0]
    if isinstance(spec, CustomTimeSeries):
        return list(spec.times[1:])
    return []


# ---------------------------------------------------------------- angular momentum


def check_spin(j: float) -> int:
    """Return ``2j`` after checking ``j`` is a non-negative half-integer."""
    two_j = 2 * j
    if j < 0 or abs(two_j - round(two_j)) > 1e-12:
        raise BadSpin(f"j must be a non-negative half-integer, got {j}")
    return int(round(two_j))


@dataclass(frozen=True)
class AngularMomentumOps:
    j: float
    Jz: np.ndarray
    Jx: np.ndarray
    Jy: np.ndarray


def angular_momentum(j: float) -> AngularMomentumOps:
    """Spin-``j`` matrices in the basis ``m = -j, ..., j`` (hbar = 1)."""
    two_j = check_spin(j)
    m = -j + np.arange(two_j + 1)
    jplus = np.zeros((two_j + 1, two_j + 1), dtype=complex)
    for k in range(two_j):
        jplus[k + 1, k] = math.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    jminus = jplus.conj().T
    return AngularMomentumOps(
        j=j,
        Jz=np.diag(m).astype(complex),
        Jx=(jplus + jminus) / 2,
        Jy=(jplus - jminus) / 2j,
    )


# ---------------------------------------------------------------- rendering


def build_hamiltonian(spec: HamiltonianSpec, t: float) -> np.ndarray:
    """Hermitian matrix of ``spec`` at time ``t``."""
    if isinstance(spec, StaticTLS):
        return np.diag([spec.E0, spec.E1]).astype(complex)
    if isinstance(spec, DrivenTLS):
        v = np.array([[0, spec.V01], [np.conj(spec.V01), 0]], dtype=complex)
        return np.diag([spec.E0, spec.E1]).astype(complex) + spec.lam * math.cos(spec.omega * t) * v
    if isinstance(spec, KickedTLS):
        if t < 0:
            raise DomainError(f"KickedTLS is defined for t >= 0, got t={t}")
        if spec.kick_area is not None:
            if t == 0:
                raise DomainError("impulsive kick has no finite Hamiltonian at t=0")
            return spec.omega * SIGMA_Z
        if t <= spec.delta:
            return spec.varpi * spec.kick_generator()
        return spec.omega * SIGMA_Z
    if isinstance(spec, ThreeLevelChain):
        return spec.Omega * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex)
    if isinstance(spec, ZeemanSweep):
        b, tr = spec.fields_at(t)
        ops = angular_momentum(spec.j)
        return b * ops.Jz + tr * ops.Jx
    if isinstance(spec, CustomStatic):
        return spec.matrix.copy()
    if isinstance(spec, CustomTimeSeries):
        if t < spec.times[0]:
            raise DomainError(f"CustomTimeSeries starts at t={spec.times[0]}, got t={t}")
        k = int(np.searchsorted(spec.times, t, side="right")) - 1
        return spec.matrices[k].copy()
    raise TypeError(f"not a HamiltonianSpec: {type(spec).__name__}")


def build_hamiltonian_batch(spec: HamiltonianSpec, ts: np.ndarray) -> np.ndarray:
    """Stacked ``build_hamiltonian`` over an array of times, shape ``(n, d, d)``."""
    ts = np.asarray(ts, dtype=float)
    if isinstance(spec, DrivenTLS):
        v = np.array([[0, spec.V01], [np.conj(spec.V01), 0]], dtype=complex)
        h0 = np.diag([spec.E0, spec.E1]).astype(complex)
        return h0[None] + (spec.lam * np.cos(spec.omega * ts))[:, None, None] * v[None]
    if isinstance(spec, ZeemanSweep):
        if ts.size and (ts.min() < 0 or ts.max() > spec.tau):
            raise DomainError(f"ZeemanSweep defined on [0, {spec.tau}]")
        ops = angular_momentum(spec.j)
        b, tr = SCHEDULES[spec.schedule]((0.5 * spec.tau - ts) / (0.5 * spec.tau))
        return (spec.B0 * b)[:, None, None] * ops.Jz[None] + (spec.T0 * tr)[:, None, None] * ops.Jx[None]
    return np.stack([build_hamiltonian(spec, t) for t in ts]) if ts.size else np.zeros((0, spec.dim, spec.dim), complex)
