"""Propagators ``U(t0 -> t1)`` for every model in the catalog.

Time-dependent models use the midpoint exponential rule
``U <- exp(-i H(t + dt/2) dt) U``, which is unitary step by step and second
order in ``dt``. Accuracy is certified by step doubling: the returned
propagator is the finer of two runs and ``error_estimate`` is their Frobenius
distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cxla import as_matrix, expm_hermitian, expm_hermitian_batch, hermiticity_error, unitary_deviation
from .errors import DomainError, NotHermitian, NotUnitary, ValidationError
from .hammod import (
    SIGMA_Z,
    HamiltonianSpec,
    CustomTimeSeries,
    KickedTLS,
    breakpoints,
    build_hamiltonian,
    build_hamiltonian_batch,
    is_constant,
)

DRIFT_LIMIT = 1e-8
STEPS_PER_UNIT = 4096
MIN_STEPS = 64
CHUNK = 1 << 15


@dataclass(frozen=True)
class Propagation:
    unitary: np.ndarray
    steps_used: int
    error_estimate: float
    t0: float
    t1: float

    @property
    def deviation(self) -> float:
        return unitary_deviation(self.unitary)


def _checked(prop: Propagation) -> Propagation:
    dev = prop.deviation
    if dev > DRIFT_LIMIT:
        raise NotUnitary(f"propagator drifted from unitarity by {dev:.3e} (limit {DRIFT_LIMIT:.0e})")
    return prop


def su2_exp(angle: float, generator: np.ndarray) -> np.ndarray:
    """``exp(-i angle G)`` for a 2x2 generator with ``G^2 = 1`` (unit Pauli direction)."""
    return math.cos(angle) * np.eye(2, dtype=complex) - 1j * math.sin(angle) * generator


def ordered_product(stack: np.ndarray) -> np.ndarray:
    """``stack[n-1] @ ... @ stack[1] @ stack[0]`` by pairwise (tree) reduction.

    The pairing pattern depends only on the length, so the result is
    reproducible bit for bit.
    """
    if len(stack) == 0:
        raise ValueError("empty product")
    while len(stack) > 1:
        if len(stack) % 2:
            head = stack[1:-1:2] @ stack[0:-1:2]
            stack = np.concatenate([head, stack[-1:]])
        else:
            stack = stack[1::2] @ stack[0::2]
    return stack[0]


def propagate_static(h, duration: float) -> Propagation:
    """Exact ``exp(-i H duration)`` for a time-independent Hermitian ``H``."""
    h = as_matrix(h)
    if hermiticity_error(h) > 1e-10:
        raise NotHermitian("propagate_static needs a Hermitian matrix")
    u = expm_hermitian(h, duration)
    return _checked(Propagation(u, 1, 0.0, 0.0, float(duration)))


def propagate_kicked(spec: KickedTLS, tau: float) -> Propagation:
    """Two-factor product ``exp(-i omega sigma_z (tau - delta)) exp(-i varpi delta n.sigma)``."""
    if not isinstance(spec, KickedTLS):
        raise ValidationError("propagate_kicked needs a KickedTLS spec")
    if spec.delta > tau:
        raise DomainError(f"kick duration delta={spec.delta} exceeds tau={tau}")
    kick = su2_exp(spec.area, spec.kick_generator())
    free = su2_exp(spec.omega * (tau - spec.delta), SIGMA_Z)
    return _checked(Propagation(free @ kick, 2, 0.0, 0.0, float(tau)))


def _segments(spec: HamiltonianSpec, t0: float, t1: float, steps: int) -> list[tuple[float, float, int]]:
    cuts = [t0] + [b for b in breakpoints(spec) if t0 < b < t1] + [t1]
    span = t1 - t0
    return [(a, b, max(1, int(round(steps * (b - a) / span)))) for a, b in zip(cuts, cuts[1:])]


def _midpoint_run(spec: HamiltonianSpec, t0: float, t1: float, steps: int) -> tuple[np.ndarray, int]:
    dim = spec.dim
    u = np.eye(dim, dtype=complex)
    used = 0
    if isinstance(spec, KickedTLS) and spec.kick_area is not None and t0 <= 0.0 < t1:
        u = su2_exp(spec.kick_area, spec.kick_generator())
    for a, b, n in _segments(spec, t0, t1, steps):
        dt = (b - a) / n
        for start in range(0, n, CHUNK):
            idx = np.arange(start, min(start + CHUNK, n))
            hs = build_hamiltonian_batch(spec, a + (idx + 0.5) * dt)
            u = ordered_product(expm_hermitian_batch(hs, dt)) @ u
        used += n
    return u, used


def propagate_timedep(spec: HamiltonianSpec, t0: float, t1: float, steps: int) -> Propagation:
    """Midpoint-exponential propagator with a step-doubling error estimate.

    Interval breakpoints of piecewise models (kick end, time-series switches)
    are honoured exactly, so piecewise-constant specs are integrated exactly.
    """
    if not t1 > t0:
        raise DomainError(f"need t0 < t1, got t0={t0}, t1={t1}")
    if steps < 1:
        raise ValidationError(f"steps must be >= 1, got {steps}")
    coarse, _ = _midpoint_run(spec, t0, t1, steps)
    fine, used = _midpoint_run(spec, t0, t1, 2 * steps)
    err = float(np.linalg.norm(fine - coarse))
    return _checked(Propagation(fine, used, err, float(t0), float(t1)))


def default_steps(spec: HamiltonianSpec, t0: float, t1: float, per_unit: int = STEPS_PER_UNIT) -> int:
    """``per_unit`` steps per unit of ``time * ||H||`` (at least ``MIN_STEPS``)."""
    samples = np.linspace(t0, t1, 9)
    scale = max(np.linalg.norm(build_hamiltonian(spec, t), 2) for t in samples if _in_domain(spec, t))
    return max(MIN_STEPS, int(math.ceil(per_unit * (t1 - t0) * max(scale, 1e-3))))


def _in_domain(spec, t) -> bool:
    try:
        build_hamiltonian(spec, t)
    except DomainError:
        return False
    return True


def propagate(spec: HamiltonianSpec, t0: float, t1: float, steps: int | None = None) -> Propagation:
    """Propagator of any catalog model, choosing the exact route when one exists."""
    if t1 < t0:
        raise DomainError(f"need t0 <= t1, got t0={t0}, t1={t1}")
    if t1 == t0:
        return Propagation(np.eye(spec.dim, dtype=complex), 0, 0.0, float(t0), float(t1))
    if is_constant(spec):
        p = propagate_static(build_hamiltonian(spec, t0), t1 - t0)
        return Propagation(p.unitary, 1, 0.0, float(t0), float(t1))
    if isinstance(spec, KickedTLS) and t0 == 0.0 and spec.delta <= t1:
        return propagate_kicked(spec, t1)
    if steps is None:
        # piecewise-constant models are exact with one midpoint per piece
        steps = 1 if isinstance(spec, (KickedTLS, CustomTimeSeries)) else default_steps(spec, t0, t1)
    return propagate_timedep(spec, t0, t1, steps)


def propagate_series(spec: HamiltonianSpec, times, substeps: int) -> np.ndarray:
    """Cumulative propagators ``U(times[0] -> times[k])`` on an ascending grid.

    Each interval gets ``substeps`` midpoint steps. Returns an array of shape
    ``(len(times), dim, dim)`` whose first entry is the identity.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) < 1 or np.any(np.diff(times) <= 0):
        raise ValidationError("times must be a strictly ascending 1-d grid")
    out = np.empty((len(times), spec.dim, spec.dim), dtype=complex)
    out[0] = np.eye(spec.dim)
    for k in range(1, len(times)):
        step, _ = _midpoint_run(spec, times[k - 1], times[k], substeps)
        out[k] = step @ out[k - 1]
    return out
