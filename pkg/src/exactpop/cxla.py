"""Dense complex linear algebra: Hermitian and unitary eigendecompositions.

Everything here works on plain ``numpy`` complex arrays. Square matrices are
``(dim, dim)`` arrays, states are ``(dim,)`` arrays and eigenvectors are
returned as columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, NotHermitian, NotUnitary, ValidationError

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-8
GROUP_GAP = 1e-7
JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 30


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: np.ndarray

    @property
    def phase(self) -> float:
        return wrap_phase(np.angle(self.value))


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite square complex matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def as_state(v, normalize: bool = True) -> np.ndarray:
    a = np.asarray(v, dtype=complex).reshape(-1)
    if a.size < 1 or not np.all(np.isfinite(a)):
        raise ValidationError("state must be a non-empty finite vector")
    if normalize:
        n = np.linalg.norm(a)
        if n == 0:
            raise ValidationError("cannot normalize the zero vector")
        a = a / n
    return a


def basis_state(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def wrap_phase(phi: float) -> float:
    """Map a phase into (-pi, pi]."""
    phi = float(np.remainder(phi + np.pi, 2 * np.pi) - np.pi)
    if phi <= -np.pi + 1e-12:
        phi += 2 * np.pi
    return phi


def hermiticity_error(h: np.ndarray) -> float:
    """Relative Frobenius distance between ``h`` and its adjoint."""
    h = np.asarray(h)
    scale = max(np.linalg.norm(h), 1.0)
    return float(np.linalg.norm(h - h.conj().T) / scale)


def unitary_deviation(m) -> float:
    """``||M^dagger M - 1||_F``; zero iff ``m`` is exactly unitary."""
    m = np.asarray(m, dtype=complex)
    return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])))


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the leading largest amplitude is real positive.

    Ties within 1e-9 of the maximum modulus go to the lowest index, so the
    choice is stable against rounding noise.
    """
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-9)[0])
    return v * (np.conj(v[k]) / mags[k])


def _jacobi_rotation(a: np.ndarray, p: int, q: int) -> np.ndarray:
    """2x2 unitary block that zeroes ``a[p, q]`` of a Hermitian matrix."""
    b = a[p, q]
    mod = abs(b)
    ph = b / mod
    app, aqq = a[p, p].real, a[q, q].real
    theta = (aqq - app) / (2.0 * mod)
    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # phase-fix column q so the block is real symmetric, then a real rotation
    return np.array([[c, s], [-s * np.conj(ph), c * np.conj(ph)]], dtype=complex)


def jacobi_eigh(h: np.ndarray, rel_tol: float = JACOBI_REL_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Sweeps visit the pairs ``(p, q)`` in row-major order, which makes the result
    bit-reproducible. Returns ``(eigenvalues, vectors)`` unsorted.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if n == 1 or scale == 0.0:
        return a.diagonal().real.copy(), v
    thresh = rel_tol * scale
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= thresh:
            return a.diagonal().real.copy(), v
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                g = _jacobi_rotation(a, p, q)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    raise ConvergenceFailure(
        f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e}, threshold {thresh:.3e})",
        sweeps=max_sweeps,
        off_norm=off,
    )


def hermitian_eigendecomposition(h, method: str = "jacobi"):
    """Eigenvalues (ascending) and unitary eigenbasis of a Hermitian matrix.

    ``method`` is ``"jacobi"`` (default, deterministic cyclic Jacobi) or
    ``"lapack"`` (``numpy.linalg.eigh``).
    """
    h = as_matrix(h)
    if hermiticity_error(h) > HERMITIAN_TOL:
        raise NotHermitian(f"matrix is not Hermitian (relative error {hermiticity_error(h):.3e})")
    h = 0.5 * (h + h.conj().T)
    if method == "jacobi":
        w, v = jacobi_eigh(h)
        order = np.argsort(w, kind="stable")
        return w[order], v[:, order]
    if method == "lapack":
        w, v = np.linalg.eigh(h)
        return w, v
    raise ValidationError(f"unknown method {method!r}")


def expm_hermitian(h, t: float, method: str = "jacobi") -> np.ndarray:
    """``exp(-i h t)`` through the spectral decomposition of ``h``."""
    w, v = hermitian_eigendecomposition(h, method=method)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def expm_hermitian_batch(hs: np.ndarray, dt: float) -> np.ndarray:
    """Stacked ``exp(-i H_k dt)`` for an array of Hermitian matrices ``(n, d, d)``."""
    w, v = np.linalg.eigh(hs)
    return np.einsum("nij,nj,nkj->nik", v, np.exp(-1j * w * dt), v.conj())


def _group_by_gap(values: np.ndarray, gap: float) -> list[list[int]]:
    groups = [[0]]
    for k in range(1, len(values)):
        if values[k] - values[k - 1] <= gap:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def unitary_eigendecomposition(w, tol: float = UNITARY_TOL, group_gap: float = GROUP_GAP) -> list[EigenPair]:
    """Complete orthonormal eigendecomposition of a unitary matrix.

    ``W`` is normal, so its Hermitian part ``A=(W+W^dagger)/2`` and
    anti-Hermitian part ``B=(W-W^dagger)/2i`` commute. ``A`` is diagonalized
    first; clusters of ``A`` eigenvalues closer than ``group_gap`` are then
    split by diagonalizing ``B`` projected on the cluster. Conjugate pairs
    ``e^{+-i phi}`` share a real part, which is why the second stage matters.

    Pairs are sorted by eigenphase in (-pi, pi], ties broken by the index of
    the first significant amplitude. Each vector's largest amplitude is made
    real positive.
    """
    w = as_matrix(w)
    dev = unitary_deviation(w)
    if dev > tol:
        raise NotUnitary(f"matrix is not unitary (||W^dagger W - 1||_F = {dev:.3e})")
    wa = 0.5 * (w + w.conj().T)
    wb = (w - w.conj().T) / 2j
    avals, avecs = hermitian_eigendecomposition(wa)
    columns = []
    for group in _group_by_gap(avals, group_gap):
        vg = avecs[:, group]
        if len(group) > 1:
            bg = vg.conj().T @ wb @ vg
            _, y = hermitian_eigendecomposition(0.5 * (bg + bg.conj().T))
            vg = vg @ y
        columns.extend(vg.T)
    pairs = []
    for vec in columns:
        vec = canonical_phase(vec / np.linalg.norm(vec))
        value = complex(vec.conj() @ w @ vec)
        pairs.append(EigenPair(value, vec))

    def key(pair: EigenPair):
        lead = int(np.flatnonzero(np.abs(pair.vector) > 1e-8)[0])
        return (round(pair.phase, 9), lead)

    return sorted(pairs, key=key)


def eigenpairs_to_arrays(pairs: list[EigenPair]) -> tuple[np.ndarray, np.ndarray]:
    """Split pairs into ``(values, vectors-as-columns)``."""
    values = np.array([p.value for p in pairs], dtype=complex)
    vectors = np.column_stack([p.vector for p in pairs])
    return values, vectors
