"""Dense complex linear algebra for small Hilbert spaces.

Vectors and matrices are plain complex128 numpy arrays.  The eigensolver is
a cyclic Jacobi sweep specialized to Hermitian matrices; everything here is
pure and reentrant.
"""

from __future__ import annotations

import math

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    DegenerateSpectrumError,
    DimensionMismatchError,
    InputError,
    NonHermitianError,
    SizeOverflowError,
)

MAX_SPECTRAL_DIM = 64
MAX_KRON_SIZE = 2 ** 24


def as_cvec(v) -> np.ndarray:
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim != 1 or a.size < 1:
        raise InputError("expected a 1-d complex vector of positive length")
    return a


def as_cmat(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InputError("expected a 2-d complex matrix")
    return a


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    a = as_cvec(a)
    b = as_cvec(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"inner: dims {a.size} vs {b.size}")
    return complex(np.vdot(a, b))


def norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=np.complex128)))


def is_unit(v: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    return abs(norm(v) - 1.0) <= tol.unit_norm


def require_unit(v: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    v = as_cvec(v)
    if not is_unit(v, tol):
        raise InputError(f"vector is not unit (norm {norm(v):.3e})")
    return v


def is_hermitian(m: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    m = as_cmat(m)
    if m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m - m.conj().T))) <= tol.hermitian


def is_projector(p: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    p = as_cmat(p)
    if not is_hermitian(p, tol):
        return False
    return float(np.linalg.norm(p @ p - p)) <= tol.projector


def projector(v: np.ndarray) -> np.ndarray:
    v = as_cvec(v)
    return np.outer(v, v.conj())


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two vectors or two matrices, with a size guard."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise InputError("kron needs two vectors or two matrices")
    if a.size * b.size > MAX_KRON_SIZE:
        raise SizeOverflowError(
            f"kron result size {a.size * b.size} exceeds guard {MAX_KRON_SIZE}"
        )
    return np.kron(a, b)


def _jacobi_rotate(h: np.ndarray, vecs: np.ndarray, p: int, q: int) -> None:
    """Zero h[p,q] (and h[q,p]) with a complex Givens rotation, in place."""
    hpq = h[p, q]
    r = abs(hpq)
    if r == 0.0:
        return
    phi = math.atan2(hpq.imag, hpq.real)
    theta = 0.5 * math.atan2(2.0 * r, (h[p, p] - h[q, q]).real)
    c = math.cos(theta)
    s = math.sin(theta)
    e = complex(math.cos(phi), math.sin(phi))
    rot = np.array([[c, -s * e], [s * e.conjugate(), c]], dtype=np.complex128)
    h[:, [p, q]] = h[:, [p, q]] @ rot
    h[[p, q], :] = rot.conj().T @ h[[p, q], :]
    vecs[:, [p, q]] = vecs[:, [p, q]] @ rot
    # kill roundoff residue; Hermiticity keeps the mirror element in sync
    h[p, q] = 0.0
    h[q, p] = 0.0


def spectral(
    h: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
    max_sweeps: int = 100,
) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs of a non-degenerate Hermitian matrix, ascending eigenvalue.

    Cyclic Jacobi rotations; rejects non-Hermitian input and spectra with a
    gap below ``tol.degenerate_gap`` (complete contexts need simple spectra).
    """
    h = as_cmat(h)
    n = h.shape[0]
    if h.shape[0] != h.shape[1]:
        raise NonHermitianError("matrix is not square")
    if n > MAX_SPECTRAL_DIM:
        raise InputError(f"dimension {n} exceeds supported maximum {MAX_SPECTRAL_DIM}")
    if not is_hermitian(h, tol):
        raise NonHermitianError("matrix is not Hermitian within tolerance")

    a = 0.5 * (h + h.conj().T)  # symmetrize roundoff before iterating
    scale = max(1.0, float(np.max(np.abs(a))))
    vecs = np.eye(n, dtype=np.complex128)
    target = 1e-14 * scale
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > target / max(1, n):
                    _jacobi_rotate(a, vecs, p, q)
    else:
        raise InputError("Jacobi iteration did not converge")

    vals = np.real(np.diag(a))
    order = np.argsort(vals)
    vals = vals[order]
    vecs = vecs[:, order]
    gaps = np.diff(vals)
    if n > 1 and float(np.min(gaps)) < tol.degenerate_gap:
        raise DegenerateSpectrumError(
            f"degenerate spectrum: minimal gap {float(np.min(gaps)):.3e}"
        )
    return [(float(vals[i]), vecs[:, i].copy()) for i in range(n)]


class Ray:
    """A unit vector up to global phase, with a canonical representative.

    The canonical gauge makes the first entry of magnitude above 1e-12 real
    and positive, so equality and hashing are well defined.  Hash keys round
    canonical entries at 1e-8; equality is the exact overlap test, so hash
    collisions are resolved correctly while nearby-but-distinct rays may
    share a bucket.
    """

    __slots__ = ("vector", "_key")

    def __init__(self, v: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES):
        v = as_cvec(v)
        nrm = norm(v)
        if nrm == 0.0:
            raise InputError("zero vector does not define a ray")
        v = v / nrm
        idx = int(np.argmax(np.abs(v) > 1e-12))
        phase = v[idx] / abs(v[idx])
        v = v / phase
        v.setflags(write=False)
        self.vector = v
        rounded = np.round(v * 1e8) / 1e8
        self._key = (v.size, rounded.tobytes())

    @property
    def dim(self) -> int:
        return self.vector.size

    def overlap(self, other: "Ray") -> float:
        return abs(inner(self.vector, other.vector))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ray):
            return NotImplemented
        if self.dim != other.dim:
            return False
        return self.overlap(other) >= 1.0 - DEFAULT_TOLERANCES.ray_equality

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Ray({np.array2string(self.vector, precision=4)})"


def random_unit(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
