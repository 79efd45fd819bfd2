"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionError,
    DomainError,
    NormalizationError,
    NumericError,
    PositivityError,
    ShapeError,
    SizeLimitError,
)


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every validating operation."""

    herm: float = 1e-10  # relative, max-norm
    psd: float = 1e-9
    trace: float = 1e-9
    eig_floor: float = 1e-12
    max_dim: int = 4096


DEFAULT_TOL = Tolerances()


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def max_norm(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def check_size(n: int, tol: Tolerances = DEFAULT_TOL) -> None:
    if n > tol.max_dim:
        raise SizeLimitError(f"dimension {n} exceeds the cap of {tol.max_dim}")


def tensor_product(a, b, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    check_size(a.shape[0] * b.shape[0], tol)
    check_size(a.shape[1] * b.shape[1], tol)
    return np.kron(a, b)


def partial_trace(m, dims: Sequence[int], keep) -> np.ndarray:
    """Reduce ``m`` (acting on the tensor product of ``dims``) to the factors in ``keep``.

    Kept factors appear in ascending index order in the result.
    """
    m = as_matrix(m)
    dims = tuple(int(d) for d in dims)
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(d < 1 for d in dims):
        raise DimensionError(f"subsystem dimensions must be positive, got {dims}")
    total = math.prod(dims)
    if m.shape != (total, total):
        raise DimensionError(f"matrix of shape {m.shape} does not match dims {dims}")
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"keep={keep} is not a non-empty subset of factors 0..{n - 1}")

    t = m.reshape(dims + dims)
    # trace out from the highest factor down so remaining axis numbers stay valid
    nleft = n
    for axis in reversed(range(n)):
        if axis in keep:
            continue
        t = np.trace(t, axis1=axis, axis2=axis + nleft)
        nleft -= 1
    kd = math.prod(dims[k] for k in keep)
    return t.reshape(kd, kd)


def hermitian_eigensystem(m, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"matrix is not square: {m.shape}")
    scale = max_norm(m)
    asym = max_norm(m - dagger(m))
    if asym > tol.herm * max(scale, 1e-300):
        raise ShapeError(f"matrix is not Hermitian: ||m - m^dag||_max = {asym:.3e}")
    try:
        w, v = np.linalg.eigh((m + dagger(m)) / 2)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    return w, v


def _entropy_bits(p: np.ndarray) -> float:
    return float(-np.sum(p * np.log2(p))) if p.size else 0.0


def von_neumann_entropy(rho, tol: Tolerances = DEFAULT_TOL) -> float:
    w, _ = hermitian_eigensystem(rho, tol)
    if w.size and w[0] < -tol.psd:
        raise PositivityError(f"density matrix has eigenvalue {w[0]:.3e} < 0")
    tr = float(np.sum(w))
    if abs(tr - 1.0) > tol.trace:
        raise NormalizationError(f"density matrix has trace {tr:.12g}, expected 1")
    s = _entropy_bits(w[w > tol.eig_floor])
    return min(max(s, 0.0), math.log2(len(w)))


def binary_entropy(p: float) -> float:
    if not -1e-12 <= p <= 1 + 1e-12:
        raise DomainError(f"binary entropy needs p in [0, 1], got {p}")
    p = min(max(float(p), 0.0), 1.0)
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def shannon_entropy(probs) -> float:
    p = np.asarray(probs, dtype=float)
    return _entropy_bits(p[p > 0])


# --- seeded randomness -----------------------------------------------------
# One bit generator for the whole project (PCG64) so seeds reproduce.


def make_rng(seed) -> np.random.Generator:
    """Accept an integer seed or pass an existing generator through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2)


def random_unitary(dim: int, seed, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian matrix, R's diagonal phases removed."""
    if dim < 1:
        raise DomainError(f"dim must be >= 1, got {dim}")
    check_size(dim, tol)
    rng = make_rng(seed)
    q, r = np.linalg.qr(_ginibre(rng, dim, dim))
    d = np.diag(r)
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * phases


def random_isometry(rows: int, cols: int, seed, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    if cols > rows:
        raise DomainError(f"an isometry needs rows >= cols, got {rows} x {cols}")
    return random_unitary(rows, seed, tol)[:, :cols]


def random_pure_state(dim: int, seed) -> np.ndarray:
    if dim < 1:
        raise DomainError(f"dim must be >= 1, got {dim}")
    v = _ginibre(make_rng(seed), dim, 1)
    return v / np.linalg.norm(v)


def random_density(dim: int, rank: int, seed) -> np.ndarray:
    """Mixture of ``rank`` random pure states with flat-Dirichlet weights."""
    if not 1 <= rank <= dim:
        raise DomainError(f"rank must satisfy 1 <= rank <= dim, got rank={rank}, dim={dim}")
    rng = make_rng(seed)
    weights = rng.dirichlet(np.ones(rank)) if rank > 1 else np.ones(1)
    rho = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        v = random_pure_state(dim, rng)
        rho += w * (v @ dagger(v))
    rho = (rho + dagger(rho)) / 2
    return rho / np.trace(rho).real


def random_kraus(dim_in: int, dim_out: int, n_kraus: int, seed) -> list[np.ndarray]:
    """Kraus operators cut from a random isometry C^dim_in -> C^dim_out (x) C^n_kraus."""
    if n_kraus < 1 or dim_out * n_kraus < dim_in:
        raise DomainError(
            f"cannot build {n_kraus} Kraus operators for a {dim_in} -> {dim_out} channel"
        )
    v = random_isometry(dim_out * n_kraus, dim_in, seed)
    blocks = v.reshape(dim_out, n_kraus, dim_in)
    return [np.ascontiguousarray(blocks[:, k, :]) for k in range(n_kraus)]


def trace_distance(a, b) -> float:
    d = as_matrix(a) - as_matrix(b)
    w = np.linalg.eigvalsh((d + dagger(d)) / 2)
    return 0.5 * float(np.sum(np.abs(w)))
