"""Density operators, pure states, ensembles and POVMs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DimensionError, DomainError, NormalizationError, PositivityError, ShapeError
from .qmath import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    dagger,
    hermitian_eigensystem,
    make_rng,
    max_norm,
    partial_trace,
    random_density,
    random_isometry,
    random_pure_state,
    random_unitary,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


def _resolve_dims(dims, n: int) -> tuple[int, ...]:
    if dims is None:
        return (n,)
    dims = tuple(int(d) for d in dims)
    if math.prod(dims) != n or any(d < 1 for d in dims):
        raise DimensionError(f"dims {dims} do not multiply to {n}")
    return dims


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Validated density matrix with an optional tensor-factor structure."""

    matrix: np.ndarray
    dims: tuple[int, ...] = None
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ShapeError(f"density matrix must be square, got {m.shape}")
        w, _ = hermitian_eigensystem(m, self.tol)
        if w[0] < -self.tol.psd:
            raise PositivityError(f"density matrix has eigenvalue {w[0]:.3e} < 0")
        tr = np.trace(m).real
        if abs(tr - 1.0) > self.tol.trace:
            raise NormalizationError(f"density matrix has trace {tr:.12g}, expected 1")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "dims", _resolve_dims(self.dims, m.shape[0]))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def from_vector(cls, vector, dims=None) -> "DensityOperator":
        v = np.asarray(vector, dtype=complex).reshape(-1, 1)
        return cls(v @ dagger(v), dims)

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigensystem(self.matrix, self.tol)[0]

    def is_pure(self, threshold: float = 1e-9) -> bool:
        return bool(self.eigenvalues()[-1] >= 1 - threshold)

    def reduce(self, keep) -> "DensityOperator":
        keep_idx = (keep,) if isinstance(keep, int) else tuple(sorted(keep))
        red = partial_trace(self.matrix, self.dims, keep_idx)
        return DensityOperator(red, tuple(self.dims[k] for k in keep_idx), self.tol)


@dataclass(frozen=True, eq=False)
class PureState:
    vector: np.ndarray
    dims: tuple[int, ...] = None

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex)
        if v.ndim == 2 and v.shape[1] == 1:
            v = v[:, 0]
        if v.ndim != 1 or v.size == 0:
            raise ShapeError(f"state vector must be a column, got shape {np.shape(self.vector)}")
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-12:
            raise NormalizationError(f"state vector has norm {nrm:.15g}, expected 1")
        object.__setattr__(self, "vector", _frozen(v))
        object.__setattr__(self, "dims", _resolve_dims(self.dims, v.size))

    @property
    def dim(self) -> int:
        return self.vector.size

    def density(self) -> DensityOperator:
        v = self.vector[:, None]
        return DensityOperator(v @ dagger(v), self.dims)


State = Union[DensityOperator, PureState]


def as_state(x) -> State:
    """Coerce arrays: a vector (or d x 1 column) becomes a PureState, a square matrix a DensityOperator."""
    if isinstance(x, (DensityOperator, PureState)):
        return x
    a = np.asarray(x, dtype=complex)
    if a.ndim == 1 or (a.ndim == 2 and a.shape[1] == 1 and a.shape[0] > 1):
        return PureState(a)
    return DensityOperator(a)


def as_density(x) -> DensityOperator:
    s = as_state(x)
    return s.density() if isinstance(s, PureState) else s


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Signal alphabet: probabilities ``probs[k]`` for preparation states ``states[k]``."""

    probs: np.ndarray
    states: tuple

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).ravel()
        states = tuple(as_state(s) for s in self.states)
        if p.size == 0 or p.size != len(states):
            raise DimensionError(
                f"ensemble needs matching non-empty lists, got {p.size} probs and {len(states)} states"
            )
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
            raise DomainError(f"ensemble probabilities must be non-negative and sum to 1, got {p}")
        dims = {s.dims for s in states}
        if len(dims) != 1:
            raise DimensionError(f"ensemble members have mixed dimensions {sorted(dims)}")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def densities(self) -> list[DensityOperator]:
        return [as_density(s) for s in self.states]

    def impurities(self, threshold: float = 1e-9) -> list[int]:
        """Indices of members that are not pure."""
        bad = []
        for k, s in enumerate(self.states):
            if isinstance(s, PureState):
                continue
            if not s.is_pure(threshold):
                bad.append(k)
        return bad


def mix(q: float, e1: Ensemble, e2: Ensemble) -> Ensemble:
    """Ensemble picking from ``e1`` with probability q and from ``e2`` otherwise."""
    probs = np.concatenate([q * e1.probs, (1 - q) * e2.probs])
    return Ensemble(probs, e1.states + e2.states)


def average_state(e: Ensemble) -> DensityOperator:
    rho = sum(p * d.matrix for p, d in zip(e.probs, e.densities()))
    rho = (rho + dagger(rho)) / 2
    return DensityOperator(rho, e.states[0].dims)


def purify(rho, seedless: bool = True) -> PureState:
    """Canonical purification on R (x) Q with dim R = rank(rho).

    ``|psi> = sum_i sqrt(l_i) |i>_R |v_i>_Q`` with eigenvalues descending and each
    ``v_i`` phased so its first significant component is real positive.
    The construction is deterministic; ``seedless`` is accepted for interface
    symmetry with the random constructors.
    """
    rho = as_density(rho)
    w, v = hermitian_eigensystem(rho.matrix, rho.tol)
    order = np.argsort(w, kind="stable")[::-1]
    order = [i for i in order if w[i] > rho.tol.eig_floor]
    r, d = len(order), rho.dim
    psi = np.zeros((r, d), dtype=complex)
    for row, i in enumerate(order):
        vec = v[:, i]
        j = int(np.argmax(np.abs(vec) > 1e-10))
        vec = vec * (abs(vec[j]) / vec[j])
        psi[row] = math.sqrt(w[i]) * vec
    psi = psi.ravel()
    return PureState(psi / np.linalg.norm(psi), (r, d))


def ensemble_from_purification(rho, u) -> Ensemble:
    """Pure-state ensemble with average ``rho``, from measuring the reference of
    :func:`purify` in the basis given by the rows of ``u`` (an m x rank isometry)."""
    rho = as_density(rho)
    psi = purify(rho)
    r, d = psi.dims
    u = as_matrix(u)
    if u.shape[1] != r:
        raise DimensionError(f"rotation must have {r} columns, got {u.shape}")
    if max_norm(dagger(u) @ u - np.eye(r)) > 1e-10:
        raise DomainError("rotation columns are not orthonormal")
    amp = u @ psi.vector.reshape(r, d)  # row j: unnormalized signal j
    probs = np.sum(np.abs(amp) ** 2, axis=1)
    keep = probs > 1e-14
    amp, probs = amp[keep], probs[keep]
    states = [PureState(a / np.linalg.norm(a), rho.dims) for a in amp]
    return Ensemble(probs / probs.sum(), states)


def random_rotated_ensemble(rho, n_signals: int, seed) -> Ensemble:
    rho = as_density(rho)
    r = purify(rho).dims[0]
    if n_signals < r:
        raise DomainError(f"need at least rank(rho) = {r} signals, got {n_signals}")
    return ensemble_from_purification(rho, random_isometry(n_signals, r, seed))


def eigendecomposition_ensemble(rho) -> Ensemble:
    rho = as_density(rho)
    w, v = hermitian_eigensystem(rho.matrix, rho.tol)
    idx = [i for i in range(len(w)) if w[i] > rho.tol.eig_floor]
    probs = w[idx] / w[idx].sum()
    return Ensemble(probs, [PureState(v[:, i], rho.dims) for i in idx])


@dataclass(frozen=True, eq=False)
class Povm:
    effects: tuple
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        effects = tuple(_frozen(as_matrix(e)) for e in self.effects)
        if not effects:
            raise DimensionError("a POVM needs at least one effect")
        shapes = {e.shape for e in effects}
        if len(shapes) != 1 or effects[0].shape[0] != effects[0].shape[1]:
            raise DimensionError(f"POVM effects must share one square shape, got {sorted(shapes)}")
        for j, e in enumerate(effects):
            w, _ = hermitian_eigensystem(e, self.tol)
            if w[0] < -self.tol.psd:
                raise PositivityError(f"POVM effect {j} has eigenvalue {w[0]:.3e} < 0")
        d = effects[0].shape[0]
        resid = max_norm(sum(effects) - np.eye(d))
        if resid > 1e-9:
            raise NormalizationError(f"POVM effects sum to identity only within {resid:.3e}")
        object.__setattr__(self, "effects", effects)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self):
        return len(self.effects)

    @classmethod
    def from_basis(cls, basis) -> "Povm":
        """Projective measurement onto the columns of a unitary."""
        b = as_matrix(basis)
        return cls([np.outer(b[:, j], b[:, j].conj()) for j in range(b.shape[1])])

    @classmethod
    def computational(cls, dim: int) -> "Povm":
        return cls.from_basis(np.eye(dim))


def random_povm(dim: int, n_outcomes: int, seed) -> Povm:
    """Effects ``B_j^dag B_j`` from the blocks of a random isometry (Naimark construction)."""
    if n_outcomes < 1:
        raise DomainError("n_outcomes must be >= 1")
    if n_outcomes == 1:
        return Povm([np.eye(dim)])
    v = random_isometry(dim * n_outcomes, dim, seed).reshape(n_outcomes, dim, dim)
    effects = [dagger(b) @ b for b in v]
    effects = [(e + dagger(e)) / 2 for e in effects]
    return Povm(effects)


def random_projective(dim: int, seed) -> Povm:
    return Povm.from_basis(random_unitary(dim, seed))


def measurement_distribution(rho, m: Povm) -> np.ndarray:
    rho = as_density(rho)
    if rho.dim != m.dim:
        raise DimensionError(f"state of dim {rho.dim} cannot be measured by a POVM on dim {m.dim}")
    p = np.array([np.trace(e @ rho.matrix).real for e in m.effects])
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def random_pure_ensemble(dim: int, n_signals: int, seed) -> Ensemble:
    rng = make_rng(seed)
    probs = rng.dirichlet(np.ones(n_signals)) if n_signals > 1 else np.ones(1)
    return Ensemble(probs, [PureState(random_pure_state(dim, rng)) for _ in range(n_signals)])


def random_mixed_ensemble(dim: int, n_signals: int, seed) -> Ensemble:
    rng = make_rng(seed)
    probs = rng.dirichlet(np.ones(n_signals)) if n_signals > 1 else np.ones(1)
    ranks = rng.integers(1, dim + 1, size=n_signals)
    return Ensemble(probs, [DensityOperator(random_density(dim, int(r), rng)) for r in ranks])


def ensemble_dims_check(e: Ensemble, dim: int, what: str = "channel input") -> None:
    if e.dim != dim:
        raise DimensionError(f"ensemble states have dim {e.dim}, {what} has dim {dim}")

