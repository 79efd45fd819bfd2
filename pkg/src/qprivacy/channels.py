"""Quantum channels in Kraus form, their Stinespring isometry and the
complementary (environment) channel.

The dilation is canonical: ``V = sum_k K_k (x) |k>_E`` maps the input into
``Q' (x) E'`` with the output system as the first tensor factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError, DomainError, NotAChannelError, NotCPError, ShapeError
from .qmath import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    check_size,
    dagger,
    max_norm,
    partial_trace,
    random_kraus,
)
from .states import DensityOperator, as_density

KRAUS_TRIM = 1e-12
TP_TOL = 1e-9


def _choi(kraus: Sequence[np.ndarray]) -> np.ndarray:
    # column k of vecs is sum_i |i> (x) K_k|i>, i.e. vec of K_k^T in row-major order
    vecs = np.stack([np.asarray(k).T.reshape(-1) for k in kraus], axis=1)
    return vecs @ dagger(vecs)


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """CPTP map given by Kraus operators (each ``dim_out x dim_in``).

    Construction validates trace preservation and complete positivity and drops
    Kraus operators whose max-norm is below 1e-12.
    """

    kraus: tuple
    name: str | None = None
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        ops = [as_matrix(k) for k in self.kraus]
        if not ops:
            raise ShapeError("a channel needs at least one Kraus operator")
        shapes = {k.shape for k in ops}
        if len(shapes) != 1:
            raise ShapeError(f"Kraus operators have inconsistent shapes {sorted(shapes)}")
        dim_out, dim_in = ops[0].shape
        kept = [k for k in ops if max_norm(k) >= KRAUS_TRIM]
        if not kept:
            kept = ops[:1]
        tp = sum(dagger(k) @ k for k in kept)
        resid = max_norm(tp - np.eye(dim_in))
        if resid > TP_TOL:
            raise NotAChannelError(
                f"Kraus operators are not trace preserving: ||sum K^dag K - I||_max = {resid:.12g}",
                resid,
            )
        if len(kept) > dim_in * dim_out:
            raise DomainError(
                f"{len(kept)} Kraus operators exceed the maximum dim_in*dim_out = {dim_in * dim_out}"
            )
        check_size(dim_out * len(kept), self.tol)
        w = np.linalg.eigvalsh(_choi(kept))
        if w[0] < -self.tol.psd:
            raise NotCPError(f"Choi matrix has eigenvalue {w[0]:.3e} < 0", float(w[0]))
        frozen = []
        for k in kept:
            k = np.array(k, dtype=complex)
            k.flags.writeable = False
            frozen.append(k)
        object.__setattr__(self, "kraus", tuple(frozen))

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def dim_env(self) -> int:
        return len(self.kraus)

    def __call__(self, rho) -> DensityOperator:
        return apply(self, rho)


def make_channel(kraus, name: str | None = None, tol: Tolerances = DEFAULT_TOL) -> QuantumChannel:
    return QuantumChannel(tuple(kraus), name, tol)


def _input(ch: QuantumChannel, rho) -> DensityOperator:
    rho = as_density(rho)
    if rho.dim != ch.dim_in:
        raise DimensionError(f"channel expects input dim {ch.dim_in}, got {rho.dim}")
    return rho


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + dagger(m)) / 2


def apply(ch: QuantumChannel, rho) -> DensityOperator:
    rho = _input(ch, rho)
    out = sum(k @ rho.matrix @ dagger(k) for k in ch.kraus)
    return DensityOperator(_hermitize(out), tol=rho.tol)


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    matrix: np.ndarray  # (dim_out * dim_env) x dim_in, rows indexed (output, environment)
    dim_out: int
    dim_env: int

    @property
    def dim_in(self) -> int:
        return self.matrix.shape[1]


def stinespring(ch: QuantumChannel) -> StinespringIsometry:
    v = np.stack(ch.kraus, axis=1)  # (dim_out, dim_env, dim_in)
    v = v.reshape(ch.dim_out * ch.dim_env, ch.dim_in)
    return StinespringIsometry(v, ch.dim_out, ch.dim_env)


def joint_output(ch: QuantumChannel, rho) -> DensityOperator:
    """State of ``Q' (x) E'`` after the interaction, before any trace."""
    rho = _input(ch, rho)
    v = stinespring(ch)
    out = v.matrix @ rho.matrix @ dagger(v.matrix)
    return DensityOperator(_hermitize(out), (ch.dim_out, ch.dim_env), rho.tol)


def environment_matrix(ch: QuantumChannel, rho) -> np.ndarray:
    """``W[j, k] = Tr(K_j rho K_k^dag)``, the environment's output in the Kraus basis."""
    rho = _input(ch, rho)
    ks = np.stack(ch.kraus)  # (n, dim_out, dim_in)
    w = np.einsum("jai,il,kal->jk", ks, rho.matrix, ks.conj())
    return _hermitize(w)


def complementary_apply(ch: QuantumChannel, rho) -> DensityOperator:
    return DensityOperator(environment_matrix(ch, rho), tol=as_density(rho).tol)


def choi_matrix(ch: QuantumChannel) -> np.ndarray:
    """``(I (x) E)(|Omega><Omega|)`` with ``|Omega> = sum_i |i>|i>`` unnormalized."""
    return _choi(ch.kraus)


def remix_kraus(ch: QuantumChannel, u) -> QuantumChannel:
    """Kraus list ``K'_j = sum_k u[j, k] K_k``; the same channel for unitary ``u``."""
    u = as_matrix(u)
    n = ch.dim_env
    if u.shape != (n, n) or max_norm(dagger(u) @ u - np.eye(n)) > 1e-10:
        raise DomainError(f"remixing needs a {n} x {n} unitary")
    ks = np.einsum("jk,kab->jab", u, np.stack(ch.kraus))
    return QuantumChannel(tuple(ks), ch.name, ch.tol)


@dataclass(frozen=True, eq=False)
class EnvironmentSplit:
    """Environment zero-padded to ``d_dim * rest_dim`` and factored as ``D (x) rest``."""

    channel: QuantumChannel
    d_dim: int
    rest_dim: int

    @property
    def padded_kraus(self) -> list[np.ndarray]:
        pad = self.d_dim * self.rest_dim - self.channel.dim_env
        zero = np.zeros((self.channel.dim_out, self.channel.dim_in), dtype=complex)
        return list(self.channel.kraus) + [zero] * pad

    @property
    def dims(self) -> tuple[int, int]:
        return (self.d_dim, self.rest_dim)

    def environment_state(self, rho) -> DensityOperator:
        """Full padded environment output on ``D (x) rest``."""
        rho = _input(self.channel, rho)
        ks = np.stack(self.padded_kraus)
        w = np.einsum("jai,il,kal->jk", ks, rho.matrix, ks.conj())
        return DensityOperator(_hermitize(w), self.dims, rho.tol)

    def eve_state(self, rho) -> DensityOperator:
        """Environment output reduced to the subsystem D."""
        env = self.environment_state(rho)
        return DensityOperator(partial_trace(env.matrix, self.dims, (0,)), tol=env.tol)


def split_environment(ch: QuantumChannel, d_dim: int) -> EnvironmentSplit:
    if d_dim < 1 or d_dim > ch.dim_env:
        raise DomainError(f"subsystem dimension must be in [1, {ch.dim_env}], got {d_dim}")
    rest = -(-ch.dim_env // d_dim)
    return EnvironmentSplit(ch, int(d_dim), int(rest))


# --- standard channels -----------------------------------------------------

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _check_param(name: str, p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p}")
    return float(p)


def identity(d: int = 2) -> QuantumChannel:
    return QuantumChannel((np.eye(d, dtype=complex),), f"identity(d={d})")


def _weyl_operators(d: int) -> list[np.ndarray]:
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return [
        np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
        for a in range(d)
        for b in range(d)
        if (a, b) != (0, 0)
    ]


def depolarizing(p: float, d: int = 2) -> QuantumChannel:
    """``rho -> (1 - p) rho + p I/d``. For qubits the Kraus set is
    ``{sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}``; larger ``d`` uses Weyl operators."""
    p = _check_param("p", p)
    if d < 2:
        raise DomainError(f"depolarizing needs d >= 2, got {d}")
    paulis = [PAULI_X, PAULI_Y, PAULI_Z] if d == 2 else _weyl_operators(d)
    k0 = math.sqrt(1 - p * (d * d - 1) / (d * d)) * np.eye(d, dtype=complex)
    ks = [k0] + [math.sqrt(p / (d * d)) * w for w in paulis]
    return QuantumChannel(tuple(ks), f"depolarizing(p={p:g})")


def dephasing(p: float) -> QuantumChannel:
    p = _check_param("p", p)
    ks = (math.sqrt(1 - p) * np.eye(2, dtype=complex), math.sqrt(p) * PAULI_Z)
    return QuantumChannel(ks, f"dephasing(p={p:g})")


def amplitude_damping(gamma: float) -> QuantumChannel:
    g = _check_param("gamma", gamma)
    k0 = np.array([[1, 0], [0, math.sqrt(1 - g)]], dtype=complex)
    k1 = np.array([[0, math.sqrt(g)], [0, 0]], dtype=complex)
    return QuantumChannel((k0, k1), f"amplitude_damping(gamma={g:g})")


def erasure(p: float) -> QuantumChannel:
    """Qubit erasure into a qutrit; the flag state is ``|2>``."""
    p = _check_param("p", p)
    embed = np.array([[1, 0], [0, 1], [0, 0]], dtype=complex)
    e0 = np.zeros((3, 2), dtype=complex)
    e0[2, 0] = 1
    e1 = np.zeros((3, 2), dtype=complex)
    e1[2, 1] = 1
    ks = (math.sqrt(1 - p) * embed, math.sqrt(p) * e0, math.sqrt(p) * e1)
    return QuantumChannel(ks, f"erasure(p={p:g})")


FAMILIES: dict[str, Callable[[float], QuantumChannel]] = {
    "depolarizing": depolarizing,
    "dephasing": dephasing,
    "amplitude_damping": amplitude_damping,
    "erasure": erasure,
}


def family_channel(family: str, param: float | None = None, dim: int = 2) -> QuantumChannel:
    if family == "identity":
        return identity(dim)
    if family not in FAMILIES:
        known = ", ".join(["identity", *FAMILIES])
        raise DomainError(f"unknown channel family {family!r} (known: {known})")
    if param is None:
        raise DomainError(f"family {family!r} needs a parameter")
    if family == "depolarizing":
        return depolarizing(param, dim)
    return FAMILIES[family](param)


def random_channel(dim_in: int, dim_out: int, n_kraus: int, seed) -> QuantumChannel:
    return QuantumChannel(tuple(random_kraus(dim_in, dim_out, n_kraus, seed)), "random")


def zoo() -> list[QuantumChannel]:
    """A representative set of standard channels at interior and boundary parameters."""
    chans = [identity(2), identity(3)]
    for p in (0.0, 0.3, 1.0):
        chans += [depolarizing(p), dephasing(p), amplitude_damping(p), erasure(p)]
    chans.append(depolarizing(0.4, d=3))
    return chans
