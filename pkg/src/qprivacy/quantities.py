"""Information quantities of a channel: entropy exchange, coherent information,
Holevo quantities of the receiver's and the environment's outputs, and
privacy estimates built from them. All values are in bits.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .channels import QuantumChannel, apply, complementary_apply, split_environment
from .errors import DimensionError, DomainError, PurityError
from .qmath import shannon_entropy, von_neumann_entropy
from .states import DensityOperator, Ensemble, Povm, as_density, average_state, ensemble_dims_check, measurement_distribution


@dataclass(frozen=True)
class AnalysisReport:
    s_output: float
    s_exchange: float
    coherent_info: float
    chi_q: float
    chi_e: float
    delta_chi: float
    identity_residual: float | None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PrivacyEstimate:
    h_bob: float
    h_eve: float
    privacy: float
    guaranteed_floor: float

    def to_dict(self) -> dict:
        return asdict(self)


def _entropy(rho: DensityOperator) -> float:
    return von_neumann_entropy(rho.matrix, rho.tol)


def entropy_exchange(ch: QuantumChannel, rho) -> float:
    return _entropy(complementary_apply(ch, rho))


def output_entropy(ch: QuantumChannel, rho) -> float:
    return _entropy(apply(ch, rho))


def coherent_information(ch: QuantumChannel, rho) -> float:
    rho = as_density(rho)
    return output_entropy(ch, rho) - entropy_exchange(ch, rho)


def holevo_quantity(probs: Sequence[float], outputs: Sequence[DensityOperator]) -> float:
    """``S(sum_k p_k rho_k) - sum_k p_k S(rho_k)`` for an explicit list of output states."""
    avg = sum(p * o.matrix for p, o in zip(probs, outputs))
    avg = DensityOperator((avg + avg.conj().T) / 2, tol=outputs[0].tol)
    return float(_entropy(avg) - sum(p * _entropy(o) for p, o in zip(probs, outputs)))


def _holevo_through(e: Ensemble, ch: QuantumChannel, side: Callable) -> float:
    ensemble_dims_check(e, ch.dim_in)
    return holevo_quantity(e.probs, [side(rho) for rho in e.densities()])


def holevo_output(ch: QuantumChannel, e: Ensemble) -> float:
    return _holevo_through(e, ch, lambda rho: apply(ch, rho))


def holevo_environment(ch: QuantumChannel, e: Ensemble) -> float:
    return _holevo_through(e, ch, lambda rho: complementary_apply(ch, rho))


def holevo_eve_subsystem(ch: QuantumChannel, e: Ensemble, d_dim: int) -> float:
    """Holevo quantity of what an eavesdropper holding only a ``d_dim``-dimensional
    factor of the environment receives."""
    split = split_environment(ch, d_dim)
    return _holevo_through(e, ch, split.eve_state)


def privacy_bound(ch: QuantumChannel, e: Ensemble) -> float:
    return holevo_output(ch, e) - holevo_environment(ch, e)


def _require_pure(e: Ensemble, threshold: float = 1e-9) -> None:
    bad = e.impurities(threshold)
    if bad:
        raise PurityError(f"ensemble member {bad[0]} is not a pure state", bad[0])


def verify_identity(ch: QuantumChannel, e: Ensemble) -> float:
    """``|I(avg) - (chi_out - chi_env)|`` for a pure-state ensemble.

    The left side only sees the average input; the right side only sees the
    individual signals, so agreement is a genuine consistency check.
    """
    _require_pure(e)
    return abs(coherent_information(ch, average_state(e)) - privacy_bound(ch, e))


def mutual_information(probs: Sequence[float], states: Sequence[DensityOperator], m: Povm) -> float:
    """Classical mutual information between the signal index and the outcome of ``m``."""
    probs = np.asarray(probs, dtype=float)
    cond = np.array([measurement_distribution(s, m) for s in states])  # p(j|k)
    p_out = probs @ cond
    h_cond = sum(p * shannon_entropy(row) for p, row in zip(probs, cond))
    return max(shannon_entropy(p_out) - h_cond, 0.0)


def accessible_information(
    ch: QuantumChannel,
    e: Ensemble,
    m: Povm,
    side: str = "output",
    d_dim: int | None = None,
) -> float:
    """Information gained by measuring ``m`` on the channel output (``side="output"``,
    Bob) or on the environment (``side="environment"``, Eve; optionally only on a
    ``d_dim`` factor of it)."""
    ensemble_dims_check(e, ch.dim_in)
    rhos = e.densities()
    if side == "output":
        outs = [apply(ch, r) for r in rhos]
    elif side == "environment":
        if d_dim is None:
            outs = [complementary_apply(ch, r) for r in rhos]
        else:
            split = split_environment(ch, d_dim)
            outs = [split.eve_state(r) for r in rhos]
    else:
        raise DomainError(f"side must be 'output' or 'environment', got {side!r}")
    if outs[0].dim != m.dim:
        raise DimensionError(f"POVM acts on dim {m.dim}, the {side} has dim {outs[0].dim}")
    return mutual_information(e.probs, outs, m)


def privacy(
    ch: QuantumChannel,
    e: Ensemble,
    bob: Povm,
    eve: Povm,
    eve_d_dim: int | None = None,
) -> PrivacyEstimate:
    h_bob = accessible_information(ch, e, bob, "output")
    h_eve = accessible_information(ch, e, eve, "environment", eve_d_dim)
    chi_e = holevo_environment(ch, e)
    return PrivacyEstimate(h_bob, h_eve, h_bob - h_eve, h_bob - chi_e)


def analyze(ch: QuantumChannel, e: Ensemble) -> AnalysisReport:
    rho = average_state(e)
    s_out = output_entropy(ch, rho)
    s_e = entropy_exchange(ch, rho)
    chi_q = holevo_output(ch, e)
    chi_e = holevo_environment(ch, e)
    delta = chi_q - chi_e
    coh = s_out - s_e
    resid = abs(coh - delta) if not e.impurities() else None
    return AnalysisReport(s_out, s_e, coh, chi_q, chi_e, delta, resid)


def max_mixed_summary(ch: QuantumChannel) -> dict:
    rho = DensityOperator.maximally_mixed(ch.dim_in)
    s_out = output_entropy(ch, rho)
    s_e = entropy_exchange(ch, rho)
    return {"s_output": s_out, "s_exchange": s_e, "coherent_info": s_out - s_e}


def log2_bound(ch: QuantumChannel) -> float:
    return math.log2(max(ch.dim_out, ch.dim_env))
