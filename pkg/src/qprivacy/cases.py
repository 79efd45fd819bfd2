"""Random (channel, ensemble) cases for property checks and the CLI."""

from __future__ import annotations

import math

from .channels import QuantumChannel, identity, random_channel
from .qmath import make_rng
from .states import Ensemble, random_pure_ensemble


def random_channel_case(rng, max_dim: int = 3, max_kraus: int = 5, min_dim: int = 2) -> QuantumChannel:
    """Random channel with dims in ``[min_dim, max_dim]`` and at most ``max_kraus``
    Kraus operators (also capped at dim_in * dim_out)."""
    rng = make_rng(rng)
    d_in = int(rng.integers(min_dim, max_dim + 1))
    d_out = int(rng.integers(min_dim, max_dim + 1))
    lo = math.ceil(d_in / d_out)
    hi = max(lo, min(max_kraus, d_in * d_out))
    n = int(rng.integers(lo, hi + 1))
    return random_channel(d_in, d_out, n, rng)


def random_identity_case(
    rng, max_dim: int = 3, max_kraus: int = 5, max_signals: int = 4, family: str | None = None
) -> tuple[QuantumChannel, Ensemble]:
    rng = make_rng(rng)
    if family == "identity":
        ch = identity(int(rng.integers(2, max_dim + 1)))
    else:
        ch = random_channel_case(rng, max_dim, max_kraus)
    n_signals = int(rng.integers(1, max_signals + 1))
    return ch, random_pure_ensemble(ch.dim_in, n_signals, rng)
