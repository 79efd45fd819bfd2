"""Multi-start ascent of coherent information over channel inputs, of the
Holevo difference over pure-state ensembles, and parameter sweeps over the
standard channel families.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .channels import QuantumChannel, family_channel
from .errors import DomainError, NumericError
from .qmath import dagger, make_rng, random_density
from .quantities import coherent_information, entropy_exchange, output_entropy, privacy_bound
from .states import DensityOperator, Ensemble, PureState, average_state

FD_STEP = 1e-5
_EIG_FLOOR = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 8
    max_iters: int = 500
    step_init: float = 0.1
    tol_obj: float = 1e-7
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise DomainError("restarts and max_iters must be positive")
        if not 0 < self.tol_obj < self.step_init:
            raise DomainError("need 0 < tol_obj < step_init")


@dataclass(frozen=True, eq=False)
class OptimizerResult:
    best_input: DensityOperator
    best_value: float
    trace_of_runs: list[tuple[int, float]]
    converged: bool


@dataclass(frozen=True, eq=False)
class PrivacyBoundResult:
    ensemble: Ensemble
    delta_chi: float
    trace_of_runs: list[tuple[int, float]]
    converged: bool


@dataclass(frozen=True)
class SweepRecord:
    param: float
    s_output: float
    s_exchange: float
    coherent_info: float
    input_policy: str


# --- raw objectives (no validation; inputs are valid by construction) -------


def _entropy_raw(m: np.ndarray) -> float:
    w = np.linalg.eigvalsh(m)
    w = w[w > _EIG_FLOOR]
    return float(-np.sum(w * np.log2(w)))


class _RawChannel:
    def __init__(self, ch: QuantumChannel):
        self.ks = np.stack(ch.kraus)
        self.ks_dag = np.conj(np.swapaxes(self.ks, 1, 2))

    def out(self, rho):
        return np.einsum("kai,ij,kjb->ab", self.ks, rho, self.ks_dag)

    def env(self, rho):
        return np.einsum("jai,il,kal->jk", self.ks, rho, self.ks.conj())

    def coherent_info(self, rho):
        return _entropy_raw(self.out(rho)) - _entropy_raw(self.env(rho))


def _density_from_params(x: np.ndarray, d: int) -> np.ndarray:
    a = (x[: d * d] + 1j * x[d * d :]).reshape(d, d)
    rho = a @ dagger(a)
    return rho / np.trace(rho).real


def _ensemble_from_params(x: np.ndarray, d: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    nv = n * d
    vecs = (x[:nv] + 1j * x[nv : 2 * nv]).reshape(n, d)
    vecs = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
    logits = x[2 * nv :]
    w = np.exp(logits - logits.max())
    return w / w.sum(), vecs


# --- ascent engine ----------------------------------------------------------


def _fd_gradient(f: Callable[[np.ndarray], float], x: np.ndarray) -> np.ndarray:
    g = np.empty_like(x)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += FD_STEP
        xm[i] -= FD_STEP
        g[i] = (f(xp) - f(xm)) / (2 * FD_STEP)
    return g


def _ascend(f, x0, cfg: OptimizerConfig, normalize=None) -> tuple[np.ndarray, float, bool]:
    """Normalized-gradient ascent with step halving on failure and doubling
    (capped at ``step_init``) after success."""
    x = normalize(x0) if normalize else x0.copy()
    fx = f(x)
    step = cfg.step_init
    for _ in range(cfg.max_iters):
        g = _fd_gradient(f, x)
        gn = np.linalg.norm(g)
        if not np.isfinite(gn):
            raise NumericError("non-finite gradient during ascent")
        if gn < 1e-12:
            return x, fx, True
        direction = g / gn
        while step > 1e-14:
            xn = x + step * direction
            if normalize:
                xn = normalize(xn)
            fn = f(xn)
            if fn > fx:
                break
            step /= 2
        else:
            return x, fx, True
        gain = fn - fx
        x, fx = xn, fn
        if gain < cfg.tol_obj:
            return x, fx, True
        step = min(2 * step, cfg.step_init)
    return x, fx, False


def _unit(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x)


def _sqrt_psd(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    return (v * np.sqrt(np.clip(w, 0, None))) @ dagger(v)


def maximize_coherent_information(ch: QuantumChannel, cfg: OptimizerConfig = OptimizerConfig()) -> OptimizerResult:
    """Best coherent information over inputs ``rho = A A^dag / Tr(A A^dag)``.

    Restart 0 starts at the maximally mixed state, the others at random full-rank
    densities seeded with ``cfg.seed + index``. Only a local maximum is certified.
    """
    d = ch.dim_in
    raw = _RawChannel(ch)

    def objective(x):
        return raw.coherent_info(_density_from_params(x, d))

    runs, best = [], None
    for idx in range(cfg.restarts):
        if idx == 0:
            a = np.eye(d, dtype=complex)
        else:
            a = _sqrt_psd(random_density(d, d, make_rng(cfg.seed + idx)))
        x0 = np.concatenate([a.real.ravel(), a.imag.ravel()])
        x, _, conv = _ascend(objective, x0, cfg, _unit)
        rho = DensityOperator(_density_from_params(x, d))
        value = coherent_information(ch, rho)
        runs.append((idx, value))
        if best is None or value > best[1]:
            best = (rho, value, conv)
    rho, value, conv = best
    return OptimizerResult(rho, value, runs, bool(conv))


def _build_ensemble(probs: np.ndarray, vecs: np.ndarray) -> Ensemble:
    states = [PureState(v / np.linalg.norm(v)) for v in vecs]
    return Ensemble(probs / probs.sum(), states)


def maximize_privacy_bound(
    ch: QuantumChannel, n_signals: int, cfg: OptimizerConfig = OptimizerConfig()
) -> PrivacyBoundResult:
    """Best ``chi_out - chi_env`` over ensembles of ``n_signals`` pure states.

    Signals are unnormalized complex vectors (normalized on evaluation) and the
    weights a softmax of unconstrained reals.
    """
    if n_signals < 2:
        raise DomainError(f"n_signals must be >= 2, got {n_signals}")
    d, n = ch.dim_in, n_signals
    raw = _RawChannel(ch)

    def objective(x):
        probs, vecs = _ensemble_from_params(x, d, n)
        rhos = np.einsum("ka,kb->kab", vecs, vecs.conj())
        avg = np.einsum("k,kab->ab", probs, rhos)
        chi_q = _entropy_raw(raw.out(avg)) - sum(p * _entropy_raw(raw.out(r)) for p, r in zip(probs, rhos))
        chi_e = _entropy_raw(raw.env(avg)) - sum(p * _entropy_raw(raw.env(r)) for p, r in zip(probs, rhos))
        return chi_q - chi_e

    runs, best = [], None
    for idx in range(cfg.restarts):
        if idx == 0:
            vecs = np.eye(d, dtype=complex)[[k % d for k in range(n)]]
            logits = np.zeros(n)
        else:
            rng = make_rng(cfg.seed + idx)
            vecs = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
            logits = rng.standard_normal(n)
        x0 = np.concatenate([vecs.real.ravel(), vecs.imag.ravel(), logits])
        x, _, conv = _ascend(objective, x0, cfg)
        ens = _build_ensemble(*_ensemble_from_params(x, d, n))
        value = privacy_bound(ch, ens)
        runs.append((idx, value))
        if best is None or value > best[1]:
            best = (ens, value, conv)
    ens, value, conv = best
    check = abs(value - coherent_information(ch, average_state(ens)))
    if check >= 1e-8:
        raise NumericError(f"Holevo difference disagrees with coherent information by {check:.3e}")
    return PrivacyBoundResult(ens, value, runs, bool(conv))


# --- sweeps -----------------------------------------------------------------

INPUT_POLICIES = ("max-mixed", "optimized")


def sweep(
    family: str,
    params: Sequence[float],
    input_policy: str = "max-mixed",
    cfg: OptimizerConfig = OptimizerConfig(),
    dim: int = 2,
) -> list[SweepRecord]:
    if input_policy not in INPUT_POLICIES:
        raise DomainError(f"input policy must be one of {INPUT_POLICIES}, got {input_policy!r}")
    params = [float(p) for p in params]
    if not params:
        raise DomainError("parameter grid is empty")
    records = []
    for p in params:
        ch = family_channel(family, p, dim)
        if input_policy == "max-mixed":
            rho = DensityOperator.maximally_mixed(ch.dim_in)
        else:
            rho = maximize_coherent_information(ch, cfg).best_input
        s_out = output_entropy(ch, rho)
        s_e = entropy_exchange(ch, rho)
        records.append(SweepRecord(p, s_out, s_e, s_out - s_e, input_policy))
    return records


def uniform_grid(start: float, stop: float, steps: int) -> list[float]:
    if steps < 1 or start > stop:
        raise DomainError(f"bad grid: from={start}, to={stop}, steps={steps}")
    if steps == 1:
        return [float(start)]
    return [float(v) for v in np.linspace(start, stop, steps)]


CSV_FIELDS = ["param", "s_output", "s_exchange", "coherent_info", "input_policy"]


def _fmt(v) -> str:
    return f"{v:.12g}" if isinstance(v, float) else str(v)


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        row = asdict(r)
        w.writerow([_fmt(row[k]) for k in CSV_FIELDS])
    return buf.getvalue()


def records_to_json(records: Sequence[SweepRecord]) -> list[dict]:
    return [asdict(r) for r in records]
