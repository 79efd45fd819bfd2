"""JSON encoding of matrices, channels, ensembles and POVMs.

Complex numbers are always ``[re, im]`` pairs. A matrix is a list of rows of
pairs; a column vector may be given either as a flat list of pairs or as an
``n x 1`` matrix.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import QuantumChannel
from .errors import DimensionError, ParseError
from .states import DensityOperator, Ensemble, Povm, PureState


def complex_to_json(z) -> list[float]:
    return [float(z.real), float(z.imag)]


def matrix_to_json(m) -> list:
    return [[complex_to_json(z) for z in row] for row in np.asarray(m)]


def vector_to_json(v) -> list:
    return [complex_to_json(z) for z in np.asarray(v).ravel()]


def _pair(z) -> complex:
    if (
        not isinstance(z, (list, tuple))
        or len(z) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in z)
    ):
        raise ParseError(f"expected a complex number as [re, im], got {z!r}")
    return complex(float(z[0]), float(z[1]))


def array_from_json(obj) -> np.ndarray:
    """Parse a vector (list of pairs) or a matrix (list of rows of pairs)."""
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"expected a non-empty list, got {obj!r}")
    if all(isinstance(row, list) and row and isinstance(row[0], list) for row in obj):
        rows = [[_pair(z) for z in row] for row in obj]
        if len({len(r) for r in rows}) != 1:
            raise ParseError("matrix rows have different lengths")
        return np.array(rows, dtype=complex)
    return np.array([_pair(z) for z in obj], dtype=complex)


def channel_to_dict(ch: QuantumChannel) -> dict:
    return {
        "name": ch.name or "",
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [matrix_to_json(k) for k in ch.kraus],
    }


def channel_from_dict(doc: dict) -> QuantumChannel:
    if not isinstance(doc, dict) or "kraus" not in doc:
        raise ParseError("channel document needs a 'kraus' list")
    kraus = [array_from_json(k) for k in doc["kraus"]]
    if not kraus or any(k.ndim != 2 for k in kraus):
        raise ParseError("every Kraus operator must be a matrix")
    dim_out, dim_in = kraus[0].shape
    for key, expected in (("dim_in", dim_in), ("dim_out", dim_out)):
        if key in doc and doc[key] != expected:
            raise DimensionError(f"{key} = {doc[key]} but the Kraus operators imply {expected}")
    return QuantumChannel(tuple(kraus), doc.get("name") or None)


def _state_from_json(obj):
    a = array_from_json(obj)
    if a.ndim == 1 or a.shape[1] == 1:
        return PureState(a.ravel())
    return DensityOperator(a)


def ensemble_from_dict(doc: dict) -> Ensemble:
    if not isinstance(doc, dict) or "probs" not in doc or "states" not in doc:
        raise ParseError("ensemble needs 'probs' and 'states'")
    return Ensemble(doc["probs"], [_state_from_json(s) for s in doc["states"]])


def ensemble_to_dict(e: Ensemble) -> dict:
    states = []
    for s in e.states:
        states.append(vector_to_json(s.vector) if isinstance(s, PureState) else matrix_to_json(s.matrix))
    return {"probs": [float(p) for p in e.probs], "states": states}


def density_to_json(rho: DensityOperator) -> list:
    return matrix_to_json(rho.matrix)


def density_from_json(obj) -> DensityOperator:
    return DensityOperator(array_from_json(obj))


def povm_to_json(m: Povm) -> list:
    return [matrix_to_json(e) for e in m.effects]


def povm_from_json(obj) -> Povm:
    return Povm([array_from_json(e) for e in obj])


def load_channel_file(path) -> tuple[QuantumChannel, Ensemble | None]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    ch = channel_from_dict(doc)
    ens = ensemble_from_dict(doc["ensemble"]) if doc.get("ensemble") is not None else None
    return ch, ens


def save_channel_file(path, ch: QuantumChannel, ensemble: Ensemble | None = None) -> None:
    doc = channel_to_dict(ch)
    if ensemble is not None:
        doc["ensemble"] = ensemble_to_dict(ensemble)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")
