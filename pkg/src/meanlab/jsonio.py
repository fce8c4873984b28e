"""JSON wire formats.

Matrix:  ``{"dim": n, "re": [[...]], "im": [[...]]}`` (row-major; ``im``
omitted for real matrices).  Rectangular matrices use ``rows``/``cols``
instead of ``dim``.
Measure: ``{"weights": [...], "atoms": [matrix, ...]}``.
Map:     ``{"pre_transpose": bool, "kraus": [matrix, ...]}``.

Floats are written with Python's shortest round-trip ``repr``, so parsing a
written file gives back bit-identical arrays.
"""
from __future__ import annotations

import json

import numpy as np

from .maps import UnitalPositiveMap
from .measures import AtomicMeasure, new_measure


class FormatError(ValueError):
    """Malformed input; the message starts with the offending field path."""


def _rows(a: np.ndarray) -> list:
    return [[float(x) for x in row] for row in a]


def matrix_to_json(M) -> dict:
    M = np.asarray(M)
    rows, cols = M.shape
    out = {"dim": rows} if rows == cols else {"rows": rows, "cols": cols}
    out["re"] = _rows(np.real(M))
    if np.iscomplexobj(M) and np.any(np.imag(M) != 0):
        out["im"] = _rows(np.imag(M))
    return out


def _grid(obj, key, path, shape):
    val = obj.get(key)
    if not isinstance(val, list):
        raise FormatError(f"{path}.{key}: expected a list of rows")
    try:
        arr = np.array(val, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}.{key}: rows must be lists of numbers ({exc})") from None
    if arr.shape != shape:
        raise FormatError(f"{path}.{key}: expected shape {shape}, got {arr.shape}")
    return arr


def matrix_from_json(obj, path: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: expected an object with dim/re/im")
    if "dim" in obj:
        n = obj["dim"]
        if not isinstance(n, int) or n < 1:
            raise FormatError(f"{path}.dim: expected a positive integer")
        shape = (n, n)
    elif "rows" in obj and "cols" in obj:
        shape = (obj["rows"], obj["cols"])
        if not all(isinstance(s, int) and s >= 1 for s in shape):
            raise FormatError(f"{path}.rows/cols: expected positive integers")
    else:
        raise FormatError(f"{path}: missing 'dim' (or 'rows'/'cols')")
    re = _grid(obj, "re", path, shape)
    im = _grid(obj, "im", path, shape) if "im" in obj else np.zeros(shape)
    return re + 1j * im


def measure_to_json(mu: AtomicMeasure) -> dict:
    return {"weights": [float(w) for w in mu.weights], "atoms": [matrix_to_json(a) for a in mu.atoms]}


def measure_from_json(obj, path: str = "measure") -> AtomicMeasure:
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: expected an object with weights/atoms")
    atoms = obj.get("atoms")
    weights = obj.get("weights")
    if not isinstance(atoms, list) or not atoms:
        raise FormatError(f"{path}.atoms: expected a nonempty list")
    if not isinstance(weights, list):
        raise FormatError(f"{path}.weights: expected a list of numbers")
    mats = [matrix_from_json(a, f"{path}.atoms[{i}]") for i, a in enumerate(atoms)]
    try:
        return new_measure(mats, weights)
    except (ValueError, TypeError) as exc:
        raise FormatError(f"{path}: {exc}") from None


def map_to_json(phi: UnitalPositiveMap) -> dict:
    return {"pre_transpose": bool(phi.pre_transpose), "kraus": [matrix_to_json(V) for V in phi.kraus]}


def map_from_json(obj, path: str = "map") -> UnitalPositiveMap:
    if not isinstance(obj, dict) or not isinstance(obj.get("kraus"), list) or not obj["kraus"]:
        raise FormatError(f"{path}.kraus: expected a nonempty list of matrices")
    flag = obj.get("pre_transpose", False)
    if not isinstance(flag, bool):
        raise FormatError(f"{path}.pre_transpose: expected a boolean")
    kraus = [matrix_from_json(V, f"{path}.kraus[{i}]") for i, V in enumerate(obj["kraus"])]
    if len({V.shape for V in kraus}) != 1:
        raise FormatError(f"{path}.kraus: all Kraus operators must share one shape")
    try:
        return UnitalPositiveMap(np.stack(kraus), pre_transpose=flag, name=obj.get("name", "kraus"))
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            raise ValueError(f"non-finite float {x} cannot be written as JSON")
        return x
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"


def loads(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
