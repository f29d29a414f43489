"""JSON formats for matrices, involutions, sign vectors and factorisations.

Floats are written with 17 significant digits so that output is
byte-for-byte reproducible and round-trips exactly.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .factorization import FactorizationResult
from .involutions import KInvolution, SignVector
from .minkowski import Isometry

__all__ = [
    "FormatError",
    "dumps",
    "matrix_to_json",
    "matrix_from_json",
    "kinvolution_to_json",
    "kinvolution_from_json",
    "signvector_to_json",
    "signvector_from_json",
    "factorization_to_json",
    "factorization_from_json",
]


class FormatError(ValueError):
    """Input JSON is malformed or does not follow the expected schema."""


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite float {x!r}")
    s = format(x, ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _emit(obj, indent: int, level: int, out: list[str]):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(key))}: ")
            _emit(val, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in items):
            out.append("[")
            for i, v in enumerate(items):
                _emit(v, indent, level + 1, out)
                if i < len(items) - 1:
                    out.append(", ")
            out.append("]")
            return
        out.append("[\n")
        for i, v in enumerate(items):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text; numeric rows stay on one line."""
    out: list[str] = []
    _emit(obj, indent, 0, out)
    return "".join(out) + "\n"


def matrix_to_json(M) -> dict:
    M = M.matrix if isinstance(M, Isometry) else np.asarray(M, dtype=float)
    return {"n": M.shape[0] - 1, "matrix": [[float(x) for x in row] for row in M]}


def matrix_from_json(obj) -> np.ndarray:
    """Parse ``{"n": n, "matrix": [[...], ...]}`` with exactly n+1 rows of n+1 numbers."""
    if not isinstance(obj, dict) or "matrix" not in obj or "n" not in obj:
        raise FormatError('matrix object needs keys "n" and "matrix"')
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise FormatError(f'"n" must be an integer >= 2, got {n!r}')
    rows = obj["matrix"]
    if not isinstance(rows, list) or len(rows) != n + 1:
        raise FormatError(f"expected exactly {n + 1} rows for n={n}")
    for row in rows:
        if not isinstance(row, list) or len(row) != n + 1:
            raise FormatError(f"every row must hold exactly {n + 1} numbers")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                raise FormatError(f"matrix entries must be finite numbers, got {x!r}")
    return np.array(rows, dtype=float)


def kinvolution_to_json(inv: KInvolution) -> dict:
    d = matrix_to_json(inv.matrix)
    d["k"] = inv.k
    return d


def kinvolution_from_json(obj) -> KInvolution:
    """Load without certifying; :func:`verify_factorization` re-classifies."""
    M = matrix_from_json(obj)
    k = obj.get("k")
    if not isinstance(k, int) or isinstance(k, bool):
        raise FormatError(f'"k" must be an integer, got {k!r}')
    return KInvolution(Isometry(M, check=False), k)


def signvector_to_json(v: SignVector) -> dict:
    return {"signs": list(v.signs)}


def signvector_from_json(obj) -> SignVector:
    if not isinstance(obj, dict) or not isinstance(obj.get("signs"), list):
        raise FormatError('sign vector needs a "signs" list')
    try:
        return SignVector(tuple(obj["signs"]))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def factorization_to_json(r: FactorizationResult) -> dict:
    return {
        "k": r.k,
        "bound": r.bound,
        "length": r.length,
        "residual": r.residual,
        "target": matrix_to_json(r.target),
        "factors": [kinvolution_to_json(f) for f in r.factors],
    }


def factorization_from_json(obj) -> FactorizationResult:
    if not isinstance(obj, dict):
        raise FormatError("factorisation must be a JSON object")
    for key in ("k", "bound", "length", "residual", "target", "factors"):
        if key not in obj:
            raise FormatError(f'factorisation is missing "{key}"')
    if not isinstance(obj["factors"], list):
        raise FormatError('"factors" must be a list')
    target = Isometry(matrix_from_json(obj["target"]), check=False)
    factors = [kinvolution_from_json(f) for f in obj["factors"]]
    for key in ("k", "bound", "length"):
        if not isinstance(obj[key], int) or isinstance(obj[key], bool):
            raise FormatError(f'"{key}" must be an integer')
    residual = obj["residual"]
    if isinstance(residual, bool) or not isinstance(residual, (int, float)):
        raise FormatError('"residual" must be a number')
    return FactorizationResult(
        factors, target, float(residual), obj["k"], obj["bound"], declared_length=obj["length"]
    )
