"""JSON wire formats.

Complex numbers travel as two-element arrays [re, im]; matrices as row-major
nested arrays of those pairs.  Schemas:

* moment sequence:  {"alpha": a, "q": q, "matrices": [M, ...]}
* discrete measure: {"alpha": a, "atoms": [{"t": t, "weight": M}, ...]}
* matrix polynomial: {"q": q, "alpha": a, "coeffs": [C, ...]}  (ascending in z)
* bare matrix file: {"matrix": M}

Malformed payloads raise :class:`SchemaError`, which the command line maps to
its I/O exit status.
"""

from __future__ import annotations

import json

import numpy as np

from .linalg import ToleranceConfig, as_matrix
from .measures import DiscreteMeasure, StieltjesFunctionRep
from .sequences import MomentSequence
from .transforms import MatrixPolynomial

__all__ = [
    "SchemaError",
    "complex_to_json",
    "json_to_complex",
    "matrix_to_json",
    "json_to_matrix",
    "moment_sequence_to_json",
    "json_to_moment_sequence",
    "measure_to_json",
    "json_to_measure",
    "function_rep_to_json",
    "json_to_function_rep",
    "matrix_polynomial_to_json",
    "json_to_matrix_polynomial",
    "json_to_bare_matrix",
    "tolerances_to_json",
    "load_json",
    "dump_json",
]


class SchemaError(ValueError):
    """Input JSON does not match the expected schema."""


def complex_to_json(c) -> list:
    c = complex(c)
    return [c.real, c.imag]


def json_to_complex(v) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise SchemaError(f"complex number must be [re, im], got {v!r}")
    try:
        return complex(float(v[0]), float(v[1]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"complex number must be [re, im] of reals, got {v!r}") from exc


def matrix_to_json(m) -> list:
    m = as_matrix(m)
    return [[complex_to_json(m[i, j]) for j in range(m.shape[1])] for i in range(m.shape[0])]


def json_to_matrix(v) -> np.ndarray:
    if not isinstance(v, list) or not v or not all(isinstance(row, list) for row in v):
        raise SchemaError(f"matrix must be a nested array of [re, im] pairs, got {type(v).__name__}")
    width = len(v[0])
    if any(len(row) != width for row in v):
        raise SchemaError("matrix rows have unequal lengths")
    try:
        return np.array([[json_to_complex(x) for x in row] for row in v], dtype=complex)
    except SchemaError:
        raise
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad matrix payload: {exc}") from exc


def _require(payload, keys, what):
    if not isinstance(payload, dict):
        raise SchemaError(f"{what} must be a JSON object, got {type(payload).__name__}")
    missing = [k for k in keys if k not in payload]
    if missing:
        raise SchemaError(f"{what} is missing keys {missing}")


def moment_sequence_to_json(seq: MomentSequence) -> dict:
    return {
        "alpha": seq.alpha,
        "q": seq.q,
        "matrices": [matrix_to_json(seq[j]) for j in range(len(seq))],
    }


def json_to_moment_sequence(payload) -> MomentSequence:
    _require(payload, ("alpha", "q", "matrices"), "moment sequence")
    mats = [json_to_matrix(m) for m in payload["matrices"]]
    try:
        seq = MomentSequence(float(payload["alpha"]), mats)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad moment sequence: {exc}") from exc
    if seq.q != int(payload["q"]):
        raise SchemaError(f"declared q = {payload['q']} but matrices are {seq.q} x {seq.q}")
    return seq


def measure_to_json(mu: DiscreteMeasure) -> dict:
    return {
        "alpha": mu.alpha,
        "atoms": [{"t": t, "weight": matrix_to_json(w)} for t, w in mu.atoms],
    }


def json_to_measure(payload) -> DiscreteMeasure:
    _require(payload, ("alpha", "atoms"), "discrete measure")
    atoms = []
    for entry in payload["atoms"]:
        _require(entry, ("t", "weight"), "measure atom")
        atoms.append((float(entry["t"]), json_to_matrix(entry["weight"])))
    try:
        return DiscreteMeasure(float(payload["alpha"]), tuple(atoms))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad measure: {exc}") from exc


def function_rep_to_json(rep: StieltjesFunctionRep) -> dict:
    return {"gamma": matrix_to_json(rep.gamma), "measure": measure_to_json(rep.measure)}


def json_to_function_rep(payload) -> StieltjesFunctionRep:
    _require(payload, ("gamma", "measure"), "function representation")
    try:
        return StieltjesFunctionRep(json_to_matrix(payload["gamma"]), json_to_measure(payload["measure"]))
    except SchemaError:
        raise
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad function representation: {exc}") from exc


def matrix_polynomial_to_json(p: MatrixPolynomial) -> dict:
    return {
        "q": p.q,
        "alpha": 0.0 if p.alpha is None else p.alpha,
        "coeffs": [matrix_to_json(c) for c in p.coeffs],
    }


def json_to_matrix_polynomial(payload) -> MatrixPolynomial:
    _require(payload, ("q", "alpha", "coeffs"), "matrix polynomial")
    coeffs = [json_to_matrix(c) for c in payload["coeffs"]]
    try:
        poly = MatrixPolynomial(np.stack(coeffs), float(payload["alpha"]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad matrix polynomial: {exc}") from exc
    if poly.dim != 2 * int(payload["q"]):
        raise SchemaError(f"declared q = {payload['q']} but coefficients are {poly.dim} x {poly.dim}")
    return poly


def json_to_bare_matrix(payload) -> np.ndarray:
    _require(payload, ("matrix",), "matrix file")
    return json_to_matrix(payload["matrix"])


def tolerances_to_json(cfg: ToleranceConfig) -> dict:
    return {
        "rank_rel_tol": cfg.rank_rel_tol,
        "psd_tol": cfg.psd_tol,
        "eq_tol": cfg.eq_tol,
    }


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def dump_json(obj, path=None) -> str:
    """Serialize deterministically (sorted keys, fixed indentation)."""
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
