"""JSON encodings for matrices, operator files, polynomials and results.

Complex matrices are row-major nested lists of ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .clifford import Multivector, blade_from_indices, blade_indices
from .polyspace import HyperPolynomial, OperatorTuple
from .validation import HERMITIAN_RTOL, HermiticityError, hermitian_residual

OPERATORS_SCHEMA = "riesz-clifford/operators/1"
HYPERPOLY_SCHEMA = "riesz-clifford/hyperpoly/1"
MATRIX_SCHEMA = "riesz-clifford/matrix/1"
RESULT_SCHEMA = "riesz-clifford/calculus-result/1"


class OperatorFileError(ValueError):
    pass


def matrix_to_json(A) -> list:
    A = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError(f"matrix must be a nested [rows][cols][re, im] array, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def jsonable(obj):
    """Recursively convert numpy scalars and arrays into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True)


# -- operator files -----------------------------------------------------------

def operators_to_dict(T: OperatorTuple, labels=None) -> dict:
    data = {
        "schema": OPERATORS_SCHEMA,
        "m": T.m,
        "d": T.d,
        "matrices": [matrix_to_json(A) for A in T],
    }
    if labels:
        data["labels"] = list(labels)
    return data


def operators_from_dict(data: dict, rtol: float = HERMITIAN_RTOL) -> tuple[OperatorTuple, list[str]]:
    """Parse an operator file payload, checking counts, sizes and Hermiticity."""
    try:
        mats = [matrix_from_json(M) for M in data["matrices"]]
    except KeyError as exc:
        raise OperatorFileError(f"operator file is missing the field {exc}") from None
    except ValueError as exc:
        raise OperatorFileError(str(exc)) from None
    if "m" in data and int(data["m"]) != len(mats):
        raise OperatorFileError(f"declared m={data['m']} but {len(mats)} matrices are present")
    for i, A in enumerate(mats):
        if A.shape[0] != A.shape[1]:
            raise OperatorFileError(f"matrix {i + 1} is not square: {A.shape}")
        if "d" in data and A.shape[0] != int(data["d"]):
            raise OperatorFileError(f"matrix {i + 1} has dimension {A.shape[0]}, declared d={data['d']}")
    bad = [(i, hermitian_residual(A)) for i, A in enumerate(mats)
           if hermitian_residual(A) > rtol * max(np.linalg.norm(A, 2), 1.0)]
    if bad:
        raise HermiticityError(bad)
    labels = list(data.get("labels") or [f"T{i + 1}" for i in range(len(mats))])
    return OperatorTuple(mats, rtol=rtol), labels


def read_operator_file(path, rtol: float = HERMITIAN_RTOL) -> tuple[OperatorTuple, list[str]]:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise OperatorFileError(f"{path}: invalid JSON ({exc})") from None
    return operators_from_dict(data, rtol)


def write_operator_file(path, T: OperatorTuple, labels=None) -> None:
    Path(path).write_text(dumps(operators_to_dict(T, labels)) + "\n", encoding="utf-8")


# -- multivectors and polynomials ---------------------------------------------

def multivector_to_dict(x: Multivector) -> dict:
    terms = []
    for bits, c in x:
        entry = {"blade": list(blade_indices(bits))}
        if isinstance(c, np.ndarray):
            entry["matrix"] = matrix_to_json(c)
        else:
            entry["value"] = jsonable(c)
        terms.append(entry)
    return {"n": x.n, "terms": terms}


def multivector_from_dict(data: dict) -> Multivector:
    n = int(data["n"])
    terms = {}
    for entry in data["terms"]:
        bits = blade_from_indices(entry["blade"], n)
        if "matrix" in entry:
            terms[bits] = matrix_from_json(entry["matrix"])
        else:
            v = entry["value"]
            terms[bits] = complex(*v) if isinstance(v, list) else float(v)
    return Multivector(n, terms)


def hyperpoly_to_dict(f: HyperPolynomial) -> dict:
    return {
        "schema": HYPERPOLY_SCHEMA,
        "n": f.n,
        "terms": [{"alpha": list(a), "coeff": multivector_to_dict(c)["terms"]} for a, c in sorted(f.coeffs.items())],
    }


def hyperpoly_from_dict(data: dict) -> HyperPolynomial:
    """Read ``{"n": n, "terms": [{"alpha": [...], "coeff": ...}]}``.

    ``coeff`` is a number (the ``e0`` part) or a list of
    ``{"blade": [indices], "value": x}`` entries.
    """
    n = int(data["n"])
    coeffs = {}
    for term in data["terms"]:
        alpha = tuple(int(a) for a in term["alpha"])
        c = term.get("coeff", 1.0)
        if isinstance(c, (int, float)):
            mv = Multivector.scalar(n, float(c))
        else:
            mv = multivector_from_dict({"n": n, "terms": c})
        coeffs[alpha] = coeffs[alpha] + mv if alpha in coeffs else mv
    return HyperPolynomial(n, coeffs)


def result_to_dict(result) -> dict:
    out = {
        "schema": RESULT_SCHEMA,
        "value": multivector_to_dict(result.value),
        "diagnostics": jsonable(result.diagnostics),
    }
    if result.is_matrix:
        out["matrix"] = matrix_to_json(result.matrix)
    return out
