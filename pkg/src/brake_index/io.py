"""
JSON and CSV formats for matrices, coefficient paths, sampled symplectic
paths and Hamiltonian specs.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .orbits import Hamiltonian, from_spec
from .paths import CoefficientPath, SymplecticPath, fundamental_solution, rotation_path
from .symplectic import NormalFormSpec, ValidationError, diamond, normal_form


class ParseError(ValueError):
    """Malformed or inconsistent input document."""


def load_json(source: str | Path) -> Any:
    """Read JSON from a file path, or from stdin when ``source`` is ``-``."""
    try:
        if str(source) == "-":
            import sys

            return json.load(sys.stdin)
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from exc


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def parse_matrix(doc: Any) -> np.ndarray:
    """A matrix as a nested list, ``{"matrix": [[...]]}`` or a normal-form product.

    The normal-form variant is ``{"normal_forms": [{"kind": "R", "theta": 0.7}, ...]}``
    and builds the diamond product of the listed factors.
    """
    try:
        if isinstance(doc, dict) and "normal_forms" in doc:
            mats = [normal_form(NormalFormSpec.from_dict(p)) for p in doc["normal_forms"]]
            if not mats:
                raise ParseError("empty normal form list")
            M = mats[0]
            for other in mats[1:]:
                M = diamond(M, other)
            return M
        data = doc["matrix"] if isinstance(doc, dict) else doc
        M = np.array(data, dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"cannot read matrix: {exc}") from exc
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise ParseError(f"expected a square matrix of even size, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ParseError("matrix has non-finite entries")
    return M


def parse_coefficient_path(doc: dict) -> CoefficientPath:
    """``{"grid": [...], "B": [[[...]]]}``, or ``{"constant": [[...]], "tau": t}``."""
    try:
        if "constant" in doc:
            return CoefficientPath.constant(np.array(doc["constant"], float), float(doc["tau"]))
        return CoefficientPath(np.array(doc["grid"], float), np.array(doc["B"], float),
                               bool(doc.get("periodic", False)))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"cannot read coefficient path: {exc}") from exc
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc


def parse_path(doc: dict) -> SymplecticPath:
    """Symplectic path from samples, a coefficient path, or ``{"kind": "rotation"}``.

    Accepted shapes: ``{"grid", "samples"}``; anything ``parse_coefficient_path``
    reads (integrated from the identity); ``{"kind": "rotation", "tau", "n"}``.
    """
    if not isinstance(doc, dict):
        raise ParseError("path document must be a JSON object")
    try:
        if doc.get("kind") == "rotation":
            return rotation_path(float(doc["tau"]), int(doc.get("n", 1)))
        if "samples" in doc:
            return SymplecticPath(np.array(doc["grid"], float), np.array(doc["samples"], float))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"cannot read path: {exc}") from exc
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc
    return fundamental_solution(parse_coefficient_path(doc))


def parse_hamiltonian(doc: dict) -> Hamiltonian:
    if not isinstance(doc, dict):
        raise ParseError("Hamiltonian spec must be a JSON object")
    try:
        return from_spec(doc)
    except (TypeError, ValidationError) as exc:
        raise ParseError(str(exc)) from exc


def csv_table(header: list[str], rows: list[list[Any]]) -> str:
    def fmt(v):
        return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)

    lines = [",".join(header)] + [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"
