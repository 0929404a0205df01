"""JSON ingestion and canonical serialization.

Inputs are checked structurally with jsonschema first, then decoded into exact
library objects; both stages raise :class:`SchemaError` with the offending
field path.  Scalars serialize as lowest-terms ``"p/q"`` strings (``"1/1"``
included) and canonical dumps sort keys with compact separators, so golden
files compare byte for byte.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema
from jsonschema.exceptions import best_match

from conifold.degeneration import DegenerationSpec, LESWitness, Stratum
from conifold.errors import SchemaError
from conifold.monodromy import GluingDatum, Lattice, VanishingConfig, WeightFiltration
from conifold.qlinalg import Filtration, Matrix, Subspace, scalar
from conifold.zigzag import ExtensionPresentation, RawZigZag, ZigZag

# ---------------------------------------------------------------------------
# Schemas
# ---------------------------------------------------------------------------

_SCALAR = {"oneOf": [
    {"type": "integer"},
    {"type": "string", "pattern": r"^\s*-?\d+(/\d+)?\s*$"},
]}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _SCALAR}}
_COUNT = {"type": "integer", "minimum": 0}
_INT_VECTOR = {"type": "array", "items": {"type": "integer"}}
_DEGREE_MAP = {
    "type": "object",
    "patternProperties": {r"^-?\d+$": _COUNT},
    "additionalProperties": False,
}

ZIGZAG_SCHEMA = {
    "type": "object",
    "required": ["hm", "h0", "a", "b"],
    "properties": {
        "hm": _COUNT, "h0": _COUNT, "a": _COUNT, "b": _COUNT,
        "alpha": _MATRIX, "beta": _MATRIX, "gamma": _MATRIX,
        "label": {"type": "string"},
    },
    "additionalProperties": False,
}

PRESENTATION_SCHEMA = {
    "type": "object",
    "required": ["sub", "quot"],
    "properties": {
        "sub": ZIGZAG_SCHEMA, "quot": ZIGZAG_SCHEMA,
        "u_alpha": _MATRIX, "u_beta": _MATRIX, "u_gamma": _MATRIX,
        "class_params": {"type": "array", "items": _SCALAR},
    },
    "additionalProperties": False,
}

LATTICE_SCHEMA = {
    "type": "object",
    "required": ["rank", "gram"],
    "properties": {
        "rank": _COUNT,
        "gram": {"type": "array", "items": _INT_VECTOR},
        "symmetry": {"enum": ["symmetric", "skew"]},
        "cycles": {"type": "array", "items": _INT_VECTOR},
    },
    "additionalProperties": False,
}

WEIGHTS_SCHEMA = {
    "type": "object",
    "required": ["n"],
    "properties": {"n": _MATRIX, "center": {"type": "integer"}},
    "additionalProperties": False,
}

GLUING_SCHEMA = {
    "type": "object",
    "required": ["mprime", "mdprime", "u", "v", "n"],
    "properties": {
        "mprime": _COUNT, "mdprime": _COUNT,
        "u": _MATRIX, "v": _MATRIX, "n": _MATRIX,
    },
    "additionalProperties": False,
}

LES_SCHEMA = {
    "type": "object",
    "properties": {
        "h_special": _DEGREE_MAP, "h_psi": _DEGREE_MAP, "h_phi": _DEGREE_MAP,
        "rank_special_psi": _DEGREE_MAP, "rank_psi_phi": _DEGREE_MAP,
    },
    "additionalProperties": False,
}

DEGENERATION_SCHEMA = {
    "type": "object",
    "properties": {
        "fiber_dim": _COUNT,
        "strata": {"type": "array", "items": {
            "type": "object",
            "required": ["label"],
            "properties": {
                "label": {"type": "string"},
                "dim": _COUNT,
                "milnor_rank": _COUNT,
                "kind": {"enum": ["node", "point"]},
            },
            "additionalProperties": False,
        }},
        "lattice": LATTICE_SCHEMA,
        "cycles": {"type": "array", "items": _INT_VECTOR},
        "smooth_betti": {"type": "array", "items": _COUNT},
    },
    "additionalProperties": False,
}


def check_schema(data: Any, schema: dict) -> None:
    """Raise SchemaError for the most relevant jsonschema violation."""
    error = best_match(jsonschema.Draft202012Validator(schema).iter_errors(data))
    if error is not None:
        raise SchemaError(error.message, error.json_path)


def load_json(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                          str(path)) from exc


# ---------------------------------------------------------------------------
# Scalars and matrices
# ---------------------------------------------------------------------------

def scalar_to_json(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def matrix_to_json(m: Matrix) -> list[list[str]]:
    return [[scalar_to_json(x) for x in row] for row in m.entries]


def matrix_from_json(data, rows: int, cols: int, path: str) -> Matrix:
    """Decode a matrix of the expected shape; a missing entry means zero."""
    if data is None:
        return Matrix.zeros(rows, cols)
    if len(data) != rows or any(len(r) != cols for r in data):
        raise SchemaError(f"expected a {rows}x{cols} matrix", path)
    try:
        return Matrix.from_rows([[scalar(x) for x in r] for r in data], cols)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(str(exc), path) from exc


def _square_from_json(data, path: str) -> Matrix:
    n = len(data)
    return matrix_from_json(data, n, n, path)


# ---------------------------------------------------------------------------
# Zig-zags and presentations
# ---------------------------------------------------------------------------

def raw_zigzag_from_json(data: dict, path: str = "$") -> RawZigZag:
    check_schema(data, ZIGZAG_SCHEMA)
    hm, h0, a, b = data["hm"], data["h0"], data["a"], data["b"]
    return RawZigZag(
        hm, h0, a, b,
        matrix_from_json(data.get("alpha"), a, hm, f"{path}.alpha"),
        matrix_from_json(data.get("beta"), b, a, f"{path}.beta"),
        matrix_from_json(data.get("gamma"), h0, b, f"{path}.gamma"),
        data.get("label", ""),
    )


def zigzag_from_json(data: dict, path: str = "$") -> ZigZag:
    return ZigZag.from_raw(raw_zigzag_from_json(data, path))


def zigzag_to_json(z: RawZigZag) -> dict:
    return {
        "hm": z.hm_dim, "h0": z.h0_dim, "a": z.a_dim, "b": z.b_dim,
        "alpha": matrix_to_json(z.alpha),
        "beta": matrix_to_json(z.beta),
        "gamma": matrix_to_json(z.gamma),
        "label": z.label,
    }


def presentation_from_json(data: dict) -> ExtensionPresentation:
    check_schema(data, PRESENTATION_SCHEMA)
    sub = zigzag_from_json(data["sub"], "$.sub")
    quot = zigzag_from_json(data["quot"], "$.quot")
    return ExtensionPresentation(
        sub, quot,
        matrix_from_json(data.get("u_alpha"), sub.a_dim, quot.hm_dim, "$.u_alpha"),
        matrix_from_json(data.get("u_beta"), sub.b_dim, quot.a_dim, "$.u_beta"),
        matrix_from_json(data.get("u_gamma"), sub.h0_dim, quot.b_dim, "$.u_gamma"),
        tuple(scalar(p) for p in data.get("class_params", [])),
    )


def presentation_to_json(e: ExtensionPresentation) -> dict:
    return {
        "sub": zigzag_to_json(e.sub),
        "quot": zigzag_to_json(e.quot),
        "u_alpha": matrix_to_json(e.u_alpha),
        "u_beta": matrix_to_json(e.u_beta),
        "u_gamma": matrix_to_json(e.u_gamma),
        "class_params": [scalar_to_json(p) for p in e.class_params],
    }


# ---------------------------------------------------------------------------
# Lattices, gluing data, filtrations
# ---------------------------------------------------------------------------

def _lattice_from_json(data: dict, path: str) -> Lattice:
    n = data["rank"]
    gram = matrix_from_json(data["gram"], n, n, f"{path}.gram")
    try:
        return Lattice(n, gram, data.get("symmetry", "skew"))
    except ValueError as exc:
        raise SchemaError(str(exc), f"{path}.gram") from exc


def vanishing_config_from_json(data: dict, path: str = "$") -> VanishingConfig:
    """``{rank, gram, symmetry, cycles}``."""
    check_schema(data, LATTICE_SCHEMA)
    lattice = _lattice_from_json(data, path)
    try:
        return VanishingConfig(lattice, tuple(data.get("cycles", [])))
    except ValueError as exc:
        raise SchemaError(str(exc), f"{path}.cycles") from exc


def lattice_to_json(cfg: VanishingConfig) -> dict:
    lat = cfg.lattice
    return {
        "rank": lat.rank,
        "gram": [[int(x) for x in row] for row in lat.gram.entries],
        "symmetry": lat.symmetry,
        "cycles": [list(c) for c in cfg.cycles],
    }


def weights_input_from_json(data: dict) -> tuple[Matrix, int | None]:
    check_schema(data, WEIGHTS_SCHEMA)
    return _square_from_json(data["n"], "$.n"), data.get("center")


def gluing_from_json(data: dict) -> GluingDatum:
    check_schema(data, GLUING_SCHEMA)
    p, d = data["mprime"], data["mdprime"]
    return GluingDatum(
        p, d,
        matrix_from_json(data["u"], d, p, "$.u"),
        matrix_from_json(data["v"], p, d, "$.v"),
        matrix_from_json(data["n"], p, p, "$.n"),
    )


def subspace_to_json(s: Subspace) -> list[list[str]]:
    """The canonical basis, one column per entry."""
    return [[scalar_to_json(x) for x in v] for v in s.vectors()]


def filtration_to_json(f: Filtration) -> dict:
    return {
        "center": f.center,
        "steps": [{"index": i, "basis": subspace_to_json(s)} for i, s in f.steps],
    }


def weight_filtration_to_json(w: WeightFiltration) -> dict:
    out = filtration_to_json(w.filtration)
    out["graded_dims"] = {str(k): v for k, v in w.graded_dims().items()}
    return out


# ---------------------------------------------------------------------------
# Degenerations and LES witnesses
# ---------------------------------------------------------------------------

def _degree_map(data: dict | None) -> dict[int, int]:
    return {int(k): v for k, v in (data or {}).items()}


def les_witness_from_json(data: dict) -> LESWitness:
    check_schema(data, LES_SCHEMA)
    return LESWitness(
        h_special=_degree_map(data.get("h_special")),
        h_psi=_degree_map(data.get("h_psi")),
        h_phi=_degree_map(data.get("h_phi")),
        rank_special_psi=_degree_map(data.get("rank_special_psi")),
        rank_psi_phi=_degree_map(data.get("rank_psi_phi")),
    )


def les_witness_to_json(w: LESWitness) -> dict:
    def encode(m):
        return {str(k): v for k, v in sorted(m.items())}
    return {
        "h_special": encode(w.h_special),
        "h_psi": encode(w.h_psi),
        "h_phi": encode(w.h_phi),
        "rank_special_psi": encode(w.rank_special_psi),
        "rank_psi_phi": encode(w.rank_psi_phi),
    }


def degeneration_from_json(data: dict) -> DegenerationSpec:
    """``cycles`` may sit inside ``lattice`` or next to it."""
    check_schema(data, DEGENERATION_SCHEMA)
    strata = []
    for i, s in enumerate(data.get("strata", [])):
        try:
            strata.append(Stratum(s["label"], s.get("dim", 0), s.get("milnor_rank", 1),
                                  s.get("kind", "node")))
        except ValueError as exc:
            raise SchemaError(str(exc), f"$.strata[{i}]") from exc
    cfg = None
    if "lattice" in data:
        lattice = dict(data["lattice"])
        if "cycles" in data:
            lattice["cycles"] = data["cycles"]
        cfg = vanishing_config_from_json(lattice, "$.lattice")
    betti = data.get("smooth_betti")
    try:
        return DegenerationSpec(
            fiber_dim=data.get("fiber_dim", 3),
            strata=tuple(strata),
            lattice_config=cfg,
            smooth_betti=tuple(betti) if betti is not None else None,
        )
    except ValueError as exc:
        raise SchemaError(str(exc), "$.cycles") from exc


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
