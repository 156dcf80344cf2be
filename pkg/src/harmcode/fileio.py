"""JSON file formats for scripted encode/evaluate/decode pipelines.

Schemas (all integers are residues in [0, p)):

  task     {"p": p, "m": m, "n": n,
            "g": [[{"coeff": c, "exps": [e_1..e_m]}, ...] x n]}
  dataset  {"K": K, "data": [[x_1..x_m] x K]}
  shares   {"scheme": "harmonic", "p": p, "K": K, "d": d,
            "c": c, "betas": [..], "shares": [[..] x N]}
           shamir adds "thetas", lcc adds "alphas"/"gammas",
           freshman carries only p/K/d (its shares never depend on g).
  outputs  {"outputs": [[y_1..y_n] x N]}
  decoded  {"f": [y_1..y_n]}

Violations raise, distinctly: SchemaViolationError for structure,
ResidueRangeError for out-of-range values, CountMismatchError for
row/vector counts that disagree with the declared sizes.
"""

from __future__ import annotations

import json
from typing import Sequence

from . import baselines, harmonic
from .errors import (
    CountMismatchError,
    ResidueRangeError,
    SchemaViolationError,
)
from .field import FieldConfig, FieldVector
from .poly import Dataset, PolyMap


def _load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaViolationError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise SchemaViolationError(f"{path}: top level must be a JSON object")
    return doc


def _dump_json(path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def _get(doc: dict, key: str, where: str):
    if key not in doc:
        raise SchemaViolationError(f"{where}: missing key {key!r}")
    return doc[key]


def _as_int(value, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaViolationError(f"{what} must be an integer, got {value!r}")
    return value


def _as_residue(value, p: int, what: str) -> int:
    v = _as_int(value, what)
    if not 0 <= v < p:
        raise ResidueRangeError(f"{what}={v} outside [0, {p})")
    return v


def _as_matrix(value, p: int, what: str) -> list[list[int]]:
    """Rectangular list of residue rows with at least one column."""
    if not isinstance(value, list) or not value:
        raise SchemaViolationError(f"{what} must be a non-empty list of rows")
    rows = []
    width = None
    for r, row in enumerate(value):
        if not isinstance(row, list) or not row:
            raise SchemaViolationError(f"{what}[{r}] must be a non-empty list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise CountMismatchError(
                f"{what}[{r}] has {len(row)} entries, expected {width}")
        rows.append([_as_residue(v, p, f"{what}[{r}][{i}]") for i, v in enumerate(row)])
    return rows


# ---------------------------------------------------------------------------
# task and dataset files


def load_task(path) -> tuple[FieldConfig, PolyMap]:
    doc = _load_json(path)
    p = _as_int(_get(doc, "p", "task"), "p")
    field = FieldConfig(p)
    m = _as_int(_get(doc, "m", "task"), "m")
    n = _as_int(_get(doc, "n", "task"), "n")
    if m < 1 or n < 1:
        raise SchemaViolationError(f"task: need m >= 1 and n >= 1, got m={m}, n={n}")
    g_doc = _get(doc, "g", "task")
    if not isinstance(g_doc, list) or len(g_doc) != n:
        raise CountMismatchError(f"task: g must list {n} output coordinates")
    terms_per_output = []
    for t, coord in enumerate(g_doc):
        if not isinstance(coord, list):
            raise SchemaViolationError(f"task: g[{t}] must be a list of terms")
        terms = []
        for s, term in enumerate(coord):
            if not isinstance(term, dict):
                raise SchemaViolationError(f"task: g[{t}][{s}] must be an object")
            coeff = _as_residue(_get(term, "coeff", f"g[{t}][{s}]"), p,
                                f"g[{t}][{s}].coeff")
            exps = _get(term, "exps", f"g[{t}][{s}]")
            if not isinstance(exps, list) or len(exps) != m:
                raise CountMismatchError(f"task: g[{t}][{s}].exps must list {m} exponents")
            exps = [_as_int(e, f"g[{t}][{s}].exps[{i}]") for i, e in enumerate(exps)]
            for i, e in enumerate(exps):
                if not 0 <= e <= p - 1:
                    raise ResidueRangeError(
                        f"g[{t}][{s}].exps[{i}]={e} outside [0, {p - 1}]")
            terms.append((coeff, tuple(exps)))
        terms_per_output.append(terms)
    return field, PolyMap.from_terms(field, m, terms_per_output)


def write_task(path, g: PolyMap) -> None:
    doc = {
        "p": g.field.p,
        "m": g.m,
        "n": g.n,
        "g": [[{"coeff": mono.coeff.value, "exps": list(mono.exps)}
               for mono in coord] for coord in g.outputs],
    }
    _dump_json(path, doc)


def load_dataset(path, field: FieldConfig) -> Dataset:
    doc = _load_json(path)
    K = _as_int(_get(doc, "K", "dataset"), "K")
    if K < 1:
        raise SchemaViolationError(f"dataset: K must be >= 1, got {K}")
    rows = _as_matrix(_get(doc, "data", "dataset"), field.p, "data")
    if len(rows) != K:
        raise CountMismatchError(f"dataset: declared K={K} but data has {len(rows)} rows")
    return Dataset([field.vector(row) for row in rows])


def write_dataset(path, data: Dataset) -> None:
    _dump_json(path, {"K": data.K, "data": [list(item.values()) for item in data.items]})


# ---------------------------------------------------------------------------
# shares files (scheme parameters embedded)


def params_to_json(params) -> dict:
    if isinstance(params, harmonic.HarmonicParams):
        return {
            "scheme": "harmonic",
            "p": params.field.p,
            "K": params.K,
            "d": params.d,
            "c": params.c.value,
            "betas": [b.value for b in params.betas],
        }
    if isinstance(params, baselines.ShamirParams):
        return {
            "scheme": "shamir",
            "p": params.field.p,
            "K": params.K,
            "d": params.d,
            "thetas": [t.value for t in params.thetas],
        }
    if isinstance(params, baselines.LCCParams):
        return {
            "scheme": "lcc",
            "p": params.field.p,
            "K": params.K,
            "d": params.d,
            "alphas": [a.value for a in params.alphas],
            "gammas": [g.value for g in params.gammas],
        }
    if isinstance(params, baselines.FreshmanParams):
        return {
            "scheme": "freshman",
            "p": params.field.p,
            "K": params.K,
            "d": params.d,
        }
    raise TypeError(f"no JSON form for {type(params).__name__}")


def _residue_list(doc, key, p, where) -> list[int]:
    value = _get(doc, key, where)
    if not isinstance(value, list):
        raise SchemaViolationError(f"{where}: {key} must be a list")
    return [_as_residue(v, p, f"{key}[{i}]") for i, v in enumerate(value)]


def params_from_json(doc: dict, m: int = 1):
    """Rebuild scheme parameters from a shares-file header.

    ``m`` is only needed by the freshman scheme, whose stored parameters
    do not include the (irrelevant-for-coding) output matrix; a placeholder
    single-row matrix of ones is used.
    """
    scheme = _get(doc, "scheme", "shares")
    p = _as_int(_get(doc, "p", "shares"), "p")
    field = FieldConfig(p)
    K = _as_int(_get(doc, "K", "shares"), "K")
    d = _as_int(_get(doc, "d", "shares"), "d")
    if scheme == "harmonic":
        c = _as_residue(_get(doc, "c", "shares"), p, "c")
        betas = _residue_list(doc, "betas", p, "shares")
        return harmonic.select_params(field, K, d, c=c, betas=betas)
    if scheme == "shamir":
        thetas = _residue_list(doc, "thetas", p, "shares")
        return baselines.ShamirParams(field, K, d,
                                      tuple(field.element(t) for t in thetas))
    if scheme == "lcc":
        alphas = _residue_list(doc, "alphas", p, "shares")
        gammas = _residue_list(doc, "gammas", p, "shares")
        return baselines.LCCParams(field, K, d,
                                   tuple(field.element(a) for a in alphas),
                                   tuple(field.element(g) for g in gammas))
    if scheme == "freshman":
        if d != p:
            raise SchemaViolationError(
                f"shares: freshman requires d equal to the characteristic {p}, got {d}")
        ones = [[field.one()] * m]
        return baselines.FreshmanParams(field, K, m, 1, ones)
    raise SchemaViolationError(f"shares: unknown scheme {scheme!r}")


def write_shares(path, params, shares: Sequence[FieldVector]) -> None:
    doc = params_to_json(params)
    doc["shares"] = [list(s.values()) for s in shares]
    _dump_json(path, doc)


def load_shares(path):
    """Returns (params, shares). Share count must match the scheme's N."""
    doc = _load_json(path)
    p = _as_int(_get(doc, "p", "shares"), "p")
    rows = _as_matrix(_get(doc, "shares", "shares"), p, "shares")
    params = params_from_json(doc, m=len(rows[0]))
    if len(rows) != params.N:
        raise CountMismatchError(
            f"shares: scheme needs {params.N} shares, file has {len(rows)}")
    field = params.field
    return params, [field.vector(row) for row in rows]


# ---------------------------------------------------------------------------
# outputs and decoded-result files


def write_outputs(path, outputs: Sequence[FieldVector]) -> None:
    _dump_json(path, {"outputs": [list(o.values()) for o in outputs]})


def load_outputs(path, field: FieldConfig) -> list[FieldVector]:
    doc = _load_json(path)
    rows = _as_matrix(_get(doc, "outputs", "outputs"), field.p, "outputs")
    return [field.vector(row) for row in rows]


def write_decoded(path, value: FieldVector) -> None:
    _dump_json(path, {"f": list(value.values())})


def load_decoded(path, field: FieldConfig) -> FieldVector:
    doc = _load_json(path)
    row = _get(doc, "f", "decoded")
    if not isinstance(row, list) or not row:
        raise SchemaViolationError("decoded: f must be a non-empty list")
    return field.vector([_as_residue(v, field.p, f"f[{i}]") for i, v in enumerate(row)])


__all__ = [
    "load_task", "write_task", "load_dataset", "write_dataset",
    "params_to_json", "params_from_json", "write_shares", "load_shares",
    "write_outputs", "load_outputs", "write_decoded", "load_decoded",
]
