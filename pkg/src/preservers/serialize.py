"""JSON interchange for matrices, maps, states and classification reports.

Validation errors carry the offending field path so command-line users can
locate the problem; unknown basis tags are rejected rather than guessed at.
"""

import json

import numpy as np

from . import basis
from .errors import StructureError
from .linalg import HermitianOperator, PureState, herm, pure_state
from .pure_analysis import PureClassification
from .sep_analysis import (
    FORM,
    INSUFFICIENT,
    MULTI_FORM,
    MultiClassification,
    SepClassification,
    check_both_directions,
)
from .superop import Isometry, SepForm, SuperOperator, isometry, make_superop


def _need(obj, key, path):
    if not isinstance(obj, dict):
        raise StructureError(f"{path}: expected an object")
    if key not in obj:
        raise StructureError(f"{path}.{key}: missing field")
    return obj[key]


def _as_float_rows(value, path):
    try:
        arr = np.array(value, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise StructureError(f"{path}: not a numeric array ({exc})") from exc
    if arr.ndim != 2:
        raise StructureError(f"{path}: expected a 2-d array, got {arr.ndim}-d")
    return arr


def _complex_matrix(obj, path):
    re = _as_float_rows(_need(obj, "re", path), f"{path}.re")
    im = _as_float_rows(_need(obj, "im", path), f"{path}.im")
    if re.shape != im.shape:
        raise StructureError(f"{path}: re/im shapes differ {re.shape} vs {im.shape}")
    return re + 1j * im


def matrix_to_json(op: HermitianOperator) -> dict:
    dims = op.dims if op.dims is not None else (op.dim,)
    return {
        "dims": list(dims),
        "re": op.matrix.real.tolist(),
        "im": op.matrix.imag.tolist(),
    }


def matrix_from_json(obj, path: str = "$") -> HermitianOperator:
    dims = _need(obj, "dims", path)
    if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 1 for d in dims):
        raise StructureError(f"{path}.dims: expected a list of positive integers")
    mat = _complex_matrix(obj, path)
    d = int(np.prod(dims))
    if mat.shape != (d, d):
        raise StructureError(f"{path}: matrix shape {mat.shape} != dims product {d}")
    try:
        return herm(mat, dims)
    except StructureError as exc:
        raise StructureError(f"{path}: {exc}") from exc


def superop_to_json(op: SuperOperator) -> dict:
    return {
        "in_dims": list(op.in_dims),
        "out_dims": list(op.out_dims),
        "basis": basis.BASIS_TAG,
        "coeff": op.coeff.tolist(),
    }


def superop_from_json(obj, path: str = "$") -> SuperOperator:
    tag = _need(obj, "basis", path)
    if tag != basis.BASIS_TAG:
        raise StructureError(f"{path}.basis: unknown basis tag {tag!r}, expected {basis.BASIS_TAG!r}")
    in_dims = _need(obj, "in_dims", path)
    out_dims = _need(obj, "out_dims", path)
    for name, dims in (("in_dims", in_dims), ("out_dims", out_dims)):
        if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 1 for d in dims):
            raise StructureError(f"{path}.{name}: expected a list of positive integers")
    coeff = _as_float_rows(_need(obj, "coeff", path), f"{path}.coeff")
    try:
        return make_superop(in_dims, out_dims, coeff)
    except StructureError as exc:
        raise StructureError(f"{path}.coeff: {exc}") from exc


def vector_to_json(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v]


def vector_from_json(obj, path: str) -> np.ndarray:
    try:
        arr = np.array(obj, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise StructureError(f"{path}: not a numeric array ({exc})") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise StructureError(f"{path}: expected a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def state_to_json(state) -> dict:
    return {
        "dims": list(state.dims),
        "terms": [
            {"p": float(w), "factors": [vector_to_json(f.vector) for f in t]}
            for w, t in zip(state.weights, state.terms)
        ],
    }


def state_from_json(obj, path: str = "$"):
    from .states import separable_state

    dims = _need(obj, "dims", path)
    terms_obj = _need(obj, "terms", path)
    if not isinstance(terms_obj, list) or not terms_obj:
        raise StructureError(f"{path}.terms: expected a nonempty list")
    weights, terms = [], []
    for i, term in enumerate(terms_obj):
        tp = f"{path}.terms[{i}]"
        weights.append(_need(term, "p", tp))
        factors = _need(term, "factors", tp)
        if not isinstance(factors, list) or len(factors) != len(dims):
            raise StructureError(f"{tp}.factors: expected {len(dims)} factor vectors")
        states = []
        for j, f in enumerate(factors):
            v = vector_from_json(f, f"{tp}.factors[{j}]")
            if v.shape[0] != dims[j]:
                raise StructureError(f"{tp}.factors[{j}]: length {v.shape[0]} != dim {dims[j]}")
            states.append(pure_state(v))
        terms.append(tuple(states))
    try:
        return separable_state(weights, terms)
    except StructureError as exc:
        raise StructureError(f"{path}: {exc}") from exc


def isometry_to_json(iso: Isometry) -> dict:
    return {
        "re": iso.matrix.real.tolist(),
        "im": iso.matrix.imag.tolist(),
        "flag": iso.flag,
    }


def isometry_from_json(obj, path: str = "$") -> Isometry:
    mat = _complex_matrix(obj, path)
    flag = _need(obj, "flag", path)
    try:
        return isometry(mat, flag)
    except StructureError as exc:
        raise StructureError(f"{path}: {exc}") from exc


def _pure_to_json(p: PureState, dims=None) -> dict:
    proj = p.projection if dims is None else p.projection.with_dims(dims)
    return matrix_to_json(proj)


# ---------------------------------------------------------------------------
# classification reports

def pure_report(c: PureClassification) -> dict:
    return {
        "kind": c.kind,
        "R": _pure_to_json(c.replacement) if c.replacement is not None else None,
        "V": isometry_to_json(c.isometry) if c.isometry is not None else None,
        "flag": c.isometry.flag if c.isometry is not None else None,
        "witness": _pure_to_json(c.witness) if c.witness is not None else None,
        "residual": float(c.residual),
    }


def _sep_params(form: SepForm) -> dict:
    out = {}
    if form.r1 is not None:
        out["R1"] = _pure_to_json(form.r1)
    if form.r2 is not None:
        out["R2"] = _pure_to_json(form.r2)
    if form.u1 is not None:
        out["U1"] = isometry_to_json(form.u1)
    if form.u2 is not None:
        out["U2"] = isometry_to_json(form.u2)
    return out


def sep_report(c: SepClassification) -> dict:
    if c.kind == FORM:
        form_field = c.form.tag
        params = _sep_params(c.form)
    elif c.kind == "pattern89":
        form_field = c.pattern.tag
        params = {
            "R": _pure_to_json(c.pattern.fixed),
            "samples": len(c.pattern.samples),
        }
    else:
        form_field = "none"
        params = {}
    witness = None
    if c.witness is not None:
        p, q = c.witness
        witness = {"factors": [_pure_to_json(p), _pure_to_json(q)]}
    return {
        "form": form_field,
        "params": params,
        "witness": witness,
        "grid": list(c.grid) if c.grid is not None else None,
        "residual": float(c.residual),
        "both_directions": check_both_directions(c),
    }


def multi_report(c: MultiClassification) -> dict:
    if c.kind == MULTI_FORM:
        form_field = "multi"
        params = {
            "pi": list(c.form.perm),
            "isometries": [isometry_to_json(u) for u in c.form.isometries],
        }
    elif c.kind == INSUFFICIENT:
        form_field = "insufficient"
        params = {"detail": c.detail}
    else:
        form_field = "none"
        params = {}
    witness = None
    if c.witness is not None:
        witness = {"factors": [_pure_to_json(p) for p in c.witness]}
    return {
        "form": form_field,
        "params": params,
        "witness": witness,
        "residual": float(c.residual),
    }


def dumps(obj) -> str:
    """Canonical one-line UTF-8 JSON with a trailing newline."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n"
