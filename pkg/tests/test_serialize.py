"""JSON interchange round trips and validation error paths."""

import json

import numpy as np
import pytest

from preservers import (
    StructureError,
    random_hermitian,
    random_isometry,
    random_pure,
    sample_separable,
    superop_equal,
    trace_replacer,
)
from preservers.serialize import (
    dumps,
    isometry_from_json,
    isometry_to_json,
    matrix_from_json,
    matrix_to_json,
    state_from_json,
    state_to_json,
    superop_from_json,
    superop_to_json,
)


def test_matrix_round_trip():
    a = random_hermitian(6, 0, dims=(2, 3))
    obj = matrix_to_json(a)
    assert obj["dims"] == [2, 3]
    back = matrix_from_json(json.loads(json.dumps(obj)))
    assert np.allclose(back.matrix, a.matrix, atol=1e-15)
    assert back.dims == (2, 3)


def test_matrix_validation_paths():
    with pytest.raises(StructureError, match=r"\$\.dims"):
        matrix_from_json({"re": [[1]], "im": [[0]]})
    with pytest.raises(StructureError, match=r"\$\.re"):
        matrix_from_json({"dims": [2], "im": [[0, 0], [0, 0]]})
    with pytest.raises(StructureError, match="shape"):
        matrix_from_json({"dims": [3], "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]})
    with pytest.raises(StructureError, match="Hermitian"):
        matrix_from_json({"dims": [2], "re": [[0, 1], [0, 0]], "im": [[0, 0], [0, 0]]})


def test_superop_round_trip_and_basis_tag():
    op = trace_replacer(random_pure(3, 1), (2,), (3,))
    obj = superop_to_json(op)
    assert obj["basis"] == "gellmann-v1"
    back = superop_from_json(json.loads(json.dumps(obj)))
    assert superop_equal(op, back, 1e-12).equal
    obj["basis"] = "pauli-v2"
    with pytest.raises(StructureError, match="basis"):
        superop_from_json(obj)


def test_superop_shape_validation():
    with pytest.raises(StructureError, match="coeff"):
        superop_from_json({"in_dims": [2], "out_dims": [2],
                           "basis": "gellmann-v1", "coeff": [[1.0, 0.0]]})
    with pytest.raises(StructureError, match="in_dims"):
        superop_from_json({"in_dims": [0], "out_dims": [2],
                           "basis": "gellmann-v1", "coeff": [[1.0]]})


def test_state_round_trip():
    s = sample_separable((2, 3), 3, 4)
    obj = state_to_json(s)
    back = state_from_json(json.loads(json.dumps(obj)))
    assert np.max(np.abs(back.density.matrix - s.density.matrix)) < 1e-12
    assert back.weights == pytest.approx(s.weights)


def test_state_validation_paths():
    with pytest.raises(StructureError, match=r"terms\[0\]\.factors"):
        state_from_json({"dims": [2, 2], "terms": [{"p": 1.0, "factors": [[[1, 0], [0, 0]]]}]})
    with pytest.raises(StructureError, match=r"factors\[0\]"):
        state_from_json({"dims": [2, 2], "terms": [
            {"p": 1.0, "factors": [[[1, 0], [0, 0], [0, 0]], [[1, 0], [0, 0]]]}]})


def test_isometry_round_trip():
    iso = random_isometry(3, 2, 5, "conjugate")
    back = isometry_from_json(json.loads(json.dumps(isometry_to_json(iso))))
    assert back.flag == "conjugate"
    assert np.allclose(back.matrix, iso.matrix, atol=1e-15)
    with pytest.raises(StructureError):
        isometry_from_json({"re": [[1, 0], [0, 2]], "im": [[0, 0], [0, 0]],
                            "flag": "linear"})


def test_dumps_is_single_line_utf8():
    text = dumps({"grid": ["a", "b′"]})
    assert text.endswith("\n") and text.count("\n") == 1
    assert "b′" in text
