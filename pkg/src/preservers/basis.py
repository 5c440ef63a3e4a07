"""Orthonormal Hermitian matrix basis and the real coordinate maps built on it.

Ordering contract (pinned by the ``gellmann-v1`` tag in the JSON interchange
format): the d diagonal units E_kk first, then for each index pair i < j in
lexicographic order the symmetric element (E_ij + E_ji)/sqrt(2) immediately
followed by the antisymmetric element i(E_ij - E_ji)/sqrt(2).
"""

from functools import lru_cache

import numpy as np

SQRT2 = np.sqrt(2.0)

BASIS_TAG = "gellmann-v1"


@lru_cache(maxsize=None)
def _triu(d: int):
    iu, ju = np.triu_indices(d, 1)
    return iu, ju


def basis_size(d: int) -> int:
    return d * d


def basis_element(d: int, idx: int) -> np.ndarray:
    """The idx-th basis matrix of dimension d (see module docstring for order)."""
    if not 0 <= idx < d * d:
        raise IndexError(f"basis index {idx} out of range for dimension {d}")
    m = np.zeros((d, d), dtype=np.complex128)
    if idx < d:
        m[idx, idx] = 1.0
        return m
    iu, ju = _triu(d)
    pair, kind = divmod(idx - d, 2)
    i, j = int(iu[pair]), int(ju[pair])
    if kind == 0:
        m[i, j] = 1.0 / SQRT2
        m[j, i] = 1.0 / SQRT2
    else:
        m[i, j] = 1.0j / SQRT2
        m[j, i] = -1.0j / SQRT2
    return m


def basis_label(d: int, idx: int) -> str:
    """Human-readable name of a basis element, e.g. 'E11', 'X01', 'Y01'."""
    if idx < d:
        return f"E{idx}{idx}"
    iu, ju = _triu(d)
    pair, kind = divmod(idx - d, 2)
    prefix = "X" if kind == 0 else "Y"
    return f"{prefix}{iu[pair]}{ju[pair]}"


def coords(matrix: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix in the basis: c_i = Tr(B_i A)."""
    d = matrix.shape[0]
    iu, ju = _triu(d)
    off = matrix[iu, ju]
    out = np.empty(d * d, dtype=np.float64)
    out[:d] = np.diag(matrix).real
    out[d::2] = SQRT2 * off.real
    out[d + 1::2] = SQRT2 * off.imag
    return out


def from_coords(vec: np.ndarray, d: int) -> np.ndarray:
    """Inverse of :func:`coords`."""
    m = np.zeros((d, d), dtype=np.complex128)
    np.fill_diagonal(m, vec[:d])
    iu, ju = _triu(d)
    z = (vec[d::2] + 1j * vec[d + 1::2]) / SQRT2
    m[iu, ju] = z
    m[ju, iu] = z.conj()
    return m
