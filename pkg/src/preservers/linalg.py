"""Dense Hermitian-matrix kernel: tensor structure, partial trace/transpose,
factor permutations, spectral decomposition, trace norm, purity tests and
seeded sampling.

All matrices live on a tensor product of finite-dimensional factors; the
factor ordering is row-major (the leftmost factor is the slowest index), so
the product basis vector ``e_i (x) u_j`` sits at flat index ``i * dimK + j``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NumericError, StructureError

# Fixed numerical contract of the whole package.
EPS_HERM = 1e-9      # relative Frobenius tolerance for hermiticity at construction
EPS_EIG = 1e-10      # relative eigendecomposition reconstruction tolerance
PURITY_TOL = 1e-8    # default second-eigenvalue threshold for purity
EPS_ISOMETRY = 1e-8  # tolerance on ||V+V - I||_F for isometries
EPS_CLS = 1e-8       # default classification tolerance
SUPEROP_TOL = 1e-9   # default max-norm tolerance for superoperator equality
PPT_TOL = 1e-10      # eigenvalue floor below which a partial transpose counts as negative

JACOBI_MAX_SWEEPS = 100


def as_rng(seed) -> np.random.Generator:
    """Accept an int seed or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class HermitianOperator:
    """A Hermitian matrix tagged with an optional tensor-factor structure.

    ``matrix`` is the (symmetrized) dense complex matrix; ``dims`` lists the
    factor dimensions whose product is the total dimension, or is None when
    the operator carries no factor structure.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def factor_dims(self) -> tuple[int, ...]:
        if self.dims is None:
            raise StructureError("operator carries no factor structure")
        return self.dims

    def with_dims(self, dims) -> "HermitianOperator":
        dims = _check_dims(dims, self.dim)
        return HermitianOperator(self.matrix, dims)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def _check_dims(dims, total: int) -> tuple[int, ...] | None:
    if dims is None:
        return None
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise StructureError(f"factor dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != total:
        raise StructureError(f"product of factor dims {dims} != matrix dimension {total}")
    return dims


def herm(matrix, dims=None, tol: float = EPS_HERM) -> HermitianOperator:
    """Validate hermiticity within ``tol`` (relative Frobenius) and symmetrize."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructureError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.linalg.norm(m)))
    dev = float(np.linalg.norm(m - m.conj().T))
    if dev > tol * scale:
        raise StructureError(f"matrix is not Hermitian: ||A - A+||_F = {dev:.3e}")
    sym = (m + m.conj().T) / 2.0
    return HermitianOperator(sym, _check_dims(dims, m.shape[0]))


def _wrap(matrix: np.ndarray, dims) -> HermitianOperator:
    """Internal constructor for results that are Hermitian by construction."""
    sym = (matrix + matrix.conj().T) / 2.0
    return HermitianOperator(sym, dims)


@dataclass(frozen=True)
class PureState:
    """Rank-1 projection with a canonical-phase vector representative.

    The representative phase is fixed by making the first component of
    nonnegligible modulus real positive, so reports are reproducible; the
    projection itself is phase-free.
    """

    vector: np.ndarray

    @property
    def dim(self) -> int:
        return self.vector.shape[0]

    @cached_property
    def projection(self) -> HermitianOperator:
        return _wrap(np.outer(self.vector, self.vector.conj()), None)

    def projection_on(self, dims) -> HermitianOperator:
        return self.projection.with_dims(dims)


def pure_state(vector) -> PureState:
    """Normalize a nonzero complex vector and fix its canonical phase."""
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    norm = float(np.linalg.norm(v))
    if norm < 1e-150:
        raise StructureError("cannot normalize a (numerically) zero vector")
    v = v / norm
    idx = int(np.argmax(np.abs(v) > 1e-12))
    phase = v[idx] / abs(v[idx])
    return PureState(v * phase.conjugate())


def basis_state(dim: int, k: int) -> PureState:
    v = np.zeros(dim, dtype=np.complex128)
    v[k] = 1.0
    return PureState(v)


def uniform_state(dim: int) -> PureState:
    return PureState(np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


# ---------------------------------------------------------------------------
# tensor structure

def tensor(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Kronecker product; factor lists concatenate (an untagged operand counts
    as a single factor)."""
    dims = (a.dims or (a.dim,)) + (b.dims or (b.dim,))
    return HermitianOperator(np.kron(a.matrix, b.matrix), dims)


def tensor_all(ops) -> HermitianOperator:
    ops = list(ops)
    out = ops[0]
    for op in ops[1:]:
        out = tensor(out, op)
    return out


def _reshaped(a: HermitianOperator):
    dims = a.factor_dims()
    n = len(dims)
    return a.matrix.reshape(dims + dims), dims, n


def _factor_index(which: int, n: int) -> int:
    if not 1 <= which <= n:
        raise StructureError(f"factor index {which} out of range 1..{n}")
    return which - 1


def partial_trace(a: HermitianOperator, which: int) -> HermitianOperator:
    """Trace out factor ``which`` (1-based), keeping the others in order."""
    t, dims, n = _reshaped(a)
    f = _factor_index(which, n)
    traced = np.trace(t, axis1=f, axis2=n + f)
    new_dims = dims[:f] + dims[f + 1:]
    if not new_dims:
        return HermitianOperator(np.array([[traced]], dtype=np.complex128), (1,))
    d = int(np.prod(new_dims))
    return HermitianOperator(np.ascontiguousarray(traced).reshape(d, d), new_dims)


def partial_transpose(a: HermitianOperator, which: int) -> HermitianOperator:
    """Transpose factor ``which`` in the fixed product basis."""
    t, dims, n = _reshaped(a)
    f = _factor_index(which, n)
    out = np.swapaxes(t, f, n + f)
    return HermitianOperator(np.ascontiguousarray(out).reshape(a.dim, a.dim), dims)


def permute_factors(a: HermitianOperator, perm) -> HermitianOperator:
    """Factor rearrangement: output slot j carries input factor perm[j-1]
    (1-based), so on products the result is A_{p_1} (x) ... (x) A_{p_n}."""
    t, dims, n = _reshaped(a)
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise StructureError(f"{perm} is not a permutation of 1..{n}")
    axes = [p - 1 for p in perm] + [n + p - 1 for p in perm]
    out = np.transpose(t, axes)
    new_dims = tuple(dims[p - 1] for p in perm)
    return HermitianOperator(np.ascontiguousarray(out).reshape(a.dim, a.dim), new_dims)


def swap_theta(a: HermitianOperator) -> HermitianOperator:
    """The swap: A (x) B -> B (x) A, for exactly two factors."""
    dims = a.factor_dims()
    if len(dims) != 2:
        raise StructureError(f"swap needs exactly two factors, got {len(dims)}")
    return permute_factors(a, (2, 1))


def reduce_to_factor(a: HermitianOperator, which: int) -> HermitianOperator:
    """Partial trace of every factor except ``which``."""
    t, dims, n = _reshaped(a)
    f = _factor_index(which, n)
    row = list(range(n))
    col = [i if i != f else n for i in range(n)]
    out = np.einsum(t, row + col, [f, n])
    return HermitianOperator(np.ascontiguousarray(out), (dims[f],))


# ---------------------------------------------------------------------------
# spectral kernel

def jacobi_eigh(matrix: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigensolver for complex Hermitian matrices.

    Each rotation annihilates one off-diagonal pivot with a unitary plane
    rotation whose phase absorbs the pivot's argument. Returns eigenvalues in
    descending order with orthonormal eigenvector columns. Raises
    NumericError when the off-diagonal mass has not collapsed within the
    sweep cap.
    """
    a = np.array(matrix, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.linalg.norm(a)))
    converged = False
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= 1e-14 * scale:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                r = abs(g)
                if r <= 1e-18 * scale:
                    continue
                tau = (a[p, p].real - a[q, q].real) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c * np.exp(-1j * np.angle(g))
                col_p = a[:, p] * c + a[:, q] * s
                col_q = -a[:, p] * np.conj(s) + a[:, q] * c
                a[:, p], a[:, q] = col_p, col_q
                row_p = np.conj(c) * a[p, :] + np.conj(s) * a[q, :]
                row_q = -s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = row_p, row_q
                vp = v[:, p] * c + v[:, q] * s
                vq = -v[:, p] * np.conj(s) + v[:, q] * c
                v[:, p], v[:, q] = vp, vq
    else:
        converged = np.linalg.norm(a - np.diag(np.diag(a))) <= 1e-10 * scale
    if not converged and n > 1:
        raise NumericError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
    w = np.diag(a).real
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def eig_hermitian(a: HermitianOperator, method: str = "lapack"):
    """Eigenvalues (descending) and orthonormal eigenvector columns.

    ``method`` selects the LAPACK backend (default) or the in-package cyclic
    Jacobi solver; both satisfy the same reconstruction contract.
    """
    if method == "lapack":
        try:
            w, v = np.linalg.eigh(a.matrix)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"eigendecomposition failed: {exc}") from exc
        return w[::-1].copy(), v[:, ::-1].copy()
    if method == "jacobi":
        return jacobi_eigh(a.matrix)
    raise StructureError(f"unknown eigensolver method {method!r}")


def trace_norm(a: HermitianOperator) -> float:
    """Sum of absolute eigenvalues."""
    w, _ = eig_hermitian(a)
    return float(np.sum(np.abs(w)))


def is_pure(a: HermitianOperator, tol: float = PURITY_TOL):
    """Test whether the spectrum is (1, 0, ..., 0) within ``tol``.

    On success also returns the top eigenvector as a canonical-phase
    PureState; the threshold applies to the distance of the top eigenvalue
    from 1 and of every other eigenvalue from 0.
    """
    w, v = eig_hermitian(a)
    if abs(w[0] - 1.0) > tol:
        return False, None
    if a.dim > 1 and np.max(np.abs(w[1:])) > tol:
        return False, None
    return True, pure_state(v[:, 0])


def is_product_pure(a: HermitianOperator, tol: float = PURITY_TOL):
    """Test membership in the set of product pure states.

    True iff the operator is pure and every single-factor reduction is pure;
    the recovered per-factor states tensor back to the input within ``tol``.
    """
    dims = a.factor_dims()
    ok, _ = is_pure(a, tol)
    if not ok:
        return False, None
    factors = []
    for i in range(len(dims)):
        red = reduce_to_factor(a, i + 1)
        ok_i, state = is_pure(red, tol)
        if not ok_i:
            return False, None
        factors.append(state)
    recon = tensor_all([f.projection for f in factors])
    if np.max(np.abs(recon.matrix - a.matrix)) > max(tol, 1e-10):
        return False, None
    return True, factors


def purity_defect(a: HermitianOperator) -> float:
    """Distance of the spectrum from (1, 0, ..., 0); 0 for exact pure states."""
    w, _ = eig_hermitian(a)
    defect = abs(w[0] - 1.0)
    if a.dim > 1:
        defect = max(defect, float(np.max(np.abs(w[1:]))))
    return defect


# ---------------------------------------------------------------------------
# sampling

def random_pure(dim: int, seed=0) -> PureState:
    """Normalized standard complex Gaussian vector (unitarily invariant)."""
    if dim < 1:
        raise StructureError("dimension must be >= 1")
    rng = as_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return pure_state(v)


def random_hermitian(dim: int, seed=0, dims=None) -> HermitianOperator:
    if dim < 1:
        raise StructureError("dimension must be >= 1")
    rng = as_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator((g + g.conj().T) / 2.0, _check_dims(dims, dim))


def random_product_pure(dims, seed=0):
    """A product pure state on the given factors; returns (operator, factors)."""
    rng = as_rng(seed)
    factors = [random_pure(d, rng) for d in dims]
    op = tensor_all([f.projection for f in factors])
    return op, factors


def spanning_states(dim: int) -> list[PureState]:
    """Deterministic pure-state family spanning the Hermitian space:
    basis projections, then real superpositions (e_k + e_l)/sqrt(2), then
    complex ones (e_k + i e_l)/sqrt(2), pairs in lexicographic order."""
    out = [basis_state(dim, k) for k in range(dim)]
    for k in range(dim):
        for l in range(k + 1, dim):
            v = np.zeros(dim, dtype=np.complex128)
            v[k] = 1.0
            v[l] = 1.0
            out.append(pure_state(v))
    for k in range(dim):
        for l in range(k + 1, dim):
            v = np.zeros(dim, dtype=np.complex128)
            v[k] = 1.0
            v[l] = 1.0j
            out.append(pure_state(v))
    return out
