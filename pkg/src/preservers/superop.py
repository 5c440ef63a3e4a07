"""Real-linear maps on Hermitian operator spaces.

A map is stored as its real coefficient matrix in the orthonormal Hermitian
basis of the full input/output spaces (not as a Choi matrix: the maps handled
here are only real-linear, e.g. they may involve transposes, and the real
representation covers every canonical form uniformly; a Choi export exists
for interchange).
"""

from dataclasses import dataclass

import numpy as np

from . import basis
from .errors import ContractError, StructureError
from .linalg import (
    EPS_ISOMETRY,
    HermitianOperator,
    PureState,
    as_rng,
    partial_trace,
    partial_transpose,
    permute_factors,
    spanning_states,
    swap_theta,
    tensor,
    trace_norm,
)

LINEAR = "linear"
CONJUGATE = "conjugate"


def _dims_tuple(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise StructureError(f"invalid factor dimension list {dims}")
    return dims


@dataclass(frozen=True)
class SuperOperator:
    """Real-linear map between Hermitian spaces, in basis coordinates."""

    in_dims: tuple[int, ...]
    out_dims: tuple[int, ...]
    coeff: np.ndarray  # real, shape (D_out**2, D_in**2)

    @property
    def in_dim(self) -> int:
        return int(np.prod(self.in_dims))

    @property
    def out_dim(self) -> int:
        return int(np.prod(self.out_dims))


def make_superop(in_dims, out_dims, coeff) -> SuperOperator:
    in_dims = _dims_tuple(in_dims)
    out_dims = _dims_tuple(out_dims)
    coeff = np.asarray(coeff, dtype=np.float64)
    din = int(np.prod(in_dims))
    dout = int(np.prod(out_dims))
    if coeff.shape != (dout * dout, din * din):
        raise StructureError(
            f"coefficient shape {coeff.shape} does not match dims "
            f"({dout * dout}, {din * din})"
        )
    if not np.all(np.isfinite(coeff)):
        raise StructureError("coefficient matrix contains non-finite entries")
    return SuperOperator(in_dims, out_dims, coeff)


def identity_superop(dims) -> SuperOperator:
    dims = _dims_tuple(dims)
    d = int(np.prod(dims))
    return SuperOperator(dims, dims, np.eye(d * d))


def apply(op: SuperOperator, a: HermitianOperator) -> HermitianOperator:
    if a.dim != op.in_dim:
        raise StructureError(f"operator dimension {a.dim} != map input dimension {op.in_dim}")
    w = op.coeff @ basis.coords(a.matrix)
    return HermitianOperator(basis.from_coords(w, op.out_dim), op.out_dims)


def from_action(in_dims, out_dims, action) -> SuperOperator:
    """Coordinatize a real-linear action by evaluating it on every basis element."""
    in_dims = _dims_tuple(in_dims)
    out_dims = _dims_tuple(out_dims)
    din = int(np.prod(in_dims))
    dout = int(np.prod(out_dims))
    coeff = np.empty((dout * dout, din * din), dtype=np.float64)
    for idx in range(din * din):
        b = HermitianOperator(basis.basis_element(din, idx), in_dims)
        out = action(b)
        if out.dim != dout:
            raise StructureError(
                f"action returned dimension {out.dim}, expected {dout}"
            )
        coeff[:, idx] = basis.coords(out.matrix)
    return SuperOperator(in_dims, out_dims, coeff)


def compose(outer: SuperOperator, inner: SuperOperator) -> SuperOperator:
    if inner.out_dim != outer.in_dim:
        raise StructureError("composition dimension mismatch")
    return SuperOperator(inner.in_dims, outer.out_dims, outer.coeff @ inner.coeff)


@dataclass(frozen=True)
class SuperopComparison:
    equal: bool
    max_dev: float
    witness_in: int   # basis index of the input element with the largest deviation
    witness_out: int  # basis index of the output coordinate deviating most

    def witness_label(self, d_in: int) -> str:
        return basis.basis_label(d_in, self.witness_in)


def superop_equal(a: SuperOperator, b: SuperOperator, tol: float = 1e-9) -> SuperopComparison:
    """Max-norm comparison of coefficient matrices (same basis, same dims)."""
    if a.in_dims != b.in_dims or a.out_dims != b.out_dims:
        raise StructureError("cannot compare maps with different factor dimensions")
    diff = np.abs(a.coeff - b.coeff)
    flat = int(np.argmax(diff))
    out_idx, in_idx = np.unravel_index(flat, diff.shape)
    max_dev = float(diff[out_idx, in_idx])
    return SuperopComparison(max_dev <= tol, max_dev, int(in_idx), int(out_idx))


# ---------------------------------------------------------------------------
# isometries

@dataclass(frozen=True)
class Isometry:
    """Matrix V with V+V = I plus a flag choosing A -> VAV+ or A -> V A^t V+.

    The conjugate flag encodes conjugate-linear conjugation: transposing the
    argument first is the matrix form of acting with a conjugate-linear
    isometry.
    """

    matrix: np.ndarray  # complex, (d_out, d_in)
    flag: str = LINEAR

    @property
    def d_in(self) -> int:
        return self.matrix.shape[1]

    @property
    def d_out(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_square(self) -> bool:
        return self.d_in == self.d_out


def isometry(matrix, flag: str = LINEAR, tol: float = EPS_ISOMETRY) -> Isometry:
    v = np.asarray(matrix, dtype=np.complex128)
    if v.ndim == 1:
        v = v.reshape(-1, 1)
    if flag not in (LINEAR, CONJUGATE):
        raise StructureError(f"unknown conjugation flag {flag!r}")
    dev = float(np.linalg.norm(v.conj().T @ v - np.eye(v.shape[1])))
    if dev > tol:
        raise StructureError(f"matrix is not an isometry: ||V+V - I||_F = {dev:.3e}")
    return Isometry(v, flag)


def conjugate_operator(iso: Isometry, a: np.ndarray) -> np.ndarray:
    """Apply A -> VAV+ (linear flag) or A -> V A^t V+ (conjugate flag)."""
    x = a.T if iso.flag == CONJUGATE else a
    return iso.matrix @ x @ iso.matrix.conj().T


def random_unitary(d: int, seed=0) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR."""
    rng = as_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    ph = np.diag(r).copy()
    ph /= np.abs(ph)
    return q * ph


def random_isometry(d_out: int, d_in: int, seed=0, flag: str = LINEAR) -> Isometry:
    if d_in > d_out:
        raise StructureError(f"no isometry from dimension {d_in} into {d_out}")
    u = random_unitary(d_out, seed)
    return isometry(u[:, :d_in], flag)


# ---------------------------------------------------------------------------
# elementary constructors

def trace_replacer(r: PureState, in_dims, out_dims=None) -> SuperOperator:
    """The map A -> Tr(A) R for a fixed pure state R."""
    in_dims = _dims_tuple(in_dims)
    out_dims = _dims_tuple(out_dims) if out_dims is not None else (r.dim,)
    if int(np.prod(out_dims)) != r.dim:
        raise StructureError("output dims do not match the replacement state")
    proj = r.projection.matrix

    def action(a: HermitianOperator) -> HermitianOperator:
        return HermitianOperator(a.trace() * proj, out_dims)

    return from_action(in_dims, out_dims, action)


def conjugation(u: Isometry, in_dims=None, out_dims=None) -> SuperOperator:
    """The map A -> VAV+ (or V A^t V+ under the conjugate flag)."""
    in_dims = _dims_tuple(in_dims) if in_dims is not None else (u.d_in,)
    out_dims = _dims_tuple(out_dims) if out_dims is not None else (u.d_out,)
    if int(np.prod(in_dims)) != u.d_in or int(np.prod(out_dims)) != u.d_out:
        raise StructureError("isometry shape does not match the requested dims")

    def action(a: HermitianOperator) -> HermitianOperator:
        return HermitianOperator(conjugate_operator(u, a.matrix), out_dims)

    return from_action(in_dims, out_dims, action)


# ---------------------------------------------------------------------------
# canonical bipartite forms

@dataclass(frozen=True)
class SepForm:
    """Parameter bundle for the seven constructive bipartite canonical forms.

    tag 1: constant product replacement (r1, r2)
    tag 2: first-factor conjugation u1 with second factor replaced by r2
    tag 3: second-factor conjugation u2 with first factor replaced by r1
    tag 4: second factor carried to the first slot by u1, second slot r2
    tag 5: first factor carried to the second slot by u2, first slot r1
    tag 6: factorwise conjugation (u1, u2)
    tag 7: swap followed by factorwise conjugation (u1, u2)

    Tags 8/9 name the replace-one-side patterns whose existence is an open
    question; they carry no constructor and are only ever reported from
    sampled classification data.
    """

    tag: int
    r1: PureState | None = None
    r2: PureState | None = None
    u1: Isometry | None = None
    u2: Isometry | None = None


def _require(cond: bool, msg: str):
    if not cond:
        raise StructureError(msg)


def _pt_flagged(a: HermitianOperator, isos) -> HermitianOperator:
    """Partial-transpose every factor whose isometry carries the conjugate flag."""
    out = a
    for i, iso in enumerate(isos):
        if iso.flag == CONJUGATE:
            out = partial_transpose(out, i + 1)
    return out


def _kron_conj(a: HermitianOperator, isos, out_dims) -> HermitianOperator:
    big = isos[0].matrix
    for iso in isos[1:]:
        big = np.kron(big, iso.matrix)
    return HermitianOperator(big @ a.matrix @ big.conj().T, out_dims)


def canonical_sep(form: SepForm, dims) -> SuperOperator:
    """Build the superoperator of a tag 1-7 canonical form on input dims (m, n)."""
    m, n = _dims_tuple(dims)
    in_dims = (m, n)
    t = form.tag
    if t in (8, 9):
        raise StructureError(
            f"form {t} has no constructor: whether such maps exist is an open "
            "question; only pattern detection is supported"
        )
    if t == 1:
        _require(form.r1 is not None and form.r2 is not None, "form 1 needs r1 and r2")
        out_dims = (form.r1.dim, form.r2.dim)
        target = tensor(form.r1.projection, form.r2.projection)

        def action(a):
            return HermitianOperator(a.trace() * target.matrix, out_dims)

    elif t in (2, 4):
        _require(form.u1 is not None and form.r2 is not None, f"form {t} needs u1 and r2")
        u1, r2 = form.u1, form.r2
        traced, kept = (2, m) if t == 2 else (1, n)
        _require(u1.d_in == kept, f"form {t} isometry input must be {kept}, got {u1.d_in}")
        out_dims = (u1.d_out, r2.dim)

        def action(a):
            x = partial_trace(a, traced)
            return tensor(
                HermitianOperator(conjugate_operator(u1, x.matrix), None),
                r2.projection,
            ).with_dims(out_dims)

    elif t in (3, 5):
        _require(form.u2 is not None and form.r1 is not None, f"form {t} needs r1 and u2")
        u2, r1 = form.u2, form.r1
        kept = n if t == 3 else m
        traced_out = 1 if t == 3 else 2
        _require(u2.d_in == kept, f"form {t} isometry input must be {kept}, got {u2.d_in}")
        out_dims = (r1.dim, u2.d_out)

        def action(a):
            x = partial_trace(a, traced_out)
            return tensor(
                r1.projection,
                HermitianOperator(conjugate_operator(u2, x.matrix), None),
            ).with_dims(out_dims)

    elif t in (6, 7):
        _require(form.u1 is not None and form.u2 is not None, f"form {t} needs u1 and u2")
        u1, u2 = form.u1, form.u2
        want = (m, n) if t == 6 else (n, m)
        _require(
            (u1.d_in, u2.d_in) == want,
            f"form {t} isometry inputs must be {want}, got {(u1.d_in, u2.d_in)}",
        )
        out_dims = (u1.d_out, u2.d_out)

        def action(a):
            x = swap_theta(a) if t == 7 else a
            x = _pt_flagged(x, (u1, u2))
            return _kron_conj(x, (u1, u2), out_dims)

    else:
        raise StructureError(f"unknown form tag {form.tag}")

    return from_action(in_dims, out_dims, action)


# ---------------------------------------------------------------------------
# canonical multipartite form

@dataclass(frozen=True)
class MultiForm:
    """Factor permutation plus per-slot isometries with independent flags.

    Output slot j carries input factor perm[j-1] through isometries[j-1];
    the isometry shapes must satisfy dim_in[perm[j-1]] <= dim_out[j].
    """

    perm: tuple[int, ...]
    isometries: tuple[Isometry, ...]


def canonical_multi(form: MultiForm, dims) -> SuperOperator:
    dims = _dims_tuple(dims)
    n = len(dims)
    perm = tuple(int(p) for p in form.perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise StructureError(f"{perm} is not a permutation of 1..{n}")
    isos = tuple(form.isometries)
    _require(len(isos) == n, f"need {n} isometries, got {len(isos)}")
    for j, iso in enumerate(isos):
        src = dims[perm[j] - 1]
        _require(
            iso.d_in == src,
            f"slot {j + 1} isometry input {iso.d_in} != carried factor dimension {src}",
        )
        _require(
            iso.d_in <= iso.d_out,
            f"slot {j + 1} violates the dimension law dim_in <= dim_out",
        )
    out_dims = tuple(iso.d_out for iso in isos)

    def action(a):
        x = permute_factors(a, perm)
        x = _pt_flagged(x, isos)
        return _kron_conj(x, isos, out_dims)

    return from_action(dims, out_dims, action)


def inverse_isometry(u: Isometry) -> Isometry:
    """Inverse of a square (unitary) conjugation; the flag is preserved."""
    _require(u.is_square, "only square isometries are invertible")
    mat = u.matrix.T if u.flag == CONJUGATE else u.matrix.conj().T
    return Isometry(mat, u.flag)


def inverse_sep_form(form: SepForm) -> SepForm:
    """Inverse of a tag 6/7 form with square isometries, again tag 6/7."""
    if form.tag in (6, 7):
        _require(form.u1 is not None and form.u2 is not None, "form lacks isometries")
        _require(form.u1.is_square and form.u2.is_square, "inverse needs unitaries")
    if form.tag == 6:
        return SepForm(6, u1=inverse_isometry(form.u1), u2=inverse_isometry(form.u2))
    if form.tag == 7:
        return SepForm(7, u1=inverse_isometry(form.u2), u2=inverse_isometry(form.u1))
    raise ContractError(f"form {form.tag} is not invertible on product pure states")


# ---------------------------------------------------------------------------
# affine extension

def affine_to_linear(state_action, dim: int, tol: float = 1e-8, seed: int = 7) -> SuperOperator:
    """Extend an affine map on density matrices to a real-linear superoperator.

    The extension is solved from the action on a spanning family of pure
    states and then cross-checked on 20 random states; a deviation above
    ``tol`` means the callable was not affine and raises ContractError.
    """
    states = spanning_states(dim)
    cols_in = np.column_stack([basis.coords(s.projection.matrix) for s in states])
    outs = []
    out_dim = None
    for s in states:
        img = np.asarray(state_action(s.projection.matrix), dtype=np.complex128)
        if out_dim is None:
            out_dim = img.shape[0]
        outs.append(basis.coords(img))
    cols_out = np.column_stack(outs)
    coeff = cols_out @ np.linalg.inv(cols_in)
    op = SuperOperator((dim,), (out_dim,), coeff)

    rng = as_rng(seed)
    for _ in range(20):
        w = rng.dirichlet(np.ones(dim))
        u = random_unitary(dim, rng)
        rho = HermitianOperator(u @ np.diag(w).astype(np.complex128) @ u.conj().T, (dim,))
        direct = np.asarray(state_action(rho.matrix), dtype=np.complex128)
        lifted = apply(op, rho).matrix
        if np.max(np.abs(direct - lifted)) > tol:
            raise ContractError(
                "state action is not affine: linear extension disagrees with a "
                f"direct evaluation by {np.max(np.abs(direct - lifted)):.3e}"
            )
    return op


# ---------------------------------------------------------------------------
# interchange

def to_choi(op: SuperOperator) -> np.ndarray:
    """Choi matrix of the complex-linear extension, sum_ij Phi(E_ij) (x) E_ij.

    Interchange only; the real basis representation remains the source of
    truth (conjugate-linear content is not faithfully complex-linear).
    """
    din, dout = op.in_dim, op.out_dim
    j = np.zeros((dout * din, dout * din), dtype=np.complex128)

    def image_of_unit(i, k):
        # E_ik expressed through the Hermitian basis, with i as a formal scalar
        if i == k:
            e = np.zeros(din * din)
            e[i] = 1.0
            return basis.from_coords(op.coeff @ e, dout)
        a, b = (i, k) if i < k else (k, i)
        iu, ju = np.triu_indices(din, 1)
        pair = int(np.flatnonzero((iu == a) & (ju == b))[0])
        ex = np.zeros(din * din)
        ex[din + 2 * pair] = 1.0
        ey = np.zeros(din * din)
        ey[din + 2 * pair + 1] = 1.0
        img_x = basis.from_coords(op.coeff @ ex, dout)
        img_y = basis.from_coords(op.coeff @ ey, dout)
        sign = -1.0 if i < k else 1.0
        return (img_x + sign * 1j * img_y) / np.sqrt(2.0)

    for i in range(din):
        for k in range(din):
            unit = np.zeros((din, din), dtype=np.complex128)
            unit[i, k] = 1.0
            j += np.kron(image_of_unit(i, k), unit)
    return j


def trace_norm_contraction_defect(op: SuperOperator, a: HermitianOperator) -> float:
    """How much  ||Phi(A)||_Tr <= ||A||_Tr  is violated (0 when it holds)."""
    return max(0.0, trace_norm(apply(op, a)) - trace_norm(a))
