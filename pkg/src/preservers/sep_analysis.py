"""Classification of separable-pure-state preservers.

Bipartite maps are decided through their slice maps: freezing one factor of
the input product and partial-tracing one factor of the output yields
single-factor maps that are themselves pure-state preservers, and the pair of
slice behaviors (trace replacement vs conjugation, per row and per column)
lands in a 3x3 grid whose admissible cells select one of nine canonical
forms.  Seven of the forms are constructive and are verified by exact
reconstruction; the remaining two patterns are only ever reported together
with the sampled data that exhibits them, never as verified constructions.

Multipartite maps are decided by discovering the factor permutation from
which input slot moves which output slot, extracting one isometric
conjugation per slot, and verifying the rebuilt map coefficientwise.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ClassificationError, StructureError
from .linalg import (
    EPS_CLS,
    HermitianOperator,
    PureState,
    as_rng,
    basis_state,
    is_product_pure,
    partial_trace,
    pure_state,
    random_pure,
    reduce_to_factor,
    spanning_states,
    tensor,
    tensor_all,
    uniform_state,
)
from .pure_analysis import (
    CONJUGATION,
    NOT_PRESERVER,
    TRACE_REPLACER,
    PureClassification,
    classify_pure_preserver,
)
from .superop import (
    MultiForm,
    SepForm,
    SuperOperator,
    apply,
    canonical_multi,
    canonical_sep,
    conjugate_operator,
    from_action,
    superop_equal,
)

ROW_A, ROW_B, ROW_C = "a", "b", "c"
COL_A, COL_B, COL_C = "a′", "b′", "c′"

GRID_TO_TAG = {
    (ROW_A, COL_A): 1,
    (ROW_A, COL_B): 3,
    (ROW_A, COL_C): 4,
    (ROW_B, COL_A): 5,
    (ROW_C, COL_A): 2,
    (ROW_B, COL_C): 7,
    (ROW_C, COL_B): 6,
    (ROW_B, COL_B): 9,
    (ROW_C, COL_C): 8,
}

FORM = "form"
PATTERN89 = "pattern89"
INSUFFICIENT = "insufficient_richness"
MULTI_FORM = "multi_form"


def slice_phi(op: SuperOperator, a: HermitianOperator, b: HermitianOperator,
              which: int) -> HermitianOperator:
    """Slice maps of a bipartite map: which=1 keeps the first output factor of
    the image of a (x) b, which=2 keeps the second."""
    if which not in (1, 2):
        raise StructureError("slice index must be 1 or 2")
    img = apply(op, tensor(a, b))
    return partial_trace(img, 2 if which == 1 else 1)


def _slice_superop(op: SuperOperator, fixed: PureState, fixed_slot: int,
                   which: int) -> SuperOperator:
    """Coordinatize A -> phi_which(A, Q) (fixed_slot=2) or B -> phi_which(P, B)."""
    m, n = op.in_dims
    out_d = op.out_dims[which - 1]
    if fixed_slot == 2:
        q = fixed.projection
        return from_action((m,), (out_d,), lambda a: slice_phi(op, a, q, which))
    p = fixed.projection
    return from_action((n,), (out_d,), lambda b: slice_phi(op, p, b, which))


def _case_letter(c1: PureClassification, c2: PureClassification, primes: bool):
    """Map the pair of slice classifications to a grid letter, or None."""
    kinds = (c1.kind, c2.kind)
    if NOT_PRESERVER in kinds:
        return None
    table = {
        (TRACE_REPLACER, TRACE_REPLACER): COL_A if primes else ROW_A,
        (TRACE_REPLACER, CONJUGATION): COL_B if primes else ROW_B,
        (CONJUGATION, TRACE_REPLACER): COL_C if primes else ROW_C,
    }
    # simultaneous conjugation in both slices is excluded by the tensor-square
    # obstruction (see doubling_obstruction_check); treat it as no letter
    return table.get(kinds)


@dataclass(frozen=True)
class SliceProfile:
    row: str
    col: str
    row_phi1: PureClassification
    row_phi2: PureClassification
    col_phi1: PureClassification
    col_phi2: PureClassification


@dataclass(frozen=True)
class PatternSample:
    p: PureState
    q: PureState
    moving: PureState


@dataclass(frozen=True)
class Pattern89Data:
    tag: int
    fixed: PureState
    samples: tuple[PatternSample, ...]
    max_dev: float


@dataclass(frozen=True)
class SepClassification:
    kind: str  # "form" | "pattern89" | "not_preserver"
    form: SepForm | None = None
    grid: tuple[str, str] | None = None
    residual: float = 0.0
    witness: tuple[PureState, PureState] | None = None
    pattern: Pattern89Data | None = None

    @property
    def tag(self):
        if self.form is not None:
            return self.form.tag
        if self.pattern is not None:
            return self.pattern.tag
        return None

    @property
    def positive(self) -> bool:
        return self.kind == FORM


def find_product_witness(op: SuperOperator, tol: float, seed: int = 0,
                         random_tries: int = 1000):
    """First product pure state whose image is not product pure."""
    m, n = op.in_dims
    for p, q in itertools.product(spanning_states(m), spanning_states(n)):
        img = apply(op, tensor(p.projection, q.projection))
        if not is_product_pure(img, tol)[0]:
            return p, q
    rng = as_rng(seed)
    for _ in range(random_tries):
        p, q = random_pure(m, rng), random_pure(n, rng)
        img = apply(op, tensor(p.projection, q.projection))
        if not is_product_pure(img, tol)[0]:
            return p, q
    return None


def _sep_not_preserver(op: SuperOperator, tol: float, seed: int,
                       grid=None) -> SepClassification:
    pair = find_product_witness(op, tol, seed)
    if pair is None:
        raise ClassificationError(
            "map failed form verification but no product-pure violation was "
            f"found; classification is indeterminate at tol={tol:g}"
        )
    return SepClassification(NOT_PRESERVER, witness=pair, grid=grid)


def _extract_form(tag: int, prof: SliceProfile) -> SepForm:
    if tag == 1:
        return SepForm(1, r1=prof.row_phi1.replacement, r2=prof.row_phi2.replacement)
    if tag == 2:
        return SepForm(2, u1=prof.row_phi1.isometry, r2=prof.row_phi2.replacement)
    if tag == 3:
        return SepForm(3, r1=prof.row_phi1.replacement, u2=prof.col_phi2.isometry)
    if tag == 4:
        return SepForm(4, u1=prof.col_phi1.isometry, r2=prof.row_phi2.replacement)
    if tag == 5:
        return SepForm(5, r1=prof.row_phi1.replacement, u2=prof.row_phi2.isometry)
    if tag == 6:
        return SepForm(6, u1=prof.row_phi1.isometry, u2=prof.col_phi2.isometry)
    if tag == 7:
        return SepForm(7, u1=prof.col_phi1.isometry, u2=prof.row_phi2.isometry)
    raise StructureError(f"no constructive extraction for tag {tag}")


def _pattern_sample(op: SuperOperator, tag: int, fixed: PureState,
                    p: PureState, q: PureState, tol: float, prediction=None):
    """Check one sampled product input against a replace-one-side pattern.

    The image must be product pure, its fixed slot must match ``fixed``, and
    the moving slot must match ``prediction`` when one is supplied.  Returns
    (sample, deviation) or (None, deviation of the first failed check).
    """
    moving_slot = 2 if tag == 9 else 1
    fixed_slot = 1 if tag == 9 else 2
    img = apply(op, tensor(p.projection, q.projection))
    ok, factors = is_product_pure(img, tol)
    if not ok:
        return None, np.inf
    dev = float(np.max(np.abs(
        factors[fixed_slot - 1].projection.matrix - fixed.projection.matrix)))
    if dev > 100 * tol:
        return None, dev
    moving = factors[moving_slot - 1]
    if prediction is not None:
        pdev = float(np.max(np.abs(moving.projection.matrix - prediction)))
        if pdev > 100 * tol:
            return None, pdev
        dev = max(dev, pdev)
    return PatternSample(p, q, moving), dev


def _probe_pattern89(op: SuperOperator, tag: int, fixed: PureState, tol: float,
                     seed: int, anchors: int = 3, per_anchor: int = 10,
                     extra_random: int = 140):
    """Sampled evidence for the replace-one-side patterns.

    For tag 9 the first output factor must equal ``fixed`` on every sampled
    product input while the second factor moves; anchored slice maps in both
    directions must classify as conjugations and predict the recorded moving
    factors.  Returns the recorded family or None when any check fails.
    """
    m, n = op.in_dims
    moving_slot = 2 if tag == 9 else 1
    rng = as_rng(seed)
    samples = []
    max_dev = 0.0
    for fixed_slot, anchor_dim, free_dim in ((1, m, n), (2, n, m)):
        for _ in range(anchors):
            anchor = random_pure(anchor_dim, rng)
            sl = _slice_superop(op, anchor, fixed_slot, moving_slot)
            cls = classify_pure_preserver(sl, tol, seed)
            if cls.kind != CONJUGATION:
                return None
            for _ in range(per_anchor):
                other = random_pure(free_dim, rng)
                pred = conjugate_operator(cls.isometry, other.projection.matrix)
                p, q = (anchor, other) if fixed_slot == 1 else (other, anchor)
                sample, dev = _pattern_sample(op, tag, fixed, p, q, tol, pred)
                if sample is None:
                    return None
                samples.append(sample)
                max_dev = max(max_dev, dev)
    for _ in range(extra_random):
        sample, dev = _pattern_sample(op, tag, fixed,
                                      random_pure(m, rng), random_pure(n, rng), tol)
        if sample is None:
            return None
        samples.append(sample)
        max_dev = max(max_dev, dev)
    return Pattern89Data(tag, fixed, tuple(samples), max_dev)


def classify_sep_preserver(op: SuperOperator, tol: float = EPS_CLS,
                           seed: int = 0) -> SepClassification:
    """Decide which of the nine bipartite canonical forms a map has.

    Anchored slice classifications give the grid cell; the cell is
    cross-checked at extra anchor states (slice behavior cannot change along
    the pure-state manifold), parameters are read off the slice
    classifications, and tags 1-7 are verified by exact coefficient
    comparison against the rebuilt canonical map.  Cells (b,b') and (c,c')
    are reported as sampled patterns; every other failure produces a product
    pure state whose image violates product purity.
    """
    if tol <= 0:
        raise StructureError("tolerance must be positive")
    if len(op.in_dims) != 2 or op.in_dims != op.out_dims:
        raise StructureError(
            "bipartite classification needs matching two-factor input/output dims"
        )
    m, n = op.in_dims
    q0 = basis_state(n, 0)
    p0 = basis_state(m, 0)

    row_phi1 = classify_pure_preserver(_slice_superop(op, q0, 2, 1), tol, seed)
    row_phi2 = classify_pure_preserver(_slice_superop(op, q0, 2, 2), tol, seed)
    row = _case_letter(row_phi1, row_phi2, primes=False)
    if row is None:
        return _sep_not_preserver(op, tol, seed)

    col_phi1 = classify_pure_preserver(_slice_superop(op, p0, 1, 1), tol, seed)
    col_phi2 = classify_pure_preserver(_slice_superop(op, p0, 1, 2), tol, seed)
    col = _case_letter(col_phi1, col_phi2, primes=True)
    if col is None:
        return _sep_not_preserver(op, tol, seed)

    grid = (row, col)
    prof = SliceProfile(row, col, row_phi1, row_phi2, col_phi1, col_phi2)

    # slice behavior must not depend on the anchor (constancy cross-check)
    extra_q = [q for q in (basis_state(n, 1) if n > 1 else None,
                           uniform_state(n) if n > 1 else None) if q is not None]
    for q in extra_q:
        c1 = classify_pure_preserver(_slice_superop(op, q, 2, 1), tol, seed)
        c2 = classify_pure_preserver(_slice_superop(op, q, 2, 2), tol, seed)
        if _case_letter(c1, c2, primes=False) != row:
            return _sep_not_preserver(op, tol, seed, grid)
    extra_p = [p for p in (basis_state(m, 1) if m > 1 else None,
                           uniform_state(m) if m > 1 else None) if p is not None]
    for p in extra_p:
        c1 = classify_pure_preserver(_slice_superop(op, p, 1, 1), tol, seed)
        c2 = classify_pure_preserver(_slice_superop(op, p, 1, 2), tol, seed)
        if _case_letter(c1, c2, primes=True) != col:
            return _sep_not_preserver(op, tol, seed, grid)

    tag = GRID_TO_TAG[grid]
    if tag in (8, 9):
        fixed = prof.row_phi1.replacement if tag == 9 else prof.row_phi2.replacement
        data = _probe_pattern89(op, tag, fixed, tol, seed)
        if data is None:
            return _sep_not_preserver(op, tol, seed, grid)
        return SepClassification(PATTERN89, grid=grid, pattern=data,
                                 residual=data.max_dev)

    form = _extract_form(tag, prof)
    candidate = canonical_sep(form, (m, n))
    if candidate.out_dims != op.out_dims:
        return _sep_not_preserver(op, tol, seed, grid)
    cmp = superop_equal(op, candidate, tol)
    if not cmp.equal:
        return _sep_not_preserver(op, tol, seed, grid)
    return SepClassification(FORM, form=form, grid=grid, residual=cmp.max_dev)


def check_both_directions(c: SepClassification, dims=None) -> bool:
    """Whether a classified map preserves product pure states in both
    directions: exactly the constructive tags 6/7 with square (hence unitary)
    isometries."""
    if c.kind != FORM or c.form.tag not in (6, 7):
        return False
    return c.form.u1.is_square and c.form.u2.is_square


def doubling_obstruction_check(m: int = 2) -> bool:
    """The tensor-square obstruction that empties the double-conjugation cell.

    Two different pure decompositions of the same operator (here of I_2,
    padded to dimension m) stay equal, yet their factor-squared sums differ
    by a Frobenius gap exceeding 0.5, so no map can conjugate both slices
    simultaneously.
    """
    if m < 2:
        raise StructureError("needs dimension at least 2")
    e0 = np.zeros(m)
    e1 = np.zeros(m)
    e0[0] = 1.0
    e1[1] = 1.0
    plus = (e0 + e1) / np.sqrt(2.0)
    minus = (e0 - e1) / np.sqrt(2.0)
    projs = [np.outer(v, v) for v in (e0, e1, plus, minus)]
    p1, p2, p3, p4 = projs
    equality = np.linalg.norm((p1 + p2) - (p3 + p4)) <= 1e-12
    gap = np.linalg.norm(
        (np.kron(p1, p1) + np.kron(p2, p2)) - (np.kron(p3, p3) + np.kron(p4, p4))
    )
    return bool(equality and gap > 0.5)


def product_span_rank(m: int, n: int) -> int:
    """Rank of the span of product pure states inside the Hermitian space;
    equals (m*n)**2, which is why coefficientwise verification is total."""
    from . import basis as hb

    rows = [
        hb.coords(tensor(p.projection, q.projection).matrix)
        for p in spanning_states(m)
        for q in spanning_states(n)
    ]
    return int(np.linalg.matrix_rank(np.array(rows)))


# ---------------------------------------------------------------------------
# multipartite

@dataclass(frozen=True)
class MultiClassification:
    kind: str  # "multi_form" | "not_preserver" | "insufficient_richness"
    form: MultiForm | None = None
    residual: float = 0.0
    witness: tuple[PureState, ...] | None = None
    detail: str = ""

    @property
    def positive(self) -> bool:
        return self.kind == MULTI_FORM


def _product_factors(op: SuperOperator, states, tol: float):
    img = apply(op, tensor_all([s.projection for s in states]).with_dims(op.in_dims))
    ok, factors = is_product_pure(img, tol)
    return factors if ok else None


def find_multi_product_witness(op: SuperOperator, tol: float, seed: int = 0,
                               det_cap: int = 729, random_tries: int = 1000):
    families = [spanning_states(d) for d in op.in_dims]
    for combo in itertools.islice(itertools.product(*families), det_cap):
        if _product_factors(op, combo, tol) is None:
            return tuple(combo)
    rng = as_rng(seed)
    for _ in range(random_tries):
        combo = tuple(random_pure(d, rng) for d in op.in_dims)
        if _product_factors(op, combo, tol) is None:
            return combo
    return None


def _multi_not_preserver(op: SuperOperator, tol: float, seed: int) -> MultiClassification:
    combo = find_multi_product_witness(op, tol, seed)
    if combo is None:
        raise ClassificationError(
            "map failed multipartite verification but no product-pure "
            f"violation was found; indeterminate at tol={tol:g}"
        )
    return MultiClassification(NOT_PRESERVER, witness=combo)


def classify_multi_preserver(op: SuperOperator, tol: float = EPS_CLS,
                             seed: int = 0) -> MultiClassification:
    """Classify an n-factor map as a factor permutation with per-slot
    isometric conjugations, when its image is rich enough to determine one.

    Steps: a richness probe (two product inputs whose image factors are
    linearly independent in every slot), permutation discovery by varying one
    input slot at a time, per-slot single-factor classification, and exact
    verification of the rebuilt map.
    """
    if tol <= 0:
        raise StructureError("tolerance must be positive")
    n = len(op.in_dims)
    if n < 2:
        raise StructureError("multipartite classification needs at least two factors")
    if op.in_dims != op.out_dims:
        raise StructureError("multipartite classification needs matching input/output dims")
    dims = op.in_dims
    if any(d == 1 for d in dims):
        return MultiClassification(
            INSUFFICIENT, detail="a dimension-1 factor admits no independent image pair"
        )

    rng = as_rng(seed)
    probe_pairs = [
        (tuple(basis_state(d, 0) for d in dims), tuple(uniform_state(d) for d in dims)),
        (tuple(basis_state(d, 0) for d in dims), tuple(basis_state(d, 1) for d in dims)),
    ]
    for _ in range(3):
        probe_pairs.append((
            tuple(random_pure(d, rng) for d in dims),
            tuple(random_pure(d, rng) for d in dims),
        ))
    rich = False
    for first, second in probe_pairs:
        f1 = _product_factors(op, first, tol)
        if f1 is None:
            return MultiClassification(NOT_PRESERVER, witness=first)
        f2 = _product_factors(op, second, tol)
        if f2 is None:
            return MultiClassification(NOT_PRESERVER, witness=second)
        if all(
            np.linalg.norm(a.projection.matrix - b.projection.matrix) > 1e-6
            for a, b in zip(f1, f2)
        ):
            rich = True
            break
    if not rich:
        return MultiClassification(
            INSUFFICIENT,
            detail="no probed input pair produced slot-wise independent image factors",
        )

    base = tuple(uniform_state(d) for d in dims)
    base_factors = _product_factors(op, base, tol)
    if base_factors is None:
        return MultiClassification(NOT_PRESERVER, witness=base)

    def variations(d: int):
        v = np.zeros(d, dtype=np.complex128)
        v[0], v[1] = 1.0, 1.0j
        return [basis_state(d, 0), basis_state(d, 1), pure_state(v)]

    slot_of_input = {}
    for k in range(n):
        moved = set()
        for var in variations(dims[k]):
            states = list(base)
            states[k] = var
            factors = _product_factors(op, tuple(states), tol)
            if factors is None:
                return MultiClassification(NOT_PRESERVER, witness=tuple(states))
            for j in range(n):
                if np.linalg.norm(
                    factors[j].projection.matrix - base_factors[j].projection.matrix
                ) > 1e-6:
                    moved.add(j)
        if len(moved) == 0:
            return MultiClassification(
                INSUFFICIENT,
                detail=f"varying input factor {k + 1} moves no output slot",
            )
        if len(moved) > 1:
            return _multi_not_preserver(op, tol, seed)
        slot_of_input[k] = moved.pop()
    if sorted(slot_of_input.values()) != list(range(n)):
        return _multi_not_preserver(op, tol, seed)

    # perm[j-1] = input factor carried by output slot j
    perm = tuple(
        next(k for k, j in slot_of_input.items() if j == slot) + 1
        for slot in range(n)
    )

    isometries = []
    for slot in range(n):
        k = perm[slot] - 1

        def slot_action(x: HermitianOperator, k=k, slot=slot):
            mats = [s.projection for s in base]
            mats[k] = x
            full = tensor_all(mats).with_dims(dims)
            return reduce_to_factor(apply(op, full), slot + 1)

        sub = from_action((dims[k],), (dims[slot],), slot_action)
        cls = classify_pure_preserver(sub, tol, seed)
        if cls.kind != CONJUGATION:
            return _multi_not_preserver(op, tol, seed)
        isometries.append(cls.isometry)

    form = MultiForm(perm, tuple(isometries))
    candidate = canonical_multi(form, dims)
    cmp = superop_equal(op, candidate, tol)
    if not cmp.equal:
        return _multi_not_preserver(op, tol, seed)
    return MultiClassification(MULTI_FORM, form=form, residual=cmp.max_dev)


@dataclass(frozen=True)
class MCProductResult:
    passed: bool
    samples: int
    witness: tuple[PureState, ...] | None = None


def mc_verify_product(op: SuperOperator, samples: int = 500, seed: int = 0,
                      tol: float = EPS_CLS) -> MCProductResult:
    """Monte-Carlo product-purity check on random product pure inputs."""
    rng = as_rng(seed)
    for i in range(samples):
        combo = tuple(random_pure(d, rng) for d in op.in_dims)
        if _product_factors(op, combo, tol) is None:
            return MCProductResult(False, i + 1, witness=combo)
    return MCProductResult(True, samples)
