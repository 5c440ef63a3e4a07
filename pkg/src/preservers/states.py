"""Separable states as explicit convex combinations of product pure states,
plus the PPT entanglement falsifier and preserver-based filtering.

The internal representation keeps every term as a weight with one pure state
per factor; mixed factors are pre-decomposed spectrally, so there is a single
canonical form.  PPT is shipped only to falsify separability (a negative
partial transpose certifies entanglement; a positive one proves nothing).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, StructureError
from .linalg import (
    PPT_TOL,
    HermitianOperator,
    PureState,
    as_rng,
    eig_hermitian,
    herm,
    partial_transpose,
    pure_state,
    random_pure,
    tensor_all,
)
from .sep_analysis import FORM, SepClassification
from .superop import CONJUGATE, Isometry


@dataclass(frozen=True)
class SeparableState:
    """Convex combination of product pure states with a cached density."""

    weights: tuple[float, ...]
    terms: tuple[tuple[PureState, ...], ...]
    density: HermitianOperator

    @property
    def dims(self) -> tuple[int, ...]:
        return self.density.dims

    @property
    def k_terms(self) -> int:
        return len(self.weights)


def separable_state(weights, terms) -> SeparableState:
    """Validate weights and assemble the density matrix."""
    weights = tuple(float(w) for w in weights)
    terms = tuple(tuple(t) for t in terms)
    if len(weights) != len(terms) or not weights:
        raise StructureError("need one factor list per weight")
    if any(w <= 0 for w in weights):
        raise StructureError("weights must be positive")
    if abs(sum(weights) - 1.0) > 1e-12:
        raise StructureError(f"weights sum to {sum(weights)!r}, not 1")
    dims = tuple(f.dim for f in terms[0])
    for t in terms:
        if tuple(f.dim for f in t) != dims:
            raise StructureError("all terms must share the same factor dimensions")
    d = int(np.prod(dims))
    rho = np.zeros((d, d), dtype=np.complex128)
    for w, t in zip(weights, terms):
        rho += w * tensor_all([f.projection for f in t]).matrix
    return SeparableState(weights, terms, HermitianOperator(rho, dims))


def separable_from_mixed(weights, factor_matrices, tol: float = 1e-12) -> SeparableState:
    """Decompose terms with mixed factors into pure terms spectrally.

    ``factor_matrices`` holds, per term, one positive unit-trace matrix per
    factor; each is eigendecomposed and the eigen-branches multiply out into
    pure product terms (eigenvalues below ``tol`` are dropped).
    """
    out_w, out_t = [], []
    for w, mats in zip(weights, factor_matrices):
        branches = [(float(w), [])]
        for mat in mats:
            op = herm(mat)
            vals, vecs = eig_hermitian(op)
            new_branches = []
            for bw, states in branches:
                for i, lam in enumerate(vals):
                    if lam < -1e-10:
                        raise StructureError("factor matrix is not positive semidefinite")
                    if lam <= tol:
                        continue
                    new_branches.append((bw * float(lam), states + [pure_state(vecs[:, i])]))
            branches = new_branches
        for bw, states in branches:
            out_w.append(bw)
            out_t.append(tuple(states))
    total = sum(out_w)
    return separable_state([w / total for w in out_w], out_t)


def sample_separable(dims, k_terms: int, seed=0) -> SeparableState:
    """Dirichlet weights over random product pure terms; deterministic per seed."""
    if k_terms < 1:
        raise StructureError("need at least one term")
    rng = as_rng(seed)
    weights = rng.dirichlet(np.ones(k_terms))
    terms = [tuple(random_pure(d, rng) for d in dims) for _ in range(k_terms)]
    return separable_state(weights, terms)


@dataclass(frozen=True)
class PptResult:
    positive: bool
    min_eigenvalue: float


def ppt_check(rho: HermitianOperator, tol: float = PPT_TOL) -> PptResult:
    """Peres test: a negative eigenvalue of the first-factor partial transpose
    certifies entanglement; positivity is inconclusive."""
    dims = rho.factor_dims()
    if len(dims) != 2:
        raise StructureError("the PPT test expects exactly two factors")
    w, _ = eig_hermitian(partial_transpose(rho, 1))
    min_eig = float(w[-1])
    return PptResult(min_eig >= -tol, min_eig)


def _map_factor(iso: Isometry, state: PureState) -> PureState:
    """Image factor of a pure state under an isometric conjugation, on the
    vector level (conjugate flag conjugates the representative)."""
    vec = state.vector.conj() if iso.flag == CONJUGATE else state.vector
    return pure_state(iso.matrix @ vec)


def filter_apply(classification: SepClassification, state: SeparableState) -> SeparableState:
    """Push a separable state through a classified tag 1-7 preserver termwise.

    Each product pure term maps to a product pure term with its weight
    unchanged, so the output is separable by construction; the result's
    density agrees with applying the map to the input density.
    """
    if classification.kind != FORM:
        raise ContractError(
            "filtering requires a constructive form 1-7 classification, "
            f"got {classification.kind!r}"
        )
    form = classification.form
    tag = form.tag

    def map_term(factors):
        p, q = factors
        if tag == 1:
            return (form.r1, form.r2)
        if tag == 2:
            return (_map_factor(form.u1, p), form.r2)
        if tag == 3:
            return (form.r1, _map_factor(form.u2, q))
        if tag == 4:
            return (_map_factor(form.u1, q), form.r2)
        if tag == 5:
            return (form.r1, _map_factor(form.u2, p))
        if tag == 6:
            return (_map_factor(form.u1, p), _map_factor(form.u2, q))
        if tag == 7:
            return (_map_factor(form.u1, q), _map_factor(form.u2, p))
        raise ContractError(f"form {tag} is not filterable")

    if len(state.dims) != 2:
        raise StructureError("bipartite filters expect two-factor states")
    return separable_state(state.weights, [map_term(t) for t in state.terms])


def convex_mix(a: SeparableState, b: SeparableState, t: float) -> SeparableState:
    """Convex combination t*a + (1-t)*b as a separable state."""
    if not 0.0 < t < 1.0:
        raise StructureError("mixing parameter must lie strictly between 0 and 1")
    weights = [t * w for w in a.weights] + [(1.0 - t) * w for w in b.weights]
    return separable_state(weights, list(a.terms) + list(b.terms))
