"""Classifying single-factor pure-state preservers.

Every real-linear map sending rank-1 projections to rank-1 projections is
either trace replacement or an isometric (possibly conjugate) conjugation;
anything else admits a concrete pure state whose image fails purity.

Run:  python demos/03_pure_preservers.py
"""

import numpy as np

from preservers import (
    HermitianOperator,
    apply,
    classify_pure_preserver,
    conjugation,
    eig_hermitian,
    from_action,
    mc_verify_pure,
    random_isometry,
    random_pure,
    trace_replacer,
)

print("== a trace replacer round trips ==")
op = trace_replacer(random_pure(4, seed=1), (3,), (4,))
c = classify_pure_preserver(op)
print("kind:", c.kind, "| reconstruction residual:", f"{c.residual:.2e}")

print("\n== an embedding conjugation round trips, flag included ==")
iso = random_isometry(5, 3, seed=2, flag="conjugate")
c = classify_pure_preserver(conjugation(iso))
print("kind:", c.kind, "| flag:", c.isometry.flag)
v = c.isometry.matrix
print("recovered matrix is certified isometric:",
      np.linalg.norm(v.conj().T @ v - np.eye(3)) < 1e-8)

print("\n== the transpose is the conjugate-flag identity ==")
transpose = from_action((2,), (2,), lambda a: HermitianOperator(a.matrix.T, (2,)))
c = classify_pure_preserver(transpose)
print("kind:", c.kind, "| flag:", c.isometry.flag)

print("\n== the symmetrizer A -> (A + A^t)/2 is not a preserver ==")
sym = from_action((2,), (2,),
                  lambda a: HermitianOperator((a.matrix + a.matrix.T) / 2, (2,)))
c = classify_pure_preserver(sym)
print("kind:", c.kind)
print("witness projection (the +1 eigenstate of sigma_y):")
print(np.round(c.witness.projection.matrix, 3))
img = apply(sym, c.witness.projection.with_dims((2,)))
w, _ = eig_hermitian(img)
print("its image has spectrum", np.round(w, 6), "- not a pure state")

print("\n== Monte-Carlo cross-check, independent of the classifier ==")
print("conjugation passes 1000 samples:",
      mc_verify_pure(conjugation(random_isometry(4, 2, seed=3)), 1000, seed=0).passed)
res = mc_verify_pure(sym, 1000, seed=0)
print("symmetrizer fails after", res.samples, "samples")
