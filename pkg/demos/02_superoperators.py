"""Real-linear maps on Hermitian space: the coefficient representation,
canonical constructors, and the JSON interchange format.

Run:  python demos/02_superoperators.py
"""

import numpy as np

from preservers import (
    HermitianOperator,
    SepForm,
    apply,
    canonical_sep,
    conjugation,
    from_action,
    isometry,
    random_isometry,
    random_pure,
    superop_equal,
    tensor,
    to_choi,
    trace_replacer,
)
from preservers.serialize import dumps, superop_from_json, superop_to_json

print("== the transpose map in the Hermitian basis ==")
transpose = from_action((2,), (2,), lambda a: HermitianOperator(a.matrix.T, (2,)))
print("coefficient matrix (diagonal +1,+1,+1,-1; only the antisymmetric")
print("basis element flips sign):")
print(transpose.coeff.astype(int))

print("\n== transpose equals conjugate-flag conjugation by the identity ==")
conj_t = conjugation(isometry(np.eye(2), "conjugate"))
print("superop_equal:", superop_equal(transpose, conj_t).equal)

print("\n== trace replacement ==")
r = random_pure(3, seed=4)
tr = trace_replacer(r, (3,), (3,))
x = random_pure(3, seed=5).projection.with_dims((3,))
print("any pure state maps to R:",
      np.allclose(apply(tr, x).matrix, r.projection.matrix))

print("\n== a canonical bipartite form and its action on products ==")
form = SepForm(2, u1=random_isometry(2, 2, seed=6), r2=random_pure(3, seed=7))
op = canonical_sep(form, (2, 3))
p = random_pure(2, seed=8)
q = random_pure(3, seed=9)
img = apply(op, tensor(p.projection, q.projection))
expected = tensor(
    HermitianOperator(form.u1.matrix @ p.projection.matrix @ form.u1.matrix.conj().T),
    form.r2.projection,
)
print("form 2 sends P (x) Q to U1 P U1+ (x) R2:",
      np.allclose(img.matrix, expected.matrix))

print("\n== JSON round trip ==")
text = dumps(superop_to_json(op))
print("serialized bytes:", len(text))
reloaded = superop_from_json(__import__("json").loads(text))
print("reload equality:", superop_equal(op, reloaded, 1e-12).equal)

print("\n== Choi export (interchange only) ==")
choi = to_choi(conjugation(isometry(np.eye(2))))
print("Choi matrix of the identity map has rank",
      np.linalg.matrix_rank(choi), "and trace", round(np.trace(choi).real, 6))
