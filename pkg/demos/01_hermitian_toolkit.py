"""Tour of the dense Hermitian kernel: tensor factors, partial operations,
spectra, trace norm and purity tests.

Run:  python demos/01_hermitian_toolkit.py
"""

import numpy as np

from preservers import (
    eig_hermitian,
    herm,
    is_product_pure,
    is_pure,
    partial_trace,
    partial_transpose,
    pure_state,
    random_pure,
    swap_theta,
    tensor,
    trace_norm,
)

print("== products and reductions ==")
p = random_pure(2, seed=1)
q = random_pure(3, seed=2)
prod = tensor(p.projection, q.projection)
print("product state on dims", prod.dims, "with trace", round(prod.trace(), 12))

back = partial_trace(prod, 2)
print("tracing out the second factor returns the first:",
      np.allclose(back.matrix, p.projection.matrix))

print("\n== an entangled state fails the product test ==")
bell = pure_state(np.array([1, 0, 0, 1]) / np.sqrt(2)).projection.with_dims((2, 2))
print("reduction of the Bell projection:")
print(np.round(partial_trace(bell, 1).matrix.real, 3))
print("is_pure:", is_pure(bell)[0], "| is_product_pure:", is_product_pure(bell)[0])

print("\n== partial transpose detects that entanglement ==")
pt = partial_transpose(bell, 1)
eigenvalues, _ = eig_hermitian(pt)
print("spectrum of the partially transposed Bell state:", np.round(eigenvalues, 6))
print("minimum eigenvalue -1/2 certifies entanglement")

print("\n== swap and trace norm ==")
swapped = swap_theta(prod)
print("swap exchanges the factors:",
      np.allclose(swapped.matrix, tensor(q.projection, p.projection).matrix))
a0 = herm(np.diag([1.0, -1.0]))
print("trace norm of diag(1,-1):", trace_norm(a0))

print("\n== purity tolerance semantics ==")
p0 = pure_state([1, 0]).projection
p1 = pure_state([0, 1]).projection
almost = herm(0.999 * p0.matrix + 0.001 * p1.matrix)
print("0.999 P + 0.001 P_perp pure at tol 1e-9:", is_pure(almost, 1e-9)[0])
print("0.999 P + 0.001 P_perp pure at tol 1e-2:", is_pure(almost, 1e-2)[0])
